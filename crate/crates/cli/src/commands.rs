use std::path::Path;

use serde_json::json;

use sdchan_core::capacity::{gelfand_pinsker_capacity, vanishing_capacity, zero_error_capacity};
use sdchan_core::channel::ChannelDoc;
use sdchan_core::oracles::{confusable_all_pairs_fl, gp_grid_oracle, grid_capacity, matching_flag, Finding, OracleReport, Relation};
use sdchan_core::positivity::{bl_positivity, positivity, Decision};
use sdchan_core::reductions::{average_states, extend_with_termination, joint_output_channel, shannon_strategy_channel};
use sdchan_core::simulation::{monte_carlo, trace, DisproverPlan, HanSatoPlan, Link, Protocol, Theorem5Plan};
use sdchan_core::{validate as validate_doc, Dmc, SdDmc, SiModel};

use crate::report::{exit, Done, Emitter, Failure};
use crate::{CapacityArgs, CheckArgs, OracleArgs, OracleKind, ProtocolKind, Quantity, ReduceArgs, ReduceTo, SimulateArgs, ValidateArgs};

type Outcome = Result<Done, Failure>;

/// Reads the channel file and records its digest.
fn read(em: &mut Emitter, path: &Path) -> Result<String, Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::new(exit::USAGE, "io", format!("cannot read {}: {e}", path.display())))?;
    em.digest = Some(crate::report::digest(&bytes));
    String::from_utf8(bytes).map_err(|e| Failure::new(exit::INVALID_CHANNEL, "parse", e.to_string()))
}

fn load(em: &mut Emitter, path: &Path) -> Result<SdDmc, Failure> {
    let text = read(em, path)?;
    Ok(sdchan_core::load_channel(&text)?)
}

pub fn validate(em: &mut Emitter, a: &ValidateArgs) -> Outcome {
    let doc = ChannelDoc::parse(&read(em, &a.path)?)?;
    let report = validate_doc(&doc);
    let code = if report.valid { exit::OK } else { exit::INVALID_CHANNEL };
    let summary = report.summary();
    Ok(Done::new(report, code, summary))
}

pub fn reduce(em: &mut Emitter, a: &ReduceArgs) -> Outcome {
    let ch = load(em, &a.path)?;
    let (dmc, letters) = match a.to {
        ReduceTo::Averaged => (average_states(&ch), None),
        ReduceTo::Strategy => {
            let (d, l) = shannon_strategy_channel(&ch, a.strategy_cap)?;
            (d, Some(l))
        }
        ReduceTo::JointOutput => (joint_output_channel(&ch), None),
        ReduceTo::Termination => (extend_with_termination(&average_states(&ch)), None),
    };
    let summary = format!("{} inputs, {} outputs", dmc.num_inputs(), dmc.num_outputs());
    let mut results = json!({ "channel": dmc.to_doc() });
    if let Some(l) = letters {
        results["letters"] = serde_json::to_value(l).expect("letters serialize");
    }
    Ok(Done::new(results, exit::OK, summary))
}

fn decision_code(d: Decision) -> u8 {
    match d {
        Decision::Positive | Decision::PositiveSufficient => exit::OK,
        Decision::Zero => exit::ZERO,
        Decision::Unknown => exit::UNKNOWN,
    }
}

pub fn check(em: &mut Emitter, a: &CheckArgs) -> Outcome {
    let ch = load(em, &a.path)?;
    let verdict = positivity(&ch, a.si, a.regime)?;
    let summary = format!("{:?} by {:?}", verdict.decision, verdict.rationale);
    Ok(Done::new(verdict.report(a.si, a.regime), decision_code(verdict.decision), summary))
}

pub fn capacity(em: &mut Emitter, a: &CapacityArgs) -> Outcome {
    let ch = load(em, &a.path)?;
    let opts = a.solver.options();
    let r = match a.quantity {
        Quantity::Vanishing => vanishing_capacity(&ch, a.si, &opts)?,
        Quantity::ZeroError => zero_error_capacity(&ch, a.si, a.regime, &opts)?,
    };
    let summary = format!("{:.9} bits ({})", r.value, r.method.name);
    Ok(Done::new(r.report(), exit::OK, summary))
}

pub fn simulate(em: &mut Emitter, a: &SimulateArgs) -> Outcome {
    let ch = load(em, &a.path)?;
    let (protocol, details) = match a.protocol {
        ProtocolKind::Disprover => {
            let plan = DisproverPlan::new(Link::for_model(&ch, a.si)?)?;
            let d = json!({
                "link": plan.link().name(),
                "x": plan.x,
                "x_prime": plan.x_prime,
                "y": plan.y,
                "success_probability": plan.success_probability(),
            });
            (Protocol::Disprover(plan), d)
        }
        ProtocolKind::Theorem5 => {
            let plan = Theorem5Plan::new(&ch, a.stop_rule.into())?;
            let d = json!({
                "x": plan.x,
                "x_prime": plan.x_prime,
                "y": plan.y,
                "states": plan.group,
                "stop_rule": plan.rule,
                "success_probability": plan.success_probability(),
            });
            (Protocol::Theorem5(plan), d)
        }
        ProtocolKind::HanSato => {
            let plan = HanSatoPlan::new(&ch, a.si, a.msg_bits, a.n1, a.seed, 0)?;
            let d = json!({
                "link": plan.bit_plan().link().name(),
                "phase1_rate": a.msg_bits as f64 / a.n1 as f64,
            });
            (Protocol::HanSato(plan), d)
        }
    };
    let stats = monte_carlo(&protocol, a.trials, a.seed)?;
    if let Some(path) = &a.trace {
        let t = trace(&protocol, a.seed, a.trace_index);
        std::fs::write(path, t.to_json_lines())
            .map_err(|e| Failure::new(exit::USAGE, "io", format!("cannot write {}: {e}", path.display())))?;
    }
    let code = if stats.errors > 0 { exit::PROTOCOL_ERRORS } else { exit::OK };
    let summary = format!(
        "{} trials, {} errors, mean tau {:.4}, rate {:.4} bits/use",
        stats.trials, stats.errors, stats.mean_tau, stats.rate_bits_per_use
    );
    Ok(Done::new(json!({ "stats": stats, "plan": details }), code, summary))
}

/// Lattice value of the vanishing-error capacity for models whose capacity is
/// a single mutual-information maximum (or a state-weighted sum of them).
fn grid_value(ch: &SdDmc, si: SiModel, resolution: usize, budget: u128, cap: usize) -> Result<(f64, u128), Failure> {
    let single = |d: &Dmc| grid_capacity(d, resolution, budget).map(|g| (g.value, g.points));
    Ok(match si {
        SiModel::NONE | SiModel::SC_NONE => single(&average_states(ch))?,
        SiModel::C_NONE => single(&shannon_strategy_channel(ch, cap)?.0)?,
        SiModel::SC_C | SiModel::NONE_C => single(&joint_output_channel(ch))?,
        SiModel::NC_NONE => {
            return Err(Failure::new(exit::USAGE, "invalid_argument", "use --kind gp-grid for (nc,-)"));
        }
        _ => {
            let mut total = (0.0, 0u128);
            for (s, &q) in ch.state_probs().iter().enumerate() {
                let (v, n) = single(&ch.state_channel(s)?)?;
                total = (total.0 + q * v, total.1 + n);
            }
            total
        }
    })
}

pub fn oracle(em: &mut Emitter, a: &OracleArgs) -> Outcome {
    let ch = load(em, &a.path)?;
    let instance = a.path.display().to_string();
    let opts = a.solver.options();
    let report = match a.kind {
        OracleKind::Confusability => {
            let flag = matching_flag(a.si).ok_or_else(|| {
                Failure::new(
                    exit::USAGE,
                    "invalid_argument",
                    format!("block confusability does not decide {} (encoder uses the state)", a.si),
                )
            })?;
            let c = confusable_all_pairs_fl(&ch, flag, a.n, a.budget)?;
            let module = bl_positivity(&ch, a.si)?.decision.is_positive();
            OracleReport::new(
                instance,
                format!("block_confusability(n={})", a.n),
                Finding::Decision(!c.all_confusable),
                Finding::Decision(module),
                Relation::Equal,
                0.0,
                c.search_space,
            )
        }
        OracleKind::Grid => {
            let res = a.resolution.unwrap_or(1000);
            let (value, points) = grid_value(&ch, a.si, res, a.budget, opts.strategy_cap)?;
            let module = vanishing_capacity(&ch, a.si, &opts)?.value;
            OracleReport::new(
                instance,
                format!("grid_capacity(resolution={res})"),
                Finding::Bits(value),
                Finding::Bits(module),
                Relation::Within,
                a.tolerance,
                points,
            )
        }
        OracleKind::GpGrid => {
            let res = a.resolution.unwrap_or(20);
            let g = gp_grid_oracle(&ch, res, a.u_size, a.budget)?;
            let module = gelfand_pinsker_capacity(&ch, &opts)?.value;
            OracleReport::new(
                instance,
                format!("gp_grid(resolution={res}, u_size={})", a.u_size),
                Finding::Bits(g.value),
                Finding::Bits(module),
                Relation::AtMost,
                a.tolerance,
                g.points,
            )
        }
    };
    let code = if report.agreement { exit::OK } else { exit::ORACLE_DISAGREES };
    let summary = format!("{:?} vs {:?}, agreement {}", report.oracle_value, report.module_value, report.agreement);
    Ok(Done::new(report, code, summary))
}
