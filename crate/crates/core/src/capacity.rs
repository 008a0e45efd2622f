//! Capacity computations in bits per channel use.
//!
//! * [`blahut_arimoto`] for a DMC, with certified upper and lower bounds.
//! * [`capacity_cond_iid`] for state known at the decoder, with or without a
//!   state-dependent input law.
//! * [`shannon_strategy_capacity`] for causal state at the encoder.
//! * [`gelfand_pinsker_capacity`] for non-causal state at the encoder. This
//!   one is a multistart alternating maximization and returns a lower bound.
//! * [`shannon_zef_fl_capacity`] for the zero-error fixed-length feedback
//!   capacity of a DMC, solved as a linear program.
//!
//! [`vanishing_capacity`] and [`zero_error_capacity`] dispatch on the
//! state-information model.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{Dmc, SdDmc};
use crate::error::{Error, Result};
use crate::info::mutual_information;
use crate::positivity::{check_dmc_fl_feedback, positivity, Decision, Verdict};
use crate::reductions::{
    average_states, joint_output_channel, shannon_strategy_channel, strategy_count, strategy_letters,
    StrategyLetter, DEFAULT_STRATEGY_CAP,
};
use crate::rng::{derive_seed, dirichlet_ones, domain, substream};
use crate::si::{Regime, SiModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for BaOptions {
    fn default() -> Self {
        BaOptions {
            tol: 1e-9,
            max_iter: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpOptions {
    /// Random starts per strategy set, in addition to the uniform start.
    pub restarts: usize,
    /// Stop a run once one sweep improves the objective by less than this.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Largest number of strategy sets enumerated before switching to sampling.
    pub enumeration_budget: usize,
}

impl Default for GpOptions {
    fn default() -> Self {
        GpOptions {
            restarts: 32,
            tol: 1e-7,
            max_iter: 5_000,
            seed: 0,
            enumeration_budget: 256,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub ba: BaOptions,
    pub gp: GpOptions,
    pub strategy_cap: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            ba: BaOptions::default(),
            gp: GpOptions::default(),
            strategy_cap: DEFAULT_STRATEGY_CAP,
        }
    }
}

/// The distribution(s) attaining a capacity value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Maximizer {
    /// No optimizer ran (the value is zero by a positivity verdict).
    None,
    Input { p: Vec<f64> },
    PerState { p_x_given_s: Vec<Vec<f64>> },
    Strategies { letters: Vec<StrategyLetter>, p: Vec<f64> },
    /// Auxiliary law `P(u|s)` and map `f(u, s) = f[u].input(s)`.
    Auxiliary { p_u_given_s: Vec<Vec<f64>>, f: Vec<StrategyLetter> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Method {
    pub name: String,
    pub iterations: usize,
}

impl Method {
    fn new(name: &str, iterations: usize) -> Self {
        Method {
            name: name.to_owned(),
            iterations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityResult {
    pub value: f64,
    pub maximizer: Maximizer,
    pub method: Method,
    /// Upper minus lower bound, when the method certifies one.
    pub certified_gap: Option<f64>,
    pub verdict: Option<Verdict>,
    pub warnings: Vec<String>,
}

/// JSON form of a capacity result as printed by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub value_bits: f64,
    pub method: String,
    pub iterations: usize,
    pub gap: Option<f64>,
    pub maximizer: Maximizer,
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl CapacityResult {
    fn zero(method: &str, verdict: Option<Verdict>) -> Self {
        CapacityResult {
            value: 0.0,
            maximizer: Maximizer::None,
            method: Method::new(method, 0),
            certified_gap: Some(0.0),
            verdict,
            warnings: Vec::new(),
        }
    }

    pub fn report(&self) -> CapacityReport {
        CapacityReport {
            value_bits: self.value,
            method: self.method.name.clone(),
            iterations: self.method.iterations,
            gap: self.certified_gap,
            maximizer: self.maximizer.clone(),
            verdict: self.verdict.clone(),
            warnings: self.warnings.clone(),
        }
    }
}

/// Lower and upper capacity bounds at one Blahut-Arimoto iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Blahut-Arimoto iteration state, started from the uniform input law.
///
/// With `D_x = D(W(.|x) || q)` and `q` the current output law, the bounds
/// are `log2 sum_x p(x) 2^D_x <= C <= max_x D_x`.
///
/// Each update compares the plain step with extrapolated steps
/// `p(x) ∝ p(x) 2^(mu D_x)` for a few multipliers `mu` around the last
/// successful one, and keeps the law with the largest mutual information. The plain step's information is
/// at least the old lower bound, and each law's lower bound is at least its
/// information, so the lower bound stays nondecreasing. Extrapolation fixes
/// the very slow progress of the plain iteration on nearly useless channels. A single step never shrinks an entry by more
/// than `2^-40`, so no input is lost to underflow.
#[derive(Debug, Clone)]
pub struct BlahutArimoto<'a> {
    channel: &'a Dmc,
    p: Vec<f64>,
    divergence: Vec<f64>,
    step: f64,
}

const MAX_STEP: f64 = 1e6;
const MAX_SHRINK_BITS: f64 = 40.0;

impl<'a> BlahutArimoto<'a> {
    pub fn new(channel: &'a Dmc) -> Self {
        let n = channel.num_inputs();
        BlahutArimoto {
            channel,
            p: vec![1.0 / n as f64; n],
            divergence: vec![0.0; n],
            step: 2.0,
        }
    }

    pub fn input(&self) -> &[f64] {
        &self.p
    }

    fn divergences(&self, p: &[f64], out: &mut [f64]) {
        let q = crate::info::output_distribution(p, self.channel);
        for (d, row) in out.iter_mut().zip(self.channel.rows()) {
            *d = crate::info::kl_divergence(row, &q);
        }
    }

    fn bounds_from(p: &[f64], divergence: &[f64]) -> BaBounds {
        let shift = divergence.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = p.iter().zip(divergence).map(|(&p, &d)| p * (d - shift).exp2()).sum();
        BaBounds {
            lower: shift + sum.log2(),
            upper: shift,
        }
    }

    /// Bounds at the current input law.
    pub fn bounds(&mut self) -> BaBounds {
        let mut d = std::mem::take(&mut self.divergence);
        self.divergences(&self.p, &mut d);
        self.divergence = d;
        Self::bounds_from(&self.p, &self.divergence)
    }

    fn reweighted(&self, mu: f64) -> Vec<f64> {
        let shift = self.divergence.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut p: Vec<f64> = self
            .p
            .iter()
            .zip(&self.divergence)
            .map(|(&p, &d)| p * (mu * (d - shift)).max(-MAX_SHRINK_BITS).exp2())
            .collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|v| *v /= total);
        p
    }

    /// Moves to the next input law using the divergences of the last
    /// [`bounds`](Self::bounds) call.
    pub fn update(&mut self) {
        let mut best = self.reweighted(1.0);
        let mut best_info = mutual_information(&best, self.channel);
        let mut best_mu = 1.0;
        for mu in [self.step / 8.0, self.step, self.step * 8.0] {
            if mu <= 1.0 {
                continue;
            }
            let p = self.reweighted(mu);
            let info = mutual_information(&p, self.channel);
            if info > best_info {
                (best, best_info, best_mu) = (p, info, mu);
            }
        }
        self.p = best;
        self.step = best_mu.clamp(2.0, MAX_STEP);
    }
}

/// Capacity of a DMC.
///
/// Iterates until the certified gap drops below `tol`; the value reported is
/// the lower bound at that point. On hitting `max_iter` the partial result is
/// returned inside [`Error::NoConvergence`].
pub fn blahut_arimoto(channel: &Dmc, opts: &BaOptions) -> Result<CapacityResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let mut ba = BlahutArimoto::new(channel);
    let mut iterations = 0;
    loop {
        let b = ba.bounds();
        iterations += 1;
        let gap = (b.upper - b.lower).max(0.0);
        let converged = gap < opts.tol;
        if converged || iterations >= opts.max_iter {
            let result = CapacityResult {
                value: b.lower.max(0.0),
                maximizer: Maximizer::Input { p: ba.input().to_vec() },
                method: Method::new("blahut-arimoto", iterations),
                certified_gap: Some(gap),
                verdict: None,
                warnings: Vec::new(),
            };
            return if converged {
                Ok(result)
            } else {
                Err(Error::NoConvergence(Box::new(result)))
            };
        }
        ba.update();
    }
}

/// `max I(X;Y|S)` with the input law shared across states (`per_state_input
/// = false`) or chosen per state (`true`).
///
/// The shared case equals the capacity of the joint-output channel, because
/// `X` is independent of `S` and so `I(X;Y,S) = I(X;Y|S)`.
pub fn capacity_cond_iid(channel: &SdDmc, per_state_input: bool, opts: &BaOptions) -> Result<CapacityResult> {
    if !per_state_input {
        let mut r = blahut_arimoto(&joint_output_channel(channel), opts)?;
        r.method.name = "blahut-arimoto/joint-output".to_owned();
        return Ok(r);
    }
    let mut value = 0.0;
    let mut gap = 0.0;
    let mut iterations = 0;
    let mut p_x_given_s = Vec::with_capacity(channel.num_states());
    let mut converged = true;
    for (s, &qs) in channel.state_probs().iter().enumerate() {
        let dmc = channel.state_channel(s)?;
        let r = match blahut_arimoto(&dmc, opts) {
            Ok(r) => r,
            Err(Error::NoConvergence(partial)) => {
                converged = false;
                *partial
            }
            Err(e) => return Err(e),
        };
        value += qs * r.value;
        gap += qs * r.certified_gap.unwrap_or(0.0);
        iterations += r.method.iterations;
        match r.maximizer {
            Maximizer::Input { p } => p_x_given_s.push(p),
            _ => unreachable!("blahut_arimoto returns an input law"),
        }
    }
    let result = CapacityResult {
        value,
        maximizer: Maximizer::PerState { p_x_given_s },
        method: Method::new("blahut-arimoto/per-state", iterations),
        certified_gap: Some(gap),
        verdict: None,
        warnings: Vec::new(),
    };
    if converged {
        Ok(result)
    } else {
        Err(Error::NoConvergence(Box::new(result)))
    }
}

/// Capacity with causal state at the encoder: Blahut-Arimoto over the
/// strategy channel.
pub fn shannon_strategy_capacity(channel: &SdDmc, opts: &BaOptions, strategy_cap: usize) -> Result<CapacityResult> {
    let (dmc, letters) = shannon_strategy_channel(channel, strategy_cap)?;
    let wrap = |mut r: CapacityResult| {
        r.method.name = "blahut-arimoto/shannon-strategy".to_owned();
        if let Maximizer::Input { p } = r.maximizer {
            r.maximizer = Maximizer::Strategies {
                letters: letters.clone(),
                p,
            };
        }
        r
    };
    match blahut_arimoto(&dmc, opts) {
        Ok(r) => Ok(wrap(r)),
        Err(Error::NoConvergence(partial)) => Err(Error::NoConvergence(Box::new(wrap(*partial)))),
        Err(e) => Err(e),
    }
}

/// One alternating-maximization run for a fixed auxiliary map.
///
/// Maximizes `I(U;Y) - I(U;S)` over `P(u|s)` through
/// `J(p, r) = sum p(s,u,y) log2 r(u|y) / p(u|s)`: for fixed `p` the best `r`
/// is the posterior `p(u|y)`, which makes `J` equal the objective; for fixed
/// `r` the best `p(u|s)` is proportional to `2^(sum_y W(y|f(u,s),s) log2 r(u|y))`.
/// Each sweep therefore never decreases the objective.
#[derive(Debug, Clone)]
pub struct AuxiliaryRun {
    pub value: f64,
    pub p_u_given_s: Vec<Vec<f64>>,
    pub iterations: usize,
}

pub fn gp_alternating(
    channel: &SdDmc,
    f: &[StrategyLetter],
    start: Vec<Vec<f64>>,
    tol: f64,
    max_iter: usize,
) -> AuxiliaryRun {
    let ns = channel.num_states();
    let ny = channel.num_outputs();
    let nu = f.len();
    let q_s = channel.state_probs();
    let mut p = start;
    let mut posterior = vec![0.0; nu * ny];
    let mut prev = f64::NEG_INFINITY;
    let mut iterations = 0;

    loop {
        // Joint p(u, y) and posterior r(u|y).
        posterior.iter_mut().for_each(|v| *v = 0.0);
        for s in 0..ns {
            for (u, letter) in f.iter().enumerate() {
                let w = q_s[s] * p[s][u];
                if w > 0.0 {
                    for (y, &wy) in channel.row(letter.input(s), s).iter().enumerate() {
                        posterior[u * ny + y] += w * wy;
                    }
                }
            }
        }
        for y in 0..ny {
            let col: f64 = (0..nu).map(|u| posterior[u * ny + y]).sum();
            if col > 0.0 {
                for u in 0..nu {
                    posterior[u * ny + y] /= col;
                }
            }
        }

        // Objective at the current p, and the log-weights for the next p.
        let mut value = 0.0;
        let mut next = vec![vec![0.0; nu]; ns];
        for s in 0..ns {
            for (u, letter) in f.iter().enumerate() {
                let row = channel.row(letter.input(s), s);
                let mut a = 0.0;
                for (y, &wy) in row.iter().enumerate() {
                    if wy > 0.0 {
                        let r = posterior[u * ny + y];
                        a += if r > 0.0 { wy * r.log2() } else { f64::NEG_INFINITY };
                    }
                }
                let pu = p[s][u];
                if pu > 0.0 {
                    value += q_s[s] * pu * (a - pu.log2());
                }
                next[s][u] = a;
            }
        }
        iterations += 1;

        if value - prev < tol || iterations >= max_iter {
            return AuxiliaryRun {
                value: value.max(prev),
                p_u_given_s: p,
                iterations,
            };
        }
        prev = value;

        for row in &mut next {
            let shift = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for a in row.iter_mut() {
                *a = if a.is_finite() { (*a - shift).exp2() } else { 0.0 };
            }
            let total: f64 = row.iter().sum();
            for a in row.iter_mut() {
                *a /= total;
            }
        }
        p = next;
    }
}

type AuxiliaryLaw = Vec<Vec<f64>>;

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Lexicographic successor of a strictly increasing `k`-subset of `0..n`.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn sample_combination(n: usize, k: usize, rng: &mut impl rand::Rng) -> Vec<usize> {
    let mut c = rand::seq::index::sample(rng, n, k).into_vec();
    c.sort_unstable();
    c
}

/// Capacity with non-causal state at the encoder, `max I(U;Y) - I(U;S)`.
///
/// `|U| = min(|X||S|, |X|^|S|)` and `f(u, .)` ranges over sets of distinct
/// strategy letters: two auxiliary letters sharing a strategy can be merged
/// without lowering the objective, and relabeling `U` changes nothing. When
/// the number of sets exceeds the budget a seeded random sample is used and
/// a warning is attached. One extra run starts from the Shannon-strategy
/// optimum with `U` independent of `S`, so the result never falls below the
/// causal-encoder capacity by more than the solver tolerances.
///
/// The value is a lower bound; no gap is certified.
pub fn gelfand_pinsker_capacity(channel: &SdDmc, opts: &SolverOptions) -> Result<CapacityResult> {
    let gp = &opts.gp;
    if !(gp.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", gp.tol)));
    }
    let ns = channel.num_states();
    let nx = channel.num_inputs();
    let all = strategy_letters(channel, opts.strategy_cap)?;
    let n_letters = all.len();
    let k = (nx * ns).min(n_letters);

    let total = binomial(n_letters, k);
    let mut warnings = Vec::new();
    let mut sets: Vec<Vec<usize>> = Vec::new();
    if total <= gp.enumeration_budget as u128 {
        let mut c: Vec<usize> = (0..k).collect();
        loop {
            sets.push(c.clone());
            if !next_combination(&mut c, n_letters) {
                break;
            }
        }
    } else {
        let mut rng = substream(gp.seed, domain::STRATEGY_SAMPLE, 0);
        sets.extend((0..gp.enumeration_budget).map(|_| sample_combination(n_letters, k, &mut rng)));
        warnings.push(format!(
            "strategy-set space of {total} exceeds budget {}; sampled {} sets",
            gp.enumeration_budget, gp.enumeration_budget
        ));
    }

    // Warm start from the causal-encoder optimum.
    let warm = match shannon_strategy_capacity(channel, &opts.ba, opts.strategy_cap) {
        Ok(r) => Some(r),
        Err(Error::NoConvergence(r)) => Some(*r),
        Err(e) => return Err(e),
    };
    // A strategy set and, for the warm start only, its starting law.
    let mut jobs: Vec<(Vec<usize>, Option<AuxiliaryLaw>)> = Vec::new();
    if let Some(CapacityResult {
        maximizer: Maximizer::Strategies { p, .. },
        ..
    }) = warm
    {
        let mut order: Vec<usize> = (0..n_letters).collect();
        order.sort_by(|&a, &b| p[b].total_cmp(&p[a]).then(a.cmp(&b)));
        let mut set: Vec<usize> = order[..k].to_vec();
        set.sort_unstable();
        let pu: Vec<f64> = set.iter().map(|&i| p[i]).collect();
        let total_mass: f64 = pu.iter().sum();
        let pu: Vec<f64> = pu.iter().map(|v| v / total_mass).collect();
        jobs.push((set, Some(vec![pu; ns])));
    }
    for set in &sets {
        jobs.push((set.clone(), None));
    }

    let restarts = gp.restarts;
    let runs: Vec<(usize, AuxiliaryRun)> = jobs
        .par_iter()
        .enumerate()
        .flat_map_iter(|(job, (set, warm_start))| {
            let f: Vec<StrategyLetter> = set.iter().map(|&i| all[i].clone()).collect();
            let starts: Vec<Vec<Vec<f64>>> = match warm_start {
                Some(p) => vec![p.clone()],
                None => {
                    let mut rng = substream(derive_seed(gp.seed, domain::RESTART, job as u64), domain::RESTART, 0);
                    std::iter::once(vec![vec![1.0 / k as f64; k]; ns])
                        .chain((0..restarts).map(|_| (0..ns).map(|_| dirichlet_ones(k, &mut rng)).collect()))
                        .collect()
                }
            };
            starts
                .into_iter()
                .map(|start| (job, gp_alternating(channel, &f, start, gp.tol, gp.max_iter)))
                .collect::<Vec<_>>()
        })
        .collect();

    let iterations = runs.iter().map(|(_, r)| r.iterations).sum();
    let (best_job, best) = runs
        .into_iter()
        .reduce(|a, b| if b.1.value > a.1.value { b } else { a })
        .expect("at least one run");
    let f = jobs[best_job].0.iter().map(|&i| all[i].clone()).collect();
    Ok(CapacityResult {
        value: best.value.max(0.0),
        maximizer: Maximizer::Auxiliary {
            p_u_given_s: best.p_u_given_s,
            f,
        },
        method: Method::new("heuristic-multistart", iterations),
        certified_gap: None,
        verdict: None,
        warnings,
    })
}

/// Zero-error fixed-length feedback capacity of a DMC.
///
/// Zero unless two inputs are non-confusable; otherwise
/// `max_P min_y -log2 sum_{x: W(y|x) > 0} P(x)`.
pub fn shannon_zef_fl_capacity(channel: &Dmc) -> Result<CapacityResult> {
    let verdict = check_dmc_fl_feedback(channel);
    if verdict.decision == Decision::Zero {
        return Ok(CapacityResult::zero("zero-verdict", Some(verdict)));
    }
    let mut r = shannon_zef_fl_lp(channel)?;
    r.verdict = Some(verdict);
    Ok(r)
}

/// The linear program behind [`shannon_zef_fl_capacity`] without the
/// positivity guard: minimize `t` subject to `sum_{x in N(y)} P(x) <= t`
/// for every output `y`, `P` on the simplex.
pub fn shannon_zef_fl_lp(channel: &Dmc) -> Result<CapacityResult> {
    let nx = channel.num_inputs();
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let p: Vec<_> = (0..nx).map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    let t = lp.add_var(1.0, (0.0, 1.0));
    for y in 0..channel.num_outputs() {
        let mut terms: Vec<_> = (0..nx)
            .filter(|&x| channel.prob(y, x) > 0.0)
            .map(|x| (p[x], 1.0))
            .collect();
        terms.push((t, -1.0));
        lp.add_constraint(terms.as_slice(), ComparisonOp::Le, 0.0);
    }
    let ones: Vec<_> = p.iter().map(|&v| (v, 1.0)).collect();
    lp.add_constraint(ones.as_slice(), ComparisonOp::Eq, 1.0);
    let solution = lp
        .solve()
        .map_err(|e| Error::InvalidArgument(format!("linear program failed: {e}")))?;

    let mut dist: Vec<f64> = p.iter().map(|&v| solution[v].max(0.0)).collect();
    let mass: f64 = dist.iter().sum();
    dist.iter_mut().for_each(|v| *v /= mass);
    // Re-evaluate the objective at the (renormalized) optimizer.
    let worst = (0..channel.num_outputs())
        .map(|y| {
            (0..nx)
                .filter(|&x| channel.prob(y, x) > 0.0)
                .map(|x| dist[x])
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    Ok(CapacityResult {
        value: -worst.log2(),
        maximizer: Maximizer::Input { p: dist },
        method: Method::new("simplex-lp", 0),
        certified_gap: None,
        verdict: None,
        warnings: Vec::new(),
    })
}

/// Vanishing-error capacity, which feedback and variable-length coding do
/// not increase.
pub fn vanishing_capacity(channel: &SdDmc, si: SiModel, opts: &SolverOptions) -> Result<CapacityResult> {
    match si {
        SiModel::NONE | SiModel::SC_NONE => blahut_arimoto(&average_states(channel), &opts.ba),
        SiModel::C_NONE => shannon_strategy_capacity(channel, &opts.ba, opts.strategy_cap),
        SiModel::NC_NONE => gelfand_pinsker_capacity(channel, opts),
        SiModel::SC_C | SiModel::NONE_C => capacity_cond_iid(channel, false, &opts.ba),
        _ => capacity_cond_iid(channel, true, &opts.ba),
    }
}

/// Zero-error feedback capacity under bounded- or variable-length coding.
///
/// Zero when the matching positivity condition fails, otherwise equal to the
/// vanishing-error capacity. For decoder-only state information only a zero
/// verdict yields a number; the value is not established otherwise.
pub fn zero_error_capacity(
    channel: &SdDmc,
    si: SiModel,
    regime: Regime,
    opts: &SolverOptions,
) -> Result<CapacityResult> {
    if regime == Regime::FixedLength {
        return Err(Error::UnsupportedRegime(
            "fixed-length zero-error values are not computed for state-dependent channels".to_owned(),
        ));
    }
    let verdict = positivity(channel, si, regime)?;
    if verdict.decision == Decision::Zero {
        return Ok(CapacityResult::zero("zero-verdict", Some(verdict)));
    }
    if !si.is_standard() {
        return Err(Error::UnsupportedModel(format!(
            "zero-error capacity for {si} under {regime} is not established (verdict {:?})",
            verdict.decision
        )));
    }
    let mut r = vanishing_capacity(channel, si, opts)?;
    r.verdict = Some(verdict);
    Ok(r)
}

/// Coarse upper limit used as a sanity check on computed values.
pub fn sanity_cap(num_inputs: usize, num_outputs: usize, num_states: usize) -> f64 {
    (num_inputs.min(num_outputs) as f64).log2() + (num_states as f64).log2()
}

/// Mutual information of the law in a [`Maximizer::Input`] over `channel`.
pub fn evaluate_input(channel: &Dmc, maximizer: &Maximizer) -> Option<f64> {
    match maximizer {
        Maximizer::Input { p } => Some(mutual_information(p, channel)),
        _ => None,
    }
}

/// Number of strategy letters available to the encoder, for reports.
pub fn strategy_alphabet_size(channel: &SdDmc, cap: usize) -> Result<usize> {
    strategy_count(channel, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::info::binary_entropy;

    fn ba(d: &Dmc) -> CapacityResult {
        blahut_arimoto(d, &BaOptions::default()).unwrap()
    }

    #[test]
    fn ba_closed_forms() {
        assert_eq!(ba(&identity(2)).value, 1.0);
        let r = ba(&bsc(0.11));
        assert!((r.value - (1.0 - binary_entropy(0.11))).abs() < 1e-6);
        assert!(r.certified_gap.unwrap() < 1e-9);
        assert_eq!(ba(&average_states(&ch_ex2())).value, 0.0);
    }

    #[test]
    fn ba_lower_bound_never_decreases() {
        let z = Dmc::new(vec![vec![1.0, 0.0, 0.0], vec![0.3, 0.7, 0.0], vec![0.1, 0.2, 0.7]]).unwrap();
        let mut it = BlahutArimoto::new(&z);
        let mut last = f64::NEG_INFINITY;
        for _ in 0..200 {
            let b = it.bounds();
            assert!(b.lower >= last - 1e-12);
            assert!(b.lower <= b.upper + 1e-12);
            last = b.lower;
            it.update();
        }
    }

    #[test]
    fn ba_reports_partial_result_without_convergence() {
        let opts = BaOptions { tol: 1e-12, max_iter: 3 };
        match blahut_arimoto(&bsc(0.2).clone(), &opts) {
            Ok(r) => assert!(r.certified_gap.unwrap() < 1e-12),
            Err(Error::NoConvergence(r)) => assert_eq!(r.method.iterations, 3),
            Err(e) => panic!("{e}"),
        }
        let z = Dmc::new(vec![vec![1.0, 0.0], vec![0.5, 0.5]]).unwrap();
        assert!(matches!(blahut_arimoto(&z, &opts), Err(Error::NoConvergence(_))));
        assert!(blahut_arimoto(&z, &BaOptions { tol: 0.0, max_iter: 10 }).is_err());
    }

    #[test]
    fn conditional_capacities() {
        let opts = BaOptions::default();
        for flag in [false, true] {
            assert!((capacity_cond_iid(&ch_ex2(), flag, &opts).unwrap().value - 1.0).abs() < 1e-9);
            assert!((capacity_cond_iid(&ch_triv(), flag, &opts).unwrap().value - 1.0).abs() < 1e-9);
        }
        let expected = 0.5 * (1.0 - binary_entropy(0.11)) + 0.5;
        let r = capacity_cond_iid(&ch_ex3(0.11, 0.5), true, &opts).unwrap();
        assert!((r.value - expected).abs() < 1e-6);
        assert!(matches!(r.maximizer, Maximizer::PerState { .. }));
    }

    #[test]
    fn strategy_capacity() {
        let opts = BaOptions::default();
        let cap = DEFAULT_STRATEGY_CAP;
        assert!((shannon_strategy_capacity(&ch_triv(), &opts, cap).unwrap().value - 1.0).abs() < 1e-9);
        // u = (1,0) always yields 0 and u = (0,1) always yields 1.
        assert!((shannon_strategy_capacity(&ch_ex2(), &opts, cap).unwrap().value - 1.0).abs() < 1e-9);
        let ch = ch_ex1(0.5);
        let strat = shannon_strategy_capacity(&ch, &opts, cap).unwrap();
        assert!(strat.value >= ba(&average_states(&ch)).value - 1e-9);
        match strat.maximizer {
            Maximizer::Strategies { letters, p } => assert_eq!(letters.len(), p.len()),
            other => panic!("{other:?}"),
        }
    }

    fn quick_gp() -> SolverOptions {
        SolverOptions {
            gp: GpOptions {
                restarts: 4,
                ..GpOptions::default()
            },
            ..SolverOptions::default()
        }
    }

    #[test]
    fn gp_single_state_matches_ba() {
        let d = Dmc::new(vec![vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap();
        let gp = gelfand_pinsker_capacity(&single_state(d.to_doc().w), &quick_gp()).unwrap();
        assert!((gp.value - ba(&d).value).abs() < 1e-5);
        assert_eq!(gp.method.name, "heuristic-multistart");
        assert!(gp.certified_gap.is_none());
    }

    #[test]
    fn gp_sits_between_causal_and_two_sided() {
        let opts = quick_gp();
        let ch = ch_ex3(0.11, 0.5);
        let gp = gelfand_pinsker_capacity(&ch, &opts).unwrap().value;
        let causal = shannon_strategy_capacity(&ch, &opts.ba, opts.strategy_cap).unwrap().value;
        let both = capacity_cond_iid(&ch, true, &opts.ba).unwrap().value;
        assert!(gp >= causal - 1e-6);
        assert!(gp <= both + 1e-6);
    }

    #[test]
    fn gp_stuck_at_cell() {
        let gp = gelfand_pinsker_capacity(&stuck_at(0.2), &quick_gp()).unwrap();
        assert!((gp.value - 0.8).abs() < 2e-3, "{}", gp.value);
        if let Maximizer::Auxiliary { p_u_given_s, f } = &gp.maximizer {
            assert_eq!(f.len(), p_u_given_s[0].len());
            for row in p_u_given_s {
                assert!(crate::info::on_simplex(row, 1e-9));
            }
        } else {
            panic!("expected auxiliary maximizer");
        }
    }

    #[test]
    fn gp_is_deterministic_and_samples_past_budget() {
        let mut opts = quick_gp();
        let a = gelfand_pinsker_capacity(&ch_ex1(0.5), &opts).unwrap();
        let b = gelfand_pinsker_capacity(&ch_ex1(0.5), &opts).unwrap();
        assert_eq!(a, b);
        opts.gp.enumeration_budget = 2;
        let c = gelfand_pinsker_capacity(&stuck_at(0.2), &opts).unwrap();
        assert_eq!(c.warnings.len(), 1);
    }

    #[test]
    fn zero_error_lp() {
        assert_eq!(shannon_zef_fl_capacity(&identity(2)).unwrap().value, 1.0);
        assert!((shannon_zef_fl_capacity(&identity(3)).unwrap().value - 3f64.log2()).abs() < 1e-9);
        let pent = shannon_zef_fl_capacity(&pentagon()).unwrap();
        assert!((pent.value - 2.5f64.log2()).abs() < 1e-6);
        assert!((shannon_zef_fl_lp(&pentagon()).unwrap().value - 2.5f64.log2()).abs() < 1e-6);
        let bsc_guarded = shannon_zef_fl_capacity(&bsc(0.3)).unwrap();
        assert_eq!(bsc_guarded.value, 0.0);
        assert_eq!(bsc_guarded.verdict.unwrap().decision, Decision::Zero);
        // Unguarded, a channel with full supports gives -log2 1 = 0 too.
        assert_eq!(shannon_zef_fl_lp(&bsc(0.3)).unwrap().value, 0.0);
    }

    #[test]
    fn dispatch() {
        let opts = quick_gp();
        let ex2 = ch_ex2();
        assert!(vanishing_capacity(&ex2, SiModel::NONE, &opts).unwrap().value.abs() < 1e-9);
        assert!((vanishing_capacity(&ex2, SiModel::SC_C, &opts).unwrap().value - 1.0).abs() < 1e-9);
        for si in SiModel::ALL {
            let v = vanishing_capacity(&ch_triv(), si, &opts).unwrap().value;
            assert!((v - 1.0).abs() < 1e-6, "{si}: {v}");
        }
        let ex3 = ch_ex3(0.11, 0.5);
        let a = vanishing_capacity(&ex3, SiModel::NONE_C, &opts).unwrap();
        let b = vanishing_capacity(&ex3, SiModel::SC_C, &opts).unwrap();
        assert_eq!(a, b);
        assert!((a.value - 0.7501).abs() < 1e-4);
    }

    #[test]
    fn zero_error_dispatch() {
        let opts = quick_gp();
        let ex1 = ch_ex1(0.5);
        let z = zero_error_capacity(&ex1, SiModel::NONE, Regime::VariableLength, &opts).unwrap();
        assert_eq!(z.value, ba(&average_states(&ex1)).value);
        assert!(z.value > 0.0);
        let nc = zero_error_capacity(&ex1, SiModel::NC_NC, Regime::BoundedLength, &opts).unwrap();
        assert_eq!(nc.value, 0.0);
        assert_eq!(nc.verdict.unwrap().decision, Decision::Zero);
        for si in SiModel::STANDARD {
            for regime in [Regime::BoundedLength, Regime::VariableLength] {
                let v = zero_error_capacity(&ch_triv(), si, regime, &opts).unwrap().value;
                assert!((v - 1.0).abs() < 1e-6);
            }
        }
        assert!(matches!(
            zero_error_capacity(&ex1, SiModel::NONE, Regime::FixedLength, &opts),
            Err(Error::UnsupportedRegime(_))
        ));
        assert!(matches!(
            zero_error_capacity(&ch_ex3(0.3, 0.5), SiModel::NONE_C, Regime::VariableLength, &opts),
            Err(Error::UnsupportedModel(_))
        ));
    }

    #[test]
    fn report_shape() {
        let json = serde_json::to_value(ba(&identity(2)).report()).unwrap();
        for key in ["value_bits", "method", "iterations", "gap", "maximizer", "verdict"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }
}
