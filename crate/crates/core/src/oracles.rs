//! Brute-force ground truth for tiny instances.
//!
//! Nothing here calls the solvers or checkers it is meant to validate.
//! Every oracle takes an explicit budget and fails with
//! [`Error::BudgetExceeded`] rather than truncating the search.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{Dmc, SdDmc};
use crate::error::{Error, Result};
use crate::si::SiModel;

/// Default enumeration budget shared by the oracles.
pub const DEFAULT_BUDGET: u128 = 50_000_000;

fn check_budget(size: u128, budget: u128) -> Result<()> {
    if size > budget {
        Err(Error::BudgetExceeded { size, budget })
    } else {
        Ok(())
    }
}

fn pow(base: usize, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
}

/// Digits of `index` in base `base`, most significant first.
fn digits(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut d = vec![0; len];
    for slot in d.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    d
}

/// The oracle's verdict on block-level confusability.
///
/// `decoder_sees_state` forces both sequences through the same state
/// sequence; otherwise each may see its own.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusability {
    pub all_confusable: bool,
    /// A non-confusable pair of input sequences, if one exists.
    pub separated: Option<(Vec<usize>, Vec<usize>)>,
    pub search_space: u128,
}

/// Whether every two distinct length-`n` input sequences can produce a
/// common output sequence.
///
/// For each input sequence the set of reachable outputs (paired with the
/// state sequence when the decoder sees it) is enumerated explicitly; two
/// sequences are confusable when the sets meet.
pub fn confusable_all_pairs_fl(
    channel: &SdDmc,
    decoder_sees_state: bool,
    n: usize,
    budget: u128,
) -> Result<Confusability> {
    if n == 0 {
        return Err(Error::InvalidArgument("blocklength must be positive".to_owned()));
    }
    let (nx, ny, ns) = (channel.num_inputs(), channel.num_outputs(), channel.num_states());
    let inputs = pow(nx, n);
    let outputs = pow(ny, n);
    let states = pow(ns, n);
    let size = inputs
        .saturating_mul(outputs)
        .saturating_mul(states)
        .saturating_add(inputs.saturating_mul(inputs));
    check_budget(size, budget)?;
    let (inputs, outputs, states) = (inputs as usize, outputs as usize, states as usize);

    // Observation index: y-sequence, or (y-sequence, s-sequence) when the decoder sees states.
    let observations = if decoder_sees_state { outputs * states } else { outputs };
    let reachable: Vec<Vec<bool>> = (0..inputs)
        .into_par_iter()
        .map(|xi| {
            let xs = digits(xi, nx, n);
            let mut seen = vec![false; observations];
            for yi in 0..outputs {
                let ys = digits(yi, ny, n);
                for si in 0..states {
                    let ss = digits(si, ns, n);
                    let positive = (0..n).all(|i| channel.prob(ys[i], xs[i], ss[i]) > 0.0);
                    if positive {
                        let obs = if decoder_sees_state { yi * states + si } else { yi };
                        seen[obs] = true;
                    }
                }
            }
            seen
        })
        .collect();

    for a in 0..inputs {
        for b in a + 1..inputs {
            let meet = reachable[a].iter().zip(&reachable[b]).any(|(&p, &q)| p && q);
            if !meet {
                return Ok(Confusability {
                    all_confusable: false,
                    separated: Some((digits(a, nx, n), digits(b, nx, n))),
                    search_space: size,
                });
            }
        }
    }
    Ok(Confusability {
        all_confusable: true,
        separated: None,
        search_space: size,
    })
}

/// The confusability flag whose block-level answer decides bounded-length
/// positivity for `si`, for the models where that correspondence is exact.
/// Encoder-side state knowledge enlarges the code beyond fixed input
/// sequences, so those models have none.
pub fn matching_flag(si: SiModel) -> Option<bool> {
    match si {
        SiModel::NONE | SiModel::SC_NONE => Some(false),
        SiModel::SC_C | SiModel::NONE_C => Some(true),
        _ => None,
    }
}

/// A lattice maximum: a certified lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridValue {
    pub value: f64,
    pub argmax: Vec<Vec<f64>>,
    pub points: u128,
}

fn h(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// `I(X;Y) = H(Y) - H(Y|X)`.
fn mutual_info_entropies(p: &[f64], w: &Dmc) -> f64 {
    let ny = w.num_outputs();
    let mut hy_x = 0.0;
    let mut q = vec![0.0; ny];
    for (x, &px) in p.iter().enumerate() {
        if px == 0.0 {
            continue;
        }
        for (y, qy) in q.iter_mut().enumerate() {
            let wy = w.prob(y, x);
            *qy += px * wy;
            hy_x += px * h(wy);
        }
    }
    q.iter().map(|&v| h(v)).sum::<f64>() - hy_x
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// All compositions of `resolution` into `parts` nonnegative parts.
fn lattice(parts: usize, resolution: usize) -> Vec<Vec<usize>> {
    fn go(parts: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            go(parts - 1, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(parts, resolution, &mut Vec::with_capacity(parts), &mut out);
    out
}

fn lattice_points(parts: usize, resolution: usize) -> u128 {
    binomial((resolution + parts - 1) as u128, (parts - 1) as u128)
}

/// Maximum of `I(P, W)` over input laws with entries in multiples of
/// `1/resolution`.
pub fn grid_capacity(channel: &Dmc, resolution: usize, budget: u128) -> Result<GridValue> {
    let nx = channel.num_inputs();
    if nx > 4 {
        return Err(Error::InvalidArgument(format!("grid oracle supports at most 4 inputs, got {nx}")));
    }
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".to_owned()));
    }
    let points = lattice_points(nx, resolution);
    check_budget(points, budget)?;
    let r = resolution as f64;
    let best = lattice(nx, resolution)
        .into_par_iter()
        .enumerate()
        .map(|(i, c)| {
            let p: Vec<f64> = c.iter().map(|&k| k as f64 / r).collect();
            (mutual_info_entropies(&p, channel), i, p)
        })
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .expect("lattice is nonempty");
    Ok(GridValue {
        value: best.0.max(0.0),
        argmax: vec![best.2],
        points,
    })
}

/// `I(U;Y) - I(U;S) = H(Y) - H(U,Y) - H(S) + H(U,S)` for `p(s,u,y) =
/// Q(s) P(u|s) W(y|f(u,s),s)`.
fn gp_objective(channel: &SdDmc, f: &[usize], p_u_s: &[Vec<f64>], nu: usize) -> f64 {
    let (ny, ns) = (channel.num_outputs(), channel.num_states());
    let q = channel.state_probs();
    let mut uy = vec![0.0; nu * ny];
    let mut us = vec![0.0; nu * ns];
    for s in 0..ns {
        for u in 0..nu {
            let w = q[s] * p_u_s[s][u];
            us[u * ns + s] = w;
            if w == 0.0 {
                continue;
            }
            let x = f[u * ns + s];
            for y in 0..ny {
                uy[u * ny + y] += w * channel.prob(y, x, s);
            }
        }
    }
    let py: Vec<f64> = (0..ny).map(|y| (0..nu).map(|u| uy[u * ny + y]).sum()).collect();
    let hy: f64 = py.iter().map(|&v| h(v)).sum();
    let huy: f64 = uy.iter().map(|&v| h(v)).sum();
    let hs: f64 = q.iter().map(|&v| h(v)).sum();
    let hus: f64 = us.iter().map(|&v| h(v)).sum();
    hy - huy - hs + hus
}

/// Maximum of `I(U;Y) - I(U;S)` over every map `f: U x S -> X` with
/// `|U| = u_size` and every lattice law `P(u|s)`.
///
/// The argmax holds `P(u|s)` row by row; the map is not reported.
pub fn gp_grid_oracle(channel: &SdDmc, resolution: usize, u_size: usize, budget: u128) -> Result<GridValue> {
    let (nx, ns) = (channel.num_inputs(), channel.num_states());
    if nx > 3 || ns > 3 {
        return Err(Error::InvalidArgument("grid oracle supports |X|, |S| <= 3".to_owned()));
    }
    if u_size == 0 || u_size > nx * ns {
        return Err(Error::InvalidArgument(format!("u_size must be in 1..={}", nx * ns)));
    }
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".to_owned()));
    }
    let maps = pow(nx, u_size * ns);
    let per_state = lattice_points(u_size, resolution);
    let laws = pow(per_state as usize, ns);
    let points = maps.saturating_mul(laws);
    check_budget(points, budget)?;

    let rows: Vec<Vec<f64>> = lattice(u_size, resolution)
        .into_iter()
        .map(|c| c.iter().map(|&k| k as f64 / resolution as f64).collect())
        .collect();
    let per_state = rows.len();
    let best = (0..maps as usize)
        .into_par_iter()
        .map(|fi| {
            // f[u * ns + s]
            let f = digits(fi, nx, u_size * ns);
            let mut best = (f64::NEG_INFINITY, 0usize);
            for li in 0..laws as usize {
                let idx = digits(li, per_state, ns);
                let law: Vec<Vec<f64>> = idx.iter().map(|&i| rows[i].clone()).collect();
                let v = gp_objective(channel, &f, &law, u_size);
                if v > best.0 {
                    best = (v, li);
                }
            }
            (best.0, fi, best.1)
        })
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .expect("at least one map");
    let argmax = digits(best.2, per_state, ns).iter().map(|&i| rows[i].clone()).collect();
    Ok(GridValue {
        value: best.0.max(0.0),
        argmax,
        points,
    })
}

/// An oracle answer, either a decision or a value in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Finding {
    Decision(bool),
    Bits(f64),
}

/// How an oracle value must relate to the module value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    /// `|oracle - module| <= tolerance`.
    Within,
    /// `oracle <= module + tolerance` (the oracle is a lower bound).
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub instance: String,
    pub oracle: String,
    pub oracle_value: Finding,
    pub module_value: Finding,
    pub relation: Relation,
    pub tolerance: f64,
    pub agreement: bool,
    pub search_space: u128,
}

impl OracleReport {
    pub fn new(
        instance: impl Into<String>,
        oracle: impl Into<String>,
        oracle_value: Finding,
        module_value: Finding,
        relation: Relation,
        tolerance: f64,
        search_space: u128,
    ) -> Self {
        let agreement = match (oracle_value, module_value, relation) {
            (Finding::Decision(a), Finding::Decision(b), _) => a == b,
            (Finding::Bits(a), Finding::Bits(b), Relation::Equal) => a == b,
            (Finding::Bits(a), Finding::Bits(b), Relation::Within) => (a - b).abs() <= tolerance,
            (Finding::Bits(a), Finding::Bits(b), Relation::AtMost) => a <= b + tolerance,
            _ => false,
        };
        OracleReport {
            instance: instance.into(),
            oracle: oracle.into(),
            oracle_value,
            module_value,
            relation,
            tolerance,
            agreement,
            search_space,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::info::binary_entropy;

    #[test]
    fn example_one_is_confusable_with_state_at_decoder() {
        let c = confusable_all_pairs_fl(&ch_ex1(0.5), true, 4, DEFAULT_BUDGET).unwrap();
        assert!(c.all_confusable);
        assert!(c.separated.is_none());
    }

    #[test]
    fn identity_separates() {
        for flag in [false, true] {
            let c = confusable_all_pairs_fl(&ch_triv(), flag, 1, DEFAULT_BUDGET).unwrap();
            assert!(!c.all_confusable);
            assert_eq!(c.separated, Some((vec![0], vec![1])));
        }
    }

    #[test]
    fn state_at_decoder_can_separate() {
        // Flip/identity: without states every pair collides, with states none do.
        assert!(confusable_all_pairs_fl(&ch_ex2(), false, 2, DEFAULT_BUDGET).unwrap().all_confusable);
        assert!(!confusable_all_pairs_fl(&ch_ex2(), true, 1, DEFAULT_BUDGET).unwrap().all_confusable);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            confusable_all_pairs_fl(&ch_ex1(0.5), true, 6, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(grid_capacity(&bsc(0.1), 1000, 10), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(
            gp_grid_oracle(&stuck_at(0.2), 40, 2, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn grid_on_closed_forms() {
        let g = grid_capacity(&identity(2), 100, DEFAULT_BUDGET).unwrap();
        assert_eq!(g.value, 1.0);
        assert_eq!(g.argmax[0], vec![0.5, 0.5]);
        let g = grid_capacity(&bsc(0.11), 1000, DEFAULT_BUDGET).unwrap();
        assert!((g.value - (1.0 - binary_entropy(0.11))).abs() < 1e-4);
        assert_eq!(g.points, 1001);
    }

    #[test]
    fn gp_grid_single_state_matches_grid() {
        let rows = vec![vec![0.9, 0.1], vec![0.2, 0.8]];
        let d = Dmc::new(rows.clone()).unwrap();
        let g = grid_capacity(&d, 40, DEFAULT_BUDGET).unwrap().value;
        let gp = gp_grid_oracle(&single_state(rows), 40, 2, DEFAULT_BUDGET).unwrap().value;
        assert!((g - gp).abs() < 1e-12);
    }

    #[test]
    fn gp_grid_stuck_at() {
        let g = gp_grid_oracle(&stuck_at(0.2), 40, 2, DEFAULT_BUDGET).unwrap();
        assert!((g.value - 0.8).abs() < 1e-9, "{}", g.value);
    }

    #[test]
    fn report_agreement() {
        let r = OracleReport::new("bsc", "grid", Finding::Bits(0.5), Finding::Bits(0.5000001), Relation::AtMost, 1e-9, 10);
        assert!(r.agreement);
        let r = OracleReport::new("bsc", "grid", Finding::Bits(0.6), Finding::Bits(0.5), Relation::AtMost, 1e-9, 10);
        assert!(!r.agreement);
        let r = OracleReport::new("x", "conf", Finding::Decision(true), Finding::Bits(0.5), Relation::Equal, 0.0, 1);
        assert!(!r.agreement);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["oracle_value"], serde_json::json!(true));
    }
}
