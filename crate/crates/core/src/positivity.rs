//! Positivity of zero-error feedback capacities.
//!
//! Every decision comes with a witness that can be re-checked against the
//! zero pattern of the channel. Scans are sequential and return the
//! lexicographically first witness in the order documented on each checker,
//! so verdicts are reproducible byte for byte.

use serde::{Deserialize, Serialize};

use crate::channel::{Dmc, SdDmc};
use crate::error::{Error, Result};
use crate::reductions::{average_states, StrategyLetter};
use crate::si::{Regime, SiModel};

/// Largest output alphabet [`partition_exists`] will search exhaustively.
pub const MAX_PARTITION_OUTPUTS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Positive,
    Zero,
    /// A sufficient condition holds; no matching necessary condition is known.
    PositiveSufficient,
    /// The sufficient condition fails; positivity is undecided.
    Unknown,
}

impl Decision {
    pub fn is_positive(self) -> bool {
        matches!(self, Decision::Positive | Decision::PositiveSufficient)
    }
}

/// The condition a verdict was decided by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// DMC: some output is impossible for some input.
    DmcDisprover,
    /// DMC: two inputs have disjoint supports.
    DmcNonConfusable,
    /// Some output is impossible for some input in every state.
    CommonDisprover,
    /// Some output can be avoided in every state by a state-dependent input.
    StrategyDisprover,
    /// In some state, some output is impossible for one input and possible for another.
    StateDisprover,
    /// A disprover inside a group of states that the transition `x' -> y` identifies.
    IdentifiableStateGroup,
    /// Two inputs are non-confusable once the state is averaged out.
    AveragedNonConfusable,
    /// An output bipartition that every state can hit deterministically on both sides.
    OutputPartition,
    /// Every ordered pair of states admits a non-confusable input pair.
    StatePairNonConfusable,
    /// One input pair is non-confusable in every state.
    UniformNonConfusable,
    /// Each state has its own non-confusable input pair.
    PerStateNonConfusable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatePairLetters {
    pub s: usize,
    pub s_prime: usize,
    pub x: usize,
    pub x_prime: usize,
}

/// Evidence for a positive decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `y` never follows `x`.
    Disprover { x: usize, y: usize },
    /// `x` and `x_prime` never share an output.
    NonConfusable { x: usize, x_prime: usize },
    /// Sending `u(s)` in state `s` never produces `y`.
    Strategy { y: usize, u: StrategyLetter },
    /// In state `s`, `y` disproves `x` and is reachable from `x_prime`.
    StateDisprover { x: usize, x_prime: usize, y: usize, s: usize },
    /// `x_prime -> y` happens exactly in `states`, where `y` disproves `x`.
    StateGroup { x: usize, x_prime: usize, y: usize, states: Vec<usize> },
    /// Output bipartition with, per state, an input landing in `y0` and one landing in `y1`.
    Partition { y0: Vec<usize>, y1: Vec<usize>, letters: Vec<(usize, usize)> },
    /// Non-confusable letters for every ordered state pair.
    StatePairs { letters: Vec<StatePairLetters> },
    /// Non-confusable input pair for every state.
    PerState { letters: Vec<(usize, usize)> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    pub witness: Option<Witness>,
    pub rationale: Condition,
}

impl Verdict {
    fn from_search(rationale: Condition, witness: Option<Witness>) -> Self {
        let decision = if witness.is_some() { Decision::Positive } else { Decision::Zero };
        Verdict {
            decision,
            witness,
            rationale,
        }
    }

    pub fn report(&self, si: SiModel, regime: Regime) -> VerdictReport {
        VerdictReport {
            condition: self.rationale,
            decision: self.decision,
            witness: self.witness.clone(),
            si,
            regime,
        }
    }

    /// Re-checks the witness of a positive verdict against `channel`.
    ///
    /// Verdicts without a positive decision are trivially sound.
    pub fn verify(&self, channel: &SdDmc) -> bool {
        if !self.decision.is_positive() {
            return self.witness.is_none();
        }
        match &self.witness {
            Some(w) => witness_holds(channel, self.rationale, w),
            None => false,
        }
    }

    /// Like [`Verdict::verify`] for verdicts on stateless channels.
    pub fn verify_dmc(&self, channel: &Dmc) -> bool {
        if !self.decision.is_positive() {
            return self.witness.is_none();
        }
        match (self.witness.as_ref(), self.rationale) {
            (Some(&Witness::Disprover { x, y }), Condition::DmcDisprover) => {
                x < channel.num_inputs()
                    && y < channel.num_outputs()
                    && channel.prob(y, x) == 0.0
                    && dmc_reachable(channel, y)
            }
            (Some(&Witness::NonConfusable { x, x_prime }), Condition::DmcNonConfusable) => {
                x < channel.num_inputs()
                    && x_prime < channel.num_inputs()
                    && (0..channel.num_outputs()).all(|y| channel.prob(y, x) * channel.prob(y, x_prime) == 0.0)
            }
            _ => false,
        }
    }
}

/// JSON form of a verdict as printed by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub condition: Condition,
    pub decision: Decision,
    pub witness: Option<Witness>,
    pub si: SiModel,
    pub regime: Regime,
}

fn zero(ch: &SdDmc, y: usize, x: usize, s: usize) -> bool {
    ch.prob(y, x, s) == 0.0
}

fn states_disjoint(ch: &SdDmc, x: usize, s: usize, x_prime: usize, s_prime: usize) -> bool {
    (0..ch.num_outputs()).all(|y| zero(ch, y, x, s) || zero(ch, y, x_prime, s_prime))
}

fn witness_holds(ch: &SdDmc, cond: Condition, w: &Witness) -> bool {
    let nx = ch.num_inputs();
    let ny = ch.num_outputs();
    let ns = ch.num_states();
    let all_states = 0..ns;
    match (cond, w) {
        (Condition::CommonDisprover, &Witness::Disprover { x, y }) => {
            x < nx && y < ny && all_states.clone().all(|s| zero(ch, y, x, s))
        }
        (Condition::StrategyDisprover, Witness::Strategy { y, u }) => {
            *y < ny
                && u.as_slice().len() == ns
                && u.as_slice().iter().all(|&x| x < nx)
                && all_states.clone().all(|s| zero(ch, *y, u.input(s), s))
        }
        (Condition::StateDisprover, &Witness::StateDisprover { x, x_prime, y, s }) => {
            x < nx && x_prime < nx && y < ny && s < ns && zero(ch, y, x, s) && !zero(ch, y, x_prime, s)
        }
        (Condition::IdentifiableStateGroup, Witness::StateGroup { x, x_prime, y, states }) => {
            let (x, x_prime, y) = (*x, *x_prime, *y);
            x < nx
                && x_prime < nx
                && y < ny
                && !states.is_empty()
                && states.iter().all(|&s| s < ns)
                && all_states.clone().all(|s| {
                    if states.contains(&s) {
                        !zero(ch, y, x_prime, s) && zero(ch, y, x, s)
                    } else {
                        zero(ch, y, x_prime, s)
                    }
                })
        }
        (Condition::AveragedNonConfusable, &Witness::NonConfusable { x, x_prime }) => {
            x < nx
                && x_prime < nx
                && (0..ny).all(|y| all_states.clone().all(|s| zero(ch, y, x, s)) || all_states.clone().all(|s| zero(ch, y, x_prime, s)))
        }
        (Condition::OutputPartition, Witness::Partition { y0, y1, letters }) => {
            let mut side = vec![None; ny];
            for &y in y0 {
                if y >= ny {
                    return false;
                }
                side[y] = Some(0);
            }
            for &y in y1 {
                if y >= ny || side[y].is_some() {
                    return false;
                }
                side[y] = Some(1);
            }
            let covers = side.iter().all(Option::is_some) && !y0.is_empty() && !y1.is_empty();
            let lands_in = |x: usize, s: usize, target: u8| {
                (0..ny).all(|y| zero(ch, y, x, s) || side[y] == Some(target))
            };
            covers
                && letters.len() == ns
                && letters
                    .iter()
                    .enumerate()
                    .all(|(s, &(a, b))| a < nx && b < nx && lands_in(a, s, 0) && lands_in(b, s, 1))
        }
        (Condition::StatePairNonConfusable, Witness::StatePairs { letters }) => {
            letters.len() == ns * ns
                && all_states.clone().all(|s| {
                    all_states.clone().all(|sp| {
                        letters.iter().any(|l| {
                            l.s == s
                                && l.s_prime == sp
                                && l.x < nx
                                && l.x_prime < nx
                                && states_disjoint(ch, l.x, s, l.x_prime, sp)
                        })
                    })
                })
        }
        (Condition::UniformNonConfusable, &Witness::NonConfusable { x, x_prime }) => {
            x < nx && x_prime < nx && all_states.clone().all(|s| states_disjoint(ch, x, s, x_prime, s))
        }
        (Condition::PerStateNonConfusable, Witness::PerState { letters }) => {
            letters.len() == ns
                && letters
                    .iter()
                    .enumerate()
                    .all(|(s, &(x, xp))| x < nx && xp < nx && states_disjoint(ch, x, s, xp, s))
        }
        _ => false,
    }
}

/// Zero-error VLF positivity for a DMC: some `W(y|x) = 0` with `y` reachable
/// from another input. Outputs no input reaches carry no information; they
/// appear in reduced channels such as the joint-output one.
///
/// Scan order: `x`, then `y`.
pub fn check_dmc_vl(channel: &Dmc) -> Verdict {
    let witness = (0..channel.num_inputs())
        .flat_map(|x| (0..channel.num_outputs()).map(move |y| (x, y)))
        .find(|&(x, y)| channel.prob(y, x) == 0.0 && dmc_reachable(channel, y))
        .map(|(x, y)| Witness::Disprover { x, y });
    Verdict::from_search(Condition::DmcDisprover, witness)
}

fn dmc_reachable(channel: &Dmc, y: usize) -> bool {
    (0..channel.num_inputs()).any(|x| channel.prob(y, x) > 0.0)
}

/// Zero-error fixed-length feedback positivity for a DMC: two inputs with
/// disjoint supports. Scan order: `x < x'`.
pub fn check_dmc_fl_feedback(channel: &Dmc) -> Verdict {
    let nx = channel.num_inputs();
    let witness = (0..nx)
        .flat_map(|x| (x + 1..nx).map(move |xp| (x, xp)))
        .find(|&(x, xp)| {
            (0..channel.num_outputs()).all(|y| channel.prob(y, x) == 0.0 || channel.prob(y, xp) == 0.0)
        })
        .map(|(x, x_prime)| Witness::NonConfusable { x, x_prime });
    Verdict::from_search(Condition::DmcNonConfusable, witness)
}

/// `y` is impossible after `x` in every state. Scan order: `x`, then `y`.
pub fn common_disprover(ch: &SdDmc) -> Option<Witness> {
    (0..ch.num_inputs())
        .flat_map(|x| (0..ch.num_outputs()).map(move |y| (x, y)))
        .find(|&(x, y)| (0..ch.num_states()).all(|s| zero(ch, y, x, s)))
        .map(|(x, y)| Witness::Disprover { x, y })
}

/// Some `y` can be avoided in every state. The strategy picks the smallest
/// avoiding input per state. Scan order: `y`.
pub fn strategy_disprover(ch: &SdDmc) -> Option<Witness> {
    (0..ch.num_outputs()).find_map(|y| {
        let map: Option<Vec<usize>> = (0..ch.num_states())
            .map(|s| (0..ch.num_inputs()).find(|&x| zero(ch, y, x, s)))
            .collect();
        map.map(|m| Witness::Strategy {
            y,
            u: StrategyLetter::new(m),
        })
    })
}

/// In some state `s`, `y` is impossible after `x` and possible after `x'`.
/// Scan order: `y`, `s`, then the smallest such `x` and `x'`.
pub fn state_disprover(ch: &SdDmc) -> Option<Witness> {
    (0..ch.num_outputs())
        .flat_map(|y| (0..ch.num_states()).map(move |s| (y, s)))
        .find_map(|(y, s)| {
            let x = (0..ch.num_inputs()).find(|&x| zero(ch, y, x, s))?;
            let x_prime = (0..ch.num_inputs()).find(|&x| !zero(ch, y, x, s))?;
            Some(Witness::StateDisprover { x, x_prime, y, s })
        })
}

/// Searches for `(x, x', y, S*)` where `S* = {s : W(y|x',s) > 0}` is
/// nonempty and `y` is impossible after `x` throughout `S*`.
///
/// Outside `S*` the transition `x' -> y` is impossible by construction, so
/// observing it identifies the group. Scan order: `x`, `x' != x`, `y`.
pub fn state_group_witness(ch: &SdDmc) -> Option<Witness> {
    let nx = ch.num_inputs();
    for x in 0..nx {
        for x_prime in (0..nx).filter(|&xp| xp != x) {
            for y in 0..ch.num_outputs() {
                let states: Vec<usize> = (0..ch.num_states()).filter(|&s| !zero(ch, y, x_prime, s)).collect();
                if !states.is_empty() && states.iter().all(|&s| zero(ch, y, x, s)) {
                    return Some(Witness::StateGroup { x, x_prime, y, states });
                }
            }
        }
    }
    None
}

/// Two inputs that stay non-confusable after averaging out the state.
pub fn averaged_non_confusable(ch: &SdDmc) -> Option<Witness> {
    check_dmc_fl_feedback(&average_states(ch)).witness
}

/// Searches output bipartitions `(Y0, Y1)` such that in every state one
/// input lands entirely in `Y0` and another entirely in `Y1`.
///
/// `Y0` always contains output 0; candidate partitions are visited in
/// increasing order of the bitmask of the remaining outputs placed in `Y0`.
pub fn partition_exists(ch: &SdDmc) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    Ok(partition_search(ch)?.map(|w| match w {
        Witness::Partition { y0, y1, .. } => (y0, y1),
        _ => unreachable!(),
    }))
}

fn partition_search(ch: &SdDmc) -> Result<Option<Witness>> {
    let ny = ch.num_outputs();
    if ny > MAX_PARTITION_OUTPUTS {
        return Err(Error::AlphabetTooLarge {
            what: "output alphabet for partition search",
            size: ny as u128,
            cap: MAX_PARTITION_OUTPUTS as u128,
        });
    }
    let nx = ch.num_inputs();
    let ns = ch.num_states();
    // Support bitmasks, indexed [s][x].
    let supports: Vec<Vec<u32>> = (0..ns)
        .map(|s| {
            (0..nx)
                .map(|x| {
                    ch.row(x, s)
                        .iter()
                        .enumerate()
                        .filter(|(_, &p)| p > 0.0)
                        .fold(0u32, |m, (y, _)| m | (1 << y))
                })
                .collect()
        })
        .collect();
    let full: u32 = (1u32 << ny) - 1;
    let rest = ny - 1;
    for bits in 0u32..(1u32 << rest) {
        let y0 = 1 | (bits << 1);
        let y1 = full & !y0;
        if y1 == 0 {
            continue;
        }
        let letters: Option<Vec<(usize, usize)>> = supports
            .iter()
            .map(|row| {
                let a = row.iter().position(|&m| m & !y0 == 0)?;
                let b = row.iter().position(|&m| m & !y1 == 0)?;
                Some((a, b))
            })
            .collect();
        if let Some(letters) = letters {
            let side = |mask: u32| (0..ny).filter(|&y| mask & (1 << y) != 0).collect::<Vec<_>>();
            return Ok(Some(Witness::Partition {
                y0: side(y0),
                y1: side(y1),
                letters,
            }));
        }
    }
    Ok(None)
}

/// For every ordered state pair `(s, s')`, the first `(x, x')` with
/// `supp(x, s)` and `supp(x', s')` disjoint.
pub fn state_pair_non_confusable(ch: &SdDmc) -> Option<Witness> {
    let nx = ch.num_inputs();
    let ns = ch.num_states();
    let mut letters = Vec::with_capacity(ns * ns);
    for s in 0..ns {
        for s_prime in 0..ns {
            let (x, x_prime) = (0..nx)
                .flat_map(|x| (0..nx).map(move |xp| (x, xp)))
                .find(|&(x, xp)| states_disjoint(ch, x, s, xp, s_prime))?;
            letters.push(StatePairLetters { s, s_prime, x, x_prime });
        }
    }
    Some(Witness::StatePairs { letters })
}

/// One pair `x < x'` that is non-confusable in every state.
pub fn uniform_non_confusable(ch: &SdDmc) -> Option<Witness> {
    let nx = ch.num_inputs();
    (0..nx)
        .flat_map(|x| (x + 1..nx).map(move |xp| (x, xp)))
        .find(|&(x, xp)| (0..ch.num_states()).all(|s| states_disjoint(ch, x, s, xp, s)))
        .map(|(x, x_prime)| Witness::NonConfusable { x, x_prime })
}

/// A non-confusable pair `x < x'` in each state.
pub fn per_state_non_confusable(ch: &SdDmc) -> Option<Witness> {
    let nx = ch.num_inputs();
    let letters: Option<Vec<(usize, usize)>> = (0..ch.num_states())
        .map(|s| {
            (0..nx)
                .flat_map(|x| (x + 1..nx).map(move |xp| (x, xp)))
                .find(|&(x, xp)| states_disjoint(ch, x, s, xp, s))
        })
        .collect();
    letters.map(|letters| Witness::PerState { letters })
}

/// Positivity of the zero-error capacity with variable-length feedback codes.
///
/// For decoder-only causal state information only a sufficient condition is
/// known, so the verdict is `PositiveSufficient` or `Unknown`, never `Zero`.
pub fn vl_positivity(ch: &SdDmc, si: SiModel) -> Verdict {
    match si {
        SiModel::NONE | SiModel::SC_NONE => Verdict::from_search(Condition::CommonDisprover, common_disprover(ch)),
        SiModel::C_NONE | SiModel::NC_NONE => {
            Verdict::from_search(Condition::StrategyDisprover, strategy_disprover(ch))
        }
        SiModel::NONE_C => {
            let witness = state_group_witness(ch);
            let decision = if witness.is_some() {
                Decision::PositiveSufficient
            } else {
                Decision::Unknown
            };
            Verdict {
                decision,
                witness,
                rationale: Condition::IdentifiableStateGroup,
            }
        }
        _ => Verdict::from_search(Condition::StateDisprover, state_disprover(ch)),
    }
}

/// Positivity of the zero-error capacity with bounded-length feedback codes,
/// which coincides with positivity under fixed-length feedback codes.
pub fn bl_positivity(ch: &SdDmc, si: SiModel) -> Result<Verdict> {
    Ok(match si {
        SiModel::NONE | SiModel::SC_NONE => {
            Verdict::from_search(Condition::AveragedNonConfusable, averaged_non_confusable(ch))
        }
        SiModel::C_NONE => Verdict::from_search(Condition::OutputPartition, partition_search(ch)?),
        SiModel::NC_NONE => Verdict::from_search(Condition::StatePairNonConfusable, state_pair_non_confusable(ch)),
        SiModel::SC_C | SiModel::NONE_C => {
            Verdict::from_search(Condition::UniformNonConfusable, uniform_non_confusable(ch))
        }
        _ => Verdict::from_search(Condition::PerStateNonConfusable, per_state_non_confusable(ch)),
    })
}

/// Dispatches on the regime: fixed and bounded length share one criterion.
pub fn positivity(ch: &SdDmc, si: SiModel, regime: Regime) -> Result<Verdict> {
    match regime {
        Regime::VariableLength => Ok(vl_positivity(ch, si)),
        Regime::FixedLength | Regime::BoundedLength => bl_positivity(ch, si),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn dmc_disprover_examples() {
        let v = check_dmc_vl(&identity(2));
        assert_eq!(v.decision, Decision::Positive);
        assert_eq!(v.witness, Some(Witness::Disprover { x: 0, y: 1 }));
        assert_eq!(check_dmc_vl(&bsc(0.3)).decision, Decision::Zero);
        let avg = average_states(&ch_ex1(0.5));
        let v = check_dmc_vl(&avg);
        assert_eq!(v.witness, Some(Witness::Disprover { x: 0, y: 1 }));
        assert!(v.verify_dmc(&avg));
    }

    #[test]
    fn dmc_non_confusable_examples() {
        let v = check_dmc_fl_feedback(&identity(2));
        assert_eq!(v.witness, Some(Witness::NonConfusable { x: 0, x_prime: 1 }));
        assert_eq!(check_dmc_fl_feedback(&average_states(&ch_ex1(0.5))).decision, Decision::Zero);
        // Adjacent supports overlap, but 0 and 2 do not.
        let pent = check_dmc_fl_feedback(&pentagon());
        assert_eq!(pent.witness, Some(Witness::NonConfusable { x: 0, x_prime: 2 }));
    }

    #[test]
    fn pentagon_pairs_by_exhaustive_scan() {
        // Oracle: list every pair and test support intersection directly.
        let p = pentagon();
        let mut disjoint = 0;
        for a in 0..5 {
            for b in a + 1..5 {
                let sa = p.support(a).unwrap();
                let sb = p.support(b).unwrap();
                if sa.iter().all(|y| !sb.contains(y)) {
                    disjoint += 1;
                }
            }
        }
        // Non-adjacent pairs are disjoint; the checker must agree that some exist
        // only when the scan finds one.
        assert_eq!(disjoint > 0, check_dmc_fl_feedback(&p).decision == Decision::Positive);
    }

    #[test]
    fn example_one_variable_length_without_state_info() {
        let ch = ch_ex1(0.5);
        let v = vl_positivity(&ch, SiModel::NONE);
        assert_eq!(v.decision, Decision::Positive);
        assert_eq!(v.witness, Some(Witness::Disprover { x: 0, y: 1 }));
        assert!(v.verify(&ch));
    }

    #[test]
    fn example_one_bounded_length_is_zero_even_with_full_state_info() {
        let ch = ch_ex1(0.5);
        let v = bl_positivity(&ch, SiModel::NC_NC).unwrap();
        assert_eq!(v.decision, Decision::Zero);
        assert_eq!(v.rationale, Condition::PerStateNonConfusable);
        assert!(v.verify(&ch));
    }

    #[test]
    fn example_three_state_disprover() {
        let ch = ch_ex3(0.3, 0.5);
        let v = vl_positivity(&ch, SiModel::SC_C);
        assert_eq!(v.rationale, Condition::StateDisprover);
        assert_eq!(
            v.witness,
            Some(Witness::StateDisprover { x: 1, x_prime: 0, y: 0, s: 1 })
        );
        assert!(v.verify(&ch));
        let v = vl_positivity(&ch, SiModel::NONE_C);
        assert_eq!(v.decision, Decision::Unknown);
        assert_eq!(v.witness, None);
    }

    #[test]
    fn example_two_decoder_only_bounded() {
        let ch = ch_ex2();
        let v = bl_positivity(&ch, SiModel::NONE_C).unwrap();
        assert_eq!(v.decision, Decision::Positive);
        assert_eq!(v.witness, Some(Witness::NonConfusable { x: 0, x_prime: 1 }));
        assert!(v.verify(&ch));
    }

    #[test]
    fn identity_is_positive_everywhere() {
        let ch = ch_triv();
        for si in SiModel::ALL {
            for regime in Regime::ALL {
                let v = positivity(&ch, si, regime).unwrap();
                assert!(v.decision.is_positive(), "{si} {regime}");
                assert!(v.verify(&ch));
            }
        }
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partition_exists(&ch_ex2()).unwrap(), Some((vec![0], vec![1])));
        assert_eq!(partition_exists(&ch_ex1(0.5)).unwrap(), None);
        assert_eq!(partition_exists(&single_state(vec![vec![0.5, 0.5], vec![0.5, 0.5]])).unwrap(), None);
        let v = bl_positivity(&ch_ex2(), SiModel::C_NONE).unwrap();
        assert_eq!(
            v.witness,
            Some(Witness::Partition { y0: vec![0], y1: vec![1], letters: vec![(1, 0), (0, 1)] })
        );
        assert!(v.verify(&ch_ex2()));
    }

    #[test]
    fn partition_rejects_large_output_alphabet() {
        let n = MAX_PARTITION_OUTPUTS + 1;
        let rows = (0..2).map(|_| vec![1.0 / n as f64; n]).collect();
        let err = partition_exists(&single_state(rows)).unwrap_err();
        assert!(matches!(err, Error::AlphabetTooLarge { .. }));
    }

    #[test]
    fn state_group_examples() {
        assert_eq!(
            state_group_witness(&ch_ex1(0.5)),
            Some(Witness::StateGroup { x: 0, x_prime: 1, y: 1, states: vec![0, 1] })
        );
        assert_eq!(state_group_witness(&ch_ex3(0.3, 0.5)), None);
        assert_eq!(
            state_group_witness(&ch_ex2()),
            Some(Witness::StateGroup { x: 0, x_prime: 1, y: 0, states: vec![0] })
        );
    }

    #[test]
    fn tampered_witness_fails_verification() {
        let ch = ch_ex3(0.3, 0.5);
        let mut v = vl_positivity(&ch, SiModel::SC_C);
        v.witness = Some(Witness::StateDisprover { x: 0, x_prime: 1, y: 0, s: 0 });
        assert!(!v.verify(&ch));
        v.witness = None;
        assert!(!v.verify(&ch));
        v.rationale = Condition::CommonDisprover;
        v.witness = Some(Witness::StateDisprover { x: 1, x_prime: 0, y: 0, s: 1 });
        assert!(!v.verify(&ch));
    }

    #[test]
    fn verdict_report_serializes() {
        let v = vl_positivity(&ch_ex1(0.5), SiModel::NONE);
        let json = serde_json::to_value(v.report(SiModel::NONE, Regime::VariableLength)).unwrap();
        assert_eq!(json["decision"], "positive");
        assert_eq!(json["condition"], "common_disprover");
        assert_eq!(json["witness"]["kind"], "disprover");
        assert_eq!(json["regime"], "variable_length");
    }
}
