//! Transformations from a state-dependent channel to stateless channels.
//!
//! Each reduction captures one pattern of state knowledge:
//!
//! * [`average_states`]: nobody uses the state, so the state is averaged out.
//! * [`shannon_strategy_channel`]: the encoder sees the current state and
//!   picks an input through a map `u: S -> X` chosen ahead of time.
//! * [`joint_output_channel`]: the decoder sees the state, so `(y, s)` is the
//!   effective output.
//! * [`extend_with_termination`]: adds a noiseless end-of-transmission letter.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channel::{Dmc, SdDmc};
use crate::error::{Error, Result};

/// Default cap on `|X|^|S|` for the strategy alphabet.
pub const DEFAULT_STRATEGY_CAP: usize = 4096;

/// Label of the termination letter added by [`extend_with_termination`].
pub const TERMINATION_LABEL: &str = "T";

/// A Shannon strategy: the input to send in each state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrategyLetter(Vec<usize>);

impl StrategyLetter {
    pub fn new(map: Vec<usize>) -> Self {
        StrategyLetter(map)
    }

    /// A strategy that ignores the state.
    pub fn constant(x: usize, num_states: usize) -> Self {
        StrategyLetter(vec![x; num_states])
    }

    #[inline]
    pub fn input(&self, s: usize) -> usize {
        self.0[s]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Index of this strategy in the lexicographic enumeration over `|X|` inputs.
    pub fn index(&self, num_inputs: usize) -> usize {
        self.0.iter().fold(0, |acc, &x| acc * num_inputs + x)
    }

    /// Inverse of [`StrategyLetter::index`].
    pub fn from_index(mut index: usize, num_inputs: usize, num_states: usize) -> Self {
        let mut map = vec![0; num_states];
        for slot in map.iter_mut().rev() {
            *slot = index % num_inputs;
            index /= num_inputs;
        }
        StrategyLetter(map)
    }
}

impl fmt::Display for StrategyLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "u({})", parts.join(","))
    }
}

/// Number of strategy letters, `|X|^|S|`, or an error when it exceeds `cap`.
pub fn strategy_count(channel: &SdDmc, cap: usize) -> Result<usize> {
    let nx = channel.num_inputs() as u128;
    let size = (0..channel.num_states()).try_fold(1u128, |acc, _| acc.checked_mul(nx));
    match size {
        Some(size) if size <= cap as u128 => Ok(size as usize),
        Some(size) => Err(Error::AlphabetTooLarge {
            what: "strategy alphabet",
            size,
            cap: cap as u128,
        }),
        None => Err(Error::AlphabetTooLarge {
            what: "strategy alphabet",
            size: u128::MAX,
            cap: cap as u128,
        }),
    }
}

/// All strategy letters in lexicographic order of `(u(s0), u(s1), ...)`.
pub fn strategy_letters(channel: &SdDmc, cap: usize) -> Result<Vec<StrategyLetter>> {
    let count = strategy_count(channel, cap)?;
    Ok((0..count)
        .map(|i| StrategyLetter::from_index(i, channel.num_inputs(), channel.num_states()))
        .collect())
}

/// `W~(y|x) = sum_s Q(s) W(y|x,s)`.
///
/// Entries of the reduced channels are clipped at 1 to absorb rounding.
pub fn average_states(channel: &SdDmc) -> Dmc {
    let q = channel.state_probs();
    let rows = (0..channel.num_inputs())
        .map(|x| {
            (0..channel.num_outputs())
                .map(|y| (0..channel.num_states()).map(|s| q[s] * channel.prob(y, x, s)).sum::<f64>().min(1.0))
                .collect()
        })
        .collect();
    Dmc::with_labels(rows, channel.x_labels().to_vec(), channel.y_labels().to_vec())
        .expect("averaging preserves stochastic rows")
}

/// `W'(y|u) = sum_s Q(s) W(y|u(s),s)` over every strategy letter `u`.
///
/// Strategy `i` of the returned list is input `i` of the returned channel.
pub fn shannon_strategy_channel(channel: &SdDmc, cap: usize) -> Result<(Dmc, Vec<StrategyLetter>)> {
    let letters = strategy_letters(channel, cap)?;
    let q = channel.state_probs();
    let rows = letters
        .iter()
        .map(|u| {
            (0..channel.num_outputs())
                .map(|y| {
                    (0..channel.num_states())
                        .map(|s| q[s] * channel.prob(y, u.input(s), s))
                        .sum::<f64>()
                        .min(1.0)
                })
                .collect()
        })
        .collect();
    let labels = letters.iter().map(ToString::to_string).collect();
    let dmc = Dmc::with_labels(rows, labels, channel.y_labels().to_vec())
        .expect("strategy averaging preserves stochastic rows");
    Ok((dmc, letters))
}

/// Output index of the pair `(y, s)` in [`joint_output_channel`].
#[inline]
pub fn joint_index(y: usize, s: usize, num_states: usize) -> usize {
    y * num_states + s
}

/// Inverse of [`joint_index`].
#[inline]
pub fn split_joint_index(index: usize, num_states: usize) -> (usize, usize) {
    (index / num_states, index % num_states)
}

/// `W-(y,s|x) = Q(s) W(y|x,s)`, with outputs ordered y-major.
pub fn joint_output_channel(channel: &SdDmc) -> Dmc {
    let ns = channel.num_states();
    let q = channel.state_probs();
    let rows = (0..channel.num_inputs())
        .map(|x| {
            (0..channel.num_outputs() * ns)
                .map(|j| {
                    let (y, s) = split_joint_index(j, ns);
                    (q[s] * channel.prob(y, x, s)).min(1.0)
                })
                .collect()
        })
        .collect();
    let labels = (0..channel.num_outputs() * ns)
        .map(|j| {
            let (y, s) = split_joint_index(j, ns);
            format!("({},{})", channel.y_labels()[y], channel.s_labels()[s])
        })
        .collect();
    Dmc::with_labels(rows, channel.x_labels().to_vec(), labels)
        .expect("joint output preserves stochastic rows")
}

/// Adds an input `T` that always produces a new output `T`; the original
/// inputs never produce `T`.
pub fn extend_with_termination(channel: &Dmc) -> Dmc {
    let ny = channel.num_outputs();
    let mut rows: Vec<Vec<f64>> = channel
        .rows()
        .map(|row| {
            let mut r = row.to_vec();
            r.push(0.0);
            r
        })
        .collect();
    let mut t_row = vec![0.0; ny + 1];
    t_row[ny] = 1.0;
    rows.push(t_row);
    let mut x_labels = channel.x_labels().to_vec();
    x_labels.push(TERMINATION_LABEL.to_owned());
    let mut y_labels = channel.y_labels().to_vec();
    y_labels.push(TERMINATION_LABEL.to_owned());
    Dmc::with_labels(rows, x_labels, y_labels).expect("termination extension is stochastic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::STOCHASTIC_TOL;
    use crate::fixtures::*;

    fn assert_rows_stochastic(d: &Dmc) {
        for row in d.rows() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() <= STOCHASTIC_TOL);
        }
    }

    fn matrix(d: &Dmc) -> Vec<Vec<f64>> {
        d.to_doc().w
    }

    #[test]
    fn averaging_a_single_state_is_identity() {
        assert_eq!(matrix(&average_states(&ch_triv())), matrix(&identity(2)));
    }

    #[test]
    fn averaged_example_one() {
        // Independent oracle: explicit per-entry sums written out by hand.
        let ch = ch_ex1(0.5);
        let oracle = |y: usize, x: usize| 0.5 * ch.prob(y, x, 0) + 0.5 * ch.prob(y, x, 1);
        let avg = average_states(&ch);
        let expected = [[1.0, 0.0], [0.25, 0.75]];
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(avg.prob(y, x), expected[x][y]);
                assert_eq!(avg.prob(y, x), oracle(y, x));
            }
        }
    }

    #[test]
    fn averaged_example_two_is_bsc_half() {
        assert_eq!(matrix(&average_states(&ch_ex2())), vec![vec![0.5, 0.5]; 2]);
    }

    #[test]
    fn strategy_channel_of_identity() {
        let (d, letters) = shannon_strategy_channel(&ch_triv(), DEFAULT_STRATEGY_CAP).unwrap();
        assert_eq!(letters, vec![StrategyLetter::new(vec![0]), StrategyLetter::new(vec![1])]);
        assert_eq!(matrix(&d), matrix(&identity(2)));
    }

    #[test]
    fn strategy_channel_of_example_one() {
        let ch = ch_ex1(0.5);
        let (d, letters) = shannon_strategy_channel(&ch, DEFAULT_STRATEGY_CAP).unwrap();
        assert_eq!(d.num_inputs(), 4);
        assert_eq!(letters[0], StrategyLetter::new(vec![0, 0]));
        assert_eq!(letters[1], StrategyLetter::new(vec![0, 1]));
        assert_eq!(letters[3], StrategyLetter::new(vec![1, 1]));
        assert_eq!(d.prob(1, 0), 0.0);
        // u = (1, 0): sends 1 in s0 and 0 in s1.
        assert_eq!(d.prob(0, 2), 0.5 * 0.5 + 0.5 * 1.0);
        assert_rows_stochastic(&d);
    }

    #[test]
    fn strategy_cap_is_enforced() {
        let err = shannon_strategy_channel(&ch_ex1(0.5), 3).unwrap_err();
        assert!(matches!(err, Error::AlphabetTooLarge { size: 4, cap: 3, .. }));
    }

    #[test]
    fn strategy_index_round_trips() {
        for i in 0..27 {
            let u = StrategyLetter::from_index(i, 3, 3);
            assert_eq!(u.index(3), i);
        }
        assert_eq!(StrategyLetter::from_index(5, 3, 2).as_slice(), &[1, 2]);
    }

    #[test]
    fn joint_output_layout() {
        let ch = ch_ex3(0.3, 0.5);
        let d = joint_output_channel(&ch);
        assert_eq!(d.num_outputs(), 4);
        assert_eq!(d.y_labels()[joint_index(1, 1, 2)], "(y1,s1)");
        assert_eq!(d.prob(joint_index(1, 1, 2), 0), 0.0);
        assert_eq!(d.prob(joint_index(1, 0, 2), 0), 0.5 * 0.3);
        assert_rows_stochastic(&d);
        assert_rows_stochastic(&joint_output_channel(&ch_ex1(0.5)));
        assert_eq!(matrix(&joint_output_channel(&ch_triv())), matrix(&identity(2)));
    }

    #[test]
    fn termination_extension() {
        assert_eq!(matrix(&extend_with_termination(&identity(2))), matrix(&identity(3)));
        let e = extend_with_termination(&bsc(0.3));
        assert_eq!(matrix(&e)[2], vec![0.0, 0.0, 1.0]);
        assert_eq!((0..3).map(|x| e.prob(2, x)).collect::<Vec<_>>(), vec![0.0, 0.0, 1.0]);
        assert_eq!(e.y_labels().last().unwrap(), TERMINATION_LABEL);
        assert_eq!(extend_with_termination(&pentagon()).num_outputs(), 6);
    }
}
