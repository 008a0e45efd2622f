//! Named reference channels used across tests, benches, and the CLI docs.

use rand::Rng;

use crate::channel::{Dmc, SdDmc};
use crate::rng::{domain, substream};

fn labelled(w: Vec<Vec<Vec<f64>>>, q: Vec<f64>, states: &[&str]) -> SdDmc {
    let ch = SdDmc::new(w, q).expect("fixture is a valid channel");
    let mut doc = ch.to_doc();
    doc.states = Some(states.iter().map(|s| s.to_string()).collect());
    SdDmc::from_doc(doc).expect("fixture is a valid channel")
}

/// One state, noiseless binary channel.
pub fn ch_triv() -> SdDmc {
    SdDmc::new(vec![vec![vec![1.0, 0.0], vec![0.0, 1.0]]], vec![1.0]).expect("valid")
}

/// Z-channel in `s0` (input 1 lands on 0 with probability `p`), noiseless in `s1`, uniform states.
pub fn ch_ex1(p: f64) -> SdDmc {
    labelled(
        vec![
            vec![vec![1.0, 0.0], vec![p, 1.0 - p]],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        ],
        vec![0.5, 0.5],
        &["s0", "s1"],
    )
}

/// Bit flip in `s0`, noiseless in `s1`, uniform states.
pub fn ch_ex2() -> SdDmc {
    labelled(
        vec![
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        ],
        vec![0.5, 0.5],
        &["s0", "s1"],
    )
}

/// BSC(`p`) in `s0` with probability `q`, noiseless in `s1`.
pub fn ch_ex3(p: f64, q: f64) -> SdDmc {
    labelled(
        vec![
            vec![vec![1.0 - p, p], vec![p, 1.0 - p]],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        ],
        vec![q, 1.0 - q],
        &["s0", "s1"],
    )
}

/// Binary memory cell: stuck at 0 or at 1 with probability `p/2` each, otherwise noiseless.
pub fn stuck_at(p: f64) -> SdDmc {
    labelled(
        vec![
            vec![vec![1.0, 0.0], vec![1.0, 0.0]],
            vec![vec![0.0, 1.0], vec![0.0, 1.0]],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        ],
        vec![p / 2.0, p / 2.0, 1.0 - p],
        &["stuck0", "stuck1", "good"],
    )
}

/// Single-state channel wrapping a stateless matrix.
pub fn single_state(rows: Vec<Vec<f64>>) -> SdDmc {
    SdDmc::new(vec![rows], vec![1.0]).expect("valid")
}

pub fn identity(n: usize) -> Dmc {
    let rows = (0..n)
        .map(|x| (0..n).map(|y| if x == y { 1.0 } else { 0.0 }).collect())
        .collect();
    Dmc::new(rows).expect("valid")
}

pub fn bsc(p: f64) -> Dmc {
    Dmc::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]]).expect("valid")
}

/// Five inputs; input `x` reaches outputs `x` and `x + 1 mod 5` equally.
pub fn pentagon() -> Dmc {
    let rows = (0..5)
        .map(|x| {
            (0..5)
                .map(|y| if y == x || y == (x + 1) % 5 { 0.5 } else { 0.0 })
                .collect()
        })
        .collect();
    Dmc::new(rows).expect("valid")
}

/// A reproducible random channel with `2..=max_inputs` inputs,
/// `2..=max_outputs` outputs and `1..=max_states` states.
///
/// Supports are sparse enough that structural zeros, deterministic rows and
/// disjoint supports all show up regularly. Every output stays reachable and
/// every state has positive probability.
pub fn random_channel(seed: u64, max_inputs: usize, max_outputs: usize, max_states: usize) -> SdDmc {
    let mut rng = substream(seed, domain::CHANNEL, 0);
    let nx = rng.random_range(2..=max_inputs.max(2));
    let ny = rng.random_range(2..=max_outputs.max(2));
    let ns = rng.random_range(1..=max_states.max(1));
    random_channel_with(&mut rng, nx, ny, ns)
}

/// Like [`random_channel`] with exact alphabet sizes.
pub fn random_channel_with<R: Rng + ?Sized>(rng: &mut R, nx: usize, ny: usize, ns: usize) -> SdDmc {
    let density = [0.3, 0.5, 0.7][rng.random_range(0..3)];
    let mut w: Vec<Vec<Vec<f64>>> = (0..ns)
        .map(|_| {
            (0..nx)
                .map(|_| {
                    let mut row: Vec<f64> = (0..ny)
                        .map(|_| if rng.random_bool(density) { rng.random_range(0.05..1.0) } else { 0.0 })
                        .collect();
                    if row.iter().all(|&v| v == 0.0) {
                        row[rng.random_range(0..ny)] = 1.0;
                    }
                    row
                })
                .collect()
        })
        .collect();
    for y in 0..ny {
        if !w.iter().flatten().any(|row| row[y] > 0.0) {
            let (s, x) = (rng.random_range(0..ns), rng.random_range(0..nx));
            w[s][x][y] = rng.random_range(0.05..1.0);
        }
    }
    for row in w.iter_mut().flatten() {
        let total: f64 = row.iter().sum();
        row.iter_mut().for_each(|v| *v /= total);
    }
    let q: Vec<f64> = (0..ns).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = q.iter().sum();
    SdDmc::new(w, q.iter().map(|v| v / total).collect()).expect("generator builds valid channels")
}

/// A reproducible random stateless channel.
pub fn random_dmc(seed: u64, max_inputs: usize, max_outputs: usize) -> Dmc {
    let mut rng = substream(seed, domain::CHANNEL, 1);
    let nx = rng.random_range(2..=max_inputs.max(2));
    let ny = rng.random_range(2..=max_outputs.max(2));
    random_channel_with(&mut rng, nx, ny, 1)
        .state_channel(0)
        .expect("single state")
}
