//! Entropy and mutual information in bits, with `0 log 0 = 0`.

use crate::channel::{Dmc, SdDmc};

/// `-p log2 p`, zero at `p = 0`.
#[inline]
pub fn neg_plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

pub fn entropy(p: &[f64]) -> f64 {
    p.iter().copied().map(neg_plogp).sum()
}

/// `D(p || q)` in bits; infinite when `p` puts mass where `q` has none.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(&a, _)| a > 0.0)
        .map(|(&a, &b)| if b > 0.0 { a * (a / b).log2() } else { f64::INFINITY })
        .sum()
}

/// Output law `sum_x p(x) W(.|x)`.
pub fn output_distribution(input: &[f64], channel: &Dmc) -> Vec<f64> {
    let mut out = vec![0.0; channel.num_outputs()];
    for (row, &px) in channel.rows().zip(input) {
        if px > 0.0 {
            for (o, &w) in out.iter_mut().zip(row) {
                *o += px * w;
            }
        }
    }
    out
}

/// `I(X;Y)` for input law `input` over `channel`.
pub fn mutual_information(input: &[f64], channel: &Dmc) -> f64 {
    let q = output_distribution(input, channel);
    channel
        .rows()
        .zip(input)
        .filter(|(_, &px)| px > 0.0)
        .map(|(row, &px)| px * kl_divergence(row, &q))
        .sum()
}

/// `I(X;Y|S) = sum_s Q(s) I(P(.|s), W(.|.,s))` for a per-state input law.
pub fn conditional_mutual_information(channel: &SdDmc, input_given_state: &[Vec<f64>]) -> f64 {
    channel
        .state_probs()
        .iter()
        .enumerate()
        .map(|(s, &qs)| {
            let dmc = channel.state_channel(s).expect("state in range");
            qs * mutual_information(&input_given_state[s], &dmc)
        })
        .sum()
}

/// Nonnegative entries summing to one within `tol`.
pub fn on_simplex(p: &[f64], tol: f64) -> bool {
    p.iter().all(|&v| v >= -tol) && (p.iter().sum::<f64>() - 1.0).abs() <= tol
}

/// Binary entropy `h2(p)`.
pub fn binary_entropy(p: f64) -> f64 {
    neg_plogp(p) + neg_plogp(1.0 - p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{bsc, identity};

    #[test]
    fn entropy_basics() {
        assert_eq!(entropy(&[0.5, 0.5]), 1.0);
        assert_eq!(entropy(&[1.0, 0.0]), 0.0);
        assert!((entropy(&[0.25; 4]) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn bsc_mutual_information_closed_form() {
        let p = 0.11;
        let mi = mutual_information(&[0.5, 0.5], &bsc(p));
        assert!((mi - (1.0 - binary_entropy(p))).abs() < 1e-12);
        assert_eq!(mutual_information(&[0.5, 0.5], &identity(2)), 1.0);
        assert_eq!(mutual_information(&[1.0, 0.0], &identity(2)), 0.0);
    }

    #[test]
    fn divergence_is_infinite_off_support() {
        assert!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]).is_infinite());
        assert_eq!(kl_divergence(&[1.0, 0.0], &[1.0, 0.0]), 0.0);
    }
}
