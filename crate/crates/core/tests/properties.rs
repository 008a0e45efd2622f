use proptest::prelude::*;

use sdchan_core::capacity::{
    blahut_arimoto, sanity_cap, vanishing_capacity, BaOptions, GpOptions, Maximizer, SolverOptions,
};
use sdchan_core::channel::STOCHASTIC_TOL;
use sdchan_core::fixtures::{random_channel, random_dmc};
use sdchan_core::info::{mutual_information, on_simplex};
use sdchan_core::oracles::{confusable_all_pairs_fl, matching_flag, DEFAULT_BUDGET};
use sdchan_core::positivity::*;
use sdchan_core::reductions::*;
use sdchan_core::rng::{dirichlet_ones, domain, substream};
use sdchan_core::simulation::{monte_carlo, DisproverPlan, HanSatoPlan, Link, Protocol, StopRule, Theorem5Plan};
use sdchan_core::{Dmc, Regime, SdDmc, SiModel};

fn channel() -> impl Strategy<Value = SdDmc> {
    any::<u64>().prop_map(|seed| random_channel(seed, 3, 3, 3))
}

fn single_state_channel() -> impl Strategy<Value = SdDmc> {
    any::<u64>().prop_map(|seed| random_channel(seed, 3, 3, 1))
}

fn stochastic(d: &Dmc) -> bool {
    d.rows().all(|r| (r.iter().sum::<f64>() - 1.0).abs() <= STOCHASTIC_TOL)
}

fn dmc_vl(d: &Dmc) -> bool {
    check_dmc_vl(d).decision.is_positive()
}

fn dmc_fl(d: &Dmc) -> bool {
    check_dmc_fl_feedback(d).decision.is_positive()
}

fn cheap_solver() -> SolverOptions {
    SolverOptions {
        gp: GpOptions {
            restarts: 2,
            enumeration_budget: 16,
            ..GpOptions::default()
        },
        ..SolverOptions::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn reductions_stay_stochastic(ch in channel()) {
        prop_assert!(stochastic(&average_states(&ch)));
        prop_assert!(stochastic(&shannon_strategy_channel(&ch, DEFAULT_STRATEGY_CAP).unwrap().0));
        prop_assert!(stochastic(&joint_output_channel(&ch)));
        prop_assert!(stochastic(&extend_with_termination(&average_states(&ch))));
    }

    #[test]
    fn variable_length_chain(ch in channel()) {
        let common = common_disprover(&ch).is_some();
        let strategy = strategy_disprover(&ch).is_some();
        let state = state_disprover(&ch).is_some();
        prop_assert!(!common || strategy);
        prop_assert!(!strategy || state);
        prop_assert!(!common || state_group_witness(&ch).is_some());
    }

    #[test]
    fn reduction_equivalences(ch in channel()) {
        prop_assert_eq!(common_disprover(&ch).is_some(), dmc_vl(&average_states(&ch)));
        let (strat, _) = shannon_strategy_channel(&ch, DEFAULT_STRATEGY_CAP).unwrap();
        prop_assert_eq!(strategy_disprover(&ch).is_some(), dmc_vl(&strat));
        let joint = joint_output_channel(&ch);
        prop_assert_eq!(state_disprover(&ch).is_some(), dmc_vl(&joint));
        prop_assert_eq!(uniform_non_confusable(&ch).is_some(), dmc_fl(&joint));
        prop_assert_eq!(averaged_non_confusable(&ch).is_some(), dmc_fl(&average_states(&ch)));
    }

    #[test]
    fn bounded_implies_variable(ch in channel()) {
        for si in SiModel::STANDARD {
            let bl = bl_positivity(&ch, si).unwrap();
            let vl = vl_positivity(&ch, si);
            prop_assert!(!bl.decision.is_positive() || vl.decision.is_positive(), "{}", si);
        }
    }

    #[test]
    fn positivity_grows_with_state_information(ch in channel()) {
        for a in SiModel::STANDARD {
            for b in SiModel::STANDARD {
                if a <= b {
                    for regime in Regime::ALL {
                        let va = positivity(&ch, a, regime).unwrap().decision.is_positive();
                        let vb = positivity(&ch, b, regime).unwrap().decision.is_positive();
                        prop_assert!(!va || vb, "{} <= {} under {}", a, b, regime);
                    }
                }
            }
        }
    }

    #[test]
    fn witnesses_verify(ch in channel()) {
        for si in SiModel::ALL {
            for regime in Regime::ALL {
                let v = positivity(&ch, si, regime).unwrap();
                prop_assert!(v.verify(&ch), "{} {} {:?}", si, regime, v);
                if v.decision == Decision::Positive {
                    prop_assert!(v.witness.is_some());
                }
            }
        }
    }

    #[test]
    fn single_state_collapse(ch in single_state_channel()) {
        let d = ch.state_channel(0).unwrap();
        for si in SiModel::ALL {
            prop_assert_eq!(vl_positivity(&ch, si).decision.is_positive(), dmc_vl(&d), "{}", si);
            prop_assert_eq!(bl_positivity(&ch, si).unwrap().decision.is_positive(), dmc_fl(&d), "{}", si);
        }
    }

    #[test]
    fn block_confusability_matches_bounded_verdicts(ch in channel()) {
        for si in SiModel::ALL {
            let zero = !bl_positivity(&ch, si).unwrap().decision.is_positive();
            if zero {
                for n in 1..=2 {
                    let c = confusable_all_pairs_fl(&ch, si.decoder_sees_state(), n, DEFAULT_BUDGET).unwrap();
                    prop_assert!(c.all_confusable, "{} n={}", si, n);
                }
            } else if let Some(flag) = matching_flag(si) {
                let c = confusable_all_pairs_fl(&ch, flag, 2, DEFAULT_BUDGET).unwrap();
                prop_assert!(!c.all_confusable, "{}", si);
            }
        }
    }

    #[test]
    fn blahut_arimoto_dominates_feasible_points(seed in any::<u64>()) {
        let d = random_dmc(seed, 3, 3);
        let r = blahut_arimoto(&d, &BaOptions::default()).unwrap();
        prop_assert!(r.value >= 0.0);
        prop_assert!(r.value <= sanity_cap(d.num_inputs(), d.num_outputs(), 1) + 1e-9);
        prop_assert!(r.certified_gap.unwrap() < 1e-9);
        let Maximizer::Input { p } = &r.maximizer else { unreachable!() };
        prop_assert!(on_simplex(p, 1e-9));
        let mut rng = substream(seed, domain::TRIAL, 0);
        for _ in 0..5 {
            let q = dirichlet_ones(d.num_inputs(), &mut rng);
            prop_assert!(mutual_information(&q, &d) <= r.value + 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn capacity_grows_with_state_information(ch in channel()) {
        let opts = cheap_solver();
        let values: Vec<(SiModel, f64)> = SiModel::ALL
            .iter()
            .map(|&si| (si, vanishing_capacity(&ch, si, &opts).unwrap().value))
            .collect();
        let bound = sanity_cap(ch.num_inputs(), ch.num_outputs(), ch.num_states());
        for &(a, va) in &values {
            prop_assert!((0.0..=bound + 1e-9).contains(&va));
            for &(b, vb) in &values {
                if a <= b {
                    prop_assert!(va <= vb + 1e-6, "{} = {} > {} = {}", a, va, b, vb);
                }
            }
        }
        let get = |si| values.iter().find(|(s, _)| *s == si).unwrap().1;
        prop_assert_eq!(get(SiModel::NONE), get(SiModel::SC_NONE));
        prop_assert_eq!(get(SiModel::C_C), get(SiModel::NC_C));
        prop_assert_eq!(get(SiModel::C_C), get(SiModel::NC_NC));
        prop_assert_eq!(get(SiModel::NONE_C), get(SiModel::SC_C));
    }

    #[test]
    fn protocols_never_err(ch in channel(), seed in any::<u64>()) {
        for si in SiModel::STANDARD {
            if let Ok(plan) = DisproverPlan::new(Link::for_model(&ch, si).unwrap()) {
                let stats = monte_carlo(&Protocol::Disprover(plan), 200, seed).unwrap();
                prop_assert_eq!(stats.errors, 0);
            }
            if vl_positivity(&ch, si).decision.is_positive() {
                let plan = HanSatoPlan::new(&ch, si, 2, 4, seed, 0).unwrap();
                let stats = monte_carlo(&Protocol::HanSato(plan), 100, seed).unwrap();
                prop_assert_eq!(stats.errors, 0);
            }
        }
        for rule in [StopRule::Relaxed, StopRule::Strict] {
            if let Ok(plan) = Theorem5Plan::new(&ch, rule) {
                let p = plan.success_probability();
                let stats = monte_carlo(&Protocol::Theorem5(plan), 2000, seed).unwrap();
                prop_assert_eq!(stats.errors, 0);
                prop_assert_eq!(stats.desyncs, 0);
                // Geometric rounds of two slots: mean 2/p, variance 4(1-p)/p^2.
                let sigma = (4.0 * (1.0 - p) / (p * p) / 2000.0).sqrt();
                prop_assert!((stats.mean_tau - 2.0 / p).abs() <= 5.0 * sigma + 1e-12);
            }
        }
    }
}
