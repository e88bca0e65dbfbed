//! Property tests: decomposition invariants under random update sequences
//! and oracle optimality over enumerable regions.

use condgrad::active_set::{ActiveSet, ActiveSetUpdate};
use condgrad::point::Point;
use condgrad::region::FeasibleRegion;
use condgrad::trace::format_float;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn active_set_invariants_survive_random_update_sequences(
        ops in prop::collection::vec((0..3usize, 0..6usize, 0.0f64..1.0), 1..40)
    ) {
        let n = 6;
        let mut active = ActiveSet::singleton(Point::unit(n, 0));
        for (kind, idx, frac) in ops {
            let vertex = Point::unit(n, idx);
            let update = match kind {
                0 => ActiveSetUpdate::FwStep { vertex, gamma: frac },
                1 => {
                    // admissible away step on an existing atom
                    match active.weight_of(&vertex) {
                        Some(w) if w < 1.0 => ActiveSetUpdate::AwayStep {
                            vertex,
                            gamma: frac * (w / (1.0 - w)),
                        },
                        _ => continue,
                    }
                }
                _ => {
                    let from = active.atoms()[idx % active.len()].clone();
                    let w = active.weight_of(&from).unwrap();
                    ActiveSetUpdate::Pairwise { from, to: vertex, gamma: frac * w }
                }
            };
            active.update(update).unwrap();
            prop_assert!(active.check_invariants().is_ok());
            let sum: f64 = active.weights().iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn lmo_beats_every_enumerated_vertex(
        c in prop::collection::vec(-5.0f64..5.0, 6),
        tau in 0.5f64..3.0
    ) {
        for region in [
            FeasibleRegion::Simplex { n: 6 },
            FeasibleRegion::L1Ball { n: 6, tau },
            FeasibleRegion::Hypercube01 { n: 6 },
        ] {
            let cost = Point::new(c.clone());
            let v = region.lmo(&cost).unwrap();
            let val = cost.dot(&v);
            let vertices = region.enumerate_vertices().unwrap();
            // the answer is an extreme point of the declared region
            prop_assert!(vertices.contains(&v));
            for w in vertices {
                prop_assert!(val <= cost.dot(&w) + 1e-12);
            }
        }
    }

    #[test]
    fn trace_floats_round_trip(v in prop::num::f64::NORMAL) {
        let s = format_float(v);
        prop_assert_eq!(s.parse::<f64>().unwrap(), v);
    }
}
