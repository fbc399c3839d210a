//! Property-based and exhaustive invariant checks, pitting the library
//! against definition-literal oracles that travel a different algebraic
//! route (generators and nonnegative least squares instead of half-space
//! normals, hand-rolled loops instead of library scans).

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use evp_core::cones::{approx_min, pareto_min, Cone, PayoffVec, VariableOrdering};
use evp_core::goal::{build_resource_instance, PayoffRule, ResourceSpec, Sense};
use evp_core::quasimetric::validate_quasimetric;
use evp_core::solver::solve;
use evp_core::worthwhile::{
    delta_payoff, vector_worthwhile_set, DeltaParams, MonotoneFn, RatioSchedule, ScalarModel,
};
use evp_core::FeasiblePair;

fn coord() -> impl Strategy<Value = f64> {
    (-1000i64..=1000).prop_map(|v| v as f64 / 100.0)
}

fn point(m: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(coord(), m)
}

proptest! {
    #[test]
    fn order_is_reflexive(m in 1usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ordering = VariableOrdering::constant(narrow_cone(m));
        let p = pv(&(0..m).map(|_| {
            use rand::Rng;
            rng.random_range(-10.0..10.0)
        }).collect::<Vec<_>>());
        prop_assert!(ordering.leq_under(&p, &p).unwrap());
    }

    #[test]
    fn order_is_antisymmetric_on_pointed_cones(
        m in 1usize..=3,
        base in point(3),
        coeffs in proptest::collection::vec(0.0f64..2.0, 3),
    ) {
        let cone = narrow_cone(m);
        let ordering = VariableOrdering::constant(cone.clone());
        let p1 = pv(&base[..m]);
        let mut z = vec![0.0; m];
        for (g, c) in cone.generators().iter().zip(&coeffs) {
            for (zi, gi) in z.iter_mut().zip(g) {
                *zi += c * gi;
            }
        }
        let p2 = p1.sub(&pv(&z));
        prop_assert!(ordering.leq_under(&p1, &p2).unwrap());
        if ordering.leq_under(&p2, &p1).unwrap() {
            // both directions force the step to be (numerically) zero
            prop_assert!(pv(&z).norm() <= 1e-6);
        }
    }

    #[test]
    fn common_cone_generators_lie_in_every_anchor_cone(
        m in 2usize..=3,
        a in point(3),
        b in point(3),
    ) {
        let ordering = VariableOrdering::new(vec![
            (pv(&a[..m]), narrow_cone(m)),
            (pv(&b[..m]), wide_cone(m)),
        ]).unwrap();
        let theta_k = ordering.common_cone(None).unwrap();
        for g in theta_k.generators() {
            for (_, cone) in ordering.anchors() {
                prop_assert!(cone.contains(&pv(g)).unwrap());
            }
        }
    }

    #[test]
    fn pareto_agrees_with_the_generator_oracle(
        m in 1usize..=3,
        seed in any::<u64>(),
        count in 1usize..=20,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let points: Vec<PayoffVec> = (0..count)
            .map(|_| pv(&(0..m).map(|_| round3(rng.random_range(0.0..10.0))).collect::<Vec<_>>()))
            .collect();
        let ordering = VariableOrdering::constant(if rng.random_bool(0.5) {
            wide_cone(m)
        } else {
            narrow_cone(m)
        });
        let got = pareto_min(&points, &ordering).unwrap();
        let want = oracle_pareto(&points, &ordering);
        prop_assert_eq!(got, want);
    }

    #[test]
    fn approx_min_agrees_with_the_generator_oracle(
        m in 1usize..=3,
        seed in any::<u64>(),
        count in 1usize..=20,
        eps_milli in 1u64..=3000,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let points: Vec<PayoffVec> = (0..count)
            .map(|_| pv(&(0..m).map(|_| round3(rng.random_range(0.0..10.0))).collect::<Vec<_>>()))
            .collect();
        let ordering = VariableOrdering::constant(wide_cone(m));
        let xi = pv(&vec![1.0 / (m as f64).sqrt(); m]);
        let eps = eps_milli as f64 / 1000.0;
        let got = approx_min(&points, &ordering, eps, &xi).unwrap();
        let want = oracle_approx_min(&points, &ordering, eps, &xi);
        prop_assert_eq!(got, want);
    }

    #[test]
    fn normals_and_generators_agree_away_from_the_boundary(
        m in 1usize..=3,
        coeffs in proptest::collection::vec(0.0f64..3.0, 3),
        probe in point(3),
    ) {
        for cone in [wide_cone(m), narrow_cone(m)] {
            // nonnegative combinations are inside under both routes
            let mut inside = vec![0.0; m];
            for (g, c) in cone.generators().iter().zip(&coeffs) {
                for (zi, gi) in inside.iter_mut().zip(g) {
                    *zi += c * gi;
                }
            }
            let inside = pv(&inside);
            prop_assert!(cone.contains(&inside).unwrap());
            prop_assert!(contains_by_generators(&cone, &inside));

            // clear half-space violations are outside under both routes
            let probe = pv(&probe[..m]);
            let worst = cone
                .normals()
                .iter()
                .map(|n| n.iter().zip(probe.as_slice()).map(|(a, b)| a * b).sum::<f64>())
                .fold(f64::INFINITY, f64::min);
            if worst < -1e-6 {
                prop_assert!(!cone.contains(&probe).unwrap());
                prop_assert!(!contains_by_generators(&cone, &probe));
            }
        }
    }

    #[test]
    fn nesting_holds_for_corner_anchored_orderings(
        m in 2usize..=3,
        seed in any::<u64>(),
    ) {
        // Anchors at the componentwise extremes of a payoff box, narrow
        // cone at the bottom: any comparable in-box pair selects nested
        // cones, so generator nesting must hold.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let lo = vec![0.0; m];
        let hi = vec![10.0; m];
        let ordering = VariableOrdering::new(vec![
            (pv(&lo), narrow_cone(m)),
            (pv(&hi), wide_cone(m)),
        ]).unwrap();
        for _ in 0..20 {
            let p = pv(&(0..m).map(|_| rng.random_range(0.0..10.0)).collect::<Vec<_>>());
            let q = pv(&(0..m).map(|_| rng.random_range(0.0..10.0)).collect::<Vec<_>>());
            if ordering.leq_under(&p, &q).unwrap() {
                let upper = ordering.cone_at(&p).unwrap();
                let lower = ordering.cone_at(&q).unwrap();
                for g in lower.generators() {
                    prop_assert!(upper.contains(&pv(g)).unwrap());
                }
            }
        }
    }

    #[test]
    fn accepted_quasimetrics_satisfy_the_oracle(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let mut matrix = random_closure_matrix(&mut rng, n);
        // half the time, poke one entry to (maybe) break something
        if rng.random_bool(0.5) {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            matrix[i][j] += rng.random_range(0.0..10.0);
        }
        match validate_quasimetric(matrix.clone()).unwrap() {
            Ok(space) => {
                prop_assert!(oracle_quasimetric_ok(space.matrix()));
            }
            Err(report) => {
                prop_assert!(!oracle_quasimetric_ok(&matrix));
                prop_assert!(!report.violations.is_empty());
            }
        }
    }

    #[test]
    fn set_radius_is_monotone_in_the_subset(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        use rand::Rng;
        let space = validate_quasimetric(random_closure_matrix(&mut rng, n))
            .unwrap()
            .unwrap();
        let center = rng.random_range(0..n);
        let big: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.7)).collect();
        if big.is_empty() {
            return Ok(());
        }
        let small: Vec<usize> = big
            .iter()
            .copied()
            .filter(|_| rng.random_bool(0.6))
            .collect();
        if small.is_empty() {
            return Ok(());
        }
        prop_assert!(
            space.set_radius(center, &small).unwrap()
                <= space.set_radius(center, &big).unwrap()
        );
    }

    #[test]
    fn resource_allocations_always_sum_back_to_the_means(
        levels in proptest::collection::vec(0u8..=4, 1..=4),
        activities in 1usize..=3,
    ) {
        let grid: Vec<f64> = {
            let mut g: Vec<f64> = levels.iter().map(|&v| v as f64).collect();
            g.sort_by(f64::total_cmp);
            g.dedup();
            g
        };
        let spec = ResourceSpec {
            d: 1,
            activities,
            grid: vec![grid.clone()],
            rules: (0..activities)
                .map(|j| PayoffRule::Linear {
                    omega_coeff: vec![j as f64 + 1.0],
                    x_coeff: vec![],
                    offset: 0.0,
                })
                .collect(),
            up_cost: 1.0,
            down_cost: 2.0,
            ordering: None,
            theta: None,
            sense: Sense::Costs,
        };
        let Ok((gs, _)) = build_resource_instance(&spec) else {
            return Ok(()); // every means dropped is a legitimate outcome
        };
        // replay the tuple enumeration independently and check the sums
        use itertools::Itertools;
        let tuples: Vec<Vec<f64>> = (0..activities)
            .map(|_| grid.iter().cloned())
            .multi_cartesian_product()
            .collect();
        for pair in gs.feasible_pairs() {
            let label = gs.means_label(pair.x);
            let x: f64 = label
                .trim_start_matches("x(")
                .trim_end_matches(')')
                .parse()
                .unwrap();
            let total: f64 = tuples[pair.omega].iter().sum();
            prop_assert!((total - x).abs() <= 1e-9);
        }
    }
}

// ---------------------------------------------------------------------------
// Exhaustive scans over seeded gate-passing instances
// ---------------------------------------------------------------------------

#[test]
fn worthwhile_sets_are_reflexive_and_nested() {
    for seed in 0..25u64 {
        let (gs, params) = seeded_instance(seed);
        let delta = DeltaParams::new(params.xi.clone(), params.ratio()).unwrap();
        for pair in gs.feasible_pairs() {
            let w = vector_worthwhile_set(&gs, pair, &delta).unwrap();
            let own = w.iter().find(|(x, _)| *x == pair.x);
            assert!(
                own.is_some_and(|(_, wits)| wits.contains(&pair.omega)),
                "seed {seed}: {pair:?} missing from its own worthwhile set"
            );
            // every member, through any witness, spawns a subset
            let means_of = |set: &[(usize, Vec<usize>)]| {
                set.iter().map(|(x, _)| *x).collect::<Vec<_>>()
            };
            let outer = means_of(&w);
            for (xp, witnesses) in &w {
                for &wp in witnesses {
                    let inner = vector_worthwhile_set(
                        &gs,
                        FeasiblePair::new(*xp, wp),
                        &delta,
                    )
                    .unwrap();
                    for x in means_of(&inner) {
                        assert!(
                            outer.contains(&x),
                            "seed {seed}: W({xp},{wp}) escapes W({},{})",
                            pair.x,
                            pair.omega
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn worthwhile_sets_shrink_as_the_ratio_grows() {
    for seed in 0..25u64 {
        let (gs, params) = seeded_instance(seed);
        let lo = DeltaParams::new(params.xi.clone(), 0.5).unwrap();
        let hi = DeltaParams::new(params.xi.clone(), 2.5).unwrap();
        for pair in gs.feasible_pairs() {
            let big = vector_worthwhile_set(&gs, pair, &lo).unwrap();
            let small = vector_worthwhile_set(&gs, pair, &hi).unwrap();
            for (x, wits) in &small {
                let outer = big.iter().find(|(bx, _)| bx == x);
                assert!(
                    outer.is_some_and(|(_, bw)| wits.iter().all(|w| bw.contains(w))),
                    "seed {seed}: member ({x}, {wits:?}) appears only at the higher ratio"
                );
            }
        }
    }
}

#[test]
fn a_change_is_worthwhile_iff_its_net_payoff_is_a_domination_factor() {
    for seed in 0..25u64 {
        let (gs, params) = seeded_instance(seed);
        let delta = DeltaParams::new(params.xi.clone(), params.ratio()).unwrap();
        let pairs = gs.feasible_pairs();
        for &from in &pairs {
            let w = vector_worthwhile_set(&gs, from, &delta).unwrap();
            let cone = gs.ordering().cone_at(gs.cost(from)).unwrap();
            for &to in &pairs {
                let d = delta_payoff(&gs, from, to, &delta).unwrap();
                let in_cone = cone.contains(&d).unwrap();
                let listed = w
                    .iter()
                    .any(|(x, wits)| *x == to.x && wits.contains(&to.omega));
                assert_eq!(in_cone, listed, "seed {seed}, {from:?} -> {to:?}");
            }
        }
    }
}

#[test]
fn scalar_and_vector_models_agree_in_one_dimension() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    use rand::Rng;
    for _ in 0..30 {
        let n = rng.random_range(2..=9usize);
        let matrix = random_closure_matrix(&mut rng, n);
        let costs: Vec<f64> = (0..n).map(|_| round3(rng.random_range(0.0..10.0))).collect();
        let ratio = round3(rng.random_range(0.1..3.0));

        let space = validate_quasimetric(matrix).unwrap().unwrap();
        let model = ScalarModel::new(
            space.clone(),
            costs.clone(),
            Sense::Costs,
            MonotoneFn::Identity,
            MonotoneFn::Identity,
            RatioSchedule::Constant(ratio),
        )
        .unwrap();

        let gs = evp_core::GoalSystem::new(
            (0..n).map(|i| format!("p{i}")).collect(),
            space,
            vec!["w0".into()],
            vec![vec![0]; n],
            costs.iter().map(|&c| vec![Some(pv(&[c]))]).collect(),
            VariableOrdering::constant(Cone::orthant(1)),
            Cone::orthant(1),
            Sense::Costs,
        )
        .unwrap();
        let delta = DeltaParams::new(pv(&[1.0]), ratio).unwrap();

        for x in 0..n {
            let scalar = model.worthwhile_set(x, ratio).unwrap();
            let vector: Vec<usize> = vector_worthwhile_set(&gs, FeasiblePair::new(x, 0), &delta)
                .unwrap()
                .into_iter()
                .map(|(xp, _)| xp)
                .collect();
            assert_eq!(scalar, vector, "x = {x}");
        }
    }
}

#[test]
fn solves_are_deterministic() {
    for seed in [3u64, 17, 40] {
        let (gs, params) = seeded_instance(seed);
        let a = solve(&gs, &params).unwrap();
        let b = solve(&gs, &params).unwrap();
        assert_eq!(
            serde_json::to_string(&a.trajectory).unwrap(),
            serde_json::to_string(&b.trajectory).unwrap()
        );
        assert_eq!((a.x_star, a.omega_star), (b.x_star, b.omega_star));
    }
}
