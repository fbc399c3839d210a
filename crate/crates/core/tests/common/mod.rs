//! Shared helpers for the integration suites: definition-literal oracles
//! that deliberately take a different computational route than the library
//! (generator-based membership instead of half-space tests, hand-rolled
//! triple loops), plus small deterministic instance generators.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use evp_core::cones::{minkowski_membership, Cone, PayoffVec, VariableOrdering};
use evp_core::goal::Sense;
use evp_core::quasimetric::QuasimetricSpace;
use evp_core::scenario::{random_scenario, Scenario};
use evp_core::solver::SolveParams;
use evp_core::{FeasiblePair, GoalSystem};

pub fn pv(v: &[f64]) -> PayoffVec {
    PayoffVec::new(v.to_vec()).unwrap()
}

pub fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

/// The orthant and a strictly narrower pointed subcone, per dimension.
pub fn wide_cone(m: usize) -> Cone {
    Cone::orthant(m)
}

pub fn narrow_cone(m: usize) -> Cone {
    match m {
        1 => Cone::orthant(1),
        2 => Cone::new(
            vec![vec![1.0, 0.0], vec![-1.0, 1.0]],
            vec![vec![0.0, 1.0], vec![1.0, 1.0]],
        )
        .unwrap(),
        3 => Cone::new(
            vec![
                vec![-1.0, -1.0, 1.0],
                vec![0.0, 1.0, 0.0],
                vec![1.0, 0.0, 0.0],
            ],
            vec![
                vec![1.0, 0.0, 1.0],
                vec![0.0, 1.0, 1.0],
                vec![0.0, 0.0, 1.0],
            ],
        )
        .unwrap(),
        _ => panic!("cone families are defined for m <= 3"),
    }
}

/// Membership decided through the generator representation (nonnegative
/// least squares) rather than through the half-space normals.
pub fn contains_by_generators(cone: &Cone, p: &PayoffVec) -> bool {
    minkowski_membership(p, &[cone]).unwrap()
}

/// Definition-literal Pareto scan using the generator route: `p` survives
/// iff the shifted cone at `p` meets the set only in copies of `p`.
pub fn oracle_pareto(points: &[PayoffVec], ordering: &VariableOrdering) -> Vec<PayoffVec> {
    points
        .iter()
        .filter(|p| {
            let cone = ordering.cone_at(p).unwrap();
            points.iter().all(|q| {
                q.approx_eq(p, 1e-9) || !contains_by_generators(cone, &p.sub(q))
            })
        })
        .cloned()
        .collect()
}

/// Definition-literal approximate minimality using the generator route.
pub fn oracle_approx_min(
    points: &[PayoffVec],
    ordering: &VariableOrdering,
    eps: f64,
    xi: &PayoffVec,
) -> Vec<PayoffVec> {
    points
        .iter()
        .filter(|p| {
            let cone = ordering.cone_at(p).unwrap();
            let apex = p.sub(&xi.scale(eps));
            points
                .iter()
                .all(|q| !contains_by_generators(cone, &apex.sub(q)))
        })
        .cloned()
        .collect()
}

/// Hand-rolled quasimetric axiom oracle.
pub fn oracle_quasimetric_ok(matrix: &[Vec<f64>]) -> bool {
    let n = matrix.len();
    for (i, row) in matrix.iter().enumerate() {
        for (j, &q) in row.iter().enumerate() {
            if q < 0.0 {
                return false;
            }
            if i == j && q.abs() > 1e-12 {
                return false;
            }
            if i != j && q.abs() <= 1e-12 {
                return false;
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if matrix[i][k] > matrix[i][j] + matrix[j][k] + 1e-12 {
                    return false;
                }
            }
        }
    }
    true
}

/// Random strict quasimetric via shortest-path closure of positive arcs.
pub fn random_closure_matrix(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let mut q = vec![vec![0.0; n]; n];
    for (i, row) in q.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if i != j {
                *cell = rng.random_range(0.1..5.0);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = q[i][k] + q[k][j];
                if via < q[i][j] {
                    q[i][j] = via;
                }
            }
        }
    }
    q
}

pub fn symmetric_closure_matrix(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let mut q = random_closure_matrix(rng, n);
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (q[i][j] + q[j][i]);
            q[i][j] = v;
            q[j][i] = v;
        }
    }
    // re-close after averaging
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = q[i][k] + q[k][j];
                if via < q[i][j] {
                    q[i][j] = via;
                }
            }
        }
    }
    q
}

/// A random instance (with its parameters) drawn from the seeded scenario
/// generator; always passes the hypothesis gate.
pub fn seeded_instance(seed: u64) -> (GoalSystem, SolveParams) {
    let scenario = Scenario::from_file(random_scenario(seed)).expect("generated schema is valid");
    let loaded = scenario.instantiate().expect("generated instance builds");
    (loaded.gs, loaded.params)
}

/// Random payoff-independent instance: one payoff vector per point, a
/// constant or nested two-anchor ordering, and a closure quasimetric.
/// Returns everything needed for both the direct and the wrapped solve.
pub struct FixedPayoffInstance {
    pub space: QuasimetricSpace,
    pub payoffs: Vec<PayoffVec>,
    pub ordering: VariableOrdering,
    pub theta: Cone,
    pub params: SolveParams,
}

pub fn random_fixed_payoff(seed: u64, force_m1: bool, symmetric: bool) -> FixedPayoffInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=10usize);
    let m = if force_m1 {
        1
    } else {
        rng.random_range(1..=3usize)
    };
    let matrix = if symmetric {
        symmetric_closure_matrix(&mut rng, n)
    } else {
        random_closure_matrix(&mut rng, n)
    };
    let space = QuasimetricSpace::from_matrix_unchecked(matrix).unwrap();
    let payoffs: Vec<PayoffVec> = (0..n)
        .map(|_| pv(&(0..m).map(|_| round3(rng.random_range(0.0..10.0))).collect::<Vec<_>>()))
        .collect();

    let variable = m >= 2 && rng.random_bool(0.4);
    let ordering = if variable {
        let mut lo = vec![f64::INFINITY; m];
        let mut hi = vec![f64::NEG_INFINITY; m];
        for p in &payoffs {
            for i in 0..m {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        VariableOrdering::new(vec![
            (pv(&lo), narrow_cone(m)),
            (pv(&hi), wide_cone(m)),
        ])
        .unwrap()
    } else {
        VariableOrdering::constant(wide_cone(m))
    };

    let xi_gens: Vec<Vec<f64>> = if variable {
        narrow_cone(m).generators().to_vec()
    } else {
        wide_cone(m).generators().to_vec()
    };
    let mut xi = vec![0.0; m];
    for g in &xi_gens {
        for (s, c) in xi.iter_mut().zip(g) {
            *s += c;
        }
    }
    let norm = xi.iter().map(|c| c * c).sum::<f64>().sqrt();
    let xi: Vec<f64> = xi.iter().map(|c| c / norm).collect();

    let eps = round3(rng.random_range(0.5..3.0));
    let lambda = round3(rng.random_range(0.5..3.0));
    let x0 = rng.random_range(0..n);
    FixedPayoffInstance {
        space,
        payoffs,
        ordering,
        theta: Cone::orthant(m),
        params: SolveParams::new(eps, lambda, pv(&xi), FeasiblePair::new(x0, 0)),
    }
}

/// Wrap a fixed-payoff instance as a single-way goal system by hand, the
/// way the reduction is defined.
pub fn wrap_single_way(inst: &FixedPayoffInstance) -> GoalSystem {
    let n = inst.space.n();
    GoalSystem::new(
        (0..n).map(|i| format!("p{i}")).collect(),
        inst.space.clone(),
        vec!["w0".into()],
        vec![vec![0]; n],
        inst.payoffs.iter().map(|p| vec![Some(p.clone())]).collect(),
        inst.ordering.clone(),
        inst.theta.clone(),
        Sense::Costs,
    )
    .unwrap()
}
