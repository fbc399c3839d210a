//! Constructive descent to a variational trap.
//!
//! The walk repeatedly evaluates the worthwhile-change set at the current
//! feasible pair, moves to the farthest worthwhile means (the finite max
//! replaces the sup-with-slack of the infinite setting), and stops when
//! staying is the only admissible move. A refinement pass then selects the
//! ending way: intersect the per-step admissible-way sets at the terminal
//! means, form the level set of the picked way, and take a Pareto-minimal
//! payoff whose minimality survives against the whole image of the terminal
//! means. Every choice is a total order, so identical inputs give
//! bit-identical trajectories.

use serde::{Deserialize, Serialize};

use crate::certify;
use crate::cones::{minkowski_membership, Cone, PayoffVec, VariableOrdering, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::goal::{FeasiblePair, GoalSystem, Sense};
use crate::quasimetric::{validate_quasipseudometric, QuasimetricSpace};
use crate::worthwhile::{vector_worthwhile_set, DeltaParams};

/// Inputs of a solve: thresholds `eps`, `lambda` (only the ratio enters the
/// dynamics), the unit cost direction, the starting pair, and a safety cap
/// on iterations (defaults to the feasible-pair count plus two, one above
/// the provable bound).
#[derive(Debug, Clone, Serialize)]
pub struct SolveParams {
    pub eps: f64,
    pub lambda: f64,
    pub xi: PayoffVec,
    pub start: FeasiblePair,
    pub max_iters: Option<usize>,
}

impl SolveParams {
    pub fn new(eps: f64, lambda: f64, xi: PayoffVec, start: FeasiblePair) -> Self {
        SolveParams {
            eps,
            lambda,
            xi,
            start,
            max_iters: None,
        }
    }

    pub fn ratio(&self) -> f64 {
        self.eps / self.lambda
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationReason {
    /// The worthwhile set collapsed to the current position.
    Stationary,
    /// The safety cap was hit; cannot happen on valid finite instances.
    MaxIters,
    /// Inputs were rejected before iterating.
    Invalid,
}

/// One executed move: the state it left, the worthwhile set observed there,
/// and the cost of the step taken.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryStep {
    pub n: usize,
    pub x: usize,
    pub omega: usize,
    pub f: PayoffVec,
    /// Anchor index of the cone ordering payoffs at this step.
    pub cone_anchor: usize,
    /// Number of means in the worthwhile set.
    pub w_size: usize,
    /// `max q(x, ·)` over the worthwhile set.
    pub radius: f64,
    /// `q(x_n, x_{n+1})` of the move taken.
    pub q_step: f64,
}

/// The way-selection record at the terminal means.
#[derive(Debug, Clone, Serialize)]
pub struct Refinement {
    /// Admissible ways of the terminal means, one set per recorded state
    /// (every executed step, then the terminal pair).
    pub r_sets: Vec<Vec<usize>>,
    /// Lowest-index way in the intersection of the `r_sets`.
    pub omega_bar: usize,
    /// Ways whose payoff lies below the `omega_bar` payoff.
    pub level_set: Vec<usize>,
    pub omega_star: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryStep>,
    /// The pair the walk stopped at (its way may differ from the refined
    /// ending way).
    pub terminal: FeasiblePair,
    pub path_length: f64,
    pub termination: TerminationReason,
    pub refinement: Option<Refinement>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveOutcome {
    pub trajectory: Trajectory,
    pub x_star: usize,
    pub omega_star: usize,
    pub f_star: PayoffVec,
}

/// Summary statistics of a completed trajectory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryStats {
    pub step_count: usize,
    pub path_length: f64,
    pub max_step: Option<f64>,
    pub min_step: Option<f64>,
}

pub fn trajectory_stats(t: &Trajectory) -> TrajectoryStats {
    let steps: Vec<f64> = t.steps.iter().map(|s| s.q_step).collect();
    TrajectoryStats {
        step_count: steps.len(),
        path_length: t.path_length,
        max_step: steps.iter().cloned().fold(None, |acc: Option<f64>, v| {
            Some(acc.map_or(v, |a| a.max(v)))
        }),
        min_step: steps.iter().cloned().fold(None, |acc: Option<f64>, v| {
            Some(acc.map_or(v, |a| a.min(v)))
        }),
    }
}

/// Validate the direction against the instance: `ξ` must be a unit vector
/// drawn from the common ordering cone but not from `-Θ - K[f₀]`.
fn validate_direction(gs: &GoalSystem, params: &SolveParams) -> Result<()> {
    let theta_k = gs.common_cone()?;
    if !theta_k.contains(&params.xi)? {
        return Err(Error::input(
            "direction xi lies outside the common ordering cone",
        ));
    }
    // Membership in -Θ - K[f0]: a nonnegative combination over the negated
    // generators of both cones.
    let f0 = gs.cost(params.start);
    let neg_k0 = gs.ordering().cone_at(f0)?.negate();
    let neg_theta = gs.theta().negate();
    if minkowski_membership(&params.xi, &[&neg_theta, &neg_k0])? {
        return Err(Error::input(
            "direction xi lies in -Theta - K[f0]; descent along it cannot be bounded",
        ));
    }
    Ok(())
}

/// Run the worthwhile-change walk and the terminal refinement.
///
/// Hypothesis validation is mandatory and fail-closed: the conclusions are
/// only guaranteed under the standing assumptions, so solving a broken
/// instance would make certifier failures ambiguous.
pub fn solve(gs: &GoalSystem, params: &SolveParams) -> Result<SolveOutcome> {
    let cert = certify::validate_hypotheses(gs);
    if let Some(check) = cert.first_failure() {
        return Err(Error::Hypothesis {
            name: check.name.clone(),
            details: check
                .witnesses
                .first()
                .cloned()
                .unwrap_or_else(|| "see certificate".into()),
        });
    }
    if !(params.eps.is_finite() && params.eps > 0.0)
        || !(params.lambda.is_finite() && params.lambda > 0.0)
    {
        return Err(Error::input("eps and lambda must be positive"));
    }
    if !gs.is_feasible(params.start) {
        return Err(Error::input(format!(
            "start pair ({}, {}) is not feasible",
            params.start.x, params.start.omega
        )));
    }
    let delta = DeltaParams::new(params.xi.clone(), params.ratio())?;
    validate_direction(gs, params)?;

    let max_iters = params
        .max_iters
        .unwrap_or_else(|| gs.feasible_pairs().len() + 2);

    let mut current = params.start;
    let mut steps: Vec<TrajectoryStep> = Vec::new();
    let mut path_length = 0.0;

    for n in 0..=max_iters {
        if n == max_iters {
            return Err(Error::Internal(format!(
                "iteration cap {max_iters} exceeded; payoff values must not repeat on valid instances"
            )));
        }
        let f = gs.cost(current).clone();
        let anchor = gs.ordering().anchor_index_at(&f)?;
        let w = vector_worthwhile_set(gs, current, &delta)?;
        let radius = w
            .iter()
            .map(|(xp, _)| gs.space().dist(current.x, *xp))
            .fold(0.0, f64::max);

        let next = if radius > 0.0 {
            // Farthest worthwhile means, lowest index on ties; its first
            // witness in way order.
            let (xp, witnesses) = w
                .iter()
                .filter(|(xp, _)| gs.space().dist(current.x, *xp) >= radius)
                .min_by_key(|(xp, _)| *xp)
                .expect("radius > 0 implies a nonempty worthwhile set");
            Some(FeasiblePair::new(*xp, witnesses[0]))
        } else {
            // Zero radius: on a strict quasimetric this means W = {x} and
            // the walk is over (way selection belongs to the refinement).
            // On a composite space with zero-cost coordinates the set may
            // still hold strictly better *other* means; take the first one.
            let mut found = None;
            'scan: for (xp, witnesses) in &w {
                if *xp == current.x {
                    continue;
                }
                for &wp in witnesses {
                    let cand = FeasiblePair::new(*xp, wp);
                    if !gs.cost(cand).approx_eq(&f, DEFAULT_TOL) {
                        found = Some(cand);
                        break 'scan;
                    }
                }
            }
            found
        };

        match next {
            Some(next_pair) => {
                let q_step = gs.space().dist(current.x, next_pair.x);
                path_length += q_step;
                steps.push(TrajectoryStep {
                    n,
                    x: current.x,
                    omega: current.omega,
                    f,
                    cone_anchor: anchor,
                    w_size: w.len(),
                    radius,
                    q_step,
                });
                current = next_pair;
            }
            None => break,
        }
    }

    let refinement = refine(gs, params, &delta, &steps, current)?;
    let omega_star = refinement.omega_star;
    let f_star = gs.cost(FeasiblePair::new(current.x, omega_star)).clone();

    Ok(SolveOutcome {
        trajectory: Trajectory {
            steps,
            terminal: current,
            path_length,
            termination: TerminationReason::Stationary,
            refinement: Some(refinement),
        },
        x_star: current.x,
        omega_star,
        f_star,
    })
}

/// Select the ending way at the terminal means.
fn refine(
    gs: &GoalSystem,
    params: &SolveParams,
    delta: &DeltaParams,
    steps: &[TrajectoryStep],
    terminal: FeasiblePair,
) -> Result<Refinement> {
    let x_star = terminal.x;
    let ratio = params.ratio();

    let mut records: Vec<FeasiblePair> = steps
        .iter()
        .map(|s| FeasiblePair::new(s.x, s.omega))
        .collect();
    records.push(terminal);

    // Ways of the terminal means still admissible from each visited state.
    let mut r_sets: Vec<Vec<usize>> = Vec::with_capacity(records.len());
    for rec in &records {
        let f_k = gs.cost(*rec);
        let cone_k = gs.ordering().cone_at(f_k)?;
        let shift = delta.xi().scale(ratio * gs.space().dist(rec.x, x_star));
        let mut r = Vec::new();
        for &w in gs.feasible_ways(x_star) {
            let f_w = gs.cost(FeasiblePair::new(x_star, w));
            if cone_k.contains(&f_k.sub(&f_w.add(&shift)))? {
                r.push(w);
            }
        }
        r_sets.push(r);
    }

    let omega_bar = gs
        .feasible_ways(x_star)
        .iter()
        .copied()
        .find(|w| r_sets.iter().all(|r| r.contains(w)))
        .ok_or_else(|| {
            Error::Internal("admissible-way intersection is empty at the terminal means".into())
        })?;

    let f_bar = gs.cost(FeasiblePair::new(x_star, omega_bar)).clone();
    let cone_bar = gs.ordering().cone_at(&f_bar)?;
    let mut level_set = Vec::new();
    for &w in gs.feasible_ways(x_star) {
        let f_w = gs.cost(FeasiblePair::new(x_star, w));
        if cone_bar.contains(&f_bar.sub(f_w))? {
            level_set.push(w);
        }
    }

    // Pareto-minimal payoffs over the level set under the cone at f_bar,
    // then keep the first candidate whose minimality also holds against the
    // full image of the terminal means under its own cone.
    let level_values: Vec<&PayoffVec> = level_set
        .iter()
        .map(|&w| gs.cost(FeasiblePair::new(x_star, w)))
        .collect();
    let image = gs.image_set(x_star)?;
    let mut omega_star = None;
    'candidates: for (idx, &w) in level_set.iter().enumerate() {
        let f_w = level_values[idx];
        for other in &level_values {
            if !other.approx_eq(f_w, DEFAULT_TOL) && cone_bar.contains(&f_w.sub(other))? {
                continue 'candidates;
            }
        }
        let cone_w = gs.ordering().cone_at(f_w)?;
        for other in &image {
            if !other.approx_eq(f_w, DEFAULT_TOL) && cone_w.contains(&f_w.sub(other))? {
                continue 'candidates;
            }
        }
        omega_star = Some(w);
        break;
    }
    let omega_star = omega_star.ok_or_else(|| {
        Error::Internal("no level-set way survives the minimality refinement".into())
    })?;

    Ok(Refinement {
        r_sets,
        omega_bar,
        level_set,
        omega_star,
    })
}

// ---------------------------------------------------------------------------
// Reductions
// ---------------------------------------------------------------------------

fn index_labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Wrap a payoff that does not depend on the way: a single-way goal system
/// solved by the same walk.
pub fn solve_fixed_payoff(
    space: QuasimetricSpace,
    payoffs: &[PayoffVec],
    ordering: VariableOrdering,
    theta: Cone,
    params: SolveParams,
) -> Result<SolveOutcome> {
    if payoffs.len() != space.n() {
        return Err(Error::Dimension {
            what: "payoffs vs space",
            expected: space.n(),
            got: payoffs.len(),
        });
    }
    if params.start.omega != 0 {
        return Err(Error::input(
            "fixed-payoff instances have the single way index 0",
        ));
    }
    let n = space.n();
    let gs = GoalSystem::new(
        index_labels("p", n),
        space,
        vec!["w0".into()],
        vec![vec![0]; n],
        payoffs.iter().map(|p| vec![Some(p.clone())]).collect(),
        ordering,
        theta,
        Sense::Costs,
    )?;
    solve(&gs, &params)
}

/// Classical descent on a symmetric space with scalar costs: wraps into a
/// one-goal, constant-orthant instance and returns the ending point. The
/// ending point `x*` satisfies
/// `f(x0) - f(x*) ≥ (ε/λ)·d(x0, x*)` and
/// `f(x*) - f(x') < (ε/λ)·d(x*, x')` for every other point.
pub fn solve_classical(
    space: QuasimetricSpace,
    costs: &[f64],
    eps: f64,
    lambda: f64,
    x0: usize,
) -> Result<usize> {
    if !space.is_symmetric() {
        return Err(Error::input(
            "classical reduction needs symmetric change costs",
        ));
    }
    if x0 >= space.n() {
        return Err(Error::input(format!("start index {x0} out of range")));
    }
    let payoffs: Vec<PayoffVec> = costs
        .iter()
        .map(|&c| PayoffVec::new(vec![c]))
        .collect::<Result<_>>()?;
    let params = SolveParams::new(
        eps,
        lambda,
        PayoffVec::new(vec![1.0])?,
        FeasiblePair::new(x0, 0),
    );
    let outcome = solve_fixed_payoff(
        space,
        &payoffs,
        VariableOrdering::constant(Cone::orthant(1)),
        Cone::orthant(1),
        params,
    )?;
    Ok(outcome.x_star)
}

/// Descent over composite positions (means paired with ways), where
/// changing the way also costs something. `pair_space` covers the full
/// universe of positions; `feasible` lists the admissible ones (strictly
/// increasing universe indices) and `payoffs` aligns with it. Returns the
/// universe index of the trap together with the wrapped outcome.
#[allow(clippy::too_many_arguments)]
pub fn solve_pair_space(
    pair_space: &QuasimetricSpace,
    feasible: &[usize],
    payoffs: &[PayoffVec],
    ordering: VariableOrdering,
    theta: Cone,
    eps: f64,
    lambda: f64,
    xi: PayoffVec,
    start: usize,
) -> Result<(usize, SolveOutcome)> {
    if feasible.is_empty() {
        return Err(Error::input("no feasible positions"));
    }
    if payoffs.len() != feasible.len() {
        return Err(Error::Dimension {
            what: "payoffs vs feasible positions",
            expected: feasible.len(),
            got: payoffs.len(),
        });
    }
    if feasible.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::input("feasible indices must be strictly increasing"));
    }
    if feasible.iter().any(|&i| i >= pair_space.n()) {
        return Err(Error::input("feasible index out of the position universe"));
    }
    let start_pos = feasible
        .iter()
        .position(|&i| i == start)
        .ok_or_else(|| Error::input(format!("start position {start} is not feasible")))?;

    // Restrict the cost matrix to the feasible positions. Zero cost between
    // distinct composite positions is legitimate here (a free way change),
    // so the relaxed identity axiom applies.
    let sub: Vec<Vec<f64>> = feasible
        .iter()
        .map(|&i| feasible.iter().map(|&j| pair_space.dist(i, j)).collect())
        .collect();
    let space = validate_quasipseudometric(sub)?.map_err(|report| Error::Hypothesis {
        name: "quasimetric".into(),
        details: report
            .violations
            .first()
            .map(|v| v.detail.clone())
            .unwrap_or_default(),
    })?;

    let params = SolveParams::new(eps, lambda, xi, FeasiblePair::new(start_pos, 0));
    let outcome = solve_fixed_payoff(space, payoffs, ordering, theta, params)?;
    Ok((feasible[outcome.x_star], outcome))
}

/// Assemble the composite-position universe of a goal system: all
/// `(x, ω)` pairs in lexicographic order, costed by
/// `q[(x,ω),(x',ω')] = q_X(x,x') + way_costs[ω][ω']`.
/// Returns the universe space, the feasible universe indices, and the
/// payoffs aligned with them.
pub fn build_pair_space(
    gs: &GoalSystem,
    way_costs: &[Vec<f64>],
) -> Result<(QuasimetricSpace, Vec<usize>, Vec<PayoffVec>)> {
    let n_ways = gs.n_ways();
    if way_costs.len() != n_ways || way_costs.iter().any(|row| row.len() != n_ways) {
        return Err(Error::Dimension {
            what: "way-cost matrix",
            expected: n_ways,
            got: way_costs.len(),
        });
    }
    let n = gs.n_means() * n_ways;
    let mut matrix = vec![vec![0.0; n]; n];
    for x1 in 0..gs.n_means() {
        for w1 in 0..n_ways {
            for x2 in 0..gs.n_means() {
                for w2 in 0..n_ways {
                    matrix[x1 * n_ways + w1][x2 * n_ways + w2] =
                        gs.space().dist(x1, x2) + way_costs[w1][w2];
                }
            }
        }
    }
    let space = QuasimetricSpace::from_matrix_unchecked(matrix)?;
    let mut feasible = Vec::new();
    let mut payoffs = Vec::new();
    for pair in gs.feasible_pairs() {
        feasible.push(pair.x * n_ways + pair.omega);
        payoffs.push(gs.cost(pair).clone());
    }
    Ok((space, feasible, payoffs))
}
