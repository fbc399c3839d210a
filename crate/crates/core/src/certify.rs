//! Independent brute-force certification of instances and solver outputs.
//!
//! Every check here re-derives its relation from the definitions — cone
//! membership tests, exhaustive scans over the feasible graph, graph
//! reachability — and never touches the solver's selection logic, so a
//! certifier pass is evidence about the output rather than a replay of the
//! code that produced it. Failing checks always carry explicit witnesses.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::cones::{approx_min, pareto_min, VariableOrdering, DEFAULT_TOL};
use crate::error::Result;
use crate::goal::{FeasiblePair, GoalSystem};
use crate::solver::{SolveOutcome, SolveParams};
use crate::worthwhile::{vector_worthwhile_set, DeltaParams, ScalarModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    /// Holds with nothing to compute on finite instances; accounted for
    /// rather than skipped.
    PassVacuous,
    Fail,
    /// The check's premise does not hold, so its conclusion is not owed.
    NotApplicable,
}

/// One named verification with witnesses for failures.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub witnesses: Vec<String>,
    pub note: Option<String>,
}

impl Check {
    fn pass(name: &str, note: impl Into<Option<String>>) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::Pass,
            witnesses: vec![],
            note: note.into(),
        }
    }

    fn vacuous(name: &str, note: &str) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::PassVacuous,
            witnesses: vec![],
            note: Some(note.into()),
        }
    }

    fn fail(name: &str, witnesses: Vec<String>) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::Fail,
            witnesses,
            note: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

/// Bundle of checks over one instance (and optionally one solver output).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub digest: String,
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl Certificate {
    fn new(digest: String, checks: Vec<Check>) -> Self {
        let overall = checks.iter().all(Check::passed);
        Certificate {
            digest,
            checks,
            overall,
        }
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

// ---------------------------------------------------------------------------
// Hypothesis validation
// ---------------------------------------------------------------------------

/// Validate the standing assumptions of the variational principle on a
/// finite instance. Facts that hold vacuously under finiteness
/// (completeness, closed graph, level closedness, way continuity) are
/// reported as such so the certificate accounts for every hypothesis.
pub fn validate_hypotheses(gs: &GoalSystem) -> Certificate {
    let mut checks = Vec::new();

    // Quasimetric axioms; completeness and lower semicontinuity come free.
    let axioms = gs.space().axiom_violations();
    if axioms.passed() {
        let mut note =
            "axioms hold; finite space is left-sequentially complete with lsc costs".to_string();
        if gs.space().allows_zero_offdiag() {
            note.push_str("; zero cost between distinct positions allowed");
        }
        checks.push(Check::pass("quasimetric-axioms", Some(note)));
    } else {
        checks.push(Check::fail(
            "quasimetric-axioms",
            axioms.violations.iter().map(|v| v.detail.clone()).collect(),
        ));
    }

    // Anchor cones and their intersection must be pointed, proper cones.
    let mut cone_witnesses = Vec::new();
    for (i, (anchor, cone)) in gs.ordering().anchors().iter().enumerate() {
        if !cone.is_pointed() {
            cone_witnesses.push(format!(
                "anchor {i} at {:?} has a non-pointed cone",
                anchor.as_slice()
            ));
        }
        if !cone.is_proper() {
            cone_witnesses.push(format!(
                "anchor {i} at {:?} has an improper cone",
                anchor.as_slice()
            ));
        }
    }
    match gs.common_cone() {
        Ok(theta_k) => {
            if !theta_k.is_pointed() {
                cone_witnesses.push("common ordering cone is not pointed".into());
            }
        }
        Err(e) => cone_witnesses.push(format!("common ordering cone: {e}")),
    }
    if cone_witnesses.is_empty() {
        checks.push(Check::pass("cone-pointedness", None));
    } else {
        checks.push(Check::fail("cone-pointedness", cone_witnesses));
    }

    // Transitivity of the induced relation over every feasible payoff.
    let image = gs.payoff_image();
    if image.is_empty() {
        checks.push(Check::fail(
            "order-transitivity",
            vec!["no feasible payoffs to sample".into()],
        ));
    } else {
        match gs.ordering().check_transitivity(&image) {
            Ok(report) if report.passed() => checks.push(Check::pass(
                "order-transitivity",
                Some(format!("all triples over {} payoffs", image.len())),
            )),
            Ok(report) => checks.push(Check::fail(
                "order-transitivity",
                report
                    .violations
                    .iter()
                    .map(|(i, j, k)| {
                        format!(
                            "triple {:?} -> {:?} -> {:?} escapes the first cone",
                            image[*i].as_slice(),
                            image[*j].as_slice(),
                            image[*k].as_slice()
                        )
                    })
                    .collect(),
            )),
            Err(e) => checks.push(Check::fail("order-transitivity", vec![e.to_string()])),
        }
    }

    // Cone nesting between comparable feasible payoffs: the property the
    // descent machinery actually leans on. Sampled transitivity alone does
    // not imply it, so it is gated explicitly.
    let mut nesting_witnesses = Vec::new();
    'pairs: for p in &image {
        for q in &image {
            if q.approx_eq(p, DEFAULT_TOL) {
                continue;
            }
            let holds = match gs.ordering().leq_under(p, q) {
                Ok(h) => h,
                Err(e) => {
                    nesting_witnesses.push(e.to_string());
                    break 'pairs;
                }
            };
            if !holds {
                continue;
            }
            let upper = gs.ordering().cone_at(p).expect("dim checked");
            let lower = gs.ordering().cone_at(q).expect("dim checked");
            for g in lower.generators() {
                if !upper.contains_slice(g) {
                    nesting_witnesses.push(format!(
                        "generator {:?} of the cone at {:?} leaves the cone at {:?}",
                        g,
                        q.as_slice(),
                        p.as_slice()
                    ));
                }
            }
        }
    }
    if nesting_witnesses.is_empty() {
        checks.push(Check::pass("cone-nesting", None));
    } else {
        checks.push(Check::fail("cone-nesting", nesting_witnesses));
    }

    // dom f = gph Ω, nonempty feasible sets, finiteness.
    let mut domain_witnesses = Vec::new();
    for x in 0..gs.n_means() {
        if gs.feasible_ways(x).is_empty() {
            domain_witnesses.push(format!("means {x} has no feasible way"));
        }
        for omega in 0..gs.n_ways() {
            let feasible = gs.is_feasible(FeasiblePair::new(x, omega));
            let defined = gs.payoff_at(x, omega).is_some();
            match (feasible, defined) {
                (true, false) => domain_witnesses
                    .push(format!("payoff undefined on feasible pair ({x},{omega})")),
                (false, true) => domain_witnesses.push(format!(
                    "payoff defined outside the feasible graph at ({x},{omega})"
                )),
                _ => {}
            }
        }
    }
    if domain_witnesses.is_empty() {
        checks.push(Check::pass(
            "payoff-domain",
            Some(format!(
                "dom f = gph Ω with {} pairs; finite graph is closed vacuously",
                gs.feasible_pairs().len()
            )),
        ));
    } else {
        checks.push(Check::fail("payoff-domain", domain_witnesses));
    }

    checks.push(Check::vacuous(
        "bound-cone",
        "half-space representation is closed and convex by construction",
    ));

    // Quasiboundedness witness: the finite payoff image itself.
    if image.is_empty() {
        checks.push(Check::fail(
            "quasiboundedness",
            vec!["payoff image is empty".into()],
        ));
    } else {
        let report = gs.check_quasibounded();
        checks.push(Check::pass(
            "quasiboundedness",
            Some(format!(
                "witness: payoff image of {} values in box {:?}..{:?}",
                report.witness_size, report.lower, report.upper
            )),
        ));
    }

    checks.push(Check::vacuous(
        "level-closedness",
        "level sets of finite mappings are closed",
    ));
    checks.push(Check::vacuous(
        "way-continuity",
        "mappings on finite way sets are continuous",
    ));

    Certificate::new(gs.digest(), checks)
}

// ---------------------------------------------------------------------------
// Conclusion checks
// ---------------------------------------------------------------------------

/// The arrival relation: moving straight from the start to the end is
/// worthwhile, `f* + (ε/λ)·q(x0,x*)·ξ ≤_{K[f0]} f0`.
pub fn check_arrival(
    gs: &GoalSystem,
    params: &SolveParams,
    x_star: usize,
    f_star: &crate::cones::PayoffVec,
) -> Result<Check> {
    let f0 = gs.cost(params.start);
    let cone0 = gs.ordering().cone_at(f0)?;
    let shift = params
        .xi
        .scale(params.ratio() * gs.space().dist(params.start.x, x_star));
    let holds = cone0.contains(&f0.sub(&f_star.add(&shift)))?;
    Ok(if holds {
        Check::pass("arrival", None)
    } else {
        Check::fail(
            "arrival",
            vec![format!(
                "f* + (eps/lambda) q(x0,x*) xi = {:?} does not sit below f0 = {:?}",
                f_star.add(&shift).as_slice(),
                f0.as_slice()
            )],
        )
    })
}

/// The stability relation: no feasible pair with a different payoff value
/// is worthwhile from the end, scanned over the whole feasible graph.
pub fn check_stability(
    gs: &GoalSystem,
    params: &SolveParams,
    x_star: usize,
    f_star: &crate::cones::PayoffVec,
) -> Result<Check> {
    let cone_star = gs.ordering().cone_at(f_star)?;
    let ratio = params.ratio();
    let mut witnesses = Vec::new();
    for pair in gs.feasible_pairs() {
        let f = gs.cost(pair);
        if f.approx_eq(f_star, DEFAULT_TOL) {
            continue;
        }
        let shift = params.xi.scale(ratio * gs.space().dist(x_star, pair.x));
        if cone_star.contains(&f_star.sub(&f.add(&shift)))? {
            witnesses.push(format!(
                "pair ({}, {}) with payoff {:?} is still worthwhile from the end",
                pair.x,
                pair.omega,
                f.as_slice()
            ));
        }
    }
    Ok(if witnesses.is_empty() {
        Check::pass("stability", None)
    } else {
        Check::fail("stability", witnesses)
    })
}

/// The budget relation `q(x0, x*) ≤ λ`, owed only when the starting payoff
/// is an approximate εξ-minimal point of the payoff image under `K[f0]`.
pub fn check_budget(gs: &GoalSystem, params: &SolveParams, x_star: usize) -> Result<Check> {
    let f0 = gs.cost(params.start);
    let cone0 = gs.ordering().cone_at(f0)?.clone();
    let image = gs.payoff_image();
    let minimal = approx_min(
        &image,
        &VariableOrdering::constant(cone0),
        params.eps,
        &params.xi,
    )?;
    let premise = minimal.iter().any(|p| p.approx_eq(f0, DEFAULT_TOL));
    if !premise {
        return Ok(Check {
            name: "budget".into(),
            status: CheckStatus::NotApplicable,
            witnesses: vec![],
            note: Some("start is not an approximate minimizer; bound not owed".into()),
        });
    }
    let q = gs.space().dist(params.start.x, x_star);
    Ok(if q <= params.lambda + DEFAULT_TOL {
        Check::pass(
            "budget",
            Some(format!("q(x0,x*) = {q} within lambda = {}", params.lambda)),
        )
    } else {
        Check::fail(
            "budget",
            vec![format!("q(x0,x*) = {q} exceeds lambda = {}", params.lambda)],
        )
    })
}

/// The ending payoff is Pareto-minimal in the image of the terminal means
/// under its own cone.
pub fn check_pareto_end(
    gs: &GoalSystem,
    x_star: usize,
    f_star: &crate::cones::PayoffVec,
) -> Result<Check> {
    let image = gs.image_set(x_star)?;
    let cone_star = gs.ordering().cone_at(f_star)?.clone();
    let minimal = pareto_min(&image, &VariableOrdering::constant(cone_star))?;
    Ok(if minimal.iter().any(|p| p.approx_eq(f_star, DEFAULT_TOL)) {
        Check::pass("pareto-end", None)
    } else {
        let dominators: Vec<String> = image
            .iter()
            .filter(|p| {
                !p.approx_eq(f_star, DEFAULT_TOL)
                    && gs
                        .ordering()
                        .cone_at(f_star)
                        .and_then(|c| c.contains(&f_star.sub(p)))
                        .unwrap_or(false)
            })
            .map(|p| format!("{:?}", p.as_slice()))
            .collect();
        Check::fail("pareto-end", dominators)
    })
}

/// Full certificate for a claimed endpoint: the hypothesis checks plus
/// every conclusion and the trap semantics. Works for real solver outputs
/// and for externally supplied claims alike.
pub fn certify_values(
    gs: &GoalSystem,
    params: &SolveParams,
    x_star: usize,
    f_star: &crate::cones::PayoffVec,
) -> Result<Certificate> {
    let base = validate_hypotheses(gs);
    let mut checks = base.checks;

    checks.push(check_arrival(gs, params, x_star, f_star)?);
    checks.push(check_stability(gs, params, x_star, f_star)?);
    checks.push(check_budget(gs, params, x_star)?);
    checks.push(check_pareto_end(gs, x_star, f_star)?);

    let delta = DeltaParams::new(params.xi.clone(), params.ratio())?;
    let trap = is_variational_trap(gs, params.start.x, x_star, &delta)?;
    checks.push(if trap {
        Check::pass(
            "variational-trap",
            Some("end is stationary and reachable through worthwhile changes".into()),
        )
    } else {
        Check::fail(
            "variational-trap",
            vec![format!(
                "end {x_star} is not a stationary trap reachable from {}",
                params.start.x
            )],
        )
    });

    Ok(Certificate::new(base.digest, checks))
}

/// [`certify_values`] applied to a solver output.
pub fn certify_solution(
    gs: &GoalSystem,
    params: &SolveParams,
    outcome: &SolveOutcome,
) -> Result<Certificate> {
    certify_values(gs, params, outcome.x_star, &outcome.f_star)
}

// ---------------------------------------------------------------------------
// Traps
// ---------------------------------------------------------------------------

/// A means point is a stationary trap when, positioned at one of its
/// feasible ways, no other means is worth moving to.
pub fn is_stationary_trap(gs: &GoalSystem, x: usize, params: &DeltaParams) -> Result<bool> {
    if x >= gs.n_means() {
        return Err(crate::error::Error::input(format!(
            "means index {x} out of range"
        )));
    }
    for &omega in gs.feasible_ways(x) {
        let w = vector_worthwhile_set(gs, FeasiblePair::new(x, omega), params)?;
        if w.iter().all(|(xp, _)| *xp == x) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Stationary trap reachable from `x0` by a finite chain of worthwhile
/// changes (breadth-first search over the pair graph).
pub fn is_variational_trap(
    gs: &GoalSystem,
    x0: usize,
    x: usize,
    params: &DeltaParams,
) -> Result<bool> {
    if !is_stationary_trap(gs, x, params)? {
        return Ok(false);
    }
    if x0 == x {
        return Ok(true);
    }
    let n_ways = gs.n_ways();
    let mut seen = vec![false; gs.n_means() * n_ways];
    let mut queue = VecDeque::new();
    for &omega in gs.feasible_ways(x0) {
        seen[x0 * n_ways + omega] = true;
        queue.push_back(FeasiblePair::new(x0, omega));
    }
    while let Some(pair) = queue.pop_front() {
        for (xp, witnesses) in vector_worthwhile_set(gs, pair, params)? {
            if xp == x {
                return Ok(true);
            }
            for wp in witnesses {
                let idx = xp * n_ways + wp;
                if !seen[idx] {
                    seen[idx] = true;
                    queue.push_back(FeasiblePair::new(xp, wp));
                }
            }
        }
    }
    Ok(false)
}

/// All stationary traps, by direct evaluation at every means point. The
/// solver's terminal means must always appear here.
pub fn brute_force_traps(gs: &GoalSystem, params: &DeltaParams) -> Result<Vec<usize>> {
    (0..gs.n_means())
        .filter_map(|x| match is_stationary_trap(gs, x, params) {
            Ok(true) => Some(Ok(x)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}

/// Scalar-model stationary trap: the worthwhile set is the singleton of
/// the point itself.
pub fn is_stationary_trap_scalar(model: &ScalarModel, x: usize, ratio: f64) -> Result<bool> {
    Ok(model.worthwhile_set(x, ratio)? == vec![x])
}

pub fn is_variational_trap_scalar(
    model: &ScalarModel,
    x0: usize,
    x: usize,
    ratio: f64,
) -> Result<bool> {
    if !is_stationary_trap_scalar(model, x, ratio)? {
        return Ok(false);
    }
    if x0 == x {
        return Ok(true);
    }
    let mut seen = vec![false; model.n()];
    let mut queue = VecDeque::new();
    seen[x0] = true;
    queue.push_back(x0);
    while let Some(p) = queue.pop_front() {
        for xp in model.worthwhile_set(p, ratio)? {
            if xp == x {
                return Ok(true);
            }
            if !seen[xp] {
                seen[xp] = true;
                queue.push_back(xp);
            }
        }
    }
    Ok(false)
}

pub fn brute_force_traps_scalar(model: &ScalarModel, ratio: f64) -> Result<Vec<usize>> {
    (0..model.n())
        .filter_map(|x| match is_stationary_trap_scalar(model, x, ratio) {
            Ok(true) => Some(Ok(x)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}
