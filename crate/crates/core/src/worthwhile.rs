//! Worthwhile-change sets, net change payoffs, and pair preferences.
//!
//! A change is worthwhile when its motivation beats a satisficing fraction
//! of its resistance. The scalar model compares utility of advantages
//! against disutility of change costs; the vector model shifts the payoff
//! by a directional cost `ratio · q(x,x') · ξ` and compares under the
//! variable cone order at the current payoff.

use serde::{Deserialize, Serialize};

use crate::cones::{PayoffVec, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::goal::{FeasiblePair, GoalSystem, Sense};
use crate::quasimetric::QuasimetricSpace;

// ---------------------------------------------------------------------------
// Scalar model
// ---------------------------------------------------------------------------

/// Monotone scalar transform with fixed point 0, used for pleasure and pain.
/// `Power(p)` is extended oddly (`sign(a)·|a|^p`) so it stays strictly
/// increasing on all of R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotoneFn {
    Identity,
    Linear(f64),
    Power(f64),
}

impl MonotoneFn {
    pub fn validate(&self) -> Result<()> {
        match self {
            MonotoneFn::Identity => Ok(()),
            MonotoneFn::Linear(k) if *k > 0.0 && k.is_finite() => Ok(()),
            MonotoneFn::Linear(k) => Err(Error::input(format!(
                "linear coefficient must be positive, got {k}"
            ))),
            MonotoneFn::Power(p) if *p > 0.0 && p.is_finite() => Ok(()),
            MonotoneFn::Power(p) => Err(Error::input(format!(
                "power exponent must be positive, got {p}"
            ))),
        }
    }

    pub fn eval(&self, a: f64) -> f64 {
        match self {
            MonotoneFn::Identity => a,
            MonotoneFn::Linear(k) => k * a,
            MonotoneFn::Power(p) => a.signum() * a.abs().powf(*p),
        }
    }
}

/// Satisficing-ratio schedule: constant, or an explicit per-step sequence
/// (clamped to its last entry once exhausted).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioSchedule {
    Constant(f64),
    Explicit(Vec<f64>),
}

impl RatioSchedule {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            RatioSchedule::Constant(r) => *r >= 0.0 && r.is_finite(),
            RatioSchedule::Explicit(rs) => {
                !rs.is_empty() && rs.iter().all(|r| *r >= 0.0 && r.is_finite())
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::input("ratios must be finite and >= 0"))
        }
    }

    pub fn ratio_at(&self, step: usize) -> f64 {
        match self {
            RatioSchedule::Constant(r) => *r,
            RatioSchedule::Explicit(rs) => rs[step.min(rs.len() - 1)],
        }
    }
}

/// The adaptive scalar stay/change model: one real payoff per means point,
/// pluggable pleasure (`U`) and pain (`D`) transforms, and a ratio schedule.
#[derive(Debug, Clone)]
pub struct ScalarModel {
    space: QuasimetricSpace,
    payoff: Vec<f64>,
    sense: Sense,
    pleasure: MonotoneFn,
    pain: MonotoneFn,
    schedule: RatioSchedule,
}

impl ScalarModel {
    pub fn new(
        space: QuasimetricSpace,
        payoff: Vec<f64>,
        sense: Sense,
        pleasure: MonotoneFn,
        pain: MonotoneFn,
        schedule: RatioSchedule,
    ) -> Result<Self> {
        if payoff.len() != space.n() {
            return Err(Error::Dimension {
                what: "scalar payoff vs space",
                expected: space.n(),
                got: payoff.len(),
            });
        }
        if payoff.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("scalar payoffs must be finite"));
        }
        pleasure.validate()?;
        pain.validate()?;
        schedule.validate()?;
        Ok(ScalarModel {
            space,
            payoff,
            sense,
            pleasure,
            pain,
            schedule,
        })
    }

    pub fn n(&self) -> usize {
        self.payoff.len()
    }

    pub fn space(&self) -> &QuasimetricSpace {
        &self.space
    }

    pub fn payoff(&self) -> &[f64] {
        &self.payoff
    }

    pub fn schedule(&self) -> &RatioSchedule {
        &self.schedule
    }

    /// Advantage of changing from `x` to `xp`: gain improvement or cost
    /// reduction, per the declared sense.
    pub fn advantage(&self, x: usize, xp: usize) -> f64 {
        match self.sense {
            Sense::Gains => self.payoff[xp] - self.payoff[x],
            Sense::Costs => self.payoff[x] - self.payoff[xp],
        }
    }

    /// `{x' : U[A(x,x')] ≥ ratio · D[q(x,x')]}`; always contains `x` itself
    /// because `U[0] = D[0] = 0`.
    pub fn worthwhile_set(&self, x: usize, ratio: f64) -> Result<Vec<usize>> {
        if x >= self.n() {
            return Err(Error::input(format!("means index {x} out of range")));
        }
        if !(ratio.is_finite() && ratio >= 0.0) {
            return Err(Error::input("ratio must be finite and >= 0"));
        }
        Ok((0..self.n())
            .filter(|&xp| {
                let motivation = self.pleasure.eval(self.advantage(x, xp));
                let resistance = self.pain.eval(self.space.dist(x, xp));
                motivation >= ratio * resistance - DEFAULT_TOL
            })
            .collect())
    }
}

// ---------------------------------------------------------------------------
// Vector model
// ---------------------------------------------------------------------------

/// Direction and satisficing ratio for the vector worthwhile test: the unit
/// vector `ξ` splits the scalar change cost into per-goal shares, and
/// `ratio = ε/λ` scales it.
#[derive(Debug, Clone, Serialize)]
pub struct DeltaParams {
    xi: PayoffVec,
    ratio: f64,
}

impl DeltaParams {
    pub fn new(xi: PayoffVec, ratio: f64) -> Result<Self> {
        if (xi.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::input(format!(
                "cost direction must have unit Euclidean norm, got {}",
                xi.norm()
            )));
        }
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(Error::input("ratio must be finite and positive"));
        }
        Ok(DeltaParams { xi, ratio })
    }

    pub fn xi(&self) -> &PayoffVec {
        &self.xi
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }
}

fn check_pair(gs: &GoalSystem, pair: FeasiblePair, what: &str) -> Result<()> {
    if !gs.is_feasible(pair) {
        return Err(Error::input(format!(
            "{what} pair ({}, {}) is not feasible",
            pair.x, pair.omega
        )));
    }
    Ok(())
}

fn check_params(gs: &GoalSystem, params: &DeltaParams) -> Result<()> {
    if params.xi.dim() != gs.m() {
        return Err(Error::Dimension {
            what: "cost direction",
            expected: gs.m(),
            got: params.xi.dim(),
        });
    }
    Ok(())
}

/// The vector worthwhile-change set from a feasible pair: every means `x'`
/// for which some feasible way `ω'` satisfies
/// `f(x',ω') + ratio·q(x,x')·ξ ≤_{K[f(x,ω)]} f(x,ω)`,
/// returned with the full witness list so callers can pick a way without
/// recomputation. Contains `x` itself via the witness `ω`.
pub fn vector_worthwhile_set(
    gs: &GoalSystem,
    pair: FeasiblePair,
    params: &DeltaParams,
) -> Result<Vec<(usize, Vec<usize>)>> {
    check_pair(gs, pair, "base")?;
    check_params(gs, params)?;
    let f = gs.cost(pair);
    let cone = gs.ordering().cone_at(f)?;
    let mut out = Vec::new();
    for xp in 0..gs.n_means() {
        let shift = params.xi.scale(params.ratio * gs.space().dist(pair.x, xp));
        let mut witnesses = Vec::new();
        for &wp in gs.feasible_ways(xp) {
            let fp = gs.cost(FeasiblePair::new(xp, wp));
            if cone.contains(&f.sub(&fp.add(&shift)))? {
                witnesses.push(wp);
            }
        }
        if !witnesses.is_empty() {
            out.push((xp, witnesses));
        }
    }
    Ok(out)
}

/// Net worthwhile-to-change payoff `Δ(φ, φ') = A(φ,φ') - ratio·q(x,x')·ξ`,
/// in the internal cost convention (`A = f(φ) - f(φ')`).
pub fn delta_payoff(
    gs: &GoalSystem,
    from: FeasiblePair,
    to: FeasiblePair,
    params: &DeltaParams,
) -> Result<PayoffVec> {
    check_pair(gs, from, "from")?;
    check_pair(gs, to, "to")?;
    check_params(gs, params)?;
    let advantage = gs.cost(from).sub(gs.cost(to));
    let shift = params
        .xi
        .scale(params.ratio * gs.space().dist(from.x, to.x));
    Ok(advantage.sub(&shift))
}

/// Variable pair preference anchored at `base`:
/// `a ≥_base b  ⇔  Δ(base,a) - Δ(base,b) ∈ K[f(base)]`.
pub fn pair_prefers(
    gs: &GoalSystem,
    base: FeasiblePair,
    a: FeasiblePair,
    b: FeasiblePair,
    params: &DeltaParams,
) -> Result<bool> {
    let da = delta_payoff(gs, base, a, params)?;
    let db = delta_payoff(gs, base, b, params)?;
    let cone = gs.ordering().cone_at(gs.cost(base))?;
    cone.contains(&da.sub(&db))
}
