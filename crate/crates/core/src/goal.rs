//! Finite goal systems: means, feasible ways of using them, and vector
//! payoffs defined exactly on the feasible pairs.
//!
//! Everything downstream is cost minimization. Gain-sense instances are
//! negated at ingestion (`f := -g`), so one solver path serves both
//! conventions; the original sense is kept for reporting.

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cones::{Cone, PayoffVec, VariableOrdering};
use crate::error::{Error, Result};
use crate::quasimetric::QuasimetricSpace;

/// Whether the raw payoff table lists costs to decrease or gains to
/// increase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Costs,
    Gains,
}

/// A means index paired with a feasible way index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FeasiblePair {
    pub x: usize,
    pub omega: usize,
}

impl FeasiblePair {
    pub fn new(x: usize, omega: usize) -> Self {
        FeasiblePair { x, omega }
    }
}

/// The finite means/ways/payoff model.
///
/// `payoff[x][omega]` is `Some` wherever the table defines a value; the
/// hypothesis validator enforces that this coincides with the feasibility
/// map, so deliberately corrupted instances survive construction and get
/// rejected at the gate with the failure named.
#[derive(Debug, Clone, Serialize)]
pub struct GoalSystem {
    means: Vec<String>,
    space: QuasimetricSpace,
    ways: Vec<String>,
    feasible: Vec<Vec<usize>>,
    payoff: Vec<Vec<Option<PayoffVec>>>,
    ordering: VariableOrdering,
    theta: Cone,
    sense: Sense,
    payoff_dim: usize,
    /// Optional generator list for the common ordering cone, required when
    /// the payoff dimension exceeds 3.
    common_generators: Option<Vec<Vec<f64>>>,
}

impl GoalSystem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        means: Vec<String>,
        space: QuasimetricSpace,
        ways: Vec<String>,
        feasible: Vec<Vec<usize>>,
        payoff: Vec<Vec<Option<PayoffVec>>>,
        ordering: VariableOrdering,
        theta: Cone,
        sense: Sense,
    ) -> Result<Self> {
        if means.is_empty() {
            return Err(Error::input("goal system needs at least one means point"));
        }
        if ways.is_empty() {
            return Err(Error::input("goal system needs at least one way"));
        }
        if space.n() != means.len() {
            return Err(Error::Dimension {
                what: "quasimetric size vs means",
                expected: means.len(),
                got: space.n(),
            });
        }
        if feasible.len() != means.len() || payoff.len() != means.len() {
            return Err(Error::Dimension {
                what: "feasibility/payoff rows vs means",
                expected: means.len(),
                got: feasible.len().min(payoff.len()),
            });
        }
        let m = ordering.dim();
        if theta.dim() != m {
            return Err(Error::Dimension {
                what: "theta cone vs ordering",
                expected: m,
                got: theta.dim(),
            });
        }
        let mut feasible = feasible;
        for (x, set) in feasible.iter_mut().enumerate() {
            set.sort_unstable();
            set.dedup();
            if set.iter().any(|w| *w >= ways.len()) {
                return Err(Error::input(format!(
                    "feasible set of means {x} references a way out of range"
                )));
            }
        }
        let mut payoff = payoff;
        for (x, row) in payoff.iter_mut().enumerate() {
            if row.len() != ways.len() {
                return Err(Error::Dimension {
                    what: "payoff row length vs ways",
                    expected: ways.len(),
                    got: row.len(),
                });
            }
            for (w, entry) in row.iter_mut().enumerate() {
                if let Some(p) = entry {
                    if p.dim() != m {
                        return Err(Error::Dimension {
                            what: "payoff entry dimension",
                            expected: m,
                            got: p.dim(),
                        });
                    }
                    if sense == Sense::Gains {
                        *p = p.neg();
                    }
                    let _ = (x, w);
                }
            }
        }
        Ok(GoalSystem {
            means,
            space,
            ways,
            feasible,
            payoff,
            ordering,
            theta,
            sense,
            payoff_dim: m,
            common_generators: None,
        })
    }

    pub fn with_common_generators(mut self, generators: Vec<Vec<f64>>) -> Self {
        self.common_generators = Some(generators);
        self
    }

    pub fn n_means(&self) -> usize {
        self.means.len()
    }

    pub fn n_ways(&self) -> usize {
        self.ways.len()
    }

    pub fn m(&self) -> usize {
        self.payoff_dim
    }

    pub fn means_label(&self, x: usize) -> &str {
        &self.means[x]
    }

    pub fn way_label(&self, omega: usize) -> &str {
        &self.ways[omega]
    }

    pub fn space(&self) -> &QuasimetricSpace {
        &self.space
    }

    pub fn ordering(&self) -> &VariableOrdering {
        &self.ordering
    }

    pub fn theta(&self) -> &Cone {
        &self.theta
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn feasible_ways(&self, x: usize) -> &[usize] {
        &self.feasible[x]
    }

    pub fn is_feasible(&self, pair: FeasiblePair) -> bool {
        pair.x < self.n_means() && self.feasible[pair.x].binary_search(&pair.omega).is_ok()
    }

    /// Payoff entry, if the table defines one there.
    pub fn payoff_at(&self, x: usize, omega: usize) -> Option<&PayoffVec> {
        self.payoff.get(x)?.get(omega)?.as_ref()
    }

    /// Internal cost at a feasible pair. Only call after the hypothesis
    /// gate has confirmed `dom f = gph Ω`.
    pub fn cost(&self, pair: FeasiblePair) -> &PayoffVec {
        self.payoff[pair.x][pair.omega]
            .as_ref()
            .expect("payoff undefined on a feasible pair; hypothesis gate was skipped")
    }

    /// All feasible pairs in lexicographic `(x, omega)` order.
    pub fn feasible_pairs(&self) -> Vec<FeasiblePair> {
        let mut pairs = Vec::new();
        for (x, set) in self.feasible.iter().enumerate() {
            for &omega in set {
                pairs.push(FeasiblePair { x, omega });
            }
        }
        pairs
    }

    /// Number of entries the payoff table actually defines.
    pub fn defined_payoff_count(&self) -> usize {
        self.payoff
            .iter()
            .map(|row| row.iter().filter(|e| e.is_some()).count())
            .sum()
    }

    /// The image set `F(x) = {f(x, ω) | ω ∈ Ω(x)}`, way order preserved,
    /// duplicates kept.
    pub fn image_set(&self, x: usize) -> Result<Vec<PayoffVec>> {
        if x >= self.n_means() {
            return Err(Error::input(format!("means index {x} out of range")));
        }
        self.feasible[x]
            .iter()
            .map(|&w| {
                self.payoff[x][w]
                    .clone()
                    .ok_or_else(|| Error::input(format!("payoff undefined at ({x},{w})")))
            })
            .collect()
    }

    /// Every payoff value on the feasible graph, lexicographic pair order.
    pub fn payoff_image(&self) -> Vec<PayoffVec> {
        self.feasible_pairs()
            .into_iter()
            .filter_map(|p| self.payoff_at(p.x, p.omega).cloned())
            .collect()
    }

    /// The common ordering cone of this instance's ordering, using the
    /// supplied generator list when one was ingested.
    pub fn common_cone(&self) -> Result<Cone> {
        self.ordering
            .common_cone(self.common_generators.as_deref())
    }

    /// Quasiboundedness witness: the finite payoff image itself, reported
    /// through its bounding box. Finite instances always pass.
    pub fn check_quasibounded(&self) -> QuasiboundReport {
        let image = self.payoff_image();
        let m = self.payoff_dim;
        let mut lower = vec![f64::INFINITY; m];
        let mut upper = vec![f64::NEG_INFINITY; m];
        for p in &image {
            for i in 0..m {
                lower[i] = lower[i].min(p[i]);
                upper[i] = upper[i].max(p[i]);
            }
        }
        QuasiboundReport {
            witness_size: image.len(),
            lower,
            upper,
        }
    }

    /// Stable content digest of the instance tables.
    pub fn digest(&self) -> String {
        let blob = serde_json::to_vec(self).expect("goal system serializes");
        let mut hasher = Sha256::new();
        hasher.update(&blob);
        hex_string(&hasher.finalize())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Report produced by [`GoalSystem::check_quasibounded`]: the payoff image
/// is the witness set `M`, bounded because it is finite.
#[derive(Debug, Clone, Serialize)]
pub struct QuasiboundReport {
    pub witness_size: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

// ---------------------------------------------------------------------------
// Resource-allocation instance builder
// ---------------------------------------------------------------------------

/// Per-activity payoff rule `f_j(x, ω_j)` for the resource builder.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PayoffRule {
    /// `⟨omega_coeff, ω_j⟩ + ⟨x_coeff, x⟩ + offset`
    Linear {
        omega_coeff: Vec<f64>,
        #[serde(default)]
        x_coeff: Vec<f64>,
        #[serde(default)]
        offset: f64,
    },
    /// `weight · ‖ω_j - target‖²`
    QuadraticTarget { target: Vec<f64>, weight: f64 },
}

impl PayoffRule {
    fn eval(&self, x: &[f64], omega_j: &[f64]) -> f64 {
        match self {
            PayoffRule::Linear {
                omega_coeff,
                x_coeff,
                offset,
            } => {
                let a: f64 = omega_coeff.iter().zip(omega_j).map(|(c, w)| c * w).sum();
                let b: f64 = x_coeff.iter().zip(x).map(|(c, v)| c * v).sum();
                a + b + offset
            }
            PayoffRule::QuadraticTarget { target, weight } => {
                let d2: f64 = target
                    .iter()
                    .zip(omega_j)
                    .map(|(t, w)| (w - t) * (w - t))
                    .sum();
                weight * d2
            }
        }
    }

    fn check_dims(&self, d: usize) -> Result<()> {
        match self {
            PayoffRule::Linear {
                omega_coeff,
                x_coeff,
                ..
            } => {
                if omega_coeff.len() != d {
                    return Err(Error::Dimension {
                        what: "rule omega_coeff",
                        expected: d,
                        got: omega_coeff.len(),
                    });
                }
                if !x_coeff.is_empty() && x_coeff.len() != d {
                    return Err(Error::Dimension {
                        what: "rule x_coeff",
                        expected: d,
                        got: x_coeff.len(),
                    });
                }
            }
            PayoffRule::QuadraticTarget { target, .. } => {
                if target.len() != d {
                    return Err(Error::Dimension {
                        what: "rule target",
                        expected: d,
                        got: target.len(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Parameters for [`build_resource_instance`].
#[derive(Debug, Clone)]
pub struct ResourceSpec {
    /// Dimension of the means space.
    pub d: usize,
    /// Number of activities sharing the resource (the payoff dimension).
    pub activities: usize,
    /// Per-coordinate grid levels; means are the grid's cartesian product.
    pub grid: Vec<Vec<f64>>,
    pub rules: Vec<PayoffRule>,
    /// Per-unit cost of acquiring resources when changing means upward.
    pub up_cost: f64,
    /// Per-unit cost of releasing resources when changing means downward.
    pub down_cost: f64,
    pub ordering: Option<VariableOrdering>,
    pub theta: Option<Cone>,
    pub sense: Sense,
}

const MAX_WAYS_UNIVERSE: usize = 200_000;

/// Build the least-interconnected goal system: an agent splits a grid
/// resource vector `x` into allocations `ω = (ω_1, …, ω_m)` with
/// `Σ_j ω_j = x` exactly, and activity `j` scores `f_j(x, ω_j)`.
///
/// Means with no feasible allocation are dropped with a warning; an empty
/// result is rejected. The quasimetric charges `up_cost` per unit acquired
/// and `down_cost` per unit released, coordinatewise.
pub fn build_resource_instance(spec: &ResourceSpec) -> Result<(GoalSystem, Vec<String>)> {
    if spec.d == 0 || spec.activities == 0 {
        return Err(Error::input("d and activities must be >= 1"));
    }
    if spec.grid.len() != spec.d {
        return Err(Error::Dimension {
            what: "grid coordinate count",
            expected: spec.d,
            got: spec.grid.len(),
        });
    }
    if spec.grid.iter().any(|levels| levels.is_empty()) {
        return Err(Error::input("every grid coordinate needs at least one level"));
    }
    if spec
        .grid
        .iter()
        .flatten()
        .any(|level| !level.is_finite())
    {
        return Err(Error::input("grid levels must be finite"));
    }
    if spec.rules.len() != spec.activities {
        return Err(Error::Dimension {
            what: "rule count vs activities",
            expected: spec.activities,
            got: spec.rules.len(),
        });
    }
    for rule in &spec.rules {
        rule.check_dims(spec.d)?;
    }
    if !(spec.up_cost.is_finite() && spec.up_cost > 0.0)
        || !(spec.down_cost.is_finite() && spec.down_cost > 0.0)
    {
        return Err(Error::input("up_cost and down_cost must be positive"));
    }

    // Grid points in R^d.
    let grid_points: Vec<Vec<f64>> = spec
        .grid
        .iter()
        .map(|levels| levels.iter().cloned())
        .multi_cartesian_product()
        .collect();

    // The ways universe: all m-tuples of grid points.
    let universe_size = grid_points.len().checked_pow(spec.activities as u32);
    match universe_size {
        Some(s) if s <= MAX_WAYS_UNIVERSE => {}
        _ => {
            return Err(Error::input(format!(
                "ways universe exceeds {MAX_WAYS_UNIVERSE} tuples; shrink the grid"
            )))
        }
    }
    let ways_tuples: Vec<Vec<usize>> = (0..spec.activities)
        .map(|_| 0..grid_points.len())
        .multi_cartesian_product()
        .collect();

    let sum_tol = 1e-9;
    let mut kept_means: Vec<Vec<f64>> = Vec::new();
    let mut kept_feasible: Vec<Vec<usize>> = Vec::new();
    let mut warnings = Vec::new();
    for x in &grid_points {
        let mut feas = Vec::new();
        for (wi, tuple) in ways_tuples.iter().enumerate() {
            let mut sum = vec![0.0; spec.d];
            for &gi in tuple {
                for (c, v) in sum.iter_mut().zip(&grid_points[gi]) {
                    *c += v;
                }
            }
            if sum
                .iter()
                .zip(x)
                .all(|(s, xv)| (s - xv).abs() <= sum_tol)
            {
                feas.push(wi);
            }
        }
        if feas.is_empty() {
            warnings.push(format!(
                "means point {x:?} has no exact allocation on the grid; dropped"
            ));
        } else {
            kept_means.push(x.clone());
            kept_feasible.push(feas);
        }
    }
    if kept_means.is_empty() {
        return Err(Error::input(
            "no means point admits a feasible allocation on the grid",
        ));
    }

    let n = kept_means.len();
    let mut matrix = vec![vec![0.0; n]; n];
    for (i, a) in kept_means.iter().enumerate() {
        for (j, b) in kept_means.iter().enumerate() {
            let mut cost = 0.0;
            for (av, bv) in a.iter().zip(b) {
                cost += spec.up_cost * (bv - av).max(0.0) + spec.down_cost * (av - bv).max(0.0);
            }
            matrix[i][j] = cost;
        }
    }
    let space = QuasimetricSpace::from_matrix_unchecked(matrix)?;

    let means_labels: Vec<String> = kept_means.iter().map(|x| point_label("x", x)).collect();
    let way_labels: Vec<String> = ways_tuples
        .iter()
        .map(|tuple| {
            let parts: Vec<String> = tuple
                .iter()
                .map(|&gi| point_label("", &grid_points[gi]))
                .collect();
            format!("w[{}]", parts.join("+"))
        })
        .collect();

    let m = spec.activities;
    let mut payoff: Vec<Vec<Option<PayoffVec>>> = vec![vec![None; ways_tuples.len()]; n];
    for (xi, x) in kept_means.iter().enumerate() {
        for &wi in &kept_feasible[xi] {
            let comps: Vec<f64> = spec
                .rules
                .iter()
                .zip(&ways_tuples[wi])
                .map(|(rule, &gi)| rule.eval(x, &grid_points[gi]))
                .collect();
            payoff[xi][wi] = Some(PayoffVec::new(comps)?);
        }
    }

    let ordering = spec
        .ordering
        .clone()
        .unwrap_or_else(|| VariableOrdering::constant(Cone::orthant(m)));
    let theta = spec.theta.clone().unwrap_or_else(|| Cone::orthant(m));

    let gs = GoalSystem::new(
        means_labels,
        space,
        way_labels,
        kept_feasible,
        payoff,
        ordering,
        theta,
        spec.sense,
    )?;
    Ok((gs, warnings))
}

fn point_label(prefix: &str, point: &[f64]) -> String {
    let parts: Vec<String> = point.iter().map(|v| format!("{v}")).collect();
    format!("{prefix}({})", parts.join(","))
}
