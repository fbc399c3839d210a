//! Scenario files: the external face of the library.
//!
//! A scenario is a JSON document with a `version`, exactly one instance
//! section (explicit tables, or parameters for the resource-allocation
//! builder), a `params` section, and an optional `run` section. Loading
//! collects *all* schema problems with their field paths instead of
//! stopping at the first. Random valid instances are generated by rejection
//! sampling against the hypothesis validator, fully determined by one
//! 64-bit seed.

use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certify::validate_hypotheses;
use crate::cones::{Cone, PayoffVec, VariableOrdering};
use crate::error::Error;
use crate::goal::{
    build_resource_instance, FeasiblePair, GoalSystem, PayoffRule, ResourceSpec, Sense,
};
use crate::quasimetric::QuasimetricSpace;
use crate::solver::SolveParams;
use crate::worthwhile::{MonotoneFn, RatioSchedule};

pub const SCENARIO_VERSION: &str = "1";

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub version: String,
    pub instance: InstanceSection,
    pub params: ParamsSection,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct InstanceSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit: Option<ExplicitInstance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resource: Option<ResourceSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExplicitInstance {
    pub means: Vec<String>,
    pub quasimetric: Vec<Vec<f64>>,
    pub ways: Vec<String>,
    pub feasible: Vec<Vec<usize>>,
    /// Dense table over `means × ways`; `null` marks an undefined entry.
    pub payoffs: Vec<Vec<Option<Vec<f64>>>>,
    pub ordering: OrderingSpec,
    pub theta: ConeSpec,
    #[serde(default = "default_sense")]
    pub sense: Sense,
    /// Generators of the common ordering cone, required when the payoff
    /// dimension exceeds 3.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub common_generators: Option<Vec<Vec<f64>>>,
}

fn default_sense() -> Sense {
    Sense::Costs
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderingSpec {
    pub anchors: Vec<AnchorSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnchorSpec {
    pub point: Vec<f64>,
    pub cone: ConeSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConeSpec {
    pub normals: Vec<Vec<f64>>,
    pub generators: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResourceSection {
    pub d: usize,
    /// Number of activities sharing the resource (the payoff dimension).
    #[serde(rename = "m")]
    pub activities: usize,
    pub grid: Vec<Vec<f64>>,
    pub rules: Vec<PayoffRule>,
    pub up_cost: f64,
    pub down_cost: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordering: Option<OrderingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<ConeSpec>,
    #[serde(default = "default_sense")]
    pub sense: Sense,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsSection {
    pub eps: f64,
    pub lambda: f64,
    pub xi: Vec<f64>,
    pub start: StartSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pleasure: Option<MonotoneFn>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pain: Option<MonotoneFn>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_schedule: Option<RatioSchedule>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct StartSpec {
    pub x: usize,
    pub omega: usize,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct RunSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

// ---------------------------------------------------------------------------
// Schema errors
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SchemaIssue {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchemaErrors(pub Vec<SchemaIssue>);

impl fmt::Display for SchemaErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for issue in &self.0 {
            writeln!(f, "{}: {}", issue.path, issue.message)?;
        }
        Ok(())
    }
}

impl std::error::Error for SchemaErrors {}

struct Issues(Vec<SchemaIssue>);

impl Issues {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(SchemaIssue {
            path: path.into(),
            message: message.into(),
        });
    }
}

// ---------------------------------------------------------------------------
// Loading and validation
// ---------------------------------------------------------------------------

/// A schema-validated scenario, ready to instantiate.
#[derive(Debug, Clone)]
pub struct Scenario {
    file: ScenarioFile,
}

/// The result of expanding a scenario into a concrete instance.
#[derive(Debug)]
pub struct LoadedInstance {
    pub gs: GoalSystem,
    pub params: SolveParams,
    pub warnings: Vec<String>,
}

pub fn load_scenario(path: &Path) -> Result<Scenario, SchemaErrors> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        SchemaErrors(vec![SchemaIssue {
            path: "$".into(),
            message: format!("cannot read {}: {e}", path.display()),
        }])
    })?;
    Scenario::from_json(&text)
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario, SchemaErrors> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| {
            SchemaErrors(vec![SchemaIssue {
                path: "$".into(),
                message: e.to_string(),
            }])
        })?;
        Scenario::from_file(file)
    }

    pub fn from_file(file: ScenarioFile) -> Result<Scenario, SchemaErrors> {
        let mut issues = Issues(Vec::new());
        validate_schema(&file, &mut issues);
        if issues.0.is_empty() {
            Ok(Scenario { file })
        } else {
            Err(SchemaErrors(issues.0))
        }
    }

    pub fn file(&self) -> &ScenarioFile {
        &self.file
    }

    /// Expand into a goal system plus solve parameters. Builder warnings
    /// (dropped means points) are surfaced, never swallowed.
    pub fn instantiate(&self) -> Result<LoadedInstance, Error> {
        let (gs, warnings) = match (&self.file.instance.explicit, &self.file.instance.resource) {
            (Some(explicit), None) => (build_explicit(explicit)?, Vec::new()),
            (None, Some(resource)) => {
                let spec = ResourceSpec {
                    d: resource.d,
                    activities: resource.activities,
                    grid: resource.grid.clone(),
                    rules: resource.rules.clone(),
                    up_cost: resource.up_cost,
                    down_cost: resource.down_cost,
                    ordering: match &resource.ordering {
                        Some(spec) => Some(build_ordering(spec)?),
                        None => None,
                    },
                    theta: match &resource.theta {
                        Some(spec) => Some(build_cone(spec)?),
                        None => None,
                    },
                    sense: resource.sense,
                };
                build_resource_instance(&spec)?
            }
            _ => unreachable!("schema validation enforces exactly one instance section"),
        };
        let p = &self.file.params;
        if p.start.x >= gs.n_means() || p.start.omega >= gs.n_ways() {
            return Err(Error::input(format!(
                "start ({}, {}) is outside the expanded instance ({} means, {} ways)",
                p.start.x,
                p.start.omega,
                gs.n_means(),
                gs.n_ways()
            )));
        }
        let params = SolveParams {
            eps: p.eps,
            lambda: p.lambda,
            xi: PayoffVec::new(p.xi.clone())?,
            start: FeasiblePair::new(p.start.x, p.start.omega),
            max_iters: p.max_iters,
        };
        Ok(LoadedInstance {
            gs,
            params,
            warnings,
        })
    }
}

fn build_cone(spec: &ConeSpec) -> Result<Cone, Error> {
    match spec.tol {
        Some(tol) => Cone::with_tol(spec.normals.clone(), spec.generators.clone(), tol),
        None => Cone::new(spec.normals.clone(), spec.generators.clone()),
    }
}

fn build_ordering(spec: &OrderingSpec) -> Result<VariableOrdering, Error> {
    let anchors = spec
        .anchors
        .iter()
        .map(|a| Ok((PayoffVec::new(a.point.clone())?, build_cone(&a.cone)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    VariableOrdering::new(anchors)
}

fn build_explicit(explicit: &ExplicitInstance) -> Result<GoalSystem, Error> {
    let space = QuasimetricSpace::from_matrix_unchecked(explicit.quasimetric.clone())?;
    let payoff = explicit
        .payoffs
        .iter()
        .map(|row| {
            row.iter()
                .map(|entry| entry.clone().map(PayoffVec::new).transpose())
                .collect::<Result<Vec<_>, Error>>()
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let gs = GoalSystem::new(
        explicit.means.clone(),
        space,
        explicit.ways.clone(),
        explicit.feasible.clone(),
        payoff,
        build_ordering(&explicit.ordering)?,
        build_cone(&explicit.theta)?,
        explicit.sense,
    )?;
    Ok(match &explicit.common_generators {
        Some(gens) => gs.with_common_generators(gens.clone()),
        None => gs,
    })
}

fn validate_cone_spec(spec: &ConeSpec, m: usize, path: &str, issues: &mut Issues) {
    for (i, n) in spec.normals.iter().enumerate() {
        if n.len() != m {
            issues.push(
                format!("{path}.normals[{i}]"),
                format!("expected dimension {m}, got {}", n.len()),
            );
        } else if n.iter().any(|c| !c.is_finite()) {
            issues.push(format!("{path}.normals[{i}]"), "non-finite entry");
        }
    }
    for (i, g) in spec.generators.iter().enumerate() {
        if g.len() != m {
            issues.push(
                format!("{path}.generators[{i}]"),
                format!("expected dimension {m}, got {}", g.len()),
            );
        } else if g.iter().any(|c| !c.is_finite()) {
            issues.push(format!("{path}.generators[{i}]"), "non-finite entry");
        }
    }
    if spec.normals.is_empty() && spec.generators.is_empty() {
        issues.push(path, "cone needs at least one normal or generator");
    }
    if let Some(tol) = spec.tol {
        if !(tol.is_finite() && tol >= 0.0) {
            issues.push(format!("{path}.tol"), "must be finite and >= 0");
        }
    }
    // Cross-representation consistency, only meaningful once shapes match.
    if issues.0.is_empty() {
        if let Err(e) = build_cone(spec) {
            issues.push(path, e.to_string());
        }
    }
}

fn validate_schema(file: &ScenarioFile, issues: &mut Issues) {
    if file.version != SCENARIO_VERSION {
        issues.push(
            "version",
            format!("unrecognized version {:?}, expected {SCENARIO_VERSION:?}", file.version),
        );
    }

    let m = match (&file.instance.explicit, &file.instance.resource) {
        (Some(explicit), None) => {
            validate_explicit(explicit, issues);
            explicit
                .ordering
                .anchors
                .first()
                .map(|a| a.point.len())
                .unwrap_or(0)
        }
        (None, Some(resource)) => {
            validate_resource(resource, issues);
            resource.activities
        }
        (Some(_), Some(_)) => {
            issues.push("instance", "give either explicit or resource, not both");
            0
        }
        (None, None) => {
            issues.push("instance", "one of explicit or resource is required");
            0
        }
    };

    let p = &file.params;
    if !(p.eps.is_finite() && p.eps > 0.0) {
        issues.push("params.eps", "must be finite and > 0");
    }
    if !(p.lambda.is_finite() && p.lambda > 0.0) {
        issues.push("params.lambda", "must be finite and > 0");
    }
    if m > 0 {
        if p.xi.len() != m {
            issues.push(
                "params.xi",
                format!("expected dimension {m}, got {}", p.xi.len()),
            );
        } else {
            let norm = p.xi.iter().map(|c| c * c).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-9 {
                issues.push(
                    "params.xi",
                    format!("must have unit Euclidean norm, got {norm}"),
                );
            }
        }
    }
    if let Some(f) = &p.pleasure {
        if let Err(e) = f.validate() {
            issues.push("params.pleasure", e.to_string());
        }
    }
    if let Some(f) = &p.pain {
        if let Err(e) = f.validate() {
            issues.push("params.pain", e.to_string());
        }
    }
    if let Some(s) = &p.ratio_schedule {
        if let Err(e) = s.validate() {
            issues.push("params.ratio_schedule", e.to_string());
        }
    }
}

fn validate_explicit(explicit: &ExplicitInstance, issues: &mut Issues) {
    let n = explicit.means.len();
    let w = explicit.ways.len();
    if n == 0 {
        issues.push("instance.explicit.means", "needs at least one means point");
    }
    if w == 0 {
        issues.push("instance.explicit.ways", "needs at least one way");
    }

    if explicit.quasimetric.len() != n {
        issues.push(
            "instance.explicit.quasimetric",
            format!("expected {n} rows, got {}", explicit.quasimetric.len()),
        );
    }
    for (i, row) in explicit.quasimetric.iter().enumerate() {
        if row.len() != n {
            issues.push(
                format!("instance.explicit.quasimetric[{i}]"),
                format!("expected {n} entries, got {}", row.len()),
            );
            continue;
        }
        for (j, q) in row.iter().enumerate() {
            if !q.is_finite() {
                issues.push(
                    format!("instance.explicit.quasimetric[{i}][{j}]"),
                    "non-finite entry",
                );
            } else if *q < 0.0 {
                issues.push(
                    format!("instance.explicit.quasimetric[{i}][{j}]"),
                    format!("negative change cost {q}"),
                );
            }
        }
    }

    if explicit.feasible.len() != n {
        issues.push(
            "instance.explicit.feasible",
            format!("expected {n} rows, got {}", explicit.feasible.len()),
        );
    }
    for (x, set) in explicit.feasible.iter().enumerate() {
        for (k, way) in set.iter().enumerate() {
            if *way >= w {
                issues.push(
                    format!("instance.explicit.feasible[{x}][{k}]"),
                    format!("way index {way} out of range (ways = {w})"),
                );
            }
        }
    }

    let m = explicit
        .ordering
        .anchors
        .first()
        .map(|a| a.point.len())
        .unwrap_or(0);
    if explicit.ordering.anchors.is_empty() {
        issues.push(
            "instance.explicit.ordering.anchors",
            "needs at least one anchor",
        );
    }
    for (i, anchor) in explicit.ordering.anchors.iter().enumerate() {
        if anchor.point.len() != m || anchor.point.iter().any(|c| !c.is_finite()) {
            issues.push(
                format!("instance.explicit.ordering.anchors[{i}].point"),
                format!("expected {m} finite entries"),
            );
        }
        validate_cone_spec(
            &anchor.cone,
            m,
            &format!("instance.explicit.ordering.anchors[{i}].cone"),
            issues,
        );
    }
    validate_cone_spec(&explicit.theta, m, "instance.explicit.theta", issues);

    if explicit.payoffs.len() != n {
        issues.push(
            "instance.explicit.payoffs",
            format!("expected {n} rows, got {}", explicit.payoffs.len()),
        );
    }
    for (x, row) in explicit.payoffs.iter().enumerate() {
        if row.len() != w {
            issues.push(
                format!("instance.explicit.payoffs[{x}]"),
                format!("expected {w} entries, got {}", row.len()),
            );
            continue;
        }
        for (omega, entry) in row.iter().enumerate() {
            if let Some(v) = entry {
                if m > 0 && v.len() != m {
                    issues.push(
                        format!("instance.explicit.payoffs[{x}][{omega}]"),
                        format!("expected dimension {m}, got {}", v.len()),
                    );
                } else if v.iter().any(|c| !c.is_finite()) {
                    issues.push(
                        format!("instance.explicit.payoffs[{x}][{omega}]"),
                        "non-finite entry",
                    );
                }
            }
        }
    }

    if let Some(gens) = &explicit.common_generators {
        for (i, g) in gens.iter().enumerate() {
            if g.len() != m {
                issues.push(
                    format!("instance.explicit.common_generators[{i}]"),
                    format!("expected dimension {m}, got {}", g.len()),
                );
            }
        }
    }
}

fn validate_resource(resource: &ResourceSection, issues: &mut Issues) {
    if resource.d == 0 {
        issues.push("instance.resource.d", "must be >= 1");
    }
    if resource.activities == 0 {
        issues.push("instance.resource.activities", "must be >= 1");
    }
    if resource.grid.len() != resource.d {
        issues.push(
            "instance.resource.grid",
            format!("expected {} coordinates, got {}", resource.d, resource.grid.len()),
        );
    }
    for (i, levels) in resource.grid.iter().enumerate() {
        if levels.is_empty() {
            issues.push(format!("instance.resource.grid[{i}]"), "no levels");
        }
        if levels.iter().any(|v| !v.is_finite()) {
            issues.push(format!("instance.resource.grid[{i}]"), "non-finite level");
        }
    }
    if resource.rules.len() != resource.activities {
        issues.push(
            "instance.resource.rules",
            format!(
                "expected {} rules, got {}",
                resource.activities,
                resource.rules.len()
            ),
        );
    }
    if !(resource.up_cost.is_finite() && resource.up_cost > 0.0) {
        issues.push("instance.resource.up_cost", "must be finite and > 0");
    }
    if !(resource.down_cost.is_finite() && resource.down_cost > 0.0) {
        issues.push("instance.resource.down_cost", "must be finite and > 0");
    }
    if let Some(ordering) = &resource.ordering {
        for (i, anchor) in ordering.anchors.iter().enumerate() {
            validate_cone_spec(
                &anchor.cone,
                resource.activities,
                &format!("instance.resource.ordering.anchors[{i}].cone"),
                issues,
            );
        }
    }
    if let Some(theta) = &resource.theta {
        validate_cone_spec(theta, resource.activities, "instance.resource.theta", issues);
    }
}

// ---------------------------------------------------------------------------
// Random instance generation
// ---------------------------------------------------------------------------

fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

fn orthant_spec(m: usize) -> ConeSpec {
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    ConeSpec {
        normals: rows.clone(),
        generators: rows,
        tol: None,
    }
}

/// A pointed subcone of the orthant, strictly narrower, per dimension.
fn narrow_spec(m: usize) -> ConeSpec {
    match m {
        1 => orthant_spec(1),
        2 => ConeSpec {
            // {p : p1 >= 0, p2 >= p1}
            normals: vec![vec![1.0, 0.0], vec![-1.0, 1.0]],
            generators: vec![vec![0.0, 1.0], vec![1.0, 1.0]],
            tol: None,
        },
        3 => ConeSpec {
            normals: vec![
                vec![-1.0, -1.0, 1.0],
                vec![0.0, 1.0, 0.0],
                vec![1.0, 0.0, 0.0],
            ],
            generators: vec![
                vec![1.0, 0.0, 1.0],
                vec![0.0, 1.0, 1.0],
                vec![0.0, 0.0, 1.0],
            ],
            tol: None,
        },
        _ => unreachable!("generator only emits m <= 3"),
    }
}

fn unit_sum_of(generators: &[Vec<f64>]) -> Vec<f64> {
    let m = generators[0].len();
    let mut sum = vec![0.0; m];
    for g in generators {
        for (s, c) in sum.iter_mut().zip(g) {
            *s += c;
        }
    }
    let norm = sum.iter().map(|c| c * c).sum::<f64>().sqrt();
    sum.iter().map(|c| c / norm).collect()
}

/// Shortest-path closure of random positive arc costs: the triangle
/// inequality holds by construction, asymmetry survives.
fn random_quasimetric(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
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

fn random_attempt(rng: &mut ChaCha8Rng, force_constant: bool) -> ScenarioFile {
    let n = rng.random_range(2..=12usize);
    let w = rng.random_range(1..=5usize);
    let m = rng.random_range(1..=3usize);
    let sense = if rng.random_bool(0.2) {
        Sense::Gains
    } else {
        Sense::Costs
    };

    let quasimetric = random_quasimetric(rng, n);

    let mut feasible: Vec<Vec<usize>> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut set: Vec<usize> = (0..w).filter(|_| rng.random_bool(0.6)).collect();
        if set.is_empty() {
            set.push(rng.random_range(0..w));
        }
        feasible.push(set);
    }

    let mut payoffs: Vec<Vec<Option<Vec<f64>>>> = vec![vec![None; w]; n];
    let mut internal_min = vec![f64::INFINITY; m];
    let mut internal_max = vec![f64::NEG_INFINITY; m];
    for (x, set) in feasible.iter().enumerate() {
        for &omega in set {
            let v: Vec<f64> = (0..m).map(|_| round3(rng.random_range(0.0..10.0))).collect();
            for (i, c) in v.iter().enumerate() {
                let internal = if sense == Sense::Gains { -c } else { *c };
                internal_min[i] = internal_min[i].min(internal);
                internal_max[i] = internal_max[i].max(internal);
            }
            payoffs[x][omega] = Some(v);
        }
    }

    let variable = !force_constant && m >= 2 && rng.random_bool(0.45);
    let ordering = if variable {
        // Narrow cone near the low corner of the internal cost range, the
        // orthant near the high corner: comparable payoffs then see nested
        // cones, which rejection sampling confirms.
        OrderingSpec {
            anchors: vec![
                AnchorSpec {
                    point: internal_min.clone(),
                    cone: narrow_spec(m),
                },
                AnchorSpec {
                    point: internal_max.clone(),
                    cone: orthant_spec(m),
                },
            ],
        }
    } else {
        let cone = if !force_constant && rng.random_bool(0.3) {
            narrow_spec(m)
        } else {
            orthant_spec(m)
        };
        OrderingSpec {
            anchors: vec![AnchorSpec {
                point: vec![0.0; m],
                cone,
            }],
        }
    };

    // Direction drawn from the common ordering cone (the narrowest anchor
    // cone by construction).
    let theta_k_gens = if variable {
        narrow_spec(m).generators
    } else {
        ordering.anchors[0].cone.generators.clone()
    };
    let xi = unit_sum_of(&theta_k_gens);

    let start_x = rng.random_range(0..n);
    let start_omega = feasible[start_x][rng.random_range(0..feasible[start_x].len())];

    ScenarioFile {
        version: SCENARIO_VERSION.into(),
        instance: InstanceSection {
            explicit: Some(ExplicitInstance {
                means: (0..n).map(|i| format!("x{i}")).collect(),
                quasimetric,
                ways: (0..w).map(|i| format!("w{i}")).collect(),
                feasible,
                payoffs,
                ordering,
                theta: orthant_spec(m),
                sense,
                common_generators: None,
            }),
            resource: None,
        },
        params: ParamsSection {
            eps: round3(rng.random_range(0.5..3.0)),
            lambda: round3(rng.random_range(0.5..3.0)),
            xi,
            start: StartSpec {
                x: start_x,
                omega: start_omega,
            },
            max_iters: None,
            pleasure: None,
            pain: None,
            ratio_schedule: None,
        },
        run: RunSection::default(),
    }
}

/// A random instance within desk-scale bounds (`|X| ≤ 12`, `|Ω̄| ≤ 5`,
/// `m ≤ 3`), rejection-sampled until the hypothesis validator accepts it.
/// One seed fully determines the output.
pub fn random_scenario(seed: u64) -> ScenarioFile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..1000 {
        let file = random_attempt(&mut rng, attempt > 50);
        let Ok(scenario) = Scenario::from_file(file.clone()) else {
            continue;
        };
        let Ok(loaded) = scenario.instantiate() else {
            continue;
        };
        if validate_hypotheses(&loaded.gs).overall {
            return file;
        }
    }
    unreachable!("constant-orthant instances always pass the hypothesis gate")
}
