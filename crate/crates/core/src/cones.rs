//! Polyhedral cone algebra and variable cone-valued orderings.
//!
//! Cones are kept in a dual representation: half-space normals decide
//! membership (`p ∈ K` iff `⟨n, p⟩ ≥ -tol` for every normal `n`), while a
//! generator list represents the same cone as a conic hull and feeds the
//! nonnegative-least-squares membership test used for Minkowski sums.
//! A [`VariableOrdering`] assigns a cone `K[p]` to every payoff vector `p`
//! (nearest anchor, lowest index on ties) and induces the relation
//! `p2 ≤_{K[p1]} p1  ⇔  p1 - p2 ∈ K[p1]`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance used for inner-product membership tests and for
/// value-equality comparisons between payoff vectors.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Residual bound below which a nonnegative least-squares fit counts as
/// exact conic-combination membership.
pub const NNLS_RESIDUAL_TOL: f64 = 1e-8;

// ---------------------------------------------------------------------------
// PayoffVec
// ---------------------------------------------------------------------------

/// A point of the payoff space `R^m`. All components are finite.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PayoffVec(Vec<f64>);

impl PayoffVec {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::input("payoff vector must have dimension >= 1"));
        }
        if let Some(c) = components.iter().find(|c| !c.is_finite()) {
            return Err(Error::input(format!("non-finite payoff component {c}")));
        }
        Ok(PayoffVec(components))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn sub(&self, other: &PayoffVec) -> PayoffVec {
        PayoffVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn add(&self, other: &PayoffVec) -> PayoffVec {
        PayoffVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, factor: f64) -> PayoffVec {
        PayoffVec(self.0.iter().map(|a| a * factor).collect())
    }

    pub fn neg(&self) -> PayoffVec {
        self.scale(-1.0)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn dist(&self, other: &PayoffVec) -> f64 {
        self.sub(other).norm()
    }

    /// Componentwise equality within `tol`.
    pub fn approx_eq(&self, other: &PayoffVec, tol: f64) -> bool {
        self.0.len() == other.0.len()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

impl std::ops::Index<usize> for PayoffVec {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

// ---------------------------------------------------------------------------
// Cone
// ---------------------------------------------------------------------------

/// A closed convex polyhedral cone in `R^m`, dual-represented.
///
/// Construction cross-checks the two representations: every generator must
/// satisfy the half-space test within `tol`. Pointedness is *not* enforced
/// here; it is a hypothesis the certifier checks, so that deliberately
/// broken instances remain constructible.
#[derive(Debug, Clone, Serialize)]
pub struct Cone {
    normals: Vec<Vec<f64>>,
    generators: Vec<Vec<f64>>,
    dim: usize,
    tol: f64,
}

impl Cone {
    pub fn new(normals: Vec<Vec<f64>>, generators: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_tol(normals, generators, DEFAULT_TOL)
    }

    pub fn with_tol(normals: Vec<Vec<f64>>, generators: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        if tol < 0.0 || !tol.is_finite() {
            return Err(Error::input("cone tolerance must be finite and >= 0"));
        }
        let dim = normals
            .first()
            .or_else(|| generators.first())
            .map(|v| v.len())
            .ok_or_else(|| Error::input("cone needs at least one normal or generator"))?;
        if dim == 0 {
            return Err(Error::input("cone dimension must be >= 1"));
        }
        for v in normals.iter().chain(generators.iter()) {
            if v.len() != dim {
                return Err(Error::Dimension {
                    what: "cone row",
                    expected: dim,
                    got: v.len(),
                });
            }
            if v.iter().any(|c| !c.is_finite()) {
                return Err(Error::input("non-finite entry in cone definition"));
            }
        }
        let cone = Cone {
            normals,
            generators,
            dim,
            tol,
        };
        // Cross-representation consistency: generators must pass the
        // half-space test.
        for (i, g) in cone.generators.iter().enumerate() {
            if !cone.contains_slice(g) {
                return Err(Error::input(format!(
                    "generator {i} = {g:?} violates the cone's half-space system"
                )));
            }
        }
        Ok(cone)
    }

    /// The nonnegative orthant `R^m_+` (normals and generators both the
    /// standard basis).
    pub fn orthant(dim: usize) -> Cone {
        let rows: Vec<Vec<f64>> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Cone {
            normals: rows.clone(),
            generators: rows,
            dim,
            tol: DEFAULT_TOL,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn normals(&self) -> &[Vec<f64>] {
        &self.normals
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    /// Half-space membership: `⟨n, p⟩ ≥ -tol` for every normal `n`.
    pub fn contains(&self, p: &PayoffVec) -> Result<bool> {
        if p.dim() != self.dim {
            return Err(Error::Dimension {
                what: "cone membership query",
                expected: self.dim,
                got: p.dim(),
            });
        }
        Ok(self.contains_slice(p.as_slice()))
    }

    pub(crate) fn contains_slice(&self, p: &[f64]) -> bool {
        self.normals.iter().all(|n| dot(n, p) >= -self.tol)
    }

    /// A cone is pointed iff its lineality space `{p : ⟨n,p⟩ = 0 ∀n}` is
    /// `{0}`, i.e. the stacked normal matrix has full column rank.
    pub fn is_pointed(&self) -> bool {
        if self.normals.is_empty() {
            return false; // the whole space
        }
        let rows = self.normals.len();
        let mat = DMatrix::from_fn(rows, self.dim, |i, j| self.normals[i][j]);
        let svd = mat.svd(false, false);
        let max_sv = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let eps = DEFAULT_TOL * (1.0 + max_sv);
        let rank = svd.singular_values.iter().filter(|s| **s > eps).count();
        rank == self.dim
    }

    /// `K ≠ {0}`: some generator is a nonzero ray.
    pub fn is_nontrivial(&self) -> bool {
        self.generators
            .iter()
            .any(|g| g.iter().any(|c| c.abs() > DEFAULT_TOL))
    }

    /// Proper cone: neither `{0}` nor the whole space.
    pub fn is_proper(&self) -> bool {
        let cuts_space = self
            .normals
            .iter()
            .any(|n| n.iter().any(|c| c.abs() > DEFAULT_TOL));
        self.is_nontrivial() && cuts_space
    }

    /// The reflected cone `-K` (negated normals and generators).
    pub fn negate(&self) -> Cone {
        Cone {
            normals: self
                .normals
                .iter()
                .map(|n| n.iter().map(|c| -c).collect())
                .collect(),
            generators: self
                .generators
                .iter()
                .map(|g| g.iter().map(|c| -c).collect())
                .collect(),
            dim: self.dim,
            tol: self.tol,
        }
    }
}

// ---------------------------------------------------------------------------
// VariableOrdering
// ---------------------------------------------------------------------------

/// A rule `p ↦ K[p]` assigning a cone to each payoff vector: the cone of the
/// nearest anchor in Euclidean distance, ties broken by lowest anchor index.
///
/// The selection rule is total, so `K[p]` exists for every `p`; anchor-cone
/// pointedness and the transitivity of the induced relation are hypotheses
/// validated by the certifier rather than constructor invariants.
#[derive(Debug, Clone, Serialize)]
pub struct VariableOrdering {
    anchors: Vec<(PayoffVec, Cone)>,
    dim: usize,
}

impl VariableOrdering {
    pub fn new(anchors: Vec<(PayoffVec, Cone)>) -> Result<Self> {
        let dim = match anchors.first() {
            Some((p, _)) => p.dim(),
            None => return Err(Error::input("ordering needs at least one anchor")),
        };
        for (i, (p, cone)) in anchors.iter().enumerate() {
            if p.dim() != dim || cone.dim() != dim {
                return Err(Error::Dimension {
                    what: "ordering anchor",
                    expected: dim,
                    got: if p.dim() != dim { p.dim() } else { cone.dim() },
                });
            }
            let _ = i;
        }
        Ok(VariableOrdering { anchors, dim })
    }

    /// A constant ordering `K[p] ≡ cone` (single anchor at the origin).
    pub fn constant(cone: Cone) -> Self {
        let dim = cone.dim();
        VariableOrdering {
            anchors: vec![(PayoffVec(vec![0.0; dim]), cone)],
            dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn anchors(&self) -> &[(PayoffVec, Cone)] {
        &self.anchors
    }

    /// Index of the anchor selected at `p`.
    pub fn anchor_index_at(&self, p: &PayoffVec) -> Result<usize> {
        if p.dim() != self.dim {
            return Err(Error::Dimension {
                what: "ordering query",
                expected: self.dim,
                got: p.dim(),
            });
        }
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (i, (a, _)) in self.anchors.iter().enumerate() {
            let d = a.dist(p);
            if d < best_d - DEFAULT_TOL {
                best_d = d;
                best = i;
            }
        }
        Ok(best)
    }

    /// The cone `K[p]`.
    pub fn cone_at(&self, p: &PayoffVec) -> Result<&Cone> {
        Ok(&self.anchors[self.anchor_index_at(p)?].1)
    }

    /// `p2 ≤_{K[p1]} p1`, i.e. `p1 - p2 ∈ K[p1]`.
    pub fn leq_under(&self, p1: &PayoffVec, p2: &PayoffVec) -> Result<bool> {
        if p1.dim() != p2.dim() {
            return Err(Error::Dimension {
                what: "order comparison",
                expected: p1.dim(),
                got: p2.dim(),
            });
        }
        self.cone_at(p1)?.contains(&p1.sub(p2))
    }

    /// The common ordering cone: the intersection of all anchor cones, in
    /// half-space form (concatenated normals).
    ///
    /// Generators of the intersection are re-derived by extreme-ray
    /// enumeration for `m ≤ 3`; for higher dimensions a generator list must
    /// be supplied and is cross-checked against the half-space system.
    /// An intersection equal to `{0}` is reported as degenerate: no
    /// direction can be drawn from it.
    pub fn common_cone(&self, supplied_generators: Option<&[Vec<f64>]>) -> Result<Cone> {
        let mut normals: Vec<Vec<f64>> = Vec::new();
        let mut tol: f64 = 0.0;
        for (_, cone) in &self.anchors {
            normals.extend(cone.normals().iter().cloned());
            tol = tol.max(cone.tol());
        }
        let shell = Cone {
            normals: normals.clone(),
            generators: Vec::new(),
            dim: self.dim,
            tol: tol.max(DEFAULT_TOL),
        };

        let generators = if self.dim <= 3 {
            let rays = enumerate_rays(&shell);
            if let Some(supplied) = supplied_generators {
                for (i, g) in supplied.iter().enumerate() {
                    if g.len() != self.dim {
                        return Err(Error::Dimension {
                            what: "supplied common-cone generator",
                            expected: self.dim,
                            got: g.len(),
                        });
                    }
                    if !shell.contains_slice(g) {
                        return Err(Error::input(format!(
                            "supplied common-cone generator {i} = {g:?} is outside the intersection"
                        )));
                    }
                }
            }
            rays
        } else {
            let supplied = supplied_generators.ok_or_else(|| {
                Error::input("common-cone generators must be supplied for dimension > 3")
            })?;
            for (i, g) in supplied.iter().enumerate() {
                if g.len() != self.dim {
                    return Err(Error::Dimension {
                        what: "supplied common-cone generator",
                        expected: self.dim,
                        got: g.len(),
                    });
                }
                if !shell.contains_slice(g) {
                    return Err(Error::input(format!(
                        "supplied common-cone generator {i} = {g:?} is outside the intersection"
                    )));
                }
            }
            supplied.to_vec()
        };

        if !generators
            .iter()
            .any(|g| g.iter().any(|c| c.abs() > DEFAULT_TOL))
        {
            return Err(Error::Degenerate(
                "common ordering cone is {0}; no valid direction exists".into(),
            ));
        }

        Ok(Cone {
            normals,
            generators,
            dim: self.dim,
            tol: shell.tol,
        })
    }

    /// Exhaustive transitivity scan over a payoff sample: for every ordered
    /// triple `(f0, f1, f2)`, `f1 ≤_{K[f0]} f0` and `f2 ≤_{K[f1]} f1` must
    /// imply `f2 ≤_{K[f0]} f0`. Violations are data, not errors.
    pub fn check_transitivity(&self, sample: &[PayoffVec]) -> Result<TransitivityReport> {
        if sample.is_empty() {
            return Err(Error::input("transitivity check needs a nonempty sample"));
        }
        let mut violations = Vec::new();
        for (i, f0) in sample.iter().enumerate() {
            for (j, f1) in sample.iter().enumerate() {
                if !self.leq_under(f0, f1)? {
                    continue;
                }
                for (k, f2) in sample.iter().enumerate() {
                    if self.leq_under(f1, f2)? && !self.leq_under(f0, f2)? {
                        violations.push((i, j, k));
                    }
                }
            }
        }
        Ok(TransitivityReport { violations })
    }
}

/// Outcome of [`VariableOrdering::check_transitivity`]: indices into the
/// sample of every violating ordered triple.
#[derive(Debug, Clone, Serialize)]
pub struct TransitivityReport {
    pub violations: Vec<(usize, usize, usize)>,
}

impl TransitivityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Extreme-ray enumeration (m <= 3)
// ---------------------------------------------------------------------------

fn push_unit_ray(out: &mut Vec<Vec<f64>>, dir: &[f64]) {
    let norm = dir.iter().map(|c| c * c).sum::<f64>().sqrt();
    if norm <= DEFAULT_TOL {
        return;
    }
    let unit: Vec<f64> = dir.iter().map(|c| c / norm).collect();
    let dup = out.iter().any(|r| {
        r.iter()
            .zip(&unit)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
            <= 1e-7
    });
    if !dup {
        out.push(unit);
    }
}

/// Extreme rays of a half-space cone in dimension 1-3. Each extreme ray of a
/// pointed polyhedral cone lies on `m - 1` independent active constraints,
/// so candidates come from normals (m = 2: the two in-plane perpendiculars)
/// or pairs of normals (m = 3: cross products), filtered by feasibility.
fn enumerate_rays(shell: &Cone) -> Vec<Vec<f64>> {
    let mut rays = Vec::new();
    match shell.dim {
        1 => {
            for dir in [[1.0], [-1.0]] {
                if shell.contains_slice(&dir) {
                    push_unit_ray(&mut rays, &dir);
                }
            }
        }
        2 => {
            for n in &shell.normals {
                for dir in [[-n[1], n[0]], [n[1], -n[0]]] {
                    if shell.contains_slice(&dir) {
                        push_unit_ray(&mut rays, &dir);
                    }
                }
            }
        }
        3 => {
            for (i, a) in shell.normals.iter().enumerate() {
                for b in shell.normals.iter().skip(i + 1) {
                    let cross = [
                        a[1] * b[2] - a[2] * b[1],
                        a[2] * b[0] - a[0] * b[2],
                        a[0] * b[1] - a[1] * b[0],
                    ];
                    let neg = [-cross[0], -cross[1], -cross[2]];
                    for dir in [cross, neg] {
                        if shell.contains_slice(&dir) {
                            push_unit_ray(&mut rays, &dir);
                        }
                    }
                }
            }
        }
        _ => unreachable!("ray enumeration is only defined for m <= 3"),
    }
    rays
}

// ---------------------------------------------------------------------------
// Nonnegative least squares and Minkowski-sum membership
// ---------------------------------------------------------------------------

/// Lawson-Hanson active-set nonnegative least squares: minimize
/// `‖G·alpha - p‖₂` subject to `alpha ≥ 0`. Returns the residual norm.
fn nnls_residual(columns: &[&[f64]], p: &[f64]) -> f64 {
    let m = p.len();
    let k = columns.len();
    if k == 0 {
        return p.iter().map(|c| c * c).sum::<f64>().sqrt();
    }
    let g = DMatrix::from_fn(m, k, |i, j| columns[j][i]);
    let target = nalgebra::DVector::from_column_slice(p);

    let mut passive = vec![false; k];
    let mut alpha = nalgebra::DVector::zeros(k);
    let mut residual = &target - &g * &alpha;

    let scale = 1.0 + target.norm();
    let grad_tol = 1e-12 * scale;

    // Solve the unconstrained subproblem on the passive columns via SVD so
    // rank-deficient generator sets (duplicate rays) stay stable.
    let solve_passive = |passive: &[bool]| -> Option<nalgebra::DVector<f64>> {
        let cols: Vec<usize> = (0..k).filter(|j| passive[*j]).collect();
        if cols.is_empty() {
            return None;
        }
        let sub = DMatrix::from_fn(m, cols.len(), |i, j| columns[cols[j]][i]);
        let svd = sub.svd(true, true);
        let z = svd.solve(&target, 1e-12).ok()?;
        let mut full = nalgebra::DVector::zeros(k);
        for (idx, &j) in cols.iter().enumerate() {
            full[j] = z[idx];
        }
        Some(full)
    };

    for _ in 0..3 * k + 10 {
        let grad = g.transpose() * &residual;
        let mut best_j = None;
        let mut best_w = grad_tol;
        for j in 0..k {
            if !passive[j] && grad[j] > best_w {
                best_w = grad[j];
                best_j = Some(j);
            }
        }
        let Some(j_star) = best_j else { break };
        passive[j_star] = true;

        while let Some(z) = solve_passive(&passive) {
            let neg: Vec<usize> = (0..k)
                .filter(|&j| passive[j] && z[j] <= 1e-12)
                .collect();
            if neg.is_empty() {
                alpha = z;
                break;
            }
            let mut theta = f64::INFINITY;
            for &j in &neg {
                let denom = alpha[j] - z[j];
                if denom > 0.0 {
                    theta = theta.min(alpha[j] / denom);
                }
            }
            if !theta.is_finite() {
                theta = 0.0;
            }
            for j in 0..k {
                if passive[j] {
                    alpha[j] += theta * (z[j] - alpha[j]);
                    if alpha[j] <= 1e-12 {
                        alpha[j] = 0.0;
                        passive[j] = false;
                    }
                } else {
                    alpha[j] = 0.0;
                }
            }
            if !passive.iter().any(|&b| b) {
                break;
            }
        }
        residual = &target - &g * &alpha;
    }

    residual.norm()
}

/// Is `p` a nonnegative combination of the union of the cones' generator
/// lists? Decided by nonnegative least squares with residual tolerance
/// [`NNLS_RESIDUAL_TOL`]. With no generators at all, only `p ≈ 0` qualifies.
pub fn minkowski_membership(p: &PayoffVec, cones: &[&Cone]) -> Result<bool> {
    let m = p.dim();
    let mut columns: Vec<&[f64]> = Vec::new();
    for cone in cones {
        if cone.dim() != m {
            return Err(Error::Dimension {
                what: "minkowski membership",
                expected: m,
                got: cone.dim(),
            });
        }
        for g in cone.generators() {
            if g.iter().any(|c| c.abs() > DEFAULT_TOL) {
                columns.push(g.as_slice());
            }
        }
    }
    Ok(nnls_residual(&columns, p.as_slice()) <= NNLS_RESIDUAL_TOL)
}

// ---------------------------------------------------------------------------
// Minimality
// ---------------------------------------------------------------------------

/// Indices of the Pareto-minimal points of `points` under the variable
/// ordering: `p*` is kept iff no `q` in the set with `q ≠ p*` (as a value)
/// satisfies `q ∈ p* - K[p*]`. Duplicates of a minimal value all survive.
pub fn pareto_min_indices(points: &[PayoffVec], ordering: &VariableOrdering) -> Result<Vec<usize>> {
    if points.is_empty() {
        return Err(Error::input("pareto scan needs a nonempty point set"));
    }
    let mut keep = Vec::new();
    'outer: for (i, p) in points.iter().enumerate() {
        let cone = ordering.cone_at(p)?;
        for q in points {
            if q.approx_eq(p, DEFAULT_TOL) {
                continue;
            }
            if cone.contains(&p.sub(q))? {
                continue 'outer;
            }
        }
        keep.push(i);
    }
    Ok(keep)
}

/// Value-level form of [`pareto_min_indices`].
pub fn pareto_min(points: &[PayoffVec], ordering: &VariableOrdering) -> Result<Vec<PayoffVec>> {
    Ok(pareto_min_indices(points, ordering)?
        .into_iter()
        .map(|i| points[i].clone())
        .collect())
}

/// Approximate minimal points: `p*` survives iff no `q` in the set satisfies
/// `q ∈ p* - K[p*] - eps·xi`. The direction must be unit Euclidean norm.
pub fn approx_min(
    points: &[PayoffVec],
    ordering: &VariableOrdering,
    eps: f64,
    xi: &PayoffVec,
) -> Result<Vec<PayoffVec>> {
    if points.is_empty() {
        return Err(Error::input("approximate-minimality scan needs points"));
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::input("eps must be positive"));
    }
    if (xi.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::input(format!(
            "direction must have unit Euclidean norm, got {}",
            xi.norm()
        )));
    }
    let mut keep = Vec::new();
    'outer: for p in points {
        let cone = ordering.cone_at(p)?;
        let apex = p.sub(&xi.scale(eps));
        for q in points {
            if cone.contains(&apex.sub(q))? {
                continue 'outer;
            }
        }
        keep.push(p.clone());
    }
    Ok(keep)
}

// ---------------------------------------------------------------------------
