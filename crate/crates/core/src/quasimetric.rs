//! Finite quasimetric spaces: asymmetric change costs with axiom validation.
//!
//! A quasimetric satisfies nonnegativity, `q(i,j) = 0 ⇔ i = j`, and the
//! triangle inequality, but not necessarily symmetry: the cost to change
//! from `i` to `j` may differ from the reverse. Finiteness makes
//! left-sequential completeness, closedness, and lower semicontinuity hold
//! vacuously; they are documented rather than computed.

use serde::Serialize;

use crate::error::{Error, Result};

/// Slack used for the zero tests of the identity axiom and for the triangle
/// inequality, absorbing serialization rounding of user-supplied decimals.
pub const AXIOM_TOL: f64 = 1e-12;

/// Which quasimetric axiom a violation falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    /// `q(i,j) >= 0`
    Nonnegative,
    /// `q(i,j) = 0` iff `i = j`
    Identity,
    /// `q(i,k) <= q(i,j) + q(j,k)`
    Triangle,
}

/// One axiom violation with witness indices (the third index is only used
/// by triangle violations).
#[derive(Debug, Clone, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub i: usize,
    pub j: usize,
    pub k: Option<usize>,
    pub detail: String,
}

/// Report listing every violated axiom with witnesses.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A finite point set with a change-cost matrix `q[i][j]`.
///
/// The checked constructor is [`validate_quasimetric`]; the unchecked one
/// exists so that deliberately broken instances can still be built and then
/// rejected by the hypothesis validator with the failure named.
#[derive(Debug, Clone, Serialize)]
pub struct QuasimetricSpace {
    matrix: Vec<Vec<f64>>,
    /// Allow `q(i,j) = 0` for `i ≠ j`. Used for spaces of composite
    /// positions (pairs) where one component may cost nothing to change.
    allow_zero_offdiag: bool,
}

impl QuasimetricSpace {
    /// Shape-checks only (square, finite entries); axioms are not enforced.
    pub fn from_matrix_unchecked(matrix: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(&matrix)?;
        Ok(QuasimetricSpace {
            matrix,
            allow_zero_offdiag: false,
        })
    }

    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.matrix[i][j]
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn allows_zero_offdiag(&self) -> bool {
        self.allow_zero_offdiag
    }

    /// Exhaustive axiom scan. Respects the relaxed identity axiom when the
    /// space was built with [`validate_quasipseudometric`].
    pub fn axiom_violations(&self) -> AxiomReport {
        let mut violations = Vec::new();
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                let q = self.matrix[i][j];
                if q < 0.0 {
                    violations.push(AxiomViolation {
                        axiom: Axiom::Nonnegative,
                        i,
                        j,
                        k: None,
                        detail: format!("q[{i}][{j}] = {q} < 0"),
                    });
                }
                if i == j && q.abs() > AXIOM_TOL {
                    violations.push(AxiomViolation {
                        axiom: Axiom::Identity,
                        i,
                        j,
                        k: None,
                        detail: format!("q[{i}][{i}] = {q} != 0"),
                    });
                }
                if i != j && !self.allow_zero_offdiag && q.abs() <= AXIOM_TOL {
                    violations.push(AxiomViolation {
                        axiom: Axiom::Identity,
                        i,
                        j,
                        k: None,
                        detail: format!("q[{i}][{j}] = 0 but {i} != {j}"),
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.matrix[i][k] > self.matrix[i][j] + self.matrix[j][k] + AXIOM_TOL {
                        violations.push(AxiomViolation {
                            axiom: Axiom::Triangle,
                            i,
                            j,
                            k: Some(k),
                            detail: format!(
                                "q[{i}][{k}] = {} > q[{i}][{j}] + q[{j}][{k}] = {}",
                                self.matrix[i][k],
                                self.matrix[i][j] + self.matrix[j][k]
                            ),
                        });
                    }
                }
            }
        }
        AxiomReport { violations }
    }

    /// True iff the costs are symmetric, i.e. the space is actually a
    /// metric space (the classical setting).
    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        for i in 0..n {
            for j in 0..n {
                if (self.matrix[i][j] - self.matrix[j][i]).abs() > AXIOM_TOL {
                    return false;
                }
            }
        }
        true
    }

    /// `max` of `q(center, x)` over a nonempty subset (the finite sup).
    pub fn set_radius(&self, center: usize, subset: &[usize]) -> Result<f64> {
        if center >= self.n() {
            return Err(Error::input(format!("center index {center} out of range")));
        }
        if subset.is_empty() {
            return Err(Error::input("set radius of an empty subset is undefined"));
        }
        let mut radius: f64 = 0.0;
        for &x in subset {
            if x >= self.n() {
                return Err(Error::input(format!("subset index {x} out of range")));
            }
            radius = radius.max(self.matrix[center][x]);
        }
        Ok(radius)
    }
}

fn check_shape(matrix: &[Vec<f64>]) -> Result<()> {
    let n = matrix.len();
    if n == 0 {
        return Err(Error::input("quasimetric matrix must be nonempty"));
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Dimension {
                what: "quasimetric row",
                expected: n,
                got: row.len(),
            });
        }
        for (j, q) in row.iter().enumerate() {
            if !q.is_finite() {
                return Err(Error::input(format!("q[{i}][{j}] is not finite")));
            }
        }
    }
    Ok(())
}

/// Validate all three axioms and return the space, or the full violation
/// report. Non-square or non-finite input is rejected outright.
pub fn validate_quasimetric(
    matrix: Vec<Vec<f64>>,
) -> Result<std::result::Result<QuasimetricSpace, AxiomReport>> {
    let space = QuasimetricSpace::from_matrix_unchecked(matrix)?;
    let report = space.axiom_violations();
    if report.passed() {
        Ok(Ok(space))
    } else {
        Ok(Err(report))
    }
}

/// Like [`validate_quasimetric`] but with the identity axiom relaxed to
/// `q(i,i) = 0` only, admitting zero cost between distinct points. Composite
/// position spaces built from a quasimetric plus a zero way-cost need this.
pub fn validate_quasipseudometric(
    matrix: Vec<Vec<f64>>,
) -> Result<std::result::Result<QuasimetricSpace, AxiomReport>> {
    let mut space = QuasimetricSpace::from_matrix_unchecked(matrix)?;
    space.allow_zero_offdiag = true;
    let report = space.axiom_violations();
    if report.passed() {
        Ok(Ok(space))
    } else {
        Ok(Err(report))
    }
}
