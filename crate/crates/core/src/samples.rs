//! Small ready-made instances used in documentation and tests.

use crate::cones::{Cone, PayoffVec, VariableOrdering};
use crate::goal::{GoalSystem, Sense};
use crate::quasimetric::QuasimetricSpace;
use crate::worthwhile::{DeltaParams, MonotoneFn, RatioSchedule, ScalarModel};

/// Three points on a line with costs `(3, 1, 0)` and distance `|i - j|`:
/// the smallest instance where a descent walk has to travel.
pub fn three_point_line(pleasure: MonotoneFn, pain: MonotoneFn) -> ScalarModel {
    let matrix = (0..3)
        .map(|i: i64| (0..3).map(|j: i64| (i - j).abs() as f64).collect())
        .collect();
    let space = QuasimetricSpace::from_matrix_unchecked(matrix).unwrap();
    ScalarModel::new(
        space,
        vec![3.0, 1.0, 0.0],
        Sense::Costs,
        pleasure,
        pain,
        RatioSchedule::Constant(1.0),
    )
    .unwrap()
}

/// Two means `a, b` with asymmetric change costs (`q(a,b) = 1`,
/// `q(b,a) = 2`), two ways, and two-goal cost vectors:
///
/// ```text
/// Ω(a) = {w1}       f(a,w1) = (2,2)
/// Ω(b) = {w1,w2}    f(b,w1) = (1,1)   f(b,w2) = (1,0)
/// ```
///
/// ordered by the constant nonnegative orthant.
pub fn two_means_allocation() -> GoalSystem {
    let space =
        QuasimetricSpace::from_matrix_unchecked(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
    let pv = |v: &[f64]| PayoffVec::new(v.to_vec()).unwrap();
    GoalSystem::new(
        vec!["a".into(), "b".into()],
        space,
        vec!["w1".into(), "w2".into()],
        vec![vec![0], vec![0, 1]],
        vec![
            vec![Some(pv(&[2.0, 2.0])), None],
            vec![Some(pv(&[1.0, 1.0])), Some(pv(&[1.0, 0.0]))],
        ],
        VariableOrdering::constant(Cone::orthant(2)),
        Cone::orthant(2),
        Sense::Costs,
    )
    .unwrap()
}

/// Unit diagonal direction in the plane with the given satisficing ratio.
pub fn unit_diag_params(ratio: f64) -> DeltaParams {
    let s = 1.0 / 2f64.sqrt();
    DeltaParams::new(PayoffVec::new(vec![s, s]).unwrap(), ratio).unwrap()
}
