//! Report assembly: a machine-readable result document, a trajectory CSV,
//! and plain-text summaries for humans.

use serde::{Deserialize, Serialize};

use crate::certify::{Certificate, CheckStatus};
use crate::error::{Error, Result};
use crate::goal::{GoalSystem, Sense};
use crate::solver::{trajectory_stats, SolveOutcome, SolveParams, TrajectoryStats};

pub const REPORT_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndpointRecord {
    pub x: usize,
    pub x_label: String,
    pub omega: usize,
    pub omega_label: String,
    pub f: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepRecord {
    pub n: usize,
    pub x: usize,
    pub x_label: String,
    pub omega: usize,
    pub omega_label: String,
    pub f: Vec<f64>,
    pub cone_anchor: usize,
    pub w_size: usize,
    pub radius: f64,
    pub q_step: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefinementRecord {
    pub r_sets: Vec<Vec<usize>>,
    pub omega_bar: usize,
    pub level_set: Vec<usize>,
    pub omega_star: usize,
}

/// Structured result of a solve (and optionally its certificate), in the
/// same schema family as scenario files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub version: String,
    pub digest: String,
    pub sense: Sense,
    pub eps: f64,
    pub lambda: f64,
    pub ratio: f64,
    pub xi: Vec<f64>,
    pub start: EndpointRecord,
    pub result: EndpointRecord,
    pub termination: String,
    pub stats: TrajectoryStats,
    pub steps: Vec<StepRecord>,
    pub refinement: Option<RefinementRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

pub fn build_report(
    gs: &GoalSystem,
    params: &SolveParams,
    outcome: &SolveOutcome,
    certificate: Option<Certificate>,
) -> SolveReport {
    let endpoint = |x: usize, omega: usize, f: Vec<f64>| EndpointRecord {
        x,
        x_label: gs.means_label(x).to_string(),
        omega,
        omega_label: gs.way_label(omega).to_string(),
        f,
    };
    let steps = outcome
        .trajectory
        .steps
        .iter()
        .map(|s| StepRecord {
            n: s.n,
            x: s.x,
            x_label: gs.means_label(s.x).to_string(),
            omega: s.omega,
            omega_label: gs.way_label(s.omega).to_string(),
            f: s.f.as_slice().to_vec(),
            cone_anchor: s.cone_anchor,
            w_size: s.w_size,
            radius: s.radius,
            q_step: s.q_step,
        })
        .collect();
    SolveReport {
        version: REPORT_VERSION.into(),
        digest: gs.digest(),
        sense: gs.sense(),
        eps: params.eps,
        lambda: params.lambda,
        ratio: params.ratio(),
        xi: params.xi.as_slice().to_vec(),
        start: endpoint(
            params.start.x,
            params.start.omega,
            gs.cost(params.start).as_slice().to_vec(),
        ),
        result: endpoint(
            outcome.x_star,
            outcome.omega_star,
            outcome.f_star.as_slice().to_vec(),
        ),
        termination: format!("{:?}", outcome.trajectory.termination).to_lowercase(),
        stats: trajectory_stats(&outcome.trajectory),
        steps,
        refinement: outcome.trajectory.refinement.as_ref().map(|r| {
            RefinementRecord {
                r_sets: r.r_sets.clone(),
                omega_bar: r.omega_bar,
                level_set: r.level_set.clone(),
                omega_star: r.omega_star,
            }
        }),
        certificate,
    }
}

/// Trajectory CSV with columns `n,x,omega,f_1..f_m,q_step,W_size,radius`;
/// one row per executed step.
pub fn trajectory_csv(gs: &GoalSystem, outcome: &SolveOutcome) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = vec!["n".into(), "x".into(), "omega".into()];
    for i in 1..=gs.m() {
        header.push(format!("f_{i}"));
    }
    header.extend(["q_step".into(), "W_size".into(), "radius".into()]);
    writer
        .write_record(&header)
        .map_err(|e| Error::Internal(e.to_string()))?;
    for s in &outcome.trajectory.steps {
        let mut row: Vec<String> = vec![
            s.n.to_string(),
            gs.means_label(s.x).to_string(),
            gs.way_label(s.omega).to_string(),
        ];
        for i in 0..gs.m() {
            row.push(format!("{}", s.f[i]));
        }
        row.push(format!("{}", s.q_step));
        row.push(s.w_size.to_string());
        row.push(format!("{}", s.radius));
        writer
            .write_record(&row)
            .map_err(|e| Error::Internal(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

pub fn render_certificate(cert: &Certificate) -> String {
    let mut out = String::new();
    out.push_str(&format!("instance {}\n", &cert.digest[..16.min(cert.digest.len())]));
    for check in &cert.checks {
        let tag = match check.status {
            CheckStatus::Pass => "PASS    ",
            CheckStatus::PassVacuous => "PASS (v)",
            CheckStatus::Fail => "FAIL    ",
            CheckStatus::NotApplicable => "N/A     ",
        };
        out.push_str(&format!("  [{tag}] {}", check.name));
        if let Some(note) = &check.note {
            out.push_str(&format!(" — {note}"));
        }
        out.push('\n');
        for w in &check.witnesses {
            out.push_str(&format!("      witness: {w}\n"));
        }
    }
    out.push_str(&format!(
        "overall: {}\n",
        if cert.overall { "PASS" } else { "FAIL" }
    ));
    out
}

pub fn render_solve_summary(report: &SolveReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "end: ({}, {}) with payoff {:?}\n",
        report.result.x_label, report.result.omega_label, report.result.f
    ));
    out.push_str(&format!(
        "steps: {}, path length: {}, termination: {}\n",
        report.stats.step_count, report.stats.path_length, report.termination
    ));
    for s in &report.steps {
        out.push_str(&format!(
            "  {}: ({}, {}) f = {:?}, |W| = {}, radius = {}, step = {}\n",
            s.n, s.x_label, s.omega_label, s.f, s.w_size, s.radius, s.q_step
        ));
    }
    out
}
