//! Command implementations. Exit status 0 means every check passed,
//! 1 means a failed check or a rejected solve, 2 means schema errors.

use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;

use evp_core::certify::{brute_force_traps, certify_solution, certify_values, validate_hypotheses};
use evp_core::cones::{PayoffVec, DEFAULT_TOL};
use evp_core::report::{
    build_report, render_certificate, render_solve_summary, trajectory_csv, SolveReport,
};
use evp_core::scenario::{load_scenario, random_scenario, LoadedInstance, Scenario};
use evp_core::solver::{solve as run_solve, SolveParams};
use evp_core::worthwhile::DeltaParams;
use evp_core::Error;

const EXIT_OK: u8 = 0;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_SCHEMA: u8 = 2;

fn load(path: &Path) -> Result<Option<(Scenario, LoadedInstance)>> {
    let scenario = match load_scenario(path) {
        Ok(s) => s,
        Err(errors) => {
            eprintln!("schema errors in {}:", path.display());
            eprint!("{errors}");
            return Ok(None);
        }
    };
    let loaded = match scenario.instantiate() {
        Ok(l) => l,
        Err(Error::Input(msg)) => {
            eprintln!("schema errors in {}:", path.display());
            eprintln!("instance: {msg}");
            return Ok(None);
        }
        Err(e) => return Err(e.into()),
    };
    for warning in &loaded.warnings {
        eprintln!("warning: {warning}");
    }
    Ok(Some((scenario, loaded)))
}

fn write_artifacts(
    out: Option<&Path>,
    loaded: &LoadedInstance,
    report: &SolveReport,
    outcome: &evp_core::SolveOutcome,
) -> Result<()> {
    let Some(dir) = out else { return Ok(()) };
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let report_path = dir.join("report.json");
    std::fs::write(&report_path, serde_json::to_string_pretty(report)?)
        .with_context(|| format!("writing {}", report_path.display()))?;
    let csv_path = dir.join("trajectory.csv");
    std::fs::write(&csv_path, trajectory_csv(&loaded.gs, outcome)?)
        .with_context(|| format!("writing {}", csv_path.display()))?;
    println!("wrote {} and {}", report_path.display(), csv_path.display());
    Ok(())
}

pub fn validate(file: &Path) -> Result<u8> {
    let Some((_, loaded)) = load(file)? else {
        return Ok(EXIT_SCHEMA);
    };
    let cert = validate_hypotheses(&loaded.gs);
    print!("{}", render_certificate(&cert));
    Ok(if cert.overall { EXIT_OK } else { EXIT_CHECK_FAILED })
}

pub fn solve(file: &Path, out: Option<&Path>) -> Result<u8> {
    let Some((_, loaded)) = load(file)? else {
        return Ok(EXIT_SCHEMA);
    };
    let outcome = match run_solve(&loaded.gs, &loaded.params) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("solve rejected: {e}");
            return Ok(EXIT_CHECK_FAILED);
        }
    };
    let report = build_report(&loaded.gs, &loaded.params, &outcome, None);
    print!("{}", render_solve_summary(&report));
    write_artifacts(out, &loaded, &report, &outcome)?;
    Ok(EXIT_OK)
}

pub fn certify(file: &Path, out: Option<&Path>, claimed: Option<&Path>) -> Result<u8> {
    let Some((_, loaded)) = load(file)? else {
        return Ok(EXIT_SCHEMA);
    };

    // With a supplied report, certify its claimed endpoint against the
    // instance instead of re-solving.
    if let Some(report_path) = claimed {
        let text = std::fs::read_to_string(report_path)
            .with_context(|| format!("reading {}", report_path.display()))?;
        let claim: SolveReport = serde_json::from_str(&text)
            .with_context(|| format!("parsing {}", report_path.display()))?;
        let f_star = PayoffVec::new(claim.result.f.clone())?;
        let table = loaded
            .gs
            .payoff_at(claim.result.x, claim.result.omega)
            .cloned();
        if !table.is_some_and(|t| t.approx_eq(&f_star, DEFAULT_TOL)) {
            eprintln!(
                "claimed payoff {:?} at ({}, {}) does not match the instance table",
                claim.result.f, claim.result.x, claim.result.omega
            );
            return Ok(EXIT_CHECK_FAILED);
        }
        let cert = certify_values(&loaded.gs, &loaded.params, claim.result.x, &f_star)?;
        print!("{}", render_certificate(&cert));
        return Ok(if cert.overall { EXIT_OK } else { EXIT_CHECK_FAILED });
    }

    let outcome = match run_solve(&loaded.gs, &loaded.params) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("solve rejected: {e}");
            if let Error::Hypothesis { .. } = e {
                let cert = validate_hypotheses(&loaded.gs);
                print!("{}", render_certificate(&cert));
            }
            return Ok(EXIT_CHECK_FAILED);
        }
    };
    let cert = certify_solution(&loaded.gs, &loaded.params, &outcome)?;
    let report = build_report(&loaded.gs, &loaded.params, &outcome, Some(cert.clone()));
    print!("{}", render_solve_summary(&report));
    print!("{}", render_certificate(&cert));
    write_artifacts(out, &loaded, &report, &outcome)?;
    Ok(if cert.overall { EXIT_OK } else { EXIT_CHECK_FAILED })
}

pub fn traps(file: &Path, ratio: Option<f64>) -> Result<u8> {
    let Some((_, loaded)) = load(file)? else {
        return Ok(EXIT_SCHEMA);
    };
    let ratio = ratio.unwrap_or_else(|| loaded.params.ratio());
    let delta = match DeltaParams::new(loaded.params.xi.clone(), ratio) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("invalid trap query: {e}");
            return Ok(EXIT_CHECK_FAILED);
        }
    };
    let traps = brute_force_traps(&loaded.gs, &delta)?;
    let labels: Vec<&str> = traps.iter().map(|&x| loaded.gs.means_label(x)).collect();
    println!("stationary traps at ratio {ratio}: {{{}}}", labels.join(", "));
    Ok(EXIT_OK)
}

pub fn sweep(file: &Path, ratios: &[f64], xis_path: &Path, out: Option<&Path>) -> Result<u8> {
    let Some((_, loaded)) = load(file)? else {
        return Ok(EXIT_SCHEMA);
    };
    let xis_text = std::fs::read_to_string(xis_path)
        .with_context(|| format!("reading {}", xis_path.display()))?;
    let xis: Vec<Vec<f64>> = serde_json::from_str(&xis_text)
        .with_context(|| format!("parsing {}", xis_path.display()))?;
    if ratios.is_empty() || xis.is_empty() {
        eprintln!("sweep needs at least one ratio and one direction");
        return Ok(EXIT_SCHEMA);
    }

    type Cell = std::result::Result<(String, String, f64, usize), String>;
    let cells: Vec<(usize, usize)> = (0..ratios.len())
        .flat_map(|r| (0..xis.len()).map(move |x| (r, x)))
        .collect();
    // independent pure solves; a single collector writes the output below
    let results: Vec<(f64, usize, Cell)> = cells
        .par_iter()
        .map(|&(ri, xi_idx)| {
            let ratio = ratios[ri];
            let cell = (|| {
                let xi = PayoffVec::new(xis[xi_idx].clone()).map_err(|e| e.to_string())?;
                let params = SolveParams::new(ratio, 1.0, xi, loaded.params.start);
                let outcome = run_solve(&loaded.gs, &params).map_err(|e| e.to_string())?;
                Ok((
                    loaded.gs.means_label(outcome.x_star).to_string(),
                    loaded.gs.way_label(outcome.omega_star).to_string(),
                    outcome.trajectory.path_length,
                    outcome.trajectory.steps.len(),
                ))
            })();
            (ratio, xi_idx, cell)
        })
        .collect();

    let mut rows = vec!["ratio,xi_index,x_star,omega_star,path_length,steps".to_string()];
    let mut failed = 0usize;
    for (ratio, xi_idx, cell) in &results {
        match cell {
            Ok((x, omega, length, steps)) => {
                println!(
                    "ratio {ratio}, direction {xi_idx}: end ({x}, {omega}), path length {length}, {steps} steps"
                );
                rows.push(format!("{ratio},{xi_idx},{x},{omega},{length},{steps}"));
            }
            Err(e) => {
                println!("ratio {ratio}, direction {xi_idx}: rejected ({e})");
                failed += 1;
            }
        }
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        let path = dir.join("sweep.csv");
        std::fs::write(&path, rows.join("\n") + "\n")?;
        println!("wrote {}", path.display());
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}

pub fn gen(seed: u64, out: &Path) -> Result<u8> {
    let file = random_scenario(seed);
    let scenario = Scenario::from_file(file.clone()).expect("generated scenario is schema-valid");
    let loaded = scenario.instantiate()?;
    std::fs::write(out, serde_json::to_string_pretty(&file)?)
        .with_context(|| format!("writing {}", out.display()))?;
    println!(
        "wrote {} ({} means, {} ways, {} goals, digest {})",
        out.display(),
        loaded.gs.n_means(),
        loaded.gs.n_ways(),
        loaded.gs.m(),
        &loaded.gs.digest()[..16]
    );
    Ok(EXIT_OK)
}
