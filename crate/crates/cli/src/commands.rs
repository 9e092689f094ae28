//! Subcommand bodies. Each writes its CSV to `out` only once every job has
//! finished; diagnostics go to `err`.

use std::io::Write;
use std::path::Path;
use std::thread;

use laacoex_core::experiments::{
    check_analytic, check_orderings, check_simulation, comparison_row, fig3_sweep,
    interpretation_report, ComparisonRow, RunOptions, Scenario, ToleranceCheck, Variant,
    REFERENCE_LOADS,
};
use laacoex_core::solver::{solve, Method};
use laacoex_core::{run_simulation, ModelParams};

use crate::config::RunConfig;
use crate::format::{g6, record};
use crate::CliError;

pub const SOLVE_HEADER: &str =
    "scenario,lambda_laa,lambda_wifi,p_block_laa,p_block_wifi,residual,iterations\n";
pub const SIMULATE_HEADER: &str = "scenario,lambda_laa,lambda_wifi,sessions,replications,seed,\
p_drop_laa,ci_laa,p_drop_wifi,ci_wifi,laa_arrivals,laa_drops,wifi_arrivals,wifi_drops\n";
pub const VALIDATE_HEADER: &str = "scenario,lambda_laa,analytic_laa,sim_laa,ci_laa,error_pct_laa,\
analytic_wifi,sim_wifi,ci_wifi,error_pct_wifi,outside_ci_laa,outside_ci_wifi\n";
pub const SWEEP_HEADER: &str = "variant,q,p_block_laa,p_block_wifi\n";

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Io {
            path: "<output>".to_string(),
            source,
        })
}

pub fn solve_cmd(
    cfg: &RunConfig,
    method: Method,
    dump_pi: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let (matrix, result) = solve(&cfg.params, method)?;
    if let Some(path) = dump_pi {
        let mut text = String::from("w,x,y,z,pi\n");
        for (s, p) in matrix.states().iter().zip(&result.pi) {
            text.push_str(&record([
                s.phase.index().to_string(),
                s.laa.to_string(),
                s.wifi.to_string(),
                s.queued.to_string(),
                g6(*p),
            ]));
        }
        std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    let p = &cfg.params;
    let row = record([
        cfg.scenario.clone(),
        g6(p.lambda_laa),
        g6(p.lambda_wifi),
        g6(result.p_block_laa),
        g6(result.p_block_wifi),
        g6(result.residual),
        result.iterations.to_string(),
    ]);
    emit(out, &(SOLVE_HEADER.to_string() + &row))
}

fn estimate(value: f64, undefined: bool) -> String {
    if undefined {
        "NA".to_string()
    } else {
        g6(value)
    }
}

pub fn simulate_cmd(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let sim = cfg.sim_config();
    let stats = run_simulation(&sim)?;
    let p = &cfg.params;
    let row = record([
        cfg.scenario.clone(),
        g6(p.lambda_laa),
        g6(p.lambda_wifi),
        sim.sessions.to_string(),
        sim.replications.to_string(),
        sim.seed.to_string(),
        estimate(stats.p_drop_laa, stats.laa_undefined),
        estimate(stats.ci_halfwidth_laa, stats.laa_undefined),
        estimate(stats.p_drop_wifi, stats.wifi_undefined),
        estimate(stats.ci_halfwidth_wifi, stats.wifi_undefined),
        stats.laa_arrivals.to_string(),
        stats.laa_drops.to_string(),
        stats.wifi_arrivals.to_string(),
        stats.wifi_drops.to_string(),
    ]);
    emit(out, &(SIMULATE_HEADER.to_string() + &row))
}

/// Rows of one validation grid, one thread per load.
fn grid_rows(scenario: Scenario, opts: &RunOptions) -> Result<Vec<ComparisonRow>, CliError> {
    let results: Vec<_> = thread::scope(|s| {
        let handles: Vec<_> = REFERENCE_LOADS
            .iter()
            .map(|&l| s.spawn(move || comparison_row(scenario.label(), &scenario.params(l), opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("validation worker panicked"))
            .collect()
    });
    results
        .into_iter()
        .map(|r| r.map_err(CliError::from))
        .collect()
}

fn check_line(c: &ToleranceCheck) -> String {
    format!(
        "{}: {} (worst {}, tolerance {})\n",
        c.name,
        if c.passed { "PASS" } else { "FAIL" },
        g6(c.worst),
        g6(c.tolerance)
    )
}

/// Writes the gate-interpretation ranking for the LBT grid.
pub fn interpretation_lines() -> String {
    let mut text = String::from("interpretation report (closest first):\n");
    for o in interpretation_report(&ModelParams::table1(REFERENCE_LOADS[0])) {
        let label = o.interpretation.label();
        match (&o.values, o.max_rel_error) {
            (Ok(_), Some(e)) => {
                text.push_str(&format!("  {label}: max relative error {}\n", g6(e)))
            }
            (Err(msg), _) => text.push_str(&format!("  {label}: {msg}\n")),
            (Ok(_), None) => text.push_str(&format!("  {label}: no comparison\n")),
        }
    }
    text
}

/// Runs the validation grids. Returns whether every tolerance held; a
/// missed LBT analytic band counts as held once the interpretation report
/// has been written.
pub fn validate_cmd(
    scenarios: &[Scenario],
    opts: &RunOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<bool, CliError> {
    let mut csv = String::from(VALIDATE_HEADER);
    let mut diag = String::new();
    let mut ok = true;
    for &scenario in scenarios {
        let rows = grid_rows(scenario, opts)?;
        for r in &rows {
            let pct = |e: Option<f64>| e.map_or_else(|| "NA".to_string(), g6);
            csv.push_str(&record([
                r.scenario.clone(),
                g6(r.lambda_laa),
                g6(r.analytic_laa),
                g6(r.sim_laa),
                g6(r.ci_laa),
                pct(r.error_pct_laa),
                g6(r.analytic_wifi),
                g6(r.sim_wifi),
                g6(r.ci_wifi),
                pct(r.error_pct_wifi),
                r.outside_ci_laa.to_string(),
                r.outside_ci_wifi.to_string(),
            ]));
        }
        let analytic = check_analytic(scenario, &rows);
        diag.push_str(&check_line(&analytic));
        if !analytic.passed {
            if scenario == Scenario::LbtBuffering {
                diag.push_str(&interpretation_lines());
            } else {
                ok = false;
            }
        }
        let sim = check_simulation(scenario, &rows);
        diag.push_str(&check_line(&sim));
        ok &= sim.passed;
    }
    emit(out, &csv)?;
    emit(err, &diag)?;
    Ok(ok)
}

pub fn sweep_cmd(
    q_from: u32,
    q_to: u32,
    variants: &[Variant],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), CliError> {
    let curves = fig3_sweep(q_from..=q_to, variants)?;
    let mut csv = String::from(SWEEP_HEADER);
    for c in &curves {
        for p in &c.points {
            csv.push_str(&record([
                c.variant.label().to_string(),
                p.queue_capacity.to_string(),
                g6(p.p_block_laa),
                g6(p.p_block_wifi),
            ]));
        }
    }
    let mut diag = String::new();
    if variants.len() == Variant::ALL.len() {
        for c in check_orderings(&curves) {
            diag.push_str(&format!(
                "{}: {}",
                c.name,
                if c.passed { "PASS" } else { "FAIL" }
            ));
            if !c.failing.is_empty() {
                diag.push_str(&format!(" at Q = {:?}", c.failing));
            }
            diag.push('\n');
        }
    }
    emit(out, &csv)?;
    emit(err, &diag)
}
