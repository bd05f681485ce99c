//! Benchmark output: one CSV row per scene × strategy × trial and a
//! plain-text summary table.

use std::io::Write;

use graspness_core::metrics::BenchReport;

use crate::error::{CliError, Result};

pub fn write_bench_csv<W: Write>(w: W, report: &BenchReport) -> Result<()> {
    let err = |e: csv::Error| CliError::input(e.to_string());
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> =
        ["scene", "strategy", "trial", "seeds", "mean_graspness", "feasible_fraction", "coverage"].map(String::from).to_vec();
    for t in &report.mu_thresholds {
        header.push(format!("precision_at_{}_mu_{}", report.precision_k, t));
    }
    out.write_record(&header).map_err(err)?;
    for r in &report.rows {
        let mut rec = vec![
            r.scene.to_string(),
            r.strategy.to_string(),
            r.trial.to_string(),
            r.seeds.to_string(),
            r.mean_graspness.to_string(),
            r.feasible_fraction.to_string(),
            r.coverage.to_string(),
        ];
        rec.extend(r.precision.iter().map(|p| p.to_string()));
        out.write_record(&rec).map_err(err)?;
    }
    out.flush().map_err(|e| CliError::input(e.to_string()))
}

/// Mean ± sample standard deviation per strategy. Precision is an oracle
/// stand-in on synthetic scenes, not a benchmark AP.
pub fn summary_table(report: &BenchReport) -> String {
    let mut s = format!("{:<18} {:>5} {:>17} {:>17} {:>17}", "strategy", "runs", "seed graspness", "feasible seeds", "object coverage");
    for t in &report.mu_thresholds {
        s += &format!(" {:>17}", format!("P@{} mu<={}", report.precision_k, t));
    }
    s.push('\n');
    for sum in report.summary() {
        let cell = |m: graspness_core::metrics::MeanStd| format!("{:.4} ± {:.4}", m.mean, m.std);
        s += &format!(
            "{:<18} {:>5} {:>17} {:>17} {:>17}",
            sum.strategy.as_str(),
            sum.runs,
            cell(sum.mean_graspness),
            cell(sum.feasible_fraction),
            cell(sum.coverage)
        );
        for p in &sum.precision {
            s += &format!(" {:>17}", cell(*p));
        }
        s.push('\n');
    }
    s
}
