use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use bsppcc::gof::{critical_row, round_to};
use bsppcc::mc::{build_table_with, MIN_TABLE_ITERATIONS};
use bsppcc::table::{format_header, format_row};
use bsppcc::{
    accuracy_bound, linearize, paper_table, run_test, CriticalValueTable, GofReport, PValue,
    SimConfig,
};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::input::read_sample;
use crate::options::{Command, Format, RunOptions};
use crate::TABLE_ENV;

const MAX_TABLE_N: usize = 1_000_000;

pub fn run(opts: RunOptions) -> Result<(), CliError> {
    match opts.command {
        Command::Test {
            data,
            levels,
            table,
            format,
        } => cmd_test(&data, levels, table, format),
        Command::Plot { data, out, svg } => cmd_plot(&data, &out, svg),
        Command::GenTable {
            n_from,
            n_to,
            n_step,
            iterations,
            seed,
            alpha,
            workers,
            out,
        } => {
            let sizes = table_sizes(n_from, n_to, n_step)?;
            let template = SimConfig {
                iterations,
                seed,
                alpha_gen: alpha,
                workers,
                ..SimConfig::default()
            };
            cmd_gen_table(&sizes, &template, &out)
        }
        Command::ShowTable { n, table } => cmd_show_table(n, table),
    }
}

/// `--table`, then `$BSPPCC_TABLE`, then the built-in table.
pub fn resolve_table(explicit: Option<PathBuf>) -> Result<CriticalValueTable, CliError> {
    let path = explicit.or_else(|| std::env::var_os(TABLE_ENV).map(PathBuf::from));
    match path {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            Ok(CriticalValueTable::from_text(&text)?)
        }
        None => Ok(paper_table()?),
    }
}

fn cmd_test(
    data: &Path,
    levels: Option<Vec<f64>>,
    table: Option<PathBuf>,
    format: Format,
) -> Result<(), CliError> {
    let sample = read_sample(data)?;
    let table = resolve_table(table)?;
    let levels = levels.unwrap_or_else(|| table.levels().to_vec());
    let report = run_test(&sample, &levels, &table)?;
    let text = match format {
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(&report_json(&report)).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => report_text(&report),
    };
    io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

/// JSON form of a report. `p_value` is a number (4 decimals) or a bound string
/// such as `"<0.005"`; `p_value_bound` repeats a bound numerically.
pub fn report_json(report: &GofReport) -> Value {
    let (p_value, kind, bound) = match report.p_value {
        PValue::Estimate(p) => (json!(round_to(p, 4)), "estimate", Value::Null),
        PValue::Below(b) => (json!(report.p_value.to_string()), "below", json!(b)),
        PValue::Above(b) => (json!(report.p_value.to_string()), "above", json!(b)),
    };
    let decisions: Vec<Value> = report
        .decisions
        .iter()
        .map(|d| {
            json!({
                "level": d.level,
                "critical_value": d.critical_value,
                "reject": d.reject,
            })
        })
        .collect();
    let meta = &report.table_meta;
    json!({
        "n": report.n,
        "r": round_to(report.r, 6),
        "p_value": p_value,
        "p_value_kind": kind,
        "p_value_bound": bound,
        "decisions": decisions,
        "table_meta": {
            "source": meta.source,
            "iterations": meta.iterations,
            "seed": meta.seed,
            "alpha_gen": meta.alpha_gen,
            "generator": meta.generator,
            "provenance": meta.provenance(),
        },
    })
}

pub fn report_text(report: &GofReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("n        {}\n", report.n));
    s.push_str(&format!("r        {:.6}\n", report.r));
    s.push_str(&format!("p-value  {}\n", report.p_value));
    s.push_str(&format!("table    {}\n", report.table_meta.provenance()));
    s.push_str("\nlevel    r_crit    decision\n");
    for d in &report.decisions {
        let verdict = if d.reject { "reject" } else { "do not reject" };
        s.push_str(&format!(
            "{:<8} {:<9.6} {verdict}\n",
            d.level, d.critical_value
        ));
    }
    s
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn cmd_plot(data: &Path, out: &Path, svg: bool) -> Result<(), CliError> {
    let sample = read_sample(data)?;
    let points = linearize(&sample)?;
    write_file(&with_extension(out, "csv"), &plot_csv(&points))?;
    if svg {
        write_file(&with_extension(out, "svg"), &plot_svg(&points)?)?;
    }
    Ok(())
}

/// `i,p,u,v` with one row per order statistic.
pub fn plot_csv(points: &bsppcc::PlotPoints64) -> String {
    let mut s = String::from("i,p,u,v\n");
    for (i, e) in points.entries().iter().enumerate() {
        s.push_str(&format!("{},{:.6},{},{:.6}\n", i + 1, e.p, e.u, e.v));
    }
    s
}

/// Scatter of `(u, v)` with the least-squares line.
pub fn plot_svg(points: &bsppcc::PlotPoints64) -> Result<String, CliError> {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const M: f64 = 50.0;
    let (intercept, slope) = points.fit_line()?;
    let entries = points.entries();
    let (umin, umax) = min_max(entries.iter().map(|e| e.u));
    let (vmin, vmax) = min_max(entries.iter().map(|e| e.v));
    let vspan = if vmax > vmin { vmax - vmin } else { 1.0 };
    let x = |u: f64| M + (u - umin) / (umax - umin) * (W - 2.0 * M);
    let y = |v: f64| H - M - (v - vmin) / vspan * (H - 2.0 * M);

    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    );
    s.push_str(&format!(
        "<rect x=\"{M}\" y=\"{M}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#888\"/>\n",
        W - 2.0 * M,
        H - 2.0 * M
    ));
    s.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#c00\"/>\n",
        x(umin),
        y(intercept + slope * umin),
        x(umax),
        y(intercept + slope * umax)
    ));
    for e in entries {
        s.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#036\"/>\n",
            x(e.u),
            y(e.v)
        ));
    }
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">t(i)</text>\n",
        W / 2.0,
        H - 15.0
    ));
    s.push_str(&format!(
        "<text x=\"15\" y=\"{}\" transform=\"rotate(-90 15 {})\" text-anchor=\"middle\">sqrt(t(i)) z(p(i))</text>\n",
        H / 2.0,
        H / 2.0
    ));
    s.push_str("</svg>\n");
    Ok(s)
}

fn min_max(it: impl Iterator<Item = f64>) -> (f64, f64) {
    it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
        (lo.min(x), hi.max(x))
    })
}

pub fn table_sizes(from: usize, to: usize, step: usize) -> Result<Vec<usize>, CliError> {
    if from < 3 || from > to || to > MAX_TABLE_N {
        return Err(CliError::Usage(format!(
            "need 3 <= n-from <= n-to <= {MAX_TABLE_N}, got {from}..{to}"
        )));
    }
    if step == 0 {
        return Err(CliError::Usage("n-step must be positive".into()));
    }
    Ok((from..=to).step_by(step).collect())
}

fn cmd_gen_table(sizes: &[usize], template: &SimConfig, out: &Path) -> Result<(), CliError> {
    if template.iterations < MIN_TABLE_ITERATIONS {
        return Err(CliError::Usage(format!(
            "iterations must be at least {MIN_TABLE_ITERATIONS}"
        )));
    }
    bsppcc::BsParams64::new(template.alpha_gen, 1.0)?;
    let bound = accuracy_bound(template.iterations)?;

    let cancel = Arc::new(AtomicBool::new(false));
    {
        let cancel = Arc::clone(&cancel);
        // A second handler cannot be installed within one process; ignore.
        let _ = ctrlc::set_handler(move || cancel.store(true, Ordering::SeqCst));
    }

    let file = File::create(out).map_err(|e| CliError::io(out, e))?;
    let mut w = BufWriter::new(file);
    let io_err = |e: io::Error| bsppcc::Error::Argument(format!("{}: {e}", out.display()));

    let meta = bsppcc::TableMeta {
        iterations: template.iterations,
        seed: Some(template.seed),
        alpha_gen: Some(template.alpha_gen),
        source: bsppcc::TableSource::MonteCarlo,
        generator: bsppcc::mc::GENERATOR_VERSION.into(),
    };
    w.write_all(format_header(&meta, &template.levels).as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(out, e))?;

    let result = build_table_with(sizes, template, Some(&cancel), |n, row| {
        w.write_all(format_row(n, row).as_bytes())
            .and_then(|_| w.flush())
            .map_err(io_err)?;
        eprintln!("n={n} done (accuracy bound {bound:.6})");
        Ok(())
    });

    match result {
        Ok(_) => Ok(()),
        Err(bsppcc::Error::Aborted { n, reason, .. }) => {
            let trailer = format!("# partial: stopped at n={n}: {reason}\n");
            let _ = w.write_all(trailer.as_bytes()).and_then(|_| w.flush());
            Err(CliError::Usage(format!(
                "table generation stopped at n={n}: {reason}; completed rows kept in {}",
                out.display()
            )))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_show_table(n: Option<usize>, table: Option<PathBuf>) -> Result<(), CliError> {
    let table = resolve_table(table)?;
    let text = match n {
        None => table.to_text(),
        Some(n) => {
            let row = critical_row(&table, n)?;
            let mut s = format_header(table.meta(), table.levels());
            if table.row(n).is_none() {
                s.push_str("# interpolated between neighbouring rows\n");
            }
            s.push_str(&format_row(n, &row));
            s
        }
    };
    io::stdout()
        .write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}
