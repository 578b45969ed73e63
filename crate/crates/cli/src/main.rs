use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread::available_parallelism;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use zconvex::anatomy::{self, ClassLabel};
use zconvex::census::{CensusClass, CensusKey, CensusTable};
use zconvex::grid::{Cell, Polyomino};
use zconvex::harness::{self, Environment, VerificationReport, Verifier, VerifyConfig};
use zconvex::pathmetry;
use zconvex::series::{BiSeries, Kind, Series};
use zconvex::zgf::{self, SystemOptions};

/// Exact enumeration and generating functions for convex, L-convex and
/// Z-convex polyominoes.
#[derive(Parser)]
#[command(name = "zconvex", version)]
struct Cli {
    /// Worker threads for censuses; 0 uses every available core.
    #[arg(long, global = true, env = "ZCONVEX_WORKERS", default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count convex polyominoes by class up to a semi-perimeter.
    Enumerate {
        #[arg(long, default_value_t = 8)]
        max_sp: u32,
        /// Classes to count: all, convex, centered, ascending, descending,
        /// l-convex, z-convex or degree=K. Repeat or separate with commas.
        #[arg(long, value_delimiter = ',', default_value = "all")]
        class: Vec<String>,
        #[arg(long, value_enum, default_value_t = GroupBy::Sp)]
        group_by: GroupBy,
        #[arg(long, value_enum, default_value_t = TableFormat::Table)]
        format: TableFormat,
        /// Write to this file instead of standard output.
        #[arg(long, env = "ZCONVEX_OUT")]
        out: Option<PathBuf>,
    },
    /// Degree with a witness pair, class, regions, reduction and hooks of
    /// one polyomino.
    Analyze {
        /// Text grid (`#` and `.`) or JSON cells; `-` reads standard input.
        input: PathBuf,
        /// Include the region decomposition and the reduction.
        #[arg(long)]
        regions: bool,
        /// Include the hooks.
        #[arg(long)]
        hooks: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long, env = "ZCONVEX_OUT")]
        out: Option<PathBuf>,
    },
    /// Coefficients of a generating function.
    Series {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long, env = "ZCONVEX_ORDER", default_value_t = 12)]
        order: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Table)]
        format: TableFormat,
        #[arg(long, env = "ZCONVEX_OUT")]
        out: Option<PathBuf>,
    },
    /// Run every acceptance check; exits 1 if any fails.
    Verify {
        #[arg(long, default_value_t = 10)]
        max_sp: u32,
        #[arg(long, env = "ZCONVEX_ORDER", default_value_t = 12)]
        order: u32,
        /// Also write the JSON report here.
        #[arg(long, env = "ZCONVEX_OUT")]
        report: Option<PathBuf>,
        /// Only run these criteria (1 to 8).
        #[arg(long, value_delimiter = ',')]
        criterion: Vec<u32>,
        /// Corrupt one closed-form coefficient; a sound harness must fail.
        #[arg(long, hide = true)]
        perturb: bool,
    },
    /// Render a polyomino with its degree and class.
    Show {
        /// Text grid (`#` and `.`) or JSON cells; `-` reads standard input.
        input: PathBuf,
        #[arg(long)]
        regions: bool,
        #[arg(long)]
        hooks: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupBy {
    Sp,
    WidthHeight,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Convex,
    LConvex,
    Centered,
    ZConvexClosed,
    ZConvexSystem,
    D,
    Catalan,
    #[value(name = "hooked-A")]
    HookedA,
    #[value(name = "hooked-B")]
    HookedB,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let workers = match cli.workers {
        0 => available_parallelism().map(|n| n.get()).unwrap_or(1),
        n => n,
    };
    match cli.command {
        Command::Enumerate { max_sp, class, group_by, format, out } => {
            let classes = parse_classes(&class)?;
            if max_sp < 2 {
                bail!("--max-sp must be at least 2");
            }
            let table = harness::standard_census(max_sp, workers)?.restrict(&classes);
            emit(out.as_deref(), &render_census(&table, &classes, max_sp, group_by, format))?;
            Ok(0)
        }
        Command::Analyze { input, regions, hooks, format, out } => {
            let p = read_polyomino(&input)?;
            let v = analyze(&p, regions, hooks)?;
            let text = match format {
                ReportFormat::Json => serde_json::to_string_pretty(&v)? + "\n",
                ReportFormat::Text => analysis_text(&p, &v),
            };
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Series { target, order, format, out } => {
            emit(out.as_deref(), &series_output(target, order, format)?)?;
            Ok(0)
        }
        Command::Verify { max_sp, order, report, criterion, perturb } => {
            let verifier = Verifier::new(VerifyConfig { max_sp, order, workers, perturb })?;
            let rep = if criterion.is_empty() {
                verifier.run_all()?
            } else {
                let mut checks = Vec::new();
                for n in criterion {
                    checks.extend(verifier.criterion(n)?);
                }
                VerificationReport { environment: Environment { order, max_sp, workers }, checks }
            };
            print!("{}", rep.to_text());
            let failed = rep.failures().count();
            println!("{} checks, {} failed", rep.checks.len(), failed);
            if let Some(path) = report {
                fs::write(&path, rep.to_json() + "\n").with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(rep.exit_code() as u8)
        }
        Command::Show { input, regions, hooks } => {
            let p = read_polyomino(&input)?;
            print!("{}", show(&p, regions, hooks)?);
            Ok(0)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing to standard output"),
    }
}

fn parse_classes(names: &[String]) -> Result<Vec<CensusClass>> {
    let mut out = Vec::new();
    for name in names {
        let class = match name.trim() {
            "all" => CensusClass::Convex,
            other => other.parse().with_context(|| format!("unknown class {other:?}"))?,
        };
        if !out.contains(&class) {
            out.push(class);
        }
    }
    Ok(out)
}

fn render_census(
    table: &CensusTable,
    classes: &[CensusClass],
    max_sp: u32,
    group_by: GroupBy,
    format: TableFormat,
) -> String {
    match (format, group_by) {
        (TableFormat::Csv, GroupBy::WidthHeight) => table.to_csv(),
        (TableFormat::Json, GroupBy::WidthHeight) => table.to_json() + "\n",
        (TableFormat::Csv, GroupBy::Sp) => {
            let rows = sp_rows(table, classes);
            let mut out = String::from("semiperimeter,class,count\n");
            for (sp, class, n) in rows {
                out.push_str(&format!("{sp},{class},{n}\n"));
            }
            out
        }
        (TableFormat::Json, GroupBy::Sp) => {
            let rows = sp_rows(table, classes);
            let v: Vec<_> = rows
                .into_iter()
                .map(|(sp, class, n)| json!({"semiperimeter": sp, "class": class.to_string(), "count": count_json(&n)}))
                .collect();
            serde_json::to_string_pretty(&v).expect("rows serialize") + "\n"
        }
        (TableFormat::Table, GroupBy::Sp) => {
            let mut grid = vec![header(&["sp"], classes)];
            for sp in 2..=max_sp {
                let mut row = vec![sp.to_string()];
                for &class in classes {
                    row.push(table.by_semiperimeter(class).get(&sp).map_or("0".into(), |n| n.to_string()));
                }
                grid.push(row);
            }
            align(&grid)
        }
        (TableFormat::Table, GroupBy::WidthHeight) => {
            let mut grid = vec![header(&["width", "height"], classes)];
            for sp in 2..=max_sp {
                for w in 1..sp {
                    let mut row = vec![w.to_string(), (sp - w).to_string()];
                    for &class in classes {
                        row.push(table.get(&CensusKey::new(w, sp - w, class)).to_string());
                    }
                    grid.push(row);
                }
            }
            align(&grid)
        }
    }
}

/// `(semi-perimeter, class, count)` sorted by semi-perimeter, then class name.
fn sp_rows(table: &CensusTable, classes: &[CensusClass]) -> Vec<(u32, CensusClass, String)> {
    let mut rows = Vec::new();
    for &class in classes {
        for (sp, n) in table.by_semiperimeter(class) {
            rows.push((sp, class, n.to_string()));
        }
    }
    rows.sort_by_cached_key(|r| (r.0, r.1.to_string()));
    rows
}

/// Integer when it fits in 64 bits, decimal string otherwise, as in the
/// width-height JSON.
fn count_json(n: &str) -> serde_json::Value {
    n.parse::<u64>().map_or_else(|_| json!(n), |v| json!(v))
}

fn header(keys: &[&str], classes: &[CensusClass]) -> Vec<String> {
    keys.iter().map(|k| k.to_string()).chain(classes.iter().map(|c| c.to_string())).collect()
}

/// Right-aligned columns separated by two spaces.
fn align(grid: &[Vec<String>]) -> String {
    let cols = grid[0].len();
    let widths: Vec<usize> = (0..cols).map(|i| grid.iter().map(|r| r[i].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in grid {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        out.push_str(&cells.join("  "));
        out.push('\n');
    }
    out
}

fn series_output(target: Target, order: u32, format: TableFormat) -> Result<String> {
    if order == 0 {
        bail!("--order must be at least 1");
    }
    let bi = |s: BiSeries| render_series(&s, format);
    Ok(match target {
        Target::Convex => bi(zgf::gf_convex(order)?),
        Target::LConvex => bi(zgf::gf_lconvex_univariate(order)?),
        Target::Centered => bi(zgf::gf_centered(order)?),
        Target::ZConvexClosed => bi(zgf::gf_zconvex_closed(order)?),
        Target::ZConvexSystem => bi(zgf::solve_system(order, SystemOptions::default())?.p),
        Target::D => bi(BiSeries::solve_d(order)),
        Target::Catalan => bi(BiSeries::solve_kernel_root(order)),
        Target::HookedA => render_series(&zgf::gf_centered_hooked(order)?.0, format),
        Target::HookedB => render_series(&zgf::gf_centered_hooked(order)?.1, format),
    })
}

fn render_series<K: Kind>(s: &Series<K>, format: TableFormat) -> String {
    match format {
        TableFormat::Table => s.to_table() + "\n",
        TableFormat::Json => s.to_json() + "\n",
        TableFormat::Csv => {
            let mut out = String::from("x,y,u,coeff\n");
            for (m, c) in s.terms() {
                out.push_str(&format!("{},{},{},{}\n", m.i(), m.j(), m.k(), c));
            }
            out
        }
    }
}

fn read_polyomino(path: &Path) -> Result<Polyomino> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).context("reading standard input")?;
    } else {
        text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    parse_polyomino(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Accepts `{"cells": [...]}` or a bare array, with cells written as
/// `[x, y]` pairs or `{"x", "y"}` objects, or else a text grid.
fn parse_polyomino(text: &str) -> Result<Polyomino> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let v: serde_json::Value = serde_json::from_str(trimmed)?;
        let list = match &v {
            serde_json::Value::Object(o) => o.get("cells").context("JSON object has no \"cells\" field")?,
            _ => &v,
        };
        let cells = list
            .as_array()
            .context("cells must be a JSON array")?
            .iter()
            .map(|c| {
                let xy = match c {
                    serde_json::Value::Array(a) if a.len() == 2 => (a[0].as_i64(), a[1].as_i64()),
                    serde_json::Value::Object(o) => {
                        (o.get("x").and_then(|x| x.as_i64()), o.get("y").and_then(|y| y.as_i64()))
                    }
                    _ => (None, None),
                };
                match xy {
                    (Some(x), Some(y)) => Ok(Cell::new(i32::try_from(x)?, i32::try_from(y)?)),
                    _ => bail!("cell {c} is not [x, y] or {{\"x\", \"y\"}}"),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(Polyomino::canonicalize(cells)?);
    }
    let lines: Vec<&str> = trimmed.lines().map(str::trim_end).collect();
    Ok(Polyomino::from_text(&lines.join("\n"))?)
}

fn label_title(l: ClassLabel) -> &'static str {
    match l {
        ClassLabel::Centered => "Centered",
        ClassLabel::Ascending => "Ascending",
        ClassLabel::Descending => "Descending",
    }
}

fn cell_json(c: Cell) -> serde_json::Value {
    json!([c.x, c.y])
}

fn analyze(p: &Polyomino, with_regions: bool, with_hooks: bool) -> Result<serde_json::Value> {
    let mut v = json!({
        "cells": p.len(),
        "width": p.width(),
        "height": p.height(),
        "semiperimeter": p.semi_perimeter(),
        "convex": p.is_convex(),
    });
    if !p.is_convex() {
        return Ok(v);
    }
    let w = pathmetry::degree_witness(p)?;
    let label = anatomy::classify(p)?;
    v["degree"] = json!(w.degree);
    v["witness"] = json!([cell_json(w.a), cell_json(w.b)]);
    v["class"] = json!(label.to_string());
    v["l_convex"] = json!(w.degree <= 1);
    v["z_convex"] = json!(w.degree <= 2);
    if with_regions {
        v["regions"] = match anatomy::regions(p) {
            Ok(r) => {
                let cells = |cs: &[Cell]| cs.iter().map(|&c| cell_json(c)).collect::<Vec<_>>();
                let reduction = match anatomy::reduce(p) {
                    Ok((q, h)) => json!({"polyomino": q.to_text(), "hook": h}),
                    Err(e) => json!({"error": e.to_string()}),
                };
                json!({
                    "frame": r.frame,
                    "omega": cells(&r.omega),
                    "xi": cells(&r.xi),
                    "theta": cells(&r.theta),
                    "lambda": cells(&r.lambda),
                    "property1": anatomy::check_property1(p)?,
                    "rendering": anatomy::render_regions(p, &r),
                    "reduction": reduction,
                })
            }
            Err(e) => json!({"error": e.to_string()}),
        };
    }
    if with_hooks {
        v["hooks"] = match anatomy::enumerate_hooks(p) {
            Ok(hs) => json!(hs
                .iter()
                .map(|h| json!({"hook": h, "rendering": anatomy::render_hook(p, h)}))
                .collect::<Vec<_>>()),
            Err(e) => json!({"error": e.to_string()}),
        };
    }
    Ok(v)
}

fn analysis_text(p: &Polyomino, v: &serde_json::Value) -> String {
    let mut out = format!("{}\n", p.to_text());
    out.push_str(&format!(
        "cells: {}, width: {}, height: {}, semi-perimeter: {}\n",
        v["cells"], v["width"], v["height"], v["semiperimeter"]
    ));
    if v["convex"] == json!(false) {
        out.push_str("convex: no\n");
        return out;
    }
    let wit = |i: usize| format!("({}, {})", v["witness"][i][0], v["witness"][i][1]);
    out.push_str(&format!("degree: {} (witness {} to {})\n", v["degree"], wit(0), wit(1)));
    out.push_str(&format!("class: {}\n", v["class"].as_str().unwrap_or_default()));
    let yn = |b: &serde_json::Value| if b == &json!(true) { "yes" } else { "no" };
    out.push_str(&format!("l-convex: {}, z-convex: {}\n", yn(&v["l_convex"]), yn(&v["z_convex"])));
    if let Some(r) = v.get("regions") {
        if let Some(e) = r.get("error") {
            out.push_str(&format!("regions: {}\n", e.as_str().unwrap_or_default()));
        } else {
            let f = &r["frame"];
            out.push_str(&format!(
                "frame: X = {}, Y = {}, S = {}, T = {}\n",
                f["x_row"], f["y_row"], f["s_col"], f["t_col"]
            ));
            out.push_str(&format!("{}\n", r["rendering"].as_str().unwrap_or_default()));
            let n = |k: &str| r[k].as_array().map_or(0, |a| a.len());
            out.push_str(&format!(
                "omega: {}, xi: {}, theta: {}, lambda: {}\n",
                n("omega"),
                n("xi"),
                n("theta"),
                n("lambda")
            ));
            out.push_str(&format!("property 1: {}\n", yn(&r["property1"])));
            let red = &r["reduction"];
            match red.get("error") {
                Some(e) => out.push_str(&format!("reduction: {}\n", e.as_str().unwrap_or_default())),
                None => {
                    let h = &red["hook"];
                    out.push_str(&format!(
                        "reduction (hook at row {}, corner column {}, type {}, k = {}):\n{}\n",
                        h["arm_row"],
                        h["corner_col"],
                        h["hook_type"].as_str().unwrap_or_default(),
                        h["k_stat"],
                        red["polyomino"].as_str().unwrap_or_default()
                    ));
                }
            }
        }
    }
    if let Some(hs) = v.get("hooks") {
        match hs.as_array() {
            None => out.push_str(&format!("hooks: {}\n", hs["error"].as_str().unwrap_or_default())),
            Some(list) => {
                out.push_str(&format!("hooks: {}\n", list.len()));
                for h in list {
                    let s = &h["hook"];
                    out.push_str(&format!(
                        "hook at row {}, corner column {}, type {}, k = {}\n{}\n",
                        s["arm_row"],
                        s["corner_col"],
                        s["hook_type"].as_str().unwrap_or_default(),
                        s["k_stat"],
                        h["rendering"].as_str().unwrap_or_default()
                    ));
                }
            }
        }
    }
    out
}

fn show(p: &Polyomino, with_regions: bool, with_hooks: bool) -> Result<String> {
    let mut out = format!("{}\n", p.to_text());
    if !p.is_convex() {
        out.push_str("not convex\n");
        return Ok(out);
    }
    let degree = pathmetry::convexity_degree(p)?;
    let label = anatomy::classify(p)?;
    out.push_str(&format!("degree: {degree}, class: {}\n", label_title(label)));
    if with_regions {
        match anatomy::regions(p) {
            Ok(r) => {
                out.push_str(&format!("{}\n", anatomy::render_regions(p, &r)));
                if r.lambda.is_empty() {
                    out.push_str("Λ: empty\n");
                } else {
                    out.push_str(&format!("Λ: {} cells\n", r.lambda.len()));
                }
            }
            Err(e) => out.push_str(&format!("regions: {e}\n")),
        }
    }
    if with_hooks {
        match anatomy::enumerate_hooks(p) {
            Ok(hs) if hs.is_empty() => out.push_str("hooks: none\n"),
            Ok(hs) => {
                for h in hs {
                    out.push_str(&format!(
                        "hook type {}, k = {}\n{}\n",
                        h.hook_type,
                        h.k_stat,
                        anatomy::render_hook(p, &h)
                    ));
                }
            }
            Err(e) => out.push_str(&format!("hooks: {e}\n")),
        }
    }
    Ok(out)
}
