//! Command-line front end for `riverlink`.
//!
//! `run` parses arguments, dispatches to the library and renders the result
//! as text, JSON or CSV. Exit codes: 0 success, 1 domain error, 2 usage error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use riverlink::arith::Discriminant;
use riverlink::experiments::{
    angle_histogram, bench_compare, c_statistic, c_statistic_batch, intersection_locus, CStat,
};
use riverlink::forms::{narrow_class_group, Pibqf};
use riverlink::geometry::{crossing_point, IntersectionRecord};
use riverlink::grosszagier::{
    check_formula_scope, class_breakdown, p_count, p_table, total_intersection_formula, PnProfile, PrimeRole,
};
use riverlink::intersect::{components, enumerate_crossings, intersection_number};
use riverlink::river::{is_reciprocal_river, river_of};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Divisor-sum formula when in scope, and always the class sum; they must agree.
    Both,
    Formula,
    Classes,
}

#[derive(Debug, Parser)]
#[command(name = "riverlink", version, about = "Intersection numbers of closed modular geodesics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized commands (required by them).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Histogram bins (locus only).
    #[arg(long, global = true)]
    pub bins: Option<usize>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// River word of a form, e.g. "[10,14,-5]".
    River { form: String },
    /// Narrow class group representatives of a discriminant.
    Classgroup { d: String },
    /// Int(q1, q2).
    Intersect { q1: String, q2: String },
    /// The four river components of Int(q1, q2).
    Components { q1: String, q2: String },
    /// Crossing of the two root geodesics, or with --all every crossing of the closed geodesics.
    Cross {
        q1: String,
        q2: String,
        #[arg(long)]
        all: bool,
    },
    /// Table of p(n) over S(D1, D2), or a single n.
    Pn {
        d1: String,
        d2: String,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
    },
    /// Int(D1, D2).
    Total {
        d1: String,
        d2: String,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        /// Also list Int(q1, q2) for every pair of classes.
        #[arg(long)]
        breakdown: bool,
    },
    /// Intersections of the geodesic of a form with all classes of discriminant D.
    Locus {
        form: String,
        d: String,
        /// Base point "re,im" on the root geodesic; defaults to its apex.
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
    },
    /// C(D1, D2) for one pair, or over seeded random coprime fundamental pairs.
    Cstat {
        d1: Option<String>,
        d2: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_parser = parse_range, default_value = "1:2000")]
        range1: (i64, i64),
        #[arg(long, value_parser = parse_range, default_value = "1:100000")]
        range2: (i64, i64),
    },
    /// Mean timings of the naive and fast Int^RS algorithms on random pairs.
    Bench {
        #[arg(long, value_parser = parse_range, default_value = "1:1000")]
        range1: (i64, i64),
        #[arg(long, value_parser = parse_range, default_value = "1:1000")]
        range2: (i64, i64),
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((p(lo)?, p(hi)?))
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
}

impl From<riverlink::Error> for CliError {
    fn from(e: riverlink::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn form(s: &str) -> CliResult<Pibqf> {
    Ok(s.parse()?)
}

fn disc(s: &str) -> CliResult<Discriminant> {
    let d = s
        .trim()
        .parse::<i64>()
        .map_err(|_| riverlink::Error::InvalidDiscriminant(s.to_string()))?;
    Ok(Discriminant::new(d)?)
}

/// `x` to 12 significant digits, without trailing zeros.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp).max(0) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{:.11e}", x);
        let (mant, e) = s.split_once('e').expect("scientific notation");
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{mant}e{e}")
    }
}

/// Rendered output of one command.
struct Report {
    text: String,
    json: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Report {
    fn table(header: Vec<&'static str>, rows: Vec<Vec<String>>, json: Value) -> Self {
        let text = aligned(&header, &rows);
        Report { text, json, header, rows }
    }

    fn render(&self, format: Format) -> CliResult<Vec<u8>> {
        Ok(match format {
            Format::Text => {
                let mut t = self.text.clone();
                if !t.ends_with('\n') {
                    t.push('\n');
                }
                t.into_bytes()
            }
            Format::Json => {
                let mut v = serde_json::to_vec_pretty(&self.json).expect("JSON values serialize");
                v.push(b'\n');
                v
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let io = |e: csv::Error| CliError::Domain(e.to_string());
                w.write_record(&self.header).map_err(io)?;
                for r in &self.rows {
                    w.write_record(r).map_err(io)?;
                }
                w.into_inner().map_err(|e| CliError::Domain(e.to_string()))?
            }
        })
    }
}

fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        parts.join("  ").trim_end().to_string()
    };
    let mut out = vec![line(header.to_vec())];
    out.extend(rows.iter().map(|r| line(r.iter().map(String::as_str).collect())));
    out.join("\n")
}

fn record_row(r: &IntersectionRecord) -> Vec<String> {
    vec![
        r.bdelta.to_string(),
        r.sign.to_string(),
        fmt_float(r.point.re),
        fmt_float(r.point.im),
        fmt_float(r.angle),
        fmt_float(r.arc_distance),
    ]
}

fn json_of<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize")
}

fn require_seed(cli: &Cli, command: &str) -> CliResult<u64> {
    cli.seed
        .ok_or_else(|| CliError::Usage(format!("`{command}` is randomized and requires --seed")))
}

fn role_letter(r: PrimeRole) -> &'static str {
    match r {
        PrimeRole::P => "p",
        PrimeRole::Q => "q",
        PrimeRole::W => "w",
    }
}

fn pn_row(p: &PnProfile) -> Vec<String> {
    let classes: Vec<String> = p
        .factors
        .iter()
        .map(|f| format!("{}:{:+}:{}", f.prime, f.epsilon, role_letter(f.role)))
        .collect();
    vec![p.n.to_string(), p.m.to_string(), p.factorization_string(), classes.join(";"), p.value.to_string()]
}

fn cstat_row(c: &CStat) -> Vec<String> {
    vec![
        c.d1.to_string(),
        c.d2.to_string(),
        c.int_total.to_string(),
        c.h1.to_string(),
        c.h2.to_string(),
        fmt_float(c.r1),
        fmt_float(c.r2),
        fmt_float(c.c),
    ]
}

const CSTAT_HEADER: [&str; 8] = ["d1", "d2", "int", "h1", "h2", "r1", "r2", "c"];
const RECORD_HEADER: [&str; 6] = ["bdelta", "sign", "re", "im", "angle", "arc_distance"];

fn execute(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::River { form: f } => {
            let q = form(f)?;
            let r = river_of(&q);
            let row = vec![q.to_string(), r.to_string(), r.period().to_string(), is_reciprocal_river(&r).to_string()];
            let json = json!({"form": q.to_string(), "river": r.to_string(), "period": r.period(), "reciprocal": is_reciprocal_river(&r)});
            let mut rep = Report::table(vec!["form", "river", "period", "reciprocal"], vec![row], json);
            rep.text = r.to_string();
            Ok(rep)
        }
        Command::Classgroup { d } => {
            let d = disc(d)?;
            let reps = narrow_class_group(d);
            let rows: Vec<Vec<String>> = reps
                .iter()
                .enumerate()
                .map(|(i, q)| vec![i.to_string(), q.to_string(), river_of(q).to_string()])
                .collect();
            let json = json!({
                "discriminant": d.get(),
                "class_number": reps.len(),
                "representatives": reps.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            });
            let mut rep = Report::table(vec!["index", "form", "river"], rows, json);
            rep.text = reps.iter().map(|q| q.to_string()).collect::<Vec<_>>().join("\n");
            Ok(rep)
        }
        Command::Intersect { q1, q2 } => {
            let (a, b) = (form(q1)?, form(q2)?);
            let n = intersection_number(&a, &b)?;
            let mut rep = Report::table(
                vec!["q1", "q2", "int"],
                vec![vec![a.to_string(), b.to_string(), n.to_string()]],
                json!({"q1": a.to_string(), "q2": b.to_string(), "int": n}),
            );
            rep.text = n.to_string();
            Ok(rep)
        }
        Command::Components { q1, q2 } => {
            let (a, b) = (form(q1)?, form(q2)?);
            let c = components(&a, &b)?;
            let row = vec![
                a.to_string(),
                b.to_string(),
                c.rs.to_string(),
                c.ro.to_string(),
                c.ls.to_string(),
                c.lo.to_string(),
                c.total().to_string(),
            ];
            let json = json!({"q1": a.to_string(), "q2": b.to_string(), "rs": c.rs, "ro": c.ro, "ls": c.ls, "lo": c.lo, "int": c.total()});
            let mut rep = Report::table(vec!["q1", "q2", "rs", "ro", "ls", "lo", "int"], vec![row], json);
            rep.text = format!("RS={} RO={} LS={} LO={} Int={}", c.rs, c.ro, c.ls, c.lo, c.total());
            Ok(rep)
        }
        Command::Cross { q1, q2, all } => {
            let (a, b) = (form(q1)?, form(q2)?);
            if !all {
                let r = crossing_point(&a, &b)?;
                let mut rep = Report::table(RECORD_HEADER.to_vec(), vec![record_row(&r)], json_of(&r));
                rep.text = format!(
                    "bdelta={} sign={:+} point={}+{}i angle={} arc_distance={}",
                    r.bdelta,
                    r.sign,
                    fmt_float(r.point.re),
                    fmt_float(r.point.im),
                    fmt_float(r.angle),
                    fmt_float(r.arc_distance)
                );
                return Ok(rep);
            }
            let mut rows = Vec::new();
            let mut items = Vec::new();
            for c in enumerate_crossings(&a, &b)? {
                let r = crossing_point(&a, &c.partner)?;
                let mut row = vec![format!("{:?}", c.kind).to_uppercase(), c.partner.to_string()];
                row.extend(record_row(&r));
                rows.push(row);
                items.push(json!({"kind": format!("{:?}", c.kind).to_uppercase(), "partner": c.partner.to_string(), "record": json_of(&r)}));
            }
            let mut header = vec!["kind", "partner"];
            header.extend(RECORD_HEADER);
            Ok(Report::table(header, rows, Value::Array(items)))
        }
        Command::Pn { d1, d2, n } => {
            let (a, b) = (disc(d1)?, disc(d2)?);
            let profiles = match n {
                Some(n) => vec![p_count(a, b, *n)?],
                None => p_table(a, b)?,
            };
            let rows = profiles.iter().map(pn_row).collect();
            let mut rep = Report::table(vec!["n", "m", "factorization", "classification", "p"], rows, json_of(&profiles));
            if n.is_some() {
                rep.text = profiles[0].value.to_string();
            }
            Ok(rep)
        }
        Command::Total { d1, d2, method, breakdown } => {
            let (a, b) = (disc(d1)?, disc(d2)?);
            let formula = match method {
                Method::Formula => Some(total_intersection_formula(a, b)?),
                Method::Both if check_formula_scope(a, b).is_ok() => Some(total_intersection_formula(a, b)?),
                _ => None,
            };
            let classes = match method {
                Method::Formula if !breakdown => None,
                _ => Some(class_breakdown(a, b)?),
            };
            if let (Some(f), Some(c)) = (formula, &classes) {
                if f != c.total() {
                    return Err(CliError::Domain(format!(
                        "formula gives {f} but the class sum gives {}",
                        c.total()
                    )));
                }
            }
            let total = formula.or(classes.as_ref().map(|c| c.total())).expect("one route ran");
            let mut cells = Vec::new();
            if let Some(c) = classes.as_ref().filter(|_| *breakdown) {
                for (i, r1) in c.reps1.iter().enumerate() {
                    for (j, r2) in c.reps2.iter().enumerate() {
                        cells.push((r1.to_string(), r2.to_string(), c.cells[i][j]));
                    }
                }
            }
            let json = json!({
                "d1": a.get(),
                "d2": b.get(),
                "int": total,
                "formula": formula,
                "classes": classes.as_ref().map(|c| c.total()),
                "breakdown": cells.iter().map(|(x, y, n)| json!({"q1": x, "q2": y, "int": n})).collect::<Vec<_>>(),
            });
            let (header, rows) = if *breakdown {
                (vec!["q1", "q2", "int"], cells.iter().map(|(x, y, n)| vec![x.clone(), y.clone(), n.to_string()]).collect())
            } else {
                (vec!["d1", "d2", "int"], vec![vec![a.to_string(), b.to_string(), total.to_string()]])
            };
            let mut rep = Report::table(header, rows, json);
            if !breakdown {
                rep.text = total.to_string();
            } else {
                rep.text = format!("{}\n{total}", rep.text);
            }
            Ok(rep)
        }
        Command::Locus { form: f, d, base } => {
            let q = form(f)?;
            let d = disc(d)?;
            let base = base.as_deref().map(parse_point).transpose()?;
            let samples = intersection_locus(&q, d, base)?;
            if let Some(bins) = cli.bins {
                let angles: Vec<f64> = samples.iter().map(|s| s.record.angle).collect();
                let h = angle_histogram(&angles, bins)?;
                let rows = h
                    .iter()
                    .map(|b| vec![fmt_float(b.bin_lo), fmt_float(b.bin_hi), fmt_float(b.mass)])
                    .collect();
                return Ok(Report::table(vec!["bin_lo", "bin_hi", "mass"], rows, json_of(&h)));
            }
            let rows = samples
                .iter()
                .map(|s| {
                    let mut row = vec![s.partner_class.to_string()];
                    row.extend(record_row(&s.record));
                    row
                })
                .collect();
            let mut header = vec!["class_rep"];
            header.extend(RECORD_HEADER);
            Ok(Report::table(header, rows, json_of(&samples)))
        }
        Command::Cstat { d1, d2, trials, range1, range2 } => {
            let stats = match (d1, d2) {
                (Some(a), Some(b)) => {
                    if trials.is_some() {
                        return Err(CliError::Usage("--trials applies only without explicit discriminants".into()));
                    }
                    vec![c_statistic(disc(a)?, disc(b)?)?]
                }
                (None, None) => {
                    let seed = require_seed(cli, "cstat")?;
                    c_statistic_batch(*range1, *range2, trials.unwrap_or(1000), seed)?
                }
                _ => return Err(CliError::Usage("cstat takes either two discriminants or none".into())),
            };
            let rows: Vec<Vec<String>> = stats.iter().map(cstat_row).collect();
            let mut rep = Report::table(CSTAT_HEADER.to_vec(), rows, json_of(&stats));
            if stats.len() > 1 {
                let mean = stats.iter().map(|s| s.c).sum::<f64>() / stats.len() as f64;
                rep.text = format!("{}\nmean c = {}", rep.text, fmt_float(mean));
            }
            Ok(rep)
        }
        Command::Bench { range1, range2, trials } => {
            let seed = require_seed(cli, "bench")?;
            let report = bench_compare(*range1, *range2, *trials, seed)?;
            let r = &report.row;
            let row = vec![
                r.d1_lo.to_string(),
                r.d1_hi.to_string(),
                r.d2_lo.to_string(),
                r.d2_hi.to_string(),
                fmt_float(r.p1_avg),
                fmt_float(r.p2_avg),
                fmt_float(r.intrs_avg),
                fmt_float(r.t_river_ms),
                fmt_float(r.t_naive_ms),
                fmt_float(r.t_fast_ms),
            ];
            let header = vec![
                "d1_lo", "d1_hi", "d2_lo", "d2_hi", "p1_avg", "p2_avg", "intrs_avg", "t_river_ms", "t_naive_ms", "t_fast_ms",
            ];
            Ok(Report::table(header, vec![row], json_of(&report)))
        }
    }
}

fn parse_point(s: &str) -> CliResult<riverlink::geometry::Complex64> {
    let bad = || CliError::Usage(format!("--base expects \"re,im\", got {s:?}"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    Ok(riverlink::geometry::Complex64::new(re, im))
}

/// Run the CLI on `args` (including the program name). Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = execute(&cli).and_then(|r| r.render(cli.format));
    let bytes = match result {
        Ok(b) => b,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            return 2;
        }
        Err(CliError::Domain(m)) => {
            let _ = writeln!(err, "error: {m}");
            return 1;
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => out.write_all(&bytes).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => 0,
        Err(m) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_twelve_significant_digits() {
        assert_eq!(fmt_float(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_float(0.5), "0.5");
        assert_eq!(fmt_float(0.0), "0");
        assert_eq!(fmt_float(-2.0), "-2");
        assert_eq!(fmt_float(123456.789), "123456.789");
        assert_eq!(fmt_float(1.0 / 3.0 * 1e-7), "3.33333333333e-8");
        assert_eq!(fmt_float(6.02214076e23), "6.02214076e23");
        assert_eq!(fmt_float(2.0f64.sqrt() * 1e-3), "0.00141421356237");
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1:2000"), Ok((1, 2000)));
        assert!(parse_range("12").is_err());
        assert!(parse_range("a:b").is_err());
    }

    #[test]
    fn tables_align() {
        let t = aligned(&["a", "bbb"], &[vec!["10".into(), "x".into()]]);
        assert_eq!(t, "a   bbb\n10  x");
    }
}
