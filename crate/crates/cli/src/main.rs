//! `cauchy-fdiv`: command-line front end for the `cauchy-fdiv` library.
//!
//! Exit codes: 0 success, 1 a `check` suite failed, 2 unparseable input,
//! 3 a domain or numerical error. Results go to stdout as JSON (default) or
//! CSV; numbers are printed in their shortest round-trip representation.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use cauchy_fdiv::cauchy_core::{chi, CauchyParam};
use cauchy_fdiv::chi_series::taylor_f_divergence;
use cauchy_fdiv::closed_form::{divergence, h_of_chi, DivergenceKind};
use cauchy_fdiv::families::{family_divergence, Family, FamilyParam};
use cauchy_fdiv::geometry_analysis::{chernoff_optimizer, fit_h_polynomial, fr_to_bhat_transform, FitTarget};
use cauchy_fdiv::oracle::{
    mc_f_divergence, quad_bhattacharyya, quad_f_divergence, quad_kl_bivariate, quad_q_divergence_2, BivariateCauchy,
    DensitySpec, GeneratorSpec,
};
use cauchy_fdiv::suites::{run_suite, Suite};
use cauchy_fdiv::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

#[derive(Parser, Debug)]
#[command(name = "cauchy-fdiv", version, about = "f-divergences between Cauchy-type distributions")]
struct Cli {
    /// Worker threads for parallel suites and Monte Carlo (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Quad,
    Mc,
    Series,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Divergence between two Cauchy parameters.
    Div {
        /// Divergence tag, e.g. kl, tv, js, chernoff, skewed-kl:0.3, alpha:0.5.
        #[arg(long)]
        kind: String,
        /// First parameter "l,s".
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Second parameter "l,s".
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
        /// Absolute tolerance (quad) or term tolerance (series).
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Monte Carlo seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Monte Carlo sample count.
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        /// Highest order summed by the series method.
        #[arg(long, default_value_t = 200)]
        max_terms: usize,
    },
    /// Power-chi Taylor series with its convergence verdict.
    Series {
        #[arg(long)]
        kind: String,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Highest order summed.
        #[arg(long, default_value_t = 200)]
        max_terms: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// KL divergence between bivariate Cauchy densities.
    MvKl {
        /// First density "m1,m2;s11,s12,s22".
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Second density "m1,m2;s11,s12,s22".
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Divergence within the circular, wrapped or log-Cauchy family.
    Family {
        /// circular ("re,im" of w), wrapped ("mu,gamma") or log-cauchy ("mu,sigma").
        #[arg(long)]
        family: String,
        #[arg(long)]
        kind: String,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// closed (via the Cauchy reduction) or quad (native support).
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// h_f(u) on the grid u = 0, u_max/steps, ..., u_max (CSV by default).
    Table {
        /// Comma-separated divergence tags.
        #[arg(long, default_value = "kl,tv,js,hellinger,bhattacharyya")]
        kinds: String,
        #[arg(long, default_value_t = 10.0)]
        u_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Curve data for plotting (CSV by default).
    Curve {
        /// Curve name; `fr-to-bhat` gives (s, t(s), √t(s)/s).
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 10.0)]
        s_max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Regression of quadrature data onto powers of chi.
    Fit {
        /// `j:<d>` for ∫p^d q^(1-d) or `chi:<k>` for the order-k chi divergence.
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 5)]
        degree: u32,
        #[arg(long, default_value_t = 60)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Runs an acceptance suite; exit status 0 iff every criterion passes.
    Check {
        /// closed-form, symmetry, invariance, series, bivariate, elliptic, metric,
        /// negdef, chernoff, monotone, families, angular, entropy or all.
        #[arg(long)]
        suite: String,
    },
}

/// A finished command: a document plus the exit status it implies.
struct Outcome {
    doc: Doc,
    code: u8,
}

enum Doc {
    /// One flat record (JSON object, or a CSV header and one row).
    Record(Map<String, Value>),
    /// JSON document with a separate CSV rendering.
    Table { json: Value, header: Vec<String>, rows: Vec<Vec<String>> },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: could not configure {n} threads: {e}");
            return ExitCode::from(3);
        }
    }
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    match emit(&outcome.doc, cli.format, cli.out.as_ref()) {
        Ok(()) => ExitCode::from(outcome.code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        _ => 3,
    }
}

fn parse_f64(s: &str, what: &str) -> Result<f64, Error> {
    s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("{what}: '{s}' is not a number")))
}

fn parse_list(s: &str, n: usize, what: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != n {
        return Err(Error::Parse(format!("{what}: expected {n} comma-separated numbers, got '{s}'")));
    }
    parts.iter().map(|x| parse_f64(x, what)).collect()
}

fn parse_pair(s: &str, what: &str) -> Result<(f64, f64), Error> {
    let v = parse_list(s, 2, what)?;
    Ok((v[0], v[1]))
}

fn parse_param(s: &str, what: &str) -> Result<CauchyParam, Error> {
    let (l, sc) = parse_pair(s, what)?;
    CauchyParam::new(l, sc)
}

fn parse_bivariate(s: &str, what: &str) -> Result<BivariateCauchy, Error> {
    let (mu, sigma) =
        s.split_once(';').ok_or_else(|| Error::Parse(format!("{what}: expected 'm1,m2;s11,s12,s22', got '{s}'")))?;
    let m = parse_list(mu, 2, what)?;
    let c = parse_list(sigma, 3, what)?;
    BivariateCauchy::new([m[0], m[1]], c[0], c[1], c[2])
}

fn parse_kind(s: &str) -> Result<DivergenceKind, Error> {
    let kind: DivergenceKind = s.parse()?;
    kind.validate()?;
    Ok(kind)
}

fn record(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Closed => "closed",
        Method::Quad => "quad",
        Method::Mc => "mc",
        Method::Series => "series",
    }
}

fn run(cmd: &Command) -> Result<Outcome, Error> {
    let doc = match cmd {
        Command::Div { kind, p, q, method, tol, seed, samples, max_terms } => {
            let kind = parse_kind(kind)?;
            let (p, q) = (parse_param(p, "--p")?, parse_param(q, "--q")?);
            run_div(kind, p, q, *method, *tol, *seed, *samples, *max_terms)?
        }
        Command::Series { kind, p, q, max_terms, tol } => {
            let kind = parse_kind(kind)?;
            let (p, q) = (parse_param(p, "--p")?, parse_param(q, "--q")?);
            let r = taylor_f_divergence(&kind, &p, &q, *tol, *max_terms)?;
            let mut partial = 0.0;
            let rows: Vec<Vec<String>> = r
                .term_trace
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    partial += t;
                    vec![(i + 2).to_string(), t.to_string(), partial.to_string()]
                })
                .collect();
            let closed = if kind.has_closed_form() { Some(divergence(&kind, &p, &q)?) } else { None };
            Doc::Table {
                json: json!({
                    "command": "series",
                    "kind": kind.to_string(),
                    "chi": chi(&p, &q),
                    "value": r.value,
                    "terms_used": r.terms_used,
                    "verdict": format!("{:?}", r.verdict).to_lowercase(),
                    "gate": r.gate,
                    "closed_form": closed,
                    "terms": r.term_trace,
                }),
                header: vec!["order".into(), "term".into(), "partial_sum".into()],
                rows,
            }
        }
        Command::MvKl { p, q, tol } => {
            let (p, q) = (parse_bivariate(p, "--p")?, parse_bivariate(q, "--q")?);
            let forward = quad_kl_bivariate(&p, &q, *tol)?;
            let reverse = quad_kl_bivariate(&q, &p, *tol)?;
            Doc::Record(record(vec![
                ("command", json!("mv-kl")),
                ("value", json!(forward)),
                ("reverse", json!(reverse)),
                ("tol", json!(tol)),
            ]))
        }
        Command::Family { family, kind, p, q, method, tol } => {
            let fam: Family = family.parse()?;
            let kind = parse_kind(kind)?;
            let (a1, b1) = parse_pair(p, "--p")?;
            let (a2, b2) = parse_pair(q, "--q")?;
            let (fp, fq) = (FamilyParam::from_pair(fam, a1, b1)?, FamilyParam::from_pair(fam, a2, b2)?);
            let value = match method {
                Method::Closed => family_divergence(&kind, &fp, &fq)?,
                Method::Quad => {
                    let spec = |f: &FamilyParam| match f {
                        FamilyParam::Circular(c) => DensitySpec::Circular(*c),
                        FamilyParam::Wrapped(w) => DensitySpec::Wrapped(*w),
                        FamilyParam::LogCauchy(l) => DensitySpec::LogCauchy(*l),
                    };
                    quad_f_divergence(&GeneratorSpec::for_kind(&kind)?, &spec(&fp), &spec(&fq), *tol)?
                }
                other => {
                    return Err(Error::Unsupported(format!(
                        "family supports --method closed or quad, not {}",
                        method_name(*other)
                    )))
                }
            };
            let (cp, cq) = (fp.to_cauchy(), fq.to_cauchy());
            Doc::Record(record(vec![
                ("command", json!("family")),
                ("family", json!(fam.to_string())),
                ("kind", json!(kind.to_string())),
                ("method", json!(method_name(*method))),
                ("value", json!(value)),
                ("chi", json!(chi(&cp, &cq))),
            ]))
        }
        Command::Table { kinds, u_max, steps } => {
            let kinds: Vec<DivergenceKind> = kinds.split(',').map(parse_kind).collect::<Result<_, _>>()?;
            if !(*u_max > 0.0 && u_max.is_finite()) || *steps == 0 {
                return Err(Error::Domain("table needs u_max > 0 and steps >= 1".into()));
            }
            let mut rows = Vec::new();
            let mut cols: Vec<Vec<f64>> = vec![Vec::new(); kinds.len()];
            let mut us = Vec::new();
            for k in 0..=*steps {
                let u = u_max * k as f64 / *steps as f64;
                let mut row = vec![u.to_string()];
                for (i, kind) in kinds.iter().enumerate() {
                    let h = h_of_chi(kind, u)?;
                    cols[i].push(h);
                    row.push(h.to_string());
                }
                us.push(u);
                rows.push(row);
            }
            let mut header = vec!["u".to_string()];
            header.extend(kinds.iter().map(|k| k.to_string()));
            let mut obj = Map::new();
            obj.insert("command".into(), json!("table"));
            obj.insert("u".into(), json!(us));
            for (kind, col) in kinds.iter().zip(cols) {
                obj.insert(kind.to_string(), json!(col));
            }
            Doc::Table { json: Value::Object(obj), header, rows }
        }
        Command::Curve { name, s_max, steps } => {
            if name != "fr-to-bhat" {
                return Err(Error::Parse(format!("unknown curve '{name}' (available: fr-to-bhat)")));
            }
            if !(*s_max > 0.0 && s_max.is_finite()) || *steps == 0 {
                return Err(Error::Domain("curve needs s_max > 0 and steps >= 1".into()));
            }
            let mut rows = Vec::new();
            let (mut ss, mut ts, mut rs) = (vec![], vec![], vec![]);
            for k in 0..=*steps {
                let s = s_max * k as f64 / *steps as f64;
                let (t, r) = fr_to_bhat_transform(s)?;
                rows.push(vec![s.to_string(), t.to_string(), r.to_string()]);
                ss.push(s);
                ts.push(t);
                rs.push(r);
            }
            Doc::Table {
                json: json!({"command": "curve", "name": name, "s": ss, "t": ts, "ratio": rs}),
                header: vec!["s".into(), "t".into(), "ratio".into()],
                rows,
            }
        }
        Command::Fit { target, degree, samples, seed } => {
            let (tag, order) =
                target.split_once(':').ok_or_else(|| Error::Parse(format!("--target: expected j:<d> or chi:<k>, got '{target}'")))?;
            let order: u32 =
                order.trim().parse().map_err(|_| Error::Parse(format!("--target: '{order}' is not an order")))?;
            let t = match tag {
                "j" => FitTarget::J(order),
                "chi" => FitTarget::ChiK(order),
                other => return Err(Error::Parse(format!("--target: unknown target '{other}'"))),
            };
            let coef = fit_h_polynomial(t, *degree, *samples, *seed)?;
            let rows = coef.iter().enumerate().map(|(i, c)| vec![i.to_string(), c.to_string()]).collect();
            Doc::Table {
                json: json!({"command": "fit", "target": target, "degree": degree, "samples": samples, "seed": seed, "coefficients": coef}),
                header: vec!["power".into(), "coefficient".into()],
                rows,
            }
        }
        Command::Check { suite } => {
            let suite: Suite = suite.parse()?;
            let reports = run_suite(suite);
            for r in &reports {
                eprintln!("{}", r.line());
            }
            let passed = reports.iter().all(|r| r.passed);
            let rows = reports
                .iter()
                .map(|r| vec![r.id.to_string(), r.name.to_string(), r.passed.to_string(), r.summary.clone()])
                .collect();
            let json = json!({
                "command": "check",
                "suite": suite.to_string(),
                "passed": passed,
                "criteria": reports.iter().map(|r| json!({
                    "id": r.id,
                    "name": r.name,
                    "passed": r.passed,
                    "summary": r.summary,
                    "metrics": r.metrics.iter().map(|(k, v)| (k.clone(), json!(v))).collect::<Map<_, _>>(),
                    "failures": r.failures,
                })).collect::<Vec<_>>(),
            });
            let doc = Doc::Table { json, header: vec!["id".into(), "name".into(), "passed".into(), "summary".into()], rows };
            return Ok(Outcome { doc, code: if passed { 0 } else { 1 } });
        }
    };
    Ok(Outcome { doc, code: 0 })
}

#[allow(clippy::too_many_arguments)]
fn run_div(
    kind: DivergenceKind,
    p: CauchyParam,
    q: CauchyParam,
    method: Method,
    tol: f64,
    seed: u64,
    samples: usize,
    max_terms: usize,
) -> Result<Doc, Error> {
    let mut rec = record(vec![
        ("command", json!("div")),
        ("kind", json!(kind.to_string())),
        ("method", json!(method_name(method))),
        ("p", json!([p.location(), p.scale()])),
        ("q", json!([q.location(), q.scale()])),
        ("chi", json!(chi(&p, &q))),
    ]);
    let (ps, qs) = (DensitySpec::Cauchy(p), DensitySpec::Cauchy(q));
    match method {
        Method::Closed => {
            rec.insert("value".into(), json!(divergence(&kind, &p, &q)?));
        }
        Method::Quad => {
            let value = match kind {
                DivergenceKind::Bhattacharyya => quad_bhattacharyya(&ps, &qs, tol)?,
                DivergenceKind::Chernoff => {
                    let (a, v) = chernoff_optimizer(&p, &q)?;
                    rec.insert("a_star".into(), json!(a));
                    v
                }
                DivergenceKind::QDiv2 => quad_q_divergence_2(&p, &q, tol)?,
                _ => quad_f_divergence(&GeneratorSpec::for_kind(&kind)?, &ps, &qs, tol)?,
            };
            rec.insert("value".into(), json!(value));
            rec.insert("tol".into(), json!(tol));
        }
        Method::Mc => {
            let (v, se) = mc_f_divergence(&GeneratorSpec::for_kind(&kind)?, &ps, &qs, samples, seed)?;
            rec.insert("value".into(), json!(v));
            rec.insert("stderr".into(), json!(se));
            rec.insert("samples".into(), json!(samples));
            rec.insert("seed".into(), json!(seed));
        }
        Method::Series => {
            let r = taylor_f_divergence(&kind, &p, &q, tol, max_terms)?;
            rec.insert("value".into(), json!(r.value));
            rec.insert("terms_used".into(), json!(r.terms_used));
            rec.insert("verdict".into(), json!(format!("{:?}", r.verdict).to_lowercase()));
            rec.insert("gate".into(), json!(r.gate));
        }
    }
    Ok(Doc::Record(rec))
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(csv_cell).collect::<Vec<_>>().join(";"),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn emit(doc: &Doc, format: Format, out: Option<&PathBuf>) -> io::Result<()> {
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    match (doc, format) {
        (Doc::Record(map), Format::Json) => writeln!(sink, "{}", serde_json::to_string_pretty(map)?)?,
        (Doc::Table { json, .. }, Format::Json) => writeln!(sink, "{}", serde_json::to_string_pretty(json)?)?,
        (Doc::Record(map), Format::Csv) => {
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(map.keys())?;
            w.write_record(map.values().map(csv_cell))?;
            w.flush()?;
        }
        (Doc::Table { header, rows, .. }, Format::Csv) => {
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(header)?;
            for row in rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
