//! `onc-kesten`: command-line front end for the exact engines.
//!
//! Exit codes: 0 on success, 1 when two routes or an oracle disagree, 2 on usage errors.

use std::fmt::Write as _;
use std::io::{BufWriter, Write as _};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use onc_kesten::arith::{
    format_rational, int, parse_rational, rational_to_f64, MultiPoly, Rational,
};
use onc_kesten::error::Error;
use onc_kesten::fock::{poisson_moment_operator, position_moment, CltExpansion, FockEngine};
use onc_kesten::kesten::{KestenMeasure, MAX_QUADRATURE_ORDER};
use onc_kesten::moments::{
    mixed_moment_brownian, poisson_moment, r_by_closed_form, MomentReport, Route,
};
use onc_kesten::partition::{
    disorder_order_counts, enumerate_ordered, nesting_forest, IntervalSignature, Limits,
    OrderFilter,
};
use onc_kesten::verify::{verify, SCHEMA};

const QUADRATURE_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "onc-kesten",
    version,
    about = "Exact moments of the (p,q)-interpolated Brownian motion and Kesten laws"
)]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    output: Option<Output>,

    /// Lift the enumeration size guards.
    #[arg(long, global = true)]
    override_limits: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stream ordered non-crossing partitions of [n] as JSON lines.
    ///
    /// CSV columns: blocks, e, eprime, weight, inner, outer, covered.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Pair partitions only.
        #[arg(long)]
        pairs: bool,
        /// Only partitions where 1 and n share a block.
        #[arg(long)]
        covered: bool,
        /// Only partitions with this many outer blocks.
        #[arg(long)]
        outer: Option<usize>,
    },
    /// r_n by one or all routes.
    ///
    /// CSV columns: route, value.
    Moments {
        #[arg(long)]
        n: usize,
        /// all, enum, rec, closed, jacobi or delaney.
        #[arg(long, default_value = "all")]
        route: String,
        #[arg(long, requires = "q", allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, requires = "p", allow_hyphen_values = true)]
        q: Option<String>,
    },
    /// Run the cross-verification suite.
    Verify {
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Density of the Kesten law on a grid, followed by its atoms.
    ///
    /// CSV columns: x, density; then a blank line and atom_position, atom_mass.
    Density {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        /// Number of grid intervals across the support.
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
    /// Quadrature moments against the exact ones.
    ///
    /// CSV columns: n, quadrature, exact, abs_error.
    Quadcheck {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
    },
    /// Mixed moment of a signature by the operator and partition routes.
    Brownian {
        /// Space-separated interval names, e.g. "f f g g f f".
        #[arg(long)]
        signature: String,
        /// Interval definitions, e.g. "g=[0,1],f=[1,2]".
        #[arg(long)]
        intervals: String,
    },
    /// n-th moment of the Poisson process at time T.
    Poisson {
        #[arg(long)]
        n: usize,
    },
    /// Exact moment of the normalized sum over N sites and its distance to the limit.
    Clt {
        #[arg(long = "N")]
        n_sites: usize,
        #[arg(long)]
        moment: usize,
        #[arg(long, requires = "q", allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, requires = "p", allow_hyphen_values = true)]
        q: Option<String>,
    },
}

/// Printed report plus whether every comparison agreed.
struct Report {
    stdout: String,
    mismatch: Option<String>,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Report {
            stdout,
            mismatch: None,
        }
    }
}

fn json_text(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn parse_param(name: &str, text: &str) -> anyhow::Result<Rational> {
    let value = parse_rational(text).with_context(|| format!("--{name}"))?;
    if value < int(0) {
        bail!("--{name} must be nonnegative, got {text}");
    }
    Ok(value)
}

fn parse_pq(
    p: &Option<String>,
    q: &Option<String>,
) -> anyhow::Result<Option<(Rational, Rational)>> {
    match (p, q) {
        (Some(p), Some(q)) => Ok(Some((parse_param("p", p)?, parse_param("q", q)?))),
        _ => Ok(None),
    }
}

fn unsupported(command: &str, output: Output) -> anyhow::Error {
    anyhow!("{command} does not support --output {output:?}")
}

fn enumerate(
    n: usize,
    filter: OrderFilter,
    limits: &Limits,
    output: Output,
) -> anyhow::Result<Report> {
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let partitions = enumerate_ordered(n, filter, limits)?;
    if output == Output::Csv {
        writeln!(out, "blocks,e,eprime,weight,inner,outer,covered")?;
    }
    for partition in partitions {
        let (e, eprime) = disorder_order_counts(&partition)?;
        let forest = nesting_forest(partition.base())?;
        let weight = MultiPoly::pq_monomial(e, eprime);
        let blocks = partition.to_string();
        let (inner, outer, covered) = (
            forest.inner_count(),
            forest.outer_count(),
            partition.base().is_covered(),
        );
        match output {
            Output::Json => {
                let line = json!({
                    "blocks": blocks, "e": e, "eprime": eprime, "weight": weight.to_string(),
                    "inner": inner, "outer": outer, "covered": covered,
                });
                writeln!(out, "{line}")?;
            }
            Output::Csv => writeln!(
                out,
                "\"{blocks}\",{e},{eprime},{weight},{inner},{outer},{covered}"
            )?,
            Output::Text => writeln!(out, "{blocks}  e={e} e'={eprime} w={weight}")?,
        }
    }
    out.flush()?;
    Ok(Report::ok(String::new()))
}

fn moments(
    n: usize,
    route: &str,
    pq: Option<(Rational, Rational)>,
    limits: &Limits,
    output: Output,
) -> anyhow::Result<Report> {
    let routes: Vec<Route> = if route == "all" {
        Route::ALL.to_vec()
    } else {
        vec![route.parse()?]
    };
    let report = MomentReport::compute(n, &routes, limits)?;
    let shown = match &pq {
        Some((p, q)) => report.evaluated(p, q),
        None => report.clone(),
    };
    let mismatch = (!report.agreement).then(|| {
        let mut values = report.routes.iter();
        let (first_name, first) = values.next().expect("at least one route");
        let (other_name, other) = values
            .find(|(_, v)| *v != first)
            .expect("a differing route");
        format!("r_{n}: {first_name} = {first}\n      {other_name} = {other}")
    });
    let stdout = match output {
        Output::Json => {
            let routes: serde_json::Map<String, Value> = shown
                .routes
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.to_string())))
                .collect();
            let mut body = json!({
                "schema": SCHEMA, "n": n, "value": shown.value.to_string(),
                "routes": routes, "agreement": report.agreement,
            });
            if let Some((p, q)) = &pq {
                body["p"] = Value::String(format_rational(p));
                body["q"] = Value::String(format_rational(q));
            }
            json_text(&body)
        }
        Output::Csv => {
            let mut s = String::from("route,value\n");
            for (k, v) in &shown.routes {
                writeln!(s, "{k},{v}")?;
            }
            s
        }
        Output::Text => {
            let mut s = String::new();
            for (k, v) in &shown.routes {
                writeln!(s, "{k:>8}: {v}")?;
            }
            s
        }
    };
    Ok(Report { stdout, mismatch })
}

fn run_verify(order: usize, limits: &Limits, output: Output) -> anyhow::Result<Report> {
    let report = verify(order, limits)?;
    let mismatch = report
        .first_failure()
        .map(|c| format!("{}: {}", c.name, c.detail));
    let stdout = match output {
        Output::Json => json_text(&serde_json::to_value(&report)?),
        Output::Text => {
            let mut s = String::new();
            for c in &report.checks {
                let tag = if c.passed() { "PASS" } else { "FAIL" };
                writeln!(s, "{tag} {}: {}", c.name, c.detail)?;
            }
            for e in &report.paper_errata {
                writeln!(
                    s,
                    "ERRATUM {}: printed {}, computed {}",
                    e.item, e.printed, e.computed
                )?;
            }
            s
        }
        Output::Csv => return Err(unsupported("verify", output)),
    };
    Ok(Report { stdout, mismatch })
}

fn measure(p: &Rational, q: &Rational) -> anyhow::Result<KestenMeasure> {
    let (pf, qf) = (rational_to_f64(p), rational_to_f64(q));
    if pf + qf == 0.0 {
        Ok(KestenMeasure::boolean_limit())
    } else {
        Ok(KestenMeasure::new(pf, qf)?)
    }
}

fn density(p: &Rational, q: &Rational, grid: usize, output: Output) -> anyhow::Result<Report> {
    if grid == 0 {
        bail!("--grid must be positive");
    }
    let m = measure(p, q)?;
    let points: Vec<(f64, f64)> = if m.is_boolean_limit() {
        Vec::new()
    } else {
        (0..=grid)
            .map(|i| {
                let x = m.edge * (2.0 * i as f64 / grid as f64 - 1.0);
                (x, m.density(x))
            })
            .collect()
    };
    let stdout = match output {
        Output::Csv | Output::Text => {
            let mut s = String::from("x,density\n");
            for (x, f) in &points {
                writeln!(s, "{x:.12e},{f:.12e}")?;
            }
            s.push_str("\natom_position,atom_mass\n");
            for a in &m.atoms {
                writeln!(s, "{:.12e},{:.12e}", a.position, a.mass)?;
            }
            s
        }
        Output::Json => {
            let grid: Vec<Value> = points
                .iter()
                .map(|(x, f)| json!({ "x": x, "density": f }))
                .collect();
            json_text(&json!({
                "schema": SCHEMA, "p": format_rational(p), "q": format_rational(q),
                "edge": m.edge, "grid": grid, "atoms": m.atoms,
            }))
        }
    };
    Ok(Report::ok(stdout))
}

fn quadcheck(p: &Rational, q: &Rational, nmax: usize, output: Output) -> anyhow::Result<Report> {
    if nmax > MAX_QUADRATURE_ORDER {
        bail!("--nmax is at most {MAX_QUADRATURE_ORDER}");
    }
    let m = measure(p, q)?;
    let exact_r = r_by_closed_form(nmax / 2)?;
    let mut rows = Vec::new();
    let mut worst: Option<(usize, f64)> = None;
    for n in 0..=nmax {
        let exact = if n % 2 == 0 {
            exact_r[n / 2].eval(p, q, &int(0))
        } else {
            int(0)
        };
        let quad = if m.is_boolean_limit() {
            m.atoms
                .iter()
                .map(|a| a.mass * a.position.powi(n as i32))
                .sum()
        } else {
            m.quadrature_moment(n, 1e-12)?
        };
        let err = (quad - rational_to_f64(&exact)).abs();
        if (err.is_nan() || err > QUADRATURE_TOL) && worst.is_none_or(|(_, w)| err > w) {
            worst = Some((n, err));
        }
        rows.push((n, quad, exact, err));
    }
    let mismatch = worst
        .map(|(n, err)| format!("moment {n}: quadrature error {err:e} exceeds {QUADRATURE_TOL:e}"));
    let stdout = match output {
        Output::Json => {
            let table: Vec<Value> = rows
                .iter()
                .map(|(n, quad, exact, err)| {
                    json!({ "n": n, "quadrature": quad, "exact": format_rational(exact), "abs_error": err })
                })
                .collect();
            json_text(&json!({
                "schema": SCHEMA, "p": format_rational(p), "q": format_rational(q),
                "tolerance": QUADRATURE_TOL, "rows": table, "passed": mismatch.is_none(),
            }))
        }
        Output::Csv | Output::Text => {
            let mut s = String::from("n,quadrature,exact,abs_error\n");
            for (n, quad, exact, err) in &rows {
                writeln!(s, "{n},{quad:.17e},{},{err:.3e}", format_rational(exact))?;
            }
            s
        }
    };
    Ok(Report { stdout, mismatch })
}

fn brownian(
    signature: &str,
    intervals: &str,
    limits: &Limits,
    output: Output,
) -> anyhow::Result<Report> {
    let (family, sig) = IntervalSignature::parse(signature, intervals)?;
    let operator = position_moment(&FockEngine::new(&family), &sig, limits)?;
    let combinatorial = mixed_moment_brownian(&sig, limits)?;
    let equal = operator == combinatorial;
    let mismatch =
        (!equal).then(|| format!("operator      = {operator}\ncombinatorial = {combinatorial}"));
    let stdout = match output {
        Output::Json => json_text(&json!({
            "schema": SCHEMA, "signature": signature, "intervals": intervals,
            "operator_route": operator.to_string(), "combinatorial_route": combinatorial.to_string(),
            "equal": equal,
        })),
        Output::Text => format!("{operator}\n"),
        Output::Csv => return Err(unsupported("brownian", output)),
    };
    Ok(Report { stdout, mismatch })
}

fn poisson(n: usize, limits: &Limits, output: Output) -> anyhow::Result<Report> {
    let operator = poisson_moment_operator(n, limits)?;
    let combinatorial = poisson_moment(n, limits)?;
    let equal = operator == combinatorial;
    let mismatch =
        (!equal).then(|| format!("operator      = {operator}\ncombinatorial = {combinatorial}"));
    let stdout = match output {
        Output::Text => format!("{combinatorial}\n"),
        Output::Json => json_text(&json!({
            "schema": SCHEMA, "n": n, "operator_route": operator.to_string(),
            "combinatorial_route": combinatorial.to_string(), "equal": equal,
        })),
        Output::Csv => return Err(unsupported("poisson", output)),
    };
    Ok(Report { stdout, mismatch })
}

fn clt(
    n_sites: usize,
    moment: usize,
    pq: Option<(Rational, Rational)>,
    limits: &Limits,
    output: Output,
) -> anyhow::Result<Report> {
    if n_sites == 0 {
        bail!("--N must be positive");
    }
    limits.check(moment, false)?;
    let expansion = CltExpansion::new(moment)?;
    let limit = expansion.limit()?;
    let closed = if moment.is_multiple_of(2) {
        r_by_closed_form(moment / 2)?.swap_remove(moment / 2)
    } else {
        MultiPoly::zero()
    };
    let mismatch =
        (limit != closed).then(|| format!("N -> oo limit = {limit}\nclosed form   = {closed}"));
    let value = expansion.at(n_sites);
    let diff = &value - &limit;
    let mut body = json!({
        "schema": SCHEMA, "N": n_sites, "moment": moment, "patterns": expansion.pattern_count,
        "value": value.to_string(), "limit": limit.to_string(), "difference": diff.to_string(),
    });
    if let Some((p, q)) = &pq {
        let v = value.eval(p, q, &int(0));
        let l = limit.eval(p, q, &int(0));
        let difference = &v - &l;
        let distance = if difference < int(0) {
            -difference.clone()
        } else {
            difference.clone()
        };
        body["p"] = Value::String(format_rational(p));
        body["q"] = Value::String(format_rational(q));
        body["value"] = Value::String(format_rational(&v));
        body["limit"] = Value::String(format_rational(&l));
        body["difference"] = Value::String(format_rational(&difference));
        body["distance"] = Value::String(format_rational(&distance));
        body["distance_f64"] = json!(rational_to_f64(&distance));
        body["N_times_distance"] =
            Value::String(format_rational(&(distance * int(n_sites as i64))));
    }
    let stdout = match output {
        Output::Json => json_text(&body),
        Output::Text => {
            let field = |k: &str| body[k].as_str().unwrap_or_default().to_string();
            let mut s = format!("value: {}\nlimit: {}\n", field("value"), field("limit"));
            if pq.is_some() {
                writeln!(
                    s,
                    "distance: {} ({:e})",
                    field("distance"),
                    body["distance_f64"].as_f64().unwrap_or(f64::NAN)
                )?;
            }
            s
        }
        Output::Csv => return Err(unsupported("clt", output)),
    };
    Ok(Report { stdout, mismatch })
}

fn run(cli: Cli) -> anyhow::Result<Report> {
    let limits = if cli.override_limits {
        Limits::unbounded()
    } else {
        Limits::default()
    };
    let out = |default| cli.output.unwrap_or(default);
    match &cli.command {
        Command::Enumerate {
            n,
            pairs,
            covered,
            outer,
        } => {
            let filter = OrderFilter {
                pair_only: *pairs,
                covered_only: *covered,
                outer_blocks: *outer,
            };
            enumerate(*n, filter, &limits, out(Output::Json))
        }
        Command::Moments { n, route, p, q } => {
            moments(*n, route, parse_pq(p, q)?, &limits, out(Output::Json))
        }
        Command::Verify { order } => run_verify(*order, &limits, out(Output::Json)),
        Command::Density { p, q, grid } => density(
            &parse_param("p", p)?,
            &parse_param("q", q)?,
            *grid,
            out(Output::Csv),
        ),
        Command::Quadcheck { p, q, nmax } => quadcheck(
            &parse_param("p", p)?,
            &parse_param("q", q)?,
            *nmax,
            out(Output::Json),
        ),
        Command::Brownian {
            signature,
            intervals,
        } => brownian(signature, intervals, &limits, out(Output::Json)),
        Command::Poisson { n } => poisson(*n, &limits, out(Output::Text)),
        Command::Clt {
            n_sites,
            moment,
            p,
            q,
        } => clt(
            *n_sites,
            *moment,
            parse_pq(p, q)?,
            &limits,
            out(Output::Json),
        ),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Mismatch { .. }) => 1,
        _ => 2,
    }
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
        Ok(report) => {
            print!("{}", report.stdout);
            match report.mismatch {
                Some(diff) => {
                    eprintln!("mismatch:\n{diff}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
