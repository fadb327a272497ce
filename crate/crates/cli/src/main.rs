//! `cochar`: Hilbert series, multiplicity tables, catalog verification and
//! asymptotic checks for block triangular matrix algebras.
//!
//! Exit codes: 0 success, 1 mismatch or failed check, 2 usage or input error,
//! 3 internal assertion, 4 interpolation window too small.

mod render;

use std::borrow::Cow;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cochar_core::acceptance::{self, Tier, CRITERIA};
use cochar_core::asymptotics::{
    asym_ratio_check, decimal, default_tolerance, default_window, fit_2var, fit_pipeline_2var, probe_points, Fit,
    Window,
};
use cochar_core::catalog::{compare_entry, Algebra, Catalog, ClosedFormEntry, LeadingForm};
use cochar_core::hilbert::hilbert_rpq;
use cochar_core::multiplicity::extract;
use cochar_core::partitions::{partitions_up_to, Partition};
use cochar_core::schur::schur_poly;
use cochar_core::series::{Rational, SparsePoly};
use cochar_core::Error;

use render::{monomial_row, multiplicity_row, Format, Meta, Row, Table};

#[derive(Parser, Debug)]
#[command(name = "cochar", version, about = "Exact cocharacter computations for block triangular matrix algebras")]
struct Cli {
    /// Closed-form catalog to use instead of the bundled one.
    #[arg(long, global = true, env = "COCHAR_CATALOG")]
    catalog: Option<PathBuf>,

    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct AlgebraArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    q: u32,
    /// Number of variables.
    #[arg(long)]
    d: usize,
    /// Total degree cap.
    #[arg(long)]
    deg: u32,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Interpolate,
    Ratio,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients of the Hilbert series of the relatively free algebra of R_{p,q}.
    Hilbert(AlgebraArgs),
    /// Cocharacter multiplicities m_lambda for |lambda| <= deg.
    Table(AlgebraArgs),
    /// Compare a catalog closed form with the pipeline.
    Verify {
        #[arg(long)]
        entry: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        deg: u32,
    },
    /// Recover or test the leading asymptotic form of a multiplicity polynomial.
    Asym {
        /// Catalog entry id, or the id of one of its leading forms.
        #[arg(long, conflicts_with = "pipeline", required_unless_present = "pipeline")]
        entry: Option<String>,
        /// Algebra `p,q` computed from scratch (interpolate mode only).
        #[arg(long, value_parser = parse_pq)]
        pipeline: Option<(u32, u32)>,
        #[arg(long, value_enum, default_value = "interpolate")]
        mode: Mode,
        /// Probe steps for ratio mode.
        #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
        points: Vec<u32>,
        /// Leading form id for ratio mode (default: every form of the entry).
        #[arg(long)]
        form: Option<String>,
        /// Largest allowed |ratio - 1| at the last point, as `num/den`.
        #[arg(long)]
        tolerance: Option<Rational>,
        #[arg(long, requires_all = ["n2_start", "deg1", "deg2"])]
        n1_start: Option<u32>,
        #[arg(long)]
        n2_start: Option<u32>,
        #[arg(long)]
        deg1: Option<u32>,
        #[arg(long)]
        deg2: Option<u32>,
    },
    /// Print the Schur polynomial S_lambda(t_1..t_d).
    Schur {
        /// Partition as a comma list, e.g. 2,1.
        #[arg(long)]
        lambda: Partition,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run the acceptance criteria (fast tier unless --all).
    Selftest {
        #[arg(long)]
        all: bool,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        criterion: Vec<u32>,
    },
}

fn parse_pq(s: &str) -> Result<(u32, u32), String> {
    let (p, q) = s.split_once(',').ok_or("expected p,q")?;
    let p = p.trim().parse().map_err(|e| format!("bad p: {e}"))?;
    let q = q.trim().parse().map_err(|e| format!("bad q: {e}"))?;
    Ok((p, q))
}

/// A failure with its exit code.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::WindowTooSmall(_) => 4,
            Error::SpaceMismatch(..) | Error::Divergent | Error::NotAPartition(_) | Error::NotSymmetric(_) => 3,
            _ => 2,
        };
        Failure(code, e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(2, msg.into())
}

struct Context {
    catalog: Option<PathBuf>,
}

impl Context {
    fn catalog(&self) -> Result<Cow<'static, Catalog>, Failure> {
        match &self.catalog {
            Some(path) => Ok(Cow::Owned(Catalog::load(path)?)),
            None => Ok(Cow::Borrowed(Catalog::bundled())),
        }
    }
}

fn check_algebra(a: &AlgebraArgs) -> Result<(), Failure> {
    if a.p + a.q == 0 {
        return Err(usage("need p + q >= 1"));
    }
    if a.d == 0 {
        return Err(usage("need d >= 1"));
    }
    Ok(())
}

fn meta(ctx: &Context, p: Option<u32>, q: Option<u32>, d: usize, cap: u32) -> Result<Meta, Failure> {
    Ok(Meta {
        p,
        q,
        d,
        cap,
        version: env!("CARGO_PKG_VERSION").into(),
        catalog_checksum: ctx.catalog()?.checksum().to_string(),
    })
}

/// Rows by total degree, then decreasing lex.
fn monomial_rows(p: &SparsePoly) -> Vec<Row> {
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by(|x, y| x.0.total().cmp(&y.0.total()).then_with(|| y.0.cmp(x.0)));
    terms.into_iter().map(|(e, c)| monomial_row(e, c)).collect()
}

fn cmd_hilbert(ctx: &Context, a: &AlgebraArgs) -> Outcome {
    check_algebra(a)?;
    let h = hilbert_rpq(a.p, a.q, a.d, a.deg)?;
    let rows = monomial_rows(h.as_poly());
    let table = Table { meta: meta(ctx, Some(a.p), Some(a.q), a.d, a.deg)?, rows };
    print!("{}", table.render(a.format));
    Ok(0)
}

fn cmd_table(ctx: &Context, a: &AlgebraArgs) -> Outcome {
    check_algebra(a)?;
    let m = extract(&hilbert_rpq(a.p, a.q, a.d, a.deg)?, a.d)?;
    if !m.is_nonnegative_integral() {
        let (lambda, c) = m
            .iter()
            .find(|(_, c)| !c.is_integer() || *c < &Rational::from_integer(0.into()))
            .expect("some coefficient fails");
        return Err(Failure(3, format!("internal error: m_{lambda} = {c} is not a nonnegative integer")));
    }
    let rows = partitions_up_to(a.deg, a.d).iter().map(|l| multiplicity_row(l, &m.get(l))).collect();
    let table = Table { meta: meta(ctx, Some(a.p), Some(a.q), a.d, a.deg)?, rows };
    print!("{}", table.render(a.format));
    Ok(0)
}

fn cmd_verify(ctx: &Context, id: &str, d: usize, cap: u32) -> Outcome {
    let catalog = ctx.catalog()?;
    let r = compare_entry(&catalog, id, d, cap)?;
    match r.first_mismatch {
        None => {
            println!("{id} at d={d}: EQUAL up to degree {cap}");
            Ok(0)
        }
        Some(m) => {
            println!(
                "{id} at d={d}: MISMATCH at lambda={}: expected {}, got {}",
                m.partition, m.expected, m.got
            );
            Ok(1)
        }
    }
}

fn print_fit(fit: &Fit) {
    let w = fit.window;
    println!(
        "window: n1 in [{}, {}], n2 in [{}, {}], held-out checks passed",
        w.n1_start,
        w.n1_start + w.deg1,
        w.n2_start,
        w.n2_start + w.deg2
    );
    println!("leading form: {}", fit.leading);
}

/// Prints the catalog comparison and returns the exit code.
fn compare_forms(fit: &Fit, expected: Option<&LeadingForm>) -> u8 {
    match expected {
        None => {
            println!("catalog: no leading form to compare with");
            0
        }
        Some(lf) if lf.form() == fit.leading => {
            println!("catalog {}: MATCH", lf.id);
            0
        }
        Some(lf) => {
            println!("catalog {}: MISMATCH, catalog form is {}", lf.id, lf.form());
            1
        }
    }
}

fn two_var_form(entry: &ClosedFormEntry) -> Option<&LeadingForm> {
    entry.leading.iter().find(|l| l.nvars == 2)
}

fn pipeline_fit(p: u32, q: u32, window: Option<Window>) -> Result<Fit, Failure> {
    let window = window
        .or_else(|| default_window(p, q))
        .ok_or_else(|| usage(format!("no default window for ({p},{q}); pass --n1-start --n2-start --deg1 --deg2")))?;
    Ok(fit_pipeline_2var(p, q, window)?)
}

#[allow(clippy::too_many_arguments)]
fn cmd_asym(
    ctx: &Context,
    entry: Option<&str>,
    pipeline: Option<(u32, u32)>,
    mode: Mode,
    points: &[u32],
    form: Option<&str>,
    tolerance: Option<Rational>,
    window: Option<Window>,
) -> Outcome {
    let catalog = ctx.catalog()?;
    match (mode, entry, pipeline) {
        (Mode::Interpolate, None, Some((p, q))) => {
            let fit = pipeline_fit(p, q, window)?;
            println!("pipeline R_{{{p},{q}}} in two variables");
            print_fit(&fit);
            let expected = catalog
                .entries()
                .iter()
                .find(|e| e.algebra == Algebra::Rpq { p, q } && e.nvars == 2)
                .and_then(two_var_form);
            Ok(compare_forms(&fit, expected))
        }
        (Mode::Interpolate, Some(id), None) => {
            let e = catalog.get(id)?;
            let fit = if e.has_closed_form() {
                if window.is_some() {
                    return Err(usage("window flags apply to --pipeline only"));
                }
                println!("entry {id}: exact fit of the closed form");
                fit_2var(e)?
            } else {
                let Algebra::Rpq { p, q } = e.algebra else {
                    return Err(usage(format!("entry `{id}` has nothing to interpolate")));
                };
                println!("entry {id} has no closed form; fitting pipeline data for R_{{{p},{q}}}");
                pipeline_fit(p, q, window)?
            };
            print_fit(&fit);
            Ok(compare_forms(&fit, two_var_form(e)))
        }
        (Mode::Ratio, Some(id), None) => {
            let forms: Vec<(&ClosedFormEntry, &LeadingForm)> = match catalog.get(id) {
                Ok(e) => e.leading.iter().filter(|l| form.is_none_or(|f| f == l.id)).map(|l| (e, l)).collect(),
                Err(_) => vec![catalog.leading_form(id)?],
            };
            if forms.is_empty() {
                return Err(usage(format!("entry `{id}` has no matching leading form")));
            }
            let tolerance = tolerance.unwrap_or_else(default_tolerance);
            let mut code = 0;
            for (e, lf) in forms {
                let report = asym_ratio_check(e, lf, &probe_points(lf, points), &tolerance)?;
                println!("{} / {} (tolerance {}):", report.id, report.form_id, report.tolerance);
                println!("  {:<16} {:>12} {:>28}", "point", "ratio", "exact ratio");
                for row in &report.rows {
                    let point = row.point.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
                    println!("  {:<16} {:>12} {:>28}", point, decimal(&row.ratio, 6), truncate(&row.ratio.to_string(), 28));
                }
                println!("  {}", if report.pass { "PASS" } else { "FAIL" });
                if !report.pass {
                    code = 1;
                }
            }
            Ok(code)
        }
        (Mode::Ratio, None, Some(_)) => Err(usage("ratio mode needs --entry")),
        _ => Err(usage("pass exactly one of --entry and --pipeline")),
    }
}

fn truncate(s: &str, width: usize) -> String {
    if s.len() <= width {
        s.to_string()
    } else {
        format!("{}...", &s[..width - 3])
    }
}

fn cmd_schur(ctx: &Context, lambda: &Partition, d: usize, format: Format) -> Outcome {
    if d == 0 {
        return Err(usage("need d >= 1"));
    }
    let rows = monomial_rows(&schur_poly(lambda, d));
    let table = Table { meta: meta(ctx, None, None, d, lambda.size())?, rows };
    print!("{}", table.render(format));
    Ok(0)
}

fn cmd_selftest(all: bool, only: &[u32]) -> Outcome {
    let mut selected = Vec::new();
    for c in &CRITERIA {
        let wanted = if only.is_empty() { all || c.tier == Tier::Fast } else { only.contains(&c.number) };
        if wanted {
            selected.push(c);
        }
    }
    if let Some(n) = only.iter().find(|n| acceptance::criterion(**n).is_none()) {
        return Err(usage(format!("no criterion {n}")));
    }
    let mut passed = 0;
    for c in &selected {
        let o = c.run();
        println!("{}", o.line());
        passed += usize::from(o.passed());
    }
    println!("{passed}/{} criteria passed", selected.len());
    Ok(if passed == selected.len() { 0 } else { 1 })
}

fn run(cli: Cli) -> Outcome {
    if let Some(n) = cli.threads {
        set_threads(n)?;
    }
    let ctx = Context { catalog: cli.catalog };
    match cli.command {
        Command::Hilbert(a) => cmd_hilbert(&ctx, &a),
        Command::Table(a) => cmd_table(&ctx, &a),
        Command::Verify { entry, d, deg } => cmd_verify(&ctx, &entry, d, deg),
        Command::Asym { entry, pipeline, mode, points, form, tolerance, n1_start, n2_start, deg1, deg2 } => {
            let window = match (n1_start, n2_start, deg1, deg2) {
                (Some(n1_start), Some(n2_start), Some(deg1), Some(deg2)) => {
                    Some(Window { n1_start, n2_start, deg1, deg2 })
                }
                (None, None, None, None) => None,
                _ => return Err(usage("window needs all of --n1-start --n2-start --deg1 --deg2")),
            };
            cmd_asym(&ctx, entry.as_deref(), pipeline, mode, &points, form.as_deref(), tolerance, window)
        }
        Command::Schur { lambda, d, format } => cmd_schur(&ctx, &lambda, d, format),
        Command::Selftest { all, criterion } => cmd_selftest(all, &criterion),
    }
}

#[cfg(feature = "parallel")]
fn set_threads(n: usize) -> Result<(), Failure> {
    if n == 0 {
        return Err(usage("--threads must be positive"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure(3, format!("thread pool: {e}")))
}

#[cfg(not(feature = "parallel"))]
fn set_threads(n: usize) -> Result<(), Failure> {
    if n == 0 {
        return Err(usage("--threads must be positive"));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("cochar: {msg}");
            ExitCode::from(code)
        }
    }
}
