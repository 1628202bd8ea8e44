//! `gramtri`: generate, verify and export GKP triangles.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gramtri::enumerate::{
    cadet_leaf_census, census_components, census_vleaves, r_excedance_census, set_partition_census,
    stirling_descent_census, StructureCensus, DEFAULT_BUDGET,
};
use gramtri::export::{render, Format};
use gramtri::fps::{gen_series, solve_ode, tree_function, OdeSystem};
use gramtri::grammar::{hao_seed, v_var};
use gramtri::parse::{parse_grammar, parse_poly, parse_rational, parse_rational_list};
use gramtri::suites::{run_all, run_suite, suite_names, SuiteOptions, SuiteReport};
use gramtri::{hao_grammar, Error, FamilyTag, Grammar, LaurentPoly, TriangleParams};

const FAMILY_HELP: &str = "\
Named families and their parameter tuples (a0,a1,a2,b0,b1,b2) for
T(n,k) = (a2 n + a1 k + a0) T(n-1,k) + (b2 n + b1 k + b0) T(n-1,k-1):

  whitney --m M --r R    (R, M, 0, M-R, -M, M)
  r-eulerian --r R       (R, 1, 0, 1-R, -1, 1); rows n <= R are n!, 0, ..., 0
  second-order --r R     (1, 1, 0, 1-R, -1, R)
  stirling2              (0, 1, 0, 1, 0, 0)

Any other triangle: --params a0,a1,a2,b0,b1,b2 (rationals allowed).";

/// Largest row index `triangle` will build.
const ROW_CAP: usize = 2000;

#[derive(Parser)]
#[command(name = "gramtri", version, about = "Exact GKP triangles via grammars, closed forms and series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a triangle.
    #[command(after_help = FAMILY_HELP)]
    Triangle(TriangleCmd),
    /// Run a verification suite (or `all`, or `list` to show suites).
    #[command(after_help = FAMILY_HELP)]
    Verify(VerifyCmd),
    /// Expand D^n(seed) for a grammar.
    Grammar(GrammarCmd),
    /// Print truncated power series.
    Series(SeriesCmd),
    /// Brute-force censuses of combinatorial structures.
    #[command(after_help = FAMILY_HELP)]
    Oracle(OracleCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Whitney,
    REulerian,
    SecondOrder,
    Stirling2,
}

#[derive(Args, Default)]
struct FamilyArgs {
    /// Named family; see the table below.
    #[arg(long, value_enum, conflicts_with = "params")]
    family: Option<FamilyName>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    r: Option<i64>,
    /// Raw parameters a0,a1,a2,b0,b1,b2.
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
}

impl FamilyArgs {
    fn tag(&self) -> Result<Option<FamilyTag>, Failure> {
        let need = |x: Option<i64>, flag: &str, fam: &str| {
            x.ok_or_else(|| Failure::usage(format!("--family {fam} needs --{flag}")))
        };
        let tag = match (self.family, &self.params) {
            (Some(FamilyName::Whitney), _) => FamilyTag::WhitneyEulerian {
                m: need(self.m, "m", "whitney")?,
                r: need(self.r, "r", "whitney")?,
            },
            (Some(FamilyName::REulerian), _) => FamilyTag::REulerian {
                r: need(self.r, "r", "r-eulerian")?,
            },
            (Some(FamilyName::SecondOrder), _) => FamilyTag::SecondOrderEulerian {
                r: need(self.r, "r", "second-order")?,
            },
            (Some(FamilyName::Stirling2), _) => FamilyTag::Stirling2,
            (None, Some(p)) => FamilyTag::gkp(parse_params(p)?),
            (None, None) => return Ok(None),
        };
        Ok(Some(tag))
    }

    /// Like [`Self::tag`], but a named family with its indices left out
    /// stands for a small sweep: whitney m in 1..=3, 0 <= r <= m;
    /// r-eulerian r in 0..=3; second-order r in 1..=3.
    fn sweep(&self) -> Result<Vec<FamilyTag>, Failure> {
        let ms: Vec<i64> = self.m.map_or_else(|| (1..=3).collect(), |m| vec![m]);
        let tags = match self.family {
            Some(FamilyName::Whitney) if self.r.is_none() => ms
                .into_iter()
                .flat_map(|m| (0..=m).map(move |r| FamilyTag::WhitneyEulerian { m, r }))
                .collect(),
            Some(FamilyName::Whitney) if self.m.is_none() => {
                let r = self.r.expect("checked above");
                ms.into_iter()
                    .filter(|&m| m >= r)
                    .map(|m| FamilyTag::WhitneyEulerian { m, r })
                    .collect()
            }
            Some(FamilyName::REulerian) if self.r.is_none() => {
                (0..=3).map(|r| FamilyTag::REulerian { r }).collect()
            }
            Some(FamilyName::SecondOrder) if self.r.is_none() => {
                (1..=3).map(|r| FamilyTag::SecondOrderEulerian { r }).collect()
            }
            _ => self.tag()?.into_iter().collect(),
        };
        Ok(tags)
    }

    fn require(&self) -> Result<FamilyTag, Failure> {
        self.tag()?
            .ok_or_else(|| Failure::usage("give --family or --params".into()))
    }
}

fn parse_params(src: &str) -> Result<TriangleParams, Failure> {
    let v = parse_rational_list(src, 6).map_err(|e| Failure::usage(format!("--params: {e}")))?;
    Ok(TriangleParams::new(v.try_into().expect("six values")))
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum ReportFormat {
    #[default]
    Plain,
    Json,
}

/// Accepts `1000000`, `1e6` or `2.5e3`.
fn parse_budget(s: &str) -> Result<u64, String> {
    let bad = || format!("`{s}` is not a budget (try 1000000 or 1e6)");
    let s = s.trim().replace('_', "");
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let (mantissa, exp) = s.split_once(['e', 'E']).ok_or_else(bad)?;
    let exp: u32 = exp.parse().map_err(|_| bad())?;
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: u64 = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let shift = exp.checked_sub(frac.len() as u32).ok_or_else(bad)?;
    10u64
        .checked_pow(shift)
        .and_then(|p| digits.checked_mul(p))
        .ok_or_else(bad)
}

#[derive(Args)]
struct BudgetArg {
    /// Cap on enumerated objects.
    #[arg(long, env = "GRAMTRI_BUDGET", value_parser = parse_budget, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Args)]
struct TriangleCmd {
    #[command(flatten)]
    family: FamilyArgs,
    /// Last row index.
    #[arg(long)]
    rows: usize,
    #[arg(long, default_value = "plain")]
    format: Format,
}

#[derive(Args)]
struct VerifyCmd {
    /// Suite name, `all`, or `list`.
    suite: String,
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long)]
    order: Option<usize>,
    /// Largest |parameter| in parameter sweeps.
    #[arg(long)]
    range: Option<i64>,
    /// Evaluation points for second-order-egf (repeatable).
    #[arg(long)]
    y: Vec<String>,
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    budget: BudgetArg,
    #[arg(long, value_enum, default_value = "plain")]
    format: ReportFormat,
}

#[derive(Args)]
struct GrammarSource {
    /// File with one rule per line, e.g. `u -> u*v^3` (`-` for stdin).
    #[arg(long, conflicts_with = "hao")]
    rules: Option<PathBuf>,
    /// Hao grammar of the parameters a0,a1,a2,b0,b1,b2.
    #[arg(long, allow_hyphen_values = true)]
    hao: Option<String>,
}

impl GrammarSource {
    /// The grammar and, for Hao grammars, its canonical seed.
    fn load(&self) -> Result<(Grammar, Option<LaurentPoly>), Failure> {
        if let Some(path) = &self.rules {
            let text = if path.as_os_str() == "-" {
                std::io::read_to_string(std::io::stdin())
            } else {
                std::fs::read_to_string(path)
            }
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            let g = parse_grammar(&text).map_err(|e| Failure::usage(format!("{}:{e}", path.display())))?;
            return Ok((g, None));
        }
        if let Some(p) = &self.hao {
            let params = parse_params(p)?;
            let g = hao_grammar(&params)?;
            let seed = LaurentPoly::term(hao_seed(&params)?, gramtri::polyring::int(1));
            return Ok((g, Some(seed)));
        }
        Err(Failure::usage("give --rules FILE or --hao PARAMS".into()))
    }
}

#[derive(Args)]
struct GrammarCmd {
    #[command(flatten)]
    source: GrammarSource,
    /// Starting polynomial; defaults to the Hao seed.
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    #[arg(long)]
    n: usize,
    /// Print every D^i(seed), i = 0..=n.
    #[arg(long)]
    all: bool,
}

#[derive(Args)]
struct SeriesCmd {
    /// Tree function T(z) = z e^T(z).
    #[arg(long, conflicts_with_all = ["rules", "hao"])]
    tree_function: bool,
    #[command(flatten)]
    source: GrammarSource,
    /// Gen(x, t) of this polynomial; without it, the ODE solution for every letter.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long)]
    order: usize,
    /// Print n! [t^n] instead of [t^n].
    #[arg(long)]
    egf: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    StirlingDescents,
    RExcedances,
    SetPartitions,
    CadetLeaves,
    Components,
    /// v-leaf degrees of Hao-grammar histories (give --params).
    Vleaves,
}

#[derive(Args)]
struct OracleCmd {
    kind: OracleKind,
    #[arg(long)]
    n: usize,
    /// a0,a1,a2 for components.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// `--r` sets r for stirling-descents, r-excedances and cadet-leaves
    /// (default 2); with `--family` or `--params` row n is compared too.
    #[command(flatten)]
    diff: FamilyArgs,
    #[command(flatten)]
    budget: BudgetArg,
}

macro_rules! out {
    ($out:expr, $($arg:tt)*) => {
        std::fmt::Write::write_fmt($out, format_args!($($arg)*)).expect("writing to a String")
    };
}

macro_rules! outln {
    ($out:expr, $($arg:tt)*) => {{
        out!($out, $($arg)*);
        $out.push('\n');
    }};
}

// Outcome carrying the exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: String) -> Self {
        Failure { code: 2, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::BudgetExceeded { .. }) { 3 } else { 2 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    passed: bool,
    wall_time_ms: u128,
    suites: Vec<SuiteReport>,
}

impl RunReport {
    fn exit_code(&self) -> u8 {
        if self.suites.iter().any(SuiteReport::budget_exceeded) {
            3
        } else if self.passed {
            0
        } else {
            1
        }
    }

    fn render_plain(&self) -> String {
        let mut out = format!("$ {}\n", self.command);
        for s in &self.suites {
            out.push_str(&s.to_string());
        }
        let failed = self.suites.iter().filter(|s| !s.passed()).count();
        out.push_str(&format!(
            "{}: {} suites, {failed} failed, {} ms\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.suites.len(),
            self.wall_time_ms
        ));
        out
    }
}

fn cmd_triangle(c: &TriangleCmd, out: &mut String) -> Result<u8, Failure> {
    if c.rows > ROW_CAP {
        return Err(Failure::usage(format!("--rows {} exceeds the cap of {ROW_CAP}", c.rows)));
    }
    let t = c.family.require()?.build(c.rows)?;
    out!(out, "{}", render(&t, c.format));
    Ok(0)
}

fn cmd_verify(c: &VerifyCmd, out: &mut String) -> Result<u8, Failure> {
    if c.suite == "list" {
        for (name, about) in suite_names() {
            outln!(out, "{name:<20} {about}");
        }
        return Ok(0);
    }
    let y = c
        .y
        .iter()
        .map(|s| parse_rational(s).map_err(|e| Failure::usage(format!("--y {s}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let opts = SuiteOptions {
        max_n: c.max_n,
        order: c.order,
        range: c.range,
        budget: c.budget.budget,
        families: c.family.sweep()?,
        y: (!y.is_empty()).then_some(y),
    };
    let start = Instant::now();
    let suites = if c.suite == "all" {
        run_all(&opts)
    } else {
        vec![run_suite(&c.suite, &opts)?]
    };
    let report = RunReport {
        command: std::env::args().collect::<Vec<_>>().join(" "),
        passed: suites.iter().all(SuiteReport::passed),
        wall_time_ms: start.elapsed().as_millis(),
        suites,
    };
    match c.format {
        ReportFormat::Plain => out!(out, "{}", report.render_plain()),
        ReportFormat::Json => outln!(out, 
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        ),
    }
    Ok(report.exit_code())
}

fn cmd_grammar(c: &GrammarCmd, out: &mut String) -> Result<u8, Failure> {
    let (g, default_seed) = c.source.load()?;
    let seed = match (&c.seed, default_seed) {
        (Some(s), _) => parse_poly(s).map_err(|e| Failure::usage(format!("--seed: {e}")))?,
        (None, Some(s)) => s,
        (None, None) => return Err(Failure::usage("--seed is required with --rules".into())),
    };
    let steps = g.iterate(&seed, c.n)?;
    if c.all {
        for (i, p) in steps.iter().enumerate() {
            outln!(out, "D^{i}: {p}");
        }
    } else {
        outln!(out, "{}", steps.last().expect("at least the seed"));
    }
    Ok(0)
}

fn cmd_series(c: &SeriesCmd, out: &mut String) -> Result<u8, Failure> {
    if c.tree_function {
        let t = tree_function(c.order);
        if c.egf {
            outln!(out, "{}", join(t.egf_coeffs()));
        } else {
            outln!(out, "{t}");
        }
        return Ok(0);
    }
    let (g, _) = c.source.load()?;
    let show = |s: &gramtri::fps::TruncatedSeries<LaurentPoly>| {
        if c.egf {
            join(s.egf_coeffs())
        } else {
            s.to_string()
        }
    };
    if let Some(x) = &c.x {
        let x = parse_poly(x).map_err(|e| Failure::usage(format!("--x: {e}")))?;
        outln!(out, "{}", show(&gen_series(&g, &x, c.order)?));
    } else {
        for (x, s) in solve_ode(&OdeSystem::from_grammar(&g), c.order)? {
            outln!(out, "{x}: {}", show(&s));
        }
    }
    Ok(0)
}

fn join<T: std::fmt::Display>(xs: Vec<T>) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn cmd_oracle(c: &OracleCmd, out: &mut String) -> Result<u8, Failure> {
    let r = c.diff.r.unwrap_or(2);
    let as_usize = |r: i64| usize::try_from(r).map_err(|_| Failure::usage(format!("--r {r} must be nonnegative")));
    // bucket k of the census corresponds to column k - shift
    let (census, shift): (StructureCensus, i64) = match c.kind {
        OracleKind::StirlingDescents => (stirling_descent_census(c.n, as_usize(r)?, c.budget.budget)?, 0),
        OracleKind::RExcedances => (r_excedance_census(c.n, as_usize(r)?, c.budget.budget)?, 0),
        OracleKind::SetPartitions => (set_partition_census(c.n, c.budget.budget)?, 0),
        OracleKind::CadetLeaves => (cadet_leaf_census(c.n, r, c.budget.budget)?, 1),
        OracleKind::Components => {
            let a = c
                .a
                .as_deref()
                .ok_or_else(|| Failure::usage("components needs --a a0,a1,a2".into()))?;
            let a: Vec<i64> = a
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .ok()
                .filter(|v: &Vec<i64>| v.len() == 3)
                .ok_or_else(|| Failure::usage(format!("--a `{a}` is not three integers")))?;
            (census_components(a[0], a[1], a[2], c.n, c.budget.budget)?, 0)
        }
        OracleKind::Vleaves => {
            let params = c.diff.require()?.params();
            let g = hao_grammar(&params)?;
            let census = census_vleaves(&g, &hao_seed(&params)?, c.n, &v_var(), c.budget.budget)?;
            out!(out, "{census}");
            return Ok(0);
        }
    };
    out!(out, "{census}");
    let Some(fam) = c.diff.tag()? else {
        return Ok(0);
    };
    let t = fam.build(c.n)?;
    let row = t.row(c.n)?;
    let got = census.to_row(row.len(), shift);
    let fits = census.fits_row(row.len(), shift);
    outln!(out, "row {} of {}: {}", c.n, fam.name(), join(row.to_vec()));
    if fits && got == row {
        outln!(out, "match");
        Ok(0)
    } else {
        let k = (0..row.len()).find(|&k| got[k] != row[k]);
        match k {
            Some(k) => outln!(out, "mismatch at k = {k}: census {} vs triangle {}", got[k], row[k]),
            None => outln!(out, "mismatch: census has buckets outside the row"),
        }
        Ok(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let outcome = match &cli.command {
        Command::Triangle(c) => cmd_triangle(c, &mut out),
        Command::Verify(c) => cmd_verify(c, &mut out),
        Command::Grammar(c) => cmd_grammar(c, &mut out),
        Command::Series(c) => cmd_series(c, &mut out),
        Command::Oracle(c) => cmd_oracle(c, &mut out),
    };
    // a closed pipe (`| head`) is not an error
    let _ = std::io::Write::write_all(&mut std::io::stdout().lock(), out.as_bytes());
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("gramtri: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budgets() {
        assert_eq!(parse_budget("1e6"), Ok(1_000_000));
        assert_eq!(parse_budget("2.5e3"), Ok(2500));
        assert_eq!(parse_budget("10_000"), Ok(10_000));
        assert!(parse_budget("1.25e1").is_err());
        assert!(parse_budget("1e30").is_err());
        assert!(parse_budget("lots").is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
