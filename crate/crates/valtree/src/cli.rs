//! The `valtree` command line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use valtree_core::hensel::{
    certify_branch_with_budget, certify_with, default_trial_budget, BranchCertificate, Verdict,
};
use valtree_core::padic::{central_binomial_valuation, legendre_factorial_valuation, vp};
use valtree_core::polynomial::parse_poly;
use valtree_core::splitting::{
    classify_child, ChildOffset, ScaledParams, SplitContext, TheoremId, TheoremParams, TheoremReport,
};
use valtree_core::valtree::{
    build_tree_with, closed_form_report, sample_check, stirling_class_explorer, ClosedFormReport, TreeConfig,
};
use valtree_core::{Arity, BigInt, Error, LabelingMode, Polynomial, Prime, ResidueClass};

use crate::export::{self, Format};
use crate::{parallel, report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "valtree", version, about = "p-adic valuation trees of integer polynomials")]
pub struct Cli {
    /// Write data output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Worker threads for parallel verification (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and print the valuation tree of a polynomial.
    Tree(TreeArgs),
    /// Check one of the splitting theorems exhaustively to a given depth.
    Verify(VerifyArgs),
    /// Classify the four children of a 2-adic star node of a quadratic.
    Classify(ClassifyArgs),
    /// Certify an infinite branch as a p-adic root by Newton-Hensel lifting.
    Roots(RootsArgs),
    /// Bound the valuation by a finite case table, if the tree closes.
    ClosedForm(ClosedFormArgs),
    /// Count non-terminal residue classes of v_p(S(n,k)) per level.
    Stirling(StirlingArgs),
    /// p-adic valuation of an integer.
    Val(ValArgs),
    /// p-adic valuation of n! by Legendre's formula.
    ValFactorial(ValArgs),
    /// 2-adic valuation of the central binomial coefficient C(2n,n).
    ValBinomial(ValBinomialArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Congruence,
    Constancy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TreeFormat {
    Ascii,
    Dot,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct TreeArgs {
    /// Polynomial in x (or n) and optionally y, e.g. "x^2+y^2+x*y+x+y+1".
    #[arg(long)]
    pub poly: String,
    #[arg(long = "p", default_value_t = 2)]
    pub p: u64,
    /// Tree depth (default 6 for two variables, 16 for one).
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = TreeFormat::Ascii)]
    pub format: TreeFormat,
    /// Also sample N members of every leaf class and report disagreements.
    #[arg(long, value_name = "N")]
    pub sample_check: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = TreeConfig::default().node_budget)]
    pub node_budget: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// One of 1.3, 2.2, 2.4, 2.6, 4.1, 5.1, 6.1.
    #[arg(long)]
    pub theorem: String,
    #[arg(long, default_value_t = 6)]
    pub depth: u32,
    /// Coefficient range for 5.1: "R" for [-R, R], or "LO..HI".
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,
    /// Scaling for 4.1 as n,m,alpha,beta (default: a grid of 36 choices).
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Coefficient of xy (only its parity matters).
    #[arg(long, allow_negative_numbers = true)]
    pub c: i64,
    /// Coefficient of x (only its parity matters).
    #[arg(long, allow_negative_numbers = true)]
    pub d: i64,
    /// Coefficient of y (only its parity matters).
    #[arg(long, allow_negative_numbers = true)]
    pub e: i64,
    #[arg(long)]
    pub i0: i64,
    #[arg(long)]
    pub j0: i64,
    #[arg(long)]
    pub alpha: i64,
}

#[derive(Debug, Args)]
pub struct RootsArgs {
    #[arg(long)]
    pub poly: String,
    /// Residues i,j of the star node.
    #[arg(long, allow_hyphen_values = true)]
    pub node: String,
    /// Level of the node (default: the smallest level holding both residues).
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(long = "p", default_value_t = 2)]
    pub p: u64,
    #[arg(long, default_value_t = 64)]
    pub prec: u32,
    /// Auxiliary equation, e.g. "x-1", or "auto" to search lines x = r and y = s.
    #[arg(long, default_value = "auto", allow_hyphen_values = true)]
    pub constraint: String,
    /// Number of lines tried by the automatic search (default 2 p^min(level,4)).
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct ClosedFormArgs {
    #[arg(long)]
    pub poly: String,
    #[arg(long = "p", default_value_t = 2)]
    pub p: u64,
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct StirlingArgs {
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub levels: u32,
    #[arg(long)]
    pub nmax: u64,
    #[arg(long = "p", default_value_t = 2)]
    pub p: u64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct ValArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub n: String,
    #[arg(long = "p", default_value_t = 2)]
    pub p: u64,
}

#[derive(Debug, Args)]
pub struct ValBinomialArgs {
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                Error::NodeBudgetExceeded(_)
                | Error::DepthCapExceeded { .. }
                | Error::InsufficientData { .. }
                | Error::NonConvergence { .. }
                | Error::PrecisionShortfall { .. },
            ) => EXIT_RESOURCE,
            CliError::Io(_) => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            let _ = writeln!(stderr, "error: --threads must be at least 1");
            return EXIT_USAGE;
        }
        // The global pool can only be configured once per process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = match &cli.output {
        Some(path) => File::create(path).map_err(CliError::from).and_then(|f| {
            let mut w = BufWriter::new(f);
            let code = dispatch(&cli.command, &mut w)?;
            w.flush()?;
            Ok(code)
        }),
        None => dispatch(&cli.command, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Tree(a) => tree(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Classify(a) => classify(a, out),
        Command::Roots(a) => roots(a, out),
        Command::ClosedForm(a) => closed_form(a, out),
        Command::Stirling(a) => stirling(a, out),
        Command::Val(a) => {
            let n: BigInt = a.n.parse().map_err(|_| usage(format!("invalid integer '{}'", a.n)))?;
            writeln!(out, "{}", vp(&n, Prime::new(a.p)?))?;
            Ok(EXIT_OK)
        }
        Command::ValFactorial(a) => {
            let n: u64 =
                a.n.parse()
                    .map_err(|_| usage(format!("expected a non-negative integer, got '{}'", a.n)))?;
            writeln!(out, "{}", legendre_factorial_valuation(n, Prime::new(a.p)?)?)?;
            Ok(EXIT_OK)
        }
        Command::ValBinomial(a) => {
            writeln!(out, "{}", central_binomial_valuation(a.n)?)?;
            Ok(EXIT_OK)
        }
    }
}

fn mode_for(mode: ModeArg, arity: Arity) -> LabelingMode {
    match mode {
        ModeArg::Auto => LabelingMode::default_for(arity),
        ModeArg::Congruence => LabelingMode::Congruence,
        ModeArg::Constancy => LabelingMode::Constancy,
    }
}

fn default_depth(arity: Arity) -> u32 {
    match arity {
        Arity::One => 16,
        Arity::Two => 6,
    }
}

fn tree(a: &TreeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let f = parse_poly(&a.poly)?;
    let p = Prime::new(a.p)?;
    let depth = a.depth.unwrap_or_else(|| default_depth(f.arity()));
    let config = TreeConfig {
        node_budget: a.node_budget,
        ..TreeConfig::default()
    };
    let t = build_tree_with(&f, p, depth, mode_for(a.mode, f.arity()), &config)?;
    let format = match a.format {
        TreeFormat::Ascii => Format::Ascii,
        TreeFormat::Dot => Format::Dot,
        TreeFormat::Json => Format::Json,
    };
    export::export(&t, format, out)?;
    let Some(n) = a.sample_check else {
        return Ok(EXIT_OK);
    };
    let r = sample_check(&t, n, a.seed);
    if a.format == TreeFormat::Json {
        write!(out, "{}", report::render(&report::sample(&r)))?;
    } else {
        writeln!(
            out,
            "sample check: {} terminal and {} star leaves, {} samples, {} violations",
            r.terminal_nodes,
            r.star_nodes,
            r.samples,
            r.violations.len()
        )?;
        for v in &r.violations {
            writeln!(out, "  {v:?}")?;
        }
    }
    Ok(if r.passed() { EXIT_OK } else { EXIT_VERIFICATION })
}

fn parse_range(s: &str) -> Result<(i64, i64), CliError> {
    let bad = || usage(format!("invalid range '{s}', expected R or LO..HI"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo = lo.trim().parse().map_err(|_| bad())?;
        let hi = hi.trim().parse().map_err(|_| bad())?;
        return Ok((lo, hi));
    }
    let r: i64 = s.trim().parse().map_err(|_| bad())?;
    if r < 0 {
        return Err(bad());
    }
    Ok((-r, r))
}

fn parse_scaled(s: &str) -> Result<ScaledParams, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || usage(format!("invalid params '{s}', expected n,m,alpha,beta"));
    let [n, m, alpha, beta] = parts.as_slice() else {
        return Err(bad());
    };
    Ok(ScaledParams::new(
        n.parse().map_err(|_| bad())?,
        m.parse().map_err(|_| bad())?,
        alpha.parse().map_err(|_| bad())?,
        beta.parse().map_err(|_| bad())?,
    )?)
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let id = TheoremId::parse(&a.theorem).ok_or_else(|| {
        let known: Vec<&str> = TheoremId::ALL.iter().map(|t| t.id()).collect();
        usage(format!(
            "unknown theorem '{}', expected one of {}",
            a.theorem,
            known.join(", ")
        ))
    })?;
    let params = match (id, &a.range, &a.params) {
        (_, Some(_), Some(_)) => return Err(usage("--range and --params are mutually exclusive")),
        (TheoremId::GeneralQuadratic, Some(r), None) => {
            let (lo, hi) = parse_range(r)?;
            TheoremParams::Range { lo, hi }
        }
        (TheoremId::ScaledSumOfSquares, None, Some(s)) => TheoremParams::Scaled(parse_scaled(s)?),
        (_, Some(_), None) => return Err(usage("--range applies only to theorem 5.1")),
        (_, None, Some(_)) => return Err(usage("--params applies only to theorem 4.1")),
        (_, None, None) => TheoremParams::Default,
    };
    let r = parallel::check(id, a.depth, &params)?;
    match a.format {
        ReportFormat::Json => write!(out, "{}", report::render(&report::theorem_report(&r)))?,
        ReportFormat::Text => write_theorem_text(&r, out)?,
    }
    Ok(if r.passed() { EXIT_OK } else { EXIT_VERIFICATION })
}

fn write_theorem_text(r: &TheoremReport, out: &mut dyn Write) -> io::Result<()> {
    let status = if r.passed() { "PASS" } else { "FAIL" };
    writeln!(out, "theorem {} at depth {}: {status}", r.theorem.id(), r.depth)?;
    for (k, v) in &r.params {
        writeln!(out, "  {k} = {v}")?;
    }
    writeln!(out, "instances checked: {}", r.instances_checked)?;
    writeln!(out, "star nodes checked: {}", r.nodes_checked)?;
    writeln!(
        out,
        "splits: {} four-star, {} two-star, {} no-star, {} other",
        r.splits.four_star, r.splits.two_star, r.splits.no_star, r.splits.other
    )?;
    writeln!(out, "claim failures: {}", r.claim_failures)?;
    writeln!(out, "table failures: {}", r.table_failures)?;
    for w in &r.failures {
        writeln!(out, "  {w}")?;
    }
    for n in &r.notes {
        writeln!(out, "note: {n}")?;
    }
    Ok(())
}

fn classify(a: &ClassifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let ctx = SplitContext::from_bits(
        a.c.rem_euclid(2),
        a.d.rem_euclid(2),
        a.e.rem_euclid(2),
        a.i0,
        a.j0,
        a.alpha,
    )?;
    writeln!(out, "{ctx}")?;
    for offset in ChildOffset::ALL {
        let c = classify_child(ctx, offset);
        let rows: Vec<String> = c.serials.iter().map(u8::to_string).collect();
        let table = match c.table_kind {
            Some(k) if k == c.kind => "agrees".to_string(),
            Some(k) => format!("table says {k}"),
            None => "table rows disagree".to_string(),
        };
        writeln!(out, "child {offset}: {} (rows {}; {table})", c.kind, rows.join(","))?;
    }
    Ok(EXIT_OK)
}

fn parse_node(s: &str, level: Option<u32>, p: Prime) -> Result<ResidueClass, CliError> {
    let bad = || usage(format!("invalid node '{s}', expected i,j"));
    let parts: Vec<BigInt> = s
        .split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    if parts.len() != 2 {
        return Err(bad());
    }
    let level = match level {
        Some(0) => return Err(usage("--level must be at least 1")),
        Some(l) => l,
        None => {
            let top = parts.iter().map(|v| v.magnitude().clone()).max().unwrap_or_default();
            let mut l = 1;
            while p.pow(l).magnitude() <= &top {
                l += 1;
            }
            l
        }
    };
    Ok(ResidueClass::of_point(p, level, &parts))
}

fn roots(a: &RootsArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let p = Prime::new(a.p)?;
    let f = parse_poly(&a.poly)?.with_arity(Arity::Two)?;
    let node = parse_node(&a.node, a.level, p)?;
    let cert = if a.constraint.trim() == "auto" {
        let budget = a.trials.unwrap_or_else(|| default_trial_budget(&node));
        certify_branch_with_budget(&f, &node, a.prec, budget)?
    } else {
        let g: Polynomial = parse_poly(&a.constraint)?;
        certify_with(&f, &g, &node, a.prec)?
    };
    match a.format {
        ReportFormat::Json => write!(out, "{}", report::render(&report::branch_certificate(&cert)))?,
        ReportFormat::Text => write_roots_text(&f, &cert, out)?,
    }
    Ok(EXIT_OK)
}

fn balanced(v: &BigInt, m: &BigInt) -> BigInt {
    if v + v > *m {
        v - m
    } else {
        v.clone()
    }
}

fn write_roots_text(f: &Polynomial, b: &BranchCertificate, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "polynomial: {f}")?;
    writeln!(out, "node: {}", b.node)?;
    let Some(c) = (b.verdict == Verdict::Certified)
        .then_some(b.certificate.as_ref())
        .flatten()
    else {
        writeln!(out, "verdict: unknown after {} trials", b.trials.len())?;
        for t in &b.trials {
            writeln!(
                out,
                "  {} from ({},{}): {}",
                t.constraint, t.point[0], t.point[1], t.outcome
            )?;
        }
        return Ok(());
    };
    let constraint = b.constraint.as_ref().map(|g| g.to_string()).unwrap_or_default();
    writeln!(out, "verdict: certified with {constraint} = 0")?;
    writeln!(
        out,
        "start ({},{}): v = {}, w = {}",
        c.base[0], c.base[1], c.condition.v, c.condition.w
    )?;
    let m = c.p.pow(c.precision);
    writeln!(
        out,
        "root = ({},{}) mod {}^{}",
        balanced(&c.approximation[0], &m),
        balanced(&c.approximation[1], &m),
        c.p,
        c.precision
    )?;
    if c.exact_root {
        writeln!(out, "exact integer root")?;
    }
    writeln!(out, "newton steps: {}", c.trace.len().saturating_sub(1))?;
    Ok(())
}

fn closed_form(a: &ClosedFormArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let f = parse_poly(&a.poly)?;
    let p = Prime::new(a.p)?;
    let depth = a.depth.unwrap_or_else(|| default_depth(f.arity()));
    let t = build_tree_with(&f, p, depth, mode_for(a.mode, f.arity()), &TreeConfig::default())?;
    let r = closed_form_report(&t);
    if a.format == ReportFormat::Json {
        write!(out, "{}", report::render(&report::closed_form(&r)))?;
        return Ok(EXIT_OK);
    }
    match &r {
        ClosedFormReport::Bounded { bound, cases } => {
            writeln!(out, "Bounded({bound})")?;
            for (c, v) in cases {
                writeln!(out, "  {c}: {v}")?;
            }
        }
        ClosedFormReport::Unresolved { depth, fringe } => {
            writeln!(out, "Unresolved at depth {depth}, {} open classes", fringe.len())?;
            for c in fringe {
                writeln!(out, "  {c}")?;
            }
        }
        ClosedFormReport::IdenticallyZero => writeln!(out, "identically zero")?,
    }
    Ok(EXIT_OK)
}

fn stirling(a: &StirlingArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let r = stirling_class_explorer(a.k, a.levels, a.nmax, Prime::new(a.p)?)?;
    if a.format == ReportFormat::Json {
        write!(out, "{}", report::render(&report::stirling(&r)))?;
        return Ok(EXIT_OK);
    }
    writeln!(
        out,
        "v_{}(S(n,{})) for {} <= n <= {} (empirical)",
        r.p, r.k, r.k, r.n_max
    )?;
    for l in &r.levels {
        writeln!(
            out,
            "  level {}: {} of {} classes non-terminal",
            l.level, l.non_terminal, l.classes
        )?;
    }
    if r.stabilized() {
        writeln!(
            out,
            "stable from level {} with {} non-terminal classes",
            r.stable_from, r.stable_count
        )?;
    } else {
        writeln!(out, "no stabilization observed")?;
    }
    Ok(EXIT_OK)
}
