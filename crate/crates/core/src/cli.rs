//! Command-line front end.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, every verification passed |
//! | 1 | a verification failed |
//! | 2 | usage error (unknown command or flag) |
//! | 3 | invalid input: malformed number, value outside a domain |
//! | 4 | configuration error |
//! | 5 | I/O error |
//! | 6 | incomplete: factoring budget, digit bound or generation ceiling reached |
//!
//! With `--format json` every command prints one JSON document whose fields
//! mirror the library types. Big integers are decimal strings, fractions are
//! `"n/d"` strings and prime powers are `{"p", "e", "value"}` objects.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analysis::{divergence_report, fmt_rational, recip_check, reciprocal, tail_bound, AnalysisError, Rational};
use crate::embedding::{embed, verify_against_mother, verify_numeric, verify_pfd, EmbedError, Eta, Mode};
use crate::factoring::{FactorBudget, FactorError, PrimePower};
use crate::mother::{Mother, MotherError, DEFAULT_CEILING};
use crate::oeis::{self, BFile, Known, OeisError};
use crate::star_core::{
    euclid_seed, gross_prefix, gross_via_product, suffix_offset, StarError, SuffixSearch, DEFAULT_MAX_DIGITS,
    DEFAULT_SUFFIX_DEPTH,
};
use crate::star_stream::{
    extreme_sums, max_pairwise_gcd, odoni_residue_check, squarefree_scan, verify_witness, ResidueClass, StallPolicy,
    StarStream, StreamError,
};
use crate::Nat;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;
pub const EXIT_IO: i32 = 5;
pub const EXIT_INCOMPLETE: i32 = 6;

/// Environment variable naming a config file, used when `--config` is absent.
pub const CONFIG_ENV: &str = "STARSEQ_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    #[value(alias = "structured")]
    #[serde(alias = "structured")]
    Json,
}

/// Settings read from a TOML file; command-line flags take precedence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub trial_bound: u64,
    pub rho_rounds: u32,
    pub rho_iterations: u64,
    pub max_digits: u64,
    pub suffix_depth: usize,
    pub mother_ceiling: u64,
    pub format: Format,
}

impl Default for Config {
    fn default() -> Self {
        let b = FactorBudget::default();
        Config {
            trial_bound: b.trial_bound,
            rho_rounds: b.rho_rounds,
            rho_iterations: b.rho_iterations,
            max_digits: DEFAULT_MAX_DIGITS,
            suffix_depth: DEFAULT_SUFFIX_DEPTH,
            mother_ceiling: DEFAULT_CEILING,
            format: Format::Text,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn budget(&self) -> Result<FactorBudget, CliError> {
        FactorBudget::new(self.trial_bound, self.rho_rounds, self.rho_iterations)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.budget()?;
        for (name, v) in [
            ("max_digits", self.max_digits),
            ("suffix_depth", self.suffix_depth as u64),
            ("mother_ceiling", self.mother_ceiling),
        ] {
            if v == 0 {
                return Err(CliError::Config(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "starseq",
    version,
    about = "Gross and star sequences of x -> x(x+1), the mother sequence and parallel embeddings"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// TOML config file; defaults to $STARSEQ_CONFIG when set.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Trial division bound for factoring.
    #[arg(long, global = true)]
    pub trial_bound: Option<u64>,
    /// Pollard-Brent restarts per composite.
    #[arg(long, global = true)]
    pub rho_rounds: Option<u32>,
    /// Pollard-Brent iterations per restart.
    #[arg(long, global = true)]
    pub rho_iterations: Option<u64>,
    /// Largest gross term, in decimal digits.
    #[arg(long, global = true)]
    pub max_digits: Option<u64>,
    /// Search depth for `suffix`.
    #[arg(long, global = true)]
    pub suffix_depth: Option<usize>,
    /// Largest source integer visited by the mother sequence generator.
    #[arg(long, global = true)]
    pub mother_ceiling: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gross sequence: star^k(x) + 1 for k = 0, 1, ...
    Gross {
        x: String,
        #[arg(long, default_value_t = 6)]
        terms: usize,
    },
    /// Star sequence: the gross terms split into prime powers.
    Star {
        x: String,
        #[arg(long, default_value_t = 7)]
        terms: usize,
        /// Keep going past a gross term the budget cannot finish.
        #[arg(long)]
        lenient: bool,
    },
    /// Prefix of the mother sequence.
    Mother {
        #[arg(long, default_value_t = 36)]
        count: u64,
    },
    /// Indices at which a prime power occurs in the mother sequence.
    Occurrences {
        /// A prime power, as `p^e` or its value.
        value: String,
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
    /// Parallel embedding of a target sequence in the mother sequence.
    Embed(EmbedArgs),
    /// Checks of the identities and theorems behind the sequences.
    #[command(subcommand)]
    Verify(Verify),
    /// Partial reciprocal sums over the star sequence of x.
    Diverge {
        x: String,
        /// Last gross index processed.
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Largest and smallest prime powers of each gross term.
    Extremes {
        x: String,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
    },
    /// Non-squarefree gross terms.
    Squarefree {
        x: String,
        #[arg(long, default_value_t = 6)]
        kmax: usize,
    },
    /// 1 + p1 * p2 * ..., a start whose gross sequence avoids every listed prime.
    Seed {
        /// Comma-separated distinct primes.
        primes: String,
    },
    /// Least k with star^k(x) = y.
    Suffix { x: String, y: String },
    /// Cross-checks against OEIS b-files.
    #[command(subcommand)]
    Oeis(OeisCommand),
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Embed the star sequence of this x.
    #[arg(long, conflicts_with_all = ["eta", "eta_mother"])]
    pub eta_from: Option<String>,
    /// Embed this finite comma-separated list of prime powers.
    #[arg(long)]
    pub eta: Option<String>,
    /// Embed the mother sequence in itself.
    #[arg(long, conflicts_with = "eta")]
    pub eta_mother: bool,
    #[arg(long, default_value_t = 20)]
    pub steps: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Monotone)]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Literal,
    Monotone,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Literal => Mode::Literal,
            ModeArg::Monotone => Mode::Monotone,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// 1/x = sum_{k<n} 1/(star^k x + 1) + 1/star^n x, exactly. Without --x,
    /// sweeps x = 1..=x-max and n = 1..=n-max.
    Recip {
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 50)]
        x_max: u64,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
    /// Gross terms are pairwise coprime.
    Coprime {
        #[arg(long, default_value_t = 50)]
        x_max: u64,
        #[arg(long, default_value_t = 9)]
        terms: usize,
    },
    /// The witness prime divides no gross term.
    Witness {
        #[arg(long, default_value_t = 50)]
        x_max: u64,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
    },
    /// Odd prime factors above 3 of the gross terms of 1 are 1 mod 6.
    Odoni {
        #[arg(long, default_value_t = 6)]
        kmax: usize,
    },
    /// The product recursion w_{k+1} = 1 + w_0 ... w_k reproduces the gross sequence.
    Lemma1 {
        #[arg(long, default_value_t = 50)]
        x_max: u64,
        #[arg(long, default_value_t = 8)]
        kmax: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum OeisCommand {
    /// Compare computed terms with a b-file.
    Check {
        /// A000058 or A082732.
        id: String,
        /// Read this b-file instead of the bundled fixture.
        #[arg(long, conflicts_with = "fetch")]
        bfile: Option<PathBuf>,
        /// Download the b-file; falls back to the fixture on failure.
        #[arg(long)]
        fetch: bool,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

macro_rules! input_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}

input_error!(
    StarError,
    StreamError,
    FactorError,
    AnalysisError,
    MotherError,
    EmbedError
);

impl From<OeisError> for CliError {
    fn from(e: OeisError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

/// What a command concluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Ok,
    Failed,
    Incomplete,
}

impl Outcome {
    fn code(self) -> i32 {
        match self {
            Outcome::Ok => EXIT_OK,
            Outcome::Failed => EXIT_VERIFY,
            Outcome::Incomplete => EXIT_INCOMPLETE,
        }
    }

    fn from_pass(pass: bool) -> Outcome {
        if pass {
            Outcome::Ok
        } else {
            Outcome::Failed
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn parse_nat(s: &str) -> Result<Nat, CliError> {
    let t = s.trim();
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
        return Err(CliError::Input(format!("`{s}` is not a nonnegative integer")));
    }
    t.parse()
        .map_err(|_| CliError::Input(format!("`{s}` is not a nonnegative integer")))
}

fn parse_pos(s: &str) -> Result<Nat, CliError> {
    let n = parse_nat(s)?;
    if n == Nat::ZERO {
        return Err(CliError::Input("x must be at least 1".into()));
    }
    Ok(n)
}

fn parse_list(s: &str) -> Result<Vec<Nat>, CliError> {
    s.split(',').map(parse_nat).collect()
}

fn parse_prime_power(s: &str) -> Result<PrimePower, CliError> {
    s.trim()
        .parse()
        .map_err(|e: FactorError| CliError::Input(format!("`{s}`: {e}")))
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
}

struct Ctx<'a> {
    config: Config,
    budget: FactorBudget,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn json(&self) -> bool {
        self.config.format == Format::Json
    }

    fn emit(&mut self, value: &impl Serialize) -> Result<(), CliError> {
        serde_json::to_writer_pretty(&mut *self.out, value)?;
        writeln!(self.out)?;
        Ok(())
    }

    fn mother(&self) -> Mother {
        Mother::new(self.config.mother_ceiling)
    }
}

/// Runs one command line. Output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                ErrorKind::ValueValidation | ErrorKind::InvalidValue => EXIT_INPUT,
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let env_config = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
    match configure(&cli.global, env_config) {
        Ok(config) => {
            let budget = config.budget().expect("validated");
            let mut ctx = Ctx {
                config,
                budget,
                out,
                err,
            };
            match dispatch(&mut ctx, &cli.command) {
                Ok(outcome) => outcome.code(),
                Err(e) => {
                    let _ = writeln!(ctx.err, "error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Merges the config file (explicit path, else `env_path`) with flag overrides.
pub fn configure(global: &Global, env_path: Option<PathBuf>) -> Result<Config, CliError> {
    let mut config = match global.config.clone().or(env_path) {
        Some(path) => Config::load(&path)?,
        None => Config::default(),
    };
    if let Some(v) = global.format {
        config.format = v;
    }
    if let Some(v) = global.trial_bound {
        config.trial_bound = v;
    }
    if let Some(v) = global.rho_rounds {
        config.rho_rounds = v;
    }
    if let Some(v) = global.rho_iterations {
        config.rho_iterations = v;
    }
    if let Some(v) = global.max_digits {
        config.max_digits = v;
    }
    if let Some(v) = global.suffix_depth {
        config.suffix_depth = v;
    }
    if let Some(v) = global.mother_ceiling {
        config.mother_ceiling = v;
    }
    config.validate()?;
    Ok(config)
}

fn dispatch(ctx: &mut Ctx, command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Gross { x, terms } => gross(ctx, &parse_pos(x)?, *terms),
        Command::Star { x, terms, lenient } => star(ctx, &parse_pos(x)?, *terms, *lenient),
        Command::Mother { count } => mother(ctx, *count),
        Command::Occurrences { value, limit } => occurrences(ctx, &parse_prime_power(value)?, *limit),
        Command::Embed(args) => embedding(ctx, args),
        Command::Verify(v) => verify(ctx, v),
        Command::Diverge { x, depth } => diverge(ctx, &parse_pos(x)?, *depth),
        Command::Extremes { x, kmax } => extremes(ctx, &parse_pos(x)?, *kmax),
        Command::Squarefree { x, kmax } => squarefree(ctx, &parse_pos(x)?, *kmax),
        Command::Seed { primes } => seed(ctx, &parse_list(primes)?),
        Command::Suffix { x, y } => suffix(ctx, &parse_pos(x)?, &parse_pos(y)?),
        Command::Oeis(OeisCommand::Check { id, bfile, fetch }) => {
            oeis_check(ctx, &id.parse::<Known>()?, bfile.as_deref(), *fetch)
        }
    }
}

fn gross(ctx: &mut Ctx, x: &Nat, terms: usize) -> Result<Outcome, CliError> {
    let seq = gross_prefix(x, terms, ctx.config.max_digits)?;
    if ctx.json() {
        ctx.emit(&json!({
            "x": x.to_string(),
            "terms": seq.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        }))?;
    } else {
        writeln!(ctx.out, "{}", join(&seq))?;
    }
    Ok(Outcome::Ok)
}

fn star(ctx: &mut Ctx, x: &Nat, count: usize, lenient: bool) -> Result<Outcome, CliError> {
    let policy = if lenient {
        StallPolicy::Lenient
    } else {
        StallPolicy::Strict
    };
    let mut stream = StarStream::with_options(x.clone(), ctx.budget, policy, ctx.config.max_digits)?;
    let got = stream.ensure_terms(count)?;
    let terms = &stream.terms()[..got];
    if ctx.json() {
        ctx.emit(&json!({
            "x": x.to_string(),
            "terms": terms,
            "stalls": stream.stalls(),
            "horizon": stream.horizon().map(|h| h.to_string()),
        }))?;
    } else {
        writeln!(ctx.out, "{}", join(terms.iter().map(|t| &t.pp)))?;
    }
    for s in stream.stalls() {
        writeln!(
            ctx.err,
            "gross term {} not fully factored: {}",
            s.gross_index, s.partial
        )?;
    }
    if got < count {
        if let Some(h) = stream.horizon() {
            writeln!(ctx.err, "stopped: {h}")?;
        }
        return Ok(Outcome::Incomplete);
    }
    Ok(Outcome::Ok)
}

fn mother(ctx: &mut Ctx, count: u64) -> Result<Outcome, CliError> {
    let terms = ctx.mother().prefix(count)?;
    if ctx.json() {
        ctx.emit(&terms)?;
    } else {
        writeln!(ctx.out, "{}", join(terms.iter().map(|t| &t.value)))?;
    }
    Ok(Outcome::Ok)
}

fn occurrences(ctx: &mut Ctx, value: &PrimePower, limit: usize) -> Result<Outcome, CliError> {
    let indices = ctx.mother().occurrences(value, limit)?;
    if ctx.json() {
        ctx.emit(&json!({ "value": value, "indices": indices }))?;
    } else {
        writeln!(ctx.out, "{}", join(&indices))?;
    }
    Ok(Outcome::Ok)
}

fn embedding(ctx: &mut Ctx, args: &EmbedArgs) -> Result<Outcome, CliError> {
    let eta = match (&args.eta_from, &args.eta, args.eta_mother) {
        (Some(x), None, false) => {
            let stream =
                StarStream::with_options(parse_pos(x)?, ctx.budget, StallPolicy::Strict, ctx.config.max_digits)?;
            Eta::Star(Box::new(stream))
        }
        (None, Some(list), false) => {
            Eta::Finite(list.split(',').map(parse_prime_power).collect::<Result<Vec<_>, _>>()?)
        }
        (None, None, true) => Eta::Mother,
        _ => {
            return Err(CliError::Input(
                "give exactly one of --eta-from, --eta, --eta-mother".into(),
            ))
        }
    };
    let mut mother = ctx.mother();
    let state = embed(eta, args.steps, args.mode.into(), &mut mother)?;
    let pfd = verify_pfd(&state);
    let numeric = verify_numeric(&state);
    let against = verify_against_mother(&state, &mut mother)?;
    let pass = pfd && numeric && against;
    if ctx.json() {
        ctx.emit(&json!({
            "state": &state,
            "pfd": pfd,
            "numeric": numeric,
            "matches_mother": against,
        }))?;
    } else {
        writeln!(ctx.out, "# step u v index value")?;
        for step in &state.log {
            writeln!(ctx.out, "{step}")?;
        }
        writeln!(ctx.out, "# pfd {}", verdict(pfd))?;
        writeln!(ctx.out, "# numeric {}", verdict(numeric))?;
        writeln!(ctx.out, "# mother {}", verdict(against))?;
    }
    if let Some(why) = &state.truncated {
        writeln!(ctx.err, "stopped after {} steps: {why}", state.steps())?;
        if pass {
            return Ok(Outcome::Incomplete);
        }
    }
    Ok(Outcome::from_pass(pass))
}

fn verify(ctx: &mut Ctx, v: &Verify) -> Result<Outcome, CliError> {
    match v {
        Verify::Recip { x, n, x_max, n_max } => match x {
            Some(x) => verify_recip_one(ctx, &parse_pos(x)?, n.unwrap_or(4)),
            None => verify_recip_sweep(ctx, *x_max, n.map_or(1..=*n_max, |n| n..=n)),
        },
        Verify::Coprime { x_max, terms } => verify_coprime(ctx, *x_max, *terms),
        Verify::Witness { x_max, kmax } => verify_witnesses(ctx, *x_max, *kmax),
        Verify::Odoni { kmax } => verify_odoni(ctx, *kmax),
        Verify::Lemma1 { x_max, kmax } => verify_product_recursion(ctx, *x_max, *kmax),
    }
}

fn verify_recip_one(ctx: &mut Ctx, x: &Nat, n: usize) -> Result<Outcome, CliError> {
    if n == 0 {
        return Err(CliError::Input("n must be at least 1".into()));
    }
    let r = recip_check(x, n)?;
    if ctx.json() {
        ctx.emit(&r)?;
    } else {
        let mut parts: Vec<String> = r.terms.iter().map(|t| format!("1/{t}")).collect();
        parts.push(format!("1/{}", r.tail_denominator));
        writeln!(ctx.out, "{} = {}", fmt_rational(&r.lhs), parts.join(" + "))?;
        writeln!(ctx.out, "{}", verdict(r.equal))?;
    }
    Ok(Outcome::from_pass(r.equal))
}

fn verify_recip_sweep(ctx: &mut Ctx, x_max: u64, ns: std::ops::RangeInclusive<usize>) -> Result<Outcome, CliError> {
    let mut checks = 0;
    let mut failures = Vec::new();
    for x in 1..=x_max {
        let x = Nat::from(x);
        let mut last = None;
        for n in ns.clone() {
            if n == 0 {
                continue;
            }
            let r = recip_check(&x, n)?;
            let tail = tail_bound(&x, n)?;
            let mut partial = Rational::zero();
            for t in &r.terms {
                partial += reciprocal(&parse_nat(t)?);
            }
            let telescopes = r.lhs.clone() - partial == tail && last.as_ref().is_none_or(|prev| tail < *prev);
            checks += 1;
            if !(r.equal && telescopes) {
                failures.push((x.to_string(), n));
            }
            last = Some(tail);
        }
    }
    let pass = failures.is_empty() && checks > 0;
    if ctx.json() {
        ctx.emit(&json!({ "checks": checks, "failures": failures, "passed": pass }))?;
    } else {
        for (x, n) in &failures {
            writeln!(ctx.out, "x={x} n={n} FAIL")?;
        }
        writeln!(ctx.out, "recip: {checks} checks {}", verdict(pass))?;
    }
    Ok(Outcome::from_pass(pass))
}

fn verify_coprime(ctx: &mut Ctx, x_max: u64, terms: usize) -> Result<Outcome, CliError> {
    let mut failures = Vec::new();
    for x in 1..=x_max {
        let seq = gross_prefix(&Nat::from(x), terms, ctx.config.max_digits)?;
        let g = max_pairwise_gcd(&seq);
        if g != Nat::from(1u32) {
            failures.push(json!({ "x": x, "gcd": g.to_string() }));
        }
    }
    let pass = failures.is_empty();
    if ctx.json() {
        ctx.emit(&json!({ "x_max": x_max, "terms": terms, "failures": failures, "passed": pass }))?;
    } else {
        for f in &failures {
            writeln!(ctx.out, "x={} gcd={} FAIL", f["x"], f["gcd"])?;
        }
        writeln!(ctx.out, "coprime: x=1..{x_max}, {terms} terms {}", verdict(pass))?;
    }
    Ok(Outcome::from_pass(pass))
}

fn verify_witnesses(ctx: &mut Ctx, x_max: u64, kmax: usize) -> Result<Outcome, CliError> {
    let mut checks = Vec::new();
    for x in 1..=x_max {
        checks.push(verify_witness(&Nat::from(x), kmax)?);
    }
    let pass = checks.iter().all(|c| c.holds());
    if ctx.json() {
        ctx.emit(&json!({ "checks": checks, "passed": pass }))?;
    } else {
        for c in &checks {
            writeln!(ctx.out, "{} {} {}", c.x, c.witness, verdict(c.holds()))?;
        }
        writeln!(ctx.out, "witness: k<={kmax} {}", verdict(pass))?;
    }
    Ok(Outcome::from_pass(pass))
}

fn verify_odoni(ctx: &mut Ctx, kmax: usize) -> Result<Outcome, CliError> {
    let report = odoni_residue_check(kmax, &ctx.budget)?;
    let pass = report.passed();
    if ctx.json() {
        ctx.emit(&json!({ "report": &report, "passed": pass }))?;
    } else {
        for e in &report.entries {
            let class = match e.class {
                ResidueClass::Three => "three",
                ResidueClass::OneModSix => "1 mod 6",
                ResidueClass::EvenInitialTerm => "initial 2",
                ResidueClass::Violation => "VIOLATION",
            };
            writeln!(ctx.out, "{} {} {} {class}", e.gross_index, e.prime, e.residue_mod_6)?;
        }
        writeln!(
            ctx.out,
            "odoni: {} violations {}",
            report.violations().count(),
            verdict(pass)
        )?;
    }
    for k in &report.stalled {
        writeln!(ctx.err, "gross term {k} not fully factored")?;
    }
    if pass && !report.stalled.is_empty() {
        return Ok(Outcome::Incomplete);
    }
    Ok(Outcome::from_pass(pass))
}

fn verify_product_recursion(ctx: &mut Ctx, x_max: u64, kmax: usize) -> Result<Outcome, CliError> {
    let mut failures = Vec::new();
    for x in 1..=x_max {
        let x = Nat::from(x);
        let a = gross_prefix(&x, kmax + 1, ctx.config.max_digits)?;
        let b = gross_via_product(&x, kmax + 1, ctx.config.max_digits)?;
        if let Some(k) = a.iter().zip(&b).position(|(s, t)| s != t) {
            failures.push((x.to_string(), k));
        }
    }
    let pass = failures.is_empty();
    if ctx.json() {
        ctx.emit(&json!({ "x_max": x_max, "kmax": kmax, "failures": failures, "passed": pass }))?;
    } else {
        for (x, k) in &failures {
            writeln!(ctx.out, "x={x} k={k} FAIL")?;
        }
        writeln!(ctx.out, "product recursion: x=1..{x_max}, k<={kmax} {}", verdict(pass))?;
    }
    Ok(Outcome::from_pass(pass))
}

fn diverge(ctx: &mut Ctx, x: &Nat, depth: usize) -> Result<Outcome, CliError> {
    let report = divergence_report(x, depth, &ctx.budget)?;
    if ctx.json() {
        ctx.emit(&report)?;
    } else {
        writeln!(ctx.out, "# j k x_j p sum(1/x_j) sum(1/p)")?;
        for r in &report.rows {
            writeln!(
                ctx.out,
                "{} {} {} {} {} {}",
                r.j,
                r.gross_index,
                r.term,
                r.prime,
                fmt_rational(&r.sum_terms),
                fmt_rational(&r.sum_primes)
            )?;
        }
        if let Some(n) = &report.estimate_n {
            writeln!(ctx.out, "# n = {n}")?;
        }
        if let Some(m) = report.mertens_estimate {
            writeln!(ctx.out, "# log log n + M = {m:.6}")?;
        }
        if let Some(c) = &report.cor_pi_estimate {
            let note = if c.fragile { " (log log log n < 1)" } else { "" };
            writeln!(
                ctx.out,
                "# pi(log log n) = {}, (log log n + M)/log log log n = {:.6}{note}",
                c.prime_count_reading, c.ratio_reading
            )?;
        }
    }
    if let Some(k) = report.stalled_at {
        writeln!(ctx.err, "stopped at gross term {k}")?;
        return Ok(Outcome::Incomplete);
    }
    Ok(Outcome::Ok)
}

fn extremes(ctx: &mut Ctx, x: &Nat, kmax: usize) -> Result<Outcome, CliError> {
    let report = extreme_sums(x, kmax, &ctx.budget)?;
    if ctx.json() {
        ctx.emit(&report)?;
    } else {
        writeln!(ctx.out, "# k largest smallest")?;
        for r in &report.rows {
            writeln!(ctx.out, "{} {} {}", r.k, r.largest, r.smallest)?;
        }
        writeln!(ctx.out, "# sigma largest = {}", fmt_rational(&report.sigma_largest))?;
        writeln!(ctx.out, "# sigma smallest = {}", fmt_rational(&report.sigma_smallest))?;
    }
    if let Some(k) = report.stalled_at {
        writeln!(ctx.err, "stopped at gross term {k}")?;
        return Ok(Outcome::Incomplete);
    }
    Ok(Outcome::Ok)
}

fn squarefree(ctx: &mut Ctx, x: &Nat, kmax: usize) -> Result<Outcome, CliError> {
    let report = squarefree_scan(x, kmax, &ctx.budget)?;
    if ctx.json() {
        ctx.emit(&report)?;
    } else {
        for h in &report.hits {
            writeln!(ctx.out, "{} {}", h.k, h.pp)?;
        }
        writeln!(ctx.out, "# {} non-squarefree factors", report.hits.len())?;
    }
    if let Some(k) = report.stalled_at {
        writeln!(ctx.err, "stopped at gross term {k}")?;
        return Ok(Outcome::Incomplete);
    }
    Ok(Outcome::Ok)
}

fn seed(ctx: &mut Ctx, primes: &[Nat]) -> Result<Outcome, CliError> {
    let s = euclid_seed(primes)?;
    if ctx.json() {
        ctx.emit(&json!({
            "primes": primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "seed": s.to_string(),
        }))?;
    } else {
        writeln!(ctx.out, "{s}")?;
    }
    Ok(Outcome::Ok)
}

fn suffix(ctx: &mut Ctx, x: &Nat, y: &Nat) -> Result<Outcome, CliError> {
    let found = suffix_offset(x, y, ctx.config.suffix_depth)?;
    if ctx.json() {
        ctx.emit(&found)?;
    } else {
        match found {
            SuffixSearch::Found { offset } => writeln!(ctx.out, "{offset}")?,
            SuffixSearch::Absent { depth } => writeln!(ctx.out, "absent (depth {depth})")?,
        }
    }
    Ok(Outcome::from_pass(found.offset().is_some()))
}

fn oeis_check(ctx: &mut Ctx, id: &Known, path: Option<&Path>, fetch: bool) -> Result<Outcome, CliError> {
    let (bfile, source) = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            (BFile::parse(&id.to_string(), &text)?, p.display().to_string())
        }
        None if fetch => match oeis::fetch(*id) {
            Ok(b) => (b, "oeis.org".to_string()),
            Err(e) => {
                writeln!(ctx.err, "{e}; using the bundled fixture")?;
                (id.fixture(), "fixture".to_string())
            }
        },
        None => (id.fixture(), "fixture".to_string()),
    };
    let report = oeis::oeis_check(*id, &bfile, &source, ctx.config.max_digits)?;
    let pass = report.passed();
    if ctx.json() {
        ctx.emit(&json!({ "report": &report, "passed": pass }))?;
    } else {
        writeln!(
            ctx.out,
            "{} ({}): {} terms compared {}",
            report.id,
            report.source,
            report.compared,
            verdict(report.terms_match())
        )?;
        if let Some(m) = &report.first_mismatch {
            writeln!(
                ctx.out,
                "first mismatch at index {}: expected {}, computed {}",
                m.index, m.expected, m.computed
            )?;
        }
        if let Some(s) = &report.suffix {
            writeln!(
                ctx.out,
                "last two digits from term {}: {} {}",
                s.from_term,
                join(s.suffixes.iter().map(|d| format!("{d:02}"))),
                verdict(s.holds())
            )?;
            if let Some(b) = s.first_break {
                writeln!(ctx.out, "pattern 57/93 breaks at term {b}")?;
            }
        }
    }
    Ok(Outcome::from_pass(pass))
}
