//! Command-line driver. Exit codes: 0 success, 1 I/O or input error,
//! 2 usage error, 3 capacity exceeded, 4 verification failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::embed::{embed_power_path, embed_square_path, hamilton_path, EmbedMode, EmbedParams};
use crate::error::Error;
use crate::extremal::{
    certify_upper_bound, ell_exact_shard, longest_power_path, search_avoider_range, AvoiderCertificate, ELL_CAP,
    ELL_LONG_CAP,
};
use crate::format;
use crate::tournament::{compose_forward, Model, Tournament};
use crate::witness::{verify_power_path, Mode, PowerPathWitness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "powerpath", version, about = "Powers of directed paths in tournaments")]
struct Cli {
    /// Emit JSON lines instead of aligned columns.
    #[arg(long, global = true)]
    json: bool,

    /// Progress and timing on stderr.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a tournament in PTv1 format.
    Gen(GenArgs),
    /// Embed a Hamilton path, a square path, or a k-th power of a path.
    Embed(EmbedArgs),
    /// Exact longest k-th power of a path (small tournaments).
    Oracle(OracleArgs),
    /// Exhaustive l_k(n) over all labelled n-vertex tournaments.
    EllExact(EllArgs),
    /// Random search for a tournament on 2^(k-1) vertices avoiding m-vertex power paths.
    SearchAvoider(AvoiderArgs),
    /// Compose tournaments, every edge between parts pointing forward.
    Compose(ComposeArgs),
    /// Check a witness (or an avoider certificate) against a tournament.
    Verify(VerifyArgs),
    /// Exact l_2(n) against ceil(2n/3).
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Random,
    Transitive,
    C3chain,
    ImplicitRandom,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Random => Model::Random,
            ModelArg::Transitive => Model::Transitive,
            ModelArg::C3chain => Model::C3Chain,
            ModelArg::ImplicitRandom => Model::ImplicitRandom,
        }
    }
}

#[derive(Debug, Args)]
struct Source {
    /// PTv1 tournament file.
    #[arg(long = "in", value_name = "PATH", conflicts_with = "model")]
    input: Option<PathBuf>,
    /// Generate instead of reading.
    #[arg(long, value_enum, requires = "n")]
    model: Option<ModelArg>,
    /// Vertex count for --model.
    #[arg(long)]
    n: Option<usize>,
    /// Seed for the random models.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long)]
    n: usize,
    /// Required for the random models.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EmbedKind {
    Hamilton,
    Square,
    Power,
}

#[derive(Debug, Args)]
struct EmbedArgs {
    #[arg(long, value_enum)]
    mode: EmbedKind,
    #[command(flatten)]
    source: Source,
    /// Power of the path (power mode).
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Window length; default 2^(4k+4) k.
    #[arg(long)]
    t: Option<usize>,
    /// Working-set size; default 4^k.
    #[arg(long = "a-star")]
    a_star: Option<usize>,
    /// Windows scanned per step; default 2k + 1.
    #[arg(long)]
    blocks: Option<usize>,
    /// Default parameters with the length guarantee enforced.
    #[arg(long = "mode-guaranteed")]
    guaranteed: bool,
    /// Write the step trace as JSON lines.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
    /// Write the witness here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    source: Source,
}

#[derive(Debug, Args)]
struct Shards {
    #[arg(long, default_value_t = 1)]
    shards: u64,
    #[arg(long = "shard-index", default_value_t = 0)]
    shard_index: u64,
}

#[derive(Debug, Args)]
struct EllArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Allow n = 7 (2^21 tournaments).
    #[arg(long = "long-run")]
    long_run: bool,
    #[command(flatten)]
    shards: Shards,
}

#[derive(Debug, Args)]
struct AvoiderArgs {
    #[arg(long)]
    k: usize,
    /// Vertex count to avoid; defaults to k(k+1)/2.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    shards: Shards,
    /// Write the certificate here.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also chain the avoider to this many vertices and report the bound.
    #[arg(long = "compose-n")]
    compose_n: Option<usize>,
}

#[derive(Debug, Args)]
struct ComposeArgs {
    /// Parts in order (at least two).
    #[arg(long = "in", value_name = "PATH", num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Plain,
    BlockTransitive,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Override the witness's k.
    #[arg(long)]
    k: Option<usize>,
    /// Override the witness's mode.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long = "in", value_name = "PATH", required_unless_present = "certificate")]
    input: Option<PathBuf>,
    #[arg(long, value_name = "PATH", required_unless_present = "certificate", requires = "input")]
    witness: Option<PathBuf>,
    /// Re-verify an avoider certificate instead.
    #[arg(long, value_name = "PATH", conflicts_with_all = ["input", "witness"])]
    certificate: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long)]
    k: usize,
    #[arg(long = "nmax")]
    n_max: usize,
    #[arg(long = "long-run")]
    long_run: bool,
}

/// A failed run: exit code plus message for stderr.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn verify(message: impl Into<String>) -> Self {
        Failure { code: EXIT_VERIFY, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Capacity { .. } => EXIT_CAPACITY,
            Error::InvalidParameter(_) => EXIT_USAGE,
            Error::Contract(_) => EXIT_VERIFY,
            _ => EXIT_FAILURE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_FAILURE, message: e.to_string() }
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Ctx<'a> {
    json: bool,
    verbose: u8,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn note(&mut self, msg: impl std::fmt::Display) {
        if self.verbose > 0 {
            let _ = writeln!(self.err, "{msg}");
        }
    }
}

/// Parse `args` (including the program name) and run the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let mut ctx = Ctx { json: cli.json, verbose: cli.verbose, out, err };
    let result = match cli.command {
        Command::Gen(a) => gen(&mut ctx, a),
        Command::Embed(a) => embed(&mut ctx, a),
        Command::Oracle(a) => oracle(&mut ctx, a),
        Command::EllExact(a) => ell(&mut ctx, a),
        Command::SearchAvoider(a) => avoider(&mut ctx, a),
        Command::Compose(a) => compose(&mut ctx, a),
        Command::Verify(a) => verify(&mut ctx, a),
        Command::Table(a) => table(&mut ctx, a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(ctx.err, "error: {}", f.message);
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure { code: EXIT_FAILURE, message: format!("{}: {e}", path.display()) })
}

fn write_or_print(ctx: &mut Ctx, path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure { code: EXIT_FAILURE, message: format!("{}: {e}", p.display()) }),
        None => Ok(ctx.out.write_all(text.as_bytes())?),
    }
}

fn load_tournament(path: &Path) -> Result<Tournament, Failure> {
    format::parse(&read(path)?).map_err(|e| Failure { code: EXIT_FAILURE, message: format!("{}: {e}", path.display()) })
}

fn generate(model: ModelArg, n: usize, seed: Option<u64>) -> Result<Tournament, Failure> {
    let model = Model::from(model);
    let seed = match (model, seed) {
        (Model::Random | Model::ImplicitRandom, None) => {
            return Err(Failure::usage("random models need an explicit --seed"))
        }
        (_, s) => s.unwrap_or(0),
    };
    Ok(Tournament::generate(model, n, seed)?)
}

fn source(src: &Source) -> Result<Tournament, Failure> {
    match (&src.input, src.model) {
        (Some(p), None) => load_tournament(p),
        (None, Some(m)) => generate(m, src.n.expect("clap enforces --n"), src.seed),
        _ => Err(Failure::usage("give either --in PATH or --model M --n N")),
    }
}

fn gen(ctx: &mut Ctx, a: GenArgs) -> Outcome {
    let t = generate(a.model, a.n, a.seed)?.materialize();
    let text = format::serialize(&t)?;
    write_or_print(ctx, a.out.as_deref(), &text)
}

fn embed(ctx: &mut Ctx, a: EmbedArgs) -> Outcome {
    let t = source(&a.source)?;
    let started = std::time::Instant::now();
    let overrides = a.t.is_some() || a.a_star.is_some() || a.blocks.is_some();
    if a.mode != EmbedKind::Power && (overrides || a.guaranteed || a.trace.is_some()) {
        return Err(Failure::usage("--t/--a-star/--blocks/--mode-guaranteed/--trace apply to --mode power"));
    }
    let witness = match a.mode {
        EmbedKind::Hamilton => hamilton_path(&t)?,
        EmbedKind::Square => embed_square_path(&t)?,
        EmbedKind::Power => {
            let defaults = EmbedParams::defaults(a.k)?;
            if a.guaranteed && overrides {
                return Err(Failure::usage("--mode-guaranteed uses the default parameters only"));
            }
            let params = EmbedParams::new(
                a.k,
                a.t.unwrap_or(defaults.t),
                a.a_star.unwrap_or(defaults.a_star),
                a.blocks.unwrap_or(defaults.blocks),
            )?;
            let mode = if a.guaranteed { EmbedMode::Guaranteed } else { EmbedMode::Heuristic };
            let embedding = embed_power_path(&t, &params, mode)?;
            if let Some(reason) = &embedding.partial {
                let _ = writeln!(ctx.err, "warning: embedding stopped early: {reason}");
            }
            if let Some(path) = &a.trace {
                write_or_print(ctx, Some(path), &embedding.trace.to_json_lines())?;
            }
            ctx.note(format_args!("{} window steps", embedding.trace.steps.len()));
            embedding.witness
        }
    };
    if !witness.verify(&t)? {
        return Err(Failure::verify("embedded witness failed verification"));
    }
    ctx.note(format_args!("embedded {} vertices in {:.2?}", witness.len(), started.elapsed()));
    let line = witness.to_json_line() + "\n";
    match &a.out {
        Some(path) => {
            write_or_print(ctx, Some(path), &line)?;
            let summary = if ctx.json {
                json!({"n": t.n(), "k": witness.k, "vertices": witness.len(), "verified": true}).to_string()
            } else {
                format!("n {}  k {}  vertices {}  verified", t.n(), witness.k, witness.len())
            };
            writeln!(ctx.out, "{summary}")?;
            Ok(())
        }
        None => write_or_print(ctx, None, &line),
    }
}

fn oracle(ctx: &mut Ctx, a: OracleArgs) -> Outcome {
    let t = source(&a.source)?;
    let r = longest_power_path(&t, a.k)?;
    if !verify_power_path(&t, &r.witness, a.k, Mode::Plain)? {
        return Err(Failure::verify("oracle witness failed verification"));
    }
    if ctx.json {
        let line =
            json!({"k": a.k, "max_vertices": r.max_vertices, "witness": r.witness, "nodes_explored": r.nodes_explored});
        writeln!(ctx.out, "{line}")?;
    } else {
        writeln!(ctx.out, "max_vertices {}", r.max_vertices)?;
        writeln!(ctx.out, "witness {}", PowerPathWitness::new(a.k, Mode::Plain, r.witness).to_json_line())?;
        writeln!(ctx.out, "nodes_explored {}", r.nodes_explored)?;
    }
    Ok(())
}

fn ell(ctx: &mut Ctx, a: EllArgs) -> Outcome {
    let e = ell_exact_shard(a.n, a.k, a.long_run, a.shards.shards, a.shards.shard_index)?;
    if ctx.json {
        let line = json!({"n": e.n, "k": e.k, "ell": e.value, "tournaments": e.tournaments, "shard": a.shards.shard_index, "shards": a.shards.shards});
        writeln!(ctx.out, "{line}")?;
    } else {
        write!(ctx.out, "n {}  k {}  ell {}  tournaments {}", e.n, e.k, e.value, e.tournaments)?;
        if a.shards.shards > 1 {
            write!(ctx.out, "  (minimum over shard {} of {})", a.shards.shard_index, a.shards.shards)?;
        }
        writeln!(ctx.out)?;
    }
    Ok(())
}

fn avoider(ctx: &mut Ctx, a: AvoiderArgs) -> Outcome {
    let m = a.m.unwrap_or(a.k * (a.k + 1) / 2);
    let Shards { shards, shard_index } = a.shards;
    if shards == 0 || shard_index >= shards {
        return Err(Failure::usage(format!("shard index {shard_index} outside 0..{shards}")));
    }
    let per = a.trials.div_ceil(shards);
    let range = (shard_index * per).min(a.trials)..((shard_index + 1) * per).min(a.trials);
    let search = search_avoider_range(a.k, m, range, a.seed)?;
    let Some(cert) = search.certificate else {
        if ctx.json {
            writeln!(ctx.out, "{}", json!({"k": a.k, "m": m, "found": false, "trials": search.trials_run}))?;
        } else {
            writeln!(ctx.out, "not found: no avoider among {} trials", search.trials_run)?;
        }
        return Ok(());
    };
    if !cert.check()? {
        return Err(Failure::verify("certificate failed re-verification"));
    }
    if let Some(path) = &a.out {
        write_or_print(ctx, Some(path), &cert.to_text()?)?;
    }
    let seed = cert.seed.expect("sampled certificates record their seed");
    if ctx.json {
        let line = json!({"k": a.k, "m": m, "found": true, "trials": search.trials_run, "seed": seed, "n": cert.tournament.n()});
        writeln!(ctx.out, "{line}")?;
    } else {
        writeln!(
            ctx.out,
            "found avoider: n {}  k {}  m {}  seed {}  after {} trials",
            cert.tournament.n(),
            a.k,
            m,
            seed,
            search.trials_run
        )?;
    }
    if let Some(n) = a.compose_n {
        let ub = certify_upper_bound(a.k, n, &cert)?;
        let checked = ub.oracle_max.map_or("composition-derived".to_string(), |v| format!("oracle {v}"));
        if ctx.json {
            writeln!(ctx.out, "{}", json!({"n": n, "k": a.k, "bound": ub.bound, "oracle_max": ub.oracle_max}))?;
        } else {
            writeln!(ctx.out, "n {n}: no k = {} power of a path on more than {} vertices ({checked})", a.k, ub.bound)?;
        }
    }
    Ok(())
}

fn compose(ctx: &mut Ctx, a: ComposeArgs) -> Outcome {
    if a.inputs.len() < 2 {
        return Err(Failure::usage("compose needs at least two --in files"));
    }
    let mut parts = a.inputs.iter().map(|p| load_tournament(p));
    let mut acc = parts.next().expect("two inputs")?;
    for part in parts {
        acc = compose_forward(&acc, &part?)?;
    }
    write_or_print(ctx, a.out.as_deref(), &format::serialize(&acc)?)
}

fn verify(ctx: &mut Ctx, a: VerifyArgs) -> Outcome {
    if let Some(path) = &a.certificate {
        let cert = AvoiderCertificate::from_text(&read(path)?)?;
        let ok = cert.check()?;
        report_verdict(ctx, ok, cert.k, cert.tournament.n(), cert.m)?;
        return if ok && cert.verified { Ok(()) } else { Err(Failure::verify("certificate does not hold")) };
    }
    let t = load_tournament(a.input.as_deref().expect("clap enforces --in"))?;
    let text = read(a.witness.as_deref().expect("clap enforces --witness"))?;
    let witness =
        PowerPathWitness::from_json_line(&text).map_err(|e| Failure::verify(format!("unreadable witness: {e}")))?;
    let k = a.k.unwrap_or(witness.k);
    let mode = match a.mode {
        Some(ModeArg::Plain) => Mode::Plain,
        Some(ModeArg::BlockTransitive) => Mode::BlockTransitive,
        None => witness.mode,
    };
    let ok = match verify_power_path(&t, &witness.vertices, k, mode) {
        Ok(ok) => ok,
        Err(Error::InvalidVertex { .. }) => false,
        Err(e) => return Err(e.into()),
    };
    report_verdict(ctx, ok, k, t.n(), witness.len())?;
    if ok {
        Ok(())
    } else {
        Err(Failure::verify("witness does not span a power of a path"))
    }
}

fn report_verdict(ctx: &mut Ctx, ok: bool, k: usize, n: usize, m: usize) -> Outcome {
    if ctx.json {
        writeln!(ctx.out, "{}", json!({"k": k, "n": n, "m": m, "valid": ok}))?;
    } else {
        writeln!(ctx.out, "{} (k {k}, n {n}, m {m})", if ok { "VALID" } else { "INVALID" })?;
    }
    Ok(())
}

fn table(ctx: &mut Ctx, a: TableArgs) -> Outcome {
    if a.k != 2 {
        return Err(Failure::usage("table only has a closed form for k = 2"));
    }
    if a.n_max == 0 {
        return Err(Failure::usage("--nmax must be at least 1"));
    }
    let cap = if a.long_run { ELL_LONG_CAP } else { ELL_CAP };
    if a.n_max > cap {
        return Err(Error::Capacity { what: "exhaustive l_k(n) enumeration", n: a.n_max, cap }.into());
    }
    if !ctx.json {
        writeln!(ctx.out, "{:>3}  {:>8}  {:>10}  status", "n", "ell_2(n)", "ceil(2n/3)")?;
    }
    let mut mismatches = 0;
    for n in 1..=a.n_max {
        let value = ell_exact_shard(n, 2, a.long_run, 1, 0)?.value;
        let formula = (2 * n).div_ceil(3);
        let status = if value == formula { "MATCH" } else { "MISMATCH" };
        mismatches += usize::from(value != formula);
        if ctx.json {
            writeln!(ctx.out, "{}", json!({"n": n, "ell": value, "formula": formula, "status": status}))?;
        } else {
            writeln!(ctx.out, "{n:>3}  {value:>8}  {formula:>10}  {status}")?;
        }
    }
    if mismatches > 0 {
        return Err(Failure::verify(format!("{mismatches} rows disagree with ceil(2n/3)")));
    }
    Ok(())
}
