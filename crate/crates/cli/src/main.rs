use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wgc_core::block::{
    self, block_distance, build_graph_code, build_woven_block, min_distance, rate_bound, theorem1_check,
    theorem2_bound, Assignment, BlockStructure, DistanceBudget, LinearBlockCode,
};
use wgc_core::bounds::{emit_curves, CurveKind};
use wgc_core::conv::{
    self, block_distance_conv, free_distance, rate_half_subcodes, spectrum, tb_block_code, zt_block_code, ConvCode,
    FreeDistanceLimit,
};
use wgc_core::gf2::{BinaryMatrix, BinaryPoly, PolyMatrix};
use wgc_core::hypergraph::{self, Hypergraph};
use wgc_core::report::{code_record, to_csv, Record};
use wgc_core::woven::{
    build_woven_conv, distance_bounds, encode_stream, orbit_multiplicity, permutation_sweep, sweep_csv,
    two_dim_forms, witness_search, WitnessBudget, WovenConvCode,
};
use wgc_core::Exec;

#[derive(Parser)]
#[command(name = "wgc", version, about = "Graph codes and woven graph codes over GF(2)")]
struct Cli {
    /// Worker threads; 1 runs the sequential reference path.
    #[arg(long, global = true, env = "WGC_THREADS")]
    threads: Option<usize>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Girth of a graph or hypergraph.
    Girth(GraphArg),
    /// Fewest hyperedges in a compact subgraph whose vertices all have degree at least d.
    SdGirth {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        d: usize,
    },
    /// Minimum distance of a binary block code.
    Mindist(MindistArgs),
    /// Free distance of a convolutional code.
    Freedist(FreedistArgs),
    /// Minimum block distance of a block or convolutional code.
    Blockdist(BlockdistArgs),
    /// Graph code with a block constituent at every vertex.
    GraphCode(GraphCodeArgs),
    /// Woven graph code with a block constituent.
    WovenBlock(WovenBlockArgs),
    /// Woven graph codes with a convolutional constituent.
    #[command(subcommand)]
    Woven(WovenCommand),
    /// Asymptotic distance bound curves as CSV.
    Bounds(BoundsArgs),
    /// End-to-end reproduction suites.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Args)]
struct GraphArg {
    /// builtin:heawood|utility|3partite, random:S,C,N,SEED or a graph file.
    #[arg(long, default_value = "builtin:heawood")]
    graph: String,
}

#[derive(Args)]
struct DistanceArgs {
    /// Largest dimension enumerated in full.
    #[arg(long, default_value_t = 26)]
    max_enum_dim: usize,
    /// Cap on codewords tried by the information-set search.
    #[arg(long, default_value_t = 200_000_000)]
    max_candidates: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl DistanceArgs {
    fn budget(&self, exec: Exec) -> DistanceBudget {
        DistanceBudget { max_enum_dim: self.max_enum_dim, max_candidates: self.max_candidates, seed: self.seed, exec }
    }
}

#[derive(Args)]
struct MindistArgs {
    /// Parity-check matrix: builtin:spc3|utility or a matrix file.
    #[arg(long, conflicts_with_all = ["generator", "code"])]
    h: Option<String>,
    /// Generator matrix file.
    #[arg(long, conflicts_with = "code")]
    generator: Option<PathBuf>,
    /// Convolutional code terminated with --tb or --zt.
    #[arg(long)]
    code: Option<String>,
    #[arg(long, value_enum, default_value_t = Side::H)]
    side: Side,
    /// Tailbiting length.
    #[arg(long, requires = "code", conflicts_with = "zt")]
    tb: Option<usize>,
    /// Zero-tail length.
    #[arg(long, requires = "code")]
    zt: Option<usize>,
    #[command(flatten)]
    dist: DistanceArgs,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Side {
    /// The matrix is a parity-check matrix.
    H,
    /// The matrix is a generator matrix.
    G,
}

#[derive(Args)]
struct CodeArg {
    /// builtin:heawood|tb-parent|spc3 or a polynomial matrix file.
    #[arg(long, default_value = "builtin:heawood")]
    code: String,
    #[arg(long, value_enum, default_value_t = Side::H)]
    side: Side,
}

#[derive(Args)]
struct FreedistArgs {
    #[command(flatten)]
    code: CodeArg,
    /// Largest overall constraint length searched exactly.
    #[arg(long, default_value_t = 24)]
    max_nu: usize,
    /// Also count first-event paths up to this many weights above d_free.
    #[arg(long)]
    spectrum: Option<u32>,
    /// Also report the rate-1/2 subcodes of a rate-2/3 code.
    #[arg(long)]
    subcodes: bool,
}

#[derive(Args)]
struct BlockdistArgs {
    /// Convolutional code (block code over the Laurent series field).
    #[arg(long, conflicts_with = "h")]
    code: Option<String>,
    #[arg(long, value_enum, default_value_t = Side::H)]
    side: Side,
    /// Binary parity-check matrix: builtin:spc3|utility or a matrix file.
    #[arg(long)]
    h: Option<String>,
    /// Sub-block length for --h (default from the built-in, else 1).
    #[arg(long)]
    block_len: Option<usize>,
}

#[derive(Args)]
struct GraphCodeArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Constituent parity-check matrix: builtin:spc3|utility or a matrix file.
    #[arg(long, default_value = "builtin:spc3")]
    hc: String,
    /// Skip the minimum distance computation.
    #[arg(long)]
    no_distance: bool,
    /// Write the parity-check matrix to this file.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[command(flatten)]
    dist: DistanceArgs,
}

#[derive(Args)]
struct WovenBlockArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, default_value = "builtin:utility")]
    hc: String,
    /// Sub-block length (default from the built-in, else 1).
    #[arg(long)]
    block_len: Option<usize>,
    /// Block order on every vertex, 1-based.
    #[arg(long)]
    perm: Option<String>,
    /// Per-vertex block orders on the remaining partitions, `/`-separated.
    #[arg(long)]
    right: Option<String>,
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[command(flatten)]
    dist: DistanceArgs,
}

#[derive(Args)]
struct WovenArgs {
    #[command(flatten)]
    graph: GraphArg,
    /// Constituent: builtin:heawood|tb-parent|spc3 or a polynomial parity-check file.
    #[arg(long, default_value = "builtin:heawood")]
    hc: String,
    /// Ordering t of the constituent columns on the other partitions, 1-based.
    #[arg(long, default_value = "1,2,3")]
    perm: String,
}

#[derive(Args)]
struct BudgetArgs {
    /// States kept per direction in the trellis pass; 0 skips it.
    #[arg(long, default_value_t = 10_000_000)]
    budget: usize,
    /// Largest codeword degree enumerated.
    #[arg(long, default_value_t = 12)]
    max_degree: usize,
    /// Cap on the enumerated dimension.
    #[arg(long, default_value_t = 28)]
    max_bits: usize,
}

impl BudgetArgs {
    fn budget(&self, exec: Exec) -> WitnessBudget {
        WitnessBudget { max_degree: self.max_degree, max_bits: self.max_bits, node_budget: self.budget, exec }
    }
}

#[derive(Subcommand)]
enum WovenCommand {
    /// H_wg(D), the tailbitten generator and its constraint lengths.
    Build {
        #[command(flatten)]
        woven: WovenArgs,
        /// Write the minimal-basic generator to this file.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
    /// Product and improved lower bounds on the free distance.
    Bounds {
        #[command(flatten)]
        woven: WovenArgs,
    },
    /// Low-weight codeword search.
    Witness {
        #[command(flatten)]
        woven: WovenArgs,
        /// Fail unless a codeword of at most this weight is found.
        #[arg(long)]
        target: Option<u32>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Every ordering of the constituent columns, as CSV.
    Sweep {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value = "builtin:heawood")]
        hc: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Ring encoder over one frame.
    Encode {
        #[command(flatten)]
        woven: WovenArgs,
        /// Information bits as 0/1 characters; whitespace is ignored.
        #[arg(long = "in")]
        input: PathBuf,
        /// Zero-pad the input to a whole number of frames.
        #[arg(long)]
        pad: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Vg,
    Costello,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_enum, default_value_t = Kind::Vg)]
    kind: Kind,
    /// Partition counts.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,10")]
    s: Vec<usize>,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// The Heawood example, from graph code to woven free distance.
    Heawood {
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] wgc_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0} check(s) failed")]
    Failed(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Core(wgc_core::Error::Parse(_) | wgc_core::Error::Io(_)) => 2,
            _ => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_graph(spec: &str) -> Result<Hypergraph> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return hypergraph::builtin(name).ok_or_else(|| CliError::Usage(format!("unknown built-in graph '{name}'")));
    }
    if let Some(args) = spec.strip_prefix("random:") {
        let v: Vec<u64> = args
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| CliError::Usage(format!("bad number '{t}' in '{spec}'"))))
            .collect::<Result<_>>()?;
        let [s, c, n, seed] = v[..] else {
            return Err(CliError::Usage(format!("expected random:S,C,N,SEED, got '{spec}'")));
        };
        return Ok(hypergraph::random_regular(s as usize, c as usize, n as usize, seed)?);
    }
    Ok(Hypergraph::parse(&read(Path::new(spec))?)?)
}

/// Binary constituent and its default sub-block length.
fn load_block(spec: &str, block_len: Option<usize>) -> Result<(BinaryMatrix, Option<usize>)> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let (h, bs) = block::builtin_constituent(name)
            .ok_or_else(|| CliError::Usage(format!("unknown built-in block constituent '{name}'")))?;
        return Ok((h, Some(block_len.unwrap_or(bs.l))));
    }
    Ok((BinaryMatrix::parse(&read(Path::new(spec))?)?, block_len))
}

fn load_conv(spec: &str, side: Side) -> Result<ConvCode> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return conv::builtin_constituent(name)
            .ok_or_else(|| CliError::Usage(format!("unknown built-in convolutional code '{name}'")));
    }
    let m = PolyMatrix::parse(&read(Path::new(spec))?)?;
    Ok(match side {
        Side::H => ConvCode::from_parity_check(m)?,
        Side::G => ConvCode::from_generator(m)?,
    })
}

/// `1,3,2` or `h1,h3,h2`, 1-based.
fn parse_perm(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            let t = t.strip_prefix('h').unwrap_or(t);
            match t.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(CliError::Usage(format!("bad ordering entry '{t}' in '{text}'"))),
            }
        })
        .collect()
}

fn join_perm(perm: &[usize]) -> String {
    perm.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(",")
}

fn load_woven(a: &WovenArgs) -> Result<WovenConvCode> {
    let g = load_graph(&a.graph.graph)?;
    let hc = load_conv(&a.hc, Side::H)?;
    Ok(build_woven_conv(&g, hc.h(), &parse_perm(&a.perm)?)?)
}

fn woven_record(a: &WovenArgs, code: &WovenConvCode) -> Record {
    Record::new().with("graph", &a.graph.graph).with("perm", join_perm(code.perm()))
}

fn codeword_text(v: &[BinaryPoly]) -> String {
    v.iter().map(BinaryPoly::to_coeff_string).collect::<Vec<_>>().join(" ")
}

fn configure_threads(threads: Option<usize>) -> Result<Exec> {
    match threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(1) => Ok(Exec::Sequential),
        Some(_n) => {
            #[cfg(feature = "parallel")]
            rayon::ThreadPoolBuilder::new()
                .num_threads(_n)
                .build_global()
                .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
            Ok(Exec::Parallel)
        }
        None => Ok(Exec::Parallel),
    }
}

enum Output {
    Records(Vec<Record>),
    Raw(String),
}

fn render(out: Output, format: Format) -> String {
    match out {
        Output::Raw(s) => s,
        Output::Records(r) if format == Format::Csv => to_csv(&r),
        Output::Records(r) => r.iter().map(Record::to_kv).collect::<Vec<_>>().join("\n"),
    }
}

fn one(r: Record) -> Result<Output> {
    Ok(Output::Records(vec![r]))
}

fn run(cli: &Cli, exec: Exec) -> Result<Output> {
    match &cli.command {
        Command::Girth(a) => {
            let g = load_graph(&a.graph)?;
            one(Record::new().with("graph", &a.graph).with("girth", opt_text(g.girth())))
        }
        Command::SdGirth { graph, d } => {
            let g = load_graph(&graph.graph)?;
            let v = g.sd_girth_with(*d, exec)?;
            one(Record::new().with("graph", &graph.graph).with("d", d).with("sd_girth", opt_text(v)))
        }
        Command::Mindist(a) => mindist(a, exec),
        Command::Freedist(a) => freedist(a),
        Command::Blockdist(a) => blockdist(a),
        Command::GraphCode(a) => graph_code(a, exec),
        Command::WovenBlock(a) => woven_block(a, exec),
        Command::Woven(w) => woven(w, exec),
        Command::Bounds(a) => {
            let kind = match a.kind {
                Kind::Vg => CurveKind::Vg,
                Kind::Costello => CurveKind::Costello,
            };
            Ok(Output::Raw(emit_curves(&a.s, a.step, kind)?))
        }
        Command::Verify(VerifyCommand::Heawood { budget }) => verify_heawood(&budget.budget(exec), cli.format),
    }
}

fn opt_text(v: Option<usize>) -> String {
    v.map_or_else(|| "none".into(), |x| x.to_string())
}

fn mindist(a: &MindistArgs, exec: Exec) -> Result<Output> {
    let code = if let Some(spec) = &a.h {
        LinearBlockCode::from_parity_check(load_block(spec, None)?.0)
    } else if let Some(path) = &a.generator {
        LinearBlockCode::from_generator(&BinaryMatrix::parse(&read(path)?)?)
    } else if let Some(spec) = &a.code {
        let c = load_conv(spec, a.side)?;
        match (a.tb, a.zt) {
            (Some(l), _) => tb_block_code(&c, l)?,
            (None, Some(l)) => zt_block_code(&c, l),
            (None, None) => return Err(CliError::Usage("--code needs --tb L or --zt L".into())),
        }
    } else {
        return Err(CliError::Usage("one of --h, --generator or --code is required".into()));
    };
    let d = min_distance(&code, &a.dist.budget(exec))?;
    one(code_record(None, &code, Some(&d)))
}

fn freedist(a: &FreedistArgs) -> Result<Output> {
    let code = load_conv(&a.code.code, a.code.side)?;
    let limit = FreeDistanceLimit { max_nu: a.max_nu };
    let mut r = Record::new().with("b", code.b()).with("c", code.c()).with("m", code.m()).with("nu", code.nu());
    let d = free_distance(&code, limit)?;
    r.set("d_free", d);
    if let Some(depth) = a.spectrum {
        let s = spectrum(&code, depth, limit)?;
        r.set("spectrum", s.iter().map(|(w, n)| format!("{w}:{n}")).collect::<Vec<_>>().join(" "));
    }
    if a.subcodes {
        let mut best = u32::MAX;
        for s in rate_half_subcodes(&code)? {
            let d = free_distance(&s.code, limit)?;
            best = best.min(d);
            r.set(&format!("subcode_{}{}_d_free", s.coords.0 + 1, s.coords.1 + 1), d);
        }
        r.set("subcode_min_d_free", best);
    }
    one(r)
}

fn blockdist(a: &BlockdistArgs) -> Result<Output> {
    if let Some(spec) = &a.code {
        let code = load_conv(spec, a.side)?;
        return one(Record::new().with("c", code.c()).with("d_block", block_distance_conv(&code)));
    }
    let spec = a.h.as_deref().ok_or_else(|| CliError::Usage("one of --code or --h is required".into()))?;
    let (h, l) = load_block(spec, a.block_len)?;
    let l = l.unwrap_or(1);
    if l == 0 || h.cols() % l != 0 {
        return Err(CliError::Usage(format!("block length {l} does not divide {}", h.cols())));
    }
    let code = LinearBlockCode::from_parity_check(h);
    let bs = BlockStructure::new(l, code.n() / l)?;
    one(Record::new().with("n", code.n()).with("blocks", bs.c).with("d_block", block_distance(&code, bs)?))
}

fn graph_code(a: &GraphCodeArgs, exec: Exec) -> Result<Output> {
    let g = load_graph(&a.graph.graph)?;
    let (hc, _) = load_block(&a.hc, None)?;
    let code = build_graph_code(&g, &hc)?;
    if let Some(path) = &a.matrix {
        write(path, &code.h().to_text())?;
    }
    let d = if a.no_distance { None } else { Some(min_distance(&code, &a.dist.budget(exec))?) };
    let mut r = code_record(Some(&a.graph.graph), &code, d.as_ref());
    let constituent = LinearBlockCode::from_parity_check(hc.clone());
    r.set("rate_bound", rate_bound(g.s(), constituent.rate()));
    r.set("girth", opt_text(g.girth()));
    if !a.no_distance {
        match theorem1_check(&g, &hc) {
            Ok((predicted, _)) => r.set("sd_girth_prediction", opt_text(predicted)),
            Err(e) => r.set("sd_girth_prediction", format!("unavailable: {e}")),
        };
    }
    one(r)
}

fn woven_block(a: &WovenBlockArgs, exec: Exec) -> Result<Output> {
    let g = load_graph(&a.graph.graph)?;
    let (hc, l) = load_block(&a.hc, a.block_len)?;
    let l = l.unwrap_or(1);
    let constituent = LinearBlockCode::from_parity_check(hc);
    let bs = BlockStructure::new(l, g.c())?;
    let perm = match &a.perm {
        Some(p) => parse_perm(p)?,
        None => (0..g.c()).collect(),
    };
    let mut assignment = Assignment::uniform(&g, &perm);
    if let Some(right) = &a.right {
        let orders: Vec<Vec<usize>> = right.split('/').map(parse_perm).collect::<Result<_>>()?;
        if orders.len() != g.n() {
            return Err(CliError::Usage(format!("--right lists {} orders for {} vertices", orders.len(), g.n())));
        }
        for p in assignment.order.iter_mut().skip(1) {
            p.clone_from(&orders);
        }
    }
    let woven = build_woven_block(&g, &constituent, bs, &assignment)?;
    if let Some(path) = &a.matrix {
        write(path, &woven.h_wg().to_text())?;
    }
    let d = min_distance(&woven.code, &a.dist.budget(exec))?;
    let mut r = code_record(Some(&a.graph.graph), &woven.code, Some(&d));
    r.set("d_block", block_distance(&constituent, bs)?);
    match theorem2_bound(&g, &constituent, bs) {
        Ok(b) => r.set("theorem2_bound", b),
        Err(e) => r.set("theorem2_bound", format!("unavailable: {e}")),
    };
    one(r)
}

fn woven(cmd: &WovenCommand, exec: Exec) -> Result<Output> {
    match cmd {
        WovenCommand::Build { woven, matrix } => {
            let code = load_woven(woven)?;
            let ex = code.expanded()?;
            if let Some(path) = matrix {
                write(path, &ex.minimal.to_text())?;
            }
            let mut r = woven_record(woven, &code);
            r.set("rows", code.h_wg().rows()).set("cols", code.h_wg().cols()).set("rate", code.rate());
            if let Ok(forms) = two_dim_forms(&code) {
                r.set("z_shifts", forms.shifts.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
            }
            r.set("nu_raw", ex.nu_raw()).set("nu_min", ex.nu_min()).set("spans_code", ex.spans_code);
            r.set("replacement_row", codeword_text(&ex.replacement_row));
            one(r)
        }
        WovenCommand::Bounds { woven } => {
            let code = load_woven(woven)?;
            let b = distance_bounds(&code)?;
            let c = code.constituent();
            let mut r = woven_record(woven, &code);
            r.set("d_free_constituent", free_distance(c, FreeDistanceLimit::default())?)
                .set("d_block_constituent", block_distance_conv(c))
                .set("product_bound", b.product_bound);
            r.set_opt("improved_bound", b.improved_bound);
            one(r)
        }
        WovenCommand::Witness { woven, target, budget } => {
            let code = load_woven(woven)?;
            let w = witness_search(&code, *target, &budget.budget(exec))?;
            let mut r = woven_record(woven, &code);
            r.set("weight", w.weight).set("exhaustive", w.exhaustive).set("degree", w.degree);
            match orbit_multiplicity(&code, &w.codeword) {
                Ok(o) => r.set("orbit", o),
                Err(e) => r.set("orbit", format!("unavailable: {e}")),
            };
            r.set("codeword", codeword_text(&w.codeword));
            one(r)
        }
        WovenCommand::Sweep { graph, hc, budget } => {
            let g = load_graph(&graph.graph)?;
            let c = load_conv(hc, Side::H)?;
            Ok(Output::Raw(sweep_csv(&permutation_sweep(&g, c.h(), &budget.budget(exec))?)))
        }
        WovenCommand::Encode { woven, input, pad } => {
            let code = load_woven(woven)?;
            let text = read(input)?;
            let mut bits = Vec::new();
            for ch in text.chars().filter(|c| !c.is_whitespace()) {
                match ch {
                    '0' => bits.push(false),
                    '1' => bits.push(true),
                    _ => return Err(CliError::Usage(format!("bad bit '{ch}' in {}", input.display()))),
                }
            }
            let v = encode_stream(&code, &bits, *pad)?;
            let mut s: String = v.iter().map(|&b| if b { '1' } else { '0' }).collect();
            s.push('\n');
            Ok(Output::Raw(s))
        }
    }
}

struct Check {
    name: &'static str,
    expected: String,
    got: String,
}

fn check(name: &'static str, expected: impl ToString, got: impl ToString) -> Check {
    Check { name, expected: expected.to_string(), got: got.to_string() }
}

fn got<T: ToString>(r: std::result::Result<T, impl std::fmt::Display>) -> String {
    r.map_or_else(|e| format!("error: {e}"), |v| v.to_string())
}

fn verify_heawood(budget: &WitnessBudget, format: Format) -> Result<Output> {
    let g = hypergraph::build_heawood();
    let dist = DistanceBudget { exec: budget.exec, ..DistanceBudget::default() };
    let mut checks = vec![check("girth", 6, opt_text(g.girth()))];

    let spc = block::builtin_constituent("spc3").expect("built-in").0;
    let gc = build_graph_code(&g, &spc)?;
    checks.push(check("graph code (n,k)", "(21,8)", format!("({},{})", gc.n(), gc.k())));
    checks.push(check("graph code d_min", 6, got(min_distance(&gc, &dist).map(|d| d.upper))));

    let parent = conv::builtin_constituent("tb-parent").expect("built-in");
    let tb = tb_block_code(&parent, 7)?;
    checks.push(check("TB code (n,k)", "(21,7)", format!("({},{})", tb.n(), tb.k())));
    checks.push(check("TB code d_min", 6, got(min_distance(&tb, &dist).map(|d| d.upper))));

    let c = conv::builtin_constituent("heawood").expect("built-in");
    let limit = FreeDistanceLimit::default();
    checks.push(check("constituent nu", 5, c.nu()));
    checks.push(check("constituent d_free", 6, got(free_distance(&c, limit))));
    checks.push(check("constituent d_block", 2, block_distance_conv(&c)));
    let sub = rate_half_subcodes(&c).and_then(|subs| {
        subs.iter().map(|s| free_distance(&s.code, limit)).collect::<wgc_core::Result<Vec<_>>>()
    });
    checks.push(check("subcode min d_free", 8, got(sub.map(|v| v.into_iter().min().unwrap_or(0)))));

    let best = build_woven_conv(&g, c.h(), &[0, 2, 1])?;
    let bounds = distance_bounds(&best);
    checks.push(check("product bound", 18, got(bounds.as_ref().map(|b| b.product_bound))));
    checks.push(check(
        "improved bound",
        24,
        got(bounds.as_ref().map(|b| b.improved_bound.map_or("none".into(), |x| x.to_string()))),
    ));
    let ex = best.expanded();
    checks.push(check("nu raw", 70, got(ex.as_ref().map(|e| e.nu_raw()))));
    checks.push(check("nu minimal", 64, got(ex.as_ref().map(|e| e.nu_min()))));
    for (perm, nu, label) in [([1, 0, 2], 65, "nu minimal (h2,h1,h3)"), ([1, 2, 0], 66, "nu minimal (h2,h3,h1)")] {
        let code = build_woven_conv(&g, c.h(), &perm)?;
        checks.push(check(label, nu, got(code.expanded().map(|e| e.nu_min()))));
    }
    let witness = witness_search(&best, None, budget);
    checks.push(check("witness weight", 32, got(witness.as_ref().map(|w| w.weight))));
    let orbit = witness.as_ref().map_err(|e| e.clone()).and_then(|w| orbit_multiplicity(&best, &w.codeword));
    checks.push(check("witness orbit", 7, got(orbit)));

    let failed = checks.iter().filter(|c| c.expected != c.got).count();
    let text = if format == Format::Csv {
        let rows: Vec<Record> = checks
            .iter()
            .map(|c| {
                Record::new()
                    .with("check", c.name)
                    .with("expected", &c.expected)
                    .with("got", &c.got)
                    .with("status", if c.expected == c.got { "PASS" } else { "FAIL" })
            })
            .collect();
        to_csv(&rows)
    } else {
        let w = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut s = String::new();
        for c in &checks {
            let status = if c.expected == c.got { "PASS" } else { "FAIL" };
            s.push_str(&format!("{status}  {:<w$}  expected {:<7} got {}\n", c.name, c.expected, c.got));
        }
        s
    };
    if failed > 0 {
        print!("{text}");
        return Err(CliError::Failed(failed));
    }
    Ok(Output::Raw(text))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads(cli.threads).and_then(|exec| run(&cli, exec)).and_then(|out| {
        let text = render(out, cli.format);
        match &cli.out {
            Some(path) => write(path, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wgc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
