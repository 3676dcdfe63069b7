//! Batch front end: every command prints one JSON document (or CSV with `--csv`).
//!
//! Exit codes: 0 on success, 2 for usage and validation errors, 3 when a
//! truncation would exceed the vertex cap.

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graph_shift::kernel::{
    alternating_kernel, classify_kernel, inductive_kernel, kernel_check, level_power_sums, stretched_partial_sums,
    BranchingBounds,
};
use graph_shift::lp::{apply_shift, lp_norm, norm_bounds, rayleigh_ratio, witness_function};
use graph_shift::poly::{family_polynomial, nonzero_roots_in_open_interval, roots_in_open_interval, PolyFamily, ROOT_TOL};
use graph_shift::spectra::{full_spectrum, infinite_comb_membership, infinite_comb_spectrum};
use graph_shift::{
    degree_bounds, euclidean_ratio, gamma_sequence_with_cap, make_homogeneous, make_infinite_comb, make_tail_graph,
    make_tree, truncate_with_cap, Error, Exponent, GraphFamily, Homogeneous, TSequence, TailKind, TreeSpec,
    WitnessKind, DEFAULT_VERTEX_CAP,
};
use serde::Serialize;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "graph-shift", version, about = "Shift operator toolkit for infinite graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coordination sequence gamma(0..=nmax).
    Gamma(GammaArgs),
    /// (gamma(n) + gamma(n+1)) / sum_{j<=n} gamma(j).
    Ratio(RatioArgs),
    /// Certified bracket for the lp operator norm.
    Norm(NormArgs),
    /// Rayleigh ratio of a single witness function.
    Witness(WitnessArgs),
    /// Kernel elements on leafless trees.
    #[command(subcommand)]
    Kernel(KernelCommand),
    /// Real roots of the kite or comb polynomial.
    Roots(RootsArgs),
    /// Essential and point spectrum of a graph with a tail.
    Spectrum(SpectrumArgs),
    /// Spectrum of the infinite comb, or membership of one value.
    InfiniteComb(InfiniteCombArgs),
    /// Branching data and level counts of a tree.
    TreeInfo(TreeInfoArgs),
}

#[derive(Debug, Subcommand)]
enum KernelCommand {
    /// Build a kernel element and check Sf = 0.
    Build(KernelBuildArgs),
    /// Classify ker S from branching bounds and p.
    Classify(ClassifyArgs),
    /// Even-level power sums of a kernel element.
    Sums(SumsArgs),
    /// Partial sums of t_j M^(-(j-1)p) for a stretched tree.
    Stretched(StretchedArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum FamilyName {
    Lattice,
    Triangular,
    Hexagonal,
    Ladder,
    Ray,
    Kite,
    FlySwatter,
    Comb,
    InfiniteComb,
    Tree,
}

#[derive(Debug, Clone, Args, Serialize)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    /// Lattice dimension.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    /// Size of the finite part of a tail graph.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    /// Tree as JSON, e.g. {"kind":"almost_regular","k":3}.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    tree: Option<String>,
    /// Vertex cap for truncations.
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    cap: usize,
}

#[derive(Debug, Args, Serialize)]
struct GammaArgs {
    #[command(flatten)]
    #[serde(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    nmax: usize,
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Args, Serialize)]
struct RatioArgs {
    #[command(flatten)]
    #[serde(flatten)]
    family: FamilyArgs,
    /// Index at which to evaluate the ratio.
    #[arg(long)]
    at: usize,
}

#[derive(Debug, Args, Serialize)]
struct NormArgs {
    #[command(flatten)]
    #[serde(flatten)]
    family: FamilyArgs,
    #[arg(long, value_parser = parse_exponent)]
    p: Exponent,
    /// Witness radius budget.
    #[arg(long, default_value_t = 60)]
    budget: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum WitnessName {
    Ball,
    TreeWeight,
}

#[derive(Debug, Args, Serialize)]
struct WitnessArgs {
    #[command(flatten)]
    #[serde(flatten)]
    family: FamilyArgs,
    #[arg(long, value_enum, default_value = "ball")]
    witness: WitnessName,
    /// Outer radius n of the witness.
    #[arg(long)]
    radius: usize,
    /// Norm exponent.
    #[arg(long, value_parser = parse_exponent)]
    p: Exponent,
    /// Branching parameter k of the tree weight.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<u64>,
    /// Inner radius N of the tree weight.
    #[arg(long = "N", default_value_t = 0)]
    #[serde(rename = "N")]
    big_n: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
struct TreeSource {
    /// Tree as JSON.
    #[arg(long, conflicts_with_all = ["m", "big_m"])]
    #[serde(skip_serializing_if = "Option::is_none")]
    tree: Option<String>,
    /// Alternating tree: children at even levels.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<u64>,
    /// Alternating tree: children at odd levels.
    #[arg(long = "M")]
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    big_m: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Construction {
    Alternating,
    Inductive,
}

#[derive(Debug, Args, Serialize)]
struct KernelBuildArgs {
    #[command(flatten)]
    #[serde(flatten)]
    tree: TreeSource,
    #[arg(long)]
    depth: usize,
    #[arg(long, value_enum, default_value = "inductive")]
    construction: Construction,
}

#[derive(Debug, Args, Serialize)]
struct ClassifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    tree: TreeSource,
    #[arg(long, value_parser = parse_exponent)]
    p: Exponent,
}

#[derive(Debug, Args, Serialize)]
struct SumsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    tree: TreeSource,
    #[arg(long)]
    depth: usize,
    #[arg(long, value_parser = parse_exponent)]
    p: Exponent,
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Args, Serialize)]
struct StretchedArgs {
    #[arg(long = "M")]
    #[serde(rename = "M")]
    big_m: u64,
    /// squares, selfpow, or a comma-separated prefix whose last entry repeats.
    #[arg(long)]
    t: String,
    #[arg(long, value_parser = parse_exponent)]
    p: Exponent,
    #[arg(long = "J")]
    #[serde(rename = "J")]
    big_j: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum PolyName {
    Kite,
    Comb,
}

#[derive(Debug, Args, Serialize)]
struct RootsArgs {
    #[arg(long, value_enum)]
    poly: PolyName,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    lo: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    hi: f64,
    #[arg(long, default_value_t = ROOT_TOL)]
    tol: f64,
    /// Drop x = 0 by searching on each side of it.
    #[arg(long)]
    exclude_zero: bool,
    /// Permit comb polynomials beyond n = 30.
    #[arg(long)]
    allow_large: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum TailName {
    Kite,
    FlySwatter,
    Comb,
}

#[derive(Debug, Args, Serialize)]
struct SpectrumArgs {
    #[arg(long, value_enum)]
    family: TailName,
    #[arg(long)]
    n: usize,
}

#[derive(Debug, Args, Serialize)]
struct InfiniteCombArgs {
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
struct TreeInfoArgs {
    #[command(flatten)]
    #[serde(flatten)]
    tree: TreeSource,
    #[arg(long, default_value_t = 10)]
    nmax: usize,
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    s.parse::<Exponent>().map_err(|e| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_tree(json: &str) -> Outcome<TreeSpec> {
    let spec: TreeSpec = serde_json::from_str(json).map_err(|e| usage(format!("bad --tree JSON: {e}")))?;
    spec.validate()?;
    Ok(spec)
}

fn build_family(a: &FamilyArgs) -> Outcome<GraphFamily> {
    let need_n = || a.n.ok_or_else(|| usage(format!("--family {:?} needs --n", a.family)));
    Ok(match a.family {
        FamilyName::Lattice => make_homogeneous(Homogeneous::Lattice(a.dim.ok_or_else(|| usage("--family lattice needs --dim"))?))?,
        FamilyName::Triangular => make_homogeneous(Homogeneous::Triangular)?,
        FamilyName::Hexagonal => make_homogeneous(Homogeneous::Hexagonal)?,
        FamilyName::Ladder => make_homogeneous(Homogeneous::Ladder)?,
        FamilyName::Ray => make_homogeneous(Homogeneous::Ray)?,
        FamilyName::Kite => make_tail_graph(TailKind::Kite(need_n()?))?,
        FamilyName::FlySwatter => make_tail_graph(TailKind::FlySwatter(need_n()?))?,
        FamilyName::Comb => make_tail_graph(TailKind::CombWithTail(need_n()?))?,
        FamilyName::InfiniteComb => make_infinite_comb(),
        FamilyName::Tree => make_tree(parse_tree(a.tree.as_deref().ok_or_else(|| usage("--family tree needs --tree"))?)?)?,
    })
}

fn tree_spec(src: &TreeSource) -> Outcome<TreeSpec> {
    match (&src.tree, src.m, src.big_m) {
        (Some(json), _, _) => parse_tree(json),
        (None, Some(m), Some(big_m)) => {
            let spec = TreeSpec::Alternating { m, big_m };
            spec.validate()?;
            Ok(spec)
        }
        _ => Err(usage("give --tree JSON, or --m and --M for an alternating tree")),
    }
}

fn parse_t(s: &str) -> Outcome<TSequence> {
    let quoted = format!("\"{s}\"");
    if let Ok(named) = serde_json::from_str(&quoted) {
        return Ok(TSequence::Named(named));
    }
    let prefix: Vec<u64> = s
        .split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|_| usage(format!("bad --t value {s:?}"))))
        .collect::<Outcome<_>>()?;
    Ok(TSequence::Prefix(prefix))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

enum Rendered {
    Json(Value),
    Csv(String),
}

fn gamma(a: &GammaArgs) -> Outcome<Rendered> {
    let fam = build_family(&a.family)?;
    let g = gamma_sequence_with_cap(&fam, a.nmax, a.family.cap)?;
    Ok(if a.csv { Rendered::Csv(g.to_csv()) } else { Rendered::Json(to_value(&g)) })
}

fn ratio(a: &RatioArgs) -> Outcome<Rendered> {
    let fam = build_family(&a.family)?;
    let g = gamma_sequence_with_cap(&fam, a.at + 1, a.family.cap)?;
    let r = euclidean_ratio(&g, a.at)?;
    Ok(Rendered::Json(json!({ "family": g.family, "n": a.at, "ratio": r })))
}

fn norm(a: &NormArgs) -> Outcome<Rendered> {
    let fam = build_family(&a.family)?;
    Ok(Rendered::Json(to_value(&norm_bounds(&fam, a.p, a.budget)?)))
}

fn witness(a: &WitnessArgs) -> Outcome<Rendered> {
    let fam = build_family(&a.family)?;
    let kind = match a.witness {
        WitnessName::Ball => WitnessKind::BallIndicator { n: a.radius },
        WitnessName::TreeWeight => WitnessKind::TreeWeight {
            k: a.k.unwrap_or(fam.degree_bound() as u64),
            p: a.p,
            big_n: a.big_n,
            n: a.radius,
        },
    };
    kind.validate()?;
    let trunc = Arc::new(truncate_with_cap(&fam, kind.radius() + 1, a.family.cap)?);
    let f = witness_function(trunc, &kind)?;
    let sf = apply_shift(&f).image;
    Ok(Rendered::Json(json!({
        "family": fam.name(),
        "witness": kind,
        "p": a.p,
        "support_radius": f.support_radius(),
        "norm_f": lp_norm(&f, a.p),
        "norm_sf": lp_norm(&sf, a.p),
        "ratio": rayleigh_ratio(&f, a.p)?,
        "degree_bound": fam.degree_bound(),
    })))
}

fn check_tree_cap(spec: &TreeSpec, depth: usize) -> Outcome<()> {
    let size: f64 = spec.level_counts(depth + 1).iter().sum();
    if size > DEFAULT_VERTEX_CAP as f64 {
        return Err(Error::ResourceCap { cap: DEFAULT_VERTEX_CAP }.into());
    }
    Ok(())
}

fn kernel_function(src: &TreeSource, depth: usize, construction: Construction) -> Outcome<graph_shift::LpFunction> {
    let spec = tree_spec(src)?;
    check_tree_cap(&spec, depth)?;
    Ok(match (construction, &spec) {
        (Construction::Alternating, TreeSpec::Alternating { m, big_m }) => alternating_kernel(*m, *big_m, depth)?,
        (Construction::Alternating, _) => return Err(usage("the alternating construction needs an alternating tree")),
        (Construction::Inductive, _) => inductive_kernel(&make_tree(spec)?, depth)?,
    })
}

fn kernel_build(a: &KernelBuildArgs) -> Outcome<Rendered> {
    let f = kernel_function(&a.tree, a.depth, a.construction)?;
    let check = kernel_check(&f, a.depth)?;
    let t = f.truncation();
    let levels: Vec<Value> = (0..=a.depth)
        .map(|l| {
            let r = t.level_range(l);
            let first = f.get_exact(r.start).expect("exact kernel");
            let constant = r.clone().all(|i| f.get_exact(i) == Some(first));
            json!({ "level": l, "vertices": r.len(), "value": first.to_string(), "constant": constant })
        })
        .collect();
    Ok(Rendered::Json(json!({
        "family": t.family().name(),
        "construction": a.construction,
        "depth": a.depth,
        "vertices": f.len(),
        "check": check,
        "levels": levels,
    })))
}

fn kernel_classify(a: &ClassifyArgs) -> Outcome<Rendered> {
    let bounds = match (&a.tree.tree, a.tree.m, a.tree.big_m) {
        (None, Some(m), Some(big_m)) => BranchingBounds::new(m, big_m, 0)?,
        _ => BranchingBounds::from_tree(&tree_spec(&a.tree)?)?,
    };
    Ok(Rendered::Json(to_value(&classify_kernel(&bounds, a.p))))
}

fn kernel_sums(a: &SumsArgs) -> Outcome<Rendered> {
    let f = kernel_function(&a.tree, a.depth, Construction::Inductive)?;
    let sums = level_power_sums(&f, a.p)?;
    if a.csv {
        return Ok(Rendered::Csv(sums.to_csv()));
    }
    let mut v = to_value(&sums);
    if let Some(r) = sums.exact_ratios() {
        v["exact_ratios"] = to_value(&r.iter().map(|x| x.as_ref().map(ToString::to_string)).collect::<Vec<_>>());
    }
    Ok(Rendered::Json(v))
}

fn kernel_stretched(a: &StretchedArgs) -> Outcome<Rendered> {
    let t = parse_t(&a.t)?;
    let sums = stretched_partial_sums(a.big_m, &t, a.p, a.big_j)?;
    Ok(Rendered::Json(json!({ "M": a.big_m, "t": t, "p": a.p, "partial_sums": sums })))
}

fn roots(a: &RootsArgs) -> Outcome<Rendered> {
    let kind = match a.poly {
        PolyName::Kite => PolyFamily::KiteP(a.n),
        PolyName::Comb => {
            if a.n > 30 && !a.allow_large {
                return Err(usage("comb polynomials beyond n = 30 need --allow-large"));
            }
            PolyFamily::CombH(a.n)
        }
    };
    let poly = family_polynomial(kind)?;
    let roots = if a.exclude_zero {
        nonzero_roots_in_open_interval(&poly, a.lo, a.hi, a.tol)?
    } else {
        roots_in_open_interval(&poly, a.lo, a.hi, a.tol)?
    };
    Ok(Rendered::Json(json!({
        "polynomial": poly,
        "degree": poly.degree(),
        "interval": [a.lo, a.hi],
        "roots": roots,
    })))
}

fn spectrum(a: &SpectrumArgs) -> Outcome<Rendered> {
    let kind = match a.family {
        TailName::Kite => TailKind::Kite(a.n),
        TailName::FlySwatter => TailKind::FlySwatter(a.n),
        TailName::Comb => TailKind::CombWithTail(a.n),
    };
    Ok(Rendered::Json(to_value(&full_spectrum(kind)?)))
}

fn infinite_comb(a: &InfiniteCombArgs) -> Outcome<Rendered> {
    Ok(Rendered::Json(match a.lambda {
        Some(l) => {
            let mut v = to_value(&infinite_comb_membership(l));
            v["lambda"] = json!(l);
            v
        }
        None => to_value(&infinite_comb_spectrum()),
    }))
}

fn tree_info(a: &TreeInfoArgs) -> Outcome<Rendered> {
    let spec = tree_spec(&a.tree)?;
    let fam = make_tree(spec.clone())?;
    let bounds = BranchingBounds::from_tree(&spec)?;
    let counts = spec.level_counts(a.nmax);
    let levels: Vec<Value> = (0..=a.nmax)
        .map(|l| json!({ "level": l, "vertices": counts[l], "children": spec.children_at_level(l), "degree": spec.degree_at_level(l) }))
        .collect();
    let mut info = json!({
        "family": fam.name(),
        "tree": spec,
        "degree_bound": fam.degree_bound(),
        "bounds": bounds,
        "levels": levels,
    });
    if counts.iter().sum::<f64>() <= 100_000.0 && a.nmax >= 1 {
        let t = truncate_with_cap(&fam, a.nmax, DEFAULT_VERTEX_CAP)?;
        let (hi, lo) = degree_bounds(&t)?;
        info["interior_degrees"] = json!({ "max": hi, "min": lo });
    }
    Ok(Rendered::Json(info))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gamma(_) => "gamma",
        Command::Ratio(_) => "ratio",
        Command::Norm(_) => "norm",
        Command::Witness(_) => "witness",
        Command::Kernel(KernelCommand::Build(_)) => "kernel build",
        Command::Kernel(KernelCommand::Classify(_)) => "kernel classify",
        Command::Kernel(KernelCommand::Sums(_)) => "kernel sums",
        Command::Kernel(KernelCommand::Stretched(_)) => "kernel stretched",
        Command::Roots(_) => "roots",
        Command::Spectrum(_) => "spectrum",
        Command::InfiniteComb(_) => "infinite-comb",
        Command::TreeInfo(_) => "tree-info",
    }
}

fn dispatch(c: &Command) -> (Value, Outcome<Rendered>) {
    match c {
        Command::Gamma(a) => (to_value(a), gamma(a)),
        Command::Ratio(a) => (to_value(a), ratio(a)),
        Command::Norm(a) => (to_value(a), norm(a)),
        Command::Witness(a) => (to_value(a), witness(a)),
        Command::Kernel(KernelCommand::Build(a)) => (to_value(a), kernel_build(a)),
        Command::Kernel(KernelCommand::Classify(a)) => (to_value(a), kernel_classify(a)),
        Command::Kernel(KernelCommand::Sums(a)) => (to_value(a), kernel_sums(a)),
        Command::Kernel(KernelCommand::Stretched(a)) => (to_value(a), kernel_stretched(a)),
        Command::Roots(a) => (to_value(a), roots(a)),
        Command::Spectrum(a) => (to_value(a), spectrum(a)),
        Command::InfiniteComb(a) => (to_value(a), infinite_comb(a)),
        Command::TreeInfo(a) => (to_value(a), tree_info(a)),
    }
}

/// Envelope around every JSON payload.
#[derive(Debug, Serialize)]
pub struct CommandResult {
    pub command: String,
    pub parameters: Value,
    pub payload: Value,
    pub elapsed_ms: f64,
}

/// Runs the CLI on `args` (including the program name), writing to `out` and `err`.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("usage error");
            let _ = writeln!(err, "{}", line.trim());
            return EXIT_USAGE;
        }
    };
    let start = Instant::now();
    let (parameters, outcome) = dispatch(&cli.command);
    match outcome {
        Ok(Rendered::Csv(csv)) => {
            let _ = out.write_all(csv.as_bytes());
            EXIT_OK
        }
        Ok(Rendered::Json(payload)) => {
            let result = CommandResult {
                command: command_name(&cli.command).into(),
                parameters,
                payload,
                elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            };
            let _ = writeln!(out, "{}", serde_json::to_string(&result).expect("serializable"));
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Library(e)) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::ResourceCap { .. }) {
                EXIT_RESOURCE
            } else {
                EXIT_USAGE
            }
        }
    }
}
