use clap::{Args, Parser, Subcommand};
use latkit::analysis::{self, BaseCondition, DeltaStarMode, PredictorFamily, PredictorSpec, TabulatedCurve};
use latkit::constructions::{self, VERIFY_NODES};
use latkit::decoders::{self, DecoderHandle, ListConfig, Strategy};
use latkit::family::Family;
use latkit::io::{parse_lattice, write_lattice};
use latkit::lattice::{Known, LatticeBasis, Provenance};
use latkit::par;
use latkit::sim::{self, Event, SimPlan, StopRule};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

mod bench;

#[derive(Parser)]
#[command(name = "latkit", version, about = "Lattice construction, decoding and Gaussian-channel simulation")]
struct Cli {
    /// Seed for all randomness (overrides SEED).
    #[arg(long, env = "SEED", global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Enumeration budget in visited nodes.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a named lattice and write it with a JSON sidecar.
    Construct {
        /// z<n>, d<n>, bw<n>, e8, leech, l3x24 or n72.
        family: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run enumeration-backed checks so d and τ become exact.
        #[arg(long)]
        check: bool,
        /// Z[λ]-basis of Λ24 to use for n72 instead of the built-in one.
        #[arg(long)]
        leech_basis: Option<PathBuf>,
    },
    /// Report figures of merit of a lattice file.
    Inspect {
        lattice: PathBuf,
        /// Also run checks that take minutes (n72 minimum, L3x24 kissing).
        #[arg(long)]
        exact: bool,
    },
    /// Decode points read from a file or stdin.
    Decode {
        #[command(flatten)]
        dec: DecoderArgs,
        /// Points as comma or space separated rows; `-` reads stdin.
        #[arg(long, default_value = "-")]
        point: String,
    },
    /// Evaluate error-probability predictors on a VNR grid.
    Predict(PredictArgs),
    /// Monte-Carlo error rates over the Gaussian channel.
    Simulate(SimArgs),
    /// Operating points of the implemented lattices next to published ones.
    Benchmark(bench::BenchArgs),
}

#[derive(Args, Clone)]
struct DecoderArgs {
    #[arg(long)]
    lattice: PathBuf,
    #[arg(long)]
    strategy: String,
    /// Relative decoding radius δ.
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Modified list decoding (keep candidates outside the ball).
    #[arg(long)]
    no_removing_step: bool,
    #[arg(long)]
    split1: bool,
    #[arg(long)]
    split2: bool,
    /// Candidate caps as radius=cap pairs, e.g. 0.3=4,0.5=16.
    #[arg(long)]
    aleph: Option<String>,
}

#[derive(Args)]
struct PredictArgs {
    /// generic, split-k2, leech or nebe.
    #[arg(long, default_value = "generic")]
    family: String,
    /// Arity; defaults to 3 for leech and nebe, 2 otherwise.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 1)]
    depth: usize,
    /// Tabulated base curve (csv: vnr_db,pe); overrides --chi.
    #[arg(long)]
    base: Option<PathBuf>,
    /// Chi-square base as c,d,vol.
    #[arg(long)]
    chi: Option<String>,
    /// BDD curve for one dimension as dim=file; repeatable.
    #[arg(long)]
    bdd_curve: Vec<String>,
    #[arg(long, default_value_t = 0.25)]
    delta: f64,
    /// VNR grid in dB as start:stop:step or a comma list.
    #[arg(long, default_value = "0:6:0.5")]
    vnr: String,
    /// u (recursion value) or delta-star (needs --target).
    #[arg(long, default_value = "u")]
    quantity: String,
    #[arg(long)]
    target: Option<f64>,
}

#[derive(Args)]
struct SimArgs {
    #[command(flatten)]
    dec: DecoderArgs,
    /// JSON plan with any of vnr_grid_db, stop, event, batch.
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(long, default_value = "0:4:1")]
    vnr: String,
    #[arg(long, default_value_t = 100)]
    min_errors: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_trials: u64,
    /// point-error or x-not-in-list.
    #[arg(long, default_value = "point-error")]
    event: String,
    #[arg(long, default_value_t = 4096)]
    batch: u64,
    /// Write the CSV here and metadata next to it (.json); stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub enum Fail {
    Invalid(String),
    Budget(String),
    Other(String),
}

impl From<latkit::Error> for Fail {
    fn from(e: latkit::Error) -> Self {
        use latkit::Error as E;
        if e.is_budget() {
            return Fail::Budget(e.to_string());
        }
        match e {
            E::Verification(_) => Fail::Other(e.to_string()),
            E::Trial { ref source, .. } if matches!(**source, E::Verification(_)) => Fail::Other(e.to_string()),
            _ => Fail::Invalid(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail::Invalid(e.to_string())
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, Fail> {
    Err(Fail::Invalid(msg.into()))
}

pub struct Ctx {
    pub seed: u64,
    pub threads: Option<usize>,
    pub budget: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx { seed: cli.seed.unwrap_or(0), threads: cli.threads, budget: cli.budget.unwrap_or(VERIFY_NODES) };
    if ctx.threads == Some(0) {
        eprintln!("error: --threads must be positive");
        return ExitCode::from(2);
    }
    let r = match cli.cmd {
        Cmd::Construct { family, out, check, leech_basis } => construct(&ctx, &family, out.as_deref(), check, leech_basis.as_deref()),
        Cmd::Inspect { lattice, exact } => inspect(&ctx, &lattice, exact),
        Cmd::Decode { dec, point } => decode(&ctx, &dec, &point),
        Cmd::Predict(a) => predict(&a),
        Cmd::Simulate(a) => simulate(&ctx, &a),
        Cmd::Benchmark(a) => bench::run(&ctx, &a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Budget(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Fail::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn family_arg(s: &str) -> Result<Family, Fail> {
    Family::parse(s).ok_or_else(|| Fail::Invalid(format!("unknown lattice family `{s}`")))
}

fn known_json<T: Serialize>(k: Option<Known<T>>) -> serde_json::Value {
    match k {
        Some(k) => json!({ "value": k.value, "provenance": k.provenance }),
        None => serde_json::Value::Null,
    }
}

fn merit_json(l: &LatticeBasis) -> serde_json::Value {
    json!({
        "name": l.name,
        "dim": l.dim(),
        "volume": l.volume(),
        "min_sq_norm": known_json(l.min_sq_norm()),
        "kissing": known_json(l.kissing()),
        "coding_gain_db": l.coding_gain_db(),
    })
}

fn construct(ctx: &Ctx, family: &str, out: Option<&Path>, check: bool, leech_basis: Option<&Path>) -> Result<(), Fail> {
    let f = family_arg(family)?;
    let nodes = if check { ctx.budget } else { 0 };
    let l = match (f, leech_basis) {
        (Family::N72, Some(p)) => {
            let (leech, _) = read_lattice(p)?;
            constructions::nebe(&leech.lattice, nodes)?.lattice
        }
        (_, Some(_)) => return invalid("--leech-basis only applies to n72"),
        _ => f.build(nodes)?,
    };
    let text = format!("# family {f}\n{}", write_lattice(&l));
    let mut meta = merit_json(&l);
    meta["family"] = json!(f.to_string());
    meta["sha256"] = json!(sha256_hex(text.as_bytes()));
    let meta = serde_json::to_string_pretty(&meta).expect("json");
    match out {
        Some(p) => {
            std::fs::write(p, &text)?;
            std::fs::write(sidecar(p), format!("{meta}\n"))?;
            println!("{meta}");
        }
        None => {
            print!("{text}");
            eprintln!("{meta}");
        }
    }
    Ok(())
}

fn sidecar(p: &Path) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub struct LatticeFile {
    pub lattice: LatticeBasis,
    pub family: Option<Family>,
    pub sha256: String,
}

pub fn read_lattice(p: &Path) -> Result<(LatticeFile, String), Fail> {
    let text = std::fs::read_to_string(p).map_err(|e| Fail::Invalid(format!("{}: {e}", p.display())))?;
    let name = p.file_stem().and_then(|s| s.to_str()).unwrap_or("lattice");
    let lattice = parse_lattice(&text, name)?;
    let family = match text.lines().find_map(|l| l.trim().strip_prefix("# family")) {
        Some(f) => Some(family_arg(f.trim())?),
        None => None,
    };
    if let Some(f) = family {
        if f.dim() != lattice.dim() {
            return invalid(format!("file declares family {f} but has dimension {}", lattice.dim()));
        }
    }
    let sha256 = sha256_hex(text.as_bytes());
    Ok((LatticeFile { lattice, family, sha256 }, text))
}

/// The declared family, if the file's lattice really is that lattice.
fn verified_family(lf: &LatticeFile) -> Result<Option<(Family, LatticeBasis)>, Fail> {
    let Some(f) = lf.family else { return Ok(None) };
    let reference = f.build(0)?;
    Ok(reference.same_lattice(&lf.lattice).then_some((f, reference)))
}

fn inspect(ctx: &Ctx, path: &Path, exact: bool) -> Result<(), Fail> {
    let (lf, _) = read_lattice(path)?;
    let mut l = lf.lattice.clone();
    let fam = verified_family(&lf)?;
    let mut notes = Vec::new();
    if l.dim() <= 32 {
        match l.enumerate_min_norm(ctx.budget) {
            Ok(_) => {}
            Err(e) if e.is_budget() => notes.push("enumeration budget exhausted; minimum and kissing number asserted".to_string()),
            Err(e) => return Err(e.into()),
        }
    }
    if let Some((f, reference)) = &fam {
        let full = if exact { f.build(ctx.budget)? } else { reference.clone() };
        if l.min_sq_norm().is_none_or(|k| k.provenance != Provenance::Exact) {
            if let Some(k) = full.min_sq_norm() {
                l.set_min_sq_norm(k.value, k.provenance);
            }
        }
        if l.kissing().is_none_or(|k| k.provenance != Provenance::Exact) {
            if let Some(k) = full.kissing() {
                l.set_kissing(k.value, k.provenance);
            }
        }
        if *f == Family::N72 && !exact {
            notes.push("n72 minimum is asserted; --exact counts the norm-6 vectors".into());
        }
    } else if lf.family.is_some() {
        notes.push("file does not match its declared family".into());
    }
    let mut out = merit_json(&l);
    out["integral"] = json!(l.is_integral());
    out["even"] = json!(l.is_even());
    out["unimodular"] = json!(l.is_unimodular());
    out["family"] = json!(lf.family.map(|f| f.to_string()));
    out["family_verified"] = json!(fam.is_some());
    out["notes"] = json!(notes);
    out["input_sha256"] = json!(lf.sha256);
    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(())
}

fn parse_aleph(s: &str) -> Result<Vec<(f64, usize)>, Fail> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (r, c) = t.split_once('=').ok_or_else(|| Fail::Invalid(format!("bad --aleph entry `{t}`")))?;
            let r: f64 = r.trim().parse().map_err(|_| Fail::Invalid(format!("bad radius in `{t}`")))?;
            let c: usize = c.trim().parse().map_err(|_| Fail::Invalid(format!("bad cap in `{t}`")))?;
            Ok((r, c))
        })
        .collect()
}

fn list_config(a: &DecoderArgs) -> Result<ListConfig, Fail> {
    let mut cfg = if a.no_removing_step { ListConfig::modified(a.delta) } else { ListConfig::regular(a.delta) };
    cfg.split1 = a.split1;
    cfg.split2 = a.split2;
    if let Some(s) = &a.aleph {
        cfg.aleph = parse_aleph(s)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Decoder for a lattice file: the family's decoder tree when the file
/// matches its declared family, plain enumeration otherwise.
fn load_decoder(ctx: &Ctx, a: &DecoderArgs) -> Result<(DecoderHandle, LatticeFile), Fail> {
    let (lf, _) = read_lattice(&a.lattice)?;
    let strategy = Strategy::parse(&a.strategy).ok_or_else(|| Fail::Invalid(format!("unknown strategy `{}`", a.strategy)))?;
    let cfg = list_config(a)?;
    if let Some(f) = lf.family {
        if !f.strategies().contains(&strategy) {
            return invalid(format!("strategy {strategy} is not available for {f}"));
        }
    }
    let h = match verified_family(&lf)? {
        Some((f, _)) => f.handle(strategy, cfg)?,
        None if strategy == Strategy::SphereEnum => {
            let mut l = lf.lattice.clone();
            if lf.family.is_some() || l.min_sq_norm().is_none() {
                l.enumerate_min_norm(ctx.budget)?;
            }
            let dec = decoders::sphere(&l, &cfg)?;
            DecoderHandle::new(strategy, l.name.clone(), cfg, dec)
        }
        None => return invalid("structured strategies need a file produced by `construct` for a known family"),
    };
    Ok((h, lf))
}

fn parse_points(text: &str, dim: usize) -> Result<Vec<Vec<f64>>, Fail> {
    let mut pts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(str::parse).collect();
        let row = row.map_err(|_| Fail::Invalid(format!("point line {}: not a number", i + 1)))?;
        if row.len() != dim {
            return invalid(format!("point line {} has {} coordinates, lattice has dimension {dim}", i + 1, row.len()));
        }
        pts.push(row);
    }
    if pts.is_empty() {
        return invalid("no points given");
    }
    Ok(pts)
}

fn decode(ctx: &Ctx, a: &DecoderArgs, point: &str) -> Result<(), Fail> {
    let (h, lf) = load_decoder(ctx, a)?;
    let text = if point == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(point).map_err(|e| Fail::Invalid(format!("{point}: {e}")))?
    };
    let pts = parse_points(&text, h.dim())?;
    let mut results = Vec::with_capacity(pts.len());
    for y in pts {
        let out = h.decode(&y, ctx.budget)?;
        let nearest = out.nearest();
        results.push(json!({
            "point": y,
            "nearest": nearest.map(|c| &c.point),
            "dist_sq": nearest.map(|c| c.dist_sq),
            "list_size": out.candidates.len(),
            "counters": out.counters,
        }));
    }
    let doc = json!({
        "lattice": h.lattice,
        "strategy": h.strategy,
        "delta": h.cfg.delta,
        "input_sha256": lf.sha256,
        "points_sha256": sha256_hex(text.as_bytes()),
        "results": results,
    });
    println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    Ok(())
}

pub fn parse_grid(s: &str) -> Result<Vec<f64>, Fail> {
    let bad = || Fail::Invalid(format!("bad VNR grid `{s}`"));
    let g: Vec<f64> = if s.contains(':') {
        let p: Vec<f64> = s.split(':').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        let [a, b, step] = p[..] else { return Err(bad()) };
        if !(step > 0.0) || b < a {
            return Err(bad());
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        if n > 100_000 {
            return Err(bad());
        }
        (0..=n).map(|i| ((a + i as f64 * step) * 1e9).round() / 1e9).collect()
    } else {
        s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if g.is_empty() || g.iter().any(|v| !v.is_finite()) || g.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(bad());
    }
    Ok(g)
}

fn predict(a: &PredictArgs) -> Result<(), Fail> {
    let family = PredictorFamily::parse(&a.family).ok_or_else(|| Fail::Invalid(format!("unknown predictor family `{}`", a.family)))?;
    let grid = parse_grid(&a.vnr)?;
    let mut hashes = Vec::new();
    let base = match (&a.base, &a.chi) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p).map_err(|e| Fail::Invalid(format!("{}: {e}", p.display())))?;
            hashes.push(format!("base={}", sha256_hex(text.as_bytes())));
            BaseCondition::Curve(TabulatedCurve::parse(&p.display().to_string(), &text)?)
        }
        (None, Some(s)) => {
            let v: Vec<&str> = s.split(',').collect();
            let err = || Fail::Invalid(format!("--chi expects c,d,vol, got `{s}`"));
            let [c, d, vol] = v[..] else { return Err(err()) };
            BaseCondition::ChiSquare {
                c: c.trim().parse().map_err(|_| err())?,
                d: d.trim().parse().map_err(|_| err())?,
                vol: vol.trim().parse().map_err(|_| err())?,
            }
        }
        (None, None) if family == PredictorFamily::Leech => BaseCondition::ChiSquare { c: 8, d: 2.0, vol: 1.0 },
        (None, None) if family == PredictorFamily::Nebe => BaseCondition::Curve(TabulatedCurve::leech_qmld()),
        (None, None) => BaseCondition::ChiSquare { c: 2, d: 1.0, vol: 1.0 },
    };
    let mut curves = Vec::new();
    for s in &a.bdd_curve {
        let (dim, p) = s.split_once('=').ok_or_else(|| Fail::Invalid(format!("--bdd-curve expects dim=file, got `{s}`")))?;
        let dim: usize = dim.parse().map_err(|_| Fail::Invalid(format!("bad dimension in `{s}`")))?;
        let text = std::fs::read_to_string(p).map_err(|e| Fail::Invalid(format!("{p}: {e}")))?;
        hashes.push(format!("bdd{dim}={}", sha256_hex(text.as_bytes())));
        curves.push((dim, TabulatedCurve::parse(p, &text)?));
    }
    let k = a.k.unwrap_or(if matches!(family, PredictorFamily::Leech | PredictorFamily::Nebe) { 3 } else { 2 });
    let spec = PredictorSpec::new(family, k, a.depth, base)?.with_bdd_curves(curves);
    let target = match (a.quantity.as_str(), a.target) {
        ("u", _) => None,
        ("delta-star", Some(t)) if t > 0.0 && t < 1.0 => Some(t),
        ("delta-star", _) => return invalid("delta-star needs --target in (0, 1)"),
        (q, _) => return invalid(format!("unknown quantity `{q}`")),
    };
    if !(a.delta >= 0.0) {
        return invalid("--delta must be non-negative");
    }
    let id = format!("{}-k{}-t{}", family.name(), k, a.depth);
    if !hashes.is_empty() {
        println!("# sha256 {}", hashes.join(" "));
    }
    println!("vnr_db,value,predictor_id");
    for db in grid {
        let vnr = analysis::db_to_linear(db);
        match target {
            None => println!("{db},{:.6e},{id}-d{}", analysis::u_recursion(&spec, a.delta, vnr)?, a.delta),
            Some(t) => match analysis::delta_star(&DeltaStarMode::Modified(spec.clone()), 0.0, vnr, t) {
                Ok(d) => println!("{db},{d:.4},{id}-delta-star"),
                Err(_) => println!("{db},nan,{id}-delta-star"),
            },
        }
    }
    Ok(())
}

#[derive(serde::Deserialize, Default)]
struct PlanFile {
    vnr_grid_db: Option<Vec<f64>>,
    stop: Option<StopRule>,
    event: Option<Event>,
    batch: Option<u64>,
    seed: Option<u64>,
}

fn simulate(ctx: &Ctx, a: &SimArgs) -> Result<(), Fail> {
    let plan_file: PlanFile = match &a.plan {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Fail::Invalid(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Fail::Invalid(format!("plan: {e}")))?
        }
        None => PlanFile::default(),
    };
    let grid = match plan_file.vnr_grid_db {
        Some(g) => g,
        None => parse_grid(&a.vnr)?,
    };
    let event = match plan_file.event {
        Some(e) => e,
        None => Event::parse(&a.event).ok_or_else(|| Fail::Invalid(format!("unknown event `{}`", a.event)))?,
    };
    let stop = plan_file.stop.unwrap_or(StopRule { min_errors: a.min_errors, max_trials: a.max_trials });
    let seed = plan_file.seed.unwrap_or(ctx.seed);
    let (h, lf) = load_decoder(ctx, &a.dec)?;
    if event == Event::NotInList && !h.strategy.is_list() {
        return invalid(format!("{} is not a list decoder", h.strategy));
    }
    let n = h.dim();
    let mut plan = SimPlan::new(grid, lf.lattice.volume().powf(2.0 / n as f64), seed);
    plan.stop = stop;
    plan.event = event;
    plan.batch = plan_file.batch.unwrap_or(a.batch);
    plan.max_nodes = ctx.budget;
    plan.validate()?;
    let res = par::with_threads(ctx.threads, || sim::run(&plan, &h))?;
    let csv = res.to_csv();
    let meta = json!({
        "seed": seed,
        "git_describe": env!("LATKIT_GIT_DESCRIBE"),
        "lattice": h.lattice,
        "lattice_sha256": lf.sha256,
        "strategy": h.strategy,
        "config": h.cfg,
        "event": event,
        "stop": plan.stop,
        "vol_2n": plan.vol_2n,
    });
    let meta = serde_json::to_string_pretty(&meta).expect("json");
    match &a.out {
        Some(p) => {
            std::fs::write(p, &csv)?;
            std::fs::write(sidecar(p), format!("{meta}\n"))?;
        }
        None => {
            print!("{csv}");
            eprintln!("{meta}");
        }
    }
    Ok(())
}
