use crate::{Ctx, Fail};
use clap::Args;
use latkit::analysis::reference;
use latkit::decoders::{ListConfig, Strategy};
use latkit::family::{self, Family};
use latkit::par;
use latkit::sim::{self, SimPlan, StopRule};

#[derive(Args)]
pub struct BenchArgs {
    /// Also simulate each lattice at its published operating point.
    #[arg(long)]
    simulate: bool,
    #[arg(long, default_value_t = 20_000)]
    max_trials: u64,
    #[arg(long, default_value_t = 50)]
    min_errors: u64,
    /// Restrict to these lattices (comma separated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
}

struct Row {
    lattice: String,
    n: usize,
    quantity: &'static str,
    vnr_db: f64,
    value: String,
    trials: String,
    errors: String,
    source: &'static str,
}

impl Row {
    fn published(lattice: &str, n: usize, quantity: &'static str, vnr_db: f64, value: f64) -> Row {
        Row {
            lattice: lattice.into(),
            n,
            quantity,
            vnr_db,
            value: format!("{value:e}"),
            trials: String::new(),
            errors: String::new(),
            source: "published",
        }
    }
}

/// Decoder used to reach each lattice's operating point.
fn operating_decoder(f: Family, vnr_db: f64, target: f64) -> Result<latkit::decoders::DecoderHandle, Fail> {
    Ok(match f {
        Family::BarnesWall(n) => {
            let delta = family::bw_operating_delta(n, vnr_db, target)?;
            f.handle(Strategy::RecursiveList, ListConfig { split1: true, ..ListConfig::modified(delta) })?
        }
        Family::Leech => f.handle(Strategy::KingBdd, ListConfig::regular(0.25))?,
        Family::ThreeParityLeech => f.handle(Strategy::ParityBdd, ListConfig::regular(0.25))?,
        Family::N72 => f.handle(Strategy::NebeQmld, ListConfig::regular(0.25))?,
        _ => return Err(Fail::Invalid(format!("no operating decoder for {f}"))),
    })
}

pub fn run(ctx: &Ctx, a: &BenchArgs) -> Result<(), Fail> {
    let lattices = ["bw16", "bw32", "bw64", "bw128", "leech", "l3x24", "n72"];
    for o in &a.only {
        if !lattices.contains(&o.as_str()) {
            return Err(Fail::Invalid(format!("unknown benchmark lattice `{o}`")));
        }
    }
    if a.max_trials == 0 {
        return Err(Fail::Invalid("--max-trials must be positive".into()));
    }
    let wanted = |s: &str| a.only.is_empty() || a.only.iter().any(|o| o == s);
    let mut rows = Vec::new();
    // (lattice, n, VNR of the published point, point-error target there)
    let mut points: Vec<(String, usize, f64, f64)> = Vec::new();
    for &(n, db) in &reference::BW_MLD_DB {
        let name = format!("bw{n}");
        if wanted(&name) {
            rows.push(Row::published(&name, n, "pe-mld", db, 1e-5));
            points.push((name.clone(), n, db, 1e-5));
        }
    }
    for &(n, db) in &reference::SPHERE_BOUND_DB {
        let name = if n == 24 { "leech".to_string() } else { format!("bw{n}") };
        if wanted(&name) {
            rows.push(Row::published(&name, n, "pe-sphere-bound", db, 1e-5));
        }
    }
    for &(name, db) in &reference::NORMALIZED_1E5_DB {
        if wanted(name) {
            let n = Family::parse(name).map(|f| f.dim()).unwrap_or(0);
            rows.push(Row::published(name, n, "pe-normalized", db, 1e-5));
            if !name.starts_with("bw") {
                points.push((name.to_string(), n, db, 1e-5 * n as f64));
            }
        }
    }
    if wanted("leech") {
        rows.push(Row::published("leech", 24, "pe-mld", reference::LEECH_QMLD_1E4_DB, 1e-4));
        points.push(("leech".into(), 24, reference::LEECH_QMLD_1E4_DB, 1e-4));
    }
    if a.only.is_empty() {
        for &(name, db) in &reference::EXTERNAL_DB {
            rows.push(Row::published(name, 0, "pe-normalized", db, 1e-5));
        }
    }
    if a.simulate {
        for (name, n, db, target) in points {
            let f = Family::parse(&name).expect("known lattice");
            let h = operating_decoder(f, db, target)?;
            let vol = f.build(0)?.volume();
            let mut plan = SimPlan::new(vec![db], vol.powf(2.0 / n as f64), ctx.seed);
            plan.stop = StopRule { min_errors: a.min_errors, max_trials: a.max_trials };
            plan.max_nodes = ctx.budget;
            let res = par::with_threads(ctx.threads, || sim::run(&plan, &h))?;
            let p = &res.points[0];
            for (quantity, v) in [("pe", p.pe), ("pe-normalized", p.pe / n as f64)] {
                rows.push(Row {
                    lattice: name.clone(),
                    n,
                    quantity,
                    vnr_db: db,
                    value: format!("{v:.6e}"),
                    trials: p.trials.to_string(),
                    errors: p.errors.to_string(),
                    source: "simulated",
                });
            }
        }
    }
    println!("lattice,n,quantity,vnr_db,value,trials,errors,source");
    for r in rows {
        println!("{},{},{},{},{},{},{},{}", r.lattice, r.n, r.quantity, r.vnr_db, r.value, r.trials, r.errors, r.source);
    }
    Ok(())
}
