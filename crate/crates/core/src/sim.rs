//! Monte-Carlo error rates over the Gaussian channel.
//!
//! Trial t at grid point i draws its noise from a ChaCha8 stream keyed by
//! (seed, i, t), so results do not depend on how trials are scheduled.
//! Trials run in fixed-size batches and the stop rule is checked between
//! batches.

use crate::analysis::{db_to_linear, sigma_sq};
use crate::decoders::{Counters, DecoderHandle};
use crate::par::{self, Exec};
use crate::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Event {
    /// The decoder's nearest candidate is not the sent point.
    PointError,
    /// The sent point is missing from the output list.
    NotInList,
}

impl Event {
    pub fn parse(s: &str) -> Option<Event> {
        match s {
            "point-error" => Some(Event::PointError),
            "x-not-in-list" | "not-in-list" => Some(Event::NotInList),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_trials: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule { min_errors: 100, max_trials: 10_000_000 }
    }
}

/// Which lattice point is sent. `Random` draws integer coordinates in
/// [−range, range] against the given generator rows.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum Transmit {
    #[default]
    Zero,
    Random { generator: Vec<Vec<f64>>, range: i64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimPlan {
    pub vnr_grid_db: Vec<f64>,
    /// vol(L)^{2/n}, which fixes σ² for each VNR.
    pub vol_2n: f64,
    pub stop: StopRule,
    pub seed: u64,
    pub event: Event,
    pub record_counters: bool,
    pub batch: u64,
    /// Enumeration budget per decode.
    pub max_nodes: u64,
    pub transmit: Transmit,
}

impl SimPlan {
    pub fn new(vnr_grid_db: Vec<f64>, vol_2n: f64, seed: u64) -> Self {
        SimPlan {
            vnr_grid_db,
            vol_2n,
            stop: StopRule::default(),
            seed,
            event: Event::PointError,
            record_counters: true,
            batch: 4096,
            max_nodes: u64::MAX,
            transmit: Transmit::Zero,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.vnr_grid_db.is_empty() {
            return Err(Error::Domain("empty VNR grid".into()));
        }
        if self.vnr_grid_db.iter().any(|v| !v.is_finite()) || self.vnr_grid_db.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("VNR grid must be finite and strictly increasing".into()));
        }
        if !(self.vol_2n > 0.0) {
            return Err(Error::Domain("volume must be positive".into()));
        }
        if self.batch == 0 || self.stop.max_trials == 0 {
            return Err(Error::Domain("batch and max_trials must be positive".into()));
        }
        if self.vnr_grid_db.len() > 1 << 15 {
            return Err(Error::Domain("VNR grid too long".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointResult {
    pub vnr_db: f64,
    pub sigma_sq: f64,
    pub trials: u64,
    pub errors: u64,
    pub pe: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Mean base-decoder calls per trial.
    pub mean_calls: f64,
    pub counters: Option<Counters>,
    #[serde(skip)]
    pub wall_time: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimResult {
    pub seed: u64,
    pub event: Event,
    pub points: Vec<PointResult>,
}

impl SimResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("vnr_db,trials,errors,pe,ci_lo,ci_hi,mean_calls\n");
        for p in &self.points {
            let _ = writeln!(
                s,
                "{},{},{},{:.6e},{:.6e},{:.6e},{:.4}",
                p.vnr_db, p.trials, p.errors, p.pe, p.ci_lo, p.ci_hi, p.mean_calls
            );
        }
        s
    }
}

/// 95% Wilson score interval for `errors` out of `trials`.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let den = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / den;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / den;
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

/// Independent stream for trial `t` at grid point `i`.
pub fn trial_rng(seed: u64, grid: usize, trial: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(((grid as u64) << 48) | trial);
    r
}

pub fn run(plan: &SimPlan, handle: &DecoderHandle) -> Result<SimResult, Error> {
    run_with(plan, handle, Exec::Parallel)
}

pub fn run_with(plan: &SimPlan, handle: &DecoderHandle, exec: Exec) -> Result<SimResult, Error> {
    plan.validate()?;
    let n = handle.dim();
    if let Transmit::Random { generator, .. } = &plan.transmit {
        if generator.iter().any(|g| g.len() != n) {
            return Err(Error::Shape("transmit generator does not match the decoder".into()));
        }
    }
    let mut points = Vec::with_capacity(plan.vnr_grid_db.len());
    for (gi, &db) in plan.vnr_grid_db.iter().enumerate() {
        let t0 = Instant::now();
        let s2 = sigma_sq(plan.vol_2n, db_to_linear(db));
        let sd = s2.sqrt();
        let (mut trials, mut errors) = (0u64, 0u64);
        let mut total = Counters::default();
        while trials < plan.stop.max_trials && errors < plan.stop.min_errors {
            let end = (trials + plan.batch).min(plan.stop.max_trials);
            let out = par::map_indexed(exec, trials..end, |t| trial(plan, handle, gi, t, sd, n));
            for (t, r) in (trials..end).zip(out) {
                let (err, c) = r.map_err(|e| Error::Trial { grid: gi, trial: t, source: Box::new(e) })?;
                errors += err as u64;
                total.absorb(&c);
            }
            trials = end;
        }
        let (lo, hi) = wilson_interval(errors, trials);
        points.push(PointResult {
            vnr_db: db,
            sigma_sq: s2,
            trials,
            errors,
            pe: errors as f64 / trials as f64,
            ci_lo: lo,
            ci_hi: hi,
            mean_calls: total.base_calls as f64 / trials as f64,
            counters: plan.record_counters.then_some(total),
            wall_time: t0.elapsed().as_secs_f64(),
        });
    }
    Ok(SimResult { seed: plan.seed, event: plan.event, points })
}

fn trial(plan: &SimPlan, h: &DecoderHandle, gi: usize, t: u64, sd: f64, n: usize) -> Result<(bool, Counters), Error> {
    let mut rng = trial_rng(plan.seed, gi, t);
    let x: Vec<f64> = match &plan.transmit {
        Transmit::Zero => vec![0.0; n],
        Transmit::Random { generator, range } => {
            let mut x = vec![0.0; n];
            for g in generator {
                let z = rng.gen_range(-range..=*range) as f64;
                for (a, b) in x.iter_mut().zip(g) {
                    *a += z * b;
                }
            }
            x
        }
    };
    let y: Vec<f64> = x
        .iter()
        .map(|&xi| {
            let w: f64 = rng.sample(StandardNormal);
            xi + sd * w
        })
        .collect();
    let out = h.decode(&y, plan.max_nodes)?;
    let tol = 1e-6 * h.min_sq_norm().sqrt().max(1.0);
    let err = match plan.event {
        Event::PointError => out.nearest().is_none_or(|c| c.point.iter().zip(&x).any(|(a, b)| (a - b).abs() > tol)),
        Event::NotInList => !out.contains(&x, tol),
    };
    Ok((err, out.counters))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_estimate() {
        for &(e, t) in &[(0u64, 10u64), (1, 10), (5, 10), (10, 10), (37, 100000)] {
            let (lo, hi) = wilson_interval(e, t);
            let p = e as f64 / t as f64;
            assert!(lo <= p && p <= hi && (0.0..=1.0).contains(&lo) && hi <= 1.0);
        }
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
    }

    #[test]
    fn plan_checks() {
        let mut p = SimPlan::new(vec![1.0, 0.5], 1.0, 0);
        assert!(p.validate().is_err());
        p.vnr_grid_db = vec![0.5, 1.0];
        assert!(p.validate().is_ok());
        p.batch = 0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn streams_differ() {
        let a: u64 = trial_rng(1, 0, 0).gen();
        let b: u64 = trial_rng(1, 0, 1).gen();
        let c: u64 = trial_rng(1, 1, 0).gen();
        assert!(a != b && a != c && b != c);
        assert_eq!(a, trial_rng(1, 0, 0).gen::<u64>());
    }
}
