//! Error-probability predictors for the parity-lattice decoders.
//!
//! All VNR arguments named `vnr` are linear; `_db` variants take decibels.

use crate::Error;
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI};

/// Published operating points, VNR in dB at Pe = 1e-5 unless noted.
pub mod reference {
    /// Sphere lower bound for n = 16, 24, 32, 64, 128.
    pub const SPHERE_BOUND_DB: [(usize, f64); 5] = [(16, 4.05), (24, 3.2), (32, 2.5), (64, 1.9), (128, 1.4)];
    /// MLD of BW_n for n = 16, 32, 64, 128.
    pub const BW_MLD_DB: [(usize, f64); 4] = [(16, 4.5), (32, 3.7), (64, 3.1), (128, 2.3)];
    /// Normalized error probability 1e-5 for BW64, L3x24, N72 and BW128.
    pub const NORMALIZED_1E5_DB: [(&str, f64); 4] = [("bw64", 2.3), ("l3x24", 2.02), ("n72", 1.85), ("bw128", 1.7)];
    /// Λ24 maximum-likelihood decoding at Pe = 1e-4.
    pub const LEECH_QMLD_1E4_DB: f64 = 3.3;
    /// Other schemes at normalized Pe = 1e-5 (reported, not simulated).
    pub const EXTERNAL_DB: [(&str, f64); 3] = [("bch-two-level-128", 2.4), ("turbo-lattice-102", 2.75), ("ldlc-100", 3.7)];

    pub fn sphere_bound_db(n: usize) -> Option<f64> {
        SPHERE_BOUND_DB.iter().find(|(m, _)| *m == n).map(|x| x.1)
    }
    pub fn bw_mld_db(n: usize) -> Option<f64> {
        BW_MLD_DB.iter().find(|(m, _)| *m == n).map(|x| x.1)
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// σ² at linear VNR Δ for a lattice with vol^{2/n} = `vol_2n`.
pub fn sigma_sq(vol_2n: f64, vnr: f64) -> f64 {
    vol_2n / (2.0 * PI * E * vnr)
}

/// P(‖w‖² > r) for w ~ N(0, σ² I_n), n even.
pub fn chi_square_tail(n: usize, r: f64, sigma_sq: f64) -> Result<f64, Error> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::Domain(format!("chi-square tail needs an even n ≥ 2, got {n}")));
    }
    if !(r >= 0.0) || !(sigma_sq > 0.0) || !r.is_finite() {
        return Err(Error::Domain("need r ≥ 0 and σ² > 0".into()));
    }
    if r == 0.0 {
        return Ok(1.0);
    }
    let x = r / (2.0 * sigma_sq);
    let lx = x.ln();
    // log-sum-exp over terms x^k/k!
    let mut logs = Vec::with_capacity(n / 2);
    let mut lfact = 0.0;
    for k in 0..n / 2 {
        if k > 0 {
            lfact += (k as f64).ln();
        }
        logs.push(k as f64 * lx - lfact);
    }
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = logs.iter().map(|l| (l - m).exp()).sum();
    Ok((m + s.ln() - x).exp().clamp(0.0, 1.0))
}

/// List-size bound at relative radius δ ≤ 1/2: ⌊1/(2ε)⌋ for δ = 1/2 − ε,
/// and 2n at δ = 1/2.
pub fn johnson_bound(n: usize, delta: f64) -> Result<u64, Error> {
    if !(0.0..=0.5).contains(&delta) {
        return Err(Error::Domain(format!("no list bound for δ = {delta}")));
    }
    let eps = 0.5 - delta;
    if eps <= 1e-12 {
        return Ok(2 * n as u64);
    }
    Ok(((1.0 / (2.0 * eps)) + 1e-9).floor().max(1.0) as u64)
}

/// Error-probability curve given as (VNR dB, Pe) breakpoints; log Pe is
/// interpolated linearly in dB and extrapolated from the end segments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TabulatedCurve {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl TabulatedCurve {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self, Error> {
        if points.len() < 2 {
            return Err(Error::Domain("a curve needs at least two points".into()));
        }
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::Domain("curve abscissae must be strictly increasing".into()));
        }
        if points.iter().any(|p| !(p.1 > 0.0 && p.1 <= 1.0)) {
            return Err(Error::Domain("curve values must lie in (0, 1]".into()));
        }
        Ok(TabulatedCurve { name: name.into(), points })
    }

    /// Parses `vnr_db,pe` lines; `#` comments and a header line are skipped.
    pub fn parse(name: &str, text: &str) -> Result<Self, Error> {
        let mut pts = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split(',').map(str::trim);
            let (a, b) = (it.next(), it.next());
            match (a.and_then(|s| s.parse::<f64>().ok()), b.and_then(|s| s.parse::<f64>().ok())) {
                (Some(x), Some(y)) => pts.push((x, y)),
                _ if pts.is_empty() && i == 0 => continue,
                _ => return Err(Error::Parse { line: i + 1, msg: "expected `vnr_db,pe`".into() }),
            }
        }
        TabulatedCurve::new(name, pts)
    }

    pub fn eval_db(&self, db: f64) -> f64 {
        let p = &self.points;
        let j = match p.iter().position(|q| q.0 >= db) {
            Some(0) => 1,
            Some(j) => j,
            None => p.len() - 1,
        };
        let (x0, y0) = p[j - 1];
        let (x1, y1) = p[j];
        let t = (db - x0) / (x1 - x0);
        let l = y0.ln() + t * (y1.ln() - y0.ln());
        l.exp().clamp(0.0, 1.0)
    }

    /// Point-error curve of the recursive bounded-distance decoder of BW_n,
    /// measured with this crate (2·10⁵ trials or 300 errors per point).
    pub fn bw_bdd(n: usize) -> Option<Self> {
        BW_BDD.iter().find(|(m, _)| *m == n).map(|(m, p)| TabulatedCurve::new(format!("bw{m}-bdd"), p.to_vec()).expect("valid table"))
    }

    pub fn bw_bdd_all() -> Vec<(usize, Self)> {
        BW_BDD.iter().filter_map(|(m, _)| Some((*m, TabulatedCurve::bw_bdd(*m)?))).collect()
    }

    /// Λ24 point-error curve of the king decoder with E8 recursive-BDD
    /// children, measured here (4·10³ to 7·10⁵ trials per point).
    pub fn leech_qmld() -> Self {
        TabulatedCurve::new("leech-qmld", LEECH_QMLD.to_vec()).expect("valid table")
    }
}

const BW_BDD: [(usize, &[(f64, f64)]); 6] =
    [(4, &BW4_BDD), (8, &BW8_BDD), (16, &BW16_BDD), (32, &BW32_BDD), (64, &BW64_BDD), (128, &BW128_BDD)];

const LEECH_QMLD: [(f64, f64); 10] = [
    (-1.0, 5.57e-01),
    (-0.5, 4.02e-01),
    (0.0, 2.51e-01),
    (0.5, 1.40e-01),
    (1.0, 6.81e-02),
    (1.5, 2.56e-02),
    (2.0, 8.19e-03),
    (2.5, 2.06e-03),
    (3.0, 4.80e-04),
    (3.3, 9.0e-05),
];

const BW4_BDD: [(f64, f64); 12] = [
    (-1.0, 1.98e-01),
    (-0.5, 1.50e-01),
    (0.0, 1.06e-01),
    (0.5, 7.30e-02),
    (1.0, 4.83e-02),
    (1.5, 3.13e-02),
    (2.0, 1.89e-02),
    (2.5, 1.17e-02),
    (3.0, 5.55e-03),
    (3.5, 2.62e-03),
    (4.0, 1.03e-03),
    (4.5, 4.40e-04),
];

const BW8_BDD: [(f64, f64); 11] = [
    (-1.0, 3.10e-01),
    (-0.5, 2.32e-01),
    (0.0, 1.62e-01),
    (0.5, 1.04e-01),
    (1.0, 6.25e-02),
    (1.5, 3.66e-02),
    (2.0, 1.94e-02),
    (2.5, 8.17e-03),
    (3.0, 3.43e-03),
    (3.5, 1.19e-03),
    (4.0, 3.00e-04),
];

const BW16_BDD: [(f64, f64); 10] = [
    (-1.0, 4.84e-01),
    (-0.5, 3.55e-01),
    (0.0, 2.43e-01),
    (0.5, 1.57e-01),
    (1.0, 8.81e-02),
    (1.5, 4.53e-02),
    (2.0, 1.91e-02),
    (2.5, 7.32e-03),
    (3.0, 2.40e-03),
    (3.5, 5.85e-04),
];

const BW32_BDD: [(f64, f64); 10] = [
    (-1.0, 7.26e-01),
    (-0.5, 5.86e-01),
    (0.0, 4.20e-01),
    (0.5, 2.74e-01),
    (1.0, 1.55e-01),
    (1.5, 7.46e-02),
    (2.0, 2.66e-02),
    (2.5, 8.71e-03),
    (3.0, 2.39e-03),
    (3.5, 4.50e-04),
];

const BW64_BDD: [(f64, f64); 10] = [
    (-1.0, 9.40e-01),
    (-0.5, 8.62e-01),
    (0.0, 7.24e-01),
    (0.5, 5.40e-01),
    (1.0, 3.47e-01),
    (1.5, 1.83e-01),
    (2.0, 7.47e-02),
    (2.5, 2.36e-02),
    (3.0, 5.69e-03),
    (3.5, 8.20e-04),
];

const BW128_BDD: [(f64, f64); 11] = [
    (-1.0, 9.99e-01),
    (-0.5, 9.95e-01),
    (0.0, 9.67e-01),
    (0.5, 9.05e-01),
    (1.0, 7.63e-01),
    (1.5, 5.40e-01),
    (2.0, 3.06e-01),
    (2.5, 1.24e-01),
    (3.0, 3.45e-02),
    (3.5, 5.95e-03),
    (4.0, 5.67e-04),
];

/// U at depth 0 as a function of (δ, Δ).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseCondition {
    /// Regular list decoding of L_c at radius δ·d(L_c).
    ChiSquare { c: usize, d: f64, vol: f64 },
    /// Measured curve, independent of δ.
    Curve(TabulatedCurve),
}

impl BaseCondition {
    pub fn eval(&self, delta: f64, vnr: f64) -> Result<f64, Error> {
        match self {
            BaseCondition::ChiSquare { c, d, vol } => {
                chi_square_tail(*c, delta * d, sigma_sq(vol.powf(2.0 / *c as f64), vnr))
            }
            BaseCondition::Curve(t) => Ok(t.eval_db(linear_to_db(vnr))),
        }
    }

    /// vol^{2/c} of the base lattice, when known.
    pub fn vol_2n(&self) -> Option<f64> {
        match self {
            BaseCondition::ChiSquare { c, vol, .. } => Some(vol.powf(2.0 / *c as f64)),
            BaseCondition::Curve(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredictorFamily {
    /// Parity lattices: children see Δ/2^{1/k} and 2^{(k−1)/k}·Δ.
    Generic,
    /// k = 2 with the first splitting strategy.
    SplitK2,
    /// Turyn-type k-ing (Λ24 from E8, N72 from Λ24): children see Δ and 2Δ.
    Leech,
    Nebe,
}

impl PredictorFamily {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "generic" => Some(PredictorFamily::Generic),
            "split-k2" => Some(PredictorFamily::SplitK2),
            "leech" => Some(PredictorFamily::Leech),
            "nebe" => Some(PredictorFamily::Nebe),
            _ => None,
        }
    }
    pub fn name(self) -> &'static str {
        match self {
            PredictorFamily::Generic => "generic",
            PredictorFamily::SplitK2 => "split-k2",
            PredictorFamily::Leech => "leech",
            PredictorFamily::Nebe => "nebe",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictorSpec {
    pub family: PredictorFamily,
    pub k: usize,
    pub depth: usize,
    pub base: BaseCondition,
    /// Bounded-distance error curves by dimension. A level whose relative
    /// radius is at most 1/4 is decoded by BDD and evaluated from its curve.
    #[serde(default)]
    pub bdd_curves: Vec<(usize, TabulatedCurve)>,
}

impl PredictorSpec {
    pub fn new(family: PredictorFamily, k: usize, depth: usize, base: BaseCondition) -> Result<Self, Error> {
        let s = PredictorSpec { family, k, depth, base, bdd_curves: Vec::new() };
        s.validate()?;
        Ok(s)
    }

    /// Modified list decoding of BW_n from Z², with or without splitting.
    pub fn barnes_wall(n: usize, split: bool) -> Result<Self, Error> {
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::Domain(format!("BW needs a power-of-two dimension ≥ 4, got {n}")));
        }
        let family = if split { PredictorFamily::SplitK2 } else { PredictorFamily::Generic };
        let depth = n.trailing_zeros() as usize - 1;
        PredictorSpec::new(family, 2, depth, BaseCondition::ChiSquare { c: 2, d: 1.0, vol: 1.0 })
    }

    /// Λ24 decoded from E8 children (d = 2, vol = 1).
    pub fn leech() -> Self {
        PredictorSpec::new(PredictorFamily::Leech, 3, 1, BaseCondition::ChiSquare { c: 8, d: 2.0, vol: 1.0 }).expect("valid")
    }

    /// The 72-dimensional lattice over a measured Λ24 curve.
    pub fn nebe(base: TabulatedCurve) -> Self {
        PredictorSpec::new(PredictorFamily::Nebe, 3, 1, BaseCondition::Curve(base)).expect("valid")
    }

    /// L3x24 over Λ24 children with the given base.
    pub fn three_parity_leech(base: BaseCondition) -> Self {
        PredictorSpec::new(PredictorFamily::Generic, 3, 1, base).expect("valid")
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.k < 2 {
            return Err(Error::Domain("k must be at least 2".into()));
        }
        if self.family == PredictorFamily::SplitK2 && self.k != 2 {
            return Err(Error::Domain("the split recursion is only defined for k = 2".into()));
        }
        if matches!(self.family, PredictorFamily::Leech | PredictorFamily::Nebe) && self.k != 3 {
            return Err(Error::Domain("Turyn-type recursions have k = 3".into()));
        }
        if let BaseCondition::ChiSquare { c, d, vol } = &self.base {
            if *c < 2 || c % 2 != 0 || !(*d > 0.0) || !(*vol > 0.0) {
                return Err(Error::Domain("chi-square base needs even c ≥ 2, d > 0, vol > 0".into()));
            }
        }
        Ok(())
    }

    /// Dimension of the top lattice, when the base dimension is known.
    pub fn dim(&self) -> Option<usize> {
        match &self.base {
            BaseCondition::ChiSquare { c, .. } => Some(c * self.k.pow(self.depth as u32)),
            BaseCondition::Curve(_) => None,
        }
    }

    pub fn with_bdd_curves(mut self, curves: Vec<(usize, TabulatedCurve)>) -> Self {
        self.bdd_curves = curves;
        self
    }

    fn bdd_floor(&self, level: usize, delta: f64, vnr: f64) -> Option<f64> {
        if delta > 0.25 || self.bdd_curves.is_empty() {
            return None;
        }
        let BaseCondition::ChiSquare { c, .. } = &self.base else { return None };
        let dim = c * self.k.pow(level as u32);
        self.bdd_curves.iter().find(|(m, _)| *m == dim).map(|(_, t)| t.eval_db(linear_to_db(vnr)))
    }

    /// (T shift, V shift) applied to Δ at each level.
    fn shifts(&self) -> (f64, f64) {
        let k = self.k as f64;
        match self.family {
            PredictorFamily::Leech | PredictorFamily::Nebe => (1.0, 2.0),
            _ => (2f64.powf(-1.0 / k), 2f64.powf((k - 1.0) / k)),
        }
    }
}

fn binom2(k: usize) -> f64 {
    (k * (k - 1) / 2) as f64
}

/// Upper bound on P(x ∉ list) for the modified list decoder at relative
/// radius δ and linear VNR Δ of the top lattice.
pub fn u_recursion(spec: &PredictorSpec, delta: f64, vnr: f64) -> Result<f64, Error> {
    spec.validate()?;
    if !(delta >= 0.0) || !(vnr > 0.0) {
        return Err(Error::Domain("need δ ≥ 0 and Δ > 0".into()));
    }
    if spec.family == PredictorFamily::SplitK2 {
        return split_rec(spec, spec.depth, delta, vnr);
    }
    let (a, b) = spec.shifts();
    let k = spec.k;
    fn rec(spec: &PredictorSpec, level: usize, delta: f64, vnr: f64, a: f64, b: f64, k: usize) -> Result<f64, Error> {
        if let Some(p) = spec.bdd_floor(level, delta, vnr) {
            return Ok(p);
        }
        if level == 0 {
            return spec.base.eval(delta, vnr);
        }
        let ut = rec(spec, level - 1, delta, vnr * a, a, b, k)?;
        let uv = rec(spec, level - 1, delta, vnr * b, a, b, k)?;
        Ok((binom2(k) * ut * ut + k as f64 * uv * (1.0 - ut).powi(k as i32 - 1)).min(1.0))
    }
    rec(spec, spec.depth, delta, vnr, a, b, k)
}

/// The k = 2 recursion with the first splitting strategy.
pub fn u_recursion_split_k2(delta: f64, vnr: f64, depth: usize, base: &BaseCondition) -> Result<f64, Error> {
    let spec = PredictorSpec::new(PredictorFamily::SplitK2, 2, depth, base.clone())?;
    u_recursion(&spec, delta, vnr)
}

fn split_rec(spec: &PredictorSpec, level: usize, delta: f64, vnr: f64) -> Result<f64, Error> {
    if let Some(p) = spec.bdd_floor(level, delta, vnr) {
        return Ok(p);
    }
    if level == 0 {
        return spec.base.eval(delta, vnr);
    }
    let lo = vnr / 2f64.sqrt();
    let hi = vnr * 2f64.sqrt();
    let d23 = 2.0 * delta / 3.0;
    let ut = split_rec(spec, level - 1, delta, lo)?;
    let ut23 = split_rec(spec, level - 1, d23, lo)?;
    let uv23 = split_rec(spec, level - 1, d23, hi)?;
    let uv = split_rec(spec, level - 1, delta, hi)?;
    let mid = (ut23 - ut).max(0.0);
    Ok((ut * ut + 2.0 * (mid * uv23 + (1.0 - ut23) * uv)).min(1.0))
}

/// One level of the modified list decoder of an n-dimensional parity
/// lattice with regular children, in absolute terms: T-lists at r/2 and a
/// V-list at r, each child of dimension n/k.
pub fn depth_one_explicit(n: usize, k: usize, r: f64, sigma_sq: f64) -> Result<f64, Error> {
    if k < 2 || !n.is_multiple_of(k) {
        return Err(Error::Domain("n must be a multiple of k ≥ 2".into()));
    }
    let c = n / k;
    let ft = chi_square_tail(c, r / 2.0, sigma_sq)?;
    let fv = chi_square_tail(c, r, sigma_sq)?;
    Ok((binom2(k) * ft * ft + k as f64 * fv * (1.0 - ft).powi(k as i32 - 1)).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum DeltaStarMode {
    /// Regular list decoding of an n-dimensional lattice: F(n, δd, σ²) ≤ η·Pe.
    Regular { n: usize, d: f64, eta: f64 },
    /// Modified list decoding: U(δ, Δ) ≤ Pe.
    Modified(PredictorSpec),
}

pub const DEFAULT_ETA: f64 = 0.5;
const DELTA_MAX: f64 = 4.0;
const DELTA_TOL: f64 = 1e-4;

/// Smallest δ ∈ [0, 4] meeting the target, found by bisection to 1e-4.
/// `sigma_sq` is used in regular mode, `vnr` (linear) in modified mode.
pub fn delta_star(mode: &DeltaStarMode, sigma_sq: f64, vnr: f64, target_pe: f64) -> Result<f64, Error> {
    if !(target_pe > 0.0 && target_pe < 1.0) {
        return Err(Error::Domain(format!("target Pe must lie in (0, 1), got {target_pe}")));
    }
    let meets = |delta: f64| -> Result<bool, Error> {
        match mode {
            DeltaStarMode::Regular { n, d, eta } => Ok(chi_square_tail(*n, delta * d, sigma_sq)? <= eta * target_pe),
            DeltaStarMode::Modified(spec) => Ok(u_recursion(spec, delta, vnr)? <= target_pe),
        }
    };
    if !meets(DELTA_MAX)? {
        return Err(Error::Domain(format!("target Pe {target_pe} is not reached for δ ≤ {DELTA_MAX}")));
    }
    let (mut lo, mut hi) = (0.0, DELTA_MAX);
    if meets(lo)? {
        return Ok(0.0);
    }
    while hi - lo > DELTA_TOL {
        let mid = 0.5 * (lo + hi);
        if meets(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_edges() {
        assert_eq!(chi_square_tail(8, 0.0, 1.0).unwrap(), 1.0);
        for &r in &[0.1, 1.0, 7.5] {
            assert!((chi_square_tail(2, r, 0.7).unwrap() - (-r / 1.4).exp()).abs() < 1e-15);
        }
        assert!(chi_square_tail(3, 1.0, 1.0).is_err());
        assert!(chi_square_tail(4, -1.0, 1.0).is_err());
        // large n stays finite
        let v = chi_square_tail(512, 400.0, 1.0).unwrap();
        assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn tail_matches_closed_form_n4() {
        let (r, s): (f64, f64) = (3.0, 0.4);
        let x = r / (2.0 * s);
        assert!((chi_square_tail(4, r, s).unwrap() - (-x).exp() * (1.0 + x)).abs() < 1e-14);
    }

    #[test]
    fn johnson_values() {
        assert_eq!(johnson_bound(24, 0.25).unwrap(), 2);
        assert_eq!(johnson_bound(24, 0.5).unwrap(), 48);
        assert_eq!(johnson_bound(24, 25.0 / 64.0).unwrap(), 4);
        assert_eq!(johnson_bound(24, 0.1).unwrap(), 1);
        assert!(johnson_bound(24, 0.6).is_err());
    }

    #[test]
    fn curve_interpolates_log_linearly() {
        let c = TabulatedCurve::new("t", vec![(0.0, 1e-1), (2.0, 1e-3)]).unwrap();
        assert!((c.eval_db(1.0) - 1e-2).abs() < 1e-15);
        assert!((c.eval_db(3.0) - 1e-4).abs() < 1e-15);
        assert!(TabulatedCurve::new("t", vec![(1.0, 0.1), (1.0, 0.01)]).is_err());
        let p = TabulatedCurve::parse("p", "vnr_db,pe\n0,0.1\n# c\n2,0.001\n").unwrap();
        assert_eq!(p, TabulatedCurve { name: "p".into(), points: c.points.clone() });
    }

    #[test]
    fn zero_base_gives_zero() {
        let base = BaseCondition::Curve(TabulatedCurve::new("z", vec![(0.0, 1e-300), (1.0, 1e-300)]).unwrap());
        let s = PredictorSpec::new(PredictorFamily::Generic, 3, 2, base.clone()).unwrap();
        assert!(u_recursion(&s, 0.3, 2.0).unwrap() < 1e-290);
        assert!(u_recursion_split_k2(0.3, 2.0, 3, &base).unwrap() < 1e-290);
    }

    #[test]
    fn spec_validation() {
        let b = BaseCondition::ChiSquare { c: 2, d: 1.0, vol: 1.0 };
        assert!(PredictorSpec::new(PredictorFamily::SplitK2, 3, 1, b.clone()).is_err());
        assert!(PredictorSpec::new(PredictorFamily::Leech, 2, 1, b).is_err());
        assert!(PredictorSpec::barnes_wall(12, false).is_err());
        assert_eq!(PredictorSpec::barnes_wall(64, true).unwrap().dim(), Some(64));
    }

    #[test]
    fn delta_star_rejects_bad_targets() {
        let m = DeltaStarMode::Regular { n: 24, d: 4.0, eta: DEFAULT_ETA };
        assert!(delta_star(&m, 0.05, 1.0, 0.0).is_err());
        assert!(delta_star(&m, 0.05, 1.0, 1.0).is_err());
        assert!(delta_star(&m, 100.0, 1.0, 1e-9).is_err());
    }
}
