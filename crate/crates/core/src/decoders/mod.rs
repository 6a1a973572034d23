//! Decoders: sphere enumeration, parity-check decoding (bounded distance,
//! list, splitting), k-ing decoding, recursive chains and the Leech / N72
//! compositions.
//!
//! Radii passed to [`Decoder::list`] are absolute squared radii. Every
//! composite decoder converts them to the radius its children need, so the
//! relative radius r/d is preserved down a recursion.

mod build;
mod handle;
mod king;
mod parity;

pub use build::*;
pub use handle::*;
pub use king::KingDecoder;
pub use parity::ParityDecoder;

use crate::enumerate::{dist_sq, invert, Budget, Sphere};
use crate::lattice::LatticeBasis;
use crate::Error;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Candidate {
    pub point: Vec<f64>,
    pub dist_sq: f64,
}

impl Candidate {
    pub fn new(point: Vec<f64>, y: &[f64]) -> Self {
        let dist_sq = dist_sq(&point, y);
        Candidate { point, dist_sq }
    }
}

/// Work accounting for one decode call.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counters {
    /// Calls into base (enumeration) decoders.
    pub base_calls: u64,
    /// Invocations of composite decoders, indexed by recursion level.
    pub level_calls: Vec<u64>,
    pub generated: u64,
    pub pruned: u64,
    /// Enumeration nodes visited.
    pub nodes: u64,
    #[serde(skip)]
    pub max_nodes: u64,
}

impl Default for Counters {
    fn default() -> Self {
        Counters::new(u64::MAX)
    }
}

impl Counters {
    pub fn new(max_nodes: u64) -> Self {
        Counters { base_calls: 0, level_calls: Vec::new(), generated: 0, pruned: 0, nodes: 0, max_nodes }
    }

    pub fn hit_level(&mut self, level: usize) {
        if self.level_calls.len() <= level {
            self.level_calls.resize(level + 1, 0);
        }
        self.level_calls[level] += 1;
    }

    pub fn absorb(&mut self, o: &Counters) {
        self.base_calls += o.base_calls;
        self.generated += o.generated;
        self.pruned += o.pruned;
        self.nodes += o.nodes;
        if self.level_calls.len() < o.level_calls.len() {
            self.level_calls.resize(o.level_calls.len(), 0);
        }
        for (a, b) in self.level_calls.iter_mut().zip(&o.level_calls) {
            *a += b;
        }
    }

    fn budget(&self) -> Budget {
        Budget { nodes: self.nodes, max_nodes: self.max_nodes }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ListConfig {
    /// Relative radius δ; the decoding radius is δ·d(Λ).
    pub delta: f64,
    /// Drop candidates outside the ball at every level (regular decoder).
    pub removing_step: bool,
    pub split1: bool,
    pub split2: bool,
    /// Caps on kept candidates, keyed by relative radius.
    pub aleph: Vec<(f64, usize)>,
    /// Ball-boundary slack, relative to d(Λ).
    pub tie_epsilon: f64,
    /// Fraction a of the radius given to the V-decoder in the first
    /// splitting pass; the second pass lists T-blocks at (1 − a)·r.
    pub split_ratio: f64,
    /// Extra pass (T_l at r/2, other blocks at r/3, V at r/2) that makes
    /// the second-level split complete for k ≥ 3.
    pub balanced_pass: bool,
    /// Without the removing step, answer radii r ≤ d/4 by bounded-distance
    /// decoding instead of a possibly empty ball.
    pub bdd_floor: bool,
}

impl Default for ListConfig {
    fn default() -> Self {
        ListConfig {
            delta: 0.5,
            removing_step: true,
            split1: false,
            split2: false,
            aleph: Vec::new(),
            tie_epsilon: 1e-9,
            split_ratio: 2.0 / 3.0,
            balanced_pass: true,
            bdd_floor: true,
        }
    }
}

impl ListConfig {
    pub fn regular(delta: f64) -> Self {
        ListConfig { delta, ..Default::default() }
    }

    pub fn modified(delta: f64) -> Self {
        ListConfig { delta, removing_step: false, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return Err(Error::Domain(format!("relative radius must be ≥ 0, got {}", self.delta)));
        }
        if self.split2 && !self.split1 {
            return Err(Error::Domain("split2 requires split1".into()));
        }
        if self.aleph.iter().any(|&(r, c)| c < 1 || !(r >= 0.0)) {
            return Err(Error::Domain("list caps must be ≥ 1 at non-negative radii".into()));
        }
        if !(self.split_ratio >= 0.5 && self.split_ratio < 1.0) {
            return Err(Error::Domain("split ratio must lie in [1/2, 1)".into()));
        }
        if !(self.tie_epsilon >= 0.0) {
            return Err(Error::Domain("tie epsilon must be ≥ 0".into()));
        }
        Ok(())
    }

    /// Cap for a relative radius: the entry with the largest key ≤ rel.
    pub fn aleph_cap(&self, rel: f64) -> Option<usize> {
        self.aleph
            .iter()
            .filter(|(r, _)| *r <= rel + 1e-9)
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .map(|&(_, c)| c)
    }

    pub(crate) fn floors(&self) -> bool {
        !self.removing_step && self.bdd_floor
    }
}

pub trait Decoder: Send + Sync {
    fn dim(&self) -> usize;
    fn min_sq_norm(&self) -> f64;
    /// Lattice points within squared distance `radius_sq` of y (exactly, for
    /// regular decoders), sorted by distance then lexicographically.
    fn list(&self, y: &[f64], radius_sq: f64, c: &mut Counters) -> Result<Vec<Candidate>, Error>;
    /// A single lattice point, correct whenever y is within the packing
    /// radius.
    fn bdd(&self, y: &[f64], c: &mut Counters) -> Result<Option<Candidate>, Error>;
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Strictly closer, or equally close and lexicographically smaller.
pub(crate) fn better(a: &Candidate, b: &Candidate, tol: f64) -> bool {
    if a.dist_sq < b.dist_sq - tol {
        true
    } else if a.dist_sq > b.dist_sq + tol {
        false
    } else {
        lex_cmp(&a.point, &b.point) == Ordering::Less
    }
}

fn dedup_key(p: &[f64]) -> Vec<i64> {
    p.iter().map(|x| (x * 1e6).round() as i64).collect()
}

/// Filter (optional), dedup, canonical order, cap (optional).
pub(crate) fn finalize(
    cands: Vec<Candidate>,
    keep_within: Option<f64>,
    cap: Option<usize>,
    tol: f64,
    c: &mut Counters,
) -> Vec<Candidate> {
    let before = cands.len();
    let mut seen = HashSet::with_capacity(cands.len());
    let mut out: Vec<Candidate> = cands
        .into_iter()
        .filter(|x| keep_within.is_none_or(|r| x.dist_sq <= r))
        .filter(|x| seen.insert(dedup_key(&x.point)))
        .collect();
    out.sort_by(|a, b| a.dist_sq.total_cmp(&b.dist_sq));
    // equal-distance runs go in lexicographic order
    let mut s = 0;
    while s < out.len() {
        let mut e = s + 1;
        while e < out.len() && out[e].dist_sq - out[e - 1].dist_sq <= tol {
            e += 1;
        }
        if e - s > 1 {
            out[s..e].sort_by(|a, b| lex_cmp(&a.point, &b.point));
        }
        s = e;
    }
    if let Some(m) = cap {
        out.truncate(m);
    }
    c.pruned += (before - out.len()) as u64;
    out
}

/// Fincke-Pohst list decoding and Schnorr-Euchner nearest point on a basis.
pub struct SphereDecoder {
    sphere: Sphere,
    d: f64,
    floor: bool,
    tie: f64,
    // Z^n itself: nearest point by rounding
    cubic: bool,
}

impl SphereDecoder {
    pub fn new(l: &LatticeBasis) -> Result<Self, Error> {
        let d = l
            .min_sq_norm()
            .ok_or_else(|| Error::Domain(format!("{}: minimum distance unknown", l.name)))?
            .value;
        let g = l.generator();
        let cubic = g.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == if i == j { 1.0 } else { 0.0 }));
        Ok(SphereDecoder { sphere: l.sphere().clone(), d, floor: false, tie: 1e-9 * d, cubic })
    }

    /// With `floor`, radii r ≤ d/4 return the nearest point.
    pub fn with_floor(mut self, floor: bool) -> Self {
        self.floor = floor;
        self
    }
}

impl Decoder for SphereDecoder {
    fn dim(&self) -> usize {
        self.sphere.dim()
    }
    fn min_sq_norm(&self) -> f64 {
        self.d
    }
    fn list(&self, y: &[f64], r: f64, c: &mut Counters) -> Result<Vec<Candidate>, Error> {
        if self.floor && r <= self.d / 4.0 {
            return Ok(self.bdd(y, c)?.into_iter().collect());
        }
        c.base_calls += 1;
        let mut b = c.budget();
        let found = self.sphere.list(y, r + self.tie, &mut b);
        c.nodes = b.nodes;
        let cands: Vec<Candidate> = found?.into_iter().map(|(p, d)| Candidate { point: p, dist_sq: d }).collect();
        c.generated += cands.len() as u64;
        Ok(finalize(cands, None, None, self.tie, c))
    }
    fn bdd(&self, y: &[f64], c: &mut Counters) -> Result<Option<Candidate>, Error> {
        c.base_calls += 1;
        if self.cubic {
            return Ok(Some(Candidate::new(y.iter().map(|v| v.round()).collect(), y)));
        }
        let mut b = c.budget();
        let found = self.sphere.nearest(y, &mut b);
        c.nodes = b.nodes;
        let (p, d) = found?;
        Ok(Some(Candidate { point: p, dist_sq: d }))
    }
}

/// Decoder for c·Λ given one for Λ, with c a complex scalar acting blockwise
/// (or a real scalar when the imaginary part is zero).
pub struct Scaled {
    inner: Arc<dyn Decoder>,
    c: (f64, f64),
    abs_sq: f64,
}

impl Scaled {
    pub fn new(inner: Arc<dyn Decoder>, c: (f64, f64)) -> Result<Self, Error> {
        if c.1 != 0.0 && !inner.dim().is_multiple_of(2) {
            return Err(Error::OddDimension(inner.dim()));
        }
        let abs_sq = c.0 * c.0 + c.1 * c.1;
        if abs_sq == 0.0 {
            return Err(Error::Singular);
        }
        Ok(Scaled { inner, c, abs_sq })
    }

    fn apply(&self, y: &mut [f64], c: (f64, f64)) {
        if c.1 == 0.0 {
            y.iter_mut().for_each(|x| *x *= c.0);
        } else {
            crate::ring::mul_blocks(y, c);
        }
    }
    fn down(&self, y: &[f64]) -> Vec<f64> {
        let mut z = y.to_vec();
        self.apply(&mut z, (self.c.0 / self.abs_sq, -self.c.1 / self.abs_sq));
        z
    }
    fn up(&self, mut p: Vec<f64>, y: &[f64]) -> Candidate {
        self.apply(&mut p, self.c);
        Candidate::new(p, y)
    }
}

impl Decoder for Scaled {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn min_sq_norm(&self) -> f64 {
        self.inner.min_sq_norm() * self.abs_sq
    }
    fn list(&self, y: &[f64], r: f64, c: &mut Counters) -> Result<Vec<Candidate>, Error> {
        let l = self.inner.list(&self.down(y), r / self.abs_sq, c)?;
        Ok(l.into_iter().map(|x| self.up(x.point, y)).collect())
    }
    fn bdd(&self, y: &[f64], c: &mut Counters) -> Result<Option<Candidate>, Error> {
        Ok(self.inner.bdd(&self.down(y), c)?.map(|x| self.up(x.point, y)))
    }
}

/// Decoder for Λ·M where M·Mᵀ = s²·I.
pub struct Isometric {
    inner: Arc<dyn Decoder>,
    m: Vec<f64>,
    minv: Vec<f64>,
    s2: f64,
}

impl Isometric {
    pub fn new(inner: Arc<dyn Decoder>, m: Vec<Vec<f64>>) -> Result<Self, Error> {
        let n = inner.dim();
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("similarity must be n×n".into()));
        }
        let s2: f64 = m[0].iter().map(|x| x * x).sum();
        for i in 0..n {
            for j in 0..n {
                let g: f64 = m[i].iter().zip(&m[j]).map(|(a, b)| a * b).sum();
                let want = if i == j { s2 } else { 0.0 };
                if (g - want).abs() > 1e-9 * s2 {
                    return Err(Error::Verification("map is not a similarity".into()));
                }
            }
        }
        let flat: Vec<f64> = m.into_iter().flatten().collect();
        let minv = invert(&flat, n).ok_or(Error::Singular)?;
        Ok(Isometric { inner, m: flat, minv, s2 })
    }

    fn times(v: &[f64], m: &[f64]) -> Vec<f64> {
        let n = v.len();
        let mut out = vec![0.0; n];
        for (k, &x) in v.iter().enumerate() {
            if x != 0.0 {
                for (o, g) in out.iter_mut().zip(&m[k * n..(k + 1) * n]) {
                    *o += x * g;
                }
            }
        }
        out
    }
}

impl Decoder for Isometric {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn min_sq_norm(&self) -> f64 {
        self.inner.min_sq_norm() * self.s2
    }
    fn list(&self, y: &[f64], r: f64, c: &mut Counters) -> Result<Vec<Candidate>, Error> {
        let l = self.inner.list(&Self::times(y, &self.minv), r / self.s2, c)?;
        Ok(l.into_iter().map(|x| Candidate::new(Self::times(&x.point, &self.m), y)).collect())
    }
    fn bdd(&self, y: &[f64], c: &mut Counters) -> Result<Option<Candidate>, Error> {
        let x = self.inner.bdd(&Self::times(y, &self.minv), c)?;
        Ok(x.map(|x| Candidate::new(Self::times(&x.point, &self.m), y)))
    }
}
