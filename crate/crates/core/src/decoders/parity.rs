use super::{better, finalize, Candidate, Counters, Decoder, ListConfig};
use crate::Error;
use std::collections::HashMap;
use std::sync::Arc;

/// Decoder for Γ(V,β,k)_P = {(t_1..t_k) : t_i ∈ T, Σ t_i ∈ V} with
/// d(V) = 2·d(T).
pub struct ParityDecoder {
    t: Arc<dyn Decoder>,
    v: Arc<dyn Decoder>,
    k: usize,
    m: usize,
    d: f64,
    cfg: Arc<ListConfig>,
    level: usize,
}

/// One way of generating candidates: block i comes from the V-list at
/// `v_r`, block j ≠ i from the T-list at `t_r[j]`.
struct Pass {
    i: usize,
    v_r: f64,
    t_r: Vec<f64>,
}

impl ParityDecoder {
    pub fn new(t: Arc<dyn Decoder>, v: Arc<dyn Decoder>, k: usize, cfg: Arc<ListConfig>, level: usize) -> Result<Self, Error> {
        if t.dim() != v.dim() {
            return Err(Error::Shape("T and V decoders differ in dimension".into()));
        }
        if k < 2 {
            return Err(Error::Domain("arity must be at least 2".into()));
        }
        cfg.validate()?;
        let d = v.min_sq_norm().min(2.0 * t.min_sq_norm());
        Ok(ParityDecoder { m: t.dim(), t, v, k, d, cfg, level })
    }

    fn block<'a>(&self, y: &'a [f64], j: usize) -> &'a [f64] {
        &y[j * self.m..(j + 1) * self.m]
    }

    fn tol(&self) -> f64 {
        self.cfg.tie_epsilon * self.d
    }

    fn passes(&self, r: f64) -> Vec<Pass> {
        let k = self.k;
        let a = self.cfg.split_ratio;
        let mut out = Vec::new();
        for i in 0..k {
            let with = |t_other: f64, special: Option<(usize, f64)>, v_r: f64| {
                let t_r = (0..k)
                    .map(|j| match special {
                        Some((l, rl)) if l == j => rl,
                        _ => t_other,
                    })
                    .collect();
                Pass { i, v_r, t_r }
            };
            if !self.cfg.split1 {
                // at most one block carries more than half of the error
                out.push(with(r / 2.0, None, r));
                continue;
            }
            if self.cfg.split2 && k >= 3 {
                // i carries the largest error e_i ≤ a·r; l the second largest
                for l in (0..k).filter(|&l| l != i) {
                    out.push(with(r / 4.0, Some((l, r / 2.0)), a * r));
                    if self.cfg.balanced_pass {
                        out.push(with(r / 3.0, Some((l, r / 2.0)), r / 2.0));
                    }
                }
            } else {
                out.push(with(r / 2.0, None, a * r));
            }
            // e_i > a·r leaves less than (1 − a)·r for the other blocks
            out.push(with((1.0 - a) * r, None, r));
        }
        out
    }
}

impl Decoder for ParityDecoder {
    fn dim(&self) -> usize {
        self.k * self.m
    }
    fn min_sq_norm(&self) -> f64 {
        self.d
    }

    fn bdd(&self, y: &[f64], c: &mut Counters) -> Result<Option<Candidate>, Error> {
        c.hit_level(self.level);
        let mut ts = Vec::with_capacity(self.k);
        for j in 0..self.k {
            match self.t.bdd(self.block(y, j), c)? {
                Some(x) => ts.push(x.point),
                None => return Ok(None),
            }
        }
        let mut total = vec![0.0; self.m];
        for t in &ts {
            total.iter_mut().zip(t).for_each(|(a, b)| *a += b);
        }
        let mut best: Option<Candidate> = None;
        for i in 0..self.k {
            // s = Σ_{j≠i} t_j; block i must make the sum land in V
            let s: Vec<f64> = total.iter().zip(&ts[i]).map(|(a, b)| a - b).collect();
            let target: Vec<f64> = self.block(y, i).iter().zip(&s).map(|(a, b)| a + b).collect();
            let Some(v) = self.v.bdd(&target, c)? else { continue };
            let mut p = Vec::with_capacity(self.dim());
            for (j, t) in ts.iter().enumerate() {
                if j == i {
                    p.extend(v.point.iter().zip(&s).map(|(a, b)| a - b));
                } else {
                    p.extend_from_slice(t);
                }
            }
            let cand = Candidate::new(p, y);
            c.generated += 1;
            if best.as_ref().is_none_or(|b| better(&cand, b, self.tol())) {
                best = Some(cand);
            }
        }
        Ok(best)
    }

    fn list(&self, y: &[f64], r: f64, c: &mut Counters) -> Result<Vec<Candidate>, Error> {
        let rel = r / self.d;
        if self.cfg.floors() && rel <= 0.25 {
            return Ok(self.bdd(y, c)?.into_iter().collect());
        }
        c.hit_level(self.level);
        let mut cache: HashMap<(usize, u64), Vec<Candidate>> = HashMap::new();
        let mut cands = Vec::new();
        for pass in self.passes(r) {
            let others: Vec<usize> = (0..self.k).filter(|&j| j != pass.i).collect();
            let mut lists: Vec<&Vec<Candidate>> = Vec::with_capacity(others.len());
            for &j in &others {
                let key = (j, pass.t_r[j].to_bits());
                if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(key) {
                    let l = self.t.list(self.block(y, j), pass.t_r[j], c)?;
                    e.insert(l);
                }
            }
            for &j in &others {
                lists.push(&cache[&(j, pass.t_r[j].to_bits())]);
            }
            if lists.iter().any(|l| l.is_empty()) {
                continue;
            }
            let yi = self.block(y, pass.i);
            let mut idx = vec![0usize; others.len()];
            loop {
                let mut s = vec![0.0; self.m];
                for (l, &ix) in lists.iter().zip(&idx) {
                    s.iter_mut().zip(&l[ix].point).for_each(|(a, b)| *a += b);
                }
                let target: Vec<f64> = yi.iter().zip(&s).map(|(a, b)| a + b).collect();
                for v in self.v.list(&target, pass.v_r, c)? {
                    let mut p = vec![0.0; self.dim()];
                    for (o, (&j, &ix)) in others.iter().zip(&idx).enumerate() {
                        p[j * self.m..(j + 1) * self.m].copy_from_slice(&lists[o][ix].point);
                    }
                    for (q, (a, b)) in p[pass.i * self.m..(pass.i + 1) * self.m].iter_mut().zip(v.point.iter().zip(&s)) {
                        *q = a - b;
                    }
                    cands.push(Candidate::new(p, y));
                }
                // odometer over the product of the other blocks' lists
                let mut pos = 0;
                loop {
                    if pos == idx.len() {
                        break;
                    }
                    idx[pos] += 1;
                    if idx[pos] < lists[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == idx.len() {
                    break;
                }
            }
        }
        c.generated += cands.len() as u64;
        let keep = self.cfg.removing_step.then_some(r + self.tol());
        Ok(finalize(cands, keep, self.cfg.aleph_cap(rel), self.tol(), c))
    }
}
