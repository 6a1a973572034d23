use super::{better, finalize, Candidate, Counters, Decoder, ListConfig};
use crate::Error;
use std::sync::Arc;

/// Decoder for Γ(V,α,β,k) = ∪_{m∈α} Γ(V,β,k)_P + (m,…,m): runs the inner
/// parity decoder on every shift.
pub struct KingDecoder {
    reps: Vec<Vec<f64>>,
    k: usize,
    inner: Arc<dyn Decoder>,
    d: f64,
    cfg: Arc<ListConfig>,
    level: usize,
}

impl KingDecoder {
    pub fn new(reps: Vec<Vec<f64>>, k: usize, inner: Arc<dyn Decoder>, d: f64, cfg: Arc<ListConfig>, level: usize) -> Result<Self, Error> {
        if reps.is_empty() || reps.iter().any(|m| m.len() * k != inner.dim()) {
            return Err(Error::Shape("coset representatives do not match the inner decoder".into()));
        }
        cfg.validate()?;
        Ok(KingDecoder { reps, k, inner, d, cfg, level })
    }

    pub fn cosets(&self) -> usize {
        self.reps.len()
    }
    pub fn arity(&self) -> usize {
        self.k
    }

    fn shifted(&self, y: &[f64], m: &[f64], sign: f64) -> Vec<f64> {
        let n = m.len();
        y.iter().enumerate().map(|(i, v)| v + sign * m[i % n]).collect()
    }
}

impl Decoder for KingDecoder {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn min_sq_norm(&self) -> f64 {
        self.d
    }

    fn bdd(&self, y: &[f64], c: &mut Counters) -> Result<Option<Candidate>, Error> {
        c.hit_level(self.level);
        let tol = self.cfg.tie_epsilon * self.d;
        let mut best: Option<Candidate> = None;
        for m in &self.reps {
            if let Some(x) = self.inner.bdd(&self.shifted(y, m, -1.0), c)? {
                let cand = Candidate::new(self.shifted(&x.point, m, 1.0), y);
                if best.as_ref().is_none_or(|b| better(&cand, b, tol)) {
                    best = Some(cand);
                }
            }
        }
        Ok(best)
    }

    fn list(&self, y: &[f64], r: f64, c: &mut Counters) -> Result<Vec<Candidate>, Error> {
        c.hit_level(self.level);
        let tol = self.cfg.tie_epsilon * self.d;
        let mut all = Vec::new();
        for m in &self.reps {
            for x in self.inner.list(&self.shifted(y, m, -1.0), r, c)? {
                all.push(Candidate::new(self.shifted(&x.point, m, 1.0), y));
            }
        }
        let keep = self.cfg.removing_step.then_some(r + tol);
        Ok(finalize(all, keep, self.cfg.aleph_cap(r / self.d), tol, c))
    }
}
