//! Assembly of decoder trees for the lattice families.

use super::{Decoder, Isometric, KingDecoder, ListConfig, ParityDecoder, Scaled, SphereDecoder};
use crate::constructions::{self, NebeBuild};
use crate::enumerate::invert;
use crate::exact::Surd;
use crate::lattice::{shell, CosetSystem, LatticeBasis};
use crate::ring::{CNum, Theta};
use crate::Error;
use num_rational::BigRational;
use std::collections::HashSet;
use std::sync::Arc;

pub type DynDecoder = Arc<dyn Decoder>;

pub fn sphere(l: &LatticeBasis, cfg: &ListConfig) -> Result<DynDecoder, Error> {
    Ok(Arc::new(SphereDecoder::new(l)?.with_floor(cfg.floors())))
}

/// Decoders for L_c, L_{ck}, … where L_{kn} = Γ(θL_n, β, k)_P. Level j uses
/// level j−1 for T and its θ-multiple for V.
pub fn recursive_chain(base: DynDecoder, theta: Theta, k: usize, depth: usize, cfg: Arc<ListConfig>) -> Result<Vec<DynDecoder>, Error> {
    let th = theta.as_f64();
    let mut levels = vec![base];
    for j in 1..=depth {
        let t = levels[j - 1].clone();
        let v: DynDecoder = Arc::new(Scaled::new(t.clone(), th)?);
        levels.push(Arc::new(ParityDecoder::new(t, v, k, cfg.clone(), j)?));
    }
    Ok(levels)
}

/// Recursive decoder for BW_n over Z² (n ≥ 2 a power of two).
pub fn bw_recursive(n: usize, cfg: Arc<ListConfig>) -> Result<DynDecoder, Error> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::Domain(format!("BW needs a power-of-two dimension, got {n}")));
    }
    let depth = n.trailing_zeros() as usize - 1;
    let base = sphere(&constructions::z2(), &cfg)?;
    Ok(recursive_chain(base, Theta::Phi, 2, depth, cfg)?.pop().expect("nonempty"))
}

/// Single-level parity decoder whose T and V children enumerate directly.
pub fn parity_over(t: &LatticeBasis, v: &LatticeBasis, k: usize, cfg: Arc<ListConfig>) -> Result<ParityDecoder, Error> {
    ParityDecoder::new(sphere(t, &cfg)?, sphere(v, &cfg)?, k, cfg, 1)
}

/// The pieces of Λ24 = Pb ⊗ G_S as a 3-ing: parity blocks in ψS with block
/// sum in 2S, plus repeated offsets from [λS/2S].
#[derive(Clone, Debug)]
pub struct TurynParts {
    pub s: LatticeBasis,
    pub t: LatticeBasis,
    pub v: LatticeBasis,
    pub t_star: LatticeBasis,
    pub alpha: CosetSystem,
    pub d: f64,
}

pub fn turyn_parts(s: &LatticeBasis, d: f64, max_reps: u64) -> Result<TurynParts, Error> {
    let t = s.scale_by(&Theta::Psi.cnum(), "ψS")?;
    let t_star = s.scale_by(&Theta::Lambda.cnum(), "λS")?;
    let v = s.scaled_rational(&BigRational::from_integer(2.into()), "2S")?;
    let alpha = CosetSystem::new(&t_star, &v, max_reps)?;
    Ok(TurynParts { s: s.clone(), t, v, t_star, alpha, d })
}

pub fn leech_parts() -> Result<TurynParts, Error> {
    turyn_parts(&constructions::e8_half_lambda(), 4.0, 1 << 8)
}

fn king_over(parts: &TurynParts, t: DynDecoder, v: DynDecoder, cfg: Arc<ListConfig>, level: usize) -> Result<KingDecoder, Error> {
    let inner: DynDecoder = Arc::new(ParityDecoder::new(t, v, 3, cfg.clone(), level)?);
    KingDecoder::new(parts.alpha.reps.clone(), 3, inner, parts.d, cfg, level + 1)
}

/// Λ24 list decoder with enumerating children. At δ = 1/2 it returns every
/// point within the covering radius, hence the closest one.
pub fn leech_list(parts: &TurynParts, cfg: Arc<ListConfig>) -> Result<KingDecoder, Error> {
    king_over(parts, sphere(&parts.t, &cfg)?, sphere(&parts.v, &cfg)?, cfg, 1)
}

/// Λ24 bounded-distance decoder: 16 cosets, each decoded by the parity
/// bounded-distance decoder whose six children are recursive E8 decoders.
pub fn leech_qmld(parts: &TurynParts) -> Result<KingDecoder, Error> {
    let cfg = Arc::new(ListConfig::regular(0.25));
    let e8 = e8_bdd_onto(&parts.t)?;
    let v: DynDecoder = Arc::new(Scaled::new(e8.clone(), Theta::Lambda.as_f64())?);
    king_over(parts, e8, v, cfg, 3)
}

/// Recursive BW8 decoder carried onto an E8-type lattice (d = 2) by a
/// similarity found from simple roots.
pub fn e8_bdd_onto(target: &LatticeBasis) -> Result<DynDecoder, Error> {
    let bw8 = constructions::barnes_wall(8)?;
    let m = root_similarity(bw8.lattice(), target, 1 << 24)?;
    let chain = bw_recursive(8, Arc::new(ListConfig::regular(0.25)))?;
    Ok(Arc::new(Isometric::new(chain, m)?))
}

/// Similarity M with `from`·M = `to` for two lattices generated by their
/// minimal vectors with the same root system (matched through simple roots).
pub fn root_similarity(from: &LatticeBasis, to: &LatticeBasis, max_nodes: u64) -> Result<Vec<Vec<f64>>, Error> {
    let n = from.dim();
    if to.dim() != n {
        return Err(Error::Shape("dimension mismatch".into()));
    }
    let sa = simple_roots(from, max_nodes)?;
    let sb = simple_roots(to, max_nodes)?;
    if sa.len() != n || sb.len() != n {
        return Err(Error::Verification("minimal vectors do not form a rank-n root system".into()));
    }
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let scale = dot(&sb[0], &sb[0]) / dot(&sa[0], &sa[0]);
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn assign(
        i: usize,
        perm: &mut Vec<usize>,
        used: &mut [bool],
        ok: &dyn Fn(&[usize], usize) -> bool,
        n: usize,
    ) -> bool {
        if i == n {
            return true;
        }
        for j in 0..n {
            if !used[j] && ok(perm, j) {
                used[j] = true;
                perm.push(j);
                if assign(i + 1, perm, used, ok, n) {
                    return true;
                }
                perm.pop();
                used[j] = false;
            }
        }
        false
    }
    let ok = |p: &[usize], j: usize| {
        let i = p.len();
        (dot(&sb[j], &sb[j]) - scale * dot(&sa[i], &sa[i])).abs() < 1e-6
            && p.iter().enumerate().all(|(i2, &j2)| (dot(&sb[j2], &sb[j]) - scale * dot(&sa[i2], &sa[i])).abs() < 1e-6)
    };
    if !assign(0, &mut perm, &mut used, &ok, n) {
        return Err(Error::Verification("root systems do not match".into()));
    }
    let a: Vec<f64> = sa.iter().flatten().copied().collect();
    let ainv = invert(&a, n).ok_or(Error::Singular)?;
    let m: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| ainv[i * n + k] * sb[perm[k]][j]).sum()).collect())
        .collect();
    for g in from.generator() {
        let x: Vec<f64> = (0..n).map(|j| (0..n).map(|k| g[k] * m[k][j]).sum()).collect();
        if !to.contains_f64(&x, 1e-6) {
            return Err(Error::Verification("similarity does not map the lattice".into()));
        }
    }
    Ok(m)
}

fn simple_roots(l: &LatticeBasis, max_nodes: u64) -> Result<Vec<Vec<f64>>, Error> {
    let d = l.min_sq_norm().ok_or(Error::Domain("minimum distance unknown".into()))?.value;
    let roots = shell(l, d, true, true, max_nodes)?.vectors.unwrap_or_default();
    let n = l.dim();
    // a generic functional splits the roots into positive and negative
    let f: Vec<f64> = (0..n).map(|i| 1.0 + ((i + 2) as f64).sqrt() * 1e-2 + (i as f64) * 1e-4).collect();
    let val = |r: &[f64]| r.iter().zip(&f).map(|(a, b)| a * b).sum::<f64>();
    let key = |r: &[f64]| r.iter().map(|x| (x * 1e6).round() as i64).collect::<Vec<_>>();
    let pos: Vec<&Vec<f64>> = roots.iter().filter(|r| val(r) > 0.0).collect();
    let set: HashSet<Vec<i64>> = pos.iter().map(|r| key(r)).collect();
    let mut simple: Vec<Vec<f64>> = pos
        .iter()
        .filter(|r| {
            !pos.iter().any(|p| {
                let diff: Vec<f64> = r.iter().zip(p.iter()).map(|(a, b)| a - b).collect();
                set.contains(&key(&diff))
            })
        })
        .map(|r| r.to_vec())
        .collect();
    simple.sort_by(|a, b| val(a).total_cmp(&val(b)));
    Ok(simple)
}

/// Parity decoder for Γ(λΛ24, β, 3)_P with a given Λ24 decoder.
pub fn three_parity_leech(leech: DynDecoder, cfg: Arc<ListConfig>, level: usize) -> Result<ParityDecoder, Error> {
    let v: DynDecoder = Arc::new(Scaled::new(leech.clone(), Theta::Lambda.as_f64())?);
    ParityDecoder::new(leech, v, 3, cfg, level)
}

/// ψ²/2, which carries Λ24 onto ψS' for S' = (ψ/2)·Λ24.
fn psi_sq_half() -> CNum {
    let p = Theta::Psi.cnum();
    p.mul(&p).mul(&CNum::new(Surd::ratio(1, 2), Surd::zero()))
}

/// Coset data for the 72-dimensional lattice over S' = (ψ/2)·Λ24.
pub fn nebe_parts(build: &NebeBuild) -> Result<TurynParts, Error> {
    turyn_parts(&build.triple.s, build.lattice.d(), 1 << 12)
}

/// Bounded-distance decoder for the 72-dimensional lattice: 2^12 cosets,
/// each a parity decoder with six Λ24-decoder children.
pub fn nebe_qmld(parts: &TurynParts, leech: DynDecoder, level: usize) -> Result<KingDecoder, Error> {
    let c = psi_sq_half().to_f64();
    let t: DynDecoder = Arc::new(Scaled::new(leech, c)?);
    let v: DynDecoder = Arc::new(Scaled::new(t.clone(), Theta::Lambda.as_f64())?);
    king_over(parts, t, v, Arc::new(ListConfig::regular(0.25)), level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoders::Counters;

    #[test]
    fn bw8_maps_onto_e8() {
        let target = constructions::e8();
        let dec = e8_bdd_onto(&target).unwrap();
        assert_eq!(dec.min_sq_norm(), 2.0);
        let mut c = Counters::default();
        let x: Vec<f64> = target.generator()[3].clone();
        let y: Vec<f64> = x.iter().map(|v| v + 0.05).collect();
        let got = dec.bdd(&y, &mut c).unwrap().unwrap();
        for (a, b) in got.point.iter().zip(&x) {
            assert!((a - b).abs() < 1e-9);
        }
        assert_eq!(c.base_calls, 16);
    }
}
