//! Parity-check and k-ing constructions, parity families, polarisation,
//! Turyn-type Leech and Nebe lattices.

use crate::exact::{self, SMat, Surd};
use crate::lattice::{shortest_vectors, CosetSystem, LatticeBasis, Provenance};
use crate::ring::{CNum, ComplexBasis, RingTag, Theta};
use crate::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::collections::HashMap;

/// Default node budget for verification enumerations.
pub const VERIFY_NODES: u64 = 2_000_000_000;

pub fn z2() -> LatticeBasis {
    let cb = ComplexBasis::new(RingTag::Gaussian, vec![vec![CNum::int(1)]]).expect("unit");
    let mut l = LatticeBasis::from_complex("Z2", cb).expect("Z2");
    l.set_min_sq_norm(1.0, Provenance::Exact);
    l.set_kissing(4, Provenance::Exact);
    l
}

fn combine(a: Provenance, b: Provenance) -> Provenance {
    if a == Provenance::Exact && b == Provenance::Exact {
        Provenance::Exact
    } else {
        Provenance::Asserted
    }
}

/// Γ(V,β,k)_P = {(t_1..t_k) : t_i ∈ T, Σ t_i ∈ V}.
///
/// Rows are (e_i − e_k) ⊗ T for i < k, then e_k ⊗ V. When both inputs carry
/// complex bases over one ring the same pattern yields a complex basis.
pub fn parity_check_basis(t: &LatticeBasis, v: &LatticeBasis, k: usize) -> Result<LatticeBasis, Error> {
    if k < 1 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if t.dim() != v.dim() {
        return Err(Error::Shape("T and V differ in dimension".into()));
    }
    if !v.is_sublattice_of(t) {
        return Err(Error::NotSublattice);
    }
    let name = format!("Gamma({},{},{k})", v.name, t.name);
    let mut out = match (&t.complex, &v.complex) {
        (Some(tc), Some(vc)) if tc.ring == vc.ring => {
            let rows = block_pattern(&tc.rows, &vc.rows, k, CNum::zero, |z| z.neg());
            LatticeBasis::from_complex(name, ComplexBasis::new(tc.ring, rows)?)?
        }
        _ => {
            let rows = block_pattern(t.exact_rows(), v.exact_rows(), k, Surd::zero, |x| -x);
            LatticeBasis::from_rows(name, rows)?
        }
    };
    if let (Some(dt), Some(dv)) = (t.min_sq_norm(), v.min_sq_norm()) {
        let d = if k == 1 { dv.value } else { dv.value.min(2.0 * dt.value) };
        out.set_min_sq_norm(d, combine(dt.provenance, dv.provenance));
    }
    Ok(out)
}

fn block_pattern<E: Clone>(t: &[Vec<E>], v: &[Vec<E>], k: usize, zero: fn() -> E, neg: fn(&E) -> E) -> Vec<Vec<E>> {
    let m = t.len();
    let mut rows = Vec::with_capacity(k * m);
    for i in 0..k - 1 {
        for r in t {
            let mut row = vec![zero(); k * m];
            for (j, x) in r.iter().enumerate() {
                row[i * m + j] = x.clone();
                row[(k - 1) * m + j] = neg(x);
            }
            rows.push(row);
        }
    }
    for r in v {
        let mut row = vec![zero(); k * m];
        for (j, x) in r.iter().enumerate() {
            row[(k - 1) * m + j] = x.clone();
        }
        rows.push(row);
    }
    rows
}

/// Membership in Γ(V,β,k)_P by its definition.
pub fn parity_member(t: &LatticeBasis, v: &LatticeBasis, k: usize, x: &[Surd]) -> bool {
    let m = t.dim();
    if x.len() != k * m {
        return false;
    }
    let mut sum = vec![Surd::zero(); m];
    for b in 0..k {
        let blk = &x[b * m..(b + 1) * m];
        if !t.contains_exact(blk) {
            return false;
        }
        for (s, y) in sum.iter_mut().zip(blk) {
            *s = &*s + y;
        }
    }
    v.contains_exact(&sum)
}

/// Data for Γ(V,α,β,k) = ∪_{m∈α} Γ(V,β,k)_P + (m,…,m).
#[derive(Clone, Debug)]
pub struct KingSpec {
    pub v: LatticeBasis,
    pub t: LatticeBasis,
    pub t_star: LatticeBasis,
    pub alpha: CosetSystem,
    pub beta: CosetSystem,
    pub k: usize,
}

impl KingSpec {
    pub fn new(v: LatticeBasis, t: LatticeBasis, t_star: LatticeBasis, k: usize, max_reps: u64) -> Result<Self, Error> {
        let alpha = CosetSystem::new(&t_star, &v, max_reps)?;
        let beta = CosetSystem::new(&t, &v, max_reps)?;
        Ok(KingSpec { v, t, t_star, alpha, beta, k })
    }
}

pub fn king_basis(spec: &KingSpec) -> Result<LatticeBasis, Error> {
    let parity = parity_check_basis(&spec.t, &spec.v, spec.k)?;
    let m = spec.v.dim();
    let mut rows: SMat = parity.exact_rows().clone();
    for g in spec.t_star.exact_rows() {
        let mut row = Vec::with_capacity(spec.k * m);
        for _ in 0..spec.k {
            row.extend(g.iter().cloned());
        }
        rows.push(row);
    }
    let mut out = LatticeBasis::from_generators(&format!("king({})", spec.k), &rows, &parity)?;
    if let (Some(dt), Some(dv)) = (spec.t.min_sq_norm(), spec.v.min_sq_norm()) {
        // upper end of the bracket min{d(V), 2d(T)} ≥ d ≥ min{d(V), 2d(T), k·d(S)}
        out.set_min_sq_norm(dv.value.min(2.0 * dt.value), Provenance::Asserted);
    }
    Ok(out)
}

/// L_c, L_{ck}, …, L_{ck^t} with L_{kn} = Γ(θL_n, β, k)_P.
#[derive(Clone, Debug)]
pub struct ParityFamily {
    pub theta: Theta,
    pub k: usize,
    pub levels: Vec<LatticeBasis>,
}

impl ParityFamily {
    pub fn new(base: &LatticeBasis, theta: Theta, k: usize, depth: usize) -> Result<Self, Error> {
        match &base.complex {
            Some(cb) if cb.ring == theta.ring() => {}
            _ => return Err(Error::Domain("base must carry a complex basis over the ring of θ".into())),
        }
        if k < 2 {
            return Err(Error::Domain("arity must be at least 2".into()));
        }
        let mut levels = vec![base.clone()];
        for j in 0..depth {
            let l = &levels[j];
            let rot = l.scale_rotate(theta)?;
            let mut next = parity_check_basis(l, &rot, k)?;
            next.name = format!("L{}", next.dim());
            levels.push(next);
        }
        Ok(ParityFamily { theta, k, levels })
    }
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }
    pub fn base(&self) -> &LatticeBasis {
        &self.levels[0]
    }
    pub fn lattice(&self) -> &LatticeBasis {
        self.levels.last().expect("nonempty")
    }
    pub fn rotated(&self, level: usize) -> Result<LatticeBasis, Error> {
        self.levels[level].scale_rotate(self.theta)
    }
    /// [L_n / θL_n] at a level, subject to a representative budget.
    pub fn beta(&self, level: usize, max_reps: u64) -> Result<CosetSystem, Error> {
        CosetSystem::new(&self.levels[level], &self.rotated(level)?, max_reps)
    }
}

/// BW_n for n a power of two ≥ 2 (BW_2 = Z²).
pub fn barnes_wall(n: usize) -> Result<ParityFamily, Error> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::Domain(format!("BW needs a power-of-two dimension, got {n}")));
    }
    let t = n.trailing_zeros() as usize - 1;
    let mut f = ParityFamily::new(&z2(), Theta::Phi, 2, t)?;
    for l in f.levels.iter_mut() {
        l.name = format!("BW{}", l.dim());
    }
    Ok(f)
}

/// Checkerboard D_n = Γ(2Z, β, n)_P.
pub fn checkerboard(n: usize) -> Result<LatticeBasis, Error> {
    let mut z = LatticeBasis::from_rows("Z", vec![vec![Surd::int(1)]])?;
    z.set_min_sq_norm(1.0, Provenance::Exact);
    let mut two = LatticeBasis::from_rows("2Z", vec![vec![Surd::int(2)]])?;
    two.set_min_sq_norm(4.0, Provenance::Exact);
    let mut d = parity_check_basis(&z, &two, n)?;
    d.name = format!("D{n}");
    if n >= 3 {
        d.set_kissing(2 * n as u64 * (n as u64 - 1), Provenance::Exact);
    }
    Ok(d)
}

/// (S, T = λS, T_2θ = ψS).
#[derive(Clone, Debug)]
pub struct PolarisationTriple {
    pub s: LatticeBasis,
    pub t: LatticeBasis,
    pub t2: LatticeBasis,
}

#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct PolarisationReport {
    pub sum_is_s: bool,
    pub intersection_is_2s: bool,
    pub gram_dets_match: bool,
    pub min_norms: Option<(f64, f64, f64)>,
    pub first_shells: Option<(u64, u64, u64)>,
}

impl PolarisationReport {
    pub fn passed(&self) -> bool {
        let norms_ok = self.min_norms.is_none_or(|(s, t, t2)| t == 2.0 * s && t2 == 2.0 * s);
        let shells_ok = self.first_shells.is_none_or(|(s, t, t2)| s == t && t == t2);
        self.sum_is_s && self.intersection_is_2s && self.gram_dets_match && norms_ok && shells_ok
    }
}

/// Splits S into (λS, ψS) and checks T + T_2θ = S, T ∩ T_2θ = 2S and
/// T ≅ T_2θ ≅ √2·S. Enumeration-backed checks run when `max_nodes > 0`.
pub fn polarize(s: &LatticeBasis, max_nodes: u64) -> Result<(PolarisationTriple, PolarisationReport), Error> {
    match &s.complex {
        Some(cb) if cb.ring == RingTag::Lambda => {}
        _ => return Err(Error::Domain("polarisation needs a Z[λ] basis".into())),
    }
    let t = s.scale_by(&Theta::Lambda.cnum(), &format!("λ{}", s.name))?;
    let t2 = s.scale_by(&Theta::Psi.cnum(), &format!("ψ{}", s.name))?;
    let mut rep = PolarisationReport::default();
    rep.sum_is_s = t.sum(&t2, "T+T2")?.same_lattice(s);
    let two_s = s.scaled_rational(&BigRational::from_integer(2.into()), "2S")?;
    rep.intersection_is_2s = t.intersection(&t2, "T∩T2")?.same_lattice(&two_s);
    let n = s.dim();
    let scale = Surd::rational(BigRational::from_integer(BigInt::from(2).pow(n as u32)));
    let want = &s.volume_sq_exact() * &scale;
    rep.gram_dets_match = t.volume_sq_exact() == want && t2.volume_sq_exact() == want;
    if max_nodes > 0 {
        let (ds, ks) = shortest_vectors(s, max_nodes)?;
        let (dt, kt) = shortest_vectors(&t, max_nodes)?;
        let (dt2, kt2) = shortest_vectors(&t2, max_nodes)?;
        rep.min_norms = Some((ds, dt, dt2));
        rep.first_shells = Some((ks, kt, kt2));
    }
    if !rep.passed() {
        return Err(Error::Verification(format!("polarisation checks failed: {rep:?}")));
    }
    let mut triple = PolarisationTriple { s: s.clone(), t, t2 };
    if let Some((ds, _, _)) = rep.min_norms {
        triple.s.set_min_sq_norm(ds, Provenance::Exact);
        triple.t.set_min_sq_norm(2.0 * ds, Provenance::Exact);
        triple.t2.set_min_sq_norm(2.0 * ds, Provenance::Exact);
    }
    if let Some((ks, _, _)) = rep.first_shells {
        for l in [&mut triple.s, &mut triple.t, &mut triple.t2] {
            l.set_kissing(ks, Provenance::Exact);
        }
    }
    Ok((triple, rep))
}

/// √−7 = 2λ − 1 and its inverse −i/√7.
fn inv_root_minus7() -> CNum {
    CNum::new(Surd::zero(), Surd::root7(-1, 7))
}

/// S ≅ E8/√2 over Z[λ]: (1/√−7)·{z ∈ Z[λ]^4 : z mod √−7 lies in the
/// self-dual [4,2] code over F7 spanned by (1,0,2,3), (0,1,4,2)}.
pub fn e8_half_lambda() -> LatticeBasis {
    let c = inv_root_minus7();
    let row = |v: [i64; 4]| v.iter().map(|&x| CNum::int(x).mul(&c)).collect::<Vec<_>>();
    let unit = |i: usize| (0..4).map(|j| CNum::int((i == j) as i64)).collect::<Vec<_>>();
    let rows = vec![row([1, 0, 2, 3]), row([0, 1, 4, 2]), unit(2), unit(3)];
    let cb = ComplexBasis::new(RingTag::Lambda, rows).expect("nonsingular");
    let mut l = LatticeBasis::from_complex("S_E8", cb).expect("S_E8");
    l.set_min_sq_norm(1.0, Provenance::Asserted);
    l.set_kissing(240, Provenance::Asserted);
    l
}

/// E8 scaled to d = 2, vol = 1, as the lattice λS.
pub fn e8() -> LatticeBasis {
    let mut t = e8_half_lambda().scale_by(&Theta::Lambda.cnum(), "E8").expect("E8");
    t.set_min_sq_norm(2.0, Provenance::Asserted);
    t
}

/// Pb ⊗ G_S over Z[λ] with Pb = [[λ,λ,λ],[ψ,ψ,0],[0,ψ,ψ]].
pub fn turyn(s: &LatticeBasis, name: &str) -> Result<LatticeBasis, Error> {
    let cb = s.complex.as_ref().filter(|c| c.ring == RingTag::Lambda).ok_or(Error::Domain(
        "Turyn assembly needs a Z[λ] basis".into(),
    ))?;
    let l = Theta::Lambda.cnum();
    let p = Theta::Psi.cnum();
    let z = CNum::zero();
    let pb = [[l.clone(), l.clone(), l], [p.clone(), p.clone(), z.clone()], [z, p.clone(), p]];
    let m = cb.complex_dim();
    let mut rows = Vec::with_capacity(3 * m);
    for prow in &pb {
        for g in &cb.rows {
            let mut row = Vec::with_capacity(3 * m);
            for c in prow {
                row.extend(g.iter().map(|x| c.mul(x)));
            }
            rows.push(row);
        }
    }
    LatticeBasis::from_complex(name, ComplexBasis::new(RingTag::Lambda, rows)?)
}

/// Λ24 from E8 via the Turyn pattern; checks evenness, unimodularity and
/// d = 4 (no nonzero vector of norm below 4).
pub fn leech_turyn() -> Result<LatticeBasis, Error> {
    let s = e8_half_lambda();
    let mut l = turyn(&s, "Leech")?;
    if !l.is_even() {
        return Err(Error::Verification("Leech candidate is not even".into()));
    }
    if !l.is_unimodular() {
        return Err(Error::Verification("Leech candidate is not unimodular".into()));
    }
    // even + unimodular: d ∈ {2, 4}; rule out norm 2
    let mut budget = crate::enumerate::Budget::new(VERIFY_NODES);
    let mut short = 0u64;
    l.sphere().for_each_within(&[0.0; 24], 2.5, &mut budget, |_, v| {
        if v > 1e-9 {
            short += 1;
        }
    })?;
    if short > 0 {
        return Err(Error::Verification(format!("{short} vectors of norm 2")));
    }
    l.set_min_sq_norm(4.0, Provenance::Exact);
    Ok(l)
}

/// S' = (ψ/2)·Λ24 keeps the Z[λ]-structure and has d = 2, vol 2^{-12}.
pub fn nebe_inner_structure(leech: &LatticeBasis) -> Result<LatticeBasis, Error> {
    let c = Theta::Psi.cnum().mul(&CNum::new(Surd::ratio(1, 2), Surd::zero()));
    let mut s = leech.scale_by(&c, "S_N72")?;
    s.set_min_sq_norm(2.0, Provenance::Asserted);
    s.set_kissing(196_560, Provenance::Asserted);
    Ok(s)
}

#[derive(Clone, Debug)]
pub struct NebeBuild {
    pub lattice: LatticeBasis,
    pub triple: PolarisationTriple,
    pub report: PolarisationReport,
    /// Number of norm-6 vectors, when the check ran.
    pub norm6: Option<u64>,
}

/// 72-dimensional Turyn-type lattice from a Z[λ]-structure on Λ24 (given at
/// the Λ24 scale). Checks evenness, unimodularity and the polarisation.
///
/// With `check_nodes > 0` the enumeration-backed polarisation checks run and
/// the norm-6 vectors are counted, so the minimum is known exactly (6 or 8).
/// Otherwise d = 8 is recorded as asserted.
pub fn nebe(leech_lambda: &LatticeBasis, check_nodes: u64) -> Result<NebeBuild, Error> {
    let s = nebe_inner_structure(leech_lambda)?;
    let (triple, report) = polarize(&s, check_nodes)?;
    let mut l = turyn(&s, "N72")?;
    if !l.is_even() {
        return Err(Error::Verification("N72 candidate is not even".into()));
    }
    if !l.is_unimodular() {
        return Err(Error::Verification("N72 candidate is not unimodular".into()));
    }
    let mut norm6 = None;
    if check_nodes > 0 {
        // blocks have norm ≥ 2 and a vector with a zero block has norm ≥ 8
        let (c, _) = n72_norm6_count(&triple.s, check_nodes)?;
        norm6 = Some(c);
        if c == 0 {
            l.set_min_sq_norm(8.0, Provenance::Exact);
        } else {
            l.set_min_sq_norm(6.0, Provenance::Exact);
            l.set_kissing(c, Provenance::Exact);
        }
    } else {
        l.set_min_sq_norm(8.0, Provenance::Asserted);
    }
    Ok(NebeBuild { lattice: l, triple, report, norm6 })
}

/// Integer matrix A with λ·b_i = Σ_j A_ij b_j for a Z[λ] basis.
pub fn lambda_action(l: &LatticeBasis) -> Result<Vec<Vec<i64>>, Error> {
    let cb = l.complex.as_ref().ok_or(Error::Domain("needs complex basis".into()))?;
    let lam = cb.scaled(&Theta::Lambda.cnum());
    let rows = lam.real_rows();
    let c = l.coords_of(&rows)?;
    c.iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    if x.is_integer() {
                        x.a.to_integer().to_i64().ok_or(Error::NotSublattice)
                    } else {
                        Err(Error::NotSublattice)
                    }
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct KissingBreakdown {
    pub tau_base: u64,
    pub single_block: u64,
    pub two_block: u64,
    pub partners_per_vector: Vec<u64>,
    pub total: u64,
}

/// Kissing number of Γ(λΛ24, β, 3)_P from the minimal vectors of Λ24.
///
/// Norm-8 vectors either have one nonzero block lying in λΛ24 (3·τ choices)
/// or two norm-4 blocks n1, n2 with n1 + n2 ∈ λΛ24.
pub fn kissing_3parity_leech(leech: &LatticeBasis, max_nodes: u64) -> Result<KissingBreakdown, Error> {
    let n = leech.dim();
    let a = lambda_action(leech)?;
    // key(z) = z·adj(A) mod det(A) identifies z modulo λΛ24
    let am: exact::IMat = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let det = exact::det_int(&am).to_i64().ok_or(Error::Shape("det overflow".into()))?.abs();
    let inv = exact::inverse(&exact::int_to_surd(&am)).ok_or(Error::Singular)?;
    let adj: Vec<Vec<i64>> = inv
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let v = &x.a * BigRational::from_integer(det.into());
                    v.to_integer().to_i64().expect("adjugate entry")
                })
                .collect()
        })
        .collect();
    let key = |z: &[i64]| -> Vec<i64> {
        (0..n)
            .map(|j| {
                let s: i64 = (0..n).map(|i| z[i] * adj[i][j]).sum();
                s.rem_euclid(det)
            })
            .collect()
    };
    let mut vectors: Vec<Vec<i64>> = Vec::new();
    let mut budget = crate::enumerate::Budget::new(max_nodes);
    leech.sphere().for_each_within(&vec![0.0; n], 4.0 + 1e-6, &mut budget, |z, v| {
        if v > 1e-6 {
            vectors.push(z.iter().map(|&x| x as i64).collect());
        }
    })?;
    let tau = vectors.len() as u64;
    let mut by_coset: HashMap<Vec<i64>, u64> = HashMap::new();
    for z in &vectors {
        *by_coset.entry(key(z)).or_default() += 1;
    }
    let mut partners_hist: HashMap<u64, u64> = HashMap::new();
    let mut two = 0u64;
    for z in &vectors {
        let neg: Vec<i64> = z.iter().map(|x| -x).collect();
        let c = by_coset.get(&key(&neg)).copied().unwrap_or(0);
        *partners_hist.entry(c).or_default() += 1;
        two += c;
    }
    let mut partners: Vec<u64> = partners_hist.keys().copied().collect();
    partners.sort_unstable();
    let single = 3 * tau;
    let two_block = 3 * two;
    Ok(KissingBreakdown { tau_base: tau, single_block: single, two_block, partners_per_vector: partners, total: single + two_block })
}

/// Integer matrix of multiplication by an element of Z[λ] on a Z[λ] basis.
fn scalar_action(l: &LatticeBasis, c: &CNum) -> Result<Vec<Vec<i64>>, Error> {
    let cb = l.complex.as_ref().ok_or(Error::Domain("needs complex basis".into()))?;
    let rows = cb.scaled(c).real_rows();
    let coords = l.coords_of(&rows)?;
    coords
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    if x.is_integer() {
                        x.a.to_integer().to_i64().ok_or(Error::NotSublattice)
                    } else {
                        Err(Error::NotSublattice)
                    }
                })
                .collect()
        })
        .collect()
}

/// Counts norm-6 vectors of the 72-dimensional Turyn lattice over S'.
///
/// Every block of a vector lies in S' (min 2), a vector with a zero block
/// has norm ≥ 8, so norm 6 forces three norm-2 blocks (x1, x2, x3) with
/// x2 ≡ x1 mod ψS' and ψx1 + x2 + x3 ∈ 2S'. Zero means the minimum is 8.
/// Also returns a few of the vectors found.
pub fn n72_norm6_count(s_prime: &LatticeBasis, max_nodes: u64) -> Result<(u64, Vec<Vec<f64>>), Error> {
    let n = s_prime.dim();
    if n > 64 {
        return Err(Error::Domain("key packing supports n ≤ 64".into()));
    }
    let psi = scalar_action(s_prime, &Theta::Psi.cnum())?;
    let am: exact::IMat = psi.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let det = exact::det_int(&am).to_i64().ok_or(Error::Shape("det overflow".into()))?.abs();
    let inv = exact::inverse(&exact::int_to_surd(&am)).ok_or(Error::Singular)?;
    let adj: Vec<Vec<i64>> = inv
        .iter()
        .map(|r| r.iter().map(|x| (&x.a * BigRational::from_integer(det.into())).to_integer().to_i64().unwrap()).collect())
        .collect();
    let class_psi = |z: &[i64]| -> Vec<i64> {
        (0..n).map(|j| (0..n).map(|i| z[i] * adj[i][j]).sum::<i64>().rem_euclid(det)).collect()
    };
    let mod2 = |z: &[i64]| -> u64 { z.iter().enumerate().fold(0u64, |acc, (i, &v)| acc | (((v & 1) as u64) << i)) };
    let times_psi = |z: &[i64]| -> Vec<i64> { (0..n).map(|j| (0..n).map(|i| z[i] * psi[i][j]).sum()).collect() };

    let mut vecs: Vec<Vec<i64>> = Vec::new();
    let mut budget = crate::enumerate::Budget::new(max_nodes);
    let d = s_prime.d();
    s_prime.sphere().for_each_within(&vec![0.0; n], d + 1e-6, &mut budget, |z, v| {
        if v > 1e-6 {
            vecs.push(z.iter().map(|&x| x as i64).collect());
        }
    })?;
    let mut by_mod2: HashMap<u64, u32> = HashMap::new();
    for z in &vecs {
        *by_mod2.entry(mod2(z)).or_default() += 1;
    }
    let mut by_class: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, z) in vecs.iter().enumerate() {
        by_class.entry(class_psi(z)).or_default().push(i);
    }
    let mut count = 0u64;
    let mut witnesses = Vec::new();
    for members in by_class.values() {
        for &a in members {
            let pa = mod2(&times_psi(&vecs[a]));
            for &b in members {
                // x3 ≡ ψx1 + x2 (mod 2S'), signs are irrelevant mod 2
                let want = pa ^ mod2(&vecs[b]);
                let c = by_mod2.get(&want).copied().unwrap_or(0) as u64;
                if c > 0 && witnesses.len() < 16 && (a + b) % 97 == 0 {
                    let c3 = vecs.iter().find(|z| mod2(z) == want).expect("present");
                    let sp = s_prime.sphere();
                    let mut w = Vec::with_capacity(3 * n);
                    for z in [&vecs[a], &vecs[b], c3] {
                        w.extend(sp.point(&z.iter().map(|&x| x as f64).collect::<Vec<_>>()));
                    }
                    witnesses.push(w);
                }
                count += c;
            }
        }
    }
    Ok((count, witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bw4_parameters() {
        let z = z2();
        let v = z.scale_rotate(Theta::Phi).unwrap();
        let mut bw4 = parity_check_basis(&z, &v, 2).unwrap();
        assert_eq!(bw4.volume_sq_exact(), Surd::int(4));
        let (d, tau) = bw4.enumerate_min_norm(1 << 24).unwrap();
        assert_eq!((d, tau), (2.0, 24));
    }

    #[test]
    fn checkerboard_d4() {
        let mut d4 = checkerboard(4).unwrap();
        assert_eq!(d4.volume_sq_exact(), Surd::int(4));
        assert_eq!(d4.enumerate_min_norm(1 << 24).unwrap(), (2.0, 24));
    }

    #[test]
    fn e8_structure() {
        let mut e = e8();
        assert!(e.is_even());
        assert!(e.is_unimodular());
        assert_eq!(e.enumerate_min_norm(1 << 26).unwrap(), (2.0, 240));
    }

    #[test]
    fn parity_requires_subset() {
        let z = z2();
        let v = z.scale_rotate(Theta::Phi).unwrap();
        assert!(parity_check_basis(&v, &z, 2).is_err());
    }
}
