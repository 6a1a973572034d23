//! Lattice bases, figures of merit, cosets and shells.

use crate::enumerate::{Budget, Sphere};
use crate::exact::{self, IMat, SMat, Surd};
use crate::ring::{scalar_operator, CNum, ComplexBasis, Theta};
use crate::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Where a stored figure of merit came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    Asserted,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Known<T> {
    pub value: T,
    pub provenance: Provenance,
}

#[derive(Clone, Debug)]
pub struct LatticeBasis {
    pub name: String,
    exact: SMat,
    pub complex: Option<ComplexBasis>,
    gen: Vec<Vec<f64>>,
    volume: f64,
    min_sq_norm: Option<Known<f64>>,
    kissing: Option<Known<u64>>,
    /// Only ever set from a supplied known value.
    pub covering_radius: Option<f64>,
    gram_exact: OnceLock<SMat>,
    inv_exact: OnceLock<Option<SMat>>,
    sphere: OnceLock<Sphere>,
}

impl LatticeBasis {
    pub fn from_rows(name: impl Into<String>, rows: SMat) -> Result<Self, Error> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("generator must be square".into()));
        }
        let gen = exact::to_f64_mat(&rows);
        let flat: Vec<f64> = gen.iter().flatten().copied().collect();
        let volume = f64_det(&flat, n).abs();
        if !(volume > 0.0) {
            return Err(Error::Singular);
        }
        Ok(LatticeBasis {
            name: name.into(),
            exact: rows,
            complex: None,
            gen,
            volume,
            min_sq_norm: None,
            kissing: None,
            covering_radius: None,
            gram_exact: OnceLock::new(),
            inv_exact: OnceLock::new(),
            sphere: OnceLock::new(),
        })
    }

    pub fn from_complex(name: impl Into<String>, cb: ComplexBasis) -> Result<Self, Error> {
        let mut l = LatticeBasis::from_rows(name, cb.real_rows())?;
        l.complex = Some(cb);
        Ok(l)
    }

    pub fn integer_lattice(n: usize) -> Self {
        let mut l = LatticeBasis::from_rows(format!("Z{n}"), exact::identity(n)).expect("identity");
        l.set_min_sq_norm(1.0, Provenance::Exact);
        l.set_kissing(2 * n as u64, Provenance::Exact);
        l
    }

    pub fn dim(&self) -> usize {
        self.exact.len()
    }
    pub fn exact_rows(&self) -> &SMat {
        &self.exact
    }
    pub fn generator(&self) -> &[Vec<f64>] {
        &self.gen
    }
    pub fn volume(&self) -> f64 {
        self.volume
    }
    pub fn gram(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.gen[i].iter().zip(&self.gen[j]).map(|(a, b)| a * b).sum()).collect())
            .collect()
    }
    pub fn exact_gram(&self) -> &SMat {
        self.gram_exact.get_or_init(|| {
            let n = self.dim();
            let mut g = vec![vec![Surd::zero(); n]; n];
            for i in 0..n {
                for j in i..n {
                    let mut acc = Surd::zero();
                    for (a, b) in self.exact[i].iter().zip(&self.exact[j]) {
                        if !a.is_zero() && !b.is_zero() {
                            acc = &acc + &(a * b);
                        }
                    }
                    g[j][i] = acc.clone();
                    g[i][j] = acc;
                }
            }
            g
        })
    }
    /// Exact vol² = det(Gram). Uses integer Bareiss when the Gram is rational.
    pub fn volume_sq_exact(&self) -> Surd {
        let g = self.exact_gram();
        let d = exact::common_denominator(g);
        match exact::scaled_integers(g, &d) {
            Some(ig) => {
                let det = exact::det_int(&ig);
                let n = self.dim();
                Surd::rational(BigRational::new(det, num_traits::pow(d, n)))
            }
            None => exact::det(g),
        }
    }
    pub fn is_integral(&self) -> bool {
        self.exact_gram().iter().flatten().all(Surd::is_integer)
    }
    pub fn is_even(&self) -> bool {
        self.is_integral()
            && self.exact_gram().iter().enumerate().all(|(i, r)| r[i].a.to_integer().is_even())
    }
    pub fn is_unimodular(&self) -> bool {
        self.is_integral() && self.volume_sq_exact() == Surd::one()
    }

    pub fn min_sq_norm(&self) -> Option<Known<f64>> {
        self.min_sq_norm
    }
    /// Minimum squared norm; panics if it was never established.
    pub fn d(&self) -> f64 {
        self.min_sq_norm.expect("minimum distance not established").value
    }
    pub fn set_min_sq_norm(&mut self, v: f64, p: Provenance) {
        self.min_sq_norm = Some(Known { value: v, provenance: p });
    }
    pub fn kissing(&self) -> Option<Known<u64>> {
        self.kissing
    }
    pub fn set_kissing(&mut self, v: u64, p: Provenance) {
        self.kissing = Some(Known { value: v, provenance: p });
    }
    pub fn packing_radius_sq(&self) -> Option<f64> {
        self.min_sq_norm.map(|k| k.value / 4.0)
    }
    /// γ = d / vol^{2/n}
    pub fn coding_gain(&self) -> Option<f64> {
        let n = self.dim() as f64;
        self.min_sq_norm.map(|k| k.value / self.volume.powf(2.0 / n))
    }
    pub fn coding_gain_db(&self) -> Option<f64> {
        self.coding_gain().map(|g| 10.0 * g.log10())
    }

    pub fn exact_inverse(&self) -> Option<&SMat> {
        self.inv_exact.get_or_init(|| exact::inverse(&self.exact)).as_ref()
    }

    pub fn sphere(&self) -> &Sphere {
        self.sphere.get_or_init(|| Sphere::new(&self.gen).expect("basis is nonsingular"))
    }

    /// Computes d(Λ) and τ(Λ) by enumeration and stores them as exact.
    pub fn enumerate_min_norm(&mut self, max_nodes: u64) -> Result<(f64, u64), Error> {
        let (d, tau) = shortest_vectors(self, max_nodes)?;
        self.set_min_sq_norm(d, Provenance::Exact);
        self.set_kissing(tau, Provenance::Exact);
        Ok((d, tau))
    }

    /// θΛ with generator G·R(n,θ).
    pub fn scale_rotate(&self, theta: Theta) -> Result<LatticeBasis, Error> {
        self.scale_by(&theta.cnum(), &format!("{}·{:?}", self.name, theta))
    }

    /// cΛ for a complex scalar c acting blockwise.
    pub fn scale_by(&self, c: &CNum, name: &str) -> Result<LatticeBasis, Error> {
        let r = scalar_operator(self.dim(), c)?;
        let mut out = LatticeBasis::from_rows(name, exact::mat_mul(&self.exact, &r))?;
        out.complex = self.complex.as_ref().map(|cb| cb.scaled(c));
        let s = c.abs_sq().to_f64();
        if let Some(k) = self.min_sq_norm {
            out.min_sq_norm = Some(Known { value: k.value * s, provenance: k.provenance });
        }
        out.kissing = self.kissing;
        Ok(out)
    }

    /// Real scaling by a rational.
    pub fn scaled_rational(&self, r: &BigRational, name: &str) -> Result<LatticeBasis, Error> {
        let rows = self.exact.iter().map(|row| row.iter().map(|x| x.scale(r)).collect()).collect();
        let mut out = LatticeBasis::from_rows(name, rows)?;
        let s = exact::rat_f64(r).powi(2);
        if let Some(k) = self.min_sq_norm {
            out.min_sq_norm = Some(Known { value: k.value * s, provenance: k.provenance });
        }
        out.kissing = self.kissing;
        Ok(out)
    }

    /// Coordinates of `rows` in this lattice's basis (exact solve).
    pub fn coords_of(&self, rows: &SMat) -> Result<SMat, Error> {
        let inv = self.exact_inverse().ok_or(Error::Singular)?;
        Ok(exact::mat_mul(rows, inv))
    }

    pub fn contains_exact(&self, x: &[Surd]) -> bool {
        match self.coords_of(&vec![x.to_vec()]) {
            Ok(c) => c[0].iter().all(Surd::is_integer),
            Err(_) => false,
        }
    }

    /// Floating membership test: coordinates within `tol` of integers.
    pub fn contains_f64(&self, x: &[f64], tol: f64) -> bool {
        self.sphere().coords(x).iter().all(|c| (c - c.round()).abs() <= tol)
    }

    pub fn is_sublattice_of(&self, sup: &LatticeBasis) -> bool {
        self.dim() == sup.dim()
            && sup.coords_of(&self.exact).map(|c| c.iter().flatten().all(Surd::is_integer)).unwrap_or(false)
    }

    pub fn same_lattice(&self, other: &LatticeBasis) -> bool {
        self.is_sublattice_of(other) && other.is_sublattice_of(self)
    }

    /// HNF of this lattice's integer coordinates relative to `reference`,
    /// after clearing denominators. Two lattices are equal iff their forms
    /// against a common reference agree.
    pub fn hnf_against(&self, reference: &LatticeBasis) -> Result<(BigInt, IMat), Error> {
        let c = reference.coords_of(&self.exact)?;
        let d = exact::common_denominator(&c);
        let ic = exact::scaled_integers(&c, &d).ok_or(Error::NotCommensurable)?;
        Ok((d, exact::hnf(&ic)))
    }

    /// Lattice generated by arbitrary rows, expressed through `reference`.
    pub fn from_generators(name: &str, rows: &SMat, reference: &LatticeBasis) -> Result<LatticeBasis, Error> {
        let c = reference.coords_of(rows)?;
        let d = exact::common_denominator(&c);
        let ic = exact::scaled_integers(&c, &d).ok_or(Error::NotCommensurable)?;
        let h = exact::hnf(&ic);
        if h.len() != reference.dim() {
            return Err(Error::Singular);
        }
        let inv_d = Surd::rational(BigRational::new(BigInt::one(), d));
        let hs: SMat = exact::int_to_surd(&h)
            .into_iter()
            .map(|r| r.iter().map(|x| x * &inv_d).collect())
            .collect();
        LatticeBasis::from_rows(name, exact::mat_mul(&hs, &reference.exact))
    }

    /// A + B.
    pub fn sum(&self, other: &LatticeBasis, name: &str) -> Result<LatticeBasis, Error> {
        let mut rows = self.exact.clone();
        rows.extend(other.exact.iter().cloned());
        LatticeBasis::from_generators(name, &rows, self)
    }

    /// A ∩ B via the integer kernel of [a; −b] in common coordinates.
    pub fn intersection(&self, other: &LatticeBasis, name: &str) -> Result<LatticeBasis, Error> {
        let n = self.dim();
        let a = self.coords_of(&self.exact)?; // identity, kept for symmetry of scaling
        let b = self.coords_of(&other.exact)?;
        let mut stacked = a.clone();
        stacked.extend(b.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
        let d = exact::common_denominator(&stacked);
        let im = exact::scaled_integers(&stacked, &d).ok_or(Error::NotCommensurable)?;
        let ker = exact::int_left_kernel(&im);
        let rows: SMat = ker
            .iter()
            .map(|k| {
                let coeff: Vec<Surd> =
                    k[..n].iter().map(|x| Surd::rational(BigRational::from_integer(x.clone()))).collect();
                (0..n)
                    .map(|j| {
                        let mut acc = Surd::zero();
                        for (i, c) in coeff.iter().enumerate() {
                            if !c.is_zero() {
                                acc = &acc + &(c * &self.exact[i][j]);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        LatticeBasis::from_generators(name, &rows, self)
    }

    /// vol(self)/vol(sup) as an exact integer when self ⊆ sup.
    pub fn index_in(&self, sup: &LatticeBasis) -> Result<u64, Error> {
        let c = sup.coords_of(&self.exact)?;
        if !c.iter().flatten().all(Surd::is_integer) {
            return Err(Error::NotSublattice);
        }
        let ic: IMat = c.iter().map(|r| r.iter().map(|x| x.a.to_integer()).collect()).collect();
        let d = exact::det_int(&ic);
        num_traits::Signed::abs(&d).to_u64().ok_or(Error::Shape("index overflows u64".into()))
    }
}

fn f64_det(a: &[f64], n: usize) -> f64 {
    let mut m = a.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let piv = match (col..n).max_by(|&x, &y| m[x * n + col].abs().total_cmp(&m[y * n + col].abs())) {
            Some(p) => p,
            None => return 0.0,
        };
        if m[piv * n + col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            for j in 0..n {
                m.swap(piv * n + j, col * n + j);
            }
            det = -det;
        }
        let p = m[col * n + col];
        det *= p;
        for r in col + 1..n {
            let f = m[r * n + col] / p;
            if f != 0.0 {
                for j in col..n {
                    m[r * n + j] -= f * m[col * n + j];
                }
            }
        }
    }
    det
}

/// Scaled integer Gram D·G (for exact norms of integer coordinate vectors).
fn integer_gram(l: &LatticeBasis) -> Option<(Vec<i64>, i64)> {
    let g = l.exact_gram();
    let d = exact::common_denominator(g);
    let ig = exact::scaled_integers(g, &d)?;
    let flat: Option<Vec<i64>> = ig.iter().flatten().map(|x| x.to_i64()).collect();
    Some((flat?, d.to_i64()?))
}

/// Smallest nonzero squared norm and the number of vectors attaining it.
pub fn shortest_vectors(l: &LatticeBasis, max_nodes: u64) -> Result<(f64, u64), Error> {
    let n = l.dim();
    let sphere = l.sphere();
    let gram = l.gram();
    let mut r = (0..n).map(|i| gram[i][i]).fold(f64::INFINITY, f64::min);
    let zero = vec![0.0; n];
    let mut budget = Budget::new(max_nodes);
    // shrink: look for anything strictly shorter than the shortest basis vector
    let mut best = r;
    sphere.for_each_within(&zero, r * (1.0 - 1e-9), &mut budget, |_, v| {
        if v > 1e-9 && v < best {
            best = v;
        }
    })?;
    r = best;
    let ig = integer_gram(l);
    let mut exact_min: Option<i128> = None;
    let mut count = 0u64;
    let mut budget = Budget::new(max_nodes);
    sphere.for_each_within(&zero, r * (1.0 + 1e-9), &mut budget, |z, v| {
        if v < 1e-9 {
            return;
        }
        match &ig {
            Some((g, _)) => {
                let zi: Vec<i64> = z.iter().map(|x| *x as i64).collect();
                let mut s: i128 = 0;
                for i in 0..n {
                    if zi[i] == 0 {
                        continue;
                    }
                    let mut t: i128 = 0;
                    for j in 0..n {
                        t += g[i * n + j] as i128 * zi[j] as i128;
                    }
                    s += t * zi[i] as i128;
                }
                match exact_min {
                    Some(m) if s > m => {}
                    Some(m) if s == m => count += 1,
                    _ => {
                        exact_min = Some(s);
                        count = 1;
                    }
                }
            }
            None => count += 1,
        }
    })?;
    let d = match (&ig, exact_min) {
        (Some((_, den)), Some(m)) => m as f64 / *den as f64,
        _ => r,
    };
    Ok((d, count))
}

/// Lattice vectors with squared norm ≤ radius_sq (or = radius_sq in shell mode).
#[derive(Clone, Debug, Serialize)]
pub struct ShellReport {
    pub radius_sq: f64,
    pub count: u64,
    pub vectors: Option<Vec<Vec<f64>>>,
}

pub fn shell(l: &LatticeBasis, radius_sq: f64, shell_only: bool, keep: bool, max_nodes: u64) -> Result<ShellReport, Error> {
    let n = l.dim();
    let sphere = l.sphere();
    let tol = 1e-9 * radius_sq.max(1.0);
    let mut count = 0;
    let mut vecs = Vec::new();
    let mut budget = Budget::new(max_nodes);
    sphere.for_each_within(&vec![0.0; n], radius_sq + tol, &mut budget, |z, v| {
        if shell_only && (v - radius_sq).abs() > tol {
            return;
        }
        count += 1;
        if keep {
            vecs.push(sphere.point(z));
        }
    })?;
    Ok(ShellReport { radius_sq, count, vectors: keep.then_some(vecs) })
}

/// Coset representatives [sup/sub], canonically reduced into the half-open
/// fundamental parallelepiped of `sub`; the zero coset comes first.
#[derive(Clone, Debug)]
pub struct CosetSystem {
    pub sup: LatticeBasis,
    pub sub: LatticeBasis,
    pub reps: Vec<Vec<f64>>,
    pub exact_reps: Vec<Vec<Surd>>,
}

impl CosetSystem {
    pub fn new(sup: &LatticeBasis, sub: &LatticeBasis, max_reps: u64) -> Result<Self, Error> {
        let n = sup.dim();
        if sub.dim() != n {
            return Err(Error::Shape("dimension mismatch".into()));
        }
        if !sub.is_sublattice_of(sup) {
            return Err(Error::NotSublattice);
        }
        let index = sub.index_in(sup)?;
        if index > max_reps {
            return Err(Error::Budget(max_reps));
        }
        // sub in sup coordinates, HNF gives a triangular box of representatives
        let c = sup.coords_of(sub.exact_rows())?;
        let ic: IMat = c.iter().map(|r| r.iter().map(|x| x.a.to_integer()).collect()).collect();
        let h = exact::hnf(&ic);
        let diag: Vec<u64> = (0..n).map(|i| h[i][i].to_u64().expect("small index")).collect();
        let sub_inv = sub.exact_inverse().ok_or(Error::Singular)?;
        let mut exact_reps = Vec::with_capacity(index as usize);
        for idx in 0..index {
            // mixed-radix digits over the box ∏[0, h_ii)
            let mut rest = idx;
            let mut coeff = vec![Surd::zero(); n];
            for i in (0..n).rev() {
                coeff[i] = Surd::int((rest % diag[i]) as i64);
                rest /= diag[i];
            }
            let x = row_times(&coeff, sup.exact_rows());
            exact_reps.push(reduce_mod(&x, sub_inv, sub.exact_rows()));
        }
        let reps = exact_reps.iter().map(|r| r.iter().map(Surd::to_f64).collect()).collect();
        Ok(CosetSystem { sup: sup.clone(), sub: sub.clone(), reps, exact_reps })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

fn row_times(c: &[Surd], m: &SMat) -> Vec<Surd> {
    let n = m[0].len();
    (0..n)
        .map(|j| {
            let mut acc = Surd::zero();
            for (i, ci) in c.iter().enumerate() {
                if !ci.is_zero() && !m[i][j].is_zero() {
                    acc = &acc + &(ci * &m[i][j]);
                }
            }
            acc
        })
        .collect()
}

/// x − ⌊x·B⁻¹⌋·B
pub fn reduce_mod(x: &[Surd], sub_inv: &SMat, sub: &SMat) -> Vec<Surd> {
    let c = row_times(x, sub_inv);
    let frac: Vec<Surd> = c
        .iter()
        .map(|v| {
            assert!(v.is_rational(), "coset coordinates must be rational");
            let f = v.a.floor();
            Surd::rational(&v.a - f)
        })
        .collect();
    row_times(&frac, sub)
}

/// σ² = vol^{2/n} / (2πe·Δ), Δ in linear scale.
pub fn vnr_to_sigma_sq(volume: f64, n: usize, vnr_db: f64) -> f64 {
    let delta = 10f64.powf(vnr_db / 10.0);
    volume.powf(2.0 / n as f64) / (2.0 * std::f64::consts::PI * std::f64::consts::E * delta)
}

pub fn sigma_sq_to_vnr(volume: f64, n: usize, sigma_sq: f64) -> f64 {
    let delta = volume.powf(2.0 / n as f64) / (2.0 * std::f64::consts::PI * std::f64::consts::E * sigma_sq);
    10.0 * delta.log10()
}

/// Gaussian tail Q(x).
pub fn q_func(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(x / std::f64::consts::SQRT_2)
}

pub fn union_bound_two_shells(d1: f64, tau1: f64, d2: f64, tau2: f64, sigma_sq: f64) -> Result<f64, Error> {
    if !(d1 > 0.0 && d2 > d1 && sigma_sq > 0.0) {
        return Err(Error::Domain("need 0 < d1 < d2 and σ² > 0".into()));
    }
    Ok(tau1 * q_func((d1 / (4.0 * sigma_sq)).sqrt()) + tau2 * q_func((d2 / (4.0 * sigma_sq)).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingTag;

    #[test]
    fn z2_phi_is_checkerboard() {
        let z2 = LatticeBasis::from_complex("Z2", ComplexBasis::new(RingTag::Gaussian, vec![vec![CNum::int(1)]]).unwrap())
            .unwrap();
        let mut d2 = z2.scale_rotate(Theta::Phi).unwrap();
        assert_eq!(d2.volume_sq_exact(), Surd::int(4));
        let (d, tau) = d2.enumerate_min_norm(1 << 20).unwrap();
        assert_eq!((d, tau), (2.0, 4));
        assert_eq!(d2.index_in(&z2).unwrap(), 2);
        let cs = CosetSystem::new(&z2, &d2, 100).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(cs.reps[0].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn one_dim_cosets() {
        let z = LatticeBasis::from_rows("Z", vec![vec![Surd::int(1)]]).unwrap();
        let two = LatticeBasis::from_rows("2Z", vec![vec![Surd::int(2)]]).unwrap();
        let cs = CosetSystem::new(&z, &two, 10).unwrap();
        assert_eq!(cs.reps, vec![vec![0.0], vec![1.0]]);
        assert!(CosetSystem::new(&two, &z, 10).is_err());
    }

    #[test]
    fn intersection_and_sum() {
        let a = LatticeBasis::from_rows("a", vec![vec![Surd::int(2), Surd::int(0)], vec![Surd::int(0), Surd::int(1)]]).unwrap();
        let b = LatticeBasis::from_rows("b", vec![vec![Surd::int(1), Surd::int(0)], vec![Surd::int(0), Surd::int(3)]]).unwrap();
        let i = a.intersection(&b, "i").unwrap();
        assert_eq!(i.volume_sq_exact(), Surd::int(36));
        let s = a.sum(&b, "s").unwrap();
        assert!(s.same_lattice(&LatticeBasis::integer_lattice(2)));
    }

    #[test]
    fn vnr_roundtrip_and_unit_value() {
        let s = vnr_to_sigma_sq(1.0, 24, 0.0);
        assert!((s - 1.0 / (2.0 * std::f64::consts::PI * std::f64::consts::E)).abs() < 1e-15);
        for &v in &[-3.0, 0.0, 3.3, 7.1] {
            let s = vnr_to_sigma_sq(2.5, 8, v);
            assert!((sigma_sq_to_vnr(2.5, 8, s) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn union_bound_single_shell() {
        let s = 0.1;
        let u = union_bound_two_shells(1.0, 4.0, 2.0, 0.0, s).unwrap();
        assert!((u - 4.0 * q_func((1.0 / (4.0 * s)).sqrt())).abs() < 1e-15);
        assert!(union_bound_two_shells(2.0, 1.0, 1.0, 1.0, s).is_err());
    }
}
