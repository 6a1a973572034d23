//! Exact arithmetic in Q(√7) plus integer Hermite normal forms.
//!
//! All lattices built by this crate have coordinates of the form a + b√7
//! with rational a, b, so subset, equality and evenness checks never touch
//! floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub const SQRT7: f64 = 2.645_751_311_064_590_6;

/// a + b·√7 with rational a, b.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    pub a: BigRational,
    pub b: BigRational,
}

impl Surd {
    pub fn zero() -> Self {
        Surd { a: BigRational::zero(), b: BigRational::zero() }
    }
    pub fn one() -> Self {
        Surd::int(1)
    }
    pub fn int(v: i64) -> Self {
        Surd { a: BigRational::from_integer(v.into()), b: BigRational::zero() }
    }
    pub fn ratio(p: i64, q: i64) -> Self {
        Surd { a: BigRational::new(p.into(), q.into()), b: BigRational::zero() }
    }
    pub fn rational(a: BigRational) -> Self {
        Surd { a, b: BigRational::zero() }
    }
    /// (p/q)·√7
    pub fn root7(p: i64, q: i64) -> Self {
        Surd { a: BigRational::zero(), b: BigRational::new(p.into(), q.into()) }
    }
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }
    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }
    pub fn to_f64(&self) -> f64 {
        rat_f64(&self.a) + rat_f64(&self.b) * SQRT7
    }
    pub fn conj(&self) -> Self {
        Surd { a: self.a.clone(), b: -self.b.clone() }
    }
    /// a² − 7b², the field norm down to Q.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(7.into()) * &self.b * &self.b
    }
    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(Surd { a: c.a / &n, b: c.b / n })
    }
    pub fn scale(&self, r: &BigRational) -> Self {
        Surd { a: &self.a * r, b: &self.b * r }
    }
    /// Sign of the real number a + b√7.
    pub fn signum(&self) -> i32 {
        let sa = sgn(&self.a);
        let sb = sgn(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return if sa == 0 { sb } else { sa };
        }
        // opposite signs: compare a² with 7b²
        let lhs = &self.a * &self.a;
        let rhs = BigRational::from_integer(7.into()) * &self.b * &self.b;
        if lhs > rhs {
            sa
        } else if lhs < rhs {
            sb
        } else {
            0
        }
    }
}

fn sgn(r: &BigRational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

pub fn rat_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*r7", self.b)
        } else if self.b.is_negative() {
            write!(f, "{}-{}*r7", self.a, -self.b.clone())
        } else {
            write!(f, "{}+{}*r7", self.a, self.b)
        }
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, o: &Surd) -> Surd {
        Surd { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}
impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, o: &Surd) -> Surd {
        Surd { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}
impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, o: &Surd) -> Surd {
        if self.b.is_zero() && o.b.is_zero() {
            return Surd { a: &self.a * &o.a, b: BigRational::zero() };
        }
        let seven = BigRational::from_integer(7.into());
        Surd {
            a: &self.a * &o.a + seven * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}
impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { a: -self.a.clone(), b: -self.b.clone() }
    }
}
impl Add for Surd {
    type Output = Surd;
    fn add(self, o: Surd) -> Surd {
        &self + &o
    }
}
impl Sub for Surd {
    type Output = Surd;
    fn sub(self, o: Surd) -> Surd {
        &self - &o
    }
}
impl Mul for Surd {
    type Output = Surd;
    fn mul(self, o: Surd) -> Surd {
        &self * &o
    }
}
impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

pub type SMat = Vec<Vec<Surd>>;
pub type IMat = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> SMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Surd::one() } else { Surd::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &SMat, b: &SMat) -> SMat {
    let m = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    let mut acc = Surd::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(x * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &SMat) -> SMat {
    let m = a.first().map_or(0, |r| r.len());
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn to_f64_mat(a: &SMat) -> Vec<Vec<f64>> {
    a.iter().map(|r| r.iter().map(Surd::to_f64).collect()).collect()
}

/// Inverse by Gauss-Jordan over Q(√7). `None` when singular.
pub fn inverse(m: &SMat) -> Option<SMat> {
    let n = m.len();
    let mut a: SMat = m.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].inv()?;
        for j in 0..n {
            a[col][j] = &a[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                if !a[col][j].is_zero() {
                    a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                }
                if !inv[col][j].is_zero() {
                    inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
                }
            }
        }
    }
    Some(inv)
}

pub fn det(m: &SMat) -> Surd {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Surd::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Surd::zero();
        };
        if piv != col {
            a.swap(col, piv);
            d = -d;
        }
        d = &d * &a[col][col];
        let p = a[col][col].inv().expect("nonzero pivot");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &p;
            for j in col..n {
                if !a[col][j].is_zero() {
                    a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                }
            }
        }
    }
    d
}

/// Fraction-free determinant of an integer matrix.
pub fn det_int(m: &IMat) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Row-style Hermite normal form. Zero rows are dropped; pivots are positive
/// and entries above a pivot lie in [0, pivot).
pub fn hnf(rows: &IMat) -> IMat {
    let ncols = rows.first().map_or(0, |r| r.len());
    let (mut h, _) = echelon(rows.clone(), ncols, None);
    h.retain(|r| r.iter().any(|x| !x.is_zero()));
    reduce_above(&mut h);
    h
}

fn reduce_above(h: &mut IMat) {
    for i in 0..h.len() {
        let Some(pc) = h[i].iter().position(|x| !x.is_zero()) else { continue };
        let p = h[i][pc].clone();
        for r in 0..i {
            let q = h[r][pc].div_floor(&p);
            if !q.is_zero() {
                let sub: Vec<BigInt> = h[i].iter().map(|x| x * &q).collect();
                for (x, s) in h[r].iter_mut().zip(sub) {
                    *x -= s;
                }
            }
        }
    }
}

/// Unimodular row reduction on the first `pcols` columns. When `track` is
/// given it is transformed alongside (used for kernels).
fn echelon(mut a: IMat, pcols: usize, mut track: Option<&mut IMat>) -> (IMat, usize) {
    let nrows = a.len();
    let mut r = 0;
    for c in 0..pcols {
        if r == nrows {
            break;
        }
        loop {
            // pick the smallest nonzero |entry| in column c at or below r
            let mut best: Option<usize> = None;
            for i in r..nrows {
                if !a[i][c].is_zero() && best.is_none_or(|b| a[i][c].abs() < a[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(r, b);
            if let Some(t) = track.as_deref_mut() {
                t.swap(r, b);
            }
            let mut done = true;
            for i in r + 1..nrows {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let pivot_row = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
                if let Some(t) = track.as_deref_mut() {
                    let tr = t[r].clone();
                    for (x, p) in t[i].iter_mut().zip(&tr) {
                        *x -= &q * p;
                    }
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if (r..nrows).any(|i| !a[i][c].is_zero()) {
            if a[r][c].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -x.clone();
                }
                if let Some(t) = track.as_deref_mut() {
                    for x in t[r].iter_mut() {
                        *x = -x.clone();
                    }
                }
            }
            r += 1;
        }
    }
    (a, r)
}

/// Integer left kernel of `m`: a basis of {x ∈ Z^rows : x·m = 0}.
pub fn int_left_kernel(m: &IMat) -> IMat {
    let n = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut t: IMat = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let (_, rank) = echelon(m.clone(), ncols, Some(&mut t));
    t.split_off(rank)
}

/// Lowest common multiple of all denominators (rational parts only).
pub fn common_denominator(m: &SMat) -> BigInt {
    let mut d = BigInt::one();
    for x in m.iter().flatten() {
        d = d.lcm(x.a.denom());
    }
    d
}

/// Converts a rational Surd matrix scaled by `d` to integers; `None` if any
/// entry has a √7 part or is not integral after scaling.
pub fn scaled_integers(m: &SMat, d: &BigInt) -> Option<IMat> {
    let dr = BigRational::from_integer(d.clone());
    m.iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    if !x.is_rational() {
                        return None;
                    }
                    let v = &x.a * &dr;
                    v.is_integer().then(|| v.to_integer())
                })
                .collect()
        })
        .collect()
}

pub fn int_to_surd(m: &IMat) -> SMat {
    m.iter()
        .map(|r| r.iter().map(|x| Surd::rational(BigRational::from_integer(x.clone()))).collect())
        .collect()
}

/// Parses a rational token: integers, `p/q`, or decimals with optional exponent.
pub fn parse_rational(tok: &str) -> Option<BigRational> {
    let tok = tok.trim();
    if tok.is_empty() {
        return None;
    }
    if let Some((p, q)) = tok.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mant, exp) = match tok.find(['e', 'E']) {
        Some(i) => (&tok[..i], tok[i + 1..].parse::<i32>().ok()?),
        None => (tok, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{ip}{fp}");
    let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    if neg {
        num = -num;
    }
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(r)
}

/// Parses `a`, `b*r7`, `a+b*r7` or `a-b*r7`.
pub fn parse_surd(tok: &str) -> Option<Surd> {
    let tok = tok.trim();
    if let Some(body) = tok.strip_suffix("*r7") {
        // split at the last sign that is not at position 0 and not after 'e'
        let bytes = body.as_bytes();
        let mut cut = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                cut = Some(i);
                break;
            }
        }
        return match cut {
            Some(i) => {
                let a = parse_rational(&body[..i])?;
                let b = parse_rational(&body[i..])?;
                Some(Surd { a, b })
            }
            None => Some(Surd { a: BigRational::zero(), b: parse_rational(body)? }),
        };
    }
    parse_rational(tok).map(Surd::rational)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IMat {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn surd_inverse_roundtrip() {
        let x = Surd { a: BigRational::new(3.into(), 2.into()), b: BigRational::new((-1).into(), 3.into()) };
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, Surd::one());
    }

    #[test]
    fn sqrt7_squared() {
        let r = Surd::root7(1, 1);
        assert_eq!(&r * &r, Surd::int(7));
    }

    #[test]
    fn signum_mixed() {
        assert_eq!(Surd { a: BigRational::from_integer(3.into()), b: BigRational::from_integer((-1).into()) }.signum(), 1);
        assert_eq!(Surd { a: BigRational::from_integer(2.into()), b: BigRational::from_integer((-1).into()) }.signum(), -1);
    }

    #[test]
    fn hnf_small() {
        let h = hnf(&im(&[&[2, 0], &[0, 2], &[1, 1]]));
        assert_eq!(h, im(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn kernel_of_dependent_rows() {
        let m = im(&[&[1, 2], &[2, 4], &[0, 1]]);
        let k = int_left_kernel(&m);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        for c in 0..2 {
            let s: BigInt = (0..3).map(|i| &v[i] * &m[i][c]).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn bareiss_matches_gauss() {
        let m = im(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(det_int(&m), BigInt::from(4));
        assert_eq!(det(&int_to_surd(&m)), Surd::int(4));
    }

    #[test]
    fn parse_tokens() {
        assert_eq!(parse_rational("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("1.5e2").unwrap(), BigRational::from_integer(150.into()));
        let s = parse_surd("1/2-3/2*r7").unwrap();
        assert_eq!(s, Surd { a: BigRational::new(1.into(), 2.into()), b: BigRational::new((-3).into(), 2.into()) });
        assert_eq!(parse_surd(&s.to_string()).unwrap(), s);
        assert!(parse_rational("abc").is_none());
    }
}
