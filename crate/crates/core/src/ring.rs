//! Complex structures over Z[i] and Z[λ], λ = (1 + i√7)/2.

use crate::exact::{self, parse_rational, SMat, Surd};
use crate::Error;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingTag {
    Gaussian,
    Lambda,
}

impl RingTag {
    /// The generator ω of the ring over Z: i or λ.
    pub fn omega(self) -> CNum {
        match self {
            RingTag::Gaussian => CNum::new(Surd::zero(), Surd::one()),
            RingTag::Lambda => Theta::Lambda.cnum(),
        }
    }
    pub fn name(self) -> &'static str {
        match self {
            RingTag::Gaussian => "gaussian",
            RingTag::Lambda => "lambda",
        }
    }
}

/// The scaling-rotation elements. Each has squared modulus 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theta {
    Phi,
    Lambda,
    Psi,
}

impl Theta {
    pub fn cnum(self) -> CNum {
        match self {
            Theta::Phi => CNum::new(Surd::one(), Surd::one()),
            Theta::Lambda => CNum::new(Surd::ratio(1, 2), Surd::root7(1, 2)),
            Theta::Psi => CNum::new(Surd::ratio(1, 2), Surd::root7(-1, 2)),
        }
    }
    pub fn ring(self) -> RingTag {
        match self {
            Theta::Phi => RingTag::Gaussian,
            _ => RingTag::Lambda,
        }
    }
    pub fn as_f64(self) -> (f64, f64) {
        let c = self.cnum();
        (c.re.to_f64(), c.im.to_f64())
    }
    pub fn parse(s: &str) -> Option<Theta> {
        match s {
            "phi" => Some(Theta::Phi),
            "lambda" => Some(Theta::Lambda),
            "psi" => Some(Theta::Psi),
            _ => None,
        }
    }
}

/// Complex number with real and imaginary parts in Q(√7).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CNum {
    pub re: Surd,
    pub im: Surd,
}

impl CNum {
    pub fn new(re: Surd, im: Surd) -> Self {
        CNum { re, im }
    }
    pub fn zero() -> Self {
        CNum::new(Surd::zero(), Surd::zero())
    }
    pub fn int(v: i64) -> Self {
        CNum::new(Surd::int(v), Surd::zero())
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn mul(&self, o: &CNum) -> CNum {
        CNum::new(&(&self.re * &o.re) - &(&self.im * &o.im), &(&self.re * &o.im) + &(&self.im * &o.re))
    }
    pub fn add(&self, o: &CNum) -> CNum {
        CNum::new(&self.re + &o.re, &self.im + &o.im)
    }
    pub fn sub(&self, o: &CNum) -> CNum {
        CNum::new(&self.re - &o.re, &self.im - &o.im)
    }
    pub fn neg(&self) -> CNum {
        CNum::new(-&self.re, -&self.im)
    }
    pub fn conj(&self) -> CNum {
        CNum::new(self.re.clone(), -&self.im)
    }
    pub fn abs_sq(&self) -> Surd {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }
    pub fn inv(&self) -> Option<CNum> {
        let n = self.abs_sq().inv()?;
        let c = self.conj();
        Some(CNum::new(&c.re * &n, &c.im * &n))
    }
    /// Integral-basis coordinates (p, q) with z = p + q·ω, if rational.
    pub fn coords(&self, ring: RingTag) -> Option<(BigRational, BigRational)> {
        match ring {
            RingTag::Gaussian => {
                (self.re.is_rational() && self.im.is_rational()).then(|| (self.re.a.clone(), self.im.a.clone()))
            }
            RingTag::Lambda => {
                if !self.re.is_rational() || !self.im.a.is_zero() {
                    return None;
                }
                let q = &self.im.b * BigRational::from_integer(2.into());
                let p = &self.re.a - &q / BigRational::from_integer(2.into());
                Some((p, q))
            }
        }
    }
    pub fn from_coords(ring: RingTag, p: BigRational, q: BigRational) -> CNum {
        let w = ring.omega();
        CNum::new(&Surd::rational(p) + &w.re.scale(&q), w.im.scale(&q))
    }
    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

fn fmt_ring(z: &CNum, ring: RingTag) -> Option<String> {
    let (p, q) = z.coords(ring)?;
    let unit = match ring {
        RingTag::Gaussian => "i",
        RingTag::Lambda => "*l",
    };
    Some(if q.is_negative() {
        format!("{}-{}{}", p, -q, unit)
    } else {
        format!("{}+{}{}", p, q, unit)
    })
}

/// Parses `a`, `a+bi`, `bi`, `p+q*l`, `q*l` (also `i`, `-l`).
pub fn parse_ring_elem(tok: &str, ring: RingTag) -> Option<CNum> {
    let tok = tok.trim();
    let suffix = match ring {
        RingTag::Gaussian => "i",
        RingTag::Lambda => "l",
    };
    let Some(body) = tok.strip_suffix(suffix) else {
        return Some(CNum::from_coords(ring, parse_rational(tok)?, BigRational::zero()));
    };
    let body = body.strip_suffix('*').unwrap_or(body);
    let bytes = body.as_bytes();
    let mut cut = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            cut = Some(i);
            break;
        }
    }
    let coef = |s: &str| -> Option<BigRational> {
        match s {
            "" | "+" => Some(BigRational::from_integer(1.into())),
            "-" => Some(BigRational::from_integer((-1).into())),
            _ => parse_rational(s),
        }
    };
    let (p, q) = match cut {
        Some(i) => (parse_rational(&body[..i])?, coef(&body[i..])?),
        None => (BigRational::zero(), coef(body)?),
    };
    Some(CNum::from_coords(ring, p, q))
}

/// Generator matrix over Z[i] or Z[λ]; rows are basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexBasis {
    pub ring: RingTag,
    pub rows: Vec<Vec<CNum>>,
}

impl ComplexBasis {
    pub fn new(ring: RingTag, rows: Vec<Vec<CNum>>) -> Result<Self, Error> {
        let m = rows.len();
        if m == 0 || rows.iter().any(|r| r.len() != m) {
            return Err(Error::Shape("complex basis must be square".into()));
        }
        let b = ComplexBasis { ring, rows };
        let real = exact::to_f64_mat(&b.real_rows());
        let n = real.len();
        let flat: Vec<f64> = real.into_iter().flatten().collect();
        if crate::enumerate::invert(&flat, n).is_none() {
            return Err(Error::Singular);
        }
        Ok(b)
    }

    pub fn complex_dim(&self) -> usize {
        self.rows.len()
    }

    /// Real generator rows via the pairwise embedding: row z gives
    /// embed(z) and embed(ω·z).
    pub fn real_rows(&self) -> SMat {
        let w = self.ring.omega();
        let mut out = Vec::with_capacity(2 * self.rows.len());
        for row in &self.rows {
            out.push(embed(row));
            let wr: Vec<CNum> = row.iter().map(|z| w.mul(z)).collect();
            out.push(embed(&wr));
        }
        out
    }

    pub fn scaled(&self, c: &CNum) -> ComplexBasis {
        ComplexBasis {
            ring: self.ring,
            rows: self.rows.iter().map(|r| r.iter().map(|z| c.mul(z)).collect()).collect(),
        }
    }

    /// Text form of the entries in the ring's integral-basis coordinates.
    pub fn format_rows(&self) -> Option<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|z| fmt_ring(z, self.ring)).collect::<Option<Vec<_>>>().map(|v| v.join(" ")))
            .collect()
    }
}

pub fn embed(row: &[CNum]) -> Vec<Surd> {
    row.iter().flat_map(|z| [z.re.clone(), z.im.clone()]).collect()
}

impl fmt::Display for CNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})+i({})", self.re, self.im)
    }
}

/// I_{n/2} ⊗ R(2, c) where R(2, c) = [[Re c, Im c], [−Im c, Re c]].
pub fn scalar_operator(n: usize, c: &CNum) -> Result<SMat, Error> {
    if !n.is_multiple_of(2) {
        return Err(Error::OddDimension(n));
    }
    let mut m = vec![vec![Surd::zero(); n]; n];
    for b in 0..n / 2 {
        let (i, j) = (2 * b, 2 * b + 1);
        m[i][i] = c.re.clone();
        m[i][j] = c.im.clone();
        m[j][i] = -&c.im;
        m[j][j] = c.re.clone();
    }
    Ok(m)
}

pub fn rotation_operator(n: usize, theta: Theta) -> Result<SMat, Error> {
    scalar_operator(n, &theta.cnum())
}

/// In-place y ↦ y·(I ⊗ R(2,c)), i.e. blockwise complex multiplication by c.
pub fn mul_blocks(y: &mut [f64], c: (f64, f64)) {
    for p in y.chunks_exact_mut(2) {
        let (a, b) = (p[0], p[1]);
        p[0] = a * c.0 - b * c.1;
        p[1] = a * c.1 + b * c.0;
    }
}

/// Inverse of `mul_blocks` for |c|² = 2: multiply by conj(c)/2.
pub fn div_blocks(y: &mut [f64], c: (f64, f64)) {
    let n = c.0 * c.0 + c.1 * c.1;
    mul_blocks(y, (c.0 / n, -c.1 / n));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_relation() {
        // λ² = λ − 2
        let l = Theta::Lambda.cnum();
        assert_eq!(l.mul(&l), l.sub(&CNum::int(2)));
        assert_eq!(l.abs_sq(), Surd::int(2));
        assert_eq!(Theta::Phi.cnum().abs_sq(), Surd::int(2));
    }

    #[test]
    fn lambda_block_matches_second_form() {
        let b = ComplexBasis::new(RingTag::Lambda, vec![vec![Theta::Lambda.cnum()]]).unwrap();
        let r = b.real_rows();
        assert_eq!(r[0], vec![Surd::ratio(1, 2), Surd::root7(1, 2)]);
        assert_eq!(r[1], vec![Surd::ratio(-3, 2), Surd::root7(1, 2)]);
    }

    #[test]
    fn ring_elem_text_roundtrip() {
        for ring in [RingTag::Gaussian, RingTag::Lambda] {
            for tok in ["3", "1/2+3i", "-2-1/3*l", "l", "-i", "4*l"] {
                let z = match parse_ring_elem(tok, ring) {
                    Some(z) => z,
                    None => continue,
                };
                let s = fmt_ring(&z, ring).unwrap();
                assert_eq!(parse_ring_elem(&s, ring).unwrap(), z, "{tok} -> {s}");
            }
        }
        let z = parse_ring_elem("1+1*l", RingTag::Lambda).unwrap();
        assert_eq!(z.re, Surd::ratio(3, 2));
    }

    #[test]
    fn odd_dimension_rejected() {
        assert!(rotation_operator(3, Theta::Phi).is_err());
    }
}
