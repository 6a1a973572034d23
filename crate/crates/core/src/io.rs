//! Plain-text lattice files.
//!
//! ```text
//! dim 4
//! ring gaussian
//! 1+0i 0+0i
//! 1+1i 1+1i
//! ```
//!
//! `ring none` files carry n real rows; complex files carry n/2 rows of
//! ring elements (`a+bi`, or `p+q*l` in the basis {1, λ}). Lines starting
//! with `#` are ignored.

use crate::exact::parse_surd;
use crate::lattice::LatticeBasis;
use crate::ring::{parse_ring_elem, ComplexBasis, RingTag};
use crate::Error;

pub fn parse_lattice(text: &str, name: &str) -> Result<LatticeBasis, Error> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };

    let (ln, l) = lines.next().ok_or_else(|| perr(1, "empty file"))?;
    let n: usize = l
        .strip_prefix("dim")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| perr(ln, "expected `dim n`"))?;
    if n == 0 {
        return Err(perr(ln, "dimension must be positive"));
    }
    let (ln, l) = lines.next().ok_or_else(|| perr(ln + 1, "missing ring line"))?;
    let ring = match l.strip_prefix("ring").map(str::trim) {
        Some("none") => None,
        Some("gaussian") => Some(RingTag::Gaussian),
        Some("lambda") => Some(RingTag::Lambda),
        _ => return Err(perr(ln, "expected `ring none|gaussian|lambda`")),
    };
    match ring {
        None => {
            let mut rows = Vec::with_capacity(n);
            for _ in 0..n {
                let (ln, l) = lines.next().ok_or_else(|| perr(0, "too few rows"))?;
                let row: Option<Vec<_>> = l.split_whitespace().map(parse_surd).collect();
                let row = row.ok_or_else(|| perr(ln, "bad entry"))?;
                if row.len() != n {
                    return Err(perr(ln, "wrong row length"));
                }
                rows.push(row);
            }
            if let Some((ln, _)) = lines.next() {
                return Err(perr(ln, "trailing content"));
            }
            LatticeBasis::from_rows(name, rows)
        }
        Some(ring) => {
            if !n.is_multiple_of(2) {
                return Err(Error::OddDimension(n));
            }
            let m = n / 2;
            let mut rows = Vec::with_capacity(m);
            for _ in 0..m {
                let (ln, l) = lines.next().ok_or_else(|| perr(0, "too few rows"))?;
                let row: Option<Vec<_>> = l.split_whitespace().map(|t| parse_ring_elem(t, ring)).collect();
                let row = row.ok_or_else(|| perr(ln, "bad ring element"))?;
                if row.len() != m {
                    return Err(perr(ln, "wrong row length"));
                }
                rows.push(row);
            }
            if let Some((ln, _)) = lines.next() {
                return Err(perr(ln, "trailing content"));
            }
            LatticeBasis::from_complex(name, ComplexBasis::new(ring, rows)?)
        }
    }
}

/// Complex form when available, real rows otherwise.
pub fn write_lattice(l: &LatticeBasis) -> String {
    let mut out = format!("dim {}\n", l.dim());
    if let Some(cb) = &l.complex {
        if let Some(rows) = cb.format_rows() {
            out.push_str(&format!("ring {}\n", cb.ring.name()));
            for r in rows {
                out.push_str(&r);
                out.push('\n');
            }
            return out;
        }
    }
    out.push_str("ring none\n");
    for r in l.exact_rows() {
        let toks: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_lattice_file(path: &std::path::Path) -> Result<(LatticeBasis, String), Error> {
    let text = std::fs::read_to_string(path)?;
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("lattice");
    Ok((parse_lattice(&text, name)?, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_roundtrip() {
        let text = "dim 2\nring none\n1/2 3\n-7/3 1/2*r7\n";
        let l = parse_lattice(text, "t").unwrap();
        assert_eq!(write_lattice(&l), text);
    }

    #[test]
    fn complex_roundtrip() {
        let text = "dim 4\nring lambda\n1+0*l 0+0*l\n1/2-3*l 2+1*l\n";
        let l = parse_lattice(text, "t").unwrap();
        assert_eq!(write_lattice(&l), text);
        let g = "dim 4\nring gaussian\n1+0i 0+0i\n1+1i 1+1i\n";
        assert_eq!(write_lattice(&parse_lattice(g, "t").unwrap()), g);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_lattice("dim 2\nring none\n1 0\n", "t").is_err());
        assert!(parse_lattice("dim 2\nring none\n1 0\n2 0\n", "t").is_err());
        assert!(parse_lattice("dim 3\nring gaussian\n1\n", "t").is_err());
        assert!(parse_lattice("dim 2\nring none\n1 x\n0 1\n", "t").is_err());
    }
}
