//! Named lattice families with their constructions and decoder trees.

use crate::analysis::{db_to_linear, delta_star, DeltaStarMode, PredictorSpec, TabulatedCurve};
use crate::constructions::{self, VERIFY_NODES};
use crate::decoders::{self, DecoderHandle, DynDecoder, ListConfig, Strategy};
use crate::lattice::{LatticeBasis, Provenance};
use crate::ring::Theta;
use crate::Error;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Integer(usize),
    Checkerboard(usize),
    BarnesWall(usize),
    E8,
    Leech,
    ThreeParityLeech,
    N72,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        let s = s.to_ascii_lowercase();
        let num = |p: &str| s.strip_prefix(p).and_then(|r| r.parse::<usize>().ok());
        match s.as_str() {
            "e8" => Some(Family::E8),
            "leech" | "l24" => Some(Family::Leech),
            "l3x24" | "l72" => Some(Family::ThreeParityLeech),
            "n72" | "nebe" => Some(Family::N72),
            _ => {
                if let Some(n) = num("bw").filter(|n| *n >= 2 && n.is_power_of_two()) {
                    Some(Family::BarnesWall(n))
                } else if let Some(n) = num("d").filter(|n| *n >= 2) {
                    Some(Family::Checkerboard(n))
                } else {
                    num("z").filter(|n| *n >= 1).map(Family::Integer)
                }
            }
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Family::Integer(n) | Family::Checkerboard(n) | Family::BarnesWall(n) => n,
            Family::E8 => 8,
            Family::Leech => 24,
            Family::ThreeParityLeech | Family::N72 => 72,
        }
    }

    pub fn strategies(self) -> &'static [Strategy] {
        use Strategy::*;
        match self {
            Family::Integer(_) => &[SphereEnum],
            Family::Checkerboard(_) => &[SphereEnum, ParityBdd, ParityList, ParityListSplit],
            Family::BarnesWall(2) => &[SphereEnum],
            Family::BarnesWall(_) => &[SphereEnum, ParityBdd, ParityList, ParityListSplit, RecursiveList, BwRecursiveBdd],
            Family::E8 => &[SphereEnum, BwRecursiveBdd],
            Family::Leech => &[SphereEnum, KingBdd, KingList, LeechCvp],
            Family::ThreeParityLeech => &[SphereEnum, ParityBdd, ParityList, ParityListSplit, RecursiveList],
            Family::N72 => &[SphereEnum, KingBdd, NebeQmld],
        }
    }

    /// Builds the lattice. With `check_nodes > 0` enumeration-backed
    /// checks run and the recorded figures of merit become exact.
    pub fn build(self, check_nodes: u64) -> Result<LatticeBasis, Error> {
        let mut l = match self {
            Family::Integer(n) => LatticeBasis::integer_lattice(n),
            Family::Checkerboard(n) => constructions::checkerboard(n)?,
            Family::BarnesWall(n) => constructions::barnes_wall(n)?.lattice().clone(),
            Family::E8 => constructions::e8(),
            Family::Leech => {
                let mut l = constructions::leech_turyn()?;
                l.set_kissing(196_560, Provenance::Asserted);
                l
            }
            Family::ThreeParityLeech => {
                let leech = constructions::leech_turyn()?;
                let mut l = constructions::ParityFamily::new(&leech, Theta::Lambda, 3, 1)?.lattice().clone();
                l.name = "L3x24".into();
                if check_nodes > 0 {
                    let k = constructions::kissing_3parity_leech(&leech, check_nodes)?;
                    l.set_kissing(k.total, Provenance::Exact);
                } else {
                    l.set_kissing(28_894_320, Provenance::Asserted);
                }
                l
            }
            Family::N72 => constructions::nebe(&constructions::leech_turyn()?, check_nodes)?.lattice,
        };
        if check_nodes > 0 && l.dim() <= 32 && l.kissing().is_none_or(|k| k.provenance != Provenance::Exact) {
            l.enumerate_min_norm(check_nodes)?;
        }
        Ok(l)
    }

    /// Decoder tree for a strategy; `cfg.delta` sets the list radius.
    pub fn handle(self, strategy: Strategy, mut cfg: ListConfig) -> Result<DecoderHandle, Error> {
        if strategy == Strategy::ParityListSplit {
            cfg.split1 = true;
        }
        cfg.validate()?;
        if !self.strategies().contains(&strategy) {
            return Err(Error::Domain(format!("strategy {strategy} is not available for {self}")));
        }
        let arc = Arc::new(cfg.clone());
        let dec: DynDecoder = match (self, strategy) {
            (_, Strategy::SphereEnum) => {
                let l = self.build(0)?;
                let l = if l.min_sq_norm().is_some() { l } else { self.build(VERIFY_NODES)? };
                decoders::sphere(&l, &cfg)?
            }
            (Family::Checkerboard(n), _) => {
                let z = LatticeBasis::integer_lattice(1);
                let mut two = z.scaled_rational(&num_rational::BigRational::from_integer(2.into()), "2Z")?;
                two.set_min_sq_norm(4.0, Provenance::Exact);
                Arc::new(decoders::parity_over(&z, &two, n, arc)?)
            }
            (Family::BarnesWall(n), Strategy::ParityBdd | Strategy::ParityList | Strategy::ParityListSplit) => {
                let f = constructions::barnes_wall(n / 2)?;
                let t = f.lattice();
                let mut v = f.rotated(f.depth())?;
                v.set_min_sq_norm(2.0 * t.d(), Provenance::Exact);
                Arc::new(decoders::parity_over(t, &v, 2, arc)?)
            }
            (Family::BarnesWall(n), _) => decoders::bw_recursive(n, arc)?,
            (Family::E8, _) => decoders::e8_bdd_onto(&constructions::e8())?,
            (Family::Leech, Strategy::KingBdd) => Arc::new(decoders::leech_qmld(&decoders::leech_parts()?)?),
            (Family::Leech, Strategy::LeechCvp) => {
                let half = Arc::new(ListConfig { delta: 0.5, removing_step: true, ..cfg.clone() });
                Arc::new(decoders::leech_list(&decoders::leech_parts()?, half)?)
            }
            (Family::Leech, _) => Arc::new(decoders::leech_list(&decoders::leech_parts()?, arc)?),
            (Family::ThreeParityLeech, Strategy::ParityBdd) => {
                let leech: DynDecoder = Arc::new(decoders::leech_qmld(&decoders::leech_parts()?)?);
                Arc::new(decoders::three_parity_leech(leech, arc, 5)?)
            }
            (Family::ThreeParityLeech, _) => {
                let leech: DynDecoder = Arc::new(decoders::leech_list(&decoders::leech_parts()?, arc.clone())?);
                Arc::new(decoders::three_parity_leech(leech, arc, 3)?)
            }
            (Family::N72, _) => {
                let build = constructions::nebe(&constructions::leech_turyn()?, 0)?;
                let mut parts = decoders::nebe_parts(&build)?;
                // the default structure is not extremal; use the true minimum
                let (norm6, _) = constructions::n72_norm6_count(&build.triple.s, VERIFY_NODES)?;
                parts.d = if norm6 > 0 { 6.0 } else { 8.0 };
                let leech: DynDecoder = Arc::new(decoders::leech_qmld(&decoders::leech_parts()?)?);
                Arc::new(decoders::nebe_qmld(&parts, leech, 5)?)
            }
            _ => unreachable!("filtered by strategies()"),
        };
        let cfg = if strategy == Strategy::LeechCvp { ListConfig { delta: 0.5, ..cfg } } else { cfg };
        Ok(DecoderHandle::new(strategy, self.to_string(), cfg, dec))
    }
}

/// Relative radius for modified split list decoding of BW_n that keeps the
/// predicted P(x ∉ list) at `target` for the given VNR. Radii below 1/4 are
/// raised to 1/4, where the decoder falls back to bounded-distance decoding.
pub fn bw_operating_delta(n: usize, vnr_db: f64, target: f64) -> Result<f64, Error> {
    let spec = PredictorSpec::barnes_wall(n, true)?.with_bdd_curves(TabulatedCurve::bw_bdd_all());
    let d = delta_star(&DeltaStarMode::Modified(spec), 0.0, db_to_linear(vnr_db), target)?;
    Ok(d.max(0.25))
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Integer(n) => write!(f, "z{n}"),
            Family::Checkerboard(n) => write!(f, "d{n}"),
            Family::BarnesWall(n) => write!(f, "bw{n}"),
            Family::E8 => f.write_str("e8"),
            Family::Leech => f.write_str("leech"),
            Family::ThreeParityLeech => f.write_str("l3x24"),
            Family::N72 => f.write_str("n72"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        assert_eq!(Family::parse("bw16"), Some(Family::BarnesWall(16)));
        assert_eq!(Family::parse("BW12"), None);
        assert_eq!(Family::parse("d4"), Some(Family::Checkerboard(4)));
        assert_eq!(Family::parse("leech"), Some(Family::Leech));
        for f in [Family::Integer(3), Family::BarnesWall(8), Family::E8, Family::ThreeParityLeech, Family::N72] {
            assert_eq!(Family::parse(&f.to_string()), Some(f));
        }
    }

    #[test]
    fn strategy_must_fit_family() {
        assert!(Family::E8.handle(Strategy::LeechCvp, ListConfig::default()).is_err());
    }
}
