use super::{Candidate, Counters, Decoder, ListConfig};
use crate::Error;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    SphereEnum,
    ParityBdd,
    ParityList,
    ParityListSplit,
    KingBdd,
    KingList,
    RecursiveList,
    BwRecursiveBdd,
    LeechCvp,
    NebeQmld,
}

impl Strategy {
    pub const ALL: [Strategy; 10] = [
        Strategy::SphereEnum,
        Strategy::ParityBdd,
        Strategy::ParityList,
        Strategy::ParityListSplit,
        Strategy::KingBdd,
        Strategy::KingList,
        Strategy::RecursiveList,
        Strategy::BwRecursiveBdd,
        Strategy::LeechCvp,
        Strategy::NebeQmld,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::SphereEnum => "sphere-enum",
            Strategy::ParityBdd => "parity-bdd",
            Strategy::ParityList => "parity-list",
            Strategy::ParityListSplit => "parity-list-split",
            Strategy::KingBdd => "king-bdd",
            Strategy::KingList => "king-list",
            Strategy::RecursiveList => "recursive-list",
            Strategy::BwRecursiveBdd => "bw-recursive-bdd",
            Strategy::LeechCvp => "leech-cvp",
            Strategy::NebeQmld => "nebe-qmld",
        }
    }

    pub fn parse(s: &str) -> Option<Strategy> {
        Strategy::ALL.into_iter().find(|x| x.name() == s)
    }

    /// Whether the strategy answers with a list at the configured radius.
    pub fn is_list(self) -> bool {
        matches!(
            self,
            Strategy::SphereEnum | Strategy::ParityList | Strategy::ParityListSplit | Strategy::KingList | Strategy::RecursiveList | Strategy::LeechCvp
        )
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecodeOutcome {
    pub candidates: Vec<Candidate>,
    pub counters: Counters,
}

impl DecodeOutcome {
    pub fn nearest(&self) -> Option<&Candidate> {
        self.candidates.first()
    }
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.candidates.iter().any(|c| c.point.iter().zip(x).all(|(a, b)| (a - b).abs() <= tol))
    }
}

/// A decoder tree bound to a lattice and a strategy.
#[derive(Clone)]
pub struct DecoderHandle {
    pub strategy: Strategy,
    pub lattice: String,
    pub cfg: ListConfig,
    decoder: Arc<dyn Decoder>,
}

impl fmt::Debug for DecoderHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DecoderHandle")
            .field("strategy", &self.strategy)
            .field("lattice", &self.lattice)
            .field("cfg", &self.cfg)
            .finish()
    }
}

impl DecoderHandle {
    pub fn new(strategy: Strategy, lattice: impl Into<String>, cfg: ListConfig, decoder: Arc<dyn Decoder>) -> Self {
        DecoderHandle { strategy, lattice: lattice.into(), cfg, decoder }
    }

    pub fn decoder(&self) -> &Arc<dyn Decoder> {
        &self.decoder
    }
    pub fn dim(&self) -> usize {
        self.decoder.dim()
    }
    pub fn min_sq_norm(&self) -> f64 {
        self.decoder.min_sq_norm()
    }
    pub fn radius_sq(&self) -> f64 {
        self.cfg.delta * self.decoder.min_sq_norm()
    }

    pub fn decode(&self, y: &[f64], max_nodes: u64) -> Result<DecodeOutcome, Error> {
        if y.len() != self.dim() {
            return Err(Error::Shape(format!("point has {} coordinates, lattice has dimension {}", y.len(), self.dim())));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("point has non-finite coordinates".into()));
        }
        let mut counters = Counters::new(max_nodes);
        let candidates = if self.strategy.is_list() {
            self.decoder.list(y, self.radius_sq(), &mut counters)?
        } else {
            self.decoder.bdd(y, &mut counters)?.into_iter().collect()
        };
        Ok(DecodeOutcome { candidates, counters })
    }
}
