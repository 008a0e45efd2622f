//! State-information models and coding regimes.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How much of the state sequence one side sees before acting in slot `n`.
///
/// The derived order is `None < StrictlyCausal < Causal < NonCausal`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateInfo {
    None,
    StrictlyCausal,
    Causal,
    NonCausal,
}

impl StateInfo {
    pub fn token(self) -> &'static str {
        match self {
            StateInfo::None => "-",
            StateInfo::StrictlyCausal => "sc",
            StateInfo::Causal => "c",
            StateInfo::NonCausal => "nc",
        }
    }
}

impl FromStr for StateInfo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-" | "none" => Ok(StateInfo::None),
            "sc" | "strictly_causal" => Ok(StateInfo::StrictlyCausal),
            "c" | "causal" => Ok(StateInfo::Causal),
            "nc" | "non_causal" => Ok(StateInfo::NonCausal),
            other => Err(Error::UnsupportedModel(format!("unknown state-information token {other:?}"))),
        }
    }
}

/// An (encoder, decoder) state-information pair.
///
/// Only the eight pairs of the standard model set plus decoder-only causal
/// information can be constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(StateInfo, StateInfo)", into = "(StateInfo, StateInfo)")]
pub struct SiModel {
    encoder: StateInfo,
    decoder: StateInfo,
}

impl SiModel {
    pub const NONE: SiModel = SiModel::raw(StateInfo::None, StateInfo::None);
    pub const SC_NONE: SiModel = SiModel::raw(StateInfo::StrictlyCausal, StateInfo::None);
    pub const C_NONE: SiModel = SiModel::raw(StateInfo::Causal, StateInfo::None);
    pub const NC_NONE: SiModel = SiModel::raw(StateInfo::NonCausal, StateInfo::None);
    pub const SC_C: SiModel = SiModel::raw(StateInfo::StrictlyCausal, StateInfo::Causal);
    pub const C_C: SiModel = SiModel::raw(StateInfo::Causal, StateInfo::Causal);
    pub const NC_C: SiModel = SiModel::raw(StateInfo::NonCausal, StateInfo::Causal);
    pub const NC_NC: SiModel = SiModel::raw(StateInfo::NonCausal, StateInfo::NonCausal);
    /// Causal state information at the decoder only.
    pub const NONE_C: SiModel = SiModel::raw(StateInfo::None, StateInfo::Causal);

    /// The eight models in which the encoder knows at least what the decoder knows.
    pub const STANDARD: [SiModel; 8] = [
        SiModel::NONE,
        SiModel::SC_NONE,
        SiModel::C_NONE,
        SiModel::NC_NONE,
        SiModel::SC_C,
        SiModel::C_C,
        SiModel::NC_C,
        SiModel::NC_NC,
    ];

    /// Every constructible model: the standard eight plus `NONE_C`.
    pub const ALL: [SiModel; 9] = [
        SiModel::NONE,
        SiModel::SC_NONE,
        SiModel::C_NONE,
        SiModel::NC_NONE,
        SiModel::SC_C,
        SiModel::C_C,
        SiModel::NC_C,
        SiModel::NC_NC,
        SiModel::NONE_C,
    ];

    const fn raw(encoder: StateInfo, decoder: StateInfo) -> Self {
        SiModel { encoder, decoder }
    }

    pub fn new(encoder: StateInfo, decoder: StateInfo) -> Result<Self> {
        let model = SiModel::raw(encoder, decoder);
        if SiModel::ALL.contains(&model) {
            Ok(model)
        } else {
            Err(Error::UnsupportedModel(model.to_string()))
        }
    }

    pub fn encoder(self) -> StateInfo {
        self.encoder
    }

    pub fn decoder(self) -> StateInfo {
        self.decoder
    }

    /// True for the eight models where the encoder can replay the decoder.
    pub fn is_standard(self) -> bool {
        self != SiModel::NONE_C
    }

    pub fn decoder_sees_state(self) -> bool {
        self.decoder != StateInfo::None
    }
}

impl PartialOrd for SiModel {
    /// Coordinatewise order; incomparable pairs give `None`.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let e = self.encoder.cmp(&other.encoder);
        let d = self.decoder.cmp(&other.decoder);
        match (e, d) {
            (Ordering::Equal, d) => Some(d),
            (e, Ordering::Equal) => Some(e),
            (e, d) if e == d => Some(e),
            _ => None,
        }
    }
}

impl fmt::Display for SiModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.encoder.token(), self.decoder.token())
    }
}

impl FromStr for SiModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (enc, dec) = s
            .split_once(',')
            .ok_or_else(|| Error::UnsupportedModel(format!("expected `enc,dec`, got {s:?}")))?;
        SiModel::new(enc.parse()?, dec.parse()?)
    }
}

impl TryFrom<(StateInfo, StateInfo)> for SiModel {
    type Error = Error;

    fn try_from((e, d): (StateInfo, StateInfo)) -> Result<Self> {
        SiModel::new(e, d)
    }
}

impl From<SiModel> for (StateInfo, StateInfo) {
    fn from(m: SiModel) -> Self {
        (m.encoder, m.decoder)
    }
}

/// Coding regime: how the transmission length may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    FixedLength,
    BoundedLength,
    VariableLength,
}

impl Regime {
    pub const ALL: [Regime; 3] = [Regime::FixedLength, Regime::BoundedLength, Regime::VariableLength];

    pub fn token(self) -> &'static str {
        match self {
            Regime::FixedLength => "fl",
            Regime::BoundedLength => "bl",
            Regime::VariableLength => "vl",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "fl" | "fixed_length" => Ok(Regime::FixedLength),
            "bl" | "bounded_length" => Ok(Regime::BoundedLength),
            "vl" | "variable_length" => Ok(Regime::VariableLength),
            other => Err(Error::UnsupportedRegime(other.to_owned())),
        }
    }
}
