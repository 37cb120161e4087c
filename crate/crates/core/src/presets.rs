//! Canned tournament environments.

use std::fmt;
use std::str::FromStr;

use crate::strategies::StrategyKind;

/// Noise level used by the [`Preset::Noisy`] environment.
pub const NOISY_PRESET_NOISE: f64 = 0.01;

/// A ready-made roster (and, for [`Preset::Noisy`], a default noise level).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Nine classic strategies, one entry each.
    Standard9,
    /// The nine classics plus seven extra unconditional defectors.
    Harsh,
    /// The nine classics plus seven extra coin-flippers.
    RandomEnv,
    /// The nine classics under 1% perception noise.
    Noisy,
}

impl Preset {
    /// Every preset, for help text and iteration.
    pub const ALL: [Preset; 4] = [
        Preset::Standard9,
        Preset::Harsh,
        Preset::RandomEnv,
        Preset::Noisy,
    ];

    /// The canonical name used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Preset::Standard9 => "standard9",
            Preset::Harsh => "harsh",
            Preset::RandomEnv => "random-env",
            Preset::Noisy => "noisy",
        }
    }

    /// The roster this preset plays.
    ///
    /// Names equal strategy names; duplicated kinds get numbered suffixes so
    /// every entry stays unique.
    pub fn roster(self) -> Vec<(String, StrategyKind)> {
        use StrategyKind::*;
        let base = [
            OmegaTitForTat,
            Grim,
            TitForTat,
            TitForTwoTats,
            AllC,
            Random,
            SuspiciousTitForTat,
            AllD,
            Negative,
        ];
        let mut roster: Vec<(String, StrategyKind)> =
            base.iter().map(|&k| (k.name().to_string(), k)).collect();
        let extras = match self {
            Preset::Standard9 | Preset::Noisy => None,
            Preset::Harsh => Some(AllD),
            Preset::RandomEnv => Some(Random),
        };
        if let Some(kind) = extras {
            for i in 2..=8 {
                roster.push((format!("{}-{}", kind.name(), i), kind));
            }
        }
        roster
    }

    /// The noise level the preset implies (overridable on the command line).
    pub fn default_noise(self) -> f64 {
        match self {
            Preset::Noisy => NOISY_PRESET_NOISE,
            _ => 0.0,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Error for preset names that don't exist.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown preset {0:?}; expected one of standard9, harsh, random-env, noisy")]
pub struct UnknownPresetError(pub String);

impl FromStr for Preset {
    type Err = UnknownPresetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lowered = s.to_ascii_lowercase();
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == lowered)
            .ok_or_else(|| UnknownPresetError(s.to_string()))
    }
}

impl serde::Serialize for Preset {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> serde::Deserialize<'de> for Preset {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
