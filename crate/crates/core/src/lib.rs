//! Iterated prisoner's dilemma tournaments: engine, strategy zoo,
//! collusion state machines, payoff analytics, and transcript forensics.
//!
//! The crate is generic over the score scalar via [`num::Scalar`]; the
//! aliases [`StdScore`] and [`Rational`] cover the common cases of exact
//! integer totals and exact rational thresholds.

pub mod analytics;
pub mod engine;
pub mod forensics;
pub mod moves;
pub mod num;
pub mod payoff;
pub mod presets;
pub mod scoreboard;
pub mod strategies;
pub mod syndicate;
pub mod transcript;

pub use analytics::{
    clone_scaling_estimate, crosscheck_formulas, least_integer_above, role_payoffs,
    threshold_empire_beats_best_individual, threshold_unequal_empires,
    threshold_warring_democracy_beats_empire, AnalyticsError, ClaimContext, CrosscheckReport,
    CrosscheckRow, EmpireFooting, GroupPayoffs, GroupRole, GroupScenario,
    SizeAdvantageThreshold, ThresholdReport, UnequalEmpiresThreshold,
};
pub use engine::{
    derive_match_seed, play_match, run_tournament, EngineError, MatchParams, MatchSeed,
    StreamRole, TournamentConfig, TournamentResult,
};
pub use forensics::{
    detect_differential_servitude, detect_exploitation, suspicion_report, DifferentialFinding,
    FlaggedWindow, ForensicsError, SuspicionReport, DEFAULT_TOLERANCE, DEFAULT_WINDOW,
};
pub use moves::{parse_moves, Move, ParseMoveError};
pub use num::Scalar;
pub use payoff::{PayoffError, PayoffMatrix};
pub use presets::{Preset, UnknownPresetError, NOISY_PRESET_NOISE};
pub use scoreboard::{read_scoreboard_csv, Scoreboard, ScoreboardEntry, ScoreboardReadError};
pub use strategies::{Strategy, StrategyKind, UnknownStrategyError};
pub use syndicate::{build_group_roster, Godfather, GroupKind, Hitman, IntervalCode};
pub use transcript::{MatchTranscript, TurnRow};

/// Exact integer score type used by the default tournament pipeline.
pub type StdScore = i64;

/// Exact rational scalar for threshold arithmetic.
pub type Rational = num_rational::Ratio<i64>;
