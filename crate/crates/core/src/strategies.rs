//! Strategy trait and the standard strategy zoo.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};

use crate::moves::Move;

/// A per-match player.
///
/// The engine calls [`Strategy::next_move`] once per turn. `opponent_last`
/// is the move this player *perceived* from the opponent on the previous
/// turn (possibly flipped by observation noise); it is `None` on turn one.
/// Stochastic strategies draw from `rng`, a stream seeded per match so that
/// tournaments are reproducible.
pub trait Strategy: Send {
    /// Canonical name of the strategy kind (the roster spelling).
    fn kind_name(&self) -> &'static str;

    /// Returns the strategy to its initial state, as if freshly built.
    fn reset(&mut self);

    /// Chooses this turn's move.
    fn next_move(&mut self, opponent_last: Option<Move>, rng: &mut dyn RngCore) -> Move;
}

/// Draws a uniformly random move.
pub(crate) fn random_move(rng: &mut dyn RngCore) -> Move {
    if rng.random_bool(0.5) {
        Move::Cooperate
    } else {
        Move::Defect
    }
}

/// The strategy kinds accepted in rosters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    /// Cooperates unconditionally.
    AllC,
    /// Defects unconditionally.
    AllD,
    /// Cooperates first, then mirrors the opponent's last move.
    TitForTat,
    /// Defects only after two consecutive perceived defections.
    TitForTwoTats,
    /// Defects first, then mirrors the opponent's last move.
    SuspiciousTitForTat,
    /// Cooperates until the first perceived defection, then defects forever.
    Grim,
    /// Plays a coin flip every turn.
    Random,
    /// Random first move, then the opposite of the opponent's last move.
    Negative,
    /// Win-stay/lose-shift.
    Pavlov,
    /// Fixed defect-defect-cooperate cycle; a test opponent, not in presets.
    Exploiter,
    /// Mirroring strategy with deadlock recovery and randomness detection.
    OmegaTitForTat,
    /// Colluding ring leader; see the syndicate module.
    Godfather,
    /// Colluding ring servant; see the syndicate module.
    Hitman,
}

impl StrategyKind {
    /// All kinds, in canonical-name order.
    pub const ALL: [StrategyKind; 13] = [
        StrategyKind::AllC,
        StrategyKind::AllD,
        StrategyKind::TitForTat,
        StrategyKind::TitForTwoTats,
        StrategyKind::SuspiciousTitForTat,
        StrategyKind::Grim,
        StrategyKind::Random,
        StrategyKind::Negative,
        StrategyKind::Pavlov,
        StrategyKind::Exploiter,
        StrategyKind::OmegaTitForTat,
        StrategyKind::Godfather,
        StrategyKind::Hitman,
    ];

    /// Canonical roster spelling.
    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::AllC => "ALLC",
            StrategyKind::AllD => "ALLD",
            StrategyKind::TitForTat => "TFT",
            StrategyKind::TitForTwoTats => "TFTT",
            StrategyKind::SuspiciousTitForTat => "STFT",
            StrategyKind::Grim => "GRIM",
            StrategyKind::Random => "RAND",
            StrategyKind::Negative => "NEG",
            StrategyKind::Pavlov => "PAV",
            StrategyKind::Exploiter => "EXPL",
            StrategyKind::OmegaTitForTat => "OTFT",
            StrategyKind::Godfather => "GODFATHER",
            StrategyKind::Hitman => "HITMAN",
        }
    }

    /// Builds a fresh instance of this kind.
    pub fn build(self) -> Box<dyn Strategy> {
        match self {
            StrategyKind::AllC => Box::new(AllC),
            StrategyKind::AllD => Box::new(AllD),
            StrategyKind::TitForTat => Box::new(TitForTat),
            StrategyKind::TitForTwoTats => Box::new(TitForTwoTats::default()),
            StrategyKind::SuspiciousTitForTat => Box::new(SuspiciousTitForTat),
            StrategyKind::Grim => Box::new(Grim::default()),
            StrategyKind::Random => Box::new(Random::default()),
            StrategyKind::Negative => Box::new(Negative),
            StrategyKind::Pavlov => Box::new(Pavlov::default()),
            StrategyKind::Exploiter => Box::new(Exploiter::default()),
            StrategyKind::OmegaTitForTat => Box::new(OmegaTitForTat::default()),
            StrategyKind::Godfather => Box::new(crate::syndicate::Godfather::default()),
            StrategyKind::Hitman => Box::new(crate::syndicate::Hitman::default()),
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Error for roster strings that name no known strategy.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown strategy kind {0:?}")]
pub struct UnknownStrategyError(pub String);

impl FromStr for StrategyKind {
    type Err = UnknownStrategyError;

    /// Parses the canonical spelling, case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        StrategyKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == upper)
            .ok_or_else(|| UnknownStrategyError(s.to_string()))
    }
}

impl serde::Serialize for StrategyKind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> serde::Deserialize<'de> for StrategyKind {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// The zoo
// ---------------------------------------------------------------------------

/// Unconditional cooperator.
#[derive(Debug, Default, Clone)]
pub struct AllC;

impl Strategy for AllC {
    fn kind_name(&self) -> &'static str {
        "ALLC"
    }

    fn reset(&mut self) {}

    fn next_move(&mut self, _opponent_last: Option<Move>, _rng: &mut dyn RngCore) -> Move {
        Move::Cooperate
    }
}

/// Unconditional defector.
#[derive(Debug, Default, Clone)]
pub struct AllD;

impl Strategy for AllD {
    fn kind_name(&self) -> &'static str {
        "ALLD"
    }

    fn reset(&mut self) {}

    fn next_move(&mut self, _opponent_last: Option<Move>, _rng: &mut dyn RngCore) -> Move {
        Move::Defect
    }
}

/// Cooperates first, then repeats the opponent's last perceived move.
#[derive(Debug, Default, Clone)]
pub struct TitForTat;

impl Strategy for TitForTat {
    fn kind_name(&self) -> &'static str {
        "TFT"
    }

    fn reset(&mut self) {}

    fn next_move(&mut self, opponent_last: Option<Move>, _rng: &mut dyn RngCore) -> Move {
        opponent_last.unwrap_or(Move::Cooperate)
    }
}

/// Defects only after two consecutive perceived defections.
#[derive(Debug, Default, Clone)]
pub struct TitForTwoTats {
    previous: Option<Move>,
}

impl Strategy for TitForTwoTats {
    fn kind_name(&self) -> &'static str {
        "TFTT"
    }

    fn reset(&mut self) {
        self.previous = None;
    }

    fn next_move(&mut self, opponent_last: Option<Move>, _rng: &mut dyn RngCore) -> Move {
        let reply = match (self.previous, opponent_last) {
            (Some(Move::Defect), Some(Move::Defect)) => Move::Defect,
            _ => Move::Cooperate,
        };
        self.previous = opponent_last;
        reply
    }
}

/// Defects first, then repeats the opponent's last perceived move.
#[derive(Debug, Default, Clone)]
pub struct SuspiciousTitForTat;

impl Strategy for SuspiciousTitForTat {
    fn kind_name(&self) -> &'static str {
        "STFT"
    }

    fn reset(&mut self) {}

    fn next_move(&mut self, opponent_last: Option<Move>, _rng: &mut dyn RngCore) -> Move {
        opponent_last.unwrap_or(Move::Defect)
    }
}

/// Cooperates until the first perceived defection, then defects forever.
#[derive(Debug, Default, Clone)]
pub struct Grim {
    provoked: bool,
}

impl Strategy for Grim {
    fn kind_name(&self) -> &'static str {
        "GRIM"
    }

    fn reset(&mut self) {
        self.provoked = false;
    }

    fn next_move(&mut self, opponent_last: Option<Move>, _rng: &mut dyn RngCore) -> Move {
        if opponent_last == Some(Move::Defect) {
            self.provoked = true;
        }
        if self.provoked {
            Move::Defect
        } else {
            Move::Cooperate
        }
    }
}

/// Coin-flip player. Cooperation probability defaults to 1/2.
#[derive(Debug, Clone)]
pub struct Random {
    /// Probability of cooperating on any turn.
    pub cooperation_probability: f64,
}

impl Default for Random {
    fn default() -> Self {
        Self { cooperation_probability: 0.5 }
    }
}

impl Strategy for Random {
    fn kind_name(&self) -> &'static str {
        "RAND"
    }

    fn reset(&mut self) {}

    fn next_move(&mut self, _opponent_last: Option<Move>, rng: &mut dyn RngCore) -> Move {
        if rng.random_bool(self.cooperation_probability) {
            Move::Cooperate
        } else {
            Move::Defect
        }
    }
}

/// Random first move, then always the opposite of the opponent's last move.
#[derive(Debug, Default, Clone)]
pub struct Negative;

impl Strategy for Negative {
    fn kind_name(&self) -> &'static str {
        "NEG"
    }

    fn reset(&mut self) {}

    fn next_move(&mut self, opponent_last: Option<Move>, rng: &mut dyn RngCore) -> Move {
        match opponent_last {
            Some(m) => m.flipped(),
            None => random_move(rng),
        }
    }
}

/// Win-stay/lose-shift: cooperates first, repeats its previous move after a
/// reward or temptation payoff (opponent cooperated), switches after a
/// punishment or sucker payoff (opponent defected).
#[derive(Debug, Default, Clone)]
pub struct Pavlov {
    my_previous: Option<Move>,
}

impl Strategy for Pavlov {
    fn kind_name(&self) -> &'static str {
        "PAV"
    }

    fn reset(&mut self) {
        self.my_previous = None;
    }

    fn next_move(&mut self, opponent_last: Option<Move>, _rng: &mut dyn RngCore) -> Move {
        let reply = match (self.my_previous, opponent_last) {
            // A perceived cooperation means last turn paid reward or
            // temptation: stay. A perceived defection means punishment or
            // sucker: shift.
            (Some(mine), Some(Move::Cooperate)) => mine,
            (Some(mine), Some(Move::Defect)) => mine.flipped(),
            _ => Move::Cooperate,
        };
        self.my_previous = Some(reply);
        reply
    }
}

/// Repeats the fixed cycle defect, defect, cooperate from turn one.
///
/// A punching-bag opponent for exploitation tests; excluded from presets.
#[derive(Debug, Default, Clone)]
pub struct Exploiter {
    turn: u64,
}

impl Strategy for Exploiter {
    fn kind_name(&self) -> &'static str {
        "EXPL"
    }

    fn reset(&mut self) {
        self.turn = 0;
    }

    fn next_move(&mut self, _opponent_last: Option<Move>, _rng: &mut dyn RngCore) -> Move {
        let reply = if self.turn % 3 == 2 { Move::Cooperate } else { Move::Defect };
        self.turn += 1;
        reply
    }
}

/// Plays a fixed move sequence, then repeats the final move.
///
/// Test helper for replaying hand-written transcripts against a live
/// strategy.
#[derive(Debug, Clone)]
pub struct Scripted {
    script: Vec<Move>,
    cursor: usize,
}

impl Scripted {
    /// A player that follows `script` move for move.
    ///
    /// After the script is exhausted the final move is repeated, so scripts
    /// should end in the move they intend to hold.
    pub fn new(script: Vec<Move>) -> Self {
        assert!(!script.is_empty(), "script must contain at least one move");
        Self { script, cursor: 0 }
    }
}

impl Strategy for Scripted {
    fn kind_name(&self) -> &'static str {
        "SCRIPT"
    }

    fn reset(&mut self) {
        self.cursor = 0;
    }

    fn next_move(&mut self, _opponent_last: Option<Move>, _rng: &mut dyn RngCore) -> Move {
        let reply = self.script[self.cursor.min(self.script.len() - 1)];
        self.cursor += 1;
        reply
    }
}

// ---------------------------------------------------------------------------
// Deadlock- and randomness-aware mirroring
// ---------------------------------------------------------------------------

/// Consecutive perceived alternations tolerated before forcing recovery.
pub const DEADLOCK_THRESHOLD: i32 = 3;
/// Accumulated irregularity at which the opponent is written off as random.
pub const RANDOMNESS_THRESHOLD: i32 = 8;

/// State of the adaptive mirroring strategy.
///
/// The strategy mirrors like tit-for-tat but adds two escape hatches:
///
/// * A *deadlock breaker*: mutual out-of-phase retaliation (C/D echo loops)
///   is detected by counting consecutive turns on which the opponent's move
///   changed. At the threshold the strategy cooperates twice to re-align.
/// * A *randomness detector*: an irregularity score rises when the
///   opponent's move differs from either player's previous move, and falls
///   during steady mutual cooperation. Past the threshold the strategy
///   defects for the rest of the match — mirroring a coin-flipper only
///   donates points.
///
/// The struct mutates in place; [`OtftState::reset`] restores the initial
/// state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OtftState {
    deadlock_counter: i32,
    randomness_measure: i32,
    opponent_previous: Move,
    my_previous: Move,
}

impl Default for OtftState {
    fn default() -> Self {
        Self {
            deadlock_counter: 0,
            randomness_measure: 0,
            opponent_previous: Move::Cooperate,
            my_previous: Move::Cooperate,
        }
    }
}

impl OtftState {
    /// Restores the initial state: counters cleared, remembered moves
    /// primed to cooperation.
    pub fn reset(&mut self) {
        *self = Self::default();
    }

    /// Current irregularity score (exposed for tests and diagnostics).
    pub fn randomness_measure(&self) -> i32 {
        self.randomness_measure
    }

    /// Current deadlock counter (exposed for tests and diagnostics).
    pub fn deadlock_counter(&self) -> i32 {
        self.deadlock_counter
    }

    /// Advances one turn. `opponent_move` is the perceived opponent move
    /// from the previous turn; on turn one, pass the primed value
    /// [`Move::Cooperate`] (see [`Otft`] for the `Option`-taking wrapper).
    pub fn next_move(&mut self, opponent_move: Move) -> Move {
        let my_reply;
        if self.deadlock_counter >= DEADLOCK_THRESHOLD {
            // Deadlock recovery: cooperate twice in a row regardless of
            // input, then return to mirroring.
            my_reply = Move::Cooperate;
            if self.deadlock_counter == DEADLOCK_THRESHOLD {
                self.deadlock_counter = DEADLOCK_THRESHOLD + 1;
            } else {
                self.deadlock_counter = 0;
            }
        } else {
            // Irregularity bookkeeping: steady mutual cooperation earns
            // credit; any change versus either player's previous move is
            // suspicious.
            if opponent_move == Move::Cooperate && self.opponent_previous == Move::Cooperate {
                self.randomness_measure -= 1;
            }
            if opponent_move != self.opponent_previous {
                self.randomness_measure += 1;
            }
            if opponent_move != self.my_previous {
                self.randomness_measure += 1;
            }
            if self.randomness_measure >= RANDOMNESS_THRESHOLD {
                // The opponent looks random; defection is the best reply to
                // noise. This branch never updates the deadlock counter, so
                // it is absorbing for the rest of the match.
                my_reply = Move::Defect;
            } else {
                // Plain mirroring, counting consecutive alternations.
                my_reply = opponent_move;
                if opponent_move != self.opponent_previous {
                    self.deadlock_counter += 1;
                } else {
                    self.deadlock_counter = 0;
                }
            }
        }
        self.opponent_previous = opponent_move;
        self.my_previous = my_reply;
        my_reply
    }
}

/// [`Strategy`] wrapper around [`OtftState`].
#[derive(Debug, Default, Clone)]
pub struct OmegaTitForTat {
    state: OtftState,
}

impl OmegaTitForTat {
    /// Read access for tests and diagnostics.
    pub fn state(&self) -> &OtftState {
        &self.state
    }
}

impl Strategy for OmegaTitForTat {
    fn kind_name(&self) -> &'static str {
        "OTFT"
    }

    fn reset(&mut self) {
        self.state.reset();
    }

    fn next_move(&mut self, opponent_last: Option<Move>, _rng: &mut dyn RngCore) -> Move {
        // Turn one has no opponent move; the primed memory of cooperation
        // makes the strategy open nice.
        self.state.next_move(opponent_last.unwrap_or(Move::Cooperate))
    }
}
