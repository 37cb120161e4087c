//! Colluding strategy pair: a boss that farms points from sworn servants.
//!
//! The two machines recognize each other through a covert handshake encoded
//! in ordinary moves. Each interval the boss plays one signature
//! cooperation, transmits two random message bits, and then defects for a
//! countdown-determined run while the servant cooperates throughout. The
//! servant defects exactly once per interval (its own signature), timed so
//! the boss expects it. Any deviation from the expected pattern breaks the
//! belief instantly and permanently for that match: the boss falls back to
//! the adaptive mirroring strategy, the servant to unconditional defection.

use std::str::FromStr;

use rand::RngCore;

use crate::moves::Move;
use crate::strategies::{random_move, OtftState, Strategy, StrategyKind};

/// Base countdown restart value: one signature turn plus two message-bit
/// turns plus the shortest defection run.
const BASE_RESTART: i64 = 9;
/// Added to the restart when the first message bit is a defection.
const FIRST_BIT_WEIGHT: i64 = 7;
/// Added to the restart when the second message bit is a defection.
const SECOND_BIT_WEIGHT: i64 = 11;
/// Countdown position of the signature move.
const SIGNATURE_POSITION: i64 = 3;

/// Interval length selected by the two message bits of a handshake.
///
/// The boss restarts its countdown at `9 + 7·[bit1 = D] + 11·[bit2 = D]`
/// and immediately decrements, so the distance between consecutive
/// signature turns is the restart value minus one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalCode {
    /// First transmitted bit.
    pub bit1: Move,
    /// Second transmitted bit.
    pub bit2: Move,
}

impl IntervalCode {
    /// The countdown restart value this code selects.
    pub fn restart(self) -> i64 {
        BASE_RESTART
            + if self.bit1 == Move::Defect { FIRST_BIT_WEIGHT } else { 0 }
            + if self.bit2 == Move::Defect { SECOND_BIT_WEIGHT } else { 0 }
    }

    /// Turns from one signature move to the next.
    pub fn interval_length(self) -> i64 {
        self.restart() - 1
    }
}

/// The ring-leader strategy.
///
/// While it believes the opponent is a sworn servant it runs the handshake
/// protocol; one wrong move breaks the belief, after which it defects once
/// and then behaves exactly like the adaptive mirroring strategy (whose
/// state starts from its reset values — the protocol turns are not fed into
/// it).
#[derive(Debug, Clone)]
pub struct Godfather {
    countdown: i64,
    next_restart: i64,
    believes_servant: bool,
    fallback: OtftState,
    interval_growth: i64,
    signatures_sent: i64,
}

impl Default for Godfather {
    fn default() -> Self {
        Self {
            countdown: SIGNATURE_POSITION,
            next_restart: BASE_RESTART,
            believes_servant: true,
            fallback: OtftState::default(),
            interval_growth: 0,
            signatures_sent: 0,
        }
    }
}

impl Godfather {
    /// Variant whose intervals lengthen over the match: each restart adds
    /// `growth` points per completed handshake, hiding the fixed cadence
    /// from pattern detectors. Both partners must use the same growth.
    pub fn with_interval_growth(growth: u32) -> Self {
        Self { interval_growth: i64::from(growth), ..Self::default() }
    }

    /// Whether the opponent has behaved like a sworn servant so far.
    pub fn believes_servant(&self) -> bool {
        self.believes_servant
    }
}

impl Strategy for Godfather {
    fn kind_name(&self) -> &'static str {
        "GODFATHER"
    }

    fn reset(&mut self) {
        *self = Self { interval_growth: self.interval_growth, ..Self::default() };
    }

    fn next_move(&mut self, opponent_last: Option<Move>, rng: &mut dyn RngCore) -> Move {
        // Primed memory: before any move arrives, assume cooperation, so the
        // protocol starts with the signature rather than a break.
        let opponent = opponent_last.unwrap_or(Move::Cooperate);
        if !self.believes_servant {
            return self.fallback.next_move(opponent);
        }
        // A servant must defect exactly when our countdown shows 2 (its own
        // signature arriving one turn late) and cooperate everywhere else.
        let broke = if self.countdown == 2 {
            opponent == Move::Cooperate
        } else {
            opponent == Move::Defect
        };
        if broke {
            self.believes_servant = false;
            // One retaliatory defection; the fallback state stays at its
            // reset values and takes over from the next turn.
            return Move::Defect;
        }
        let reply = match self.countdown {
            c if c > SIGNATURE_POSITION => Move::Defect, // exploitation run
            SIGNATURE_POSITION => {
                // Signature cooperation; fix the base for the next interval.
                self.next_restart = BASE_RESTART + self.interval_growth * self.signatures_sent;
                self.signatures_sent += 1;
                Move::Cooperate
            }
            2 => {
                let bit = random_move(rng);
                if bit == Move::Defect {
                    self.next_restart += FIRST_BIT_WEIGHT;
                }
                bit
            }
            _ => {
                // Countdown 1: second message bit, then restart.
                let bit = random_move(rng);
                if bit == Move::Defect {
                    self.next_restart += SECOND_BIT_WEIGHT;
                }
                self.countdown = self.next_restart;
                bit
            }
        };
        self.countdown -= 1;
        reply
    }
}

/// The sworn-servant strategy.
///
/// Runs the complementary side of the handshake: defects once per interval
/// (its signature), receives the boss's two message bits, and cooperates
/// through the boss's exploitation run. One wrong move from the opponent
/// breaks the belief, after which it defects for the rest of the match.
#[derive(Debug, Clone)]
pub struct Hitman {
    countdown: i64,
    next_restart: i64,
    believes_boss: bool,
    interval_growth: i64,
    signatures_sent: i64,
}

impl Default for Hitman {
    fn default() -> Self {
        Self {
            countdown: SIGNATURE_POSITION,
            next_restart: BASE_RESTART,
            believes_boss: true,
            interval_growth: 0,
            signatures_sent: 0,
        }
    }
}

impl Hitman {
    /// See [`Godfather::with_interval_growth`]; both partners must match.
    pub fn with_interval_growth(growth: u32) -> Self {
        Self { interval_growth: i64::from(growth), ..Self::default() }
    }

    /// Whether the opponent has behaved like the boss so far.
    pub fn believes_boss(&self) -> bool {
        self.believes_boss
    }
}

impl Strategy for Hitman {
    fn kind_name(&self) -> &'static str {
        "HITMAN"
    }

    fn reset(&mut self) {
        *self = Self { interval_growth: self.interval_growth, ..Self::default() };
    }

    fn next_move(&mut self, opponent_last: Option<Move>, _rng: &mut dyn RngCore) -> Move {
        // Primed memory: assume the boss has been defecting, as it would be
        // at the end of an exploitation run.
        let opponent = opponent_last.unwrap_or(Move::Defect);
        if !self.believes_boss {
            return Move::Defect;
        }
        // The boss's signature cooperation must arrive exactly when our
        // countdown shows 2; during the exploitation run (countdown above 2)
        // only defection is consistent with a boss. Countdowns 1 and 0 carry
        // the message bits, which may be anything.
        let broke = (self.countdown == 2 && opponent == Move::Defect)
            || (self.countdown > 2 && opponent == Move::Cooperate);
        if broke {
            self.believes_boss = false;
            return Move::Defect;
        }
        let reply;
        if self.countdown != SIGNATURE_POSITION {
            reply = Move::Cooperate;
            if self.countdown == 1 {
                // First message bit arrives.
                if opponent == Move::Defect {
                    self.next_restart += FIRST_BIT_WEIGHT;
                }
            } else if self.countdown == 0 {
                // Second message bit arrives; resynchronize one step behind
                // the boss, who restarted a turn earlier.
                if opponent == Move::Defect {
                    self.next_restart += SECOND_BIT_WEIGHT;
                }
                self.countdown = self.next_restart - 1;
            }
        } else {
            // Signature defection; fix the base for the next interval.
            reply = Move::Defect;
            self.next_restart = BASE_RESTART + self.interval_growth * self.signatures_sent;
            self.signatures_sent += 1;
        }
        self.countdown -= 1;
        reply
    }
}

// ---------------------------------------------------------------------------
// Roster construction
// ---------------------------------------------------------------------------

/// The two collusion-ring flavors.
///
/// Both build the same structure — one boss plus `k` servants — and differ
/// only in intent: `CosaNostra` models a small ring, `Emperor` a ruler with
/// clone armies (large `k`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    CosaNostra,
    Emperor,
}

impl GroupKind {
    /// Canonical config spelling.
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::CosaNostra => "COSA_NOSTRA",
            GroupKind::Emperor => "EMPEROR",
        }
    }
}

/// Error for group-kind strings that name no known kind.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown group kind {0:?}, expected COSA_NOSTRA or EMPEROR")]
pub struct UnknownGroupError(pub String);

impl FromStr for GroupKind {
    type Err = UnknownGroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "COSA_NOSTRA" => Ok(GroupKind::CosaNostra),
            "EMPEROR" => Ok(GroupKind::Emperor),
            _ => Err(UnknownGroupError(s.to_string())),
        }
    }
}

impl serde::Serialize for GroupKind {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> serde::Deserialize<'de> for GroupKind {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Builds a roster fragment for one collusion ring: the boss followed by
/// `hitman_count` uniquely named servants (`<boss>-HM-001`, …).
///
/// The fragment concatenates into any tournament roster.
pub fn build_group_roster(
    _kind: GroupKind,
    hitman_count: u32,
    boss_name: &str,
) -> Vec<(String, StrategyKind)> {
    let width = hitman_count.to_string().len().max(3);
    let mut roster = Vec::with_capacity(hitman_count as usize + 1);
    roster.push((boss_name.to_string(), StrategyKind::Godfather));
    for i in 1..=hitman_count {
        roster.push((
            format!("{boss_name}-HM-{i:0width$}", width = width),
            StrategyKind::Hitman,
        ));
    }
    roster
}
