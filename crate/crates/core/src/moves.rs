//! The two moves of the game.

use std::fmt;
use std::str::FromStr;

/// A single move: cooperate or defect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    /// Play nice this turn.
    Cooperate,
    /// Betray the other player this turn.
    Defect,
}

/// Shorthand used throughout tests and traces.
pub const C: Move = Move::Cooperate;
/// Shorthand used throughout tests and traces.
pub const D: Move = Move::Defect;

impl Move {
    /// The other move.
    #[must_use]
    pub fn flipped(self) -> Move {
        match self {
            Move::Cooperate => Move::Defect,
            Move::Defect => Move::Cooperate,
        }
    }

    /// True for [`Move::Cooperate`].
    pub fn is_cooperation(self) -> bool {
        self == Move::Cooperate
    }

    /// True for [`Move::Defect`].
    pub fn is_defection(self) -> bool {
        self == Move::Defect
    }

    /// Single-letter form used in transcripts: `C` or `D`.
    pub fn letter(self) -> char {
        match self {
            Move::Cooperate => 'C',
            Move::Defect => 'D',
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Move {
    type Err = ParseMoveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "C" | "c" => Ok(Move::Cooperate),
            "D" | "d" => Ok(Move::Defect),
            other => Err(ParseMoveError(other.to_string())),
        }
    }
}

/// Error for unrecognized move letters.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unrecognized move {0:?}, expected C or D")]
pub struct ParseMoveError(pub String);

/// Parses a move sequence, with or without separating whitespace, such as
/// `"C D D C"` or `"CDDC"`.
///
/// Convenience for tests and scripted opponents.
pub fn parse_moves(s: &str) -> Result<Vec<Move>, ParseMoveError> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            'C' | 'c' => Ok(Move::Cooperate),
            'D' | 'd' => Ok(Move::Defect),
            other => Err(ParseMoveError(other.to_string())),
        })
        .collect()
}
