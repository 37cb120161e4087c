//! Per-match records.

use std::io::{self, Write};

use crate::moves::Move;
use crate::num::Scalar;

/// One turn of a match, from an all-seeing observer's perspective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurnRow<T> {
    /// Zero-based turn index.
    pub turn: u32,
    /// What player A chose to play.
    pub intended_a: Move,
    /// What player B chose to play.
    pub intended_b: Move,
    /// B's move as A perceived it (flipped with the noise probability).
    pub perceived_by_a: Move,
    /// A's move as B perceived it.
    pub perceived_by_b: Move,
    /// A's score this turn (always on intended moves).
    pub payoff_a: T,
    /// B's score this turn.
    pub payoff_b: T,
}

/// Complete record of one match.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchTranscript<T> {
    /// Name of the first player.
    pub player_a: String,
    /// Name of the second player.
    pub player_b: String,
    /// One row per turn, in order.
    pub rows: Vec<TurnRow<T>>,
    /// A's total score.
    pub total_a: T,
    /// B's total score.
    pub total_b: T,
}

impl<T: Scalar> MatchTranscript<T> {
    /// Number of turns played.
    pub fn turns(&self) -> u32 {
        self.rows.len() as u32
    }

    /// Intended moves of the named player, in turn order.
    ///
    /// Returns `None` when the player is not part of this match.
    pub fn intended_moves_of(&self, player: &str) -> Option<Vec<Move>> {
        if player == self.player_a {
            Some(self.rows.iter().map(|r| r.intended_a).collect())
        } else if player == self.player_b {
            Some(self.rows.iter().map(|r| r.intended_b).collect())
        } else {
            None
        }
    }

    /// The other player's name, if `player` participates.
    pub fn opponent_of(&self, player: &str) -> Option<&str> {
        if player == self.player_a {
            Some(&self.player_b)
        } else if player == self.player_b {
            Some(&self.player_a)
        } else {
            None
        }
    }

    /// Writes the transcript as CSV.
    ///
    /// Columns: `turn,intended_a,intended_b,perceived_by_a,perceived_by_b,payoff_a,payoff_b`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "turn,intended_a,intended_b,perceived_by_a,perceived_by_b,payoff_a,payoff_b"
        )?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                row.turn,
                row.intended_a,
                row.intended_b,
                row.perceived_by_a,
                row.perceived_by_b,
                row.payoff_a,
                row.payoff_b
            )?;
        }
        Ok(())
    }

    /// The CSV rendering as a string (convenience for tests and reports).
    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }
}
