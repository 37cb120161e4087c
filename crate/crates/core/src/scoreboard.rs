//! Ranked tournament totals.

use std::io::{self, Write};
use std::str::FromStr;

use crate::num::Scalar;
use crate::strategies::StrategyKind;

/// One player's accumulated results.
///
/// `strategy` is a free-form label: engine-produced boards use the canonical
/// kind names, imported boards may carry arbitrary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreboardEntry<T> {
    /// Competition rank: tied scores share the smaller rank.
    pub rank: u32,
    /// Player name.
    pub player: String,
    /// Strategy label the player ran.
    pub strategy: String,
    /// Total score across all counted matches.
    pub score: T,
    /// Matches counted.
    pub games: u32,
    /// Turns counted, for per-turn normalization.
    pub turns: u64,
}

/// Tournament totals, sorted by score descending (ties broken by name).
#[derive(Debug, Clone, PartialEq)]
pub struct Scoreboard<T> {
    entries: Vec<ScoreboardEntry<T>>,
}

impl<T: Scalar> Scoreboard<T> {
    /// Entries in rank order.
    pub fn entries(&self) -> &[ScoreboardEntry<T>] {
        &self.entries
    }

    /// Looks a player up by name.
    pub fn entry(&self, player: &str) -> Option<&ScoreboardEntry<T>> {
        self.entries.iter().find(|e| e.player == player)
    }

    /// Player names in rank order.
    pub fn ranking(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.player.as_str()).collect()
    }

    /// Builds a scoreboard from explicit totals, sorting and ranking them.
    ///
    /// Scores must be comparable (engine-produced totals always are).
    pub fn from_totals(totals: Vec<(String, String, T, u32, u64)>) -> Self {
        let mut entries: Vec<ScoreboardEntry<T>> = totals
            .into_iter()
            .map(|(player, strategy, score, games, turns)| ScoreboardEntry {
                rank: 0,
                player,
                strategy,
                score,
                games,
                turns,
            })
            .collect();
        entries.sort_by(|a, b| {
            b.score
                .partial_cmp(&a.score)
                .expect("scores are comparable")
                .then_with(|| a.player.cmp(&b.player))
        });
        let mut previous: Option<T> = None;
        let mut shared_rank = 0;
        for (position, entry) in entries.iter_mut().enumerate() {
            if previous != Some(entry.score) {
                shared_rank = position as u32 + 1;
                previous = Some(entry.score);
            }
            entry.rank = shared_rank;
        }
        Scoreboard { entries }
    }

    /// Starts an accumulator over a roster, all totals zero.
    pub(crate) fn accumulator(roster: Vec<(String, StrategyKind)>) -> ScoreAccumulator<T> {
        ScoreAccumulator {
            totals: roster
                .into_iter()
                .map(|(name, kind)| (name, kind.name().to_string(), T::zero(), 0, 0))
                .collect(),
        }
    }

    /// Writes the scoreboard as CSV.
    ///
    /// Columns: `rank,player,strategy,score,games,turns`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "rank,player,strategy,score,games,turns")?;
        for e in &self.entries {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                e.rank,
                csv_field(&e.player),
                csv_field(&e.strategy),
                e.score,
                e.games,
                e.turns
            )?;
        }
        Ok(())
    }

    /// The CSV rendering as a string.
    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is UTF-8")
    }
}

/// Quotes a CSV field only when it needs quoting.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Splits one CSV line, honoring double-quoted fields.
fn split_csv_line(line: &str) -> Result<Vec<String>, String> {
    let mut fields = Vec::new();
    let mut current = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    current.push('"');
                } else {
                    quoted = false;
                }
            }
            '"' if current.is_empty() => quoted = true,
            ',' if !quoted => fields.push(std::mem::take(&mut current)),
            _ => current.push(c),
        }
    }
    if quoted {
        return Err("unterminated quoted field".to_string());
    }
    fields.push(current);
    Ok(fields)
}

/// In-progress totals for a tournament run.
pub(crate) struct ScoreAccumulator<T> {
    totals: Vec<(String, String, T, u32, u64)>,
}

impl<T: Scalar> ScoreAccumulator<T> {
    pub(crate) fn credit(&mut self, roster_index: usize, score: T, turns: u32) {
        let entry = &mut self.totals[roster_index];
        entry.2 = entry.2 + score;
        entry.3 += 1;
        entry.4 += u64::from(turns);
    }

    pub(crate) fn finish(self) -> Scoreboard<T> {
        Scoreboard::from_totals(self.totals)
    }
}

/// Problems reading an exported scoreboard back in.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScoreboardReadError {
    #[error("scoreboard CSV is missing the header line")]
    MissingHeader,
    #[error("unexpected scoreboard header {0:?}")]
    WrongHeader(String),
    #[error("line {line}: expected 6 fields, found {found}")]
    WrongFieldCount { line: usize, found: usize },
    #[error("line {line}: {message}")]
    BadField { line: usize, message: String },
}

/// Reads a scoreboard from the CSV format [`Scoreboard::write_csv`] emits.
///
/// Ranks in the file are ignored; entries are re-ranked from their scores.
/// Hand-written files may set `games`/`turns` to 0 when unknown.
pub fn read_scoreboard_csv<T: Scalar + FromStr>(
    text: &str,
) -> Result<Scoreboard<T>, ScoreboardReadError>
where
    <T as FromStr>::Err: std::fmt::Display,
{
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(ScoreboardReadError::MissingHeader)?;
    if header.trim() != "rank,player,strategy,score,games,turns" {
        return Err(ScoreboardReadError::WrongHeader(header.to_string()));
    }
    let mut totals = Vec::new();
    for (index, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |message: String| ScoreboardReadError::BadField { line: index + 1, message };
        let fields = split_csv_line(line).map_err(bad)?;
        if fields.len() != 6 {
            return Err(ScoreboardReadError::WrongFieldCount {
                line: index + 1,
                found: fields.len(),
            });
        }
        let bad = |message: String| ScoreboardReadError::BadField { line: index + 1, message };
        let score: T = fields[3].parse().map_err(|e| bad(format!("bad score: {e}")))?;
        let games: u32 = fields[4].parse().map_err(|e| bad(format!("bad games: {e}")))?;
        let turns: u64 = fields[5].parse().map_err(|e| bad(format!("bad turns: {e}")))?;
        totals.push((fields[1].clone(), fields[2].clone(), score, games, turns));
    }
    Ok(Scoreboard::from_totals(totals))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn totals(rows: &[(&str, &str, i64)]) -> Vec<(String, String, i64, u32, u64)> {
        rows.iter()
            .map(|&(p, s, score)| (p.to_string(), s.to_string(), score, 2, 20))
            .collect()
    }

    fn board() -> Scoreboard<i64> {
        Scoreboard::from_totals(totals(&[
            ("beta", "TFT", 30),
            ("alpha", "ALLC", 30),
            ("gamma", "ALLD", 64),
            ("delta", "GRIM", 5),
        ]))
    }

    #[test]
    fn ties_share_the_smaller_rank_and_sort_by_name() {
        let b = board();
        assert_eq!(b.ranking(), vec!["gamma", "alpha", "beta", "delta"]);
        let ranks: Vec<u32> = b.entries().iter().map(|e| e.rank).collect();
        assert_eq!(ranks, vec![1, 2, 2, 4]);
    }

    #[test]
    fn csv_round_trips() {
        let b = board();
        let text = b.to_csv_string();
        assert!(text.starts_with("rank,player,strategy,score,games,turns\n"));
        let back: Scoreboard<i64> = read_scoreboard_csv(&text).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn read_rejects_malformed_input() {
        assert!(matches!(
            read_scoreboard_csv::<i64>(""),
            Err(ScoreboardReadError::MissingHeader)
        ));
        assert!(matches!(
            read_scoreboard_csv::<i64>("who,what\n"),
            Err(ScoreboardReadError::WrongHeader(_))
        ));
        let bad_score = "rank,player,strategy,score,games,turns\n1,x,TFT,lots,1,10\n";
        assert!(matches!(
            read_scoreboard_csv::<i64>(bad_score),
            Err(ScoreboardReadError::BadField { line: 2, .. })
        ));
        let short = "rank,player,strategy,score,games,turns\n1,x,TFT,3\n";
        assert!(matches!(
            read_scoreboard_csv::<i64>(short),
            Err(ScoreboardReadError::WrongFieldCount { line: 2, found: 4 })
        ));
    }

    #[test]
    fn quoted_player_names_round_trip() {
        let b: Scoreboard<i64> =
            Scoreboard::from_totals(totals(&[("a,b \"the pair\"", "ALLC", 1)]));
        let text = b.to_csv_string();
        assert!(text.contains("\"a,b \"\"the pair\"\"\""));
        let back: Scoreboard<i64> = read_scoreboard_csv(&text).unwrap();
        assert_eq!(back, b);
    }
}
