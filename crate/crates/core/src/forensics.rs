//! Heuristic detection of collusion-like exploitation in match transcripts.
//!
//! Deciding whether two strategies collude is undecidable in general (it
//! reduces to program-equivalence questions), so no complete detector is
//! attempted: this module flags behavioral signatures — sustained windows
//! where one side donates points to the other, and players who serve some
//! opponents while retaliating against comparable ones.

use std::collections::BTreeMap;
use std::io::{self, Write};

use crate::moves::Move;
use crate::num::Scalar;
use crate::transcript::MatchTranscript;

/// Default flagging window: long enough to skip handshake echoes, short
/// enough to catch the shortest covert exploitation interval.
pub const DEFAULT_WINDOW: u32 = 8;
/// Default number of exploiter cooperations tolerated inside a window.
pub const DEFAULT_TOLERANCE: u32 = 1;

/// Retaliation is judged "under equivalent pressure" when the player's own
/// defection rate is within this many percentage points of the opponent's.
const RETALIATION_MARGIN_PERCENT: u64 = 10;

/// Problems with detector inputs.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ForensicsError {
    #[error("window must be at least 4 turns, got {0}")]
    WindowTooShort(u32),
    #[error("tolerance {tolerance} must be smaller than the window {window}")]
    ToleranceTooLarge { tolerance: u32, window: u32 },
    #[error("differential analysis needs at least 2 transcripts, got {0}")]
    NotEnoughTranscripts(usize),
    #[error("player {player:?} does not appear in the {a:?} vs {b:?} transcript")]
    PlayerNotInMatch { player: String, a: String, b: String },
}

fn validate_detector(window: u32, tolerance: u32) -> Result<(), ForensicsError> {
    if window < 4 {
        return Err(ForensicsError::WindowTooShort(window));
    }
    if tolerance >= window {
        return Err(ForensicsError::ToleranceTooLarge { tolerance, window });
    }
    Ok(())
}

/// A maximal stretch of one-sided donation: the servant cooperated on every
/// turn while the exploiter defected on all but at most the tolerated few.
#[derive(Debug, Clone, PartialEq)]
pub struct FlaggedWindow<T> {
    pub exploiter: String,
    pub servant: String,
    /// First turn of the window (turn indices start at 0).
    pub onset: u32,
    /// Window length in turns.
    pub length: u32,
    pub exploiter_defections: u32,
    pub servant_cooperations: u32,
    /// Cumulative exploiter payoff minus servant payoff over the window.
    pub transfer: T,
}

/// Flags every maximal window of at least `window` consecutive turns in which
/// one player cooperates throughout while the other defects on all but at
/// most `tolerance` turns. Both directions are scanned. Windows use intended
/// moves and intended-move payoffs, matching how matches are scored.
///
/// Maximality means extending the window by one turn on either side would
/// break a condition (a servant defection, one cooperation too many, or the
/// end of the match).
pub fn detect_exploitation<T: Scalar>(
    transcript: &MatchTranscript<T>,
    window: u32,
    tolerance: u32,
) -> Result<Vec<FlaggedWindow<T>>, ForensicsError> {
    validate_detector(window, tolerance)?;
    let a_moves: Vec<Move> = transcript.rows.iter().map(|r| r.intended_a).collect();
    let b_moves: Vec<Move> = transcript.rows.iter().map(|r| r.intended_b).collect();
    let mut flags = Vec::new();
    for (exploiter_is_a, exploiter_moves, servant_moves) in
        [(true, &a_moves, &b_moves), (false, &b_moves, &a_moves)]
    {
        for (start, end) in cooperation_runs(servant_moves) {
            for (left, right) in budget_windows(exploiter_moves, start, end, tolerance) {
                let length = (right - left) as u32;
                if length < window {
                    continue;
                }
                let cooperations = exploiter_moves[left..right]
                    .iter()
                    .filter(|m| m.is_cooperation())
                    .count() as u32;
                let mut transfer = T::zero();
                for row in &transcript.rows[left..right] {
                    transfer = transfer
                        + if exploiter_is_a {
                            row.payoff_a - row.payoff_b
                        } else {
                            row.payoff_b - row.payoff_a
                        };
                }
                let (exploiter, servant) = if exploiter_is_a {
                    (&transcript.player_a, &transcript.player_b)
                } else {
                    (&transcript.player_b, &transcript.player_a)
                };
                flags.push(FlaggedWindow {
                    exploiter: exploiter.clone(),
                    servant: servant.clone(),
                    onset: left as u32,
                    length,
                    exploiter_defections: length - cooperations,
                    servant_cooperations: length,
                    transfer,
                });
            }
        }
    }
    flags.sort_by_key(|f| (f.onset, f.exploiter.clone()));
    Ok(flags)
}

/// Maximal runs `[start, end)` of consecutive cooperation.
fn cooperation_runs(moves: &[Move]) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut start = None;
    for (i, m) in moves.iter().enumerate() {
        match (m.is_cooperation(), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                runs.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push((s, moves.len()));
    }
    runs
}

/// Maximal sub-windows of `[start, end)` holding at most `budget` exploiter
/// cooperations. Every maximal window either spans the whole range (few
/// enough cooperations overall) or is pinned by one cooperation too many on
/// each extendable side.
fn budget_windows(
    exploiter: &[Move],
    start: usize,
    end: usize,
    budget: u32,
) -> Vec<(usize, usize)> {
    let budget = budget as usize;
    let coops: Vec<usize> =
        (start..end).filter(|&i| exploiter[i].is_cooperation()).collect();
    if coops.len() <= budget {
        return vec![(start, end)];
    }
    (0..=coops.len() - budget)
        .map(|i| {
            let left = if i == 0 { start } else { coops[i - 1] + 1 };
            let right = if i + budget < coops.len() { coops[i + budget] } else { end };
            (left, right)
        })
        .filter(|(left, right)| left < right)
        .collect()
}

/// One player's partition of opponents into those it served and those it
/// retaliated against under comparable defection pressure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialFinding {
    pub player: String,
    /// Opponents the player sat through a flagged servant window for.
    pub served: Vec<String>,
    /// Opponents who applied comparable pressure and were answered in kind.
    pub retaliated: Vec<String>,
}

/// Partitions a player's opponents by how the player answered sustained
/// defection, returning a finding only when the player discriminated: it
/// served at least one opponent and retaliated against at least one other
/// that kept up comparable pressure (at least `window` defections overall and
/// a player defection rate within ten percentage points of the opponent's).
///
/// Uniform behavior — serving everyone, or retaliating against everyone — is
/// not discrimination and yields no finding.
pub fn detect_differential_servitude<T: Scalar>(
    player: &str,
    transcripts: &[&MatchTranscript<T>],
    window: u32,
    tolerance: u32,
) -> Result<Option<DifferentialFinding>, ForensicsError> {
    validate_detector(window, tolerance)?;
    if transcripts.len() < 2 {
        return Err(ForensicsError::NotEnoughTranscripts(transcripts.len()));
    }
    let mut served = Vec::new();
    let mut retaliated = Vec::new();
    for transcript in transcripts {
        let opponent = transcript.opponent_of(player).ok_or_else(|| {
            ForensicsError::PlayerNotInMatch {
                player: player.to_string(),
                a: transcript.player_a.clone(),
                b: transcript.player_b.clone(),
            }
        })?;
        let flags = detect_exploitation(transcript, window, tolerance)?;
        if flags.iter().any(|f| f.servant == player) {
            served.push(opponent.to_string());
            continue;
        }
        let own_moves = transcript
            .intended_moves_of(player)
            .expect("player verified present");
        let opponent_moves = transcript
            .intended_moves_of(opponent)
            .expect("opponent verified present");
        let turns = own_moves.len() as u64;
        let own_defections =
            own_moves.iter().filter(|m| m.is_defection()).count() as u64;
        let opponent_defections =
            opponent_moves.iter().filter(|m| m.is_defection()).count() as u64;
        let under_pressure = opponent_defections >= u64::from(window);
        // own/turns >= opponent/turns - margin, kept in integers.
        let answered_in_kind = 100 * own_defections + RETALIATION_MARGIN_PERCENT * turns
            >= 100 * opponent_defections;
        if under_pressure && answered_in_kind {
            retaliated.push(opponent.to_string());
        }
    }
    if served.is_empty() || retaliated.is_empty() {
        return Ok(None);
    }
    Ok(Some(DifferentialFinding { player: player.to_string(), served, retaliated }))
}

/// Aggregate forensic output over a set of transcripts.
#[derive(Debug, Clone, PartialEq)]
pub struct SuspicionReport<T> {
    flags: Vec<FlaggedWindow<T>>,
    findings: Vec<DifferentialFinding>,
}

impl<T: Scalar> SuspicionReport<T> {
    /// Every flagged window, in transcript order.
    pub fn flags(&self) -> &[FlaggedWindow<T>] {
        &self.flags
    }

    /// Differential findings, one per discriminating player, in name order.
    pub fn findings(&self) -> &[DifferentialFinding] {
        &self.findings
    }

    /// Writes the flagged windows as CSV.
    ///
    /// Columns: `exploiter,servant,onset,window,defects,cooperations,transfer`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "exploiter,servant,onset,window,defects,cooperations,transfer")?;
        for f in &self.flags {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                f.exploiter,
                f.servant,
                f.onset,
                f.length,
                f.exploiter_defections,
                f.servant_cooperations,
                f.transfer
            )?;
        }
        Ok(())
    }
}

impl<T: Scalar> std::fmt::Display for SuspicionReport<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "{} flagged window(s), {} differential finding(s)",
            self.flags.len(),
            self.findings.len()
        )?;
        for flag in &self.flags {
            writeln!(
                f,
                "  {} exploited {} from turn {} for {} turns ({} defections vs {} cooperations, +{} points)",
                flag.exploiter,
                flag.servant,
                flag.onset,
                flag.length,
                flag.exploiter_defections,
                flag.servant_cooperations,
                flag.transfer
            )?;
        }
        for finding in &self.findings {
            writeln!(
                f,
                "  {} served [{}] but retaliated against [{}]",
                finding.player,
                finding.served.join(", "),
                finding.retaliated.join(", ")
            )?;
        }
        Ok(())
    }
}

/// Runs both detectors over a transcript set: flags every exploitation
/// window, then checks each player that appears in at least two transcripts
/// for differential servitude.
pub fn suspicion_report<T: Scalar>(
    transcripts: &[MatchTranscript<T>],
    window: u32,
    tolerance: u32,
) -> Result<SuspicionReport<T>, ForensicsError> {
    validate_detector(window, tolerance)?;
    let mut flags = Vec::new();
    for transcript in transcripts {
        flags.extend(detect_exploitation(transcript, window, tolerance)?);
    }
    let mut per_player: BTreeMap<&str, Vec<&MatchTranscript<T>>> = BTreeMap::new();
    for transcript in transcripts {
        per_player.entry(&transcript.player_a).or_default().push(transcript);
        if transcript.player_b != transcript.player_a {
            per_player.entry(&transcript.player_b).or_default().push(transcript);
        }
    }
    let mut findings = Vec::new();
    for (player, involved) in per_player {
        if involved.len() < 2 {
            continue;
        }
        if let Some(finding) =
            detect_differential_servitude(player, &involved, window, tolerance)?
        {
            findings.push(finding);
        }
    }
    Ok(SuspicionReport { flags, findings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::parse_moves;
    use crate::payoff::PayoffMatrix;
    use crate::transcript::TurnRow;

    /// Builds a noise-free transcript from two intended-move strings.
    fn fixture(
        name_a: &str,
        moves_a: &str,
        name_b: &str,
        moves_b: &str,
    ) -> MatchTranscript<i64> {
        let a = parse_moves(moves_a).unwrap();
        let b = parse_moves(moves_b).unwrap();
        assert_eq!(a.len(), b.len());
        let matrix = PayoffMatrix::standard();
        let mut rows = Vec::new();
        let (mut total_a, mut total_b) = (0, 0);
        for (turn, (&ma, &mb)) in a.iter().zip(&b).enumerate() {
            let (pa, pb) = matrix.pair_payoffs(ma, mb);
            total_a += pa;
            total_b += pb;
            rows.push(TurnRow {
                turn: turn as u32,
                intended_a: ma,
                intended_b: mb,
                perceived_by_a: mb,
                perceived_by_b: ma,
                payoff_a: pa,
                payoff_b: pb,
            });
        }
        MatchTranscript {
            player_a: name_a.to_string(),
            player_b: name_b.to_string(),
            rows,
            total_a,
            total_b,
        }
    }

    #[test]
    fn test_flags_a_defection_tail_over_a_cooperating_victim() {
        let t = fixture("APAV", "CCCDDDDDD", "TCO", "CCCCCCCCC");
        let flags = detect_exploitation(&t, 4, 0).unwrap();
        assert_eq!(flags.len(), 1);
        let flag = &flags[0];
        assert_eq!(flag.exploiter, "APAV");
        assert_eq!(flag.servant, "TCO");
        assert_eq!(flag.onset, 3);
        assert_eq!(flag.length, 6);
        assert_eq!(flag.exploiter_defections, 6);
        assert_eq!(flag.servant_cooperations, 6);
        assert_eq!(flag.transfer, 6 * 5);
    }

    #[test]
    fn test_mutual_cooperation_is_never_flagged() {
        let t = fixture("X", "CCCCCCCCCC", "Y", "CCCCCCCCCC");
        assert!(detect_exploitation(&t, 4, 0).unwrap().is_empty());
        assert!(detect_exploitation(&t, 4, 3).unwrap().is_empty());
    }

    #[test]
    fn test_tolerance_bridges_isolated_cooperations() {
        let t = fixture("X", "DDDCDDDD", "Y", "CCCCCCCC");
        let strict = detect_exploitation(&t, 4, 0).unwrap();
        assert_eq!(strict.len(), 1);
        assert_eq!((strict[0].onset, strict[0].length), (4, 4));
        let tolerant = detect_exploitation(&t, 4, 1).unwrap();
        assert_eq!(tolerant.len(), 1);
        assert_eq!((tolerant[0].onset, tolerant[0].length), (0, 8));
        assert_eq!(tolerant[0].exploiter_defections, 7);
    }

    #[test]
    fn test_windows_never_cross_a_servant_defection() {
        let t = fixture("X", "DDDDDDDDD", "Y", "CCCCDCCCC");
        let flags = detect_exploitation(&t, 4, 0).unwrap();
        assert_eq!(flags.len(), 2);
        assert_eq!((flags[0].onset, flags[0].length), (0, 4));
        assert_eq!((flags[1].onset, flags[1].length), (5, 4));
    }

    #[test]
    fn test_both_directions_are_scanned() {
        let t = fixture("X", "DDDDCCCC", "Y", "CCCCDDDD");
        let flags = detect_exploitation(&t, 4, 0).unwrap();
        assert_eq!(flags.len(), 2);
        assert_eq!(flags[0].exploiter, "X");
        assert_eq!(flags[1].exploiter, "Y");
        assert_eq!(flags[1].onset, 4);
    }

    #[test]
    fn test_detector_rejects_bad_parameters() {
        let t = fixture("X", "CC", "Y", "CC");
        assert_eq!(
            detect_exploitation(&t, 3, 0).unwrap_err(),
            ForensicsError::WindowTooShort(3)
        );
        assert_eq!(
            detect_exploitation(&t, 4, 4).unwrap_err(),
            ForensicsError::ToleranceTooLarge { tolerance: 4, window: 4 }
        );
    }

    /// A player that defects half the time in a 4-turn cycle, against an
    /// opponent doing the same out of phase: equivalent pressure, answered.
    fn retaliation_fixture(focal: &str, opponent: &str) -> MatchTranscript<i64> {
        let focal_moves = "CDDC".repeat(10);
        let opponent_moves = "CCDD".repeat(10);
        fixture(focal, &focal_moves, opponent, &opponent_moves)
    }

    #[test]
    fn test_differential_servitude_partitions_served_and_retaliated() {
        let served = fixture("TCO", &"C".repeat(40), "APAV", &format!("{}{}", "CCC", "D".repeat(37)));
        let answered = retaliation_fixture("TCO", "TFT");
        let finding = detect_differential_servitude("TCO", &[&served, &answered], 8, 1)
            .unwrap()
            .expect("discrimination expected");
        assert_eq!(finding.served, vec!["APAV"]);
        assert_eq!(finding.retaliated, vec!["TFT"]);
    }

    #[test]
    fn test_uniform_servility_yields_no_finding() {
        let to_defector = fixture("NICE", &"C".repeat(20), "MEAN", &"D".repeat(20));
        let to_cooperator = fixture("NICE", &"C".repeat(20), "FAIR", &"C".repeat(20));
        let finding =
            detect_differential_servitude("NICE", &[&to_defector, &to_cooperator], 8, 1)
                .unwrap();
        assert_eq!(finding, None);
    }

    #[test]
    fn test_differential_servitude_validates_inputs() {
        let t = fixture("X", "CCCC", "Y", "CCCC");
        assert_eq!(
            detect_differential_servitude("X", &[&t], 8, 1).unwrap_err(),
            ForensicsError::NotEnoughTranscripts(1)
        );
        let other = fixture("P", "CCCC", "Q", "CCCC");
        assert!(matches!(
            detect_differential_servitude("X", &[&t, &other], 8, 1).unwrap_err(),
            ForensicsError::PlayerNotInMatch { .. }
        ));
    }

    #[test]
    fn test_report_aggregates_and_exports_csv() {
        let transcripts = vec![
            fixture("TCO", &"C".repeat(40), "APAV", &format!("{}{}", "CCC", "D".repeat(37))),
            retaliation_fixture("TCO", "TFT"),
        ];
        let report = suspicion_report(&transcripts, 8, 1).unwrap();
        assert_eq!(report.flags().len(), 1);
        assert_eq!(report.findings().len(), 1);
        assert_eq!(report.findings()[0].player, "TCO");
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("exploiter,servant,onset,window,defects,cooperations,transfer")
        );
        assert_eq!(lines.next(), Some("APAV,TCO,2,38,37,38,185"));
        let summary = report.to_string();
        assert!(summary.contains("APAV exploited TCO"));
        assert!(summary.contains("TCO served [APAV]"));
    }
}
