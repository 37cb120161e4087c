//! Match execution and round-robin tournaments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::moves::Move;
use crate::num::Scalar;
use crate::payoff::PayoffMatrix;
use crate::scoreboard::Scoreboard;
use crate::strategies::{Strategy, StrategyKind};
use crate::transcript::{MatchTranscript, TurnRow};

/// Ways a match or tournament request can be invalid.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("a match must last at least one turn")]
    ZeroTurns,
    #[error("noise probability {0} outside [0, 1]")]
    InvalidNoise(f64),
    #[error("tournament roster is empty")]
    EmptyRoster,
    #[error("duplicate roster name {0:?}")]
    DuplicateName(String),
}

/// Deterministic 256-bit seed for one match.
///
/// Derived from the tournament master seed, the repetition index, and the
/// *sorted* pair of player names, so a match's randomness never depends on
/// roster order, scheduling, or which other players exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchSeed([u8; 32]);

/// Derives the seed for the match between `name_a` and `name_b` in
/// repetition `repetition` of a tournament with the given master seed.
pub fn derive_match_seed(master_seed: u64, repetition: u32, name_a: &str, name_b: &str) -> MatchSeed {
    let (first, second) = if name_a <= name_b { (name_a, name_b) } else { (name_b, name_a) };
    let mut hasher = Sha256::new();
    hasher.update(b"dilemma.match.v1");
    hasher.update(master_seed.to_le_bytes());
    hasher.update(repetition.to_le_bytes());
    hasher.update((first.len() as u64).to_le_bytes());
    hasher.update(first.as_bytes());
    hasher.update((second.len() as u64).to_le_bytes());
    hasher.update(second.as_bytes());
    MatchSeed(hasher.finalize().into())
}

/// The independent random streams of one match.
///
/// Strategy streams are assigned by sorted-name position (stable under
/// argument order); noise streams are separate so that enabling noise never
/// perturbs a stochastic strategy's draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamRole {
    StrategyFirst = 0,
    StrategySecond = 1,
    NoiseOnFirst = 2,
    NoiseOnSecond = 3,
}

impl MatchSeed {
    /// The dedicated RNG for one of the match's four random streams.
    pub fn stream(&self, role: StreamRole) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.0);
        rng.set_stream(role as u64);
        rng
    }
}

/// Parameters of a single match.
#[derive(Debug, Clone)]
pub struct MatchParams<'a, T> {
    /// First player's name (transcript column A).
    pub name_a: &'a str,
    /// Second player's name (transcript column B).
    pub name_b: &'a str,
    /// Number of turns; must be at least 1.
    pub turns: u32,
    /// Probability that a player misperceives the opponent's move.
    pub noise: f64,
    /// Payoff values.
    pub matrix: PayoffMatrix<T>,
    /// Randomness for both strategies and both noise channels.
    pub seed: MatchSeed,
}

/// Plays one match and records every turn.
///
/// Both players choose simultaneously; payoffs are scored on the *intended*
/// moves. Each player's perception of the opponent's move is then flipped
/// independently with probability `noise` before being remembered for the
/// next turn. With `noise = 0` the noise channels are never sampled, so the
/// run is bit-identical to a noise-free code path.
pub fn play_match<T: Scalar>(
    strategy_a: &mut dyn Strategy,
    strategy_b: &mut dyn Strategy,
    params: &MatchParams<'_, T>,
) -> Result<MatchTranscript<T>, EngineError> {
    if params.turns == 0 {
        return Err(EngineError::ZeroTurns);
    }
    if !(0.0..=1.0).contains(&params.noise) || params.noise.is_nan() {
        return Err(EngineError::InvalidNoise(params.noise));
    }
    strategy_a.reset();
    strategy_b.reset();

    // Streams keyed to sorted names so swapping the argument order cannot
    // change the outcome.
    let a_is_first = params.name_a <= params.name_b;
    let pick = |first, second| if a_is_first { first } else { second };
    let mut rng_a = params.seed.stream(pick(StreamRole::StrategyFirst, StreamRole::StrategySecond));
    let mut rng_b = params.seed.stream(pick(StreamRole::StrategySecond, StreamRole::StrategyFirst));
    let mut noise_a = params.seed.stream(pick(StreamRole::NoiseOnFirst, StreamRole::NoiseOnSecond));
    let mut noise_b = params.seed.stream(pick(StreamRole::NoiseOnSecond, StreamRole::NoiseOnFirst));

    let flip = |intended: Move, channel: &mut ChaCha8Rng| -> Move {
        if params.noise > 0.0 && channel.random_bool(params.noise) {
            intended.flipped()
        } else {
            intended
        }
    };

    let mut rows = Vec::with_capacity(params.turns as usize);
    let mut total_a = T::zero();
    let mut total_b = T::zero();
    let mut seen_by_a: Option<Move> = None;
    let mut seen_by_b: Option<Move> = None;
    for turn in 0..params.turns {
        let intended_a = strategy_a.next_move(seen_by_a, &mut rng_a);
        let intended_b = strategy_b.next_move(seen_by_b, &mut rng_b);
        let (payoff_a, payoff_b) = params.matrix.pair_payoffs(intended_a, intended_b);
        let perceived_by_a = flip(intended_b, &mut noise_a);
        let perceived_by_b = flip(intended_a, &mut noise_b);
        rows.push(TurnRow {
            turn,
            intended_a,
            intended_b,
            perceived_by_a,
            perceived_by_b,
            payoff_a,
            payoff_b,
        });
        total_a = total_a + payoff_a;
        total_b = total_b + payoff_b;
        seen_by_a = Some(perceived_by_a);
        seen_by_b = Some(perceived_by_b);
    }

    Ok(MatchTranscript {
        player_a: params.name_a.to_string(),
        player_b: params.name_b.to_string(),
        rows,
        total_a,
        total_b,
    })
}

/// Full description of a tournament.
#[derive(Debug, Clone)]
pub struct TournamentConfig<T> {
    /// Unique player names with their strategy kinds.
    pub roster: Vec<(String, StrategyKind)>,
    /// Turns per match.
    pub turns: u32,
    /// Perception-noise probability, applied in every match.
    pub noise: f64,
    /// Master seed; all match seeds derive from it.
    pub master_seed: u64,
    /// Number of times the full round-robin is repeated.
    pub repetitions: u32,
    /// When true, each entry also plays one match against an independent
    /// fresh copy of itself per repetition and is credited one side's score.
    pub include_self_play: bool,
    /// Payoff values.
    pub matrix: PayoffMatrix<T>,
}

impl<T: Scalar> TournamentConfig<T> {
    /// A 200-turn, noise-free, single-repetition tournament with standard
    /// payoffs over the given roster.
    pub fn new(roster: Vec<(String, StrategyKind)>) -> Self {
        Self {
            roster,
            turns: 200,
            noise: 0.0,
            master_seed: 0,
            repetitions: 1,
            include_self_play: false,
            matrix: PayoffMatrix::standard(),
        }
    }

    fn validate(&self) -> Result<(), EngineError> {
        if self.roster.is_empty() {
            return Err(EngineError::EmptyRoster);
        }
        if self.turns == 0 {
            return Err(EngineError::ZeroTurns);
        }
        if !(0.0..=1.0).contains(&self.noise) || self.noise.is_nan() {
            return Err(EngineError::InvalidNoise(self.noise));
        }
        let mut seen = std::collections::HashSet::new();
        for (name, _) in &self.roster {
            if !seen.insert(name.as_str()) {
                return Err(EngineError::DuplicateName(name.clone()));
            }
        }
        Ok(())
    }
}

/// A finished tournament: ranked totals plus every match record.
#[derive(Debug, Clone)]
pub struct TournamentResult<T> {
    /// Ranked scoreboard.
    pub scoreboard: Scoreboard<T>,
    /// All transcripts, ordered by (repetition, pair position); self-play
    /// matches, when enabled, follow the pairs of their repetition.
    pub transcripts: Vec<MatchTranscript<T>>,
}

/// One scheduled match.
struct MatchJob {
    repetition: u32,
    index_a: usize,
    index_b: usize,
    self_play: bool,
}

/// Runs a full round-robin tournament.
///
/// Every unordered pair meets once per repetition. Matches run in parallel;
/// results are deterministic for a given config regardless of thread count,
/// because each match's randomness derives only from (master seed,
/// repetition, pair names) and aggregation follows schedule order.
pub fn run_tournament<T: Scalar>(
    config: &TournamentConfig<T>,
) -> Result<TournamentResult<T>, EngineError> {
    config.validate()?;
    let roster = &config.roster;

    let mut jobs = Vec::new();
    for repetition in 0..config.repetitions {
        for index_a in 0..roster.len() {
            for index_b in (index_a + 1)..roster.len() {
                jobs.push(MatchJob { repetition, index_a, index_b, self_play: false });
            }
        }
        if config.include_self_play {
            for index in 0..roster.len() {
                jobs.push(MatchJob { repetition, index_a: index, index_b: index, self_play: true });
            }
        }
    }

    let transcripts: Vec<MatchTranscript<T>> = jobs
        .par_iter()
        .map(|job| {
            let (name_a, kind_a) = &roster[job.index_a];
            let (name_b, kind_b) = &roster[job.index_b];
            let mut strategy_a = kind_a.build();
            // Self-play uses an independent fresh copy of the same kind.
            let mut strategy_b = kind_b.build();
            let params = MatchParams {
                name_a,
                name_b,
                turns: config.turns,
                noise: config.noise,
                matrix: config.matrix,
                seed: derive_match_seed(config.master_seed, job.repetition, name_a, name_b),
            };
            play_match(strategy_a.as_mut(), strategy_b.as_mut(), &params)
        })
        .collect::<Result<_, _>>()?;

    let mut scoreboard = Scoreboard::accumulator(roster.clone());
    for (job, transcript) in jobs.iter().zip(&transcripts) {
        scoreboard.credit(job.index_a, transcript.total_a, transcript.turns());
        if !job.self_play {
            // Self-play counts one side only; the copy's score is discarded.
            scoreboard.credit(job.index_b, transcript.total_b, transcript.turns());
        }
    }

    Ok(TournamentResult { scoreboard: scoreboard.finish(), transcripts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::{C, D};
    use crate::strategies::StrategyKind as K;

    fn params<'a>(name_a: &'a str, name_b: &'a str, turns: u32, noise: f64) -> MatchParams<'a, i64> {
        MatchParams {
            name_a,
            name_b,
            turns,
            noise,
            matrix: PayoffMatrix::standard(),
            seed: derive_match_seed(42, 0, name_a, name_b),
        }
    }

    #[test]
    fn test_rejects_zero_turns_and_bad_noise() {
        let mut a = K::AllC.build();
        let mut b = K::AllD.build();
        assert_eq!(
            play_match(a.as_mut(), b.as_mut(), &params("a", "b", 0, 0.0)).unwrap_err(),
            EngineError::ZeroTurns
        );
        assert_eq!(
            play_match(a.as_mut(), b.as_mut(), &params("a", "b", 10, 1.5)).unwrap_err(),
            EngineError::InvalidNoise(1.5)
        );
    }

    #[test]
    fn test_tft_vs_alld_scores() {
        // TFT loses the first turn, then mutual defection: 0 + 9*1 = 9
        // against 5 + 9*1 = 14.
        let mut a = K::TitForTat.build();
        let mut b = K::AllD.build();
        let t = play_match(a.as_mut(), b.as_mut(), &params("TFT", "ALLD", 10, 0.0)).unwrap();
        assert_eq!(t.total_a, 9);
        assert_eq!(t.total_b, 14);
        assert_eq!(t.rows[0].intended_a, C);
        assert_eq!(t.rows[0].intended_b, D);
        assert_eq!(t.rows[1].intended_a, D);
    }

    #[test]
    fn test_noise_free_perception_matches_intent() {
        let mut a = K::TitForTat.build();
        let mut b = K::SuspiciousTitForTat.build();
        let t = play_match(a.as_mut(), b.as_mut(), &params("TFT", "STFT", 50, 0.0)).unwrap();
        for row in &t.rows {
            assert_eq!(row.perceived_by_a, row.intended_b);
            assert_eq!(row.perceived_by_b, row.intended_a);
        }
    }

    #[test]
    fn test_noise_flips_at_roughly_the_requested_rate() {
        let mut a = K::AllC.build();
        let mut b = K::AllC.build();
        let t = play_match(a.as_mut(), b.as_mut(), &params("x", "y", 10_000, 0.1)).unwrap();
        let flips = t
            .rows
            .iter()
            .filter(|r| r.perceived_by_a != r.intended_b)
            .count();
        let rate = flips as f64 / t.rows.len() as f64;
        assert!((rate - 0.1).abs() < 0.02, "flip rate {rate}");
        // Payoffs score intended moves: two cooperators always earn reward.
        assert_eq!(t.total_a, 3 * 10_000);
    }

    #[test]
    fn test_match_is_symmetric_under_argument_order() {
        let run = |first: bool| {
            let mut otft = K::OmegaTitForTat.build();
            let mut rand = K::Random.build();
            if first {
                play_match(otft.as_mut(), rand.as_mut(), &params("OTFT", "RAND", 100, 0.05))
                    .unwrap()
            } else {
                play_match(rand.as_mut(), otft.as_mut(), &params("RAND", "OTFT", 100, 0.05))
                    .unwrap()
            }
        };
        let ab = run(true);
        let ba = run(false);
        for (x, y) in ab.rows.iter().zip(&ba.rows) {
            assert_eq!(x.intended_a, y.intended_b);
            assert_eq!(x.intended_b, y.intended_a);
            assert_eq!(x.perceived_by_a, y.perceived_by_b);
        }
        assert_eq!(ab.total_a, ba.total_b);
    }

    #[test]
    fn test_three_player_round_robin_hand_checked() {
        // Ten turns each: ALLD beats ALLC 50-0, ALLD beats TFT 14-9,
        // ALLC and TFT cooperate throughout for 30 each.
        let mut config = TournamentConfig::<i64>::new(vec![
            ("ALLD".into(), K::AllD),
            ("ALLC".into(), K::AllC),
            ("TFT".into(), K::TitForTat),
        ]);
        config.turns = 10;
        let result = run_tournament(&config).unwrap();
        assert_eq!(result.transcripts.len(), 3);
        let board = &result.scoreboard;
        assert_eq!(board.entry("ALLD").unwrap().score, 64);
        assert_eq!(board.entry("ALLC").unwrap().score, 30);
        assert_eq!(board.entry("TFT").unwrap().score, 39);
        assert_eq!(board.entry("ALLD").unwrap().rank, 1);
        assert_eq!(board.entry("TFT").unwrap().rank, 2);
        assert_eq!(board.entry("ALLC").unwrap().rank, 3);
        assert_eq!(board.entry("TFT").unwrap().games, 2);
        assert_eq!(board.entry("TFT").unwrap().turns, 20);
    }

    #[test]
    fn test_self_play_credits_one_side_only() {
        let mut config = TournamentConfig::<i64>::new(vec![
            ("GRIM".into(), K::Grim),
            ("ALLC".into(), K::AllC),
        ]);
        config.turns = 10;
        config.include_self_play = true;
        let result = run_tournament(&config).unwrap();
        // Pair match 30/30, plus one self-play match each worth 30.
        assert_eq!(result.transcripts.len(), 3);
        assert_eq!(result.scoreboard.entry("GRIM").unwrap().score, 60);
        assert_eq!(result.scoreboard.entry("GRIM").unwrap().games, 2);
        assert_eq!(result.scoreboard.entry("ALLC").unwrap().score, 60);
    }

    #[test]
    fn test_rejects_empty_and_duplicate_rosters() {
        let empty = TournamentConfig::<i64>::new(vec![]);
        assert_eq!(run_tournament(&empty).unwrap_err(), EngineError::EmptyRoster);
        let dup = TournamentConfig::<i64>::new(vec![
            ("X".into(), K::AllC),
            ("X".into(), K::AllD),
        ]);
        assert_eq!(
            run_tournament(&dup).unwrap_err(),
            EngineError::DuplicateName("X".into())
        );
    }

    #[test]
    fn test_same_seed_same_result_different_seed_differs() {
        let mut config = TournamentConfig::<i64>::new(vec![
            ("RAND".into(), K::Random),
            ("OTFT".into(), K::OmegaTitForTat),
            ("NEG".into(), K::Negative),
        ]);
        config.master_seed = 7;
        let first = run_tournament(&config).unwrap();
        let second = run_tournament(&config).unwrap();
        assert_eq!(first.transcripts, second.transcripts);
        config.master_seed = 8;
        let third = run_tournament(&config).unwrap();
        assert_ne!(first.transcripts, third.transcripts);
    }

    #[test]
    fn test_pairwise_seeding_ignores_other_roster_members() {
        let mut with_three = TournamentConfig::<i64>::new(vec![
            ("RAND".into(), K::Random),
            ("OTFT".into(), K::OmegaTitForTat),
            ("GRIM".into(), K::Grim),
        ]);
        with_three.master_seed = 5;
        let mut with_two = with_three.clone();
        with_two.roster.remove(2);

        let big = run_tournament(&with_three).unwrap();
        let small = run_tournament(&with_two).unwrap();
        let find = |r: &TournamentResult<i64>| {
            r.transcripts
                .iter()
                .find(|t| t.player_a == "RAND" && t.player_b == "OTFT")
                .unwrap()
                .clone()
        };
        assert_eq!(find(&big), find(&small));
    }

    #[test]
    fn test_repetitions_use_distinct_seeds() {
        let mut config = TournamentConfig::<i64>::new(vec![
            ("RAND".into(), K::Random),
            ("ALLC".into(), K::AllC),
        ]);
        config.repetitions = 2;
        config.turns = 50;
        let result = run_tournament(&config).unwrap();
        assert_eq!(result.transcripts.len(), 2);
        assert_ne!(
            result.transcripts[0].rows, result.transcripts[1].rows,
            "independent randomness per repetition"
        );
        let total: i64 = result.transcripts.iter().map(|t| t.total_a).sum();
        assert_eq!(result.scoreboard.entry("RAND").unwrap().score, total);
        assert_eq!(result.scoreboard.entry("RAND").unwrap().games, 2);
    }

    #[test]
    fn test_result_is_thread_count_independent() {
        let mut config = TournamentConfig::<i64>::new(vec![
            ("RAND".into(), K::Random),
            ("OTFT".into(), K::OmegaTitForTat),
            ("NEG".into(), K::Negative),
            ("GRIM".into(), K::Grim),
        ]);
        config.noise = 0.02;
        config.master_seed = 9;
        let parallel = run_tournament(&config).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_tournament(&config).unwrap());
        assert_eq!(parallel.transcripts, single.transcripts);
        assert_eq!(parallel.scoreboard, single.scoreboard);
    }
}
