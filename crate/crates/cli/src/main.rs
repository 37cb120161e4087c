//! Command-line driver: tournaments, reports, and what-if estimates.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use config::{load_config, load_scenario, resolve, CloneWhatIf, ConfigError, Overrides, ResolvedRun, RunConfigFile, ScenarioFile};
use dilemma::{
    clone_scaling_estimate, crosscheck_formulas, read_scoreboard_csv, run_tournament,
    suspicion_report, GroupScenario, PayoffMatrix, Rational, Scoreboard, StdScore,
    TournamentConfig, TournamentResult, DEFAULT_TOLERANCE, DEFAULT_WINDOW,
};

/// Iterated-dilemma tournament runner and analytics toolkit.
#[derive(Debug, Parser)]
#[command(name = "dilemma", version, about)]
struct Cli {
    /// JSON run configuration; flags below override its values.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Turns per match.
    #[arg(long, value_name = "N")]
    turns: Option<u32>,
    /// Perception noise probability in [0, 1].
    #[arg(long, value_name = "E")]
    noise: Option<f64>,
    /// Master seed; fixes every match outcome.
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    /// Times the full schedule is repeated.
    #[arg(long = "reps", value_name = "N")]
    repetitions: Option<u32>,
    /// Add one self-play match per player and repetition.
    #[arg(long = "self-play")]
    self_play: bool,
    /// Preset roster: standard9, harsh, random-env, or noisy.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Directory for CSV reports; without it only stdout is written.
    #[arg(long = "out", value_name = "DIR")]
    out: Option<PathBuf>,
    /// Scan transcripts for one-sided exploitation and print the findings.
    #[arg(long = "collusion-report")]
    collusion_report: bool,
    /// Estimate the scoreboard after entering K servant clones per boss.
    #[arg(long = "what-if-clones", value_name = "K")]
    what_if_clones: Option<u64>,
    /// Boss entries the clones serve; repeatable.
    #[arg(long = "boss", value_name = "NAME")]
    bosses: Vec<String>,
    /// Evaluate a group-claim scenario file and crosscheck it by simulation.
    #[arg(long, value_name = "SCENARIO")]
    analytics: Option<PathBuf>,
    /// Apply what-if estimates to a saved scoreboard instead of running.
    #[arg(long = "import-scoreboard", value_name = "PATH")]
    import_scoreboard: Option<PathBuf>,
}

/// Any failure, tagged with the exit code it maps to.
enum AppError {
    /// Bad input: exit 1.
    Config(String),
    /// Failure while executing or writing: exit 2.
    Runtime(String),
}

impl From<ConfigError> for AppError {
    fn from(e: ConfigError) -> Self {
        AppError::Config(e.0)
    }
}

fn runtime(message: impl Into<String>) -> AppError {
    AppError::Runtime(message.into())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Config(message)) => {
            eprintln!("config error: {message}");
            ExitCode::from(1)
        }
        Err(AppError::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> Result<(), AppError> {
    let file = match &cli.config {
        Some(path) => load_config(path)?,
        None => RunConfigFile::default(),
    };
    let flags = Overrides {
        preset: cli.preset,
        turns: cli.turns,
        noise: cli.noise,
        seed: cli.seed,
        repetitions: cli.repetitions,
        self_play: cli.self_play,
        output_dir: cli.out,
        collusion: cli.collusion_report,
        clone_count: cli.what_if_clones,
        bosses: cli.bosses,
    };
    let run = resolve(file, flags)?;

    if let Some(path) = &cli.analytics {
        run_analytics(&load_scenario(path)?, run.output_dir.as_deref())?;
    }
    if let Some(path) = &cli.import_scoreboard {
        return estimate_on_imported(path, &run);
    }
    if run.roster.is_empty() {
        if cli.analytics.is_some() {
            return Ok(());
        }
        return Err(AppError::Config(
            "no roster: give --preset NAME, a --config file with roster entries, \
             --import-scoreboard PATH, or --analytics SCENARIO"
                .into(),
        ));
    }
    run_and_report(&run)
}

fn run_and_report(run: &ResolvedRun) -> Result<(), AppError> {
    let mut tournament = TournamentConfig::new(run.roster.clone());
    tournament.turns = run.turns;
    tournament.noise = run.noise;
    tournament.master_seed = run.seed;
    tournament.repetitions = run.repetitions;
    tournament.include_self_play = run.self_play;
    tournament.matrix = run.matrix;
    let result: TournamentResult<StdScore> =
        run_tournament(&tournament).map_err(|e| runtime(e.to_string()))?;

    println!("{}", render_table(&result.scoreboard));

    if let Some(dir) = &run.output_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| runtime(format!("cannot create {}: {e}", dir.display())))?;
        if run.scoreboard {
            write_file(&dir.join("scoreboard.csv"), &result.scoreboard.to_csv_string())?;
        }
        if run.transcripts {
            let sub = dir.join("transcripts");
            std::fs::create_dir_all(&sub)
                .map_err(|e| runtime(format!("cannot create {}: {e}", sub.display())))?;
            for (index, transcript) in result.transcripts.iter().enumerate() {
                let file = format!(
                    "match_{index:04}_{}_vs_{}.csv",
                    sanitize(&transcript.player_a),
                    sanitize(&transcript.player_b),
                );
                write_file(&sub.join(file), &transcript.to_csv_string())?;
            }
        }
    }

    if run.collusion {
        let report = suspicion_report(&result.transcripts, DEFAULT_WINDOW, DEFAULT_TOLERANCE)
            .map_err(|e| runtime(e.to_string()))?;
        println!("{report}");
        if let Some(dir) = &run.output_dir {
            let mut csv = Vec::new();
            report.write_csv(&mut csv).map_err(|e| runtime(e.to_string()))?;
            write_bytes(&dir.join("collusion.csv"), &csv)?;
        }
    }

    if let Some(what_if) = &run.clones {
        let estimated = apply_clones(&result.scoreboard, what_if, run.turns, &run.matrix)?;
        println!("with {} clones per boss:", what_if.count);
        println!("{}", render_table(&estimated));
        if let Some(dir) = &run.output_dir {
            write_file(&dir.join("clones_scoreboard.csv"), &estimated.to_csv_string())?;
        }
    }
    Ok(())
}

/// Import path: re-rank a saved scoreboard and optionally apply the clone
/// what-if, without running any matches.
fn estimate_on_imported(path: &Path, run: &ResolvedRun) -> Result<(), AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Config(format!("cannot read scoreboard {}: {e}", path.display())))?;
    let board: Scoreboard<StdScore> = read_scoreboard_csv(&text)
        .map_err(|e| AppError::Config(format!("scoreboard {}: {e}", path.display())))?;
    println!("{}", render_table(&board));

    if let Some(what_if) = &run.clones {
        let estimated = apply_clones(&board, what_if, run.turns, &run.matrix)?;
        println!("with {} clones per boss:", what_if.count);
        println!("{}", render_table(&estimated));
        if let Some(dir) = &run.output_dir {
            std::fs::create_dir_all(dir)
                .map_err(|e| runtime(format!("cannot create {}: {e}", dir.display())))?;
            write_file(&dir.join("clones_scoreboard.csv"), &estimated.to_csv_string())?;
        }
    }
    Ok(())
}

fn apply_clones(
    board: &Scoreboard<StdScore>,
    what_if: &CloneWhatIf,
    turns: u32,
    matrix: &PayoffMatrix<StdScore>,
) -> Result<Scoreboard<StdScore>, AppError> {
    let bosses: Vec<&str> = what_if.bosses.iter().map(String::as_str).collect();
    clone_scaling_estimate(board, &bosses, what_if.count, u64::from(turns), matrix)
        .map_err(|e| AppError::Config(e.to_string()))
}

/// Analytics path: evaluate the closed forms for a scenario and crosscheck
/// them against a stylized simulation.
fn run_analytics(scenario: &ScenarioFile, out: Option<&Path>) -> Result<(), AppError> {
    let matrix = match &scenario.payoffs {
        Some(config) => config.matrix()?,
        None => PayoffMatrix::standard(),
    };
    let matrix: PayoffMatrix<Rational> = matrix
        .map(Rational::from_integer)
        .expect("orderings survive an exact conversion");
    let mut group = GroupScenario::new(
        scenario.population,
        scenario.context,
        scenario.iterations,
        matrix,
    )
    .map_err(|e| AppError::Config(e.to_string()))?;
    if let Some(average) = scenario.average_individual {
        let exact = Rational::approximate_float(average).ok_or_else(|| {
            AppError::Config(format!("average_individual {average} is not a finite number"))
        })?;
        group = group
            .with_average_individual(exact)
            .map_err(|e| AppError::Config(e.to_string()))?;
    }
    let report = crosscheck_formulas(&group).map_err(|e| AppError::Config(e.to_string()))?;

    println!("context: {}", group.context().code());
    for row in report.rows() {
        println!(
            "  {:<4} formula {} simulated {} (relative error {:.6})",
            row.role.code(),
            row.formula_value,
            row.simulated_value,
            row.relative_error,
        );
    }
    for note in report.notes() {
        println!("  note: {note}");
    }
    println!("max relative error: {:.6}", report.max_relative_error());

    if let Some(dir) = out {
        std::fs::create_dir_all(dir)
            .map_err(|e| runtime(format!("cannot create {}: {e}", dir.display())))?;
        let mut csv = Vec::new();
        report.write_csv(&mut csv).map_err(|e| runtime(e.to_string()))?;
        write_bytes(&dir.join("analytics_crosscheck.csv"), &csv)?;
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), AppError> {
    write_bytes(path, contents.as_bytes())
}

fn write_bytes(path: &Path, contents: &[u8]) -> Result<(), AppError> {
    std::fs::write(path, contents)
        .map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))
}

/// Keeps names filesystem-safe while staying deterministic.
fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '-' })
        .collect()
}

/// Aligned, human-readable scoreboard.
fn render_table(board: &Scoreboard<StdScore>) -> String {
    let mut rows = vec![[
        "rank".to_string(),
        "player".to_string(),
        "strategy".to_string(),
        "score".to_string(),
        "games".to_string(),
        "turns".to_string(),
    ]];
    for entry in board.entries() {
        rows.push([
            entry.rank.to_string(),
            entry.player.clone(),
            entry.strategy.clone(),
            entry.score.to_string(),
            entry.games.to_string(),
            entry.turns.to_string(),
        ]);
    }
    let mut widths = [0usize; 6];
    for row in &rows {
        for (width, cell) in widths.iter_mut().zip(row) {
            *width = (*width).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &rows {
        let mut line = String::new();
        for (i, (cell, width)) in row.iter().zip(widths).enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            if i == 1 || i == 2 {
                line.push_str(&format!("{cell:<width$}"));
            } else {
                line.push_str(&format!("{cell:>width$}"));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
