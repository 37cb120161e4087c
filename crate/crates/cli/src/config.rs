//! JSON run configuration: schema, defaults, validation, and flag overrides.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use dilemma::{build_group_roster, GroupKind, PayoffMatrix, Preset, StdScore, StrategyKind};

/// Default match length when neither the file nor a flag sets one.
pub const DEFAULT_TURNS: u32 = 200;

/// A configuration problem: bad file, bad value, or a contradictory request.
///
/// Always maps to exit code 1.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(message.into()))
}

/// On-disk form of a run: roster plus knobs plus report selections.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    /// Optional preset roster to start from; entries below are appended.
    pub preset: Option<String>,
    #[serde(default)]
    pub roster: Vec<RosterEntry>,
    pub turns: Option<u32>,
    pub noise: Option<f64>,
    pub seed: Option<u64>,
    pub repetitions: Option<u32>,
    pub self_play: Option<bool>,
    pub payoffs: Option<PayoffConfig>,
    pub output_dir: Option<PathBuf>,
    pub reports: Option<ReportSelection>,
}

/// One roster line: either a named player or a group builder, never both.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RosterEntry {
    pub name: Option<String>,
    pub strategy: Option<String>,
    pub group: Option<GroupConfig>,
}

/// Expands to one boss plus `hitmen` numbered servants.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub kind: GroupKind,
    pub boss: String,
    pub hitmen: u32,
}

/// Payoff overrides; validated against both matrix orderings.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PayoffConfig {
    pub sucker: i64,
    pub punishment: i64,
    pub reward: i64,
    pub temptation: i64,
}

impl PayoffConfig {
    pub fn matrix(&self) -> Result<PayoffMatrix<StdScore>, ConfigError> {
        PayoffMatrix::new(self.sucker, self.punishment, self.reward, self.temptation)
            .map_err(|e| ConfigError(format!("invalid payoffs: {e}")))
    }
}

/// Which artifacts a run should emit beyond the printed scoreboard.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportSelection {
    #[serde(default = "default_true")]
    pub scoreboard: bool,
    #[serde(default)]
    pub transcripts: bool,
    #[serde(default)]
    pub collusion: bool,
    #[serde(default)]
    pub clones: Option<CloneWhatIf>,
}

fn default_true() -> bool {
    true
}

impl Default for ReportSelection {
    fn default() -> Self {
        Self { scoreboard: true, transcripts: false, collusion: false, clones: None }
    }
}

/// Post-run estimate: each boss re-entered with `count` servant clones.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CloneWhatIf {
    pub count: u64,
    pub bosses: Vec<String>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Default)]
pub struct Overrides {
    pub preset: Option<String>,
    pub turns: Option<u32>,
    pub noise: Option<f64>,
    pub seed: Option<u64>,
    pub repetitions: Option<u32>,
    pub self_play: bool,
    pub output_dir: Option<PathBuf>,
    pub collusion: bool,
    pub clone_count: Option<u64>,
    pub bosses: Vec<String>,
}

/// A fully validated run: every default applied, every name checked.
#[derive(Debug)]
pub struct ResolvedRun {
    pub roster: Vec<(String, StrategyKind)>,
    pub turns: u32,
    pub noise: f64,
    pub seed: u64,
    pub repetitions: u32,
    pub self_play: bool,
    pub matrix: PayoffMatrix<StdScore>,
    pub output_dir: Option<PathBuf>,
    pub scoreboard: bool,
    pub transcripts: bool,
    pub collusion: bool,
    pub clones: Option<CloneWhatIf>,
}

/// Reads and parses a configuration file, reporting JSON diagnostics
/// (line, column, offending key) verbatim.
pub fn load_config(path: &Path) -> Result<RunConfigFile, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| ConfigError(format!("config {}: {e}", path.display())))
}

fn parse_preset(name: &str) -> Result<Preset, ConfigError> {
    name.parse::<Preset>().map_err(|e| ConfigError(e.to_string()))
}

fn expand_roster(entries: &[RosterEntry]) -> Result<Vec<(String, StrategyKind)>, ConfigError> {
    let mut roster = Vec::new();
    for entry in entries {
        match (&entry.name, &entry.strategy, &entry.group) {
            (Some(name), Some(label), None) => {
                let kind = label
                    .parse::<StrategyKind>()
                    .map_err(|e| ConfigError(format!("roster entry {name:?}: {e}")))?;
                roster.push((name.clone(), kind));
            }
            (None, None, Some(group)) => {
                roster.extend(build_group_roster(group.kind, group.hitmen, &group.boss));
            }
            _ => {
                return err(
                    "each roster entry needs either \"name\" and \"strategy\" or a \"group\"",
                );
            }
        }
    }
    Ok(roster)
}

/// Merges file values with flag overrides and validates the result.
pub fn resolve(file: RunConfigFile, flags: Overrides) -> Result<ResolvedRun, ConfigError> {
    let preset = match flags.preset.or(file.preset) {
        Some(name) => Some(parse_preset(&name)?),
        None => None,
    };
    let mut roster = preset.map(|p| p.roster()).unwrap_or_default();
    roster.extend(expand_roster(&file.roster)?);

    let mut seen = std::collections::HashSet::new();
    if let Some((name, _)) = roster.iter().find(|(name, _)| !seen.insert(name.clone())) {
        return err(format!("duplicate roster name {name:?}"));
    }

    let turns = flags.turns.or(file.turns).unwrap_or(DEFAULT_TURNS);
    if turns == 0 {
        return err("turns must be at least 1");
    }
    let noise = flags
        .noise
        .or(file.noise)
        .or(preset.map(|p| p.default_noise()))
        .unwrap_or(0.0);
    if !(0.0..=1.0).contains(&noise) {
        return err(format!("noise {noise} outside [0, 1]"));
    }
    let repetitions = flags.repetitions.or(file.repetitions).unwrap_or(1);
    if repetitions == 0 {
        return err("repetitions must be at least 1");
    }
    let matrix = match &file.payoffs {
        Some(config) => config.matrix()?,
        None => PayoffMatrix::standard(),
    };

    let reports = file.reports.unwrap_or_default();
    let clones = match (flags.clone_count, flags.bosses.is_empty()) {
        (Some(count), false) => Some(CloneWhatIf { count, bosses: flags.bosses }),
        (Some(_), true) => {
            return err("--what-if-clones needs at least one --boss NAME");
        }
        (None, false) => {
            return err("--boss only makes sense together with --what-if-clones");
        }
        (None, true) => reports.clones,
    };
    if let Some(what_if) = &clones {
        if what_if.count == 0 {
            return err("clone count must be at least 1");
        }
        if what_if.bosses.is_empty() {
            return err("clone what-if needs at least one boss name");
        }
    }

    Ok(ResolvedRun {
        roster,
        turns,
        noise,
        seed: flags.seed.or(file.seed).unwrap_or(0),
        repetitions,
        self_play: flags.self_play || file.self_play.unwrap_or(false),
        matrix,
        output_dir: flags.output_dir.or(file.output_dir),
        scoreboard: reports.scoreboard,
        transcripts: reports.transcripts,
        collusion: reports.collusion || flags.collusion,
        clones,
    })
}

/// Analytics scenario file: a group-claim context to evaluate and crosscheck.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub population: u64,
    #[serde(default = "default_iterations")]
    pub iterations: u64,
    pub context: dilemma::ClaimContext,
    pub payoffs: Option<PayoffConfig>,
    /// Mean payoff per meeting between independents, overriding the reward.
    pub average_individual: Option<f64>,
}

fn default_iterations() -> u64 {
    10_000
}

/// Reads and parses an analytics scenario file.
pub fn load_scenario(path: &Path) -> Result<ScenarioFile, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read scenario {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| ConfigError(format!("scenario {}: {e}", path.display())))
}
