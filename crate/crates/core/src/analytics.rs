//! Closed-form group-strategy payoff accounting, break-even thresholds, and
//! a simulation cross-checker for the closed forms.

use std::io::{self, Write};

use crate::num::Scalar;
use crate::payoff::PayoffMatrix;
use crate::scoreboard::Scoreboard;
use crate::Rational;

/// Largest population `crosscheck_formulas` will simulate.
pub const MAX_CROSSCHECK_POPULATION: u64 = 200;
/// Largest iteration count `crosscheck_formulas` will simulate.
pub const MAX_CROSSCHECK_ITERATIONS: u64 = 10_000;

/// Problems with group-payoff inputs.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalyticsError {
    #[error("{occupied} group members do not fit a population of {population}")]
    PopulationOverflow { occupied: u64, population: u64 },
    #[error("iteration count must be at least 1")]
    ZeroIterations,
    #[error(
        "population {population} or iterations {iterations} exceed the cross-check \
         limits ({MAX_CROSSCHECK_POPULATION} and {MAX_CROSSCHECK_ITERATIONS})"
    )]
    ScenarioTooLarge { population: u64, iterations: u64 },
    #[error("average payoff {average} must lie strictly between {lower} and {upper}")]
    AverageOutOfRange { average: f64, lower: f64, upper: f64 },
    #[error(
        "degraded per-opponent payoffs must satisfy punishment < first <= second < temptation, \
         got {first} and {second}"
    )]
    DegradedPayoffsOutOfRange { first: Rational, second: Rational },
    #[error("boss {0:?} not present in the scoreboard")]
    UnknownBoss(String),
}

/// Which coexisting groups a closed-form payoff describes.
///
/// The taxonomy crosses group organization (democracy: members cooperate with
/// everyone inside and outside unless at war; empire: members sacrifice to a
/// single boss) with posture (peace: cooperative outside; war: defecting
/// outside). The closed forms differ by which groups share the population, so
/// the context is explicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClaimContext {
    /// A peaceful democratic majority sharing the population with a
    /// war-footing democratic group of `warring` members.
    DemocraciesPeaceVersusWar { warring: u64 },
    /// A single empire at peace (one boss plus `members` servants) embedded
    /// in an otherwise peaceful democratic population.
    EmpireAmongPeacefulDemocracy { members: u64 },
    /// Two same-sized empires, one at peace and one at war, competing in the
    /// same population.
    EmpirePeaceVersusWar { members: u64 },
    /// A war-footing democracy of `warring` members sharing the population
    /// with an empire at war of `empire` servants.
    WarringDemocracyVersusEmpire { empire: u64, warring: u64 },
}

impl ClaimContext {
    /// Stable identifier used in report output.
    pub fn code(self) -> &'static str {
        match self {
            ClaimContext::DemocraciesPeaceVersusWar { .. } => "democracies-peace-versus-war",
            ClaimContext::EmpireAmongPeacefulDemocracy { .. } => {
                "empire-among-peaceful-democracy"
            }
            ClaimContext::EmpirePeaceVersusWar { .. } => "empire-peace-versus-war",
            ClaimContext::WarringDemocracyVersusEmpire { .. } => {
                "warring-democracy-versus-empire"
            }
        }
    }

    /// Population slots occupied by organized groups (bosses included).
    fn occupied(self) -> u64 {
        match self {
            ClaimContext::DemocraciesPeaceVersusWar { warring } => warring,
            ClaimContext::EmpireAmongPeacefulDemocracy { members } => members + 1,
            ClaimContext::EmpirePeaceVersusWar { members } => 2 * members + 2,
            ClaimContext::WarringDemocracyVersusEmpire { empire, warring } => {
                empire + warring + 1
            }
        }
    }
}

/// A population hosting one of the [`ClaimContext`] group configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupScenario<T> {
    population: u64,
    context: ClaimContext,
    iterations: u64,
    payoffs: PayoffMatrix<T>,
    average_individual: T,
}

impl<T: Scalar> GroupScenario<T> {
    /// Validates group sizes against the population and defaults the average
    /// individual payoff to the reward (cooperative outsiders).
    pub fn new(
        population: u64,
        context: ClaimContext,
        iterations: u64,
        payoffs: PayoffMatrix<T>,
    ) -> Result<Self, AnalyticsError> {
        if iterations == 0 {
            return Err(AnalyticsError::ZeroIterations);
        }
        let occupied = context.occupied();
        if occupied >= population {
            return Err(AnalyticsError::PopulationOverflow { occupied, population });
        }
        let average_individual = payoffs.reward();
        Ok(GroupScenario { population, context, iterations, payoffs, average_individual })
    }

    /// Overrides the average payoff outsiders earn against each other.
    ///
    /// Must lie strictly between punishment and temptation. The closed forms
    /// assume it equals the reward; a different value shows up as simulation
    /// disagreement in the cross-check report.
    pub fn with_average_individual(mut self, average: T) -> Result<Self, AnalyticsError> {
        if average <= self.payoffs.punishment() || average >= self.payoffs.temptation() {
            return Err(AnalyticsError::AverageOutOfRange {
                average: average.as_f64(),
                lower: self.payoffs.punishment().as_f64(),
                upper: self.payoffs.temptation().as_f64(),
            });
        }
        self.average_individual = average;
        Ok(self)
    }

    pub fn population(&self) -> u64 {
        self.population
    }

    pub fn context(&self) -> ClaimContext {
        self.context
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn payoffs(&self) -> &PayoffMatrix<T> {
        &self.payoffs
    }

    pub fn average_individual(&self) -> T {
        self.average_individual
    }
}

/// The group-payoff roles a context can report on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GroupRole {
    /// Democracy member during peace.
    DemocracyPeace,
    /// Democracy member at war.
    DemocracyWar,
    /// Empire boss at peace.
    EmpirePeace,
    /// Empire boss at war.
    EmpireWar,
    /// Best individual (group-free) strategy.
    BestIndividual,
}

impl GroupRole {
    /// Compact role code used in report output.
    pub fn code(self) -> &'static str {
        match self {
            GroupRole::DemocracyPeace => "M_DP",
            GroupRole::DemocracyWar => "M_DW",
            GroupRole::EmpirePeace => "E_EP",
            GroupRole::EmpireWar => "E_EW",
            GroupRole::BestIndividual => "X",
        }
    }
}

impl std::fmt::Display for GroupRole {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

/// Per-iteration payoffs by role; roles absent from the context are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupPayoffs<T> {
    pub democracy_peace: Option<T>,
    pub democracy_war: Option<T>,
    pub empire_peace: Option<T>,
    pub empire_war: Option<T>,
    /// Best individual payoff, reported where the context equates it with
    /// the peaceful democratic member's.
    pub best_individual: Option<T>,
}

impl<T> Default for GroupPayoffs<T> {
    fn default() -> Self {
        GroupPayoffs {
            democracy_peace: None,
            democracy_war: None,
            empire_peace: None,
            empire_war: None,
            best_individual: None,
        }
    }
}

impl<T: Scalar> GroupPayoffs<T> {
    /// Present roles in stable order.
    pub fn roles(&self) -> Vec<(GroupRole, T)> {
        [
            (GroupRole::DemocracyPeace, self.democracy_peace),
            (GroupRole::DemocracyWar, self.democracy_war),
            (GroupRole::EmpirePeace, self.empire_peace),
            (GroupRole::EmpireWar, self.empire_war),
            (GroupRole::BestIndividual, self.best_individual),
        ]
        .into_iter()
        .filter_map(|(role, value)| value.map(|v| (role, v)))
        .collect()
    }

    /// Totals after the scenario's iterations (per-iteration value times i).
    pub fn totals(&self, iterations: u64) -> GroupPayoffs<T> {
        let scale = |v: Option<T>| v.map(|x| x * T::from_count(iterations));
        GroupPayoffs {
            democracy_peace: scale(self.democracy_peace),
            democracy_war: scale(self.democracy_war),
            empire_peace: scale(self.empire_peace),
            empire_war: scale(self.empire_war),
            best_individual: scale(self.best_individual),
        }
    }
}

/// Per-iteration payoffs of each role present in the scenario's context,
/// computed from the closed forms.
///
/// Segment accounting is verbatim: each role's payoff sums one meeting per
/// population member (self included) per iteration, with no per-opponent
/// normalization.
pub fn role_payoffs<T: Scalar>(scenario: &GroupScenario<T>) -> GroupPayoffs<T> {
    let n = scenario.population;
    let p = &scenario.payoffs;
    let (r, pn, t) = (p.reward(), p.punishment(), p.temptation());
    let count = T::from_count;
    let mut out = GroupPayoffs::default();
    match scenario.context {
        ClaimContext::DemocraciesPeaceVersusWar { warring: m } => {
            out.democracy_peace = Some(r * count(n - m) + pn * count(m));
            out.democracy_war = Some(r * count(m) + pn * count(n - m));
        }
        ClaimContext::EmpireAmongPeacefulDemocracy { members: m } => {
            let peace = r * count(n);
            out.democracy_peace = Some(peace);
            out.best_individual = Some(peace);
            out.empire_peace = Some(r * count(n - m) + t * count(m));
        }
        ClaimContext::EmpirePeaceVersusWar { members: m } => {
            out.empire_peace = Some(r * count(n - 2 * m) + t * count(m) + pn * count(m));
            out.empire_war = Some(r * count(n - m) + t * count(m));
        }
        ClaimContext::WarringDemocracyVersusEmpire { empire: m_ew, warring: m_dw } => {
            // The war-footing democrat is credited the cooperative payoff
            // against everyone outside the empire, despite its posture; the
            // accounting is kept verbatim and the cross-checker mirrors it.
            out.democracy_war = Some(r * count(n - m_ew) + pn * count(m_ew));
            out.empire_war =
                Some(r * count(n - m_ew - m_dw) + t * count(m_ew) + pn * count(m_dw));
        }
    }
    out
}

/// An exact threshold plus the least integer strictly above it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdReport {
    /// The exact break-even value; strict inequality required to win.
    pub exact: Rational,
    /// Smallest integer member count that wins.
    pub minimum: i64,
}

/// The least integer strictly greater than `value`.
pub fn least_integer_above(value: Rational) -> i64 {
    value.floor().to_integer() + 1
}

impl ThresholdReport {
    fn from_exact(exact: Rational) -> Self {
        ThresholdReport { exact, minimum: least_integer_above(exact) }
    }
}

/// Break-even for a war-footing democracy against a war-footing empire.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeAdvantageThreshold {
    /// Members needed per empire servant: (T-P)/(R-P).
    pub ratio: Rational,
    pub exact: Rational,
    pub minimum: i64,
}

/// Minimum war-democracy size that out-earns a war empire with `empire_members`
/// servants: m > (T-P)/(R-P) * empire_members.
pub fn threshold_warring_democracy_beats_empire(
    payoffs: &PayoffMatrix<Rational>,
    empire_members: u64,
) -> SizeAdvantageThreshold {
    let ratio = (payoffs.temptation() - payoffs.punishment())
        / (payoffs.reward() - payoffs.punishment());
    let exact = ratio * Rational::from_integer(empire_members as i64);
    SizeAdvantageThreshold { ratio, exact, minimum: least_integer_above(exact) }
}

/// Whether an empire threshold is taken on a peace or war footing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmpireFooting {
    Peace,
    War,
}

/// Minimum empire size that out-earns the best individual strategy.
///
/// `average` is the best individual's per-opponent payoff; `degraded` is the
/// empire boss's per-opponent payoff against outsiders (protocol overhead
/// makes it lower). Peace footing: m > (A-B)/(T-B) * n. War footing:
/// m > (A-B)/(T-B-P+A) * n.
pub fn threshold_empire_beats_best_individual(
    payoffs: &PayoffMatrix<Rational>,
    average: Rational,
    degraded: Rational,
    population: u64,
    footing: EmpireFooting,
) -> Result<ThresholdReport, AnalyticsError> {
    if degraded >= average || average >= payoffs.temptation() {
        return Err(AnalyticsError::AverageOutOfRange {
            average: average.as_f64(),
            lower: degraded.as_f64(),
            upper: payoffs.temptation().as_f64(),
        });
    }
    let gap = average - degraded;
    let denominator = match footing {
        EmpireFooting::Peace => payoffs.temptation() - degraded,
        EmpireFooting::War => {
            payoffs.temptation() - degraded - payoffs.punishment() + average
        }
    };
    let exact = gap / denominator * Rational::from_integer(population as i64);
    Ok(ThresholdReport::from_exact(exact))
}

/// Break-even between two empires of unequal outside efficiency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnequalEmpiresThreshold {
    /// Normalized efficiency gap (B2-B1)/(T-P), in [0, 1).
    pub alpha: Rational,
    /// Weight on the rival's member count: (1-alpha)/(1+alpha).
    pub member_coefficient: Rational,
    /// Weight on the population size: alpha/(1+alpha).
    pub population_coefficient: Rational,
    pub exact: Rational,
    pub minimum: i64,
}

/// Minimum size `m1` for the empire with the worse outside payoff `first` to
/// out-earn a rival with outside payoff `second` and `rival_members` members:
/// m1 > (1-a)/(1+a) * m2 + a/(1+a) * n, with a = (second-first)/(T-P).
pub fn threshold_unequal_empires(
    payoffs: &PayoffMatrix<Rational>,
    first: Rational,
    second: Rational,
    rival_members: u64,
    population: u64,
) -> Result<UnequalEmpiresThreshold, AnalyticsError> {
    if first <= payoffs.punishment()
        || second >= payoffs.temptation()
        || first > second
    {
        return Err(AnalyticsError::DegradedPayoffsOutOfRange { first, second });
    }
    let one = Rational::from_integer(1);
    let alpha = (second - first) / (payoffs.temptation() - payoffs.punishment());
    let member_coefficient = (one - alpha) / (one + alpha);
    let population_coefficient = alpha / (one + alpha);
    let exact = member_coefficient * Rational::from_integer(rival_members as i64)
        + population_coefficient * Rational::from_integer(population as i64);
    Ok(UnequalEmpiresThreshold {
        alpha,
        member_coefficient,
        population_coefficient,
        exact,
        minimum: least_integer_above(exact),
    })
}

/// Estimated scoreboard after granting `clones` extra servile members to each
/// boss: a boss gains clones * T * turns (each clone feeds it the temptation
/// every turn), every other entry gains clones * P * turns (clones defect
/// against outsiders). Clones themselves are not ranked.
pub fn clone_scaling_estimate<T: Scalar>(
    base: &Scoreboard<T>,
    bosses: &[&str],
    clones: u64,
    turns: u64,
    payoffs: &PayoffMatrix<T>,
) -> Result<Scoreboard<T>, AnalyticsError> {
    for boss in bosses {
        if base.entry(boss).is_none() {
            return Err(AnalyticsError::UnknownBoss(boss.to_string()));
        }
    }
    let scale = T::from_count(clones) * T::from_count(turns);
    let boss_bonus = scale * payoffs.temptation();
    let outsider_bonus = scale * payoffs.punishment();
    let totals = base
        .entries()
        .iter()
        .map(|e| {
            let bonus = if bosses.contains(&e.player.as_str()) {
                boss_bonus
            } else {
                outsider_bonus
            };
            (e.player.clone(), e.strategy.clone(), e.score + bonus, e.games, e.turns)
        })
        .collect();
    Ok(Scoreboard::from_totals(totals))
}

/// One formula-versus-simulation comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckRow<T> {
    pub context: &'static str,
    pub role: GroupRole,
    /// Closed-form per-iteration payoff.
    pub formula_value: T,
    /// Per-iteration payoff re-derived by agent-level simulation.
    pub simulated_value: T,
    /// Relative error (absolute error where the formula value is zero).
    pub relative_error: f64,
}

/// Formula-versus-simulation agreement for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckReport<T> {
    rows: Vec<CrosscheckRow<T>>,
    notes: Vec<String>,
}

impl<T: Scalar> CrosscheckReport<T> {
    pub fn rows(&self) -> &[CrosscheckRow<T>] {
        &self.rows
    }

    /// Accounting caveats that apply to the compared formulas.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Worst disagreement across all rows (0 when empty).
    pub fn max_relative_error(&self) -> f64 {
        self.rows.iter().map(|r| r.relative_error).fold(0.0, f64::max)
    }

    /// Writes the report as CSV.
    ///
    /// Columns: `context,role,formula_value,simulated_value,relative_error`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "context,role,formula_value,simulated_value,relative_error")?;
        for row in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{}",
                row.context, row.role, row.formula_value, row.simulated_value, row.relative_error
            )?;
        }
        Ok(())
    }
}

/// Stylized agent kinds used by the cross-check simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Agent {
    PeacefulDemocrat,
    WarringDemocrat,
    PeaceBoss,
    PeaceServant,
    WarBoss,
    WarServant,
    Outsider,
}

/// Boxed stylized-payoff rule: what `focal` earns from meeting `other`.
type MeetingRule<T> = Box<dyn Fn(Agent, Agent) -> T>;

/// Sums `iterations` rounds of the focal agent meeting every population
/// member once (itself included), under the context's stylized payoffs.
fn simulate_role<T: Scalar>(
    focal: Agent,
    population: &[Agent],
    iterations: u64,
    meet: impl Fn(Agent, Agent) -> T,
) -> T {
    let mut total = T::zero();
    for _ in 0..iterations {
        for &other in population {
            total = total + meet(focal, other);
        }
    }
    total
}

/// Re-derives each reported role's payoff from an idealized agent population
/// and compares it to the closed forms.
///
/// The agents behave exactly per the closed forms' assumptions — servants
/// always cooperate with their boss and defect (or play fair, on a peace
/// footing) outside, group members recognize each other without loss, and
/// outsiders earn the scenario's average against each other — so agreement
/// within 1% is expected whenever the average equals the reward.
///
/// The detection of collusion-like behavior being undecidable in general, no
/// attempt is made to simulate recognition itself; recognition is free by
/// construction.
pub fn crosscheck_formulas<T: Scalar>(
    scenario: &GroupScenario<T>,
) -> Result<CrosscheckReport<T>, AnalyticsError> {
    if scenario.population > MAX_CROSSCHECK_POPULATION
        || scenario.iterations > MAX_CROSSCHECK_ITERATIONS
    {
        return Err(AnalyticsError::ScenarioTooLarge {
            population: scenario.population,
            iterations: scenario.iterations,
        });
    }
    let payoffs = scenario.payoffs;
    let (r, p, t) = (payoffs.reward(), payoffs.punishment(), payoffs.temptation());
    let average = scenario.average_individual;
    let n = scenario.population;
    let mut population: Vec<Agent> = Vec::with_capacity(n as usize);
    let mut notes = Vec::new();

    // Stylized meeting payoff to `focal`, and the roles with a live
    // representative, per context.
    let (meet, reported): (MeetingRule<T>, Vec<(GroupRole, Agent)>) = match scenario.context {
        ClaimContext::DemocraciesPeaceVersusWar { warring } => {
            population.extend(std::iter::repeat_n(Agent::WarringDemocrat, warring as usize));
            population
                .extend(std::iter::repeat_n(Agent::PeacefulDemocrat, (n - warring) as usize));
            let meet = move |focal: Agent, other: Agent| -> T {
                if focal == other {
                    r
                } else {
                    p
                }
            };
            let mut reported = vec![(GroupRole::DemocracyPeace, Agent::PeacefulDemocrat)];
            if warring > 0 {
                reported.push((GroupRole::DemocracyWar, Agent::WarringDemocrat));
            }
            (Box::new(meet), reported)
        }
        ClaimContext::EmpireAmongPeacefulDemocracy { members } => {
            population.push(Agent::PeaceBoss);
            population.extend(std::iter::repeat_n(Agent::PeaceServant, members as usize));
            population
                .extend(std::iter::repeat_n(Agent::Outsider, (n - members - 1) as usize));
            let meet = move |focal: Agent, other: Agent| -> T {
                match (focal, other) {
                    (Agent::PeaceBoss, Agent::PeaceServant) => t,
                    (Agent::Outsider, Agent::Outsider) => average,
                    _ => r,
                }
            };
            (
                Box::new(meet),
                vec![
                    (GroupRole::DemocracyPeace, Agent::Outsider),
                    (GroupRole::EmpirePeace, Agent::PeaceBoss),
                    (GroupRole::BestIndividual, Agent::Outsider),
                ],
            )
        }
        ClaimContext::EmpirePeaceVersusWar { members } => {
            population.push(Agent::PeaceBoss);
            population.extend(std::iter::repeat_n(Agent::PeaceServant, members as usize));
            population.push(Agent::WarBoss);
            population.extend(std::iter::repeat_n(Agent::WarServant, members as usize));
            population
                .extend(std::iter::repeat_n(Agent::Outsider, (n - 2 * members - 2) as usize));
            let meet = move |focal: Agent, other: Agent| -> T {
                match (focal, other) {
                    (Agent::PeaceBoss, Agent::PeaceServant) => t,
                    (Agent::PeaceBoss, Agent::WarServant) => p,
                    (Agent::WarBoss, Agent::WarServant) => t,
                    (Agent::Outsider, Agent::Outsider) => average,
                    _ => r,
                }
            };
            let reported = vec![
                (GroupRole::EmpirePeace, Agent::PeaceBoss),
                (GroupRole::EmpireWar, Agent::WarBoss),
            ];
            (Box::new(meet), reported)
        }
        ClaimContext::WarringDemocracyVersusEmpire { empire, warring } => {
            population.extend(std::iter::repeat_n(Agent::WarringDemocrat, warring as usize));
            population.push(Agent::WarBoss);
            population.extend(std::iter::repeat_n(Agent::WarServant, empire as usize));
            population.extend(std::iter::repeat_n(
                Agent::Outsider,
                (n - warring - empire - 1) as usize,
            ));
            notes.push(
                "the democracy-at-war closed form credits the cooperative payoff against \
                 every non-servant opponent despite the war footing; the idealized agents \
                 mirror that accounting verbatim"
                    .to_string(),
            );
            let meet = move |focal: Agent, other: Agent| -> T {
                match (focal, other) {
                    (Agent::WarringDemocrat, Agent::WarServant) => p,
                    (Agent::WarringDemocrat, _) => r,
                    (Agent::WarBoss, Agent::WarServant) => t,
                    (Agent::WarBoss, Agent::WarringDemocrat) => p,
                    (Agent::WarBoss, _) => r,
                    _ => r,
                }
            };
            let mut reported = vec![(GroupRole::EmpireWar, Agent::WarBoss)];
            if warring > 0 {
                reported.insert(0, (GroupRole::DemocracyWar, Agent::WarringDemocrat));
            }
            (Box::new(meet), reported)
        }
    };

    debug_assert_eq!(population.len() as u64, n);
    let formulas = role_payoffs(scenario);
    let per_iteration = T::from_count(scenario.iterations);
    let rows = reported
        .into_iter()
        .map(|(role, agent)| {
            let simulated_total = simulate_role(agent, &population, scenario.iterations, &meet);
            let simulated_value = simulated_total / per_iteration;
            let formula_value = formulas
                .roles()
                .into_iter()
                .find(|(r, _)| *r == role)
                .map(|(_, v)| v)
                .expect("every reported role has a closed form");
            let difference = (formula_value.as_f64() - simulated_value.as_f64()).abs();
            let relative_error = if formula_value == T::zero() {
                difference
            } else {
                difference / formula_value.as_f64().abs()
            };
            CrosscheckRow { context: scenario.context.code(), role, formula_value, simulated_value, relative_error }
        })
        .collect();
    Ok(CrosscheckReport { rows, notes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard() -> PayoffMatrix<i64> {
        PayoffMatrix::standard()
    }

    fn rational_standard() -> PayoffMatrix<Rational> {
        PayoffMatrix::standard()
            .map(Rational::from_integer)
            .expect("standard payoffs stay ordered")
    }

    fn scenario(context: ClaimContext) -> GroupScenario<i64> {
        GroupScenario::new(100, context, 1, standard()).unwrap()
    }

    #[test]
    fn peace_and_war_democracies_cross_over_at_half_the_population() {
        let s = scenario(ClaimContext::DemocraciesPeaceVersusWar { warring: 50 });
        let payoffs = role_payoffs(&s);
        assert_eq!(payoffs.democracy_peace, Some(200));
        assert_eq!(payoffs.democracy_war, Some(200));
        let bigger = scenario(ClaimContext::DemocraciesPeaceVersusWar { warring: 51 });
        let payoffs = role_payoffs(&bigger);
        assert!(payoffs.democracy_war > payoffs.democracy_peace);
    }

    #[test]
    fn peaceful_empire_out_earns_the_democracy_it_lives_in() {
        let s = scenario(ClaimContext::EmpireAmongPeacefulDemocracy { members: 20 });
        let payoffs = role_payoffs(&s);
        assert_eq!(payoffs.democracy_peace, Some(300));
        assert_eq!(payoffs.best_individual, Some(300));
        assert_eq!(payoffs.empire_peace, Some(340));
    }

    #[test]
    fn war_footing_beats_peace_footing_for_the_same_empire() {
        let s = scenario(ClaimContext::EmpirePeaceVersusWar { members: 20 });
        let payoffs = role_payoffs(&s);
        assert_eq!(payoffs.empire_peace, Some(300));
        assert_eq!(payoffs.empire_war, Some(340));
    }

    #[test]
    fn scenario_rejects_oversized_groups_and_zero_iterations() {
        let err = GroupScenario::new(
            100,
            ClaimContext::DemocraciesPeaceVersusWar { warring: 100 },
            1,
            standard(),
        )
        .unwrap_err();
        assert_eq!(err, AnalyticsError::PopulationOverflow { occupied: 100, population: 100 });
        let err = GroupScenario::new(
            10,
            ClaimContext::EmpirePeaceVersusWar { members: 4 },
            1,
            standard(),
        )
        .unwrap_err();
        assert_eq!(err, AnalyticsError::PopulationOverflow { occupied: 10, population: 10 });
        let err = GroupScenario::new(
            100,
            ClaimContext::EmpireAmongPeacefulDemocracy { members: 20 },
            0,
            standard(),
        )
        .unwrap_err();
        assert_eq!(err, AnalyticsError::ZeroIterations);
    }

    #[test]
    fn war_democracy_needs_twice_the_empire_size_at_standard_payoffs() {
        let report = threshold_warring_democracy_beats_empire(&rational_standard(), 10);
        assert_eq!(report.ratio, Rational::from_integer(2));
        assert_eq!(report.exact, Rational::from_integer(20));
        assert_eq!(report.minimum, 21);
    }

    #[test]
    fn war_democracy_needs_two_thirds_of_a_two_group_population() {
        // With only the two groups present, m_DW > 2 m_EW = 2 (n - m_DW)
        // rearranges to m_DW > 2n/3.
        let ratio = threshold_warring_democracy_beats_empire(&rational_standard(), 1).ratio;
        let n = Rational::from_integer(99);
        let share = ratio * n / (Rational::from_integer(1) + ratio);
        assert_eq!(share, Rational::new(2 * 99, 3));
    }

    #[test]
    fn empire_thresholds_match_hand_computed_minima() {
        let payoffs = rational_standard();
        let a = Rational::from_integer(3);
        let b = Rational::from_integer(2);
        let peace = threshold_empire_beats_best_individual(
            &payoffs,
            a,
            b,
            100,
            EmpireFooting::Peace,
        )
        .unwrap();
        assert_eq!(peace.exact, Rational::new(100, 3));
        assert_eq!(peace.minimum, 34);
        let war =
            threshold_empire_beats_best_individual(&payoffs, a, b, 100, EmpireFooting::War)
                .unwrap();
        assert_eq!(war.exact, Rational::from_integer(20));
        assert_eq!(war.minimum, 21);
    }

    #[test]
    fn empire_threshold_vanishes_as_efficiencies_converge() {
        let payoffs = rational_standard();
        let a = Rational::from_integer(3);
        let b = Rational::new(2999, 1000);
        for footing in [EmpireFooting::Peace, EmpireFooting::War] {
            let report =
                threshold_empire_beats_best_individual(&payoffs, a, b, 100, footing).unwrap();
            assert!(report.exact < Rational::from_integer(1));
            assert_eq!(report.minimum, 1);
        }
    }

    #[test]
    fn empire_threshold_rejects_misordered_averages() {
        let payoffs = rational_standard();
        let three = Rational::from_integer(3);
        let five = Rational::from_integer(5);
        assert!(matches!(
            threshold_empire_beats_best_individual(
                &payoffs,
                three,
                three,
                100,
                EmpireFooting::Peace
            ),
            Err(AnalyticsError::AverageOutOfRange { .. })
        ));
        assert!(matches!(
            threshold_empire_beats_best_individual(
                &payoffs,
                five,
                three,
                100,
                EmpireFooting::Peace
            ),
            Err(AnalyticsError::AverageOutOfRange { .. })
        ));
    }

    #[test]
    fn unequal_empires_worked_example() {
        let report = threshold_unequal_empires(
            &rational_standard(),
            Rational::new(5, 2),
            Rational::new(13, 5),
            20,
            100,
        )
        .unwrap();
        assert_eq!(report.alpha, Rational::new(1, 40));
        assert_eq!(report.member_coefficient, Rational::new(39, 41));
        assert_eq!(report.population_coefficient, Rational::new(1, 41));
        assert_eq!(report.exact, Rational::new(880, 41));
        assert_eq!(report.minimum, 22);
    }

    #[test]
    fn equal_empires_degenerate_to_pure_size() {
        let b = Rational::new(5, 2);
        let report =
            threshold_unequal_empires(&rational_standard(), b, b, 20, 100).unwrap();
        assert_eq!(report.alpha, Rational::from_integer(0));
        assert_eq!(report.exact, Rational::from_integer(20));
        assert_eq!(report.minimum, 21);
    }

    #[test]
    fn unequal_empires_rejects_out_of_range_payoffs() {
        let payoffs = rational_standard();
        let cases = [
            (Rational::new(13, 5), Rational::new(5, 2)), // reversed order
            (Rational::from_integer(1), Rational::new(5, 2)), // first at punishment
            (Rational::new(5, 2), Rational::from_integer(5)), // second at temptation
        ];
        for (first, second) in cases {
            assert!(matches!(
                threshold_unequal_empires(&payoffs, first, second, 20, 100),
                Err(AnalyticsError::DegradedPayoffsOutOfRange { .. })
            ));
        }
    }

    #[test]
    fn least_integer_above_is_strict() {
        assert_eq!(least_integer_above(Rational::new(5, 2)), 3);
        assert_eq!(least_integer_above(Rational::from_integer(2)), 3);
        assert_eq!(least_integer_above(Rational::new(-1, 2)), 0);
    }

    fn fixture_board() -> Scoreboard<i64> {
        Scoreboard::from_totals(vec![
            ("alpha".into(), "A".into(), 500, 4, 40),
            ("boss".into(), "B".into(), 450, 4, 40),
            ("gamma".into(), "C".into(), 400, 4, 40),
        ])
    }

    #[test]
    fn clone_scaling_boosts_the_boss_past_the_field() {
        let scaled =
            clone_scaling_estimate(&fixture_board(), &["boss"], 10, 20, &standard()).unwrap();
        assert_eq!(scaled.entry("boss").unwrap().score, 450 + 10 * 5 * 20);
        assert_eq!(scaled.entry("alpha").unwrap().score, 500 + 10 * 20);
        assert_eq!(scaled.ranking(), vec!["boss", "alpha", "gamma"]);
    }

    #[test]
    fn clone_scaling_with_no_clones_is_identity() {
        let base = fixture_board();
        let scaled = clone_scaling_estimate(&base, &["boss"], 0, 20, &standard()).unwrap();
        assert_eq!(scaled, base);
    }

    #[test]
    fn clone_scaling_rejects_unknown_bosses() {
        assert_eq!(
            clone_scaling_estimate(&fixture_board(), &["nobody"], 10, 20, &standard())
                .unwrap_err(),
            AnalyticsError::UnknownBoss("nobody".into())
        );
    }

    #[test]
    fn crosscheck_agrees_exactly_on_integer_scenarios() {
        let contexts = [
            ClaimContext::DemocraciesPeaceVersusWar { warring: 50 },
            ClaimContext::EmpireAmongPeacefulDemocracy { members: 20 },
            ClaimContext::EmpirePeaceVersusWar { members: 20 },
            ClaimContext::WarringDemocracyVersusEmpire { empire: 10, warring: 20 },
        ];
        for context in contexts {
            let s = GroupScenario::new(100, context, 50, standard()).unwrap();
            let report = crosscheck_formulas(&s).unwrap();
            assert!(!report.rows().is_empty());
            assert_eq!(report.max_relative_error(), 0.0, "context {context:?}");
        }
    }

    #[test]
    fn crosscheck_boundary_sizes_equalize_war_groups() {
        // A war democracy exactly twice the empire's size earns exactly the
        // war boss's payoff under the printed accounting.
        let s = GroupScenario::new(
            100,
            ClaimContext::WarringDemocracyVersusEmpire { empire: 10, warring: 20 },
            10,
            standard(),
        )
        .unwrap();
        let report = crosscheck_formulas(&s).unwrap();
        let value = |role: GroupRole| {
            report
                .rows()
                .iter()
                .find(|r| r.role == role)
                .map(|r| r.simulated_value)
                .unwrap()
        };
        assert_eq!(value(GroupRole::DemocracyWar), value(GroupRole::EmpireWar));
        assert!(!report.notes().is_empty());
    }

    #[test]
    fn crosscheck_memberless_empire_collapses_to_individuals() {
        let s = GroupScenario::new(
            100,
            ClaimContext::EmpireAmongPeacefulDemocracy { members: 0 },
            10,
            standard(),
        )
        .unwrap();
        let report = crosscheck_formulas(&s).unwrap();
        for row in report.rows() {
            assert_eq!(row.simulated_value, 300, "role {}", row.role);
            assert_eq!(row.relative_error, 0.0);
        }
    }

    #[test]
    fn crosscheck_rejects_oversized_scenarios() {
        let payoffs = standard();
        let big_n = GroupScenario::new(
            201,
            ClaimContext::EmpireAmongPeacefulDemocracy { members: 20 },
            10,
            payoffs,
        )
        .unwrap();
        assert!(matches!(
            crosscheck_formulas(&big_n),
            Err(AnalyticsError::ScenarioTooLarge { .. })
        ));
        let big_i = GroupScenario::new(
            100,
            ClaimContext::EmpireAmongPeacefulDemocracy { members: 20 },
            10_001,
            payoffs,
        )
        .unwrap();
        assert!(matches!(
            crosscheck_formulas(&big_i),
            Err(AnalyticsError::ScenarioTooLarge { .. })
        ));
    }

    #[test]
    fn crosscheck_csv_layout_is_stable() {
        let s = GroupScenario::new(
            100,
            ClaimContext::EmpireAmongPeacefulDemocracy { members: 20 },
            2,
            standard(),
        )
        .unwrap();
        let report = crosscheck_formulas(&s).unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("context,role,formula_value,simulated_value,relative_error")
        );
        assert_eq!(
            lines.next(),
            Some("empire-among-peaceful-democracy,M_DP,300,300,0")
        );
    }
}
