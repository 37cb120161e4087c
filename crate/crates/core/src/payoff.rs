//! Payoff matrix and per-turn scoring.

use crate::moves::Move;
use crate::num::Scalar;

/// The four payoff values of a prisoner's dilemma, validated on construction.
///
/// Required orderings: `sucker < punishment < reward < temptation` and
/// `2·reward > temptation + sucker` (mutual cooperation beats alternating
/// exploitation over any even number of turns).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffMatrix<T> {
    sucker: T,
    punishment: T,
    reward: T,
    temptation: T,
}

/// Violations of the payoff-matrix orderings.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PayoffError {
    #[error("payoff ordering violated: requires sucker < punishment < reward < temptation")]
    NotOrdered,
    #[error("payoff dominance violated: requires 2*reward > temptation + sucker")]
    WeakDominance,
}

impl<T: Scalar> PayoffMatrix<T> {
    /// Builds a matrix after checking both orderings.
    pub fn new(sucker: T, punishment: T, reward: T, temptation: T) -> Result<Self, PayoffError> {
        if !(sucker < punishment && punishment < reward && reward < temptation) {
            return Err(PayoffError::NotOrdered);
        }
        if reward + reward <= temptation + sucker {
            return Err(PayoffError::WeakDominance);
        }
        Ok(Self { sucker, punishment, reward, temptation })
    }

    /// The conventional values 0, 1, 3, 5.
    pub fn standard() -> Self {
        Self::new(
            T::zero(),
            T::one(),
            T::from_count(3),
            T::from_count(5),
        )
        .expect("standard values satisfy the orderings")
    }

    /// Payoff when both players cooperate.
    pub fn reward(&self) -> T {
        self.reward
    }

    /// Payoff when both players defect.
    pub fn punishment(&self) -> T {
        self.punishment
    }

    /// Payoff for defecting against a cooperator.
    pub fn temptation(&self) -> T {
        self.temptation
    }

    /// Payoff for cooperating against a defector.
    pub fn sucker(&self) -> T {
        self.sucker
    }

    /// Score for `mine` played against `theirs`.
    pub fn payoff(&self, mine: Move, theirs: Move) -> T {
        match (mine, theirs) {
            (Move::Cooperate, Move::Cooperate) => self.reward,
            (Move::Cooperate, Move::Defect) => self.sucker,
            (Move::Defect, Move::Cooperate) => self.temptation,
            (Move::Defect, Move::Defect) => self.punishment,
        }
    }

    /// Both players' scores for one turn, `(a, b)`.
    pub fn pair_payoffs(&self, a: Move, b: Move) -> (T, T) {
        (self.payoff(a, b), self.payoff(b, a))
    }

    /// Reinterprets the values in another scalar type.
    pub fn map<U: Scalar>(&self, mut f: impl FnMut(T) -> U) -> Result<PayoffMatrix<U>, PayoffError> {
        PayoffMatrix::new(
            f(self.sucker),
            f(self.punishment),
            f(self.reward),
            f(self.temptation),
        )
    }
}

impl<T: Scalar> Default for PayoffMatrix<T> {
    fn default() -> Self {
        Self::standard()
    }
}
