//! Shared test oracles, written independently of the library internals.

use dilemma::Move;

const DEADLOCK_THRESHOLD: i32 = 3;
const RANDOMNESS_THRESHOLD: i32 = 8;

/// Independent reference implementation of the forgiveness strategy, kept as
/// a one-to-one transcription of its original imperative form (explicit
/// mutable fields, one update block per concern) so that it shares no
/// structure with the library's implementation. Used for differential
/// testing only.
pub struct ReferenceForgiveness {
    deadlock_counter: i32,
    randomness_measure: i32,
    opponents_previous_move: Move,
    my_previous_move: Move,
}

impl Default for ReferenceForgiveness {
    fn default() -> Self {
        let mut oracle = ReferenceForgiveness {
            deadlock_counter: 0,
            randomness_measure: 0,
            opponents_previous_move: Move::Cooperate,
            my_previous_move: Move::Cooperate,
        };
        oracle.reset();
        oracle
    }
}

impl ReferenceForgiveness {
    pub fn reset(&mut self) {
        self.deadlock_counter = 0;
        self.randomness_measure = 0;
        self.opponents_previous_move = Move::Cooperate;
        self.my_previous_move = Move::Cooperate;
    }

    pub fn get_move(&mut self, opponent_move: Move) -> Move {
        let my_reply;
        if self.deadlock_counter >= DEADLOCK_THRESHOLD {
            my_reply = Move::Cooperate;

            if self.deadlock_counter == DEADLOCK_THRESHOLD {
                self.deadlock_counter = DEADLOCK_THRESHOLD + 1;
            } else {
                self.deadlock_counter = 0;
            }
        } else {
            if opponent_move == Move::Cooperate
                && self.opponents_previous_move == Move::Cooperate
            {
                self.randomness_measure -= 1;
            }
            if opponent_move != self.opponents_previous_move {
                self.randomness_measure += 1;
            }
            if opponent_move != self.my_previous_move {
                self.randomness_measure += 1;
            }

            if self.randomness_measure >= RANDOMNESS_THRESHOLD {
                my_reply = Move::Defect;
            } else {
                my_reply = opponent_move;

                if opponent_move != self.opponents_previous_move {
                    self.deadlock_counter += 1;
                } else {
                    self.deadlock_counter = 0;
                }
            }
        }
        self.opponents_previous_move = opponent_move;
        self.my_previous_move = my_reply;
        my_reply
    }
}
