//! Depth-bounded answers.

use serde::{Deserialize, Serialize};

use crate::vector::{BasisIndex, LaneId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    True,
    False,
    Undecided,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Undecided => "undecided",
        }
    }
}

/// Evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A power `n` with `<V^n x, x> != 0`.
    Exponent { n: i64 },
    /// Powers `(n, m)` with `<V^n x, V^m x> != 0`.
    ExponentPair { n: i64, m: i64 },
    /// A basis vector on which two operators disagree.
    Index { index: BasisIndex },
    /// A reducing subspace spanned by whole lanes.
    Lanes { lanes: Vec<LaneId> },
    /// A named computed subspace.
    Subspace { name: String, dim: usize },
    /// Free-form obstruction.
    Note { text: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub horizon: usize,
    pub exact: bool,
}

impl Certificate {
    pub fn holds(horizon: usize, exact: bool) -> Self {
        Certificate { verdict: Verdict::True, witness: None, horizon, exact }
    }

    pub fn fails(witness: Witness, horizon: usize, exact: bool) -> Self {
        Certificate { verdict: Verdict::False, witness: Some(witness), horizon, exact }
    }

    pub fn undecided(horizon: usize) -> Self {
        Certificate { verdict: Verdict::Undecided, witness: None, horizon, exact: false }
    }

    pub fn is_true(&self) -> bool {
        self.verdict == Verdict::True
    }

    pub fn is_false(&self) -> bool {
        self.verdict == Verdict::False
    }

    /// Checks `false => witness` and `exact => decided`.
    pub fn is_well_formed(&self) -> bool {
        (self.verdict != Verdict::False || self.witness.is_some())
            && (!self.exact || self.verdict != Verdict::Undecided)
    }
}
