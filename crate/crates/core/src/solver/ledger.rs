use std::fmt;

use crate::cost::Cost;
use crate::graph::NodeSet;

/// Which part of the run produced a dual variable: the cut-covering
/// phases (two-sets, strongly connected and Edmonds sets) or the greedy
/// set-cover phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    B,
    T,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::B => "B",
            Family::T => "T",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    pub set: NodeSet,
    pub value: Cost,
    pub family: Family,
}

/// Positive dual assignments `y_S` accumulated over a run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualLedger {
    pub entries: Vec<LedgerEntry>,
    pub objective: Cost,
    /// Final tree cost not attributed to the greedy phase.
    pub c1_total: Cost,
    /// Greedy-phase share of the final tree cost, measured in the reduced
    /// costs the greedy phase priced against.
    pub c2_total: Cost,
}

impl DualLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a positive entry. Zero values are dropped.
    pub fn push(&mut self, set: NodeSet, value: Cost, family: Family) {
        if value.is_zero() {
            return;
        }
        self.objective += &value;
        self.entries.push(LedgerEntry { set, value, family });
    }

    pub fn family_total(&self, family: Family) -> Cost {
        self.entries
            .iter()
            .filter(|e| e.family == family)
            .map(|e| &e.value)
            .sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
