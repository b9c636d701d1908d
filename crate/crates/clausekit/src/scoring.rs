//! Span- and boundary-level evaluation: precision, recall and F-beta,
//! micro-averaged over a corpus.
//!
//! Counting is per sentence and purely additive, so corpus totals form a
//! commutative monoid under [`PartCounts::merge`] — any parallel
//! accumulation order gives the same totals. Division happens once, at
//! reporting time.

use crate::encoding::{BoundaryTag, ClauseSet, TaskPart};
use crate::error::{Error, Result};

/// Gold/predicted/correct tallies for one task part.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PartCounts {
    pub gold: u64,
    pub predicted: u64,
    pub correct: u64,
}

impl PartCounts {
    pub const ZERO: PartCounts = PartCounts {
        gold: 0,
        predicted: 0,
        correct: 0,
    };

    pub fn new(gold: u64, predicted: u64, correct: u64) -> PartCounts {
        debug_assert!(correct <= gold.min(predicted));
        PartCounts {
            gold,
            predicted,
            correct,
        }
    }

    /// Fieldwise sum; associative and commutative with [`PartCounts::ZERO`]
    /// as identity.
    pub fn merge(self, other: PartCounts) -> PartCounts {
        PartCounts {
            gold: self.gold + other.gold,
            predicted: self.predicted + other.predicted,
            correct: self.correct + other.correct,
        }
    }
}

impl std::ops::Add for PartCounts {
    type Output = PartCounts;

    fn add(self, other: PartCounts) -> PartCounts {
        self.merge(other)
    }
}

impl std::iter::Sum for PartCounts {
    fn sum<I: Iterator<Item = PartCounts>>(iter: I) -> PartCounts {
        iter.fold(PartCounts::ZERO, PartCounts::merge)
    }
}

/// F-beta of a precision/recall pair: `(β²+1)·P·R / (β²·P + R)`, and 0 when
/// the denominator is 0. Degree-1 homogeneous, so it works identically on
/// [0,1] ratios and on percentages.
pub fn f_measure(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let denominator = b2 * precision + recall;
    if denominator <= 0.0 {
        return 0.0;
    }
    (b2 + 1.0) * precision * recall / denominator
}

/// Precision, recall and F-beta as ratios in [0,1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score {
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
    pub beta: f64,
}

impl Score {
    /// Derives the ratios from raw counts: precision is correct/predicted
    /// (0 when nothing was predicted), recall is correct/gold (0 when there
    /// is no gold item).
    pub fn from_counts(counts: &PartCounts, beta: f64) -> Score {
        let ratio = |num: u64, den: u64| {
            if den == 0 {
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        let precision = ratio(counts.correct, counts.predicted);
        let recall = ratio(counts.correct, counts.gold);
        Score {
            precision,
            recall,
            f: f_measure(precision, recall, beta),
            beta,
        }
    }

    /// The text report: percentages and F rendered to two decimals,
    /// rounded half up.
    pub fn human_line(&self) -> String {
        format!(
            "precision: {}%; recall: {}%; F{}: {}",
            format_two_decimals(self.precision * 100.0),
            format_two_decimals(self.recall * 100.0),
            self.beta,
            format_two_decimals(self.f * 100.0),
        )
    }

    /// The machine-readable single-line form, ratios in [0,1].
    pub fn machine_line(&self, part: TaskPart, counts: &PartCounts) -> String {
        format!(
            "part={} gold={} pred={} correct={} p={:.6} r={:.6} f={:.6}",
            part.number(),
            counts.gold,
            counts.predicted,
            counts.correct,
            self.precision,
            self.recall,
            self.f,
        )
    }
}

/// Renders a non-negative value to two decimals, rounding halves up.
pub fn format_two_decimals(value: f64) -> String {
    let hundredths = (value * 100.0 + 0.5).floor();
    format!("{:.2}", hundredths / 100.0)
}

/// Counts marked tokens in aligned gold and predicted flag columns: a
/// predicted mark is correct iff the gold column marks the same token.
pub fn score_boundaries(
    gold: &[Vec<BoundaryTag>],
    predicted: &[Vec<BoundaryTag>],
) -> Result<PartCounts> {
    if gold.len() != predicted.len() {
        return Err(Error::Alignment {
            sentence: gold.len().min(predicted.len()),
            message: format!(
                "gold has {} sentences, prediction has {}",
                gold.len(),
                predicted.len()
            ),
        });
    }
    let mut totals = PartCounts::ZERO;
    for (i, (g, p)) in gold.iter().zip(predicted).enumerate() {
        if g.len() != p.len() {
            return Err(Error::Alignment {
                sentence: i,
                message: format!("gold has {} tokens, prediction has {}", g.len(), p.len()),
            });
        }
        let counts = PartCounts {
            gold: g.iter().filter(|t| t.is_mark()).count() as u64,
            predicted: p.iter().filter(|t| t.is_mark()).count() as u64,
            correct: g
                .iter()
                .zip(p)
                .filter(|(a, b)| a.is_mark() && b.is_mark())
                .count() as u64,
        };
        totals = totals.merge(counts);
    }
    Ok(totals)
}

/// Counts clause spans per sentence; correct is the size of the multiset
/// intersection of gold and predicted spans.
pub fn score_clauses(gold: &[ClauseSet], predicted: &[ClauseSet]) -> Result<PartCounts> {
    if gold.len() != predicted.len() {
        return Err(Error::Alignment {
            sentence: gold.len().min(predicted.len()),
            message: format!(
                "gold has {} sentences, prediction has {}",
                gold.len(),
                predicted.len()
            ),
        });
    }
    let mut totals = PartCounts::ZERO;
    for (g, p) in gold.iter().zip(predicted) {
        totals = totals.merge(PartCounts {
            gold: g.len() as u64,
            predicted: p.len() as u64,
            correct: g.intersection_size(p) as u64,
        });
    }
    Ok(totals)
}
