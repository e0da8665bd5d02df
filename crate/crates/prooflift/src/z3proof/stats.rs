//! Proof composition statistics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::parse::ProofDocument;
use super::rules::{classify_rule_lenient, RuleLevel};

/// Per-level node counts and shares for one parsed trace.
///
/// Shares are fractions in `[0, 1]` and sum to 1 whenever the document is
/// non-empty. Rules outside the 36-rule table are counted as low-level so
/// statistics never fail on format drift; they still appear by name in
/// `rule_counts`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofStats {
    pub node_count: usize,
    pub high_count: usize,
    pub medium_count: usize,
    pub low_count: usize,
    pub high_share: f64,
    pub medium_share: f64,
    pub low_share: f64,
    pub rule_counts: BTreeMap<String, usize>,
    pub trace_line_count: usize,
}

impl ProofStats {
    pub fn level_count(&self, level: RuleLevel) -> usize {
        match level {
            RuleLevel::High => self.high_count,
            RuleLevel::Medium => self.medium_count,
            RuleLevel::Low => self.low_count,
        }
    }

    pub fn level_share(&self, level: RuleLevel) -> f64 {
        match level {
            RuleLevel::High => self.high_share,
            RuleLevel::Medium => self.medium_share,
            RuleLevel::Low => self.low_share,
        }
    }
}

/// Computes per-level composition of `doc`, with `trace_text` supplying the
/// physical line count of the trace it was parsed from.
pub fn proof_stats(doc: &ProofDocument, trace_text: &str) -> ProofStats {
    let mut rule_counts: BTreeMap<String, usize> = BTreeMap::new();
    let (mut high, mut medium, mut low) = (0usize, 0usize, 0usize);
    for node in doc.nodes() {
        *rule_counts.entry(node.rule.clone()).or_default() += 1;
        match classify_rule_lenient(&node.rule) {
            RuleLevel::High => high += 1,
            RuleLevel::Medium => medium += 1,
            RuleLevel::Low => low += 1,
        }
    }
    let total = doc.len();
    let share = |count: usize| if total == 0 { 0.0 } else { count as f64 / total as f64 };
    ProofStats {
        node_count: total,
        high_count: high,
        medium_count: medium,
        low_count: low,
        high_share: share(high),
        medium_share: share(medium),
        low_share: share(low),
        rule_counts,
        trace_line_count: trace_text.lines().count(),
    }
}
