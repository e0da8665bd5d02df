//! Z3 proof-trace parsing, rule classification, and segment extraction.

mod parse;
mod rules;
mod segment;
mod stats;

pub use parse::{
    parse_proof, DocumentError, NodeId, ParseError, ParseErrorKind, ProofDocument, ProofNode,
};
pub use rules::{
    categorize_rule, classify_rule, classify_rule_lenient, rule_info, RuleCategory, RuleInfo,
    RuleLevel, UnknownRule, RULE_TABLE,
};
pub use segment::{aggregate_segments, dependency_subtree, AggregatedSegments, NodeNotFound, ProofSegment};
pub use stats::{proof_stats, ProofStats};
