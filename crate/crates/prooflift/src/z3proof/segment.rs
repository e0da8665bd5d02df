//! Dependency subtrees and per-category segment aggregation.
//!
//! A proof node's subtree contains every step required to derive it. Checker
//! agents consume all subtrees of one rule category in a single batch, so
//! shared steps appear exactly once.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::parse::{NodeId, ProofDocument};
use super::rules::{categorize_rule, RuleCategory};

/// The full dependency subtree of one anchor node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofSegment {
    pub anchor: NodeId,
    /// All nodes reachable from `anchor` via premise edges, anchor included,
    /// in trace order with no duplicates.
    pub members: Vec<NodeId>,
}

/// The deduplicated union of every segment of one rule category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregatedSegments {
    pub category: RuleCategory,
    /// Anchors in trace order.
    pub anchors: Vec<NodeId>,
    /// Union of the anchors' subtrees, deduplicated, in trace order.
    pub members: Vec<NodeId>,
}

impl AggregatedSegments {
    pub fn is_empty(&self) -> bool {
        self.anchors.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("node {0} not found in proof document")]
pub struct NodeNotFound(pub NodeId);

/// Computes the transitive premise closure of `anchor`, anchor included.
pub fn dependency_subtree(
    doc: &ProofDocument,
    anchor: NodeId,
) -> Result<ProofSegment, NodeNotFound> {
    if doc.node(anchor).is_none() {
        return Err(NodeNotFound(anchor));
    }
    let mut seen = vec![false; doc.len()];
    let mut stack = vec![anchor];
    seen[anchor.0] = true;
    while let Some(id) = stack.pop() {
        for premise in &doc.node(id).expect("validated id").premises {
            if !seen[premise.0] {
                seen[premise.0] = true;
                stack.push(*premise);
            }
        }
    }
    let members = (0..doc.len()).filter(|i| seen[*i]).map(NodeId).collect();
    Ok(ProofSegment { anchor, members })
}

/// Collects every node of `category` as an anchor and unions their subtrees.
/// A category with no matching nodes yields empty anchors and members.
pub fn aggregate_segments(doc: &ProofDocument, category: RuleCategory) -> AggregatedSegments {
    let anchors: Vec<NodeId> = doc
        .nodes()
        .iter()
        .filter(|node| categorize_rule(&node.rule) == Some(category))
        .map(|node| node.id)
        .collect();
    let mut seen = vec![false; doc.len()];
    for anchor in &anchors {
        let segment = dependency_subtree(doc, *anchor).expect("anchor comes from doc");
        for member in segment.members {
            seen[member.0] = true;
        }
    }
    let members = (0..doc.len()).filter(|i| seen[*i]).map(NodeId).collect();
    AggregatedSegments { category, anchors, members }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::z3proof::parse::ProofNode;
    use std::collections::BTreeSet;

    fn doc_from_edges(n: usize, edges: &[(usize, usize)], rules: &[&str]) -> ProofDocument {
        // edge (a, b) means b depends on a
        let nodes = (0..n)
            .map(|id| ProofNode {
                id: NodeId(id),
                rule: rules.get(id).copied().unwrap_or("refl").to_string(),
                premises: edges
                    .iter()
                    .filter(|(_, dependent)| *dependent == id)
                    .map(|(premise, _)| NodeId(*premise))
                    .collect(),
                conclusion: format!("(c{id})"),
                source_line: id + 1,
            })
            .collect();
        ProofDocument::from_nodes(nodes).unwrap()
    }

    /// Brute-force reachability: repeatedly expand the member set until it
    /// stops growing. Intentionally independent of the DFS implementation.
    fn reachability_oracle(doc: &ProofDocument, anchor: NodeId) -> BTreeSet<NodeId> {
        let mut members: BTreeSet<NodeId> = BTreeSet::from([anchor]);
        loop {
            let mut grew = false;
            for id in members.clone() {
                for premise in &doc.node(id).unwrap().premises {
                    grew |= members.insert(*premise);
                }
            }
            if !grew {
                return members;
            }
        }
    }

    #[test]
    fn chain_subtree() {
        // C depends on B depends on A
        let doc = doc_from_edges(3, &[(0, 1), (1, 2)], &["asserted", "rewrite", "mp"]);
        let segment = dependency_subtree(&doc, NodeId(2)).unwrap();
        assert_eq!(segment.members, vec![NodeId(0), NodeId(1), NodeId(2)]);
    }

    #[test]
    fn diamond_counts_shared_node_once() {
        // A <- B, A <- C, {B, C} <- D; hand enumeration gives {A,B,C,D}.
        let doc = doc_from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], &[]);
        let segment = dependency_subtree(&doc, NodeId(3)).unwrap();
        assert_eq!(segment.members, vec![NodeId(0), NodeId(1), NodeId(2), NodeId(3)]);
        let unique: BTreeSet<_> = segment.members.iter().collect();
        assert_eq!(unique.len(), segment.members.len());
    }

    #[test]
    fn leaf_subtree_is_itself() {
        let doc = doc_from_edges(2, &[], &[]);
        let segment = dependency_subtree(&doc, NodeId(1)).unwrap();
        assert_eq!(segment.members, vec![NodeId(1)]);
    }

    #[test]
    fn missing_anchor() {
        let doc = doc_from_edges(1, &[], &[]);
        assert_eq!(dependency_subtree(&doc, NodeId(7)), Err(NodeNotFound(NodeId(7))));
    }

    #[test]
    fn aggregate_dedups_dependent_lemmas() {
        // lemma1 at 1, lemma2 at 3 depending on lemma1 through node 2.
        let doc = doc_from_edges(
            4,
            &[(0, 1), (1, 2), (2, 3)],
            &["hypothesis", "lemma", "rewrite", "lemma"],
        );
        let agg = aggregate_segments(&doc, RuleCategory::Lemma);
        assert_eq!(agg.anchors, vec![NodeId(1), NodeId(3)]);
        assert_eq!(agg.members, vec![NodeId(0), NodeId(1), NodeId(2), NodeId(3)]);
    }

    #[test]
    fn aggregate_absent_category_is_empty() {
        let doc = doc_from_edges(2, &[(0, 1)], &["asserted", "rewrite"]);
        let agg = aggregate_segments(&doc, RuleCategory::Quantifier);
        assert!(agg.anchors.is_empty());
        assert!(agg.members.is_empty());
    }

    #[test]
    fn aggregate_matches_per_anchor_oracle() {
        let doc = doc_from_edges(
            6,
            &[(0, 2), (1, 2), (2, 3), (1, 4), (4, 5)],
            &["asserted", "asserted", "mp", "unit-resolution", "mp~", "unit-resolution"],
        );
        let agg = aggregate_segments(&doc, RuleCategory::UnitResolution);
        let mut expected = BTreeSet::new();
        for anchor in &agg.anchors {
            expected.extend(reachability_oracle(&doc, *anchor));
        }
        assert_eq!(agg.members, expected.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn aggregation_is_idempotent() {
        let doc = doc_from_edges(5, &[(0, 1), (1, 2), (0, 3), (3, 4)], &["asserted", "mp", "lemma", "mp", "lemma"]);
        let first = aggregate_segments(&doc, RuleCategory::Lemma);
        let second = aggregate_segments(&doc, RuleCategory::Lemma);
        assert_eq!(first, second);
        let unique: BTreeSet<_> = first.members.iter().collect();
        assert_eq!(unique.len(), first.members.len());
    }
}
