//! Verus source modeling: region annotation, semantic blocks, and proof-hole
//! masking.
//!
//! A Verus program mixes executable Rust code, specifications (`requires`,
//! `ensures`, spec functions), and proof hints (loop invariants, assertions,
//! `proof { }` blocks, lemma functions). This module locates those pieces
//! with a token-level scanner, groups the proof hints into semantic blocks,
//! and supports deleting blocks ("digging proof holes") and splicing
//! candidate completions back in.
//!
//! The scanner is deliberately lexical: it matches Verus keywords under
//! brace/paren tracking instead of parsing a full grammar, so it survives
//! programs the verifier itself would reject. Only span boundaries are
//! needed downstream.

mod blocks;
mod mask;
mod scan;

pub use blocks::{segment_blocks, BlockId, BlockKind, SemanticBlock};
pub use mask::{
    normalize_whitespace, parse_completion_sections, remove_blocks, splice_completion, Hole,
    MaskError, MaskedProgram, SpliceError,
};
pub use scan::{annotate_regions, ScanError};

use serde::{Deserialize, Serialize};

/// Classification of a source region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionKind {
    /// Executable Rust code (anything not claimed by another kind).
    ExecCode,
    /// Specification text: `requires`/`ensures`/`decreases` clauses and
    /// `spec fn` items.
    Spec,
    /// One `invariant` clause group of a loop header.
    Invariant,
    /// One `assert`/`assume` statement, including any `by { .. }` body.
    Assertion,
    /// A `proof { .. }` block.
    ProofBlock,
    /// A `proof fn` item, signature and body.
    LemmaFn,
}

impl RegionKind {
    /// Proof hints are the removable kinds.
    pub fn is_proof_hint(self) -> bool {
        matches!(
            self,
            RegionKind::Invariant | RegionKind::Assertion | RegionKind::ProofBlock | RegionKind::LemmaFn
        )
    }
}

/// Byte and line extent of a region. Byte range is `[start, end)`; lines are
/// 1-based and inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line_start: usize,
    pub line_end: usize,
}

/// One annotated region of a program.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub kind: RegionKind,
    pub span: Span,
    /// Identifies the owning loop for `Invariant` regions.
    pub owner: Option<usize>,
}

/// A Verus source file with its regions annotated.
#[derive(Debug, Clone)]
pub struct VerusProgram {
    source: String,
    regions: Vec<Region>,
    line_starts: Vec<usize>,
    /// 1-indexed; true when the line carries a token outside every region
    /// above `ExecCode`, i.e. the line separates assertion runs.
    separator_lines: Vec<bool>,
}

impl VerusProgram {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn regions_of(&self, kind: RegionKind) -> impl Iterator<Item = &Region> {
        self.regions.iter().filter(move |r| r.kind == kind)
    }

    pub fn line_count(&self) -> usize {
        self.line_starts.len()
    }

    /// Text of a 1-based line without its newline.
    pub fn line_text(&self, line: usize) -> &str {
        let start = self.line_starts[line - 1];
        let end = self
            .line_starts
            .get(line)
            .map_or(self.source.len(), |next| *next);
        self.source[start..end].trim_end_matches(['\n', '\r'])
    }

    pub fn span_text(&self, span: &Span) -> &str {
        &self.source[span.start..span.end]
    }

    /// Whether a line contains executable content that separates assertion
    /// runs (blank and comment-only lines do not).
    pub fn is_separator_line(&self, line: usize) -> bool {
        self.separator_lines.get(line).copied().unwrap_or(false)
    }

    pub(crate) fn from_parts(
        source: String,
        regions: Vec<Region>,
        line_starts: Vec<usize>,
        separator_lines: Vec<bool>,
    ) -> Self {
        debug_assert!(regions.windows(2).all(|w| w[0].span.start <= w[1].span.start));
        VerusProgram { source, regions, line_starts, separator_lines }
    }

    pub(crate) fn line_starts(&self) -> &[usize] {
        &self.line_starts
    }
}
