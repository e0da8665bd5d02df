//! Parser for Z3 proof traces.
//!
//! The accepted grammar is the S-expression form Z3 prints when proof
//! generation is enabled: nested `let` bindings introduce shared terms
//! (`$xN`) and shared proof steps (`@xN`), and a rule application is
//! `(rule premise* conclusion)`. Parameterized rule heads such as
//! `((_ th-lemma arith farkas 1 1) ...)` are accepted; the parameters are
//! dropped and the rule name kept.
//!
//! Shared terms are never inlined: a conclusion that references `$xN` stores
//! the reference and the document resolves it on demand. Large traces stay
//! proportional to their source text instead of exploding exponentially.

use std::borrow::Cow;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of a proof node inside its document. Ids are assigned in premise
/// order, so `premises[i] < id` holds for every node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// One rule application in the proof DAG.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofNode {
    pub id: NodeId,
    pub rule: String,
    pub premises: Vec<NodeId>,
    /// Conclusion term text. May be a bare `$xN` reference; use
    /// [`ProofDocument::conclusion_text`] to resolve it.
    pub conclusion: String,
    /// 1-based line of the rule name in the trace.
    pub source_line: usize,
}

/// A parsed Z3 proof trace: a DAG of rule applications plus the shared-term
/// and shared-step binding tables.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ProofDocument {
    nodes: Vec<ProofNode>,
    step_bindings: BTreeMap<String, NodeId>,
    term_bindings: BTreeMap<String, String>,
    roots: Vec<NodeId>,
}

impl ProofDocument {
    /// Validates and assembles a document from pre-built nodes. Node ids must
    /// equal their position and all premise references must resolve to an
    /// existing node without forming a cycle.
    pub fn from_nodes(nodes: Vec<ProofNode>) -> Result<Self, DocumentError> {
        for (idx, node) in nodes.iter().enumerate() {
            if node.id.0 != idx {
                return Err(DocumentError::NonSequentialId { expected: idx, found: node.id });
            }
            if node.rule.is_empty() {
                return Err(DocumentError::EmptyRule { node: node.id });
            }
            for premise in &node.premises {
                if premise.0 >= nodes.len() {
                    return Err(DocumentError::DanglingPremise { node: node.id, premise: *premise });
                }
            }
        }
        if let Some(cycle_node) = find_cycle(&nodes) {
            return Err(DocumentError::Cycle { node: cycle_node });
        }
        let roots = compute_roots(&nodes);
        Ok(ProofDocument {
            nodes,
            step_bindings: BTreeMap::new(),
            term_bindings: BTreeMap::new(),
            roots,
        })
    }

    pub fn nodes(&self) -> &[ProofNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Option<&ProofNode> {
        self.nodes.get(id.0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Node ids that no other node depends on.
    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    /// Resolves a `@xN` proof-step binding.
    pub fn step_binding(&self, name: &str) -> Option<NodeId> {
        self.step_bindings.get(name).copied()
    }

    /// Resolves a `$xN` shared-term binding to its term text.
    pub fn resolve_term(&self, name: &str) -> Option<&str> {
        self.term_bindings.get(name).map(String::as_str)
    }

    /// Conclusion text of a node with a bare `$xN` reference expanded one
    /// level. Nested references inside larger terms are left as-is.
    pub fn conclusion_text(&self, id: NodeId) -> Option<Cow<'_, str>> {
        let node = self.node(id)?;
        match self.resolve_term(&node.conclusion) {
            Some(term) => Some(Cow::Borrowed(term)),
            None => Some(Cow::Borrowed(node.conclusion.as_str())),
        }
    }

    /// A topological order of the premise DAG (premises before dependents).
    /// Ids are assigned in premise order at construction, so the identity
    /// order qualifies.
    pub fn topological_order(&self) -> Vec<NodeId> {
        let mut order: Vec<NodeId> = Vec::with_capacity(self.nodes.len());
        let mut visited = vec![false; self.nodes.len()];
        let mut stack: Vec<(NodeId, usize)> = Vec::new();
        for start in 0..self.nodes.len() {
            if visited[start] {
                continue;
            }
            stack.push((NodeId(start), 0));
            visited[start] = true;
            while let Some((id, next_child)) = stack.pop() {
                let premises = &self.nodes[id.0].premises;
                if next_child < premises.len() {
                    stack.push((id, next_child + 1));
                    let child = premises[next_child];
                    if !visited[child.0] {
                        visited[child.0] = true;
                        stack.push((child, 0));
                    }
                } else {
                    order.push(id);
                }
            }
        }
        order
    }

    fn insert_step_binding(&mut self, name: String, id: NodeId, line: usize) -> Result<(), ParseError> {
        if self.term_bindings.contains_key(&name) || self.step_bindings.contains_key(&name) {
            return Err(ParseError::new(line, ParseErrorKind::DuplicateBinding(name)));
        }
        self.step_bindings.insert(name, id);
        Ok(())
    }

    fn insert_term_binding(&mut self, name: String, text: String, line: usize) -> Result<(), ParseError> {
        if self.term_bindings.contains_key(&name) || self.step_bindings.contains_key(&name) {
            return Err(ParseError::new(line, ParseErrorKind::DuplicateBinding(name)));
        }
        self.term_bindings.insert(name, text);
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("node id {found} at position {expected} is out of sequence")]
    NonSequentialId { expected: usize, found: NodeId },
    #[error("node {node} has an empty rule name")]
    EmptyRule { node: NodeId },
    #[error("node {node} references missing premise {premise}")]
    DanglingPremise { node: NodeId, premise: NodeId },
    #[error("premise graph contains a cycle through {node}")]
    Cycle { node: NodeId },
}

/// Parse failure with the 1-based source line where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(line: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty input: no proof forms found")]
    EmptyInput,
    #[error("unbalanced parentheses: unexpected end of input")]
    UnbalancedOpen,
    #[error("unbalanced parentheses: unexpected `)`")]
    UnbalancedClose,
    #[error("unknown binding reference `{0}`")]
    UnknownBinding(String),
    #[error("duplicate binding `{0}`")]
    DuplicateBinding(String),
    #[error("malformed proof form: {0}")]
    Malformed(String),
}

/// Parses a proof trace into a [`ProofDocument`].
pub fn parse_proof(trace_text: &str) -> Result<ProofDocument, ParseError> {
    let forms = read_sexprs(trace_text)?;
    if forms.is_empty() {
        return Err(ParseError::new(1, ParseErrorKind::EmptyInput));
    }
    let mut builder = Builder { doc: ProofDocument::default(), source: trace_text };
    for form in &forms {
        builder.eval_proof(form)?;
    }
    builder.doc.roots = compute_roots(&builder.doc.nodes);
    debug_assert!(find_cycle(&builder.doc.nodes).is_none());
    Ok(builder.doc)
}

// ---------------------------------------------------------------------------
// S-expression reader
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum SExpr {
    Atom { text: String, line: usize },
    List { items: Vec<SExpr>, line: usize, span: (usize, usize) },
}

impl SExpr {
    fn line(&self) -> usize {
        match self {
            SExpr::Atom { line, .. } | SExpr::List { line, .. } => *line,
        }
    }

    fn atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom { text, .. } => Some(text),
            SExpr::List { .. } => None,
        }
    }
}

/// Reads every top-level S-expression. `;` starts a line comment. Atoms are
/// maximal runs outside whitespace, parens, and comments; `|...|` quoted
/// symbols and `"..."` strings are kept intact.
fn read_sexprs(input: &str) -> Result<Vec<SExpr>, ParseError> {
    let bytes = input.as_bytes();
    let mut pos = 0usize;
    let mut line = 1usize;
    let mut stack: Vec<(Vec<SExpr>, usize, usize)> = Vec::new();
    let mut top: Vec<SExpr> = Vec::new();

    macro_rules! push_expr {
        ($expr:expr) => {
            match stack.last_mut() {
                Some((items, _, _)) => items.push($expr),
                None => top.push($expr),
            }
        };
    }

    while pos < bytes.len() {
        let b = bytes[pos];
        match b {
            b'\n' => {
                line += 1;
                pos += 1;
            }
            b' ' | b'\t' | b'\r' => pos += 1,
            b';' => {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            }
            b'(' => {
                stack.push((Vec::new(), line, pos));
                pos += 1;
            }
            b')' => {
                let Some((items, open_line, start)) = stack.pop() else {
                    return Err(ParseError::new(line, ParseErrorKind::UnbalancedClose));
                };
                pos += 1;
                push_expr!(SExpr::List { items, line: open_line, span: (start, pos) });
            }
            b'"' | b'|' => {
                let quote = b;
                let start = pos;
                let start_line = line;
                pos += 1;
                while pos < bytes.len() && bytes[pos] != quote {
                    if bytes[pos] == b'\n' {
                        line += 1;
                    }
                    if quote == b'"' && bytes[pos] == b'\\' && pos + 1 < bytes.len() {
                        pos += 1;
                    }
                    pos += 1;
                }
                if pos >= bytes.len() {
                    return Err(ParseError::new(start_line, ParseErrorKind::UnbalancedOpen));
                }
                pos += 1;
                push_expr!(SExpr::Atom { text: input[start..pos].to_string(), line: start_line });
            }
            _ => {
                let start = pos;
                while pos < bytes.len() && !b"() \t\r\n;\"".contains(&bytes[pos]) {
                    pos += 1;
                }
                push_expr!(SExpr::Atom { text: input[start..pos].to_string(), line });
            }
        }
    }
    if let Some((_, open_line, _)) = stack.last() {
        return Err(ParseError::new(*open_line, ParseErrorKind::UnbalancedOpen));
    }
    Ok(top)
}

// ---------------------------------------------------------------------------
// Proof reader
// ---------------------------------------------------------------------------

struct Builder<'a> {
    doc: ProofDocument,
    source: &'a str,
}

impl Builder<'_> {
    /// Evaluates an expression in proof position, returning its node id.
    fn eval_proof(&mut self, expr: &SExpr) -> Result<NodeId, ParseError> {
        match expr {
            SExpr::Atom { text, line } => {
                if text.starts_with('@') {
                    self.doc.step_binding(text).ok_or_else(|| {
                        ParseError::new(*line, ParseErrorKind::UnknownBinding(text.clone()))
                    })
                } else {
                    Err(ParseError::new(
                        *line,
                        ParseErrorKind::Malformed(format!(
                            "expected a proof application or `@x` reference, found `{text}`"
                        )),
                    ))
                }
            }
            SExpr::List { items, line, .. } => {
                let Some(head) = items.first() else {
                    return Err(ParseError::new(
                        *line,
                        ParseErrorKind::Malformed("empty application `()`".into()),
                    ));
                };
                match head.atom() {
                    Some("let") => self.eval_let(items, *line),
                    _ => self.eval_application(items, *line),
                }
            }
        }
    }

    /// `(let ((name expr) ...) body)` — `$` names bind terms, `@` names bind
    /// proof steps; the let evaluates to its body.
    fn eval_let(&mut self, items: &[SExpr], line: usize) -> Result<NodeId, ParseError> {
        if items.len() < 3 {
            return Err(ParseError::new(
                line,
                ParseErrorKind::Malformed("`let` needs a binding list and a body".into()),
            ));
        }
        let SExpr::List { items: bindings, .. } = &items[1] else {
            return Err(ParseError::new(
                items[1].line(),
                ParseErrorKind::Malformed("`let` binding list must be parenthesized".into()),
            ));
        };
        for binding in bindings {
            let SExpr::List { items: pair, line: bline, .. } = binding else {
                return Err(ParseError::new(
                    binding.line(),
                    ParseErrorKind::Malformed("`let` binding must be a (name expr) pair".into()),
                ));
            };
            let (Some(name), Some(value)) = (pair.first().and_then(SExpr::atom), pair.get(1))
            else {
                return Err(ParseError::new(
                    *bline,
                    ParseErrorKind::Malformed("`let` binding must be a (name expr) pair".into()),
                ));
            };
            if pair.len() != 2 {
                return Err(ParseError::new(
                    *bline,
                    ParseErrorKind::Malformed(format!("binding `{name}` has extra forms")),
                ));
            }
            if name.starts_with('$') {
                let text = self.term_text(value)?;
                self.doc.insert_term_binding(name.to_string(), text, *bline)?;
            } else if name.starts_with('@') {
                let id = self.eval_proof(value)?;
                self.doc.insert_step_binding(name.to_string(), id, *bline)?;
            } else {
                // Plain SMT-LIB term bindings occur in mixed output; keep them
                // in the term table so references still resolve.
                let text = self.term_text(value)?;
                self.doc.insert_term_binding(name.to_string(), text, *bline)?;
            }
        }
        // Multi-form bodies evaluate in sequence; the last one is the value.
        let mut last = None;
        for body in &items[2..] {
            last = Some(self.eval_proof(body)?);
        }
        Ok(last.expect("non-empty body"))
    }

    /// `(rule premise* conclusion)`; the head may be `(_ rule params...)`.
    fn eval_application(&mut self, items: &[SExpr], line: usize) -> Result<NodeId, ParseError> {
        let (rule, rule_line) = match &items[0] {
            SExpr::Atom { text, line } => (text.clone(), *line),
            SExpr::List { items: head_items, line, .. } => {
                let parameterized = head_items.first().and_then(SExpr::atom) == Some("_");
                let name = head_items.get(1).and_then(SExpr::atom);
                match (parameterized, name) {
                    (true, Some(name)) => (name.to_string(), *line),
                    _ => {
                        return Err(ParseError::new(
                            *line,
                            ParseErrorKind::Malformed(
                                "application head must be a rule name or `(_ rule params...)`"
                                    .into(),
                            ),
                        ))
                    }
                }
            }
        };
        if items.len() < 2 {
            return Err(ParseError::new(
                line,
                ParseErrorKind::Malformed(format!("rule `{rule}` has no conclusion")),
            ));
        }
        let mut premises = Vec::with_capacity(items.len() - 2);
        for premise in &items[1..items.len() - 1] {
            premises.push(self.eval_proof(premise)?);
        }
        let conclusion = self.term_text(&items[items.len() - 1])?;
        let id = NodeId(self.doc.nodes.len());
        self.doc.nodes.push(ProofNode { id, rule, premises, conclusion, source_line: rule_line });
        Ok(id)
    }

    /// Renders a term expression back to text, verifying that any `$x`/`@x`
    /// references inside it are bound.
    fn term_text(&self, expr: &SExpr) -> Result<String, ParseError> {
        self.check_term_refs(expr)?;
        Ok(match expr {
            SExpr::Atom { text, .. } => text.clone(),
            SExpr::List { span, .. } => self.source[span.0..span.1].to_string(),
        })
    }

    fn check_term_refs(&self, expr: &SExpr) -> Result<(), ParseError> {
        match expr {
            SExpr::Atom { text, line } => {
                let known = if text.starts_with('$') {
                    self.doc.term_bindings.contains_key(text)
                } else if text.starts_with('@') {
                    self.doc.step_bindings.contains_key(text)
                } else {
                    true
                };
                if !known {
                    return Err(ParseError::new(
                        *line,
                        ParseErrorKind::UnknownBinding(text.clone()),
                    ));
                }
                Ok(())
            }
            SExpr::List { items, .. } => {
                for item in items {
                    self.check_term_refs(item)?;
                }
                Ok(())
            }
        }
    }
}

fn compute_roots(nodes: &[ProofNode]) -> Vec<NodeId> {
    let mut referenced = vec![false; nodes.len()];
    for node in nodes {
        for premise in &node.premises {
            referenced[premise.0] = true;
        }
    }
    nodes
        .iter()
        .filter(|node| !referenced[node.id.0])
        .map(|node| node.id)
        .collect()
}

/// Returns a node on a premise cycle, if any.
fn find_cycle(nodes: &[ProofNode]) -> Option<NodeId> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    let mut marks = vec![Mark::White; nodes.len()];
    for start in 0..nodes.len() {
        if marks[start] != Mark::White {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        marks[start] = Mark::Grey;
        while let Some(&(node, child)) = stack.last() {
            let premises = &nodes[node].premises;
            if child < premises.len() {
                stack.last_mut().unwrap().1 += 1;
                let next = premises[child].0;
                match marks[next] {
                    Mark::White => {
                        marks[next] = Mark::Grey;
                        stack.push((next, 0));
                    }
                    Mark::Grey => return Some(NodeId(next)),
                    Mark::Black => {}
                }
            } else {
                marks[node] = Mark::Black;
                stack.pop();
            }
        }
    }
    None
}
