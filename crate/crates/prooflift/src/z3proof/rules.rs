//! The Z3 proof-rule hierarchy.
//!
//! Z3's proof generator emits applications of 36 named inference rules. For
//! lifting purposes the rules are ranked into three importance levels:
//!
//! * [`RuleLevel::High`] — rules that usually correspond to an explicit
//!   verification step at the Verus level (8 rules).
//! * [`RuleLevel::Medium`] — rules that support intermediate proof
//!   construction (12 rules).
//! * [`RuleLevel::Low`] — tautologies, syntactic bookkeeping, and proof
//!   metadata (16 rules).
//!
//! The eight high-level rules are further grouped into five
//! [categories](RuleCategory); each category is validated by a dedicated
//! checker agent downstream.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Importance level of a Z3 proof rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleLevel {
    High,
    Medium,
    Low,
}

impl RuleLevel {
    pub const ALL: [RuleLevel; 3] = [RuleLevel::High, RuleLevel::Medium, RuleLevel::Low];

    /// Short tag used when annotating trace lines (`H`, `M`, `L`).
    pub fn tag(self) -> &'static str {
        match self {
            RuleLevel::High => "H",
            RuleLevel::Medium => "M",
            RuleLevel::Low => "L",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RuleLevel::High => "high",
            RuleLevel::Medium => "medium",
            RuleLevel::Low => "low",
        }
    }
}

/// Category of a high-level rule. Each category has its own checker agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleCategory {
    Lemma,
    TheoryLemma,
    ModusPonens,
    Quantifier,
    UnitResolution,
}

impl RuleCategory {
    /// All categories in checker invocation order.
    pub const ALL: [RuleCategory; 5] = [
        RuleCategory::Lemma,
        RuleCategory::TheoryLemma,
        RuleCategory::ModusPonens,
        RuleCategory::Quantifier,
        RuleCategory::UnitResolution,
    ];

    /// Canonical rule names belonging to this category.
    pub fn rule_names(self) -> &'static [&'static str] {
        match self {
            RuleCategory::Lemma => &["lemma"],
            RuleCategory::TheoryLemma => &["th-lemma"],
            RuleCategory::ModusPonens => &["mp", "mp~"],
            RuleCategory::Quantifier => &["quant-intro", "quant-inst", "skolemize"],
            RuleCategory::UnitResolution => &["unit-resolution"],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RuleCategory::Lemma => "lemma",
            RuleCategory::TheoryLemma => "theory-lemma",
            RuleCategory::ModusPonens => "modus-ponens",
            RuleCategory::Quantifier => "quantifier",
            RuleCategory::UnitResolution => "unit-resolution",
        }
    }
}

impl std::fmt::Display for RuleCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// One entry of the 36-rule table.
#[derive(Debug, Clone, Copy)]
pub struct RuleInfo {
    /// Canonical rule name as it appears in proof traces.
    pub name: &'static str,
    /// Alternative spellings emitted by some Z3 printers.
    pub aliases: &'static [&'static str],
    pub level: RuleLevel,
    /// One-line semantics, embedded verbatim into agent prompts.
    pub description: &'static str,
}

impl RuleInfo {
    pub fn matches(&self, rule_name: &str) -> bool {
        self.name == rule_name || self.aliases.contains(&rule_name)
    }
}

macro_rules! rule {
    ($name:literal, $level:ident, $desc:literal) => {
        RuleInfo { name: $name, aliases: &[], level: RuleLevel::$level, description: $desc }
    };
    ($name:literal [$($alias:literal),*], $level:ident, $desc:literal) => {
        RuleInfo { name: $name, aliases: &[$($alias),*], level: RuleLevel::$level, description: $desc }
    };
}

/// The full 36-rule table: 8 high, 12 medium, 16 low.
pub const RULE_TABLE: [RuleInfo; 36] = [
    // High-level rules.
    rule!("lemma", High, "closes a hypothetical subproof: deriving false under an assumption P yields !P"),
    rule!("th-lemma", High, "theory-specific tautology or conflict clause supplied by a theory solver (arithmetic, arrays, ...)"),
    rule!("mp", High, "modus ponens: from P and P => Q (or P = Q), concludes Q"),
    rule!("mp~", High, "modus ponens over ~-equivalence: from P and P ~ Q, concludes Q"),
    rule!("unit-resolution", High, "resolves a multi-literal clause against one or more unit clauses, deleting the falsified literals"),
    rule!("quant-intro", High, "lifts an equivalence between bodies f(x) <=> g(x) to the quantified formulas (forall x. f(x)) <=> (forall x. g(x))"),
    rule!("quant-inst", High, "instantiates a universal quantifier with a concrete term: (forall x. phi) => phi[t/x]"),
    rule!("skolemize" ["sk"], High, "replaces an existentially bound variable with a fresh skolem constant, yielding an equisatisfiable formula"),
    // Medium-level rules.
    rule!("asserted", Medium, "input formula taken directly from the query as a premise"),
    rule!("hypothesis", Medium, "introduces a scoped assumption for a hypothetical subproof"),
    rule!("and-elim", Medium, "extracts a single conjunct l_i from a proved conjunction l_1 & ... & l_n"),
    rule!("not-or-elim", Medium, "from !(l_1 | ... | l_n), extracts the negated disjunct !l_i"),
    rule!("trans", Medium, "transitivity: from x = y and y = z, concludes x = z"),
    rule!("trans*", Medium, "chains an arbitrary sequence of equality or equivalence steps into one relation between the endpoints"),
    rule!("monotonicity", Medium, "congruence: from a_1 = b_1, ..., a_n = b_n, concludes f(a_1, ..., a_n) = f(b_1, ..., b_n)"),
    rule!("der", Medium, "destructive equality resolution: eliminates a quantified variable pinned by an equation x = t via substitution"),
    rule!("rewrite", Medium, "a single simplifier step establishing t_1 = t_2"),
    rule!("rewrite*", Medium, "a collapsed sequence of simplifier and algebraic reduction steps"),
    rule!("def-axiom", Medium, "defining axiom for an introduced symbol (Tseitin-style clause)"),
    rule!("apply-def", Medium, "replaces a defined symbol with the definition it stands for"),
    // Low-level rules.
    rule!("true" ["true-axiom"], Low, "concludes the logical constant true"),
    rule!("=/~" ["=", "~"], Low, "plain term equality or equivalence: concludes t = t or t ~ t"),
    rule!("iff-true", Low, "from a proof of P, concludes P <=> true"),
    rule!("iff-false", Low, "from a proof of !P, concludes P <=> false"),
    rule!("goal", Low, "marks the goal formula to be proved"),
    rule!("refl", Low, "reflexivity: concludes t = t for any term t"),
    rule!("symm", Low, "symmetry: from t_1 = t_2, concludes t_2 = t_1"),
    rule!("commutativity", Low, "swaps the arguments of a commutative operator: f(x, y) = f(y, x)"),
    rule!("pull-quant", Low, "hoists a nested quantifier outward over a connective it does not capture"),
    rule!("push-quant", Low, "distributes a quantifier inward over a conjunction or disjunction"),
    rule!("elim-unused", Low, "drops a quantifier whose bound variable does not occur in the body"),
    rule!("distributivity", Low, "distributes one operator over another, e.g. a * (b + c) = a * b + a * c"),
    rule!("nnf-pos", Low, "negation-normal-form conversion step under positive polarity"),
    rule!("nnf-neg", Low, "negation-normal-form conversion step under negative polarity"),
    rule!("iff-oeq" ["iff~"], Low, "converts a propositional equivalence into the ~ (oeq) relation"),
    rule!("def-intro" ["intro-def"], Low, "introduces a fresh boolean name standing for a subformula"),
];

/// Raised by [`classify_rule`] for names outside the 36-rule table.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown Z3 proof rule `{0}`")]
pub struct UnknownRule(pub String);

/// Looks up a rule's table entry by canonical name or alias.
pub fn rule_info(rule_name: &str) -> Option<&'static RuleInfo> {
    RULE_TABLE.iter().find(|info| info.matches(rule_name))
}

/// Classifies a rule name into its importance level.
///
/// Unknown names are an error so that format drift in new Z3 releases
/// surfaces loudly; see [`classify_rule_lenient`] for the permissive variant.
pub fn classify_rule(rule_name: &str) -> Result<RuleLevel, UnknownRule> {
    rule_info(rule_name)
        .map(|info| info.level)
        .ok_or_else(|| UnknownRule(rule_name.to_string()))
}

/// Like [`classify_rule`] but maps unknown rules to [`RuleLevel::Low`].
pub fn classify_rule_lenient(rule_name: &str) -> RuleLevel {
    rule_info(rule_name).map_or(RuleLevel::Low, |info| info.level)
}

/// Returns the checker category for the eight high-level rules, `None` for
/// every other rule.
pub fn categorize_rule(rule_name: &str) -> Option<RuleCategory> {
    let info = rule_info(rule_name)?;
    if info.level != RuleLevel::High {
        return None;
    }
    RuleCategory::ALL
        .into_iter()
        .find(|cat| cat.rule_names().contains(&info.name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn table_partitions_into_8_12_16() {
        let count = |level| RULE_TABLE.iter().filter(|r| r.level == level).count();
        assert_eq!(count(RuleLevel::High), 8);
        assert_eq!(count(RuleLevel::Medium), 12);
        assert_eq!(count(RuleLevel::Low), 16);
        assert_eq!(RULE_TABLE.len(), 36);
    }

    #[test]
    fn no_rule_in_two_levels() {
        let mut seen = BTreeSet::new();
        for info in &RULE_TABLE {
            assert!(seen.insert(info.name), "duplicate table entry {}", info.name);
            for alias in info.aliases {
                assert!(seen.insert(alias), "alias {alias} collides");
            }
        }
    }

    #[test]
    fn spot_checks() {
        assert_eq!(classify_rule("unit-resolution").unwrap(), RuleLevel::High);
        assert_eq!(classify_rule("trans").unwrap(), RuleLevel::Medium);
        assert_eq!(classify_rule("rewrite").unwrap(), RuleLevel::Medium);
        assert_eq!(classify_rule("refl").unwrap(), RuleLevel::Low);
        assert_eq!(classify_rule("frobnicate"), Err(UnknownRule("frobnicate".into())));
    }

    #[test]
    fn aliases_resolve() {
        assert_eq!(classify_rule("sk").unwrap(), RuleLevel::High);
        assert_eq!(classify_rule("=").unwrap(), RuleLevel::Low);
        assert_eq!(classify_rule("~").unwrap(), RuleLevel::Low);
        assert_eq!(classify_rule("true-axiom").unwrap(), RuleLevel::Low);
    }

    #[test]
    fn category_mapping() {
        assert_eq!(categorize_rule("mp~"), Some(RuleCategory::ModusPonens));
        assert_eq!(categorize_rule("skolemize"), Some(RuleCategory::Quantifier));
        assert_eq!(categorize_rule("lemma"), Some(RuleCategory::Lemma));
        assert_eq!(categorize_rule("th-lemma"), Some(RuleCategory::TheoryLemma));
        assert_eq!(categorize_rule("unit-resolution"), Some(RuleCategory::UnitResolution));
        assert_eq!(categorize_rule("rewrite"), None);
        assert_eq!(categorize_rule("no-such-rule"), None);
    }

    #[test]
    fn category_iff_high_level() {
        for info in &RULE_TABLE {
            let high = info.level == RuleLevel::High;
            assert_eq!(
                categorize_rule(info.name).is_some(),
                high,
                "category/level mismatch for {}",
                info.name
            );
        }
    }

    #[test]
    fn lenient_maps_unknown_to_low() {
        assert_eq!(classify_rule_lenient("frobnicate"), RuleLevel::Low);
        assert_eq!(classify_rule_lenient("mp"), RuleLevel::High);
    }

    #[test]
    fn every_category_rule_is_in_table() {
        for cat in RuleCategory::ALL {
            for name in cat.rule_names() {
                assert_eq!(rule_info(name).unwrap().level, RuleLevel::High);
            }
        }
    }
}
