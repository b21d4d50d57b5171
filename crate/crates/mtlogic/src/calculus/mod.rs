//! Proper display calculi for the two-sorted languages: rule tables,
//! derivation checking, bounded backward proof search and the algebraic
//! reading of rules.

mod corpus;
mod drv;
mod interp;
mod prove;
mod rules;

use std::fmt;

use thiserror::Error;

use crate::correspondence::AxiomId;
use crate::semantics::SemError;
use crate::syntax::{Sequent, Sig, SyntaxError};

pub use corpus::CORPUS;
pub use drv::{parse_drv, parse_drv_file, render_drv, DrvFile};
pub use interp::{
    interpret_rule, rule_sound_on, sequent_countermodel, sequent_valid_on, structure_term, RuleInterp,
};
pub use prove::{prove, prove_with, Limits, ProveFailure};
pub use rules::{
    backward, extension_rule, instance_of, is_atom, match_sequent, ruleset, Rule, RuleKind, RuleSet, Subst,
};

#[derive(Debug, Error)]
pub enum CalculusError {
    #[error("extension {0} does not belong to the {1:?} calculus")]
    Incompatible(AxiomId, Sig),
    #[error("axiom {0} has no analytic rule")]
    NoRule(AxiomId),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Sem(#[from] SemError),
}

pub type Result<T> = std::result::Result<T, CalculusError>;

/// A proof tree. The root is the proved sequent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub sequent: Sequent,
    pub rule: String,
    pub children: Vec<Derivation>,
}

impl Derivation {
    pub fn leaf(sequent: Sequent, rule: &str) -> Derivation {
        Derivation { sequent, rule: rule.to_string(), children: vec![] }
    }

    pub fn node(sequent: Sequent, rule: &str, children: Vec<Derivation>) -> Derivation {
        Derivation { sequent, rule: rule.to_string(), children }
    }

    /// Height, counting a leaf as 1.
    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.nodes());
        }
        out
    }

    pub fn uses(&self, rule: &str) -> bool {
        self.nodes().iter().any(|n| n.rule == rule)
    }

    pub fn is_cut_free(&self) -> bool {
        !self.uses("Cut_S") && !self.uses("Cut_N")
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_drv(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailReason {
    UnknownRule(String),
    Mismatch(String),
    Polarity(String),
    Signature(String),
}

/// Where a derivation check failed: child indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct CheckFailure {
    pub path: Vec<usize>,
    pub reason: FailReason,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "at node [{}]: ", path.join("."))?;
        match &self.reason {
            FailReason::UnknownRule(r) => write!(f, "no rule named `{}` in this calculus", r),
            FailReason::Mismatch(r) => write!(f, "not an instance of `{}`", r),
            FailReason::Polarity(m) => write!(f, "ill-formed sequent: {}", m),
            FailReason::Signature(m) => write!(f, "outside the calculus language: {}", m),
        }
    }
}

/// Check every node against the schemas of its named rule.
pub fn check_derivation(d: &Derivation, rs: &RuleSet) -> std::result::Result<(), CheckFailure> {
    check_derivation_with(d, rs, &[])
}

/// As `check_derivation`, but leaves named `hyp` may cite one of `hyps`
/// verbatim. Used for derived rules.
pub fn check_derivation_with(
    d: &Derivation,
    rs: &RuleSet,
    hyps: &[Sequent],
) -> std::result::Result<(), CheckFailure> {
    fn go(
        d: &Derivation,
        rs: &RuleSet,
        hyps: &[Sequent],
        path: &mut Vec<usize>,
    ) -> std::result::Result<(), CheckFailure> {
        let fail = |path: &Vec<usize>, reason| Err(CheckFailure { path: path.clone(), reason });
        if let Err(e) = d.sequent.check() {
            return fail(path, FailReason::Polarity(e.to_string()));
        }
        if let Err(e) = d.sequent.check_sig(rs.sig) {
            return fail(path, FailReason::Signature(e.to_string()));
        }
        if d.rule == HYP && !hyps.is_empty() {
            if d.children.is_empty() && hyps.contains(&d.sequent) {
                return Ok(());
            }
            return fail(path, FailReason::Mismatch(d.rule.clone()));
        }
        let mut named = rs.named(&d.rule).peekable();
        if named.peek().is_none() {
            return fail(path, FailReason::UnknownRule(d.rule.clone()));
        }
        let kids: Vec<&Sequent> = d.children.iter().map(|c| &c.sequent).collect();
        if !named.any(|r| instance_of(r, &d.sequent, &kids)) {
            return fail(path, FailReason::Mismatch(d.rule.clone()));
        }
        for (i, c) in d.children.iter().enumerate() {
            path.push(i);
            go(c, rs, hyps, path)?;
            path.pop();
        }
        Ok(())
    }
    go(d, rs, hyps, &mut Vec::new())
}

/// Leaf label for an assumption of a derived rule.
pub const HYP: &str = "hyp";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sequent;

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    fn t_derivation() -> Derivation {
        Derivation::node(
            seq("{<nu>} [ni] A |- A"),
            "T",
            vec![Derivation::node(seq("[ni] A |- {[ni]} A"), "[ni]L", vec![Derivation::leaf(seq("A |- A"), "Id_S")])],
        )
    }

    #[test]
    fn t_figure_checks() {
        let rs = ruleset(Sig::Nabla, &[AxiomId::T], false).unwrap();
        let d = t_derivation();
        assert_eq!(d.size(), 3);
        assert_eq!(check_derivation(&d, &rs), Ok(()));
    }

    #[test]
    fn renamed_root_fails_at_root() {
        let rs = ruleset(Sig::Nabla, &[AxiomId::T, AxiomId::P], false).unwrap();
        let mut d = t_derivation();
        d.rule = "P".into();
        let e = check_derivation(&d, &rs).unwrap_err();
        assert_eq!(e.path, Vec::<usize>::new());
        assert_eq!(e.reason, FailReason::Mismatch("P".into()));
        // Without the extension the name is unknown.
        let base = ruleset(Sig::Nabla, &[], false).unwrap();
        let e = check_derivation(&t_derivation(), &base).unwrap_err();
        assert_eq!(e.reason, FailReason::UnknownRule("T".into()));
    }

    #[test]
    fn failures_report_the_node() {
        let rs = ruleset(Sig::Nabla, &[AxiomId::T], false).unwrap();
        let mut d = t_derivation();
        d.children[0].children[0].sequent = seq("A |- B");
        let e = check_derivation(&d, &rs).unwrap_err();
        assert_eq!(e.path, vec![0]);
        d.children[0].children[0].rule = "Id_S".into();
        d.children[0].children.clear();
        assert_eq!(check_derivation(&d, &rs).unwrap_err().path, vec![0]);
    }

    #[test]
    fn hypotheses_must_be_declared() {
        let rs = ruleset(Sig::Nabla, &[], false).unwrap();
        let d = Derivation::node(
            seq("[ni] A |- {[ni]} B"),
            "[ni]L",
            vec![Derivation::leaf(seq("A |- B"), HYP)],
        );
        assert_eq!(check_derivation_with(&d, &rs, &[seq("A |- B")]), Ok(()));
        assert!(check_derivation_with(&d, &rs, &[seq("B |- A")]).is_err());
        assert_eq!(check_derivation(&d, &rs).unwrap_err().reason, FailReason::UnknownRule(HYP.into()));
    }

    #[test]
    fn signature_is_enforced() {
        let rs = ruleset(Sig::Cond, &[], false).unwrap();
        let d = Derivation::leaf(seq("<nu> [ni] p |- <nu> [ni] p"), "Id_S");
        assert!(matches!(check_derivation(&d, &rs).unwrap_err().reason, FailReason::Signature(_)));
    }
}
