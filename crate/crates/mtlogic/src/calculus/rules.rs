//! Rule schemas and syntactic matching.

use std::collections::BTreeMap;

use crate::correspondence::AxiomId;
use crate::syntax::{parse_sequent, Sequent, Sig, Structure, Term};

use super::{CalculusError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// Zero-premise rules: `Id_S` and the two constant axioms.
    Axiom,
    Cut,
    /// Structural rules other than the display postulates.
    Structural,
    /// Display postulates, Galois and residuation moves.
    Display,
    Logical,
    Extension,
}

/// A rule schema. Double-line rules may be read in either direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: &'static str,
    pub kind: RuleKind,
    pub premises: Vec<Sequent>,
    pub conclusion: Sequent,
    pub double: bool,
    pub axiom: Option<AxiomId>,
}

impl Rule {
    fn new(name: &'static str, kind: RuleKind, double: bool, premises: &[&str], conclusion: &str) -> Rule {
        let parse = |s: &str| parse_sequent(s).unwrap_or_else(|e| panic!("rule {} schema `{}`: {}", name, s, e));
        Rule {
            name,
            kind,
            premises: premises.iter().map(|p| parse(p)).collect(),
            conclusion: parse(conclusion),
            double,
            axiom: None,
        }
    }

    /// One-premise logical rules whose conclusion keeps a bare structure
    /// variable on the other side. Backward search applies them eagerly.
    pub fn invertible(&self) -> bool {
        self.kind == RuleKind::Logical
            && self.premises.len() == 1
            && (matches!(self.conclusion.lhs, Structure::Var(..)) || matches!(self.conclusion.rhs, Structure::Var(..)))
    }

    /// The (conclusion, premises) readings: one for single-line rules, two
    /// for double-line ones.
    pub fn readings(&self) -> Vec<(&Sequent, Vec<&Sequent>)> {
        let mut out = vec![(&self.conclusion, self.premises.iter().collect())];
        if self.double {
            out.push((&self.premises[0], vec![&self.conclusion]));
        }
        out
    }
}

type Spec = (&'static str, RuleKind, bool, &'static [&'static str], &'static str);

use RuleKind::*;

const SHARED: &[Spec] = &[
    ("Id_S", Axiom, false, &[], "A |- A"),
    ("bot", Axiom, false, &[], "bot |- {bot}"),
    ("top", Axiom, false, &[], "{top} |- top"),
    ("Cut_S", Cut, false, &["X |- A", "A |- Y"], "X |- Y"),
    ("Cut_N", Cut, false, &["Ga |- Al", "Al |- De"], "Ga |- De"),
    ("gal_S", Display, true, &["{~} X |- Y"], "{~} Y |- X"),
    ("gal_S", Display, true, &["X |- {~} Y"], "Y |- {~} X"),
    ("res_S", Display, true, &["(X {&} Y) |- Z"], "Y |- ({~} X {|} Z)"),
    ("res_S", Display, true, &["X |- (Y {|} Z)"], "({~} Y {&} X) |- Z"),
    ("gal_N", Display, true, &["{sim} Ga |- De"], "{sim} De |- Ga"),
    ("gal_N", Display, true, &["Ga |- {sim} De"], "De |- {sim} Ga"),
    ("res_N", Display, true, &["(Ga {^} De) |- Th"], "De |- ({sim} Ga {cup} Th)"),
    ("res_N", Display, true, &["Ga |- (De {cup} Th)"], "({sim} De {^} Ga) |- Th"),
    ("cont_S", Structural, true, &["X |- Y"], "{~} Y |- {~} X"),
    ("cont_N", Structural, true, &["Ga |- De"], "{sim} De |- {sim} Ga"),
    ("unit_top", Structural, true, &["X |- Y"], "(X {&} {top}) |- Y"),
    ("unit_bot", Structural, true, &["X |- Y"], "X |- (Y {|} {bot})"),
    ("unit_1", Structural, true, &["Ga |- De"], "(Ga {^} {1}) |- De"),
    ("unit_0", Structural, true, &["Ga |- De"], "Ga |- (De {cup} {0})"),
    ("W_S", Structural, false, &["X |- Y"], "(X {&} Z) |- Y"),
    ("W_S", Structural, false, &["X |- Y"], "X |- (Y {|} Z)"),
    ("C_S", Structural, false, &["(X {&} X) |- Y"], "X |- Y"),
    ("C_S", Structural, false, &["X |- (Y {|} Y)"], "X |- Y"),
    ("E_S", Structural, false, &["(X {&} Y) |- Z"], "(Y {&} X) |- Z"),
    ("E_S", Structural, false, &["X |- (Y {|} Z)"], "X |- (Z {|} Y)"),
    ("A_S", Structural, false, &["(X {&} (Y {&} Z)) |- W"], "((X {&} Y) {&} Z) |- W"),
    ("A_S", Structural, false, &["W |- (X {|} (Y {|} Z))"], "W |- ((X {|} Y) {|} Z)"),
    ("W_N", Structural, false, &["Ga |- De"], "(Ga {^} Th) |- De"),
    ("W_N", Structural, false, &["Ga |- De"], "Ga |- (De {cup} Th)"),
    ("C_N", Structural, false, &["(Ga {^} Ga) |- De"], "Ga |- De"),
    ("C_N", Structural, false, &["Ga |- (De {cup} De)"], "Ga |- De"),
    ("E_N", Structural, false, &["(Ga {^} De) |- Th"], "(De {^} Ga) |- Th"),
    ("E_N", Structural, false, &["Ga |- (De {cup} Th)"], "Ga |- (Th {cup} De)"),
    ("A_N", Structural, false, &["(Ga {^} (De {^} Th)) |- Pi"], "((Ga {^} De) {^} Th) |- Pi"),
    ("A_N", Structural, false, &["Pi |- (Ga {cup} (De {cup} Th))"], "Pi |- ((Ga {cup} De) {cup} Th)"),
    ("~L", Logical, false, &["{~} A |- X"], "~A |- X"),
    ("~R", Logical, false, &["X |- {~} A"], "X |- ~A"),
    ("&L", Logical, false, &["(A {&} B) |- X"], "(A & B) |- X"),
    ("&R", Logical, false, &["X |- A", "Y |- B"], "(X {&} Y) |- (A & B)"),
    ("|L", Logical, false, &["A |- X", "B |- Y"], "(A | B) |- (X {|} Y)"),
    ("|R", Logical, false, &["X |- (A {|} B)"], "X |- (A | B)"),
    ("topL", Logical, false, &["{top} |- X"], "top |- X"),
    ("botR", Logical, false, &["X |- {bot}"], "X |- bot"),
    ("<in>[ni]", Display, true, &["{<in>} Ga |- X"], "Ga |- {[ni]} X"),
    ("[ni]L", Logical, false, &["A |- X"], "[ni] A |- {[ni]} X"),
    ("[ni]R", Logical, false, &["Ga |- {[ni]} A"], "Ga |- [ni] A"),
];

const NABLA: &[Spec] = &[
    ("<nu>[bnu]", Display, true, &["{<nu>} Ga |- X"], "Ga |- {[bnu]} X"),
    ("<bnuc>[nuc]", Display, true, &["{<bnuc>} X |- Ga"], "X |- {[nuc]} Ga"),
    ("<nni>[nin]", Display, true, &["{<nni>} X |- Ga"], "X |- {[nin]} Ga"),
    ("<nu>L", Logical, false, &["{<nu>} Al |- X"], "<nu> Al |- X"),
    ("<nu>R", Logical, false, &["Ga |- Al"], "{<nu>} Ga |- <nu> Al"),
    ("[nuc]L", Logical, false, &["Al |- Ga"], "[nuc] Al |- {[nuc]} Ga"),
    ("[nuc]R", Logical, false, &["X |- {[nuc]} Al"], "X |- [nuc] Al"),
    ("<nni>L", Logical, false, &["{<nni>} A |- Ga"], "<nni> A |- Ga"),
    ("<nni>R", Logical, false, &["X |- A"], "{<nni>} X |- <nni> A"),
];

const COND: &[Spec] = &[
    ("<||>", Display, true, &["X |- (Ga {|>} Y)"], "(Ga {<|} X) |- Y"),
    ("|>>|>", Display, true, &["Ga |- (X {|>>} Y)"], "X |- (Ga {|>} Y)"),
    ("[nin>[nni>", Display, true, &["X |- {[nin>} Ga"], "Ga |- {[nni>} X"),
    ("|>L", Logical, false, &["Ga |- Al", "A |- X"], "(Al |> A) |- (Ga {|>} X)"),
    ("|>R", Logical, false, &["X |- (Al {|>} A)"], "X |- (Al |> A)"),
    ("[nni>L", Logical, false, &["X |- A"], "[nni> A |- {[nni>} X"),
    ("[nni>R", Logical, false, &["Ga |- {[nni>} A"], "Ga |- [nni> A"),
    ("^L", Logical, false, &["(Al {^} Be) |- Ga"], "(Al ^ Be) |- Ga"),
    ("^R", Logical, false, &["Ga |- Al", "De |- Be"], "(Ga {^} De) |- (Al ^ Be)"),
];

/// The analytic rule of an axiom, if it has one.
pub fn extension_rule(id: AxiomId) -> Result<Rule> {
    let spec: (&'static str, &'static [&'static str], &'static str) = match id {
        AxiomId::N => ("N", &["{<nni>} {top} |- Ga"], "{top} |- {[nuc]} Ga"),
        AxiomId::P => ("P", &["Ga |- {[ni]} {bot}"], "{top} |- {~} {<nu>} Ga"),
        AxiomId::C => ("C", &["{<nni>} ({<in>} Ga {&} {<in>} De) |- Th"], "({<nu>} Ga {&} {<nu>} De) |- {[nuc]} Th"),
        AxiomId::D => ("D", &["Ga |- {[ni]} {~} {<in>} De"], "{<nu>} De |- {~} {<nu>} Ga"),
        AxiomId::T => ("T", &["Ga |- {[ni]} X"], "{<nu>} Ga |- X"),
        AxiomId::ID => ("ID", &["De |- {[nni>} {<in>} Ga", "{<in>} Ga |- X"], "{top} |- ((Ga {^} De) {|>} X)"),
        AxiomId::CS => (
            "CS",
            &["Ga |- {[ni]} {[nin>} De", "X |- {[nin>} De", "Y |- Z"],
            "(X {&} Y) |- ((Ga {^} De) {|>} Z)",
        ),
        AxiomId::CEM => (
            "CEM",
            &[
                "Pi |- {[nni>} {<in>} Ga",
                "Pi |- {[nni>} {<in>} Th",
                "De |- {[nni>} {<in>} Ga",
                "De |- {[nni>} {<in>} Th",
                "Y |- X",
            ],
            "{top} |- (((Ga {^} De) {|>} X) {|} ((Th {^} Pi) {|>} {~} Y))",
        ),
        AxiomId::CN => (
            "CN",
            &["Ga |- {[ni]} {[nin>} De", "Ga |- {[ni]} Y", "Th |- {[ni]} {[nin>} Pi", "Th |- {[ni]} X"],
            "{top} |- (((Ga {^} De) {|>} X) {|} ((Th {^} Pi) {|>} Y))",
        ),
        other => return Err(CalculusError::NoRule(other)),
    };
    let mut r = Rule::new(spec.0, Extension, false, spec.1, spec.2);
    r.axiom = Some(id);
    Ok(r)
}

/// An immutable rule list for one calculus.
#[derive(Debug, Clone)]
pub struct RuleSet {
    pub sig: Sig,
    pub extensions: Vec<AxiomId>,
    pub cut: bool,
    pub rules: Vec<Rule>,
}

impl RuleSet {
    pub fn named(&self, name: &str) -> impl Iterator<Item = &Rule> + '_ {
        let name = name.to_string();
        self.rules.iter().filter(move |r| r.name == name)
    }

    pub fn of_kind(&self, kind: RuleKind) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(move |r| r.kind == kind)
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut v: Vec<&'static str> = Vec::new();
        for r in &self.rules {
            if !v.contains(&r.name) {
                v.push(r.name);
            }
        }
        v
    }
}

pub fn sig_of(id: AxiomId) -> Sig {
    id.mode().sig()
}

/// Assemble the base calculus for `sig`, its extension rules and
/// optionally the cut rules.
pub fn ruleset(sig: Sig, extensions: &[AxiomId], cut: bool) -> Result<RuleSet> {
    let mut rules = Vec::new();
    let own = match sig {
        Sig::Nabla => NABLA,
        Sig::Cond => COND,
    };
    for &(name, kind, double, prem, concl) in SHARED.iter().chain(own) {
        if kind == Cut && !cut {
            continue;
        }
        rules.push(Rule::new(name, kind, double, prem, concl));
    }
    let mut exts = Vec::new();
    for &id in extensions {
        if sig_of(id) != sig {
            return Err(CalculusError::Incompatible(id, sig));
        }
        if !exts.contains(&id) {
            rules.push(extension_rule(id)?);
            exts.push(id);
        }
    }
    Ok(RuleSet { sig, extensions: exts, cut, rules })
}

// ---------------------------------------------------------------- matching

/// Bindings of structure and formula metavariables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Subst {
    pub structs: BTreeMap<String, Structure>,
    pub forms: BTreeMap<String, Term>,
}

pub fn match_structure(p: &Structure, s: &Structure, sub: &mut Subst) -> bool {
    match p {
        Structure::Var(_, n) => match sub.structs.get(n) {
            Some(b) => b == s,
            None => {
                sub.structs.insert(n.clone(), s.clone());
                true
            }
        },
        Structure::Form(pt) => match s {
            Structure::Form(t) => match_term(pt, t, sub),
            _ => false,
        },
        _ => {
            let (pc, pk) = p.split().expect("structural node");
            match s.split() {
                Some((c, k)) if c == pc => pk.iter().zip(k).all(|(a, b)| match_structure(a, b, sub)),
                _ => false,
            }
        }
    }
}

pub fn match_term(p: &Term, t: &Term, sub: &mut Subst) -> bool {
    if let Term::Var(_, n) = p {
        return match sub.forms.get(n) {
            Some(b) => b == t,
            None => {
                sub.forms.insert(n.clone(), t.clone());
                true
            }
        };
    }
    match (p.split(), t.split()) {
        (Some((pc, pk)), Some((c, k))) => pc == c && pk.iter().zip(k).all(|(a, b)| match_term(a, b, sub)),
        (None, None) => p == t,
        _ => false,
    }
}

pub fn match_sequent(p: &Sequent, s: &Sequent, sub: &mut Subst) -> bool {
    match_structure(&p.lhs, &s.lhs, sub) && match_structure(&p.rhs, &s.rhs, sub)
}

pub fn instantiate_term(p: &Term, sub: &Subst) -> Option<Term> {
    match p {
        Term::Var(_, n) => sub.forms.get(n).cloned(),
        _ => match p.split() {
            None => Some(p.clone()),
            Some((c, kids)) => {
                let ks = kids.into_iter().map(|k| instantiate_term(k, sub)).collect::<Option<Vec<_>>>()?;
                Some(Term::rebuild(c, ks))
            }
        },
    }
}

pub fn instantiate(p: &Structure, sub: &Subst) -> Option<Structure> {
    match p {
        Structure::Var(_, n) => sub.structs.get(n).cloned(),
        Structure::Form(t) => instantiate_term(t, sub).map(Structure::Form),
        _ => {
            let (c, kids) = p.split().expect("structural node");
            let ks = kids.into_iter().map(|k| instantiate(k, sub)).collect::<Option<Vec<_>>>()?;
            Some(Structure::build(c, ks))
        }
    }
}

pub fn instantiate_sequent(p: &Sequent, sub: &Subst) -> Option<Sequent> {
    Some(Sequent::new(instantiate(&p.lhs, sub)?, instantiate(&p.rhs, sub)?))
}

/// `Id_S` only closes atoms: propositions, or formula metavariables standing
/// for arbitrary formulas in schematic derivations.
pub fn is_atom(t: &Term) -> bool {
    matches!(t, Term::Prop(_) | Term::Var(..))
}

fn side_condition(rule: &Rule, sub: &Subst) -> bool {
    rule.name != "Id_S" || sub.forms.get("A").map(is_atom).unwrap_or(false)
}

/// Every way of reading `s` as the conclusion of `rule`, as the list of
/// premises. Readings that leave a premise variable unbound (cut formulas)
/// are skipped.
pub fn backward(rule: &Rule, s: &Sequent) -> Vec<Vec<Sequent>> {
    let mut out = Vec::new();
    for (concl, prems) in rule.readings() {
        let mut sub = Subst::default();
        if !match_sequent(concl, s, &mut sub) || !side_condition(rule, &sub) {
            continue;
        }
        if let Some(ps) = prems.iter().map(|p| instantiate_sequent(p, &sub)).collect::<Option<Vec<_>>>() {
            if !out.contains(&ps) {
                out.push(ps);
            }
        }
    }
    out
}

/// Does `s` follow from `children` by one application of `rule`?
pub fn instance_of(rule: &Rule, s: &Sequent, children: &[&Sequent]) -> bool {
    rule.readings().into_iter().any(|(concl, prems)| {
        if prems.len() != children.len() {
            return false;
        }
        let mut sub = Subst::default();
        match_sequent(concl, s, &mut sub)
            && prems.iter().zip(children).all(|(p, c)| match_sequent(p, c, &mut sub))
            && side_condition(rule, &sub)
    })
}
