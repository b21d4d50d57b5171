//! A script-driven ALBA engine for the fourteen correspondence runs.
//!
//! Quasi-inequalities are rewritten step by step; every intermediate form can
//! be evaluated on the complex algebra of a finite frame, which is how the
//! runs are checked.

use std::fmt;

use thiserror::Error;

use crate::constructions::{star_c, star_n};
use crate::correspondence::AxiomId;
use crate::inductive::{classes, ClassifyError};
use crate::semantics::{full, subset, valid_formula, Env, Frame, SemError, Set, TwoSorted};
use crate::syntax::{unicode, Conn, Sort, Structure, SyntaxError, Term};
use crate::translate::{translate_sequent, TranslateError};

#[derive(Debug, Error)]
pub enum AlbaError {
    #[error("no adjoint registered for `{0}` on the {1} side")]
    NoAdjoint(String, &'static str),
    #[error("hypothesis {0} does not exist")]
    BadTarget(usize),
    #[error("nothing to split in `{0}`")]
    NotSplittable(String),
    #[error("`{0}` is not in Ackermann shape")]
    NotAckermann(String),
    #[error("`{0}` cannot be eliminated: {1}")]
    NotEliminable(String, String),
    #[error("first approximation met a non-skeleton node `{0}`")]
    NotSkeleton(String),
    #[error("quasi-inequality still mentions propositions")]
    NotPure,
    #[error("{axiom} step {step}: {source}")]
    Step { axiom: AxiomId, step: usize, source: Box<AlbaError> },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Sem(#[from] SemError),
}

pub type Result<T> = std::result::Result<T, AlbaError>;

/// `lhs <= rhs`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ineq {
    pub lhs: Term,
    pub rhs: Term,
}

impl Ineq {
    pub fn new(lhs: Term, rhs: Term) -> Ineq {
        Ineq { lhs, rhs }
    }

    fn contains(&self, pred: &impl Fn(&Term) -> bool) -> bool {
        self.lhs.contains(pred) || self.rhs.contains(pred)
    }

    fn replace(&self, from: &Term, to: &Term) -> Ineq {
        Ineq { lhs: self.lhs.replace(from, to), rhs: self.rhs.replace(from, to) }
    }

    fn trivial(&self) -> bool {
        self.lhs == self.rhs || matches!(self.lhs, Term::Bot | Term::Zero) || matches!(self.rhs, Term::Top | Term::One)
    }
}

/// A quantified (co)nominal: `Nom(sort, name)` denotes `{v}`, `CoNom` its
/// complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QVar {
    pub sort: Sort,
    pub name: String,
}

impl QVar {
    fn nom(&self) -> Term {
        Term::Nom(self.sort, self.name.clone())
    }
    fn conom(&self) -> Term {
        Term::CoNom(self.sort, self.name.clone())
    }
    fn mentions(&self, t: &Term) -> bool {
        matches!(t, Term::Nom(s, n) | Term::CoNom(s, n) if *s == self.sort && *n == self.name)
    }
}

/// `forall vars [hyps => concl]`; propositions are quantified implicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuasiIneq {
    pub vars: Vec<QVar>,
    pub hyps: Vec<Ineq>,
    pub concl: Ineq,
}

impl QuasiIneq {
    pub fn plain(lhs: Term, rhs: Term) -> QuasiIneq {
        QuasiIneq { vars: vec![], hyps: vec![], concl: Ineq::new(lhs, rhs) }
    }

    fn ineqs(&self) -> impl Iterator<Item = &Ineq> {
        self.hyps.iter().chain(std::iter::once(&self.concl))
    }

    pub fn props(&self) -> Vec<String> {
        let mut out = Vec::new();
        for i in self.ineqs() {
            i.lhs.collect_props(&mut out);
            i.rhs.collect_props(&mut out);
        }
        out
    }

    pub fn is_pure(&self) -> bool {
        self.props().is_empty()
    }

    pub fn unicode(&self) -> String {
        let ineq = |i: &Ineq| format!("{} ≤ {}", unicode(&i.lhs), unicode(&i.rhs));
        let mut s: String = self.vars.iter().map(|v| format!("∀{}", v.name)).collect();
        let body = if self.hyps.is_empty() {
            ineq(&self.concl)
        } else {
            let hs: Vec<String> = self.hyps.iter().map(ineq).collect();
            format!("{} ⇒ {}", hs.join(" & "), ineq(&self.concl))
        };
        if self.vars.is_empty() && self.hyps.is_empty() {
            return body;
        }
        s.push('[');
        s.push_str(&body);
        s.push(']');
        s
    }
}

impl fmt::Display for Ineq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.lhs, self.rhs)
    }
}

impl fmt::Display for QuasiIneq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.vars.is_empty() {
            let names: Vec<&str> = self.vars.iter().map(|v| v.name.as_str()).collect();
            write!(f, "forall {}. ", names.join(" "))?;
        }
        if self.hyps.is_empty() {
            return write!(f, "{}", self.concl);
        }
        let hs: Vec<String> = self.hyps.iter().map(|h| h.to_string()).collect();
        write!(f, "[{} => {}]", hs.join(" & "), self.concl)
    }
}

// ---------------------------------------------------------------- polarity

/// Does the leaf `x` occur positively / negatively in `t` (read with sign `pos`)?
fn occurrences(t: &Term, x: &Term, pos: bool, out: &mut (bool, bool)) {
    if t == x {
        if pos {
            out.0 = true
        } else {
            out.1 = true
        }
        return;
    }
    if let Some((c, kids)) = t.split() {
        for (i, k) in kids.into_iter().enumerate() {
            occurrences(k, x, if c.monotone(i) { pos } else { !pos }, out);
        }
    }
}

fn monotone_in(t: &Term, x: &Term) -> bool {
    let mut o = (false, false);
    occurrences(t, x, true, &mut o);
    !o.1
}

fn antitone_in(t: &Term, x: &Term) -> bool {
    let mut o = (false, false);
    occurrences(t, x, true, &mut o);
    !o.0
}

fn top(sort: Sort) -> Term {
    match sort {
        Sort::S => Term::Top,
        Sort::N => Term::One,
    }
}

fn bottom(sort: Sort) -> Term {
    match sort {
        Sort::S => Term::Bot,
        Sort::N => Term::Zero,
    }
}

fn join(sort: Sort, mut ts: Vec<Term>) -> Term {
    let Some(mut acc) = ts.pop() else { return bottom(sort) };
    while let Some(t) = ts.pop() {
        acc = match sort {
            Sort::S => Term::or(t, acc),
            Sort::N => Term::Cup(Box::new(t), Box::new(acc)),
        };
    }
    acc
}

fn meet(sort: Sort, mut ts: Vec<Term>) -> Term {
    let Some(mut acc) = ts.pop() else { return top(sort) };
    while let Some(t) = ts.pop() {
        acc = match sort {
            Sort::S => Term::and(t, acc),
            Sort::N => Term::cap(t, acc),
        };
    }
    acc
}

// ------------------------------------------------------- first approximation

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Approx {
    /// Bracket the whole side with one fresh (co)nominal.
    Whole,
    /// Descend through Skeleton nodes and bracket maximal PIA subterms.
    Skeleton,
    /// Leave the side alone.
    Keep,
}

struct Fresh {
    next: usize,
    vars: Vec<QVar>,
    hyps: Vec<Ineq>,
}

impl Fresh {
    fn var(&mut self, sort: Sort) -> QVar {
        self.next += 1;
        let name = match sort {
            Sort::S => format!("x{}", self.next),
            Sort::N => format!("Z{}", self.next),
        };
        let v = QVar { sort, name };
        self.vars.push(v.clone());
        v
    }

    /// `i <= t` for positive `t`, `t <= m` for negative `t`.
    fn bracket(&mut self, t: &Term, positive: bool) -> Result<Term> {
        let v = self.var(t.sort()?);
        if positive {
            self.hyps.push(Ineq::new(v.nom(), t.clone()));
            Ok(v.nom())
        } else {
            self.hyps.push(Ineq::new(t.clone(), v.conom()));
            Ok(v.conom())
        }
    }

    fn skeleton(&mut self, t: &Term, positive: bool) -> Result<Term> {
        if is_pia_subterm(t, positive)? {
            return self.bracket(t, positive);
        }
        let (c, kids) = t.split().expect("leaves are PIA subterms");
        if !classes(c, positive)?.iter().any(|k| k.skeleton()) {
            return Err(AlbaError::NotSkeleton(t.to_string()));
        }
        let mut out = Vec::new();
        for (i, k) in kids.into_iter().enumerate() {
            out.push(self.skeleton(k, if c.monotone(i) { positive } else { !positive })?);
        }
        Ok(Term::rebuild(c, out))
    }

    fn side(&mut self, t: &Term, positive: bool, mode: Approx) -> Result<Term> {
        match mode {
            Approx::Keep => Ok(t.clone()),
            Approx::Whole => self.bracket(t, positive),
            Approx::Skeleton => self.skeleton(t, positive),
        }
    }
}

/// Every inner node of the signed subterm can be read as a PIA node.
fn is_pia_subterm(t: &Term, positive: bool) -> Result<bool> {
    let Some((c, kids)) = t.split() else { return Ok(true) };
    if !classes(c, positive)?.iter().any(|k| !k.skeleton()) {
        return Ok(false);
    }
    for (i, k) in kids.into_iter().enumerate() {
        if !is_pia_subterm(k, if c.monotone(i) { positive } else { !positive })? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn next_index(q: &QuasiIneq) -> usize {
    q.vars.iter().filter_map(|v| v.name[1..].parse::<usize>().ok()).max().unwrap_or(0)
}

/// First approximation with an explicit treatment of each side.
pub fn first_approximation_with(q: &QuasiIneq, lhs: Approx, rhs: Approx) -> Result<QuasiIneq> {
    let mut fresh = Fresh { next: next_index(q), vars: q.vars.clone(), hyps: q.hyps.clone() };
    let l = fresh.side(&q.concl.lhs, true, lhs)?;
    let r = fresh.side(&q.concl.rhs, false, rhs)?;
    Ok(QuasiIneq { vars: fresh.vars, hyps: fresh.hyps, concl: Ineq::new(l, r) })
}

/// `s <= t` becomes `forall i m [i <= s_pia & t_pia <= m => skeleton]`.
pub fn first_approximation(ineq: &Ineq) -> Result<QuasiIneq> {
    first_approximation_with(&QuasiIneq::plain(ineq.lhs.clone(), ineq.rhs.clone()), Approx::Skeleton, Approx::Skeleton)
}

// ---------------------------------------------------------------- adjunction

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Hyp(usize),
    Concl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn target_mut(q: &mut QuasiIneq, t: Target) -> Result<&mut Ineq> {
    match t {
        Target::Concl => Ok(&mut q.concl),
        Target::Hyp(i) => q.hyps.get_mut(i).ok_or(AlbaError::BadTarget(i)),
    }
}

/// Moves the outer connective of one side across `<=`. Returns the rule
/// family: adjunction for diamond/box pairs, residuation for the Galois
/// connections and negations.
fn move_outer(ineq: &Ineq, side: Side) -> Result<(Ineq, &'static str)> {
    let Ineq { lhs, rhs } = ineq;
    let no = |t: &Term, s| AlbaError::NoAdjoint(t.to_string(), s);
    match side {
        Side::Right => {
            let Some((c, kids)) = rhs.split() else { return Err(no(rhs, "right")) };
            let a = kids[0].clone();
            let left_adjoint = match c {
                Conn::BoxNi => Some(Conn::DiamIn),
                Conn::BoxNuc => Some(Conn::DiamBnuc),
                Conn::BoxNin => Some(Conn::DiamNni),
                Conn::BoxBnu => Some(Conn::DiamNu),
                _ => None,
            };
            if let Some(d) = left_adjoint {
                return Ok((Ineq::new(Term::unary(d, lhs.clone()), a), "Adjunction"));
            }
            match c {
                Conn::BoxArrNni => Ok((Ineq::new(a, Term::unary(Conn::BoxArrNin, lhs.clone())), "Residuation")),
                Conn::BoxArrNin => Ok((Ineq::new(a, Term::unary(Conn::BoxArrNni, lhs.clone())), "Residuation")),
                Conn::Neg | Conn::Sim => Ok((Ineq::new(a, Term::unary(c, lhs.clone())), "Residuation")),
                _ => Err(no(rhs, "right")),
            }
        }
        Side::Left => {
            let Some((c, kids)) = lhs.split() else { return Err(no(lhs, "left")) };
            let a = kids[0].clone();
            let right_adjoint = match c {
                Conn::DiamIn => Some(Conn::BoxNi),
                Conn::DiamBnuc => Some(Conn::BoxNuc),
                Conn::DiamNni => Some(Conn::BoxNin),
                Conn::DiamNu => Some(Conn::BoxBnu),
                _ => None,
            };
            if let Some(b) = right_adjoint {
                return Ok((Ineq::new(a, Term::unary(b, rhs.clone())), "Adjunction"));
            }
            match c {
                Conn::Neg | Conn::Sim => Ok((Ineq::new(Term::unary(c, rhs.clone()), a), "Residuation")),
                _ => Err(no(lhs, "left")),
            }
        }
    }
}

pub fn apply_adjunction(q: &QuasiIneq, target: Target, side: Side) -> Result<QuasiIneq> {
    let mut out = q.clone();
    let slot = target_mut(&mut out, target)?;
    *slot = move_outer(slot, side)?.0;
    Ok(out)
}

/// `l <= a & b` (or `a | b <= r`) becomes two hypotheses.
pub fn split(q: &QuasiIneq, hyp: usize) -> Result<QuasiIneq> {
    let h = q.hyps.get(hyp).ok_or(AlbaError::BadTarget(hyp))?;
    let pair = match (&h.lhs, &h.rhs) {
        (l, Term::And(a, b) | Term::Cap(a, b)) => (Ineq::new(l.clone(), (**a).clone()), Ineq::new(l.clone(), (**b).clone())),
        (Term::Or(a, b) | Term::Cup(a, b), r) => (Ineq::new((**a).clone(), r.clone()), Ineq::new((**b).clone(), r.clone())),
        _ => return Err(AlbaError::NotSplittable(h.to_string())),
    };
    let mut out = q.clone();
    out.hyps.splice(hyp..=hyp, [pair.0, pair.1]);
    Ok(out)
}

// ---------------------------------------------------------------- Ackermann

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AckDir {
    /// `p` has lower bounds and is replaced by their join.
    Left,
    /// `p` has upper bounds and is replaced by their meet.
    Right,
}

fn try_ackermann(q: &QuasiIneq, p: &Term, dir: AckDir) -> Option<(QuasiIneq, usize)> {
    let free = |t: &Term| !t.contains(&|x| x == p);
    let mut bounds = Vec::new();
    let mut rest = Vec::new();
    for h in &q.hyps {
        let is_bound = match dir {
            AckDir::Left => h.rhs == *p && free(&h.lhs),
            AckDir::Right => h.lhs == *p && free(&h.rhs),
        };
        if is_bound {
            bounds.push(match dir {
                AckDir::Left => h.lhs.clone(),
                AckDir::Right => h.rhs.clone(),
            });
        } else {
            rest.push(h);
        }
    }
    // Hypotheses must get weaker and the conclusion stronger as `p` moves
    // towards the bound.
    let hyp_ok = |h: &Ineq| match dir {
        AckDir::Left => monotone_in(&h.lhs, p) && antitone_in(&h.rhs, p),
        AckDir::Right => antitone_in(&h.lhs, p) && monotone_in(&h.rhs, p),
    };
    let concl_ok = match dir {
        AckDir::Left => antitone_in(&q.concl.lhs, p) && monotone_in(&q.concl.rhs, p),
        AckDir::Right => monotone_in(&q.concl.lhs, p) && antitone_in(&q.concl.rhs, p),
    };
    if !concl_ok || !rest.iter().all(|h| hyp_ok(h)) {
        return None;
    }
    let n = bounds.len();
    let value = match dir {
        AckDir::Left => join(Sort::S, bounds),
        AckDir::Right => meet(Sort::S, bounds),
    };
    let hyps = rest.into_iter().map(|h| h.replace(p, &value)).collect();
    Some((QuasiIneq { vars: q.vars.clone(), hyps, concl: q.concl.replace(p, &value) }, n))
}

/// Eliminates `prop`, preferring the side on which it has bounds. The count
/// of bounds used is returned; zero means plain variable elimination.
pub fn ackermann_counted(q: &QuasiIneq, prop: &str) -> Result<(QuasiIneq, usize)> {
    let p = Term::prop(prop);
    let tries = [AckDir::Left, AckDir::Right]
        .into_iter()
        .filter_map(|d| try_ackermann(q, &p, d))
        .collect::<Vec<_>>();
    tries
        .iter()
        .find(|(_, n)| *n > 0)
        .or(tries.first())
        .cloned()
        .ok_or_else(|| AlbaError::NotAckermann(prop.to_string()))
}

pub fn ackermann(q: &QuasiIneq, prop: &str) -> Result<QuasiIneq> {
    Ok(ackermann_counted(q, prop)?.0)
}

// ------------------------------------------------------ nominal elimination

/// How a term transforms a family of arguments: joins to joins, or meets to
/// meets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Carry {
    Joins,
    Meets,
}

fn completely_join_preserving(c: Conn, _arg: usize) -> bool {
    use Conn::*;
    matches!(c, DiamNu | DiamNni | DiamIn | DiamBnuc | DiamNi | And | Cap | BlackTri)
}

fn completely_meet_preserving(c: Conn, arg: usize) -> bool {
    use Conn::*;
    matches!(c, BoxNuc | BoxNi | BoxNin | BoxBnu | BoxNu | Or | Cup) || (matches!(c, Tri | BlackTriR) && arg == 1)
}

fn join_reversing(c: Conn, arg: usize) -> bool {
    use Conn::*;
    matches!(c, Neg | Sim | BoxArrNni | BoxArrNin) || (matches!(c, Tri | BlackTriR) && arg == 0)
}

fn meet_reversing(c: Conn, _arg: usize) -> bool {
    matches!(c, Conn::Neg | Conn::Sim)
}

fn carry(t: &Term, x: &Term, start: Carry) -> std::result::Result<Option<Carry>, String> {
    if t == x {
        return Ok(Some(start));
    }
    let Some((c, kids)) = t.split() else { return Ok(None) };
    let mut found = None;
    for (i, k) in kids.into_iter().enumerate() {
        if let Some(s) = carry(k, x, start)? {
            if found.is_some() {
                return Err("occurs more than once".into());
            }
            let next = match (s, c.monotone(i)) {
                (Carry::Joins, true) if completely_join_preserving(c, i) => Carry::Joins,
                (Carry::Meets, true) if completely_meet_preserving(c, i) => Carry::Meets,
                (Carry::Joins, false) if join_reversing(c, i) => Carry::Meets,
                (Carry::Meets, false) if meet_reversing(c, i) => Carry::Joins,
                _ => return Err(format!("`{}` does not carry {:?}", c.token(), s)),
            };
            found = Some(next);
        }
    }
    Ok(found)
}

/// Removes a quantified (co)nominal by substituting its bound: for a nominal
/// `j` with `j <= a`, `forall j [j <= a => s <= t(j)]` becomes `s <= t(a)`
/// when `t` turns joins into meets; dually for conominals. A missing
/// hypothesis counts as the trivial bound.
pub fn eliminate_nominal(q: &QuasiIneq, name: &str) -> Result<QuasiIneq> {
    let bad = |why: &str| AlbaError::NotEliminable(name.to_string(), why.to_string());
    let v = q.vars.iter().find(|v| v.name == name).ok_or_else(|| bad("not quantified"))?.clone();
    let nom = v.nom();
    let conom = v.conom();
    let uses_nom = q.ineqs().any(|i| i.contains(&|t| *t == nom));
    let uses_conom = q.ineqs().any(|i| i.contains(&|t| *t == conom));
    let (leaf, start) = match (uses_nom, uses_conom) {
        (true, false) => (nom, Carry::Joins),
        (false, true) => (conom, Carry::Meets),
        (false, false) => return Err(bad("does not occur")),
        (true, true) => return Err(bad("occurs as nominal and conominal")),
    };
    let mentions = |i: &Ineq| i.contains(&|t| v.mentions(t));
    let mut bound = None;
    let mut hyps = Vec::new();
    for h in &q.hyps {
        if !mentions(h) {
            hyps.push(h.clone());
            continue;
        }
        if bound.is_some() {
            return Err(bad("bounded twice"));
        }
        bound = Some(match start {
            Carry::Joins if h.lhs == leaf && !h.rhs.contains(&|t| v.mentions(t)) => h.rhs.clone(),
            Carry::Meets if h.rhs == leaf && !h.lhs.contains(&|t| v.mentions(t)) => h.lhs.clone(),
            _ => return Err(bad("hypothesis is not a bound")),
        });
    }
    let bound = bound.unwrap_or(match start {
        Carry::Joins => top(v.sort),
        Carry::Meets => bottom(v.sort),
    });
    let l = carry(&q.concl.lhs, &leaf, start).map_err(|e| bad(&e))?;
    let r = carry(&q.concl.rhs, &leaf, start).map_err(|e| bad(&e))?;
    match (l, r) {
        (Some(Carry::Joins), None) | (None, Some(Carry::Meets)) => {}
        (None, None) => return Err(bad("absent from the conclusion")),
        _ => return Err(bad("wrong preservation along its branch")),
    }
    Ok(QuasiIneq {
        vars: q.vars.iter().filter(|w| **w != v).cloned().collect(),
        hyps,
        concl: q.concl.replace(&leaf, &bound),
    })
}

/// Drops trivially true hypotheses and unused quantifiers.
pub fn simplify(q: &QuasiIneq) -> QuasiIneq {
    let hyps: Vec<Ineq> = q.hyps.iter().filter(|h| !h.trivial()).cloned().collect();
    let concl = q.concl.clone();
    let used = |v: &QVar| hyps.iter().chain(std::iter::once(&concl)).any(|i| i.contains(&|t| v.mentions(t)));
    let vars = q.vars.iter().filter(|v| used(v)).cloned().collect();
    QuasiIneq { vars, hyps, concl }
}

// ---------------------------------------------------------------- scripts

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    FirstApprox(Approx, Approx),
    Adjoin(Target, Side),
    Split(usize),
    Ackermann(&'static str),
    Eliminate(&'static str),
    Simplify,
}

use Approx::{Keep, Skeleton, Whole};
use Side::{Left, Right};
use Step::*;
use Target::Hyp;

/// Step list of each run.
pub fn script(id: AxiomId) -> Vec<Step> {
    match id {
        AxiomId::N => vec![FirstApprox(Skeleton, Skeleton), Simplify, Eliminate("Z2"), Eliminate("x1")],
        AxiomId::P => vec![FirstApprox(Keep, Skeleton)],
        AxiomId::C => vec![
            FirstApprox(Skeleton, Skeleton),
            Adjoin(Hyp(0), Right),
            Adjoin(Hyp(1), Right),
            Ackermann("p"),
            Ackermann("q"),
            Adjoin(Hyp(0), Left),
        ],
        AxiomId::Four => vec![FirstApprox(Whole, Skeleton), Adjoin(Hyp(1), Left), Ackermann("p")],
        AxiomId::FourPrime => vec![FirstApprox(Skeleton, Whole), Adjoin(Hyp(0), Right), Ackermann("p"), Eliminate("x2")],
        AxiomId::Five => vec![
            FirstApprox(Skeleton, Whole),
            Adjoin(Hyp(0), Left),
            Adjoin(Hyp(0), Left),
            Ackermann("p"),
            Eliminate("x2"),
        ],
        AxiomId::B => vec![FirstApprox(Skeleton, Keep), Ackermann("p")],
        AxiomId::D => vec![FirstApprox(Skeleton, Skeleton), Adjoin(Hyp(0), Right), Ackermann("p"), Eliminate("Z2")],
        AxiomId::T => vec![FirstApprox(Skeleton, Skeleton), Adjoin(Hyp(0), Right), Ackermann("p"), Eliminate("x2")],
        AxiomId::CS => vec![
            FirstApprox(Skeleton, Skeleton),
            Split(0),
            Split(2),
            Adjoin(Hyp(3), Right),
            Ackermann("p"),
            Ackermann("q"),
            Eliminate("x3"),
        ],
        AxiomId::CEM => vec![
            FirstApprox(Keep, Skeleton),
            Split(0),
            Split(3),
            Adjoin(Hyp(1), Right),
            Adjoin(Hyp(4), Right),
            Adjoin(Hyp(5), Left),
            Ackermann("p"),
            Ackermann("q"),
            Adjoin(Hyp(1), Left),
            Eliminate("x4"),
        ],
        AxiomId::ID => vec![
            FirstApprox(Keep, Skeleton),
            Split(0),
            Adjoin(Hyp(0), Right),
            Adjoin(Hyp(1), Right),
            Ackermann("p"),
            Eliminate("x2"),
        ],
        AxiomId::CN => vec![
            FirstApprox(Keep, Skeleton),
            Split(0),
            Split(3),
            Adjoin(Hyp(1), Right),
            Adjoin(Hyp(4), Right),
            Ackermann("p"),
            Ackermann("q"),
        ],
        AxiomId::Tcond => vec![Ackermann("p")],
    }
}

/// The inequality a run starts from: the translated table sequent.
pub fn source_ineq(id: AxiomId) -> Result<Ineq> {
    let s = translate_sequent(&id.sequent(), id.mode())?;
    match (s.lhs, s.rhs) {
        (Structure::Form(l), Structure::Form(r)) => Ok(Ineq::new(l, r)),
        _ => unreachable!("translations are formulas"),
    }
}

/// Applies one step, returning the result and its annotation.
pub fn apply_step(q: &QuasiIneq, step: Step) -> Result<(QuasiIneq, String)> {
    Ok(match step {
        FirstApprox(l, r) => (first_approximation_with(q, l, r)?, "first approx.".into()),
        Adjoin(t, s) => {
            let mut out = q.clone();
            let slot = target_mut(&mut out, t)?;
            let (next, label) = move_outer(slot, s)?;
            *slot = next;
            (out, label.into())
        }
        Split(i) => (split(q, i)?, "Splitting".into()),
        Ackermann(p) => {
            let (out, n) = ackermann_counted(q, p)?;
            (out, if n == 0 { "Variable elimination".into() } else { format!("Ackermann ({})", p) })
        }
        Eliminate(v) => (eliminate_nominal(q, v)?, format!("inverse approx. ({})", v)),
        Simplify => (simplify(q), "Simplification".into()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunStep {
    pub label: String,
    pub q: QuasiIneq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub axiom: AxiomId,
    pub steps: Vec<RunStep>,
}

impl Run {
    pub fn output(&self) -> &QuasiIneq {
        &self.steps.last().expect("runs start with their source").q
    }
}

/// Replays the script of `id` and keeps every intermediate form.
pub fn trace_alba(id: AxiomId) -> Result<Run> {
    let src = source_ineq(id)?;
    let mut cur = QuasiIneq::plain(src.lhs, src.rhs);
    let mut steps = vec![RunStep { label: "input".into(), q: cur.clone() }];
    for (i, step) in script(id).into_iter().enumerate() {
        let (next, label) =
            apply_step(&cur, step).map_err(|e| AlbaError::Step { axiom: id, step: i + 1, source: Box::new(e) })?;
        cur = next;
        steps.push(RunStep { label, q: cur.clone() });
    }
    Ok(Run { axiom: id, steps })
}

/// The pure quasi-inequality a run ends with.
pub fn run_alba(id: AxiomId) -> Result<QuasiIneq> {
    let run = trace_alba(id)?;
    let out = run.output().clone();
    if !out.is_pure() {
        return Err(AlbaError::NotPure);
    }
    Ok(out)
}

// ---------------------------------------------------------------- semantics

/// Truth of `q` on the complex algebra of `k`, quantifying propositions over
/// subsets of the first sort and (co)nominals over points of their sort.
pub fn holds<K: TwoSorted + ?Sized>(q: &QuasiIneq, k: &K) -> Result<bool> {
    let props = q.props();
    if props.len() > crate::semantics::MAX_PROPS {
        return Err(SemError::TooManyProps(props.len()).into());
    }
    let nx = k.carrier(Sort::S);
    let mut ranges: Vec<u64> = props.iter().map(|_| 1u64 << nx).collect();
    ranges.extend(q.vars.iter().map(|v| k.carrier(v.sort) as u64));
    let mut code = vec![0u64; ranges.len()];
    if ranges.iter().any(|r| *r == 0) {
        return Ok(true);
    }
    let mut env = Env::new();
    loop {
        env.entries.clear();
        for (p, v) in props.iter().zip(&code) {
            env.bind(Term::Prop(p.clone()), *v as Set);
        }
        for (var, v) in q.vars.iter().zip(&code[props.len()..]) {
            let all = full(k.carrier(var.sort));
            env.bind(var.nom(), 1 << v);
            env.bind(var.conom(), all & !(1 << v));
        }
        let sat = |i: &Ineq| -> Result<bool> {
            Ok(subset(crate::semantics::eval_mt(k, &env, &i.lhs)?, crate::semantics::eval_mt(k, &env, &i.rhs)?))
        };
        let mut hyps_hold = true;
        for h in &q.hyps {
            if !sat(h)? {
                hyps_hold = false;
                break;
            }
        }
        if hyps_hold && !sat(&q.concl)? {
            return Ok(false);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == code.len() {
                return Ok(true);
            }
            code[i] += 1;
            if code[i] < ranges[i] {
                break;
            }
            code[i] = 0;
            i += 1;
        }
    }
}

/// Truth of `q` on the dual two-sorted frame of `frame`.
pub fn holds_on(q: &QuasiIneq, frame: &Frame) -> Result<bool> {
    match frame {
        Frame::N(f) => holds(q, &star_n(f)),
        Frame::C(g) => holds(q, &star_c(g)),
    }
}

/// Evaluates a pure quasi-inequality on `frame`.
pub fn verify_pure(q: &QuasiIneq, frame: &Frame) -> Result<bool> {
    if !q.is_pure() {
        return Err(AlbaError::NotPure);
    }
    holds_on(q, frame)
}

/// A step of a run whose truth differs from the axiom's on some frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disagreement {
    pub step: usize,
    pub frame: Frame,
    pub axiom_valid: bool,
}

/// Compares every step of `run` with validity of the source axiom.
pub fn check_run(run: &Run, frames: &[Frame]) -> Result<Vec<Disagreement>> {
    let per_frame = crate::par::map(frames, |f| -> Result<Vec<Disagreement>> {
        let valid = valid_formula(f, &run.axiom.formula())?;
        let mut out = Vec::new();
        for (i, s) in run.steps.iter().enumerate() {
            if holds_on(&s.q, f)? != valid {
                out.push(Disagreement { step: i, frame: f.clone(), axiom_valid: valid });
            }
        }
        Ok(out)
    });
    let mut all = Vec::new();
    for r in per_frame {
        all.extend(r?);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::{frame_condition, standard_family};
    use crate::semantics::{all_nframes, NFrame};
    use crate::syntax::{parse_term, Mode};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn first_approximation_of_c() {
        let src = source_ineq(AxiomId::C).unwrap();
        let q = first_approximation(&src).unwrap();
        assert_eq!(
            q.to_string(),
            "forall Z1 Z2 Z3. [{Z1} <= [ni] p & {Z2} <= [ni] q & <nni> (p & q) <= -{Z3} => (<nu> {Z1} & <nu> {Z2}) <= [nuc] -{Z3}]"
        );
    }

    #[test]
    fn first_approximation_of_atoms() {
        let q = first_approximation(&Ineq::new(t("p"), t("p"))).unwrap();
        assert_eq!(q.to_string(), "forall x1 x2. [{x1} <= p & p <= -{x2} => {x1} <= -{x2}]");
    }

    #[test]
    fn adjunction_examples() {
        let i = Ineq::new(Term::nom(Sort::N, "Z1"), t("[ni] p"));
        assert_eq!(move_outer(&i, Side::Right).unwrap().0.to_string(), "<in> {Z1} <= p");
        let i = Ineq::new(t("<nni> (p & q)"), Term::conom(Sort::N, "Z3"));
        assert_eq!(move_outer(&i, Side::Left).unwrap().0.to_string(), "(p & q) <= [nin] -{Z3}");
        let i = Ineq::new(Term::nom(Sort::N, "Z"), t("[nni> p"));
        assert_eq!(move_outer(&i, Side::Right).unwrap().0.to_string(), "p <= [nin> {Z}");
        assert!(move_outer(&Ineq::new(t("p"), t("q")), Side::Right).is_err());
    }

    #[test]
    fn ackermann_is_vacuous_on_absent_props() {
        let q = QuasiIneq::plain(t("q"), t("q"));
        assert_eq!(ackermann(&q, "p").unwrap(), q);
    }

    #[test]
    fn c_run_ends_in_the_displayed_form() {
        let out = run_alba(AxiomId::C).unwrap();
        assert_eq!(
            out.to_string(),
            "forall Z1 Z2 Z3. [(<in> {Z1} & <in> {Z2}) <= [nin] -{Z3} => (<nu> {Z1} & <nu> {Z2}) <= [nuc] -{Z3}]"
        );
    }

    #[test]
    fn d_and_t_runs() {
        assert_eq!(run_alba(AxiomId::D).unwrap().to_string(), "forall Z1. <nu> {Z1} <= ~<nu> [ni] ~<in> {Z1}");
        assert_eq!(run_alba(AxiomId::T).unwrap().to_string(), "forall Z1. <nu> {Z1} <= <in> {Z1}");
    }

    #[test]
    fn every_run_completes_pure() {
        for id in AxiomId::ALL {
            let run = trace_alba(id).unwrap_or_else(|e| panic!("{}", e));
            assert!(run.output().is_pure(), "{}: {}", id, run.output());
        }
    }

    #[test]
    fn n_output_fails_on_the_empty_neighbourhood() {
        let q = run_alba(AxiomId::N).unwrap();
        let f = Frame::N(NFrame::new(2, vec![0, 0]).unwrap());
        assert!(!verify_pure(&q, &f).unwrap());
    }

    #[test]
    fn tautology_holds_everywhere() {
        let j = Term::nom(Sort::S, "x1");
        let q = QuasiIneq { vars: vec![QVar { sort: Sort::S, name: "x1".into() }], hyps: vec![], concl: Ineq::new(j.clone(), j) };
        for f in all_nframes(2) {
            assert!(verify_pure(&q, &Frame::N(f)).unwrap());
        }
    }

    #[test]
    fn c_output_matches_validity_on_small_frames() {
        let q = run_alba(AxiomId::C).unwrap();
        for f in (1..=2).flat_map(all_nframes) {
            let f = Frame::N(f);
            assert_eq!(verify_pure(&q, &f).unwrap(), valid_formula(&f, &AxiomId::C.formula()).unwrap());
        }
    }

    #[test]
    fn n_rows_step_by_step() {
        let frames = standard_family(Mode::Nabla, 2, 0, 0);
        for id in AxiomId::ALL.into_iter().filter(|a| a.mode() == Mode::Nabla) {
            let run = trace_alba(id).unwrap();
            let bad = check_run(&run, &frames).unwrap();
            assert!(bad.is_empty(), "{}: step {} ({}) on {:?}", id, bad[0].step, run.steps[bad[0].step].q, bad[0].frame);
            for f in &frames {
                assert_eq!(verify_pure(run.output(), f).unwrap(), frame_condition(id, f).unwrap());
            }
        }
    }

    #[test]
    fn c_rows_step_by_step() {
        let frames = standard_family(Mode::Cond, 2, 30, 11);
        for id in AxiomId::ALL.into_iter().filter(|a| a.mode() == Mode::Cond) {
            let run = trace_alba(id).unwrap();
            let bad = check_run(&run, &frames).unwrap();
            assert!(bad.is_empty(), "{}: step {} ({}) on {:?}", id, bad[0].step, run.steps[bad[0].step].q, bad[0].frame);
        }
    }

    #[test]
    fn c_outputs_match_conditions_on_every_two_world_frame() {
        let outs: Vec<(AxiomId, QuasiIneq)> = AxiomId::ALL
            .iter()
            .filter(|a| a.mode() == Mode::Cond)
            .map(|&a| (a, run_alba(a).unwrap()))
            .collect();
        for code in 0..1u64 << 16 {
            let g = crate::semantics::CFrame::new(2, (0..8).map(|i| (code >> (2 * i)) & 3).collect()).unwrap();
            let f = Frame::C(g);
            for (id, q) in &outs {
                assert_eq!(verify_pure(q, &f).unwrap(), frame_condition(*id, &f).unwrap(), "{} on {:?}", id, f);
            }
        }
    }
}
