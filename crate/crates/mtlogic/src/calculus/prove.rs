//! Bounded backward proof search.
//!
//! Each visited sequent is first closed under the display postulates
//! (breadth first, so display detours are as short as possible). Within that
//! class the search tries, in order: axioms with lazy weakening, one
//! invertible logical rule (committed to), the remaining logical and
//! extension rules, then structural rules and cut under a separate budget.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::syntax::{SConn, Sequent, Sort, Structure, Term};

use super::rules::{backward, is_atom, Rule, RuleKind, RuleSet};
use super::Derivation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Maximum derivation height.
    pub depth: usize,
    /// Structural and cut steps allowed per branch.
    pub structural: usize,
    pub max_nodes: usize,
    pub timeout: Option<Duration>,
}

impl Limits {
    pub fn depth(depth: usize) -> Limits {
        Limits { depth, structural: 2, max_nodes: 400_000, timeout: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProveFailure {
    #[error("no derivation within depth {0}")]
    Exhausted(usize),
    #[error("search budget spent after {0} nodes")]
    Budget(usize),
}

/// Largest display class explored from one sequent.
const CLASS_CAP: usize = 256;

pub fn prove(s: &Sequent, rs: &RuleSet, depth: usize) -> Result<Derivation, ProveFailure> {
    prove_with(s, rs, &Limits::depth(depth))
}

pub fn prove_with(s: &Sequent, rs: &RuleSet, limits: &Limits) -> Result<Derivation, ProveFailure> {
    let mut search = Search::new(rs, limits.clone(), s);
    for budget in 0..=limits.structural {
        if let Some(d) = search.search(s, limits.depth, budget) {
            return Ok(d);
        }
        if search.aborted {
            return Err(ProveFailure::Budget(search.nodes));
        }
    }
    Err(ProveFailure::Exhausted(limits.depth))
}

struct Member {
    seq: Sequent,
    parent: usize,
    rule: &'static str,
    dist: usize,
}

struct Search<'a> {
    invertible: Vec<&'a Rule>,
    productive: Vec<&'a Rule>,
    display: Vec<&'a Rule>,
    structural: Vec<&'a Rule>,
    cut: bool,
    cut_forms: Vec<Term>,
    limits: Limits,
    start: Instant,
    nodes: usize,
    aborted: bool,
    memo: HashMap<Sequent, Vec<(usize, usize)>>,
    path: HashSet<Sequent>,
}

fn subterms(t: &Term, out: &mut Vec<Term>) {
    if !out.contains(t) {
        out.push(t.clone());
    }
    if let Some((_, kids)) = t.split() {
        kids.into_iter().for_each(|k| subterms(k, out));
    }
}

fn double_tilde(s: &Structure) -> bool {
    match s {
        Structure::SNeg(a) if matches!(**a, Structure::SNeg(_)) => true,
        Structure::NSim(a) if matches!(**a, Structure::NSim(_)) => true,
        _ => s.split().map(|(_, kids)| kids.into_iter().any(double_tilde)).unwrap_or(false),
    }
}

fn bad(s: &Sequent) -> bool {
    double_tilde(&s.lhs) || double_tilde(&s.rhs)
}

/// Leaves reachable from the root through `op` nodes, with their paths.
fn leaves<'s>(s: &'s Structure, op: SConn, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'s Structure)>) {
    match s.split() {
        Some((c, kids)) if c == op => {
            for (i, k) in kids.into_iter().enumerate() {
                path.push(i);
                leaves(k, op, path, out);
                path.pop();
            }
        }
        _ => out.push((path.clone(), s)),
    }
}

fn kids2(s: &Structure) -> (Structure, Structure) {
    let (_, k) = s.split().expect("binary node");
    (k[0].clone(), k[1].clone())
}

/// Steps that strip `seq` down to the chosen conjunct on the left and
/// disjunct on the right using exchange and weakening. Each entry is
/// derived from the next one by its rule.
fn peel(seq: &Sequent, lpath: &[usize], rpath: &[usize]) -> (Vec<(Sequent, &'static str)>, Sequent) {
    let mut steps = Vec::new();
    let mut cur = seq.clone();
    for &i in lpath {
        let (a, b) = kids2(&cur.lhs);
        if i == 1 {
            steps.push((cur.clone(), "E_S"));
            cur = Sequent::new(Structure::SAnd(Box::new(b.clone()), Box::new(a.clone())), cur.rhs.clone());
        }
        steps.push((cur.clone(), "W_S"));
        cur = Sequent::new(if i == 1 { b } else { a }, cur.rhs.clone());
    }
    for &i in rpath {
        let (a, b) = kids2(&cur.rhs);
        if i == 1 {
            steps.push((cur.clone(), "E_S"));
            cur = Sequent::new(cur.lhs.clone(), Structure::SOr(Box::new(b.clone()), Box::new(a.clone())));
        }
        steps.push((cur.clone(), "W_S"));
        cur = Sequent::new(cur.lhs.clone(), if i == 1 { b } else { a });
    }
    (steps, cur)
}

fn fold(steps: Vec<(Sequent, &'static str)>, leaf: Derivation) -> Derivation {
    steps.into_iter().rev().fold(leaf, |d, (s, r)| Derivation::node(s, r, vec![d]))
}

impl<'a> Search<'a> {
    fn new(rs: &'a RuleSet, limits: Limits, goal: &Sequent) -> Search<'a> {
        let pick = |f: &dyn Fn(&Rule) -> bool| rs.rules.iter().filter(|r| f(r)).collect::<Vec<_>>();
        let mut cut_forms = Vec::new();
        let mut fs = Vec::new();
        goal.lhs.formulas(&mut fs);
        goal.rhs.formulas(&mut fs);
        for f in fs {
            subterms(f, &mut cut_forms);
        }
        Search {
            invertible: pick(&|r| r.invertible()),
            productive: pick(&|r| {
                (r.kind == RuleKind::Logical && !r.invertible()) || r.kind == RuleKind::Extension
            }),
            display: pick(&|r| r.kind == RuleKind::Display),
            structural: pick(&|r| r.kind == RuleKind::Structural),
            cut: rs.cut,
            cut_forms,
            limits,
            start: Instant::now(),
            nodes: 0,
            aborted: false,
            memo: HashMap::new(),
            path: HashSet::new(),
        }
    }

    fn spent(&mut self) -> bool {
        if self.nodes > self.limits.max_nodes {
            self.aborted = true;
        }
        if self.nodes % 256 == 0 {
            if let Some(t) = self.limits.timeout {
                if self.start.elapsed() > t {
                    self.aborted = true;
                }
            }
        }
        self.aborted
    }

    fn search(&mut self, s: &Sequent, depth: usize, budget: usize) -> Option<Derivation> {
        if depth == 0 || self.aborted {
            return None;
        }
        self.nodes += 1;
        if self.spent() {
            return None;
        }
        if let Some(fails) = self.memo.get(s) {
            if fails.iter().any(|&(d, b)| d >= depth && b >= budget) {
                return None;
            }
        }
        self.path.insert(s.clone());
        let res = self.expand(s, depth, budget);
        self.path.remove(s);
        if res.is_none() && !self.aborted {
            self.memo.entry(s.clone()).or_default().push((depth, budget));
        }
        res
    }

    /// Display-equivalent sequents within `max` postulate steps.
    fn class(&self, s: &Sequent, max: usize) -> Vec<Member> {
        let mut out = vec![Member { seq: s.clone(), parent: usize::MAX, rule: "", dist: 0 }];
        let mut seen: HashSet<Sequent> = HashSet::new();
        seen.insert(s.clone());
        let mut i = 0;
        while i < out.len() && out.len() < CLASS_CAP {
            if out[i].dist < max {
                for r in &self.display {
                    for ps in backward(r, &out[i].seq) {
                        let p = ps.into_iter().next().unwrap();
                        if !bad(&p) && seen.insert(p.clone()) {
                            let dist = out[i].dist + 1;
                            out.push(Member { seq: p, parent: i, rule: r.name, dist });
                        }
                    }
                }
            }
            i += 1;
        }
        out
    }

    fn wrap(cls: &[Member], mut i: usize, mut d: Derivation) -> Derivation {
        while cls[i].parent != usize::MAX {
            let parent = cls[i].parent;
            d = Derivation::node(cls[parent].seq.clone(), cls[i].rule, vec![d]);
            i = parent;
        }
        d
    }

    /// Close `seq` by an axiom after discarding context.
    fn close(seq: &Sequent, room: usize) -> Option<Derivation> {
        if seq.lhs.sort().ok()? != Sort::S {
            return None;
        }
        let (mut ls, mut rs) = (Vec::new(), Vec::new());
        leaves(&seq.lhs, SConn::SAnd, &mut Vec::new(), &mut ls);
        leaves(&seq.rhs, SConn::SOr, &mut Vec::new(), &mut rs);
        let mut best: Option<Derivation> = None;
        let mut consider = |d: Derivation| {
            if d.depth() <= room && best.as_ref().map(|b| d.depth() < b.depth()).unwrap_or(true) {
                best = Some(d);
            }
        };
        // p |- p
        for (lp, l) in &ls {
            if let Structure::Form(a) = l {
                if !is_atom(a) {
                    continue;
                }
                for (rp, r) in &rs {
                    if *r == *l {
                        let (steps, end) = peel(seq, lp, rp);
                        consider(fold(steps, Derivation::leaf(end, "Id_S")));
                    }
                }
            }
        }
        // bot |- {bot} and {top} |- top, inserting the unit when missing
        let unit = |side_has: Option<&Vec<usize>>, leaf_path: &Vec<usize>, left: bool| {
            let mut steps = Vec::new();
            let mut cur = seq.clone();
            let (lp, rp) = match side_has {
                Some(p) => {
                    if left {
                        (p.clone(), leaf_path.clone())
                    } else {
                        (leaf_path.clone(), p.clone())
                    }
                }
                None => {
                    if left {
                        steps.push((cur.clone(), "unit_top"));
                        cur = Sequent::new(Structure::SAnd(Box::new(cur.lhs.clone()), Box::new(Structure::STop)), cur.rhs);
                        (vec![1], leaf_path.clone())
                    } else {
                        steps.push((cur.clone(), "unit_bot"));
                        cur = Sequent::new(cur.lhs.clone(), Structure::SOr(Box::new(cur.rhs), Box::new(Structure::SBot)));
                        (leaf_path.clone(), vec![1])
                    }
                }
            };
            let (more, end) = peel(&cur, &lp, &rp);
            steps.extend(more);
            (steps, end)
        };
        if let Some((lp, _)) = ls.iter().find(|(_, l)| matches!(l, Structure::Form(Term::Bot))) {
            let has = rs.iter().find(|(_, r)| matches!(r, Structure::SBot)).map(|(p, _)| p);
            let (steps, end) = unit(has, lp, false);
            consider(fold(steps, Derivation::leaf(end, "bot")));
        }
        if let Some((rp, _)) = rs.iter().find(|(_, r)| matches!(r, Structure::Form(Term::Top))) {
            let has = ls.iter().find(|(_, l)| matches!(l, Structure::STop)).map(|(p, _)| p);
            let (steps, end) = unit(has, rp, true);
            consider(fold(steps, Derivation::leaf(end, "top")));
        }
        best
    }

    fn try_rule(&mut self, premises: Vec<Sequent>, room: usize, budget: usize) -> Option<Vec<Derivation>> {
        if room < 2 || premises.iter().any(|p| self.path.contains(p) || bad(p)) {
            return None;
        }
        let mut kids = Vec::with_capacity(premises.len());
        for p in &premises {
            kids.push(self.search(p, room - 1, budget)?);
        }
        Some(kids)
    }

    fn expand(&mut self, s: &Sequent, depth: usize, budget: usize) -> Option<Derivation> {
        let cls = self.class(s, depth - 1);
        for (i, m) in cls.iter().enumerate() {
            if let Some(d) = Self::close(&m.seq, depth - m.dist) {
                return Some(Self::wrap(&cls, i, d));
            }
        }
        // One invertible step, committed to.
        let inv = self.invertible.clone();
        for (i, m) in cls.iter().enumerate() {
            for r in &inv {
                for ps in backward(r, &m.seq) {
                    if depth - m.dist < 2 || self.path.contains(&ps[0]) || bad(&ps[0]) {
                        continue;
                    }
                    let kids = self.try_rule(ps, depth - m.dist, budget);
                    return kids.map(|k| Self::wrap(&cls, i, Derivation::node(m.seq.clone(), r.name, k)));
                }
            }
        }
        let prod = self.productive.clone();
        for (i, m) in cls.iter().enumerate() {
            for r in &prod {
                for ps in backward(r, &m.seq) {
                    if let Some(k) = self.try_rule(ps, depth - m.dist, budget) {
                        return Some(Self::wrap(&cls, i, Derivation::node(m.seq.clone(), r.name, k)));
                    }
                    if self.aborted {
                        return None;
                    }
                }
            }
        }
        if budget == 0 {
            return None;
        }
        let structural = self.structural.clone();
        for (i, m) in cls.iter().enumerate() {
            let size = m.seq.size();
            for r in &structural {
                for ps in backward(r, &m.seq) {
                    if ps[0].size() > size + 2 {
                        continue;
                    }
                    if let Some(k) = self.try_rule(ps, depth - m.dist, budget - 1) {
                        return Some(Self::wrap(&cls, i, Derivation::node(m.seq.clone(), r.name, k)));
                    }
                    if self.aborted {
                        return None;
                    }
                }
            }
        }
        if self.cut {
            let forms = self.cut_forms.clone();
            for (i, m) in cls.iter().enumerate() {
                let sort = match m.seq.lhs.sort() {
                    Ok(s) => s,
                    Err(_) => continue,
                };
                for a in forms.iter().filter(|a| a.sort().ok() == Some(sort)) {
                    let f = Structure::Form(a.clone());
                    let ps = vec![Sequent::new(m.seq.lhs.clone(), f.clone()), Sequent::new(f, m.seq.rhs.clone())];
                    if let Some(k) = self.try_rule(ps, depth - m.dist, budget - 1) {
                        let name = if sort == Sort::S { "Cut_S" } else { "Cut_N" };
                        return Some(Self::wrap(&cls, i, Derivation::node(m.seq.clone(), name, k)));
                    }
                    if self.aborted {
                        return None;
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check_derivation, ruleset};
    use crate::correspondence::AxiomId;
    use crate::syntax::{parse_sequent, Sig};
    use crate::translate::translate_sequent;

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    fn translated(id: AxiomId) -> Sequent {
        translate_sequent(&id.sequent(), id.mode()).unwrap()
    }

    #[test]
    fn identity_is_one_node() {
        let rs = ruleset(Sig::Nabla, &[], false).unwrap();
        let d = prove(&seq("p |- p"), &rs, 1).unwrap();
        assert_eq!(d.size(), 1);
        assert_eq!(d.rule, "Id_S");
    }

    #[test]
    fn underivable_is_exhausted() {
        let rs = ruleset(Sig::Nabla, &[], false).unwrap();
        for depth in [1, 4, 8] {
            assert_eq!(prove(&seq("p |- q"), &rs, depth), Err(ProveFailure::Exhausted(depth)));
        }
    }

    #[test]
    fn weakening_closes_lazily() {
        let rs = ruleset(Sig::Nabla, &[], false).unwrap();
        for goal in ["(q {&} p) |- (p {|} r)", "bot |- q", "p |- top", "(p & q) |- (q | r)"] {
            let d = prove(&seq(goal), &rs, 8).unwrap_or_else(|e| panic!("{}: {}", goal, e));
            assert_eq!(check_derivation(&d, &rs), Ok(()), "{}\n{}", goal, d);
        }
    }

    #[test]
    fn translated_axioms() {
        for (id, sig) in [(AxiomId::N, Sig::Nabla), (AxiomId::P, Sig::Nabla), (AxiomId::T, Sig::Nabla), (AxiomId::ID, Sig::Cond)] {
            let rs = ruleset(sig, &[id], false).unwrap();
            let goal = translated(id);
            let d = prove(&goal, &rs, 14).unwrap_or_else(|e| panic!("{}: {}", id, e));
            assert_eq!(d.sequent, goal);
            assert!(d.depth() <= 14);
            assert_eq!(check_derivation(&d, &rs), Ok(()), "{}\n{}", id, d);
        }
    }

    #[test]
    fn n_needs_its_rule() {
        let rs = ruleset(Sig::Nabla, &[], false).unwrap();
        assert!(prove(&translated(AxiomId::N), &rs, 10).is_err());
    }
}
