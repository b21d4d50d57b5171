//! Rules read as quasi-inequalities on the complex algebra of a two-sorted
//! frame, and a fast brute-force checker for them.

use std::collections::HashMap;
use std::fmt;

use crate::alba::{Ineq, QVar};
use crate::semantics::{full, subset, Env, Set, TwoSorted};
use crate::syntax::{Conn, Sequent, Sort, Structure, Term};

use super::rules::Rule;
use super::Result;

/// Structural connectives read as their logical counterparts; structure
/// variables become carrier-wide variables.
pub fn structure_term(s: &Structure) -> Term {
    use Structure as St;
    let b = |x: &Structure| Box::new(structure_term(x));
    match s {
        St::Form(t) => t.clone(),
        St::Var(sort, n) => Term::Var(*sort, n.clone()),
        St::STop => Term::Top,
        St::SBot => Term::Bot,
        St::NOne => Term::One,
        St::NZero => Term::Zero,
        St::SNeg(a) => Term::Neg(b(a)),
        St::SAnd(x, y) => Term::And(b(x), b(y)),
        St::SOr(x, y) => Term::Or(b(x), b(y)),
        St::DiamNu(a) => Term::DiamNu(b(a)),
        St::BoxNuc(a) => Term::BoxNuc(b(a)),
        St::DiamIn(a) => Term::DiamIn(b(a)),
        St::BoxNin(a) => Term::BoxNin(b(a)),
        St::BoxArrNin(a) => Term::BoxArrNin(b(a)),
        St::Tri(x, y) => Term::Tri(b(x), b(y)),
        St::BlackTri(x, y) => Term::BlackTri(b(x), b(y)),
        St::NSim(a) => Term::Sim(b(a)),
        St::NCap(x, y) => Term::Cap(b(x), b(y)),
        St::NCup(x, y) => Term::Cup(b(x), b(y)),
        St::BoxNi(a) => Term::BoxNi(b(a)),
        St::DiamNni(a) => Term::DiamNni(b(a)),
        St::BoxArrNni(a) => Term::BoxArrNni(b(a)),
        St::BoxBnu(a) => Term::BoxBnu(b(a)),
        St::DiamBnuc(a) => Term::DiamBnuc(b(a)),
        St::BlackTriR(x, y) => Term::BlackTriR(b(x), b(y)),
    }
}

fn ineq_of(s: &Sequent) -> Ineq {
    Ineq::new(structure_term(&s.lhs), structure_term(&s.rhs))
}

/// `forall vars [premises => concl]`, or `<=>` for double-line rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleInterp {
    pub name: &'static str,
    pub vars: Vec<QVar>,
    pub premises: Vec<Ineq>,
    pub concl: Ineq,
    pub iff: bool,
}

impl fmt::Display for RuleInterp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.vars.is_empty() {
            let names: Vec<&str> = self.vars.iter().map(|v| v.name.as_str()).collect();
            write!(f, "forall {}. ", names.join(" "))?;
        }
        if self.premises.is_empty() {
            return write!(f, "{}", self.concl);
        }
        let ps: Vec<String> = self.premises.iter().map(|p| p.to_string()).collect();
        write!(f, "[{} {} {}]", ps.join(" & "), if self.iff { "<=>" } else { "=>" }, self.concl)
    }
}

fn leaf_vars(t: &Term, out: &mut Vec<QVar>) {
    match t {
        Term::Var(s, n) => {
            if !out.iter().any(|v| v.name == *n) {
                out.push(QVar { sort: *s, name: n.clone() });
            }
        }
        _ => {
            if let Some((_, kids)) = t.split() {
                kids.into_iter().for_each(|k| leaf_vars(k, out));
            }
        }
    }
}

pub fn interpret_rule(r: &Rule) -> RuleInterp {
    let premises: Vec<Ineq> = r.premises.iter().map(ineq_of).collect();
    let concl = ineq_of(&r.conclusion);
    let mut vars = Vec::new();
    for i in premises.iter().chain([&concl]) {
        leaf_vars(&i.lhs, &mut vars);
        leaf_vars(&i.rhs, &mut vars);
    }
    RuleInterp { name: r.name, vars, premises, concl, iff: r.double }
}

// ------------------------------------------------------------ compiled terms

/// Operation tables are only built when the argument carrier is small.
const TABLE_LIMIT: usize = 12;

enum Node {
    Slot(usize),
    Const(Set),
    Not(Box<Node>, Set),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Table1(usize, Box<Node>),
    Table2(usize, usize, Box<Node>, Box<Node>),
    Op1(Conn, Box<Node>),
    Op2(Conn, Box<Node>, Box<Node>),
}

struct Compiler<'k, K: TwoSorted + ?Sized> {
    k: &'k K,
    slots: Vec<(Term, Sort)>,
    tables: Vec<Vec<Set>>,
    table_of: HashMap<Conn, usize>,
}

impl<'k, K: TwoSorted + ?Sized> Compiler<'k, K> {
    fn new(k: &'k K) -> Self {
        Compiler { k, slots: Vec::new(), tables: Vec::new(), table_of: HashMap::new() }
    }

    fn slot(&mut self, t: &Term, sort: Sort) -> usize {
        match self.slots.iter().position(|(s, _)| s == t) {
            Some(i) => i,
            None => {
                self.slots.push((t.clone(), sort));
                self.slots.len() - 1
            }
        }
    }

    fn table(&mut self, c: Conn) -> Result<Option<usize>> {
        if let Some(&i) = self.table_of.get(&c) {
            return Ok(Some(i));
        }
        let (args, _) = c.typing();
        let sizes: Vec<usize> = args.iter().map(|s| self.k.carrier(*s)).collect();
        if sizes.iter().sum::<usize>() > TABLE_LIMIT {
            // probe once so unsupported connectives still fail here
            match sizes.len() {
                1 => self.k.op1(c, 0)?,
                _ => self.k.op2(c, 0, 0)?,
            };
            return Ok(None);
        }
        let tab = if sizes.len() == 1 {
            (0..1u64 << sizes[0]).map(|a| self.k.op1(c, a)).collect::<std::result::Result<Vec<_>, _>>()?
        } else {
            let mut v = Vec::with_capacity(1 << (sizes[0] + sizes[1]));
            for a in 0..1u64 << sizes[0] {
                for b in 0..1u64 << sizes[1] {
                    v.push(self.k.op2(c, a, b)?);
                }
            }
            v
        };
        self.tables.push(tab);
        self.table_of.insert(c, self.tables.len() - 1);
        Ok(Some(self.tables.len() - 1))
    }

    fn compile(&mut self, t: &Term) -> Result<Node> {
        let sx = full(self.k.carrier(Sort::S));
        let sy = full(self.k.carrier(Sort::N));
        let b = |n: Node| Box::new(n);
        Ok(match t {
            Term::Prop(_) => Node::Slot(self.slot(t, Sort::S)),
            Term::Var(s, _) => Node::Slot(self.slot(t, *s)),
            Term::Nom(..) | Term::CoNom(..) => Node::Slot(self.slot(t, t.sort()?)),
            Term::Top => Node::Const(sx),
            Term::Bot | Term::Zero => Node::Const(0),
            Term::One => Node::Const(sy),
            Term::Neg(a) => Node::Not(b(self.compile(a)?), sx),
            Term::Sim(a) => Node::Not(b(self.compile(a)?), sy),
            Term::And(x, y) | Term::Cap(x, y) => Node::And(b(self.compile(x)?), b(self.compile(y)?)),
            Term::Or(x, y) | Term::Cup(x, y) => Node::Or(b(self.compile(x)?), b(self.compile(y)?)),
            _ => {
                let (c, kids) = t.split().expect("non-leaf");
                let tab = self.table(c)?;
                if kids.len() == 1 {
                    let a = b(self.compile(kids[0])?);
                    match tab {
                        Some(i) => Node::Table1(i, a),
                        None => Node::Op1(c, a),
                    }
                } else {
                    let x = b(self.compile(kids[0])?);
                    let y = b(self.compile(kids[1])?);
                    match tab {
                        Some(i) => Node::Table2(i, self.k.carrier(c.typing().0[1]), x, y),
                        None => Node::Op2(c, x, y),
                    }
                }
            }
        })
    }
}

struct Eval<'k, K: TwoSorted + ?Sized> {
    k: &'k K,
    tables: Vec<Vec<Set>>,
}

impl<'k, K: TwoSorted + ?Sized> Eval<'k, K> {
    fn eval(&self, n: &Node, vals: &[Set]) -> Set {
        match n {
            Node::Slot(i) => vals[*i],
            Node::Const(c) => *c,
            Node::Not(a, all) => all & !self.eval(a, vals),
            Node::And(x, y) => self.eval(x, vals) & self.eval(y, vals),
            Node::Or(x, y) => self.eval(x, vals) | self.eval(y, vals),
            Node::Table1(t, a) => self.tables[*t][self.eval(a, vals) as usize],
            Node::Table2(t, w, x, y) => {
                self.tables[*t][((self.eval(x, vals) as usize) << w) | self.eval(y, vals) as usize]
            }
            // Support was checked at compile time through the table builder.
            Node::Op1(c, a) => self.k.op1(*c, self.eval(a, vals)).unwrap_or(0),
            Node::Op2(c, x, y) => self.k.op2(*c, self.eval(x, vals), self.eval(y, vals)).unwrap_or(0),
        }
    }
}

struct CIneq {
    lhs: Node,
    rhs: Node,
    slots: u64,
}

fn slot_mask(n: &Node) -> u64 {
    match n {
        Node::Slot(i) => 1 << i,
        Node::Const(_) => 0,
        Node::Not(a, _) | Node::Table1(_, a) | Node::Op1(_, a) => slot_mask(a),
        Node::And(x, y) | Node::Or(x, y) | Node::Table2(_, _, x, y) | Node::Op2(_, x, y) => {
            slot_mask(x) | slot_mask(y)
        }
    }
}

/// Search for values of the leaves that satisfy every hypothesis and
/// refute the conclusion. Hypotheses are tested as soon as their leaves are
/// bound.
struct Problem<'k, K: TwoSorted + ?Sized> {
    ev: Eval<'k, K>,
    slots: Vec<(Term, Sort)>,
    hyps: Vec<CIneq>,
    concl: CIneq,
}

impl<'k, K: TwoSorted + ?Sized> Problem<'k, K> {
    fn build(k: &'k K, hyps: &[Ineq], concl: &Ineq) -> Result<Self> {
        let mut c = Compiler::new(k);
        let comp = |i: &Ineq, c: &mut Compiler<'k, K>| -> Result<CIneq> {
            let lhs = c.compile(&i.lhs)?;
            let rhs = c.compile(&i.rhs)?;
            let slots = slot_mask(&lhs) | slot_mask(&rhs);
            Ok(CIneq { lhs, rhs, slots })
        };
        let hs = hyps.iter().map(|h| comp(h, &mut c)).collect::<Result<Vec<_>>>()?;
        let cc = comp(concl, &mut c)?;
        assert!(c.slots.len() <= 64, "too many variables");
        Ok(Problem { ev: Eval { k, tables: c.tables }, slots: c.slots, hyps: hs, concl: cc })
    }

    fn holds(&self, i: &CIneq, vals: &[Set]) -> bool {
        subset(self.ev.eval(&i.lhs, vals), self.ev.eval(&i.rhs, vals))
    }

    fn countermodel(&self) -> Option<Vec<Set>> {
        // Bind the leaves of the most constrained hypotheses first.
        let n = self.slots.len();
        let mut order: Vec<usize> = Vec::with_capacity(n);
        let mut bound = 0u64;
        let mut pending: Vec<&CIneq> = self.hyps.iter().collect();
        while !pending.is_empty() {
            pending.sort_by_key(|h| (h.slots & !bound).count_ones());
            let h = pending.remove(0);
            for i in 0..n {
                if h.slots & !bound & (1 << i) != 0 {
                    order.push(i);
                    bound |= 1 << i;
                }
            }
        }
        for i in 0..n {
            if bound & (1 << i) == 0 {
                order.push(i);
                bound |= 1 << i;
            }
        }
        // checks[l] = hypotheses whose last leaf is bound at level l
        let mut checks: Vec<Vec<&CIneq>> = vec![Vec::new(); n + 1];
        let mut seen = 0u64;
        let mut level_mask = vec![0u64; n + 1];
        for (l, &i) in order.iter().enumerate() {
            seen |= 1 << i;
            level_mask[l + 1] = seen;
        }
        for h in &self.hyps {
            let l = (0..=n).find(|&l| h.slots & !level_mask[l] == 0).unwrap();
            checks[l].push(h);
        }
        let mut vals = vec![0; n];
        if checks[0].iter().any(|h| !self.holds(h, &vals)) {
            return None;
        }
        let sizes: Vec<u64> = self.slots.iter().map(|(_, s)| 1u64 << self.ev.k.carrier(*s)).collect();
        self.rec(0, &order, &checks, &sizes, &mut vals).then_some(vals)
    }

    fn rec(&self, l: usize, order: &[usize], checks: &[Vec<&CIneq>], sizes: &[u64], vals: &mut Vec<Set>) -> bool {
        if l == order.len() {
            return !self.holds(&self.concl, vals);
        }
        let i = order[l];
        for v in 0..sizes[i] {
            vals[i] = v;
            if checks[l + 1].iter().all(|h| self.holds(h, vals)) && self.rec(l + 1, order, checks, sizes, vals) {
                return true;
            }
        }
        false
    }

    fn env(&self, vals: &[Set]) -> Env {
        let mut env = Env::new();
        for ((t, _), v) in self.slots.iter().zip(vals) {
            env.bind(t.clone(), *v);
        }
        env
    }
}

/// Brute-force the rule's quasi-inequality on the complex algebra of `k`.
pub fn rule_sound_on<K: TwoSorted + ?Sized>(r: &Rule, k: &K) -> Result<bool> {
    let q = interpret_rule(r);
    if Problem::build(k, &q.premises, &q.concl)?.countermodel().is_some() {
        return Ok(false);
    }
    if q.iff {
        for p in &q.premises {
            if Problem::build(k, &[q.concl.clone()], p)?.countermodel().is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A valuation of propositions and metavariables refuting the sequent.
pub fn sequent_countermodel<K: TwoSorted + ?Sized>(k: &K, s: &Sequent) -> Result<Option<Env>> {
    let p = Problem::build(k, &[], &ineq_of(s))?;
    Ok(p.countermodel().map(|v| p.env(&v)))
}

pub fn sequent_valid_on<K: TwoSorted + ?Sized>(k: &K, s: &Sequent) -> Result<bool> {
    Ok(sequent_countermodel(k, s)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{extension_rule, ruleset};
    use crate::constructions::{star_c, star_n};
    use crate::correspondence::{frame_condition, AxiomId};
    use crate::semantics::{all_cframes, all_nframes, valid_mt, Frame};
    use crate::syntax::{parse_sequent, Sig};

    #[test]
    fn rendered_interpretations() {
        let rs = ruleset(Sig::Nabla, &[AxiomId::C, AxiomId::P], false).unwrap();
        let disp = rs.named("<in>[ni]").next().unwrap();
        assert_eq!(interpret_rule(disp).to_string(), "forall Ga X. [<in> Ga <= X <=> Ga <= [ni] X]");
        let c = rs.named("C").next().unwrap();
        assert_eq!(
            interpret_rule(c).to_string(),
            "forall Ga De Th. [<nni> (<in> Ga & <in> De) <= Th => (<nu> Ga & <nu> De) <= [nuc] Th]"
        );
        let p = rs.named("P").next().unwrap();
        assert_eq!(interpret_rule(p).to_string(), "forall Ga. [Ga <= [ni] bot => top <= ~<nu> Ga]");
    }

    #[test]
    fn sequent_validity_matches_eval() {
        let frames = all_nframes(2);
        let s = parse_sequent("<nu> [ni] p |- [nuc] <nni> p").unwrap();
        let (l, r) = (structure_term(&s.lhs), structure_term(&s.rhs));
        for f in &frames {
            let k = star_n(f);
            assert_eq!(sequent_valid_on(&k, &s).unwrap(), valid_mt(&k, &l, &r).unwrap());
        }
    }

    #[test]
    fn base_rules_sound_on_small_frames() {
        let rs = ruleset(Sig::Nabla, &[], true).unwrap();
        for f in all_nframes(1).iter().chain(all_nframes(2).iter().take(12)) {
            let k = star_n(f);
            for r in &rs.rules {
                assert!(rule_sound_on(r, &k).unwrap(), "{} on {:?}", r.name, f);
            }
        }
        let rs = ruleset(Sig::Cond, &[], true).unwrap();
        for g in all_cframes(1) {
            let k = star_c(&g);
            for r in &rs.rules {
                assert!(rule_sound_on(r, &k).unwrap(), "{} on {:?}", r.name, g);
            }
        }
    }

    #[test]
    fn t_rule_tracks_its_condition() {
        let t = extension_rule(AxiomId::T).unwrap();
        let mut fails = 0;
        for f in all_nframes(2) {
            let cond = frame_condition(AxiomId::T, &Frame::N(f.clone())).unwrap();
            let sound = rule_sound_on(&t, &star_n(&f)).unwrap();
            assert!(!cond || sound);
            fails += usize::from(!sound);
        }
        assert!(fails > 0, "the rule should fail somewhere");
    }
}
