//! Signed generation trees and the analytic inductive classifier.

use std::fmt;

use thiserror::Error;

use crate::syntax::{Conn, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("{0} propositions exceed the search bound of 4")]
    TooManyProps(usize),
    #[error("connective `{0}` is outside the classified language")]
    Unclassified(&'static str),
    #[error("order is not a strict partial order")]
    BadOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeClass {
    DeltaAdjoint,
    Slr,
    Sra,
    Srr,
}

impl NodeClass {
    pub fn skeleton(self) -> bool {
        matches!(self, NodeClass::DeltaAdjoint | NodeClass::Slr)
    }
}

/// Classes of a signed connective, read off the classification table.
/// A node may belong to a Skeleton class and a PIA class at once.
pub fn classes(c: Conn, positive: bool) -> Result<Vec<NodeClass>, ClassifyError> {
    use Conn::*;
    use NodeClass::*;
    let v = match (c, positive) {
        (Or | Cup, true) => vec![DeltaAdjoint, Srr],
        (And | Cap, false) => vec![DeltaAdjoint, Srr],
        (And | Cap, true) => vec![Sra, Slr],
        (Or | Cup, false) => vec![Sra, Slr],
        (Neg | Sim, _) => vec![Sra, Slr],
        (BoxNi | BoxNuc | Tri | BoxArrNni, true) => vec![Sra],
        (DiamNu | DiamNni, false) => vec![Sra],
        (DiamNu | DiamNni, true) => vec![Slr],
        (BoxNi | BoxNuc | Tri | BoxArrNni, false) => vec![Slr],
        _ => return Err(ClassifyError::Unclassified(c.token())),
    };
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Label {
    Conn(Conn),
    Leaf(Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedTree {
    pub label: Label,
    pub positive: bool,
    pub classes: Vec<NodeClass>,
    pub children: Vec<SignedTree>,
}

pub fn signed_tree(t: &Term, positive: bool) -> Result<SignedTree, ClassifyError> {
    match t.split() {
        None => Ok(SignedTree { label: Label::Leaf(t.clone()), positive, classes: vec![], children: vec![] }),
        Some((c, kids)) => {
            let children = kids
                .iter()
                .enumerate()
                .map(|(i, k)| signed_tree(k, if c.monotone(i) { positive } else { !positive }))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SignedTree { label: Label::Conn(c), positive, classes: classes(c, positive)?, children })
        }
    }
}

impl SignedTree {
    /// Every leaf with its sign.
    pub fn leaves(&self) -> Vec<(&Term, bool)> {
        match &self.label {
            Label::Leaf(t) => vec![(t, self.positive)],
            Label::Conn(_) => self.children.iter().flat_map(|c| c.leaves()).collect(),
        }
    }

    /// Branches as paths of node references, leaf first.
    pub fn branches(&self) -> Vec<Vec<&SignedTree>> {
        if self.children.is_empty() {
            return vec![vec![self]];
        }
        let mut out = Vec::new();
        for c in &self.children {
            for mut b in c.branches() {
                b.push(self);
                out.push(b);
            }
        }
        out
    }
}

impl fmt::Display for SignedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.positive { '+' } else { '-' };
        match &self.label {
            Label::Leaf(t) => write!(f, "{}{}", sign, t),
            Label::Conn(c) => {
                write!(f, "{}{}(", sign, c.token())?;
                for (i, k) in self.children.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", k)?;
                }
                write!(f, ")")
            }
        }
    }
}

fn is_pia(n: &SignedTree) -> bool {
    n.classes.iter().any(|c| !c.skeleton())
}

fn is_skel(n: &SignedTree) -> bool {
    n.classes.iter().any(|c| c.skeleton())
}

/// Length of the shortest PIA prefix (counted over inner nodes, leaf first)
/// that makes the branch good, or `None` when the branch is not good.
fn pia_prefix(branch: &[&SignedTree]) -> Option<usize> {
    let inner = &branch[1..];
    let k = inner.iter().rposition(|n| !is_skel(n)).map(|i| i + 1).unwrap_or(0);
    if inner[..k].iter().all(|n| is_pia(n)) && inner[k..].iter().all(|n| is_skel(n)) {
        Some(k)
    } else {
        None
    }
}

/// A branch, given leaf first, is good when it splits into a PIA path from
/// the leaf followed by a Skeleton path.
pub fn is_good_branch(branch: &[&SignedTree]) -> bool {
    pia_prefix(branch).is_some()
}

/// Order type: `true` for 1, `false` for the dual.
pub type OrderType = Vec<bool>;

/// A strict order on the proposition indices: `omega[i][j]` means `p_i < p_j`.
pub type Omega = Vec<Vec<bool>>;

fn prop_index(props: &[String], t: &Term) -> Option<usize> {
    match t {
        Term::Prop(p) => props.iter().position(|q| q == p),
        _ => None,
    }
}

fn critical(props: &[String], eps: &[bool], t: &Term, positive: bool) -> bool {
    match prop_index(props, t) {
        Some(i) => eps[i] == positive,
        None => false,
    }
}

fn tree_ok(tree: &SignedTree, props: &[String], eps: &[bool], omega: &Omega) -> bool {
    for b in tree.branches() {
        let k = match pia_prefix(&b) {
            Some(k) => k,
            None => return false,
        };
        let leaf = b[0];
        let Label::Leaf(lt) = &leaf.label else { unreachable!() };
        if !critical(props, eps, lt, leaf.positive) {
            continue;
        }
        let i = prop_index(props, lt).unwrap();
        // SRR nodes in the PIA segment of a critical branch.
        for j in 1..=k {
            let node = b[j];
            if !node.classes.contains(&NodeClass::Srr) || node.classes.contains(&NodeClass::Sra) {
                continue;
            }
            let via = b[j - 1];
            let side = node.children.iter().find(|c| !std::ptr::eq(*c, via)).expect("binary SRR node");
            for (t, pos) in side.leaves() {
                if let Some(kx) = prop_index(props, t) {
                    // the side subtree must agree with the dual order type
                    if critical(props, eps, t, pos) {
                        return false;
                    }
                    if !omega[kx][i] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Is `lhs <= rhs` analytic `(Omega, eps)`-inductive for the given witness?
pub fn is_analytic_for(lhs: &Term, rhs: &Term, props: &[String], eps: &[bool], omega: &Omega) -> Result<bool, ClassifyError> {
    let plus = signed_tree(lhs, true)?;
    let minus = signed_tree(rhs, false)?;
    Ok(tree_ok(&plus, props, eps, omega) && tree_ok(&minus, props, eps, omega))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Analytic { props: Vec<String>, eps: OrderType, omega: Omega },
    NotAnalytic,
}

impl Verdict {
    pub fn is_analytic(&self) -> bool {
        matches!(self, Verdict::Analytic { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NotAnalytic => write!(f, "not analytic inductive"),
            Verdict::Analytic { props, eps, omega } => {
                write!(f, "analytic inductive; epsilon:")?;
                for (p, e) in props.iter().zip(eps) {
                    write!(f, " {}={}", p, if *e { "1" } else { "d" })?;
                }
                let pairs: Vec<String> = (0..props.len())
                    .flat_map(|i| (0..props.len()).map(move |j| (i, j)))
                    .filter(|&(i, j)| omega[i][j])
                    .map(|(i, j)| format!("{}<{}", props[i], props[j]))
                    .collect();
                if pairs.is_empty() {
                    write!(f, "; omega: empty")
                } else {
                    write!(f, "; omega: {}", pairs.join(", "))
                }
            }
        }
    }
}

/// All strict partial orders on `n` points, the empty order first.
pub fn strict_orders(n: usize) -> Vec<Omega> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let mut out = Vec::new();
    for code in 0u32..1 << pairs.len() {
        let mut o = vec![vec![false; n]; n];
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if code >> b & 1 == 1 {
                o[i][j] = true;
            }
        }
        if is_strict_order(&o) {
            out.push(o);
        }
    }
    out.sort_by_key(|o| o.iter().flatten().filter(|x| **x).count());
    out
}

pub fn is_strict_order(o: &Omega) -> bool {
    let n = o.len();
    (0..n).all(|i| !o[i][i])
        && (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(o[i][j] && o[j][k]) || o[i][k])))
}

/// Search every order type and strict order for a witness.
pub fn classify(lhs: &Term, rhs: &Term) -> Result<Verdict, ClassifyError> {
    let mut props = lhs.props();
    rhs.collect_props(&mut props);
    let n = props.len();
    if n > 4 {
        return Err(ClassifyError::TooManyProps(n));
    }
    // shape errors surface before the search
    signed_tree(lhs, true)?;
    signed_tree(rhs, false)?;
    let orders = strict_orders(n);
    for code in 0u32..1 << n {
        let eps: Vec<bool> = (0..n).map(|i| code >> i & 1 == 0).collect();
        for omega in &orders {
            if is_analytic_for(lhs, rhs, &props, &eps, omega)? {
                return Ok(Verdict::Analytic { props, eps, omega: omega.clone() });
            }
        }
    }
    Ok(Verdict::NotAnalytic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::AxiomId;
    use crate::syntax::{parse_term, Structure};
    use crate::translate::translate_sequent;

    fn table_ineq(id: AxiomId) -> (Term, Term) {
        let s = translate_sequent(&id.sequent(), id.mode()).unwrap();
        match (s.lhs, s.rhs) {
            (Structure::Form(l), Structure::Form(r)) => (l, r),
            _ => unreachable!(),
        }
    }

    #[test]
    fn sign_examples() {
        let t = signed_tree(&parse_term("~p").unwrap(), true).unwrap();
        assert_eq!(t.leaves()[0].1, false);
        let t = signed_tree(&parse_term("[ni] p").unwrap(), false).unwrap();
        assert_eq!(t.leaves()[0].1, false);
        assert_eq!(t.classes, vec![NodeClass::Slr]);
        let t = signed_tree(&parse_term("([ni] p |> q)").unwrap(), true).unwrap();
        assert_eq!(t.classes, vec![NodeClass::Sra]);
        let signs: Vec<bool> = t.leaves().iter().map(|l| l.1).collect();
        assert_eq!(signs, vec![false, true]);
    }

    #[test]
    fn flipping_the_root_flips_every_leaf() {
        for id in AxiomId::ALL {
            let (l, r) = table_ineq(id);
            for t in [l, r] {
                let a = signed_tree(&t, true).unwrap();
                let b = signed_tree(&t, false).unwrap();
                for (x, y) in a.leaves().iter().zip(b.leaves()) {
                    assert_eq!(x.1, !y.1);
                }
            }
        }
    }

    #[test]
    fn branch_examples() {
        let t = signed_tree(&parse_term("<nu> [ni] p").unwrap(), true).unwrap();
        assert!(t.branches().iter().all(|b| is_good_branch(b)));
        let t = signed_tree(&parse_term("<nu> [ni] <nu> [ni] p").unwrap(), true).unwrap();
        assert!(!t.branches().iter().all(|b| is_good_branch(b)));
        let t = signed_tree(&parse_term("p").unwrap(), true).unwrap();
        assert!(is_good_branch(&t.branches()[0]));
    }

    #[test]
    fn analytic_column() {
        let yes = [AxiomId::N, AxiomId::P, AxiomId::C, AxiomId::T, AxiomId::D, AxiomId::CS, AxiomId::CEM, AxiomId::ID, AxiomId::CN];
        for id in AxiomId::ALL {
            let (l, r) = table_ineq(id);
            let v = classify(&l, &r).unwrap();
            assert_eq!(v.is_analytic(), yes.contains(&id), "{}: {}", id, v);
        }
    }

    #[test]
    fn c_witness_is_accepted() {
        let (l, r) = table_ineq(AxiomId::C);
        let props = vec!["p".to_string(), "q".to_string()];
        let omega = vec![vec![false, true], vec![false, false]];
        assert!(is_analytic_for(&l, &r, &props, &[true, true], &omega).unwrap());
    }

    #[test]
    fn order_enumeration() {
        assert_eq!(strict_orders(2).len(), 3);
        assert_eq!(strict_orders(3).len(), 19);
        assert_eq!(strict_orders(4).len(), 219);
    }
}
