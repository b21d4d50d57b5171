//! Formula and structure languages.
//!
//! Four formula languages live here: the single-type languages with `nabla`
//! or `>` ([`Single`]), and the two-sorted languages over sorts S and N
//! ([`Term`]). [`Structure`] and [`Sequent`] are the display-calculus
//! layer on top of terms.

mod lexer;
mod parse;
mod render;

pub use parse::{parse_mt, parse_sequent, parse_single, parse_single_sequent, parse_term};
pub use render::{unicode, unicode_seq};

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("syntax error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("connective `{0}` is not in the signature")]
    Signature(String),
    #[error("sort mismatch: {0}")]
    Sort(String),
    #[error("polarity violation: {0}")]
    Polarity(String),
}

pub type Result<T> = std::result::Result<T, SyntaxError>;

/// Which single-type language a formula belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Nabla,
    Cond,
}

/// Two-sorted signature: MT-nabla or MT-cond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sig {
    Nabla,
    Cond,
}

impl Mode {
    pub fn sig(self) -> Sig {
        match self {
            Mode::Nabla => Sig::Nabla,
            Mode::Cond => Sig::Cond,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Single {
    Prop(String),
    Top,
    Bot,
    Neg(Box<Single>),
    And(Box<Single>, Box<Single>),
    Or(Box<Single>, Box<Single>),
    Nabla(Box<Single>),
    Cond(Box<Single>, Box<Single>),
}

impl Single {
    pub fn prop(name: &str) -> Single {
        Single::Prop(name.to_string())
    }
    pub fn neg(a: Single) -> Single {
        Single::Neg(Box::new(a))
    }
    pub fn and(a: Single, b: Single) -> Single {
        Single::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Single, b: Single) -> Single {
        Single::Or(Box::new(a), Box::new(b))
    }
    pub fn nabla(a: Single) -> Single {
        Single::Nabla(Box::new(a))
    }
    pub fn cond(a: Single, b: Single) -> Single {
        Single::Cond(Box::new(a), Box::new(b))
    }
    /// `a -> b` as `~a | b`.
    pub fn implies(a: Single, b: Single) -> Single {
        Single::or(Single::neg(a), b)
    }

    /// Does the formula stay inside the connectives of `mode`?
    pub fn check_mode(&self, mode: Mode) -> Result<()> {
        match self {
            Single::Prop(_) | Single::Top | Single::Bot => Ok(()),
            Single::Neg(a) => a.check_mode(mode),
            Single::And(a, b) | Single::Or(a, b) => {
                a.check_mode(mode)?;
                b.check_mode(mode)
            }
            Single::Nabla(a) => {
                if mode != Mode::Nabla {
                    return Err(SyntaxError::Signature("nabla".into()));
                }
                a.check_mode(mode)
            }
            Single::Cond(a, b) => {
                if mode != Mode::Cond {
                    return Err(SyntaxError::Signature(">".into()));
                }
                a.check_mode(mode)?;
                b.check_mode(mode)
            }
        }
    }

    pub fn props(&self, out: &mut Vec<String>) {
        match self {
            Single::Prop(p) => {
                if !out.contains(p) {
                    out.push(p.clone())
                }
            }
            Single::Top | Single::Bot => {}
            Single::Neg(a) | Single::Nabla(a) => a.props(out),
            Single::And(a, b) | Single::Or(a, b) | Single::Cond(a, b) => {
                a.props(out);
                b.props(out)
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Single::Prop(_) | Single::Top | Single::Bot => 0,
            Single::Neg(a) | Single::Nabla(a) => 1 + a.depth(),
            Single::And(a, b) | Single::Or(a, b) | Single::Cond(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

/// A single-type sequent `phi |- psi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SingleSequent {
    pub lhs: Single,
    pub rhs: Single,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    S,
    N,
}

impl Sort {
    pub fn other(self) -> Sort {
        match self {
            Sort::S => Sort::N,
            Sort::N => Sort::S,
        }
    }
}

type B = Box<Term>;

/// Two-sorted terms.
///
/// The first block is the logical signature of both multi-type languages.
/// The second block holds adjoints and box/diamond duals that only show up
/// in correspondence runs and rule interpretations. `Var` is a variable
/// ranging over a whole carrier (schema metavariables of rules use it too);
/// `Nom` and `CoNom` range over singletons and their complements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Prop(String),
    Top,
    Bot,
    Neg(B),
    And(B, B),
    Or(B, B),
    DiamNu(B),
    BoxNuc(B),
    /// `alpha |> A`, first argument of sort N.
    Tri(B, B),
    One,
    Zero,
    Sim(B),
    Cap(B, B),
    Cup(B, B),
    BoxNi(B),
    DiamNni(B),
    BoxArrNni(B),

    DiamIn(B),
    BoxNin(B),
    BoxArrNin(B),
    BoxBnu(B),
    DiamBnuc(B),
    /// `U <| D`, N x S -> S.
    BlackTri(B, B),
    /// `C |>> D`, S x S -> N.
    BlackTriR(B, B),
    BoxNu(B),
    DiamNi(B),

    Var(Sort, String),
    Nom(Sort, String),
    CoNom(Sort, String),
}

/// Connective names as they appear in concrete syntax, used by error
/// messages and the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Conn {
    Neg,
    And,
    Or,
    DiamNu,
    BoxNuc,
    Tri,
    Sim,
    Cap,
    Cup,
    BoxNi,
    DiamNni,
    BoxArrNni,
    DiamIn,
    BoxNin,
    BoxArrNin,
    BoxBnu,
    DiamBnuc,
    BlackTri,
    BlackTriR,
    BoxNu,
    DiamNi,
}

impl Conn {
    pub fn token(self) -> &'static str {
        match self {
            Conn::Neg => "~",
            Conn::And => "&",
            Conn::Or => "|",
            Conn::DiamNu => "<nu>",
            Conn::BoxNuc => "[nuc]",
            Conn::Tri => "|>",
            Conn::Sim => "sim",
            Conn::Cap => "^",
            Conn::Cup => "cup",
            Conn::BoxNi => "[ni]",
            Conn::DiamNni => "<nni>",
            Conn::BoxArrNni => "[nni>",
            Conn::DiamIn => "<in>",
            Conn::BoxNin => "[nin]",
            Conn::BoxArrNin => "[nin>",
            Conn::BoxBnu => "[bnu]",
            Conn::DiamBnuc => "<bnuc>",
            Conn::BlackTri => "<|",
            Conn::BlackTriR => "|>>",
            Conn::BoxNu => "[nu]",
            Conn::DiamNi => "<ni>",
        }
    }

    /// Argument sorts and result sort.
    pub fn typing(self) -> (&'static [Sort], Sort) {
        use Sort::*;
        match self {
            Conn::Neg => (&[S], S),
            Conn::And | Conn::Or => (&[S, S], S),
            Conn::DiamNu | Conn::BoxNuc | Conn::DiamIn | Conn::BoxNin | Conn::BoxArrNin | Conn::BoxNu => (&[N], S),
            Conn::Tri | Conn::BlackTri => (&[N, S], S),
            Conn::Sim => (&[N], N),
            Conn::Cap | Conn::Cup => (&[N, N], N),
            Conn::BoxNi | Conn::DiamNni | Conn::BoxArrNni | Conn::BoxBnu | Conn::DiamBnuc | Conn::DiamNi => (&[S], N),
            Conn::BlackTriR => (&[S, S], N),
        }
    }

    /// Order type: `true` for monotone coordinates.
    pub fn monotone(self, arg: usize) -> bool {
        match self {
            Conn::Neg | Conn::Sim | Conn::BoxArrNni | Conn::BoxArrNin => false,
            Conn::Tri | Conn::BlackTriR => arg == 1,
            _ => true,
        }
    }

    pub fn in_sig(self, sig: Sig) -> bool {
        match self {
            Conn::Neg | Conn::And | Conn::Or | Conn::Sim | Conn::Cap | Conn::Cup | Conn::BoxNi => true,
            Conn::DiamNu | Conn::BoxNuc | Conn::DiamNni => sig == Sig::Nabla,
            Conn::Tri | Conn::BoxArrNni => sig == Sig::Cond,
            _ => false,
        }
    }
}

impl Term {
    pub fn prop(name: &str) -> Term {
        Term::Prop(name.to_string())
    }
    pub fn var(sort: Sort, name: &str) -> Term {
        Term::Var(sort, name.to_string())
    }
    pub fn nom(sort: Sort, name: &str) -> Term {
        Term::Nom(sort, name.to_string())
    }
    pub fn conom(sort: Sort, name: &str) -> Term {
        Term::CoNom(sort, name.to_string())
    }

    pub fn unary(c: Conn, a: Term) -> Term {
        let a = Box::new(a);
        match c {
            Conn::Neg => Term::Neg(a),
            Conn::DiamNu => Term::DiamNu(a),
            Conn::BoxNuc => Term::BoxNuc(a),
            Conn::Sim => Term::Sim(a),
            Conn::BoxNi => Term::BoxNi(a),
            Conn::DiamNni => Term::DiamNni(a),
            Conn::BoxArrNni => Term::BoxArrNni(a),
            Conn::DiamIn => Term::DiamIn(a),
            Conn::BoxNin => Term::BoxNin(a),
            Conn::BoxArrNin => Term::BoxArrNin(a),
            Conn::BoxBnu => Term::BoxBnu(a),
            Conn::DiamBnuc => Term::DiamBnuc(a),
            Conn::BoxNu => Term::BoxNu(a),
            Conn::DiamNi => Term::DiamNi(a),
            _ => panic!("{:?} is not unary", c),
        }
    }

    pub fn binary(c: Conn, a: Term, b: Term) -> Term {
        let (a, b) = (Box::new(a), Box::new(b));
        match c {
            Conn::And => Term::And(a, b),
            Conn::Or => Term::Or(a, b),
            Conn::Tri => Term::Tri(a, b),
            Conn::Cap => Term::Cap(a, b),
            Conn::Cup => Term::Cup(a, b),
            Conn::BlackTri => Term::BlackTri(a, b),
            Conn::BlackTriR => Term::BlackTriR(a, b),
            _ => panic!("{:?} is not binary", c),
        }
    }

    pub fn neg(a: Term) -> Term {
        Term::Neg(Box::new(a))
    }
    pub fn and(a: Term, b: Term) -> Term {
        Term::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Term, b: Term) -> Term {
        Term::Or(Box::new(a), Box::new(b))
    }
    pub fn cap(a: Term, b: Term) -> Term {
        Term::Cap(Box::new(a), Box::new(b))
    }
    pub fn tri(a: Term, b: Term) -> Term {
        Term::Tri(Box::new(a), Box::new(b))
    }
    pub fn diam_nu(a: Term) -> Term {
        Term::DiamNu(Box::new(a))
    }
    pub fn box_nuc(a: Term) -> Term {
        Term::BoxNuc(Box::new(a))
    }
    pub fn box_ni(a: Term) -> Term {
        Term::BoxNi(Box::new(a))
    }
    pub fn diam_nni(a: Term) -> Term {
        Term::DiamNni(Box::new(a))
    }
    pub fn boxarr_nni(a: Term) -> Term {
        Term::BoxArrNni(Box::new(a))
    }

    /// Head connective with its children, or `None` for leaves.
    pub fn split(&self) -> Option<(Conn, Vec<&Term>)> {
        use Term::*;
        let r = match self {
            Neg(a) => (Conn::Neg, vec![&**a]),
            And(a, b) => (Conn::And, vec![&**a, &**b]),
            Or(a, b) => (Conn::Or, vec![&**a, &**b]),
            DiamNu(a) => (Conn::DiamNu, vec![&**a]),
            BoxNuc(a) => (Conn::BoxNuc, vec![&**a]),
            Tri(a, b) => (Conn::Tri, vec![&**a, &**b]),
            Sim(a) => (Conn::Sim, vec![&**a]),
            Cap(a, b) => (Conn::Cap, vec![&**a, &**b]),
            Cup(a, b) => (Conn::Cup, vec![&**a, &**b]),
            BoxNi(a) => (Conn::BoxNi, vec![&**a]),
            DiamNni(a) => (Conn::DiamNni, vec![&**a]),
            BoxArrNni(a) => (Conn::BoxArrNni, vec![&**a]),
            DiamIn(a) => (Conn::DiamIn, vec![&**a]),
            BoxNin(a) => (Conn::BoxNin, vec![&**a]),
            BoxArrNin(a) => (Conn::BoxArrNin, vec![&**a]),
            BoxBnu(a) => (Conn::BoxBnu, vec![&**a]),
            DiamBnuc(a) => (Conn::DiamBnuc, vec![&**a]),
            BlackTri(a, b) => (Conn::BlackTri, vec![&**a, &**b]),
            BlackTriR(a, b) => (Conn::BlackTriR, vec![&**a, &**b]),
            BoxNu(a) => (Conn::BoxNu, vec![&**a]),
            DiamNi(a) => (Conn::DiamNi, vec![&**a]),
            Prop(_) | Top | Bot | One | Zero | Var(..) | Nom(..) | CoNom(..) => return None,
        };
        Some(r)
    }

    /// Rebuild a node with the head connective `c` and new children.
    pub fn rebuild(c: Conn, mut kids: Vec<Term>) -> Term {
        match kids.len() {
            1 => Term::unary(c, kids.pop().unwrap()),
            2 => {
                let b = kids.pop().unwrap();
                let a = kids.pop().unwrap();
                Term::binary(c, a, b)
            }
            _ => panic!("bad arity"),
        }
    }

    /// Apply `f` to every direct child.
    pub fn map_children(&self, f: &mut impl FnMut(&Term) -> Term) -> Term {
        match self.split() {
            None => self.clone(),
            Some((c, kids)) => Term::rebuild(c, kids.into_iter().map(|k| f(k)).collect()),
        }
    }

    /// Sort of the term, checking every connective's arity signature.
    pub fn sort(&self) -> Result<Sort> {
        match self {
            Term::Prop(_) | Term::Top | Term::Bot => Ok(Sort::S),
            Term::One | Term::Zero => Ok(Sort::N),
            Term::Var(s, _) | Term::Nom(s, _) | Term::CoNom(s, _) => Ok(*s),
            _ => {
                let (c, kids) = self.split().unwrap();
                let (args, res) = c.typing();
                for (k, want) in kids.iter().zip(args) {
                    let got = k.sort()?;
                    if got != *want {
                        return Err(SyntaxError::Sort(format!(
                            "`{}` expects an argument of sort {:?}, got {:?} in `{}`",
                            c.token(),
                            want,
                            got,
                            k
                        )));
                    }
                }
                Ok(res)
            }
        }
    }

    /// Well-sorted and inside the logical connectives of `sig`.
    pub fn check_sig(&self, sig: Sig) -> Result<Sort> {
        self.walk(&mut |t| match t.split() {
            Some((c, _)) if !c.in_sig(sig) => Err(SyntaxError::Signature(c.token().into())),
            None if matches!(t, Term::Var(..) | Term::Nom(..) | Term::CoNom(..)) => {
                Err(SyntaxError::Signature(format!("variable {}", t)))
            }
            _ => Ok(()),
        })?;
        self.sort()
    }

    /// Like `check_sig`, but schema variables are allowed.
    pub fn check_schema_sig(&self, sig: Sig) -> Result<Sort> {
        self.walk(&mut |t| match t.split() {
            Some((c, _)) if !c.in_sig(sig) => Err(SyntaxError::Signature(c.token().into())),
            None if matches!(t, Term::Nom(..) | Term::CoNom(..)) => {
                Err(SyntaxError::Signature(format!("nominal {}", t)))
            }
            _ => Ok(()),
        })?;
        self.sort()
    }

    fn walk(&self, f: &mut impl FnMut(&Term) -> Result<()>) -> Result<()> {
        f(self)?;
        if let Some((_, kids)) = self.split() {
            for k in kids {
                k.walk(f)?;
            }
        }
        Ok(())
    }

    /// Proposition letters in order of first occurrence.
    pub fn props(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_props(&mut out);
        out
    }

    pub fn collect_props(&self, out: &mut Vec<String>) {
        match self {
            Term::Prop(p) => {
                if !out.contains(p) {
                    out.push(p.clone())
                }
            }
            _ => {
                if let Some((_, kids)) = self.split() {
                    for k in kids {
                        k.collect_props(out)
                    }
                }
            }
        }
    }

    pub fn contains(&self, pred: &impl Fn(&Term) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self.split() {
            Some((_, kids)) => kids.iter().any(|k| k.contains(pred)),
            None => false,
        }
    }

    /// Replace every subterm equal to `from` by `to`.
    pub fn replace(&self, from: &Term, to: &Term) -> Term {
        if self == from {
            return to.clone();
        }
        self.map_children(&mut |k| k.replace(from, to))
    }

    pub fn size(&self) -> usize {
        match self.split() {
            None => 1,
            Some((_, kids)) => 1 + kids.iter().map(|k| k.size()).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self.split() {
            None => 0,
            Some((_, kids)) => 1 + kids.iter().map(|k| k.depth()).max().unwrap_or(0),
        }
    }
}

/// A sort-checked formula of one of the multi-type languages.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MtFormula {
    pub sig: Sig,
    pub term: Term,
}

impl MtFormula {
    pub fn new(sig: Sig, term: Term) -> Result<MtFormula> {
        term.check_sig(sig)?;
        Ok(MtFormula { sig, term })
    }
    pub fn sort(&self) -> Sort {
        self.term.sort().expect("checked at construction")
    }
}

/// Whether a structural connective may occur in antecedent position only
/// (hat), succedent position only (check), or both (tilde).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tonicity {
    Hat,
    Check,
    Tilde,
}

type SB = Box<Structure>;

/// Display-calculus structures. Logical formulas sit at the leaves.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Structure {
    Form(Term),
    Var(Sort, String),
    // S-structures
    STop,
    SBot,
    SNeg(SB),
    SAnd(SB, SB),
    SOr(SB, SB),
    DiamNu(SB),
    BoxNuc(SB),
    DiamIn(SB),
    BoxNin(SB),
    BoxArrNin(SB),
    Tri(SB, SB),
    BlackTri(SB, SB),
    // N-structures
    NOne,
    NZero,
    NSim(SB),
    NCap(SB, SB),
    NCup(SB, SB),
    BoxNi(SB),
    DiamNni(SB),
    BoxArrNni(SB),
    BoxBnu(SB),
    DiamBnuc(SB),
    BlackTriR(SB, SB),
}

/// Structural connectives. Tokens are the logical token in braces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SConn {
    STop,
    SBot,
    SNeg,
    SAnd,
    SOr,
    DiamNu,
    BoxNuc,
    DiamIn,
    BoxNin,
    BoxArrNin,
    Tri,
    BlackTri,
    NOne,
    NZero,
    NSim,
    NCap,
    NCup,
    BoxNi,
    DiamNni,
    BoxArrNni,
    BoxBnu,
    DiamBnuc,
    BlackTriR,
}

impl SConn {
    pub const ALL: [SConn; 23] = [
        SConn::STop,
        SConn::SBot,
        SConn::SNeg,
        SConn::SAnd,
        SConn::SOr,
        SConn::DiamNu,
        SConn::BoxNuc,
        SConn::DiamIn,
        SConn::BoxNin,
        SConn::BoxArrNin,
        SConn::Tri,
        SConn::BlackTri,
        SConn::NOne,
        SConn::NZero,
        SConn::NSim,
        SConn::NCap,
        SConn::NCup,
        SConn::BoxNi,
        SConn::DiamNni,
        SConn::BoxArrNni,
        SConn::BoxBnu,
        SConn::DiamBnuc,
        SConn::BlackTriR,
    ];

    pub fn token(self) -> &'static str {
        match self {
            SConn::STop => "top",
            SConn::SBot => "bot",
            SConn::SNeg => "~",
            SConn::SAnd => "&",
            SConn::SOr => "|",
            SConn::DiamNu => "<nu>",
            SConn::BoxNuc => "[nuc]",
            SConn::DiamIn => "<in>",
            SConn::BoxNin => "[nin]",
            SConn::BoxArrNin => "[nin>",
            SConn::Tri => "|>",
            SConn::BlackTri => "<|",
            SConn::NOne => "1",
            SConn::NZero => "0",
            SConn::NSim => "sim",
            SConn::NCap => "^",
            SConn::NCup => "cup",
            SConn::BoxNi => "[ni]",
            SConn::DiamNni => "<nni>",
            SConn::BoxArrNni => "[nni>",
            SConn::BoxBnu => "[bnu]",
            SConn::DiamBnuc => "<bnuc>",
            SConn::BlackTriR => "|>>",
        }
    }

    pub fn from_token(tok: &str) -> Option<SConn> {
        SConn::ALL.iter().copied().find(|c| c.token() == tok)
    }

    pub fn tonicity(self) -> Tonicity {
        use SConn::*;
        match self {
            SNeg | NSim => Tonicity::Tilde,
            STop | SAnd | DiamNu | DiamIn | BlackTri | NOne | NCap | DiamNni | DiamBnuc => Tonicity::Hat,
            SBot | SOr | BoxNuc | BoxNin | BoxArrNin | Tri | NZero | NCup | BoxNi | BoxArrNni | BoxBnu
            | BlackTriR => Tonicity::Check,
        }
    }

    /// Argument sorts and result sort.
    pub fn typing(self) -> (&'static [Sort], Sort) {
        use Sort::*;
        use SConn::*;
        match self {
            STop | SBot => (&[], S),
            NOne | NZero => (&[], N),
            SNeg => (&[S], S),
            SAnd | SOr => (&[S, S], S),
            DiamNu | BoxNuc | DiamIn | BoxNin | BoxArrNin => (&[N], S),
            Tri | BlackTri => (&[N, S], S),
            NSim => (&[N], N),
            NCap | NCup => (&[N, N], N),
            BoxNi | DiamNni | BoxArrNni | BoxBnu | DiamBnuc => (&[S], N),
            BlackTriR => (&[S, S], N),
        }
    }

    /// Does argument `i` keep the polarity of its parent position?
    pub fn keeps_polarity(self, i: usize) -> bool {
        use SConn::*;
        match self {
            SNeg | NSim | BoxArrNin | BoxArrNni => false,
            Tri | BlackTriR => i == 1,
            _ => true,
        }
    }

    /// Membership in the structural language of each calculus.
    pub fn in_sig(self, sig: Sig) -> bool {
        use SConn::*;
        match self {
            STop | SBot | SNeg | SAnd | SOr | DiamIn | NOne | NZero | NSim | NCap | NCup | BoxNi => true,
            DiamNu | BoxNuc | BoxNin | DiamNni | BoxBnu | DiamBnuc => sig == Sig::Nabla,
            BoxArrNin | Tri | BlackTri | BoxArrNni | BlackTriR => sig == Sig::Cond,
        }
    }
}

impl Structure {
    pub fn form(t: Term) -> Structure {
        Structure::Form(t)
    }
    pub fn var(sort: Sort, name: &str) -> Structure {
        Structure::Var(sort, name.to_string())
    }

    pub fn split(&self) -> Option<(SConn, Vec<&Structure>)> {
        use Structure::*;
        let r = match self {
            Form(_) | Var(..) => return None,
            STop => (SConn::STop, vec![]),
            SBot => (SConn::SBot, vec![]),
            NOne => (SConn::NOne, vec![]),
            NZero => (SConn::NZero, vec![]),
            SNeg(a) => (SConn::SNeg, vec![&**a]),
            SAnd(a, b) => (SConn::SAnd, vec![&**a, &**b]),
            SOr(a, b) => (SConn::SOr, vec![&**a, &**b]),
            DiamNu(a) => (SConn::DiamNu, vec![&**a]),
            BoxNuc(a) => (SConn::BoxNuc, vec![&**a]),
            DiamIn(a) => (SConn::DiamIn, vec![&**a]),
            BoxNin(a) => (SConn::BoxNin, vec![&**a]),
            BoxArrNin(a) => (SConn::BoxArrNin, vec![&**a]),
            Tri(a, b) => (SConn::Tri, vec![&**a, &**b]),
            BlackTri(a, b) => (SConn::BlackTri, vec![&**a, &**b]),
            NSim(a) => (SConn::NSim, vec![&**a]),
            NCap(a, b) => (SConn::NCap, vec![&**a, &**b]),
            NCup(a, b) => (SConn::NCup, vec![&**a, &**b]),
            BoxNi(a) => (SConn::BoxNi, vec![&**a]),
            DiamNni(a) => (SConn::DiamNni, vec![&**a]),
            BoxArrNni(a) => (SConn::BoxArrNni, vec![&**a]),
            BoxBnu(a) => (SConn::BoxBnu, vec![&**a]),
            DiamBnuc(a) => (SConn::DiamBnuc, vec![&**a]),
            BlackTriR(a, b) => (SConn::BlackTriR, vec![&**a, &**b]),
        };
        Some(r)
    }

    pub fn build(c: SConn, mut kids: Vec<Structure>) -> Structure {
        use Structure as St;
        let mut next = || Box::new(kids.remove(0));
        match c {
            SConn::STop => St::STop,
            SConn::SBot => St::SBot,
            SConn::NOne => St::NOne,
            SConn::NZero => St::NZero,
            SConn::SNeg => St::SNeg(next()),
            SConn::SAnd => {
                let a = next();
                St::SAnd(a, next())
            }
            SConn::SOr => {
                let a = next();
                St::SOr(a, next())
            }
            SConn::DiamNu => St::DiamNu(next()),
            SConn::BoxNuc => St::BoxNuc(next()),
            SConn::DiamIn => St::DiamIn(next()),
            SConn::BoxNin => St::BoxNin(next()),
            SConn::BoxArrNin => St::BoxArrNin(next()),
            SConn::Tri => {
                let a = next();
                St::Tri(a, next())
            }
            SConn::BlackTri => {
                let a = next();
                St::BlackTri(a, next())
            }
            SConn::NSim => St::NSim(next()),
            SConn::NCap => {
                let a = next();
                St::NCap(a, next())
            }
            SConn::NCup => {
                let a = next();
                St::NCup(a, next())
            }
            SConn::BoxNi => St::BoxNi(next()),
            SConn::DiamNni => St::DiamNni(next()),
            SConn::BoxArrNni => St::BoxArrNni(next()),
            SConn::BoxBnu => St::BoxBnu(next()),
            SConn::DiamBnuc => St::DiamBnuc(next()),
            SConn::BlackTriR => {
                let a = next();
                St::BlackTriR(a, next())
            }
        }
    }

    pub fn sort(&self) -> Result<Sort> {
        match self {
            Structure::Form(t) => t.sort(),
            Structure::Var(s, _) => Ok(*s),
            _ => {
                let (c, kids) = self.split().unwrap();
                let (args, res) = c.typing();
                for (k, want) in kids.iter().zip(args) {
                    let got = k.sort()?;
                    if got != *want {
                        return Err(SyntaxError::Sort(format!(
                            "`{{{}}}` expects a structure of sort {:?}, got {:?}",
                            c.token(),
                            want,
                            got
                        )));
                    }
                }
                Ok(res)
            }
        }
    }

    /// Check hats and checks against the position: `antecedent` is true on
    /// the left of the turnstile.
    pub fn check_polarity(&self, antecedent: bool) -> Result<()> {
        if let Some((c, kids)) = self.split() {
            match (c.tonicity(), antecedent) {
                (Tonicity::Hat, false) => {
                    return Err(SyntaxError::Polarity(format!("{{{}}} in succedent position", c.token())))
                }
                (Tonicity::Check, true) => {
                    return Err(SyntaxError::Polarity(format!("{{{}}} in antecedent position", c.token())))
                }
                _ => {}
            }
            for (i, k) in kids.iter().enumerate() {
                let pos = if c.keeps_polarity(i) { antecedent } else { !antecedent };
                k.check_polarity(pos)?;
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        match self {
            Structure::Form(t) => t.size(),
            Structure::Var(..) => 1,
            _ => 1 + self.split().unwrap().1.iter().map(|k| k.size()).sum::<usize>(),
        }
    }

    /// Formula leaves, left to right.
    pub fn formulas<'a>(&'a self, out: &mut Vec<&'a Term>) {
        match self {
            Structure::Form(t) => out.push(t),
            Structure::Var(..) => {}
            _ => {
                for k in self.split().unwrap().1 {
                    k.formulas(out)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub lhs: Structure,
    pub rhs: Structure,
}

impl Sequent {
    pub fn new(lhs: Structure, rhs: Structure) -> Sequent {
        Sequent { lhs, rhs }
    }

    pub fn of_terms(lhs: Term, rhs: Term) -> Sequent {
        Sequent::new(Structure::Form(lhs), Structure::Form(rhs))
    }

    /// Same sort on both sides and hats/checks in the right places.
    pub fn check(&self) -> Result<Sort> {
        let l = self.lhs.sort()?;
        let r = self.rhs.sort()?;
        if l != r {
            return Err(SyntaxError::Sort(format!("sequent sides have sorts {:?} and {:?}", l, r)));
        }
        self.lhs.check_polarity(true)?;
        self.rhs.check_polarity(false)?;
        Ok(l)
    }

    /// Structural connectives must belong to the calculus for `sig`.
    pub fn check_sig(&self, sig: Sig) -> Result<()> {
        fn go(s: &Structure, sig: Sig) -> Result<()> {
            match s {
                Structure::Form(t) => {
                    t.check_schema_sig(sig)?;
                    Ok(())
                }
                Structure::Var(..) => Ok(()),
                _ => {
                    let (c, kids) = s.split().unwrap();
                    if !c.in_sig(sig) {
                        return Err(SyntaxError::Signature(format!("{{{}}}", c.token())));
                    }
                    kids.iter().try_for_each(|k| go(k, sig))
                }
            }
        }
        go(&self.lhs, sig)?;
        go(&self.rhs, sig)
    }

    pub fn size(&self) -> usize {
        self.lhs.size() + self.rhs.size()
    }
}

impl fmt::Display for Single {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render::single(self))
    }
}

impl fmt::Display for SingleSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.lhs, self.rhs)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render::term(self))
    }
}

impl fmt::Display for MtFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.term.fmt(f)
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render::structure(self))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.lhs, self.rhs)
    }
}

#[cfg(test)]
mod tests;
