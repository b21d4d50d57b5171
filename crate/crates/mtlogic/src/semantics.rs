//! Finite frames, relational operators and satisfaction.
//!
//! Every set is a `u64` bitmask, so carriers hold at most 64 points. For a
//! single-type frame on `n` worlds the second sort has `2^n` points, which
//! bounds two-sorted constructions at six worlds.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Conn, Mode, Single, SingleSequent, Sort, Term};

pub type Set = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("{0} distinct propositions exceed the enumeration cap of {MAX_PROPS}")]
    TooManyProps(usize),
    #[error("frame kind does not match: {0}")]
    Mismatch(String),
    #[error("connective `{0}` has no interpretation on this frame")]
    Unsupported(&'static str),
    #[error("carrier of {0} points is too large")]
    TooLarge(usize),
    #[error("malformed frame: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, SemError>;

pub const MAX_PROPS: usize = 4;

pub fn full(n: usize) -> Set {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Indices of the set bits, in increasing order.
pub fn members(mut s: Set) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            return None;
        }
        let i = s.trailing_zeros() as usize;
        s &= s - 1;
        Some(i)
    })
}

pub fn subset(a: Set, b: Set) -> bool {
    a & !b == 0
}

/// Binary relation `R ⊆ S × T` stored as successor sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rel {
    pub src: usize,
    pub tgt: usize,
    pub succ: Vec<Set>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryKind {
    Diam,
    Box,
    BoxArr,
    DiamArr,
}

impl Rel {
    pub fn empty(src: usize, tgt: usize) -> Rel {
        Rel { src, tgt, succ: vec![0; src] }
    }

    pub fn from_pairs(src: usize, tgt: usize, pairs: &[(usize, usize)]) -> Result<Rel> {
        let mut r = Rel::empty(src, tgt);
        for &(s, t) in pairs {
            if s >= src || t >= tgt {
                return Err(SemError::Malformed(format!("pair ({}, {}) out of range", s, t)));
            }
            r.succ[s] |= 1 << t;
        }
        Ok(r)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.src).flat_map(|s| members(self.succ[s]).map(move |t| (s, t))).collect()
    }

    pub fn holds(&self, s: usize, t: usize) -> bool {
        self.succ[s] >> t & 1 == 1
    }

    pub fn converse(&self) -> Rel {
        let mut r = Rel::empty(self.tgt, self.src);
        for (s, t) in self.pairs() {
            r.succ[t] |= 1 << s;
        }
        r
    }

    /// `<R>T' = R^-1[T']`
    pub fn diam(&self, t: Set) -> Set {
        let mut out = 0;
        for s in 0..self.src {
            if self.succ[s] & t != 0 {
                out |= 1 << s;
            }
        }
        out
    }

    /// `[R]T' = (R^-1[T'^c])^c`
    pub fn boxr(&self, t: Set) -> Set {
        let mut out = 0;
        for s in 0..self.src {
            if subset(self.succ[s], t) {
                out |= 1 << s;
            }
        }
        out
    }

    /// `[R>T' = (R^-1[T'])^c`
    pub fn boxarr(&self, t: Set) -> Set {
        full(self.src) & !self.diam(t)
    }

    /// `<R]T' = R^-1[T'^c]`
    pub fn diamarr(&self, t: Set) -> Set {
        full(self.src) & !self.boxr(t)
    }

    /// `R[A]`, the forward image; equals `<R^-1>A`.
    pub fn image(&self, a: Set) -> Set {
        members(a).fold(0, |acc, s| acc | self.succ[s])
    }

    /// `[R^-1]A`
    pub fn inv_box(&self, a: Set) -> Set {
        full(self.tgt) & !self.image(full(self.src) & !a)
    }

    /// `[R^-1>A`
    pub fn inv_boxarr(&self, a: Set) -> Set {
        full(self.tgt) & !self.image(a)
    }

    pub fn apply(&self, kind: UnaryKind, t: Set) -> Result<Set> {
        if t & !full(self.tgt) != 0 {
            return Err(SemError::Mismatch("argument outside the target carrier".into()));
        }
        Ok(match kind {
            UnaryKind::Diam => self.diam(t),
            UnaryKind::Box => self.boxr(t),
            UnaryKind::BoxArr => self.boxarr(t),
            UnaryKind::DiamArr => self.diamarr(t),
        })
    }
}

/// Ternary relation `T ⊆ S × T × U`; `succ[s * n1 + t]` is the set of `u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ternary {
    pub n0: usize,
    pub n1: usize,
    pub n2: usize,
    pub succ: Vec<Set>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TernaryKind {
    /// `T' |> U'`, result in the first carrier.
    Tri,
    /// `T' <| S'`, result in the third carrier.
    BlackTriUp,
    /// `S' |>> U'`, result in the second carrier.
    BlackTriRight,
}

impl Ternary {
    pub fn empty(n0: usize, n1: usize, n2: usize) -> Ternary {
        Ternary { n0, n1, n2, succ: vec![0; n0 * n1] }
    }

    pub fn from_triples(n0: usize, n1: usize, n2: usize, triples: &[(usize, usize, usize)]) -> Result<Ternary> {
        let mut r = Ternary::empty(n0, n1, n2);
        for &(s, t, u) in triples {
            if s >= n0 || t >= n1 || u >= n2 {
                return Err(SemError::Malformed(format!("triple ({}, {}, {}) out of range", s, t, u)));
            }
            r.succ[s * n1 + t] |= 1 << u;
        }
        Ok(r)
    }

    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for s in 0..self.n0 {
            for t in 0..self.n1 {
                for u in members(self.succ[s * self.n1 + t]) {
                    out.push((s, t, u));
                }
            }
        }
        out
    }

    pub fn at(&self, s: usize, t: usize) -> Set {
        self.succ[s * self.n1 + t]
    }

    /// `{s | for all t in T': succ(s, t) ⊆ U'}`
    pub fn tri(&self, tp: Set, up: Set) -> Set {
        let mut out = 0;
        for s in 0..self.n0 {
            if members(tp).all(|t| subset(self.at(s, t), up)) {
                out |= 1 << s;
            }
        }
        out
    }

    /// Union of `succ(s, t)` over `s ∈ S'`, `t ∈ T'`.
    pub fn blacktri_up(&self, tp: Set, sp: Set) -> Set {
        let mut out = 0;
        for s in members(sp) {
            for t in members(tp) {
                out |= self.at(s, t);
            }
        }
        out
    }

    /// `{t | for all s in S': succ(s, t) ⊆ U'}`
    pub fn blacktri_right(&self, sp: Set, up: Set) -> Set {
        let mut out = 0;
        for t in 0..self.n1 {
            if members(sp).all(|s| subset(self.at(s, t), up)) {
                out |= 1 << t;
            }
        }
        out
    }

    pub fn apply(&self, kind: TernaryKind, a: Set, b: Set) -> Result<Set> {
        let (ca, cb) = match kind {
            TernaryKind::Tri => (self.n1, self.n2),
            TernaryKind::BlackTriUp => (self.n1, self.n0),
            TernaryKind::BlackTriRight => (self.n0, self.n2),
        };
        if a & !full(ca) != 0 || b & !full(cb) != 0 {
            return Err(SemError::Mismatch("argument outside its carrier".into()));
        }
        Ok(match kind {
            TernaryKind::Tri => self.tri(a, b),
            TernaryKind::BlackTriUp => self.blacktri_up(a, b),
            TernaryKind::BlackTriRight => self.blacktri_right(a, b),
        })
    }
}

/// Monotone neighbourhood frame. `nu[w]` has bit `X` set when the subset
/// with bitmask `X` is a neighbourhood of `w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NFrame {
    pub size: usize,
    pub nu: Vec<Set>,
}

/// Conditional frame; `f[w * 2^size + X]` is `f(w, X)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CFrame {
    pub size: usize,
    pub f: Vec<Set>,
}

/// Is the family `nu` (bits over subsets of an `n`-element set) upward closed?
pub fn is_monotone(n: usize, nu: Set) -> bool {
    let m = 1usize << n;
    for x in members(nu) {
        for y in 0..m {
            if x & !y == 0 && nu >> y & 1 == 0 {
                return false;
            }
        }
    }
    true
}

impl NFrame {
    pub fn new(size: usize, nu: Vec<Set>) -> Result<NFrame> {
        if size == 0 || size > 6 {
            return Err(SemError::TooLarge(size));
        }
        if nu.len() != size {
            return Err(SemError::Malformed("one neighbourhood family per world".into()));
        }
        for (w, &n) in nu.iter().enumerate() {
            if n & !full(1 << size) != 0 {
                return Err(SemError::Malformed(format!("world {} names a subset outside P(W)", w)));
            }
            if !is_monotone(size, n) {
                return Err(SemError::Malformed(format!("nu({}) is not upward closed", w)));
            }
        }
        Ok(NFrame { size, nu })
    }

    pub fn has(&self, w: usize, x: Set) -> bool {
        self.nu[w] >> x & 1 == 1
    }

    /// `{w | X ∈ nu(w)}`
    pub fn nabla(&self, x: Set) -> Set {
        let mut out = 0;
        for w in 0..self.size {
            if self.has(w, x) {
                out |= 1 << w;
            }
        }
        out
    }
}

impl CFrame {
    pub fn new(size: usize, f: Vec<Set>) -> Result<CFrame> {
        if size == 0 || size > 6 {
            return Err(SemError::TooLarge(size));
        }
        if f.len() != size << size {
            return Err(SemError::Malformed("selection table has the wrong length".into()));
        }
        if f.iter().any(|&s| s & !full(size) != 0) {
            return Err(SemError::Malformed("selection value outside W".into()));
        }
        Ok(CFrame { size, f })
    }

    pub fn sel(&self, w: usize, x: Set) -> Set {
        self.f[(w << self.size) + x as usize]
    }

    /// `{w | f(w, X) ⊆ Y}`
    pub fn cond(&self, x: Set, y: Set) -> Set {
        let mut out = 0;
        for w in 0..self.size {
            if subset(self.sel(w, x), y) {
                out |= 1 << w;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoSortedNFrame {
    pub nx: usize,
    pub ny: usize,
    /// `R_∋ ⊆ Y × X`
    pub r_ni: Rel,
    /// `R_∌ ⊆ Y × X`
    pub r_nni: Rel,
    /// `R_ν ⊆ X × Y`
    pub r_nu: Rel,
    /// `R_νc ⊆ X × Y`
    pub r_nuc: Rel,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoSortedCFrame {
    pub nx: usize,
    pub ny: usize,
    pub r_ni: Rel,
    pub r_nni: Rel,
    /// `T_f ⊆ X × Y × X`
    pub t_f: Ternary,
}

/// The complex algebra of a two-sorted frame: every connective that has a
/// relational reading on it.
pub trait TwoSorted: Sync {
    fn carrier(&self, sort: Sort) -> usize;
    fn op1(&self, c: Conn, a: Set) -> Result<Set>;
    fn op2(&self, c: Conn, a: Set, b: Set) -> Result<Set>;
}

fn shared_op1(c: Conn, a: Set, r_ni: &Rel, r_nni: &Rel) -> Option<Set> {
    Some(match c {
        Conn::BoxNi => r_ni.boxr(a),
        Conn::DiamNni => r_nni.diam(a),
        Conn::BoxArrNni => r_nni.boxarr(a),
        Conn::DiamIn => r_ni.image(a),
        Conn::BoxNin => r_nni.inv_box(a),
        Conn::BoxArrNin => r_nni.inv_boxarr(a),
        Conn::DiamNi => r_ni.diam(a),
        _ => return None,
    })
}

impl TwoSorted for TwoSortedNFrame {
    fn carrier(&self, sort: Sort) -> usize {
        match sort {
            Sort::S => self.nx,
            Sort::N => self.ny,
        }
    }
    fn op1(&self, c: Conn, a: Set) -> Result<Set> {
        if let Some(v) = shared_op1(c, a, &self.r_ni, &self.r_nni) {
            return Ok(v);
        }
        Ok(match c {
            Conn::DiamNu => self.r_nu.diam(a),
            Conn::BoxNuc => self.r_nuc.boxr(a),
            Conn::BoxBnu => self.r_nu.inv_box(a),
            Conn::DiamBnuc => self.r_nuc.image(a),
            Conn::BoxNu => self.r_nu.boxr(a),
            _ => return Err(SemError::Unsupported(c.token())),
        })
    }
    fn op2(&self, c: Conn, _a: Set, _b: Set) -> Result<Set> {
        Err(SemError::Unsupported(c.token()))
    }
}

impl TwoSorted for TwoSortedCFrame {
    fn carrier(&self, sort: Sort) -> usize {
        match sort {
            Sort::S => self.nx,
            Sort::N => self.ny,
        }
    }
    fn op1(&self, c: Conn, a: Set) -> Result<Set> {
        shared_op1(c, a, &self.r_ni, &self.r_nni).ok_or(SemError::Unsupported(c.token()))
    }
    fn op2(&self, c: Conn, a: Set, b: Set) -> Result<Set> {
        Ok(match c {
            Conn::Tri => self.t_f.tri(a, b),
            Conn::BlackTri => self.t_f.blacktri_up(a, b),
            Conn::BlackTriR => self.t_f.blacktri_right(a, b),
            _ => return Err(SemError::Unsupported(c.token())),
        })
    }
}

impl TwoSortedNFrame {
    /// Do `<ν>[∋]D` and `[νc]<∌>D` agree for every `D ⊆ X`?
    pub fn is_supported(&self) -> bool {
        (0..1u64 << self.nx).all(|d| self.r_nu.diam(self.r_ni.boxr(d)) == self.r_nuc.boxr(self.r_nni.diam(d)))
    }
}

/// Bindings for propositions and ALBA variables. Keys are leaf terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Env {
    pub entries: Vec<(Term, Set)>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn from_props(names: &[String], vals: &[Set]) -> Env {
        Env { entries: names.iter().zip(vals).map(|(n, v)| (Term::Prop(n.clone()), *v)).collect() }
    }

    pub fn bind(&mut self, key: Term, v: Set) {
        match self.entries.iter_mut().find(|(k, _)| *k == key) {
            Some(e) => e.1 = v,
            None => self.entries.push((key, v)),
        }
    }

    pub fn get(&self, key: &Term) -> Option<Set> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    fn prop(&self, name: &str) -> Option<Set> {
        self.entries.iter().find_map(|(k, v)| match k {
            Term::Prop(n) if n == name => Some(*v),
            _ => None,
        })
    }
}

/// A valuation of propositions, as an [`Env`] of `Prop` keys.
pub type Valuation = Env;

pub fn eval_single_n(frame: &NFrame, env: &Env, f: &Single) -> Result<Set> {
    let all = full(frame.size);
    Ok(match f {
        Single::Prop(p) => env.prop(p).ok_or_else(|| SemError::Unbound(p.clone()))?,
        Single::Top => all,
        Single::Bot => 0,
        Single::Neg(a) => all & !eval_single_n(frame, env, a)?,
        Single::And(a, b) => eval_single_n(frame, env, a)? & eval_single_n(frame, env, b)?,
        Single::Or(a, b) => eval_single_n(frame, env, a)? | eval_single_n(frame, env, b)?,
        Single::Nabla(a) => frame.nabla(eval_single_n(frame, env, a)?),
        Single::Cond(..) => return Err(SemError::Mismatch("`>` on a neighbourhood frame".into())),
    })
}

pub fn eval_single_c(frame: &CFrame, env: &Env, f: &Single) -> Result<Set> {
    let all = full(frame.size);
    Ok(match f {
        Single::Prop(p) => env.prop(p).ok_or_else(|| SemError::Unbound(p.clone()))?,
        Single::Top => all,
        Single::Bot => 0,
        Single::Neg(a) => all & !eval_single_c(frame, env, a)?,
        Single::And(a, b) => eval_single_c(frame, env, a)? & eval_single_c(frame, env, b)?,
        Single::Or(a, b) => eval_single_c(frame, env, a)? | eval_single_c(frame, env, b)?,
        Single::Cond(a, b) => frame.cond(eval_single_c(frame, env, a)?, eval_single_c(frame, env, b)?),
        Single::Nabla(_) => return Err(SemError::Mismatch("`nabla` on a conditional frame".into())),
    })
}

/// A single-type frame of either kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Frame {
    N(NFrame),
    C(CFrame),
}

impl Frame {
    pub fn size(&self) -> usize {
        match self {
            Frame::N(f) => f.size,
            Frame::C(f) => f.size,
        }
    }
    pub fn mode(&self) -> Mode {
        match self {
            Frame::N(_) => Mode::Nabla,
            Frame::C(_) => Mode::Cond,
        }
    }
}

pub fn eval_single(frame: &Frame, env: &Env, f: &Single) -> Result<Set> {
    match frame {
        Frame::N(n) => eval_single_n(n, env, f),
        Frame::C(c) => eval_single_c(c, env, f),
    }
}

/// Truth set of a term on the complex algebra of `k`.
pub fn eval_mt<K: TwoSorted + ?Sized>(k: &K, env: &Env, t: &Term) -> Result<Set> {
    let sx = full(k.carrier(Sort::S));
    let sy = full(k.carrier(Sort::N));
    Ok(match t {
        Term::Prop(p) => env.prop(p).ok_or_else(|| SemError::Unbound(p.clone()))?,
        Term::Var(..) | Term::Nom(..) | Term::CoNom(..) => {
            env.get(t).ok_or_else(|| SemError::Unbound(t.to_string()))?
        }
        Term::Top => sx,
        Term::Bot => 0,
        Term::One => sy,
        Term::Zero => 0,
        Term::Neg(a) => sx & !eval_mt(k, env, a)?,
        Term::Sim(a) => sy & !eval_mt(k, env, a)?,
        Term::And(a, b) | Term::Cap(a, b) => eval_mt(k, env, a)? & eval_mt(k, env, b)?,
        Term::Or(a, b) | Term::Cup(a, b) => eval_mt(k, env, a)? | eval_mt(k, env, b)?,
        _ => {
            let (c, kids) = t.split().expect("non-leaf");
            if kids.len() == 1 {
                k.op1(c, eval_mt(k, env, kids[0])?)?
            } else {
                k.op2(c, eval_mt(k, env, kids[0])?, eval_mt(k, env, kids[1])?)?
            }
        }
    })
}

/// Every assignment of subsets of an `n`-point carrier to `k` names.
pub fn assignments(n: usize, k: usize) -> impl Iterator<Item = Vec<Set>> {
    let base = 1u64 << n;
    let total = base.checked_pow(k as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut code| {
        let mut v = Vec::with_capacity(k);
        for _ in 0..k {
            v.push(code % base);
            code /= base;
        }
        v
    })
}

fn check_props(props: &[String]) -> Result<()> {
    if props.len() > MAX_PROPS {
        Err(SemError::TooManyProps(props.len()))
    } else {
        Ok(())
    }
}

/// First valuation under which `lhs` is not included in `rhs`.
pub fn countermodel_single(frame: &Frame, seq: &SingleSequent) -> Result<Option<Valuation>> {
    let mut props = Vec::new();
    seq.lhs.props(&mut props);
    seq.rhs.props(&mut props);
    check_props(&props)?;
    for vals in assignments(frame.size(), props.len()) {
        let env = Env::from_props(&props, &vals);
        if !subset(eval_single(frame, &env, &seq.lhs)?, eval_single(frame, &env, &seq.rhs)?) {
            return Ok(Some(env));
        }
    }
    Ok(None)
}

pub fn valid_single(frame: &Frame, seq: &SingleSequent) -> Result<bool> {
    Ok(countermodel_single(frame, seq)?.is_none())
}

/// Validity of a formula: `top |- phi`.
pub fn valid_formula(frame: &Frame, f: &Single) -> Result<bool> {
    valid_single(frame, &SingleSequent { lhs: Single::Top, rhs: f.clone() })
}

/// First valuation refuting `lhs ⊆ rhs` on the complex algebra of `k`.
pub fn countermodel_mt<K: TwoSorted + ?Sized>(k: &K, lhs: &Term, rhs: &Term) -> Result<Option<Valuation>> {
    let mut props = lhs.props();
    rhs.collect_props(&mut props);
    check_props(&props)?;
    for vals in assignments(k.carrier(Sort::S), props.len()) {
        let env = Env::from_props(&props, &vals);
        if !subset(eval_mt(k, &env, lhs)?, eval_mt(k, &env, rhs)?) {
            return Ok(Some(env));
        }
    }
    Ok(None)
}

pub fn valid_mt<K: TwoSorted + ?Sized>(k: &K, lhs: &Term, rhs: &Term) -> Result<bool> {
    Ok(countermodel_mt(k, lhs, rhs)?.is_none())
}

/// All upward-closed families over subsets of an `n`-element set.
pub fn monotone_families(n: usize) -> Vec<Set> {
    assert!(n <= 3, "enumeration of monotone families is bounded at three worlds");
    let m = 1u64 << (1 << n);
    (0..m).filter(|&nu| is_monotone(n, nu)).collect()
}

/// Every monotone n-frame on `n` worlds, in lexicographic order.
pub fn all_nframes(n: usize) -> Vec<NFrame> {
    let fams = monotone_families(n);
    let total = fams.len().pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut nu = Vec::with_capacity(n);
            for _ in 0..n {
                nu.push(fams[code % fams.len()]);
                code /= fams.len();
            }
            NFrame { size: n, nu }
        })
        .collect()
}

/// Every c-frame on `n` worlds (feasible only for `n = 1`).
pub fn all_cframes(n: usize) -> Vec<CFrame> {
    assert!(n == 1, "exhaustive c-frame enumeration is only feasible on one world");
    let cells = n << n;
    let base = 1u64 << n;
    let total = base.pow(cells as u32);
    (0..total)
        .map(|mut code| {
            let mut f = Vec::with_capacity(cells);
            for _ in 0..cells {
                f.push(code % base);
                code /= base;
            }
            CFrame { size: n, f }
        })
        .collect()
}

/// Uniformly sampled c-frames, deterministic in `seed`.
pub fn random_cframes(n: usize, count: usize, seed: u64) -> Vec<CFrame> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| CFrame { size: n, f: (0..n << n).map(|_| rng.gen_range(0..1u64 << n)).collect() })
        .collect()
}

/// The boundary families: `f ≡ ∅`, `f(w, Z) = Z`, `f(w, Z) = {w} ∩ Z`.
pub fn boundary_cframes(n: usize) -> Vec<CFrame> {
    let m = 1usize << n;
    let empty = CFrame { size: n, f: vec![0; n * m] };
    let ident = CFrame { size: n, f: (0..n * m).map(|i| (i % m) as Set).collect() };
    let local = CFrame { size: n, f: (0..n * m).map(|i| (i % m) as Set & (1 << (i / m))).collect() };
    vec![empty, ident, local]
}

// ---------------------------------------------------------------------------
// JSON frame files

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FrameFile {
    #[serde(rename = "nframe")]
    NFrame { size: usize, nu: Vec<Vec<Vec<usize>>> },
    #[serde(rename = "cframe")]
    CFrame { size: usize, f: Vec<Vec<Vec<usize>>> },
    #[serde(rename = "ts-nframe")]
    TsNFrame {
        x: usize,
        y: usize,
        r_ni: Vec<(usize, usize)>,
        r_nni: Vec<(usize, usize)>,
        r_nu: Vec<(usize, usize)>,
        r_nuc: Vec<(usize, usize)>,
    },
    #[serde(rename = "ts-cframe")]
    TsCFrame { x: usize, y: usize, r_ni: Vec<(usize, usize)>, r_nni: Vec<(usize, usize)>, t_f: Vec<(usize, usize, usize)> },
}

/// Any frame that can be read from or written to a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyFrame {
    Single(Frame),
    TsN(TwoSortedNFrame),
    TsC(TwoSortedCFrame),
}

pub fn list_of(s: Set) -> Vec<usize> {
    members(s).collect()
}

fn set_of(list: &[usize], n: usize) -> Result<Set> {
    let mut s = 0;
    for &i in list {
        if i >= n {
            return Err(SemError::Malformed(format!("point {} outside a carrier of size {}", i, n)));
        }
        s |= 1 << i;
    }
    Ok(s)
}

impl AnyFrame {
    pub fn to_file(&self) -> FrameFile {
        match self {
            AnyFrame::Single(Frame::N(f)) => FrameFile::NFrame {
                size: f.size,
                nu: f.nu.iter().map(|&n| members(n).map(|x| list_of(x as Set)).collect()).collect(),
            },
            AnyFrame::Single(Frame::C(g)) => FrameFile::CFrame {
                size: g.size,
                f: (0..g.size).map(|w| (0..1 << g.size).map(|x| list_of(g.sel(w, x))).collect()).collect(),
            },
            AnyFrame::TsN(k) => FrameFile::TsNFrame {
                x: k.nx,
                y: k.ny,
                r_ni: k.r_ni.pairs(),
                r_nni: k.r_nni.pairs(),
                r_nu: k.r_nu.pairs(),
                r_nuc: k.r_nuc.pairs(),
            },
            AnyFrame::TsC(k) => FrameFile::TsCFrame {
                x: k.nx,
                y: k.ny,
                r_ni: k.r_ni.pairs(),
                r_nni: k.r_nni.pairs(),
                t_f: k.t_f.triples(),
            },
        }
    }

    pub fn from_file(file: &FrameFile) -> Result<AnyFrame> {
        Ok(match file {
            FrameFile::NFrame { size, nu } => {
                if *size == 0 || *size > 6 {
                    return Err(SemError::TooLarge(*size));
                }
                let mut fam = Vec::new();
                for w in nu {
                    let mut bits = 0;
                    for x in w {
                        bits |= 1u64 << set_of(x, *size)?;
                    }
                    fam.push(bits);
                }
                AnyFrame::Single(Frame::N(NFrame::new(*size, fam)?))
            }
            FrameFile::CFrame { size, f } => {
                if *size == 0 || *size > 6 {
                    return Err(SemError::TooLarge(*size));
                }
                let mut table = Vec::new();
                for row in f {
                    if row.len() != 1 << size {
                        return Err(SemError::Malformed("one entry per subset expected".into()));
                    }
                    for x in row {
                        table.push(set_of(x, *size)?);
                    }
                }
                AnyFrame::Single(Frame::C(CFrame::new(*size, table)?))
            }
            FrameFile::TsNFrame { x, y, r_ni, r_nni, r_nu, r_nuc } => {
                if *x > 64 || *y > 64 {
                    return Err(SemError::TooLarge((*x).max(*y)));
                }
                AnyFrame::TsN(TwoSortedNFrame {
                    nx: *x,
                    ny: *y,
                    r_ni: Rel::from_pairs(*y, *x, r_ni)?,
                    r_nni: Rel::from_pairs(*y, *x, r_nni)?,
                    r_nu: Rel::from_pairs(*x, *y, r_nu)?,
                    r_nuc: Rel::from_pairs(*x, *y, r_nuc)?,
                })
            }
            FrameFile::TsCFrame { x, y, r_ni, r_nni, t_f } => {
                if *x > 64 || *y > 64 {
                    return Err(SemError::TooLarge((*x).max(*y)));
                }
                AnyFrame::TsC(TwoSortedCFrame {
                    nx: *x,
                    ny: *y,
                    r_ni: Rel::from_pairs(*y, *x, r_ni)?,
                    r_nni: Rel::from_pairs(*y, *x, r_nni)?,
                    t_f: Ternary::from_triples(*x, *y, *x, t_f)?,
                })
            }
        })
    }

    pub fn parse_json(text: &str) -> std::result::Result<AnyFrame, anyhow::Error> {
        let file: FrameFile = serde_json::from_str(text)?;
        Ok(AnyFrame::from_file(&file)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("frame files serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_single, parse_term};
    use proptest::prelude::*;

    fn nf(size: usize, nu: Vec<Set>) -> NFrame {
        NFrame::new(size, nu).unwrap()
    }

    #[test]
    fn unary_operator_examples() {
        let empty = Rel::empty(2, 2);
        assert_eq!(empty.apply(UnaryKind::Box, 0b01).unwrap(), 0b11);
        assert_eq!(empty.apply(UnaryKind::Diam, 0b11).unwrap(), 0);
        let r = Rel::from_pairs(2, 2, &[(0, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(r.apply(UnaryKind::Box, 0b10).unwrap(), 0b10);
        assert!(r.apply(UnaryKind::Box, 0b100).is_err());
    }

    #[test]
    fn ternary_operator_examples() {
        let e = Ternary::empty(1, 2, 1);
        assert_eq!(e.apply(TernaryKind::Tri, 0b11, 0).unwrap(), 0b1);
        assert_eq!(e.apply(TernaryKind::BlackTriUp, 0b11, 0b1).unwrap(), 0);
        let t = Ternary::from_triples(1, 2, 1, &[(0, 1, 0)]).unwrap();
        assert_eq!(t.tri(0b10, 0b1), 0b1);
        assert_eq!(t.tri(0b10, 0), 0);
    }

    /// Small random relations, independent oracle: the pointwise definitions.
    fn rel_strategy(src: usize, tgt: usize) -> impl Strategy<Value = Rel> {
        prop::collection::vec(0..1u64 << tgt, src).prop_map(move |succ| Rel { src, tgt, succ })
    }

    proptest! {
        #[test]
        fn adjunction_laws(r in rel_strategy(3, 3), a in 0..8u64, b in 0..8u64) {
            let rc = r.converse();
            // <R>T' ⊆ S' iff T' ⊆ [R^-1]S'
            prop_assert_eq!(subset(r.diam(a), b), subset(a, rc.boxr(b)));
            // [R>T' ⊇ S' iff T' ⊆ [R^-1>S'
            prop_assert_eq!(subset(b, r.boxarr(a)), subset(a, rc.boxarr(b)));
            // <R]T' ⊆ S' iff <R^-1]S' ⊆ T'
            prop_assert_eq!(subset(r.diamarr(a), b), subset(rc.diamarr(b), a));
            prop_assert_eq!(r.image(a), rc.diam(a));
            prop_assert_eq!(r.inv_box(a), rc.boxr(a));
            prop_assert_eq!(r.inv_boxarr(a), rc.boxarr(a));
            // pointwise definition of the box
            for s in 0..3 {
                let expect = (0..3).all(|t| !r.holds(s, t) || a >> t & 1 == 1);
                prop_assert_eq!(r.boxr(a) >> s & 1 == 1, expect);
            }
        }

        #[test]
        fn residuation_triple(succ in prop::collection::vec(0..8u64, 9), s in 0..8u64, t in 0..8u64, u in 0..8u64) {
            let tr = Ternary { n0: 3, n1: 3, n2: 3, succ };
            let a = subset(s, tr.tri(t, u));
            let b = subset(tr.blacktri_up(t, s), u);
            let c = subset(t, tr.blacktri_right(s, u));
            prop_assert_eq!(a, b);
            prop_assert_eq!(a, c);
        }
    }

    #[test]
    fn single_eval_examples() {
        let f = Frame::N(nf(1, vec![1 << 0b1]));
        let p = parse_single("nabla p", Mode::Nabla).unwrap();
        let v = |x| Env::from_props(&["p".to_string()], &[x]);
        assert_eq!(eval_single(&f, &v(1), &p).unwrap(), 1);
        assert_eq!(eval_single(&f, &v(0), &p).unwrap(), 0);
        let g = Frame::C(CFrame::new(1, vec![0, 0]).unwrap());
        let c = parse_single("(p > q)", Mode::Cond).unwrap();
        let env = Env::from_props(&["p".into(), "q".into()], &[1, 0]);
        assert_eq!(eval_single(&g, &env, &c).unwrap(), 1);
        assert!(matches!(eval_single(&f, &Env::new(), &p), Err(SemError::Unbound(_))));
    }

    #[test]
    fn validity_examples() {
        let f = Frame::N(nf(1, vec![1 << 0b1]));
        let f2 = Frame::N(nf(1, vec![0]));
        let s = |t: &str| crate::syntax::parse_single_sequent(t, Mode::Nabla).unwrap();
        assert!(valid_single(&f, &s("top |- nabla top")).unwrap());
        assert!(!valid_single(&f2, &s("top |- nabla top")).unwrap());
        assert!(countermodel_single(&f2, &s("top |- nabla top")).unwrap().is_some());
        assert!(valid_single(&f2, &s("p |- p")).unwrap());
        let big = s("((p & q) & (r & s)) |- t");
        assert!(matches!(valid_single(&f, &big), Err(SemError::TooManyProps(5))));
    }

    #[test]
    fn monotonicity_examples() {
        assert!(is_monotone(2, 1 << 0b01 | 1 << 0b11));
        assert!(!is_monotone(2, 1 << 0b01));
        assert_eq!(monotone_families(1).len(), 3);
        assert_eq!(monotone_families(2).len(), 6);
        assert_eq!(monotone_families(3).len(), 20);
        assert_eq!(all_nframes(2).len(), 36);
        assert_eq!(all_cframes(1).len(), 4);
    }

    #[test]
    fn nabla_is_monotone_in_its_argument() {
        for f in all_nframes(2) {
            for x in 0..4u64 {
                for y in 0..4u64 {
                    if subset(x, y) {
                        assert!(subset(f.nabla(x), f.nabla(y)));
                    }
                }
            }
        }
    }

    #[test]
    fn mt_eval_on_trivial_frames() {
        let k = TwoSortedCFrame {
            nx: 2,
            ny: 4,
            r_ni: Rel::empty(4, 2),
            r_nni: Rel::empty(4, 2),
            t_f: Ternary::empty(2, 4, 2),
        };
        let env = Env::from_props(&["p".into()], &[0]);
        assert_eq!(eval_mt(&k, &env, &parse_term("[ni] top").unwrap()).unwrap(), 0b1111);
        assert_eq!(eval_mt(&k, &env, &parse_term("([ni] p |> bot)").unwrap()).unwrap(), 0b11);
        assert!(eval_mt(&k, &env, &parse_term("<nu> [ni] p").unwrap()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"kind":"nframe","size":2,"nu":[[[0],[0,1]],[]]}"#;
        let f = AnyFrame::parse_json(text).unwrap();
        assert_eq!(f, AnyFrame::Single(Frame::N(nf(2, vec![1 << 0b01 | 1 << 0b11, 0]))));
        assert_eq!(AnyFrame::parse_json(&f.to_json()).unwrap(), f);
        let g = AnyFrame::Single(Frame::C(boundary_cframes(2)[2].clone()));
        assert_eq!(AnyFrame::parse_json(&g.to_json()).unwrap(), g);
        assert!(AnyFrame::parse_json(r#"{"kind":"nframe","size":2,"nu":[[[0]],[]]}"#).is_err());
    }
}
