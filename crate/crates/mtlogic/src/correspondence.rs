//! First-order frame conditions for the axioms of monotone modal logic and
//! conditional logic, and the check that each one matches axiom validity.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::semantics::{full, subset, valid_formula, CFrame, Frame, NFrame, SemError};
use crate::syntax::{parse_single, parse_single_sequent, Mode, Single, SingleSequent};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    N,
    P,
    C,
    T,
    Four,
    FourPrime,
    Five,
    B,
    D,
    CS,
    CEM,
    ID,
    CN,
    Tcond,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorrespondenceError {
    #[error("axiom {0} is about {1:?} frames")]
    KindMismatch(AxiomId, Mode),
    #[error("unknown axiom `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Sem(#[from] SemError),
}

impl AxiomId {
    pub const ALL: [AxiomId; 14] = [
        AxiomId::N,
        AxiomId::P,
        AxiomId::C,
        AxiomId::T,
        AxiomId::Four,
        AxiomId::FourPrime,
        AxiomId::Five,
        AxiomId::B,
        AxiomId::D,
        AxiomId::CS,
        AxiomId::CEM,
        AxiomId::ID,
        AxiomId::CN,
        AxiomId::Tcond,
    ];

    pub fn mode(self) -> Mode {
        match self {
            AxiomId::CS | AxiomId::CEM | AxiomId::ID | AxiomId::CN | AxiomId::Tcond => Mode::Cond,
            _ => Mode::Nabla,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::N => "N",
            AxiomId::P => "P",
            AxiomId::C => "C",
            AxiomId::T => "T",
            AxiomId::Four => "4",
            AxiomId::FourPrime => "4'",
            AxiomId::Five => "5",
            AxiomId::B => "B",
            AxiomId::D => "D",
            AxiomId::CS => "CS",
            AxiomId::CEM => "CEM",
            AxiomId::ID => "ID",
            AxiomId::CN => "CN",
            AxiomId::Tcond => "T>",
        }
    }

    /// The axiom as a formula, with implication unfolded.
    pub fn formula(self) -> Single {
        let text = match self {
            AxiomId::N => "nabla top",
            AxiomId::P => "~nabla bot",
            AxiomId::C => "(nabla p & nabla q) -> nabla (p & q)",
            AxiomId::T => "nabla p -> p",
            AxiomId::Four => "nabla nabla p -> nabla p",
            AxiomId::FourPrime => "nabla p -> nabla nabla p",
            AxiomId::Five => "~nabla ~p -> nabla ~nabla ~p",
            AxiomId::B => "p -> nabla ~nabla ~p",
            AxiomId::D => "nabla p -> ~nabla ~p",
            AxiomId::CS => "(p & q) -> (p > q)",
            AxiomId::CEM => "(p > q) | (p > ~q)",
            AxiomId::ID => "p > p",
            AxiomId::CN => "(p > q) | (q > p)",
            AxiomId::Tcond => "(bot > ~p) -> p",
        };
        parse_single(text, self.mode()).expect("axiom table parses")
    }

    /// The axiom as a sequent, in the shape used for correspondence and
    /// proof search.
    pub fn sequent(self) -> SingleSequent {
        let text = match self {
            AxiomId::N => "top |- nabla top",
            AxiomId::P => "top |- ~nabla bot",
            AxiomId::C => "(nabla p & nabla q) |- nabla (p & q)",
            AxiomId::T => "nabla p |- p",
            AxiomId::Four => "nabla nabla p |- nabla p",
            AxiomId::FourPrime => "nabla p |- nabla nabla p",
            AxiomId::Five => "~nabla ~p |- nabla ~nabla ~p",
            AxiomId::B => "p |- nabla ~nabla ~p",
            AxiomId::D => "nabla p |- ~nabla ~p",
            AxiomId::CS => "(p & q) |- (p > q)",
            AxiomId::CEM => "top |- ((p > q) | (p > ~q))",
            AxiomId::ID => "top |- (p > p)",
            AxiomId::CN => "top |- ((p > q) | (q > p))",
            AxiomId::Tcond => "(bot > ~p) |- p",
        };
        parse_single_sequent(text, self.mode()).expect("axiom table parses")
    }

    /// The frame condition in words.
    pub fn condition_text(self) -> &'static str {
        match self {
            AxiomId::N => "∀w[W ∈ ν(w)]",
            AxiomId::P => "∀w[∅ ∉ ν(w)]",
            AxiomId::C => "∀w∀X∀Y[(X ∈ ν(w) & Y ∈ ν(w)) ⇒ X ∩ Y ∈ ν(w)]",
            AxiomId::T => "∀w∀X[X ∈ ν(w) ⇒ w ∈ X]",
            AxiomId::Four => "∀w∀Y[(∃X)(X ∈ ν(w) & ∀x(x ∈ X ⇒ Y ∈ ν(x))) ⇒ Y ∈ ν(w)]",
            AxiomId::FourPrime => "∀w∀X[X ∈ ν(w) ⇒ {y | X ∈ ν(y)} ∈ ν(w)]",
            AxiomId::Five => "∀w∀X[X ∉ ν(w) ⇒ {y | X ∈ ν(y)}ᶜ ∈ ν(w)]",
            AxiomId::B => "∀w∀X[w ∈ X ⇒ {y | Xᶜ ∈ ν(y)}ᶜ ∈ ν(w)]",
            AxiomId::D => "∀w∀X[X ∈ ν(w) ⇒ Xᶜ ∉ ν(w)]",
            AxiomId::CS => "∀x∀Z[x ∈ Z ⇒ f(x,Z) ⊆ {x}]",
            AxiomId::CEM => "∀X∀y[|f(y,X)| ≤ 1]",
            AxiomId::ID => "∀x∀Z[f(x,Z) ⊆ Z]",
            AxiomId::CN => "∀z∀x∀y∀X∀Y[(y ∉ X & x ∉ Y) ⇒ (x ∉ f(z,X) or y ∉ f(z,Y))]",
            AxiomId::Tcond => "∀z∀X[f(z,∅) ⊆ Xᶜ ⇒ z ∈ X]",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomId {
    type Err = CorrespondenceError;
    fn from_str(s: &str) -> Result<AxiomId, CorrespondenceError> {
        let t = s.trim();
        AxiomId::ALL
            .iter()
            .copied()
            .find(|a| {
                a.name().eq_ignore_ascii_case(t)
                    || format!("{:?}", a).eq_ignore_ascii_case(t)
                    || (*a == AxiomId::Tcond && t.eq_ignore_ascii_case("Tc"))
            })
            .ok_or_else(|| CorrespondenceError::Unknown(t.to_string()))
    }
}

fn for_all_w(f: &NFrame, p: impl Fn(usize) -> bool) -> bool {
    (0..f.size).all(p)
}

fn n_condition(id: AxiomId, f: &NFrame) -> bool {
    let w_all = full(f.size);
    let subsets = || 0..1u64 << f.size;
    match id {
        AxiomId::N => for_all_w(f, |w| f.has(w, w_all)),
        AxiomId::P => for_all_w(f, |w| !f.has(w, 0)),
        AxiomId::C => for_all_w(f, |w| {
            subsets().all(|x| subsets().all(|y| !(f.has(w, x) && f.has(w, y)) || f.has(w, x & y)))
        }),
        AxiomId::T => for_all_w(f, |w| subsets().all(|x| !f.has(w, x) || x >> w & 1 == 1)),
        AxiomId::Four => for_all_w(f, |w| {
            subsets().all(|y| {
                let premise =
                    subsets().any(|x| f.has(w, x) && (0..f.size).all(|v| x >> v & 1 == 0 || f.has(v, y)));
                !premise || f.has(w, y)
            })
        }),
        AxiomId::FourPrime => for_all_w(f, |w| subsets().all(|x| !f.has(w, x) || f.has(w, f.nabla(x)))),
        AxiomId::Five => {
            for_all_w(f, |w| subsets().all(|x| f.has(w, x) || f.has(w, w_all & !f.nabla(x))))
        }
        AxiomId::B => for_all_w(f, |w| {
            subsets().all(|x| x >> w & 1 == 0 || f.has(w, w_all & !f.nabla(w_all & !x)))
        }),
        AxiomId::D => for_all_w(f, |w| subsets().all(|x| !f.has(w, x) || !f.has(w, w_all & !x))),
        _ => unreachable!(),
    }
}

fn c_condition(id: AxiomId, g: &CFrame) -> bool {
    let n = g.size;
    let w_all = full(n);
    let subsets = || 0..1u64 << n;
    let worlds = || 0..n;
    match id {
        AxiomId::CS => worlds().all(|x| subsets().all(|z| z >> x & 1 == 0 || subset(g.sel(x, z), 1 << x))),
        AxiomId::CEM => worlds().all(|y| subsets().all(|x| g.sel(y, x).count_ones() <= 1)),
        AxiomId::ID => worlds().all(|x| subsets().all(|z| subset(g.sel(x, z), z))),
        AxiomId::CN => worlds().all(|z| {
            subsets().all(|sx| {
                subsets().all(|sy| {
                    worlds().all(|x| {
                        worlds().all(|y| {
                            !(sy >> x & 1 == 0 && sx >> y & 1 == 0)
                                || g.sel(z, sx) >> x & 1 == 0
                                || g.sel(z, sy) >> y & 1 == 0
                        })
                    })
                })
            })
        }),
        AxiomId::Tcond => {
            worlds().all(|z| subsets().all(|x| !subset(g.sel(z, 0), w_all & !x) || x >> z & 1 == 1))
        }
        _ => unreachable!(),
    }
}

/// Evaluate the frame condition of `id` by enumeration.
pub fn frame_condition(id: AxiomId, frame: &Frame) -> Result<bool, CorrespondenceError> {
    match (frame, id.mode()) {
        (Frame::N(f), Mode::Nabla) => Ok(n_condition(id, f)),
        (Frame::C(g), Mode::Cond) => Ok(c_condition(id, g)),
        _ => Err(CorrespondenceError::KindMismatch(id, id.mode())),
    }
}

/// Unguarded forms of three conditions: `f(x,Z) ⊆ {x}` for CS,
/// `x ∉ f(z,X) or y ∉ f(z,Y)` for CN and `∃x[x ∈ f(z,∅)]` for T>.
/// They do not match validity; kept so tests can show where they fail.
pub fn unguarded_condition(id: AxiomId, g: &CFrame) -> Option<bool> {
    let n = g.size;
    let subsets = || 0..1u64 << n;
    match id {
        AxiomId::CS => Some((0..n).all(|x| subsets().all(|z| subset(g.sel(x, z), 1 << x)))),
        AxiomId::CN => Some((0..n).all(|z| {
            subsets().all(|sx| {
                subsets().all(|sy| {
                    (0..n).all(|x| (0..n).all(|y| g.sel(z, sx) >> x & 1 == 0 || g.sel(z, sy) >> y & 1 == 0))
                })
            })
        })),
        AxiomId::Tcond => Some((0..n).all(|z| g.sel(z, 0) != 0)),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Equiv {
    pub valid: bool,
    pub condition: bool,
    pub agree: bool,
}

pub fn check_equiv(id: AxiomId, frame: &Frame) -> Result<Equiv, CorrespondenceError> {
    let condition = frame_condition(id, frame)?;
    let valid = valid_formula(frame, &id.formula())?;
    Ok(Equiv { valid, condition, agree: valid == condition })
}

/// Frame families used for the checks: all n-frames up to `max_n` worlds,
/// or all one-world c-frames plus seeded samples and boundary frames.
pub fn standard_family(mode: Mode, max_n: usize, samples: usize, seed: u64) -> Vec<Frame> {
    use crate::semantics::{all_cframes, all_nframes, boundary_cframes, random_cframes};
    match mode {
        Mode::Nabla => (1..=max_n).flat_map(all_nframes).map(Frame::N).collect(),
        Mode::Cond => {
            let mut v: Vec<Frame> = all_cframes(1).into_iter().map(Frame::C).collect();
            v.extend(boundary_cframes(1).into_iter().map(Frame::C));
            for n in 2..=max_n {
                v.extend(random_cframes(n, samples, seed).into_iter().map(Frame::C));
                v.extend(boundary_cframes(n).into_iter().map(Frame::C));
            }
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{all_cframes, all_nframes, random_cframes, Set};

    fn nf(size: usize, nu: Vec<Set>) -> Frame {
        Frame::N(NFrame::new(size, nu).unwrap())
    }

    #[test]
    fn axiom_formulas() {
        assert_eq!(AxiomId::N.formula(), Single::nabla(Single::Top));
        assert_eq!(AxiomId::CS.formula().to_string(), "(~(p & q) | (p > q))");
        assert_eq!(AxiomId::Tcond.formula().to_string(), "(~(bot > ~p) | p)");
        assert_eq!("4'".parse::<AxiomId>().unwrap(), AxiomId::FourPrime);
        assert_eq!("t>".parse::<AxiomId>().unwrap(), AxiomId::Tcond);
        assert!("Q".parse::<AxiomId>().is_err());
    }

    #[test]
    fn condition_examples() {
        assert!(frame_condition(AxiomId::N, &nf(1, vec![1 << 1])).unwrap());
        assert!(!frame_condition(AxiomId::P, &nf(1, vec![1 << 0 | 1 << 1])).unwrap());
        let id = Frame::C(crate::semantics::boundary_cframes(2)[1].clone());
        assert!(frame_condition(AxiomId::ID, &id).unwrap());
        assert!(frame_condition(AxiomId::ID, &nf(1, vec![0])).is_err());
    }

    #[test]
    fn n_rows_agree_up_to_two_worlds() {
        let frames: Vec<Frame> = (1..=2).flat_map(all_nframes).map(Frame::N).collect();
        for id in AxiomId::ALL.iter().filter(|a| a.mode() == Mode::Nabla) {
            for f in &frames {
                let e = check_equiv(*id, f).unwrap();
                assert!(e.agree, "{} disagrees on {:?}: {:?}", id, f, e);
            }
        }
    }

    #[test]
    fn c_rows_agree_on_small_samples() {
        let mut frames: Vec<Frame> = all_cframes(1).into_iter().map(Frame::C).collect();
        frames.extend(random_cframes(2, 100, 7).into_iter().map(Frame::C));
        for id in AxiomId::ALL.iter().filter(|a| a.mode() == Mode::Cond) {
            for f in &frames {
                assert!(check_equiv(*id, f).unwrap().agree, "{} on {:?}", id, f);
            }
        }
    }

    /// CN on every two-world c-frame, against an independent reading of the
    /// axiom: no w, X, Y with f(w,X) ⊄ Y and f(w,Y) ⊄ X.
    #[test]
    fn cn_row_is_exact_on_two_worlds() {
        for code in 0..1u64 << 16 {
            let g = CFrame::new(2, (0..8).map(|i| (code >> (2 * i)) & 3).collect()).unwrap();
            let oracle = (0..2).all(|w| {
                (0..4u64).all(|x| (0..4u64).all(|y| subset(g.sel(w, x), y) || subset(g.sel(w, y), x)))
            });
            assert_eq!(frame_condition(AxiomId::CN, &Frame::C(g.clone())).unwrap(), oracle, "{:?}", g);
            assert_eq!(check_equiv(AxiomId::CN, &Frame::C(g)).unwrap().valid, oracle);
        }
    }

    #[test]
    fn c_rows_are_exact_on_two_worlds() {
        for code in 0..1u64 << 16 {
            let f = Frame::C(CFrame::new(2, (0..8).map(|i| (code >> (2 * i)) & 3).collect()).unwrap());
            for id in AxiomId::ALL.iter().filter(|a| a.mode() == Mode::Cond) {
                assert!(check_equiv(*id, &f).unwrap().agree, "{} on {:?}", id, f);
            }
        }
    }

    /// The unguarded CS, CN and T> conditions each fail on some frame.
    #[test]
    fn unguarded_conditions_have_counterexamples() {
        // CS: selecting a world outside Z is harmless, since the axiom only
        // constrains f(x, Z) when x ∈ Z.
        let g2 = CFrame::new(2, vec![0b10, 0, 0b10, 0, 0, 0, 0, 0]).unwrap();
        assert!(check_equiv(AxiomId::CS, &Frame::C(g2.clone())).unwrap().valid);
        assert_eq!(unguarded_condition(AxiomId::CS, &g2), Some(false));
        // CN: the identity selection function validates the axiom on one world.
        let id1 = CFrame::new(1, vec![0, 1]).unwrap();
        assert!(check_equiv(AxiomId::CN, &Frame::C(id1.clone())).unwrap().valid);
        assert_eq!(unguarded_condition(AxiomId::CN, &id1), Some(false));
        // T>: the axiom fails everywhere, the unguarded condition does not.
        let g = CFrame::new(1, vec![1, 1]).unwrap();
        let fr = Frame::C(g.clone());
        assert!(!check_equiv(AxiomId::Tcond, &fr).unwrap().valid);
        assert_eq!(unguarded_condition(AxiomId::Tcond, &g), Some(true));
    }
}
