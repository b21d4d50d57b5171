//! Translations of the single-type languages into the two-sorted ones.

use thiserror::Error;

use crate::syntax::{Mode, MtFormula, Sequent, Sig, Single, SingleSequent, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("formula mixes `nabla` and `>`")]
    MixedMode,
    #[error("formula is not in the {0:?} language")]
    WrongMode(Mode),
}

fn tau(f: &Single, positive: bool) -> Term {
    let go = |g: &Single| tau(g, positive);
    match f {
        Single::Prop(p) => Term::Prop(p.clone()),
        Single::Top => Term::Top,
        Single::Bot => Term::Bot,
        Single::Neg(a) => Term::neg(tau(a, !positive)),
        Single::And(a, b) => Term::and(go(a), go(b)),
        Single::Or(a, b) => Term::or(go(a), go(b)),
        Single::Nabla(a) => {
            if positive {
                Term::diam_nu(Term::box_ni(go(a)))
            } else {
                Term::box_nuc(Term::diam_nni(go(a)))
            }
        }
        Single::Cond(a, b) => {
            let a = tau(a, positive);
            Term::tri(Term::cap(Term::box_ni(a.clone()), Term::boxarr_nni(a)), go(b))
        }
    }
}

fn check(f: &Single, mode: Mode) -> Result<(), TranslateError> {
    f.check_mode(mode).map_err(|_| TranslateError::WrongMode(mode))
}

/// `tau1`: nabla in positive position becomes `<nu>[ni]`.
pub fn tau1(f: &Single) -> Result<MtFormula, TranslateError> {
    check(f, Mode::Nabla)?;
    Ok(MtFormula { sig: Sig::Nabla, term: tau(f, true) })
}

/// `tau2`: nabla becomes `[nuc]<nni>`.
pub fn tau2(f: &Single) -> Result<MtFormula, TranslateError> {
    check(f, Mode::Nabla)?;
    Ok(MtFormula { sig: Sig::Nabla, term: tau(f, false) })
}

/// Translation of `L_>`: `(a > b)` becomes `([ni] a ^ [nni> a) |> b`.
pub fn tau_cond(f: &Single) -> Result<MtFormula, TranslateError> {
    check(f, Mode::Cond)?;
    Ok(MtFormula { sig: Sig::Cond, term: tau(f, true) })
}

/// Which language a sequent lives in; sequents without modal operators
/// count as `Nabla`.
pub fn mode_of(seq: &SingleSequent) -> Result<Mode, TranslateError> {
    let n = seq.lhs.check_mode(Mode::Nabla).is_ok() && seq.rhs.check_mode(Mode::Nabla).is_ok();
    let c = seq.lhs.check_mode(Mode::Cond).is_ok() && seq.rhs.check_mode(Mode::Cond).is_ok();
    match (n, c) {
        (true, _) => Ok(Mode::Nabla),
        (false, true) => Ok(Mode::Cond),
        _ => Err(TranslateError::MixedMode),
    }
}

/// `tau1(lhs) |- tau2(rhs)` for nabla sequents, `lhs^t |- rhs^t` otherwise.
pub fn translate_sequent(seq: &SingleSequent, mode: Mode) -> Result<Sequent, TranslateError> {
    if seq.lhs.check_mode(mode).is_err() || seq.rhs.check_mode(mode).is_err() {
        mode_of(seq)?;
        return Err(TranslateError::WrongMode(mode));
    }
    let (l, r) = match mode {
        Mode::Nabla => (tau1(&seq.lhs)?.term, tau2(&seq.rhs)?.term),
        Mode::Cond => (tau_cond(&seq.lhs)?.term, tau_cond(&seq.rhs)?.term),
    };
    Ok(Sequent::of_terms(l, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_mt, parse_single, parse_single_sequent, Structure};
    use proptest::prelude::*;

    fn n(t: &str) -> Single {
        parse_single(t, Mode::Nabla).unwrap()
    }
    fn mt(t: &str, sig: Sig) -> Term {
        parse_mt(t, sig).unwrap().term
    }

    #[test]
    fn nabla_clauses() {
        assert_eq!(tau1(&n("nabla p")).unwrap().term, mt("<nu> [ni] p", Sig::Nabla));
        assert_eq!(tau1(&n("p")).unwrap().term, Term::prop("p"));
        assert_eq!(tau1(&n("~nabla p")).unwrap().term, mt("~[nuc] <nni> p", Sig::Nabla));
        assert_eq!(tau2(&n("nabla p")).unwrap().term, mt("[nuc] <nni> p", Sig::Nabla));
        assert_eq!(tau2(&n("~p")).unwrap().term, mt("~p", Sig::Nabla));
        assert_eq!(tau2(&n("nabla nabla p")).unwrap().term, mt("[nuc] <nni> [nuc] <nni> p", Sig::Nabla));
    }

    #[test]
    fn cond_clauses() {
        let c = |t: &str| tau_cond(&parse_single(t, Mode::Cond).unwrap()).unwrap().term;
        assert_eq!(c("p > q"), mt("(([ni] p ^ [nni> p) |> q)", Sig::Cond));
        assert_eq!(c("p > p"), mt("(([ni] p ^ [nni> p) |> p)", Sig::Cond));
        assert_eq!(c("p & q"), mt("(p & q)", Sig::Cond));
    }

    #[test]
    fn sequent_examples() {
        let s = parse_single_sequent("(nabla p & nabla q) |- nabla (p & q)", Mode::Nabla).unwrap();
        let t = translate_sequent(&s, Mode::Nabla).unwrap();
        assert_eq!(t.to_string(), "(<nu> [ni] p & <nu> [ni] q) |- [nuc] <nni> (p & q)");
        let s = parse_single_sequent("nabla p |- p", Mode::Nabla).unwrap();
        assert_eq!(translate_sequent(&s, Mode::Nabla).unwrap().to_string(), "<nu> [ni] p |- p");
        let s = parse_single_sequent("p |- p", Mode::Nabla).unwrap();
        assert_eq!(translate_sequent(&s, Mode::Nabla).unwrap().to_string(), "p |- p");
        assert_eq!(translate_sequent(&s, Mode::Cond).unwrap().to_string(), "p |- p");
        let mixed = SingleSequent { lhs: n("nabla p"), rhs: Single::cond(Single::prop("p"), Single::prop("q")) };
        assert_eq!(translate_sequent(&mixed, Mode::Nabla), Err(TranslateError::MixedMode));
    }

    /// Signed traversal of the source: collect the polarity of each nabla.
    fn nabla_signs(f: &Single, pos: bool, out: &mut Vec<bool>) {
        match f {
            Single::Neg(a) => nabla_signs(a, !pos, out),
            Single::And(a, b) | Single::Or(a, b) => {
                nabla_signs(a, pos, out);
                nabla_signs(b, pos, out)
            }
            Single::Nabla(a) => {
                out.push(pos);
                nabla_signs(a, pos, out)
            }
            _ => {}
        }
    }

    /// Same traversal of the image: `true` for `<nu>[ni]`, `false` for `[nuc]<nni>`.
    fn image_shapes(t: &Term, out: &mut Vec<bool>) {
        match t {
            Term::DiamNu(a) => {
                out.push(true);
                if let Term::BoxNi(b) = &**a {
                    image_shapes(b, out)
                } else {
                    panic!("bare <nu>")
                }
            }
            Term::BoxNuc(a) => {
                out.push(false);
                if let Term::DiamNni(b) = &**a {
                    image_shapes(b, out)
                } else {
                    panic!("bare [nuc]")
                }
            }
            _ => {
                if let Some((_, kids)) = t.split() {
                    kids.into_iter().for_each(|k| image_shapes(k, out))
                }
            }
        }
    }

    fn single_nabla() -> impl Strategy<Value = Single> {
        let leaf = prop_oneof![Just(Single::prop("p")), Just(Single::prop("q")), Just(Single::Top)];
        leaf.prop_recursive(5, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Single::neg),
                inner.clone().prop_map(Single::nabla),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Single::and(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| Single::or(a, b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn positional_discipline(l in single_nabla(), r in single_nabla()) {
            let seq = SingleSequent { lhs: l.clone(), rhs: r.clone() };
            let t = translate_sequent(&seq, Mode::Nabla).unwrap();
            let (Structure::Form(tl), Structure::Form(tr)) = (&t.lhs, &t.rhs) else { panic!() };
            // The antecedent counts as positive, the succedent as negative.
            let (mut want, mut got) = (Vec::new(), Vec::new());
            nabla_signs(&l, true, &mut want);
            image_shapes(tl, &mut got);
            prop_assert_eq!(&want, &got);
            let (mut want, mut got) = (Vec::new(), Vec::new());
            nabla_signs(&r, false, &mut want);
            image_shapes(tr, &mut got);
            prop_assert_eq!(want, got);
            prop_assert!(tl.check_sig(Sig::Nabla).is_ok());
        }
    }
}
