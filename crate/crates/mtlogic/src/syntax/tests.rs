use super::*;
use proptest::prelude::*;

fn single_strategy(mode: Mode) -> impl Strategy<Value = Single> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["p", "q", "r", "s1"]).prop_map(Single::prop),
        Just(Single::Top),
        Just(Single::Bot),
    ];
    leaf.prop_recursive(6, 64, 2, move |inner| {
        let modal = match mode {
            Mode::Nabla => inner.clone().prop_map(Single::nabla).boxed(),
            Mode::Cond => (inner.clone(), inner.clone()).prop_map(|(a, b)| Single::cond(a, b)).boxed(),
        };
        prop_oneof![
            inner.clone().prop_map(Single::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Single::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Single::or(a, b)),
            modal,
        ]
    })
}

/// Well-sorted terms of a signature: a pair of mutually recursive sorts,
/// generated by depth.
fn mt_term(sig: Sig, sort: Sort, depth: u32) -> BoxedStrategy<Term> {
    let leaf: BoxedStrategy<Term> = match sort {
        Sort::S => prop_oneof![
            prop::sample::select(vec!["p", "q", "r"]).prop_map(Term::prop),
            Just(Term::Top),
            Just(Term::Bot),
        ]
        .boxed(),
        Sort::N => prop_oneof![Just(Term::One), Just(Term::Zero)].boxed(),
    };
    if depth == 0 {
        return leaf;
    }
    let s = || mt_term(sig, Sort::S, depth - 1);
    let n = || mt_term(sig, Sort::N, depth - 1);
    let mut opts: Vec<BoxedStrategy<Term>> = vec![leaf];
    match sort {
        Sort::S => {
            opts.push(s().prop_map(Term::neg).boxed());
            opts.push((s(), s()).prop_map(|(a, b)| Term::and(a, b)).boxed());
            opts.push((s(), s()).prop_map(|(a, b)| Term::or(a, b)).boxed());
            match sig {
                Sig::Nabla => {
                    opts.push(n().prop_map(Term::diam_nu).boxed());
                    opts.push(n().prop_map(Term::box_nuc).boxed());
                }
                Sig::Cond => opts.push((n(), s()).prop_map(|(a, b)| Term::tri(a, b)).boxed()),
            }
        }
        Sort::N => {
            opts.push(n().prop_map(|a| Term::Sim(Box::new(a))).boxed());
            opts.push((n(), n()).prop_map(|(a, b)| Term::cap(a, b)).boxed());
            opts.push((n(), n()).prop_map(|(a, b)| Term::Cup(Box::new(a), Box::new(b))).boxed());
            opts.push(s().prop_map(Term::box_ni).boxed());
            match sig {
                Sig::Nabla => opts.push(s().prop_map(Term::diam_nni).boxed()),
                Sig::Cond => opts.push(s().prop_map(Term::boxarr_nni).boxed()),
            }
        }
    }
    proptest::strategy::Union::new(opts).boxed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn single_nabla_round_trip(f in single_strategy(Mode::Nabla)) {
        prop_assert!(f.depth() <= 6);
        let text = f.to_string();
        prop_assert_eq!(parse_single(&text, Mode::Nabla).unwrap(), f);
    }

    #[test]
    fn single_cond_round_trip(f in single_strategy(Mode::Cond)) {
        let text = f.to_string();
        prop_assert_eq!(parse_single(&text, Mode::Cond).unwrap(), f);
    }

    #[test]
    fn mt_nabla_round_trip(t in mt_term(Sig::Nabla, Sort::S, 6)) {
        prop_assert!(t.check_sig(Sig::Nabla).is_ok());
        let text = t.to_string();
        prop_assert_eq!(parse_mt(&text, Sig::Nabla).unwrap().term, t);
    }

    #[test]
    fn mt_cond_round_trip(t in mt_term(Sig::Cond, Sort::S, 6)) {
        prop_assert!(t.check_sig(Sig::Cond).is_ok());
        let text = t.to_string();
        prop_assert_eq!(parse_mt(&text, Sig::Cond).unwrap().term, t);
    }

    #[test]
    fn mt_n_sort_round_trip(t in mt_term(Sig::Cond, Sort::N, 5)) {
        prop_assert_eq!(t.sort().unwrap(), Sort::N);
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }
}

#[test]
fn grammar_examples() {
    assert_eq!(parse_single("nabla p", Mode::Nabla).unwrap(), Single::nabla(Single::prop("p")));
    assert_eq!(
        parse_single("(p > q)", Mode::Cond).unwrap(),
        Single::cond(Single::prop("p"), Single::prop("q"))
    );
    assert!(matches!(parse_single("(p > q)", Mode::Nabla), Err(SyntaxError::Signature(_))));
    assert_eq!(
        parse_mt("<nu> [ni] p", Sig::Nabla).unwrap().term,
        Term::diam_nu(Term::box_ni(Term::prop("p")))
    );
    let p = || Term::prop("p");
    assert_eq!(
        parse_mt("(([ni] p ^ [nni> p) |> q)", Sig::Cond).unwrap().term,
        Term::tri(Term::cap(Term::box_ni(p()), Term::boxarr_nni(p())), Term::prop("q"))
    );
    assert!(matches!(parse_mt("[ni] [ni] p", Sig::Nabla), Err(SyntaxError::Sort(_))));
    assert!(matches!(parse_mt("([ni] p |> q)", Sig::Nabla), Err(SyntaxError::Signature(_))));
}

#[test]
fn render_examples() {
    assert_eq!(Single::nabla(Single::prop("p")).to_string(), "nabla p");
    assert_eq!(Term::diam_nu(Term::box_ni(Term::prop("p"))).to_string(), "<nu> [ni] p");
    assert_eq!(Sequent::of_terms(Term::prop("p"), Term::prop("p")).to_string(), "p |- p");
    assert_eq!(Single::neg(Single::prop("p")).to_string(), "~p");
}

#[test]
fn binary_needs_parentheses() {
    assert!(parse_single("p & q", Mode::Nabla).is_ok());
    assert!(parse_single("p & q & r", Mode::Nabla).is_err());
    assert!(parse_single("(p & q) & r", Mode::Nabla).is_ok());
    assert!(parse_single("nabla p & q", Mode::Nabla).is_ok());
}

#[test]
fn implication_is_sugar() {
    let f = parse_single("p -> q", Mode::Nabla).unwrap();
    assert_eq!(f, Single::or(Single::neg(Single::prop("p")), Single::prop("q")));
}

#[test]
fn parse_errors_carry_positions() {
    match parse_single("(p & ", Mode::Nabla) {
        Err(SyntaxError::Parse { pos, .. }) => assert_eq!(pos, 5),
        other => panic!("{:?}", other),
    }
}

#[test]
fn structures_parse_and_check_polarity() {
    let s = parse_sequent("{<nu>} [ni] A |- A").unwrap();
    assert_eq!(s.lhs, Structure::DiamNu(Box::new(Structure::Form(Term::box_ni(Term::var(Sort::S, "A"))))));
    assert_eq!(s.to_string(), "{<nu>} [ni] A |- A");
    assert!(matches!(parse_sequent("X |- {<nu>} Ga"), Err(SyntaxError::Polarity(_))));
    assert!(matches!(parse_sequent("{top} |- {bot}"), Ok(_)));
    assert!(matches!(parse_sequent("{bot} |- X"), Err(SyntaxError::Polarity(_))));
    // {~} flips polarity, so a hat under it belongs on the right.
    assert!(parse_sequent("X |- {~} {top}").is_ok());
    assert!(parse_sequent("(Ga {|>} X) |- Y").is_err());
    assert!(parse_sequent("Y |- ((Ga {^} De) {|>} X)").is_ok());
    assert!(matches!(parse_sequent("X |- Ga"), Err(SyntaxError::Sort(_))));
}

#[test]
fn sequent_round_trip() {
    for text in [
        "{top} |- (([ni] A {^} [nni> A) {|>} A)",
        "(X {&} Y) |- {[nuc]} {[ni]} Z",
        "Ga |- {[ni]} {[nin>} De",
        "{top} |- (((Ga {^} De) {|>} X) {|} ((Th {^} Pi) {|>} {~} Y))",
    ] {
        let s = parse_sequent(text).unwrap();
        assert_eq!(s.to_string(), text);
    }
}

fn b(t: Term) -> Box<Term> {
    Box::new(t)
}

/// Hand-built trees that violate the arity signatures.
fn ill_sorted() -> Vec<Term> {
    let p = || Term::prop("p");
    let n = || Term::box_ni(p());
    vec![
        Term::BoxNi(b(n())),
        Term::DiamNu(b(p())),
        Term::BoxNuc(b(Term::Top)),
        Term::DiamNni(b(n())),
        Term::BoxArrNni(b(Term::One)),
        Term::Neg(b(n())),
        Term::And(b(p()), b(n())),
        Term::Or(b(Term::One), b(p())),
        Term::Tri(b(p()), b(p())),
        Term::Tri(b(n()), b(n())),
        Term::Sim(b(p())),
        Term::Cap(b(p()), b(n())),
        Term::Cup(b(n()), b(Term::Bot)),
        Term::DiamNu(b(Term::Neg(b(n())))),
        Term::Neg(b(Term::DiamNu(b(Term::Top)))),
        Term::Cap(b(n()), b(Term::BoxNi(b(Term::Zero)))),
        Term::BoxNi(b(Term::Sim(b(Term::One)))),
        Term::Tri(b(Term::Cap(b(n()), b(p()))), b(p())),
        Term::And(b(Term::Tri(b(n()), b(p()))), b(Term::DiamNni(b(Term::One)))),
        Term::BlackTriR(b(n()), b(p())),
    ]
}

#[test]
fn sort_checker_rejects_ill_sorted_corpus() {
    let corpus = ill_sorted();
    assert_eq!(corpus.len(), 20);
    for t in corpus {
        assert!(t.sort().is_err(), "accepted {:?}", t);
    }
}

#[test]
fn signature_split() {
    let t = parse_term("([ni] p |> q)").unwrap();
    assert!(t.check_sig(Sig::Cond).is_ok());
    assert!(t.check_sig(Sig::Nabla).is_err());
    let u = parse_term("<nu> <nni> p").unwrap();
    assert!(u.check_sig(Sig::Nabla).is_ok());
    assert!(u.check_sig(Sig::Cond).is_err());
    assert!(parse_term("<in> [ni] p").unwrap().check_sig(Sig::Nabla).is_err());
}
