//! Properties of the display calculi: the prover only proves valid
//! sequents, cut is not needed on small goals, and every extension rule is
//! sound on the frames meeting its condition.

use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mtlogic::calculus::{
    check_derivation, extension_rule, prove_with, rule_sound_on, ruleset, sequent_valid_on, Limits, ProveFailure,
};
use mtlogic::constructions::{star_c, star_n};
use mtlogic::correspondence::{frame_condition, AxiomId};
use mtlogic::selftest::{all_cframes2, nframes_upto, random_sequents};
use mtlogic::semantics::{all_cframes, Frame};
use mtlogic::syntax::{Mode, Sequent};
use mtlogic::translate::translate_sequent;

const N_EXT: [AxiomId; 5] = [AxiomId::N, AxiomId::P, AxiomId::C, AxiomId::T, AxiomId::D];
const C_EXT: [AxiomId; 4] = [AxiomId::CS, AxiomId::CEM, AxiomId::ID, AxiomId::CN];

fn cframes_upto2() -> Vec<Frame> {
    let mut v: Vec<Frame> = all_cframes(1).into_iter().map(Frame::C).collect();
    v.extend(all_cframes2().into_iter().map(Frame::C));
    v
}

fn valid_on(f: &Frame, s: &Sequent) -> bool {
    match f {
        Frame::N(n) => sequent_valid_on(&star_n(n), s).unwrap(),
        Frame::C(g) => sequent_valid_on(&star_c(g), s).unwrap(),
    }
}

fn limits(depth: usize) -> Limits {
    Limits { timeout: Some(Duration::from_millis(300)), max_nodes: 20_000, ..Limits::depth(depth) }
}

/// A random subset of `pool`.
fn pick(rng: &mut ChaCha8Rng, pool: &[AxiomId]) -> Vec<AxiomId> {
    pool.iter().copied().filter(|_| rng.gen_bool(0.4)).collect()
}

#[test]
fn prover_is_sound_on_random_goals() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let nf = nframes_upto(2);
    let cf = cframes_upto2();
    let mut proved = 0;
    for (mode, pool, frames, seed) in [(Mode::Nabla, &N_EXT[..], &nf, 1), (Mode::Cond, &C_EXT[..], &cf, 2)] {
        for s in random_sequents(mode, 50, 3, seed) {
            let goal = translate_sequent(&s, mode).unwrap();
            let ext = pick(&mut rng, pool);
            let rs = ruleset(mode.sig(), &ext, false).unwrap();
            let Ok(d) = prove_with(&goal, &rs, &limits(12)) else { continue };
            proved += 1;
            assert_eq!(check_derivation(&d, &rs), Ok(()), "{}", goal);
            for f in frames.iter().filter(|f| ext.iter().all(|a| frame_condition(*a, f).unwrap())) {
                assert!(valid_on(f, &goal), "{} with {:?} proved but refuted on {:?}", goal, ext, f);
            }
        }
    }
    assert!(proved >= 20, "only {} of 100 goals proved", proved);
}

#[test]
fn cut_free_proofs_exist_for_goals_provable_with_cut() {
    let mut found = 0;
    for (mode, ext) in [(Mode::Nabla, vec![AxiomId::T, AxiomId::C]), (Mode::Cond, vec![AxiomId::ID, AxiomId::CS])] {
        let with_cut = ruleset(mode.sig(), &ext, true).unwrap();
        let without = ruleset(mode.sig(), &ext, false).unwrap();
        let mut here = 0;
        for s in random_sequents(mode, 400, 3, 5) {
            if here == 25 {
                break;
            }
            let goal = translate_sequent(&s, mode).unwrap();
            if prove_with(&goal, &with_cut, &limits(8)).is_err() {
                continue;
            }
            here += 1;
            let d = prove_with(&goal, &without, &limits(14))
                .unwrap_or_else(|e| panic!("{} provable with cut, not without: {}", goal, e));
            assert!(d.is_cut_free());
            assert_eq!(check_derivation(&d, &without), Ok(()));
        }
        found += here;
    }
    assert_eq!(found, 50);
}

#[test]
fn extension_rules_hold_where_their_condition_does() {
    let nf = nframes_upto(2);
    let cf = cframes_upto2();
    for id in AxiomId::ALL {
        let Ok(rule) = extension_rule(id) else {
            assert!(matches!(id, AxiomId::Four | AxiomId::FourPrime | AxiomId::Five | AxiomId::B | AxiomId::Tcond));
            continue;
        };
        let frames = if id.mode() == Mode::Nabla { &nf } else { &cf };
        let mut meet = 0;
        for f in frames.iter().filter(|f| frame_condition(id, f).unwrap()) {
            meet += 1;
            let ok = match f {
                Frame::N(n) => rule_sound_on(&rule, &star_n(n)).unwrap(),
                Frame::C(g) => rule_sound_on(&rule, &star_c(g)).unwrap(),
            };
            assert!(ok, "{} fails on {:?}", id, f);
        }
        assert!(meet > 0, "{}: no frame meets the condition", id);
    }
}

#[test]
fn nabla_rules_fail_somewhere_the_condition_fails() {
    // The check is not vacuous: off the condition each rule breaks on some frame.
    let nf = nframes_upto(2);
    for id in N_EXT {
        let rule = extension_rule(id).unwrap();
        let broken = nf
            .iter()
            .filter(|f| !frame_condition(id, f).unwrap())
            .any(|f| match f {
                Frame::N(n) => !rule_sound_on(&rule, &star_n(n)).unwrap(),
                _ => unreachable!(),
            });
        assert!(broken, "{}", id);
    }
}

#[test]
fn underivable_goals_are_reported_as_exhausted() {
    let rs = ruleset(mtlogic::syntax::Sig::Nabla, &[], false).unwrap();
    let goal = translate_sequent(&AxiomId::T.sequent(), Mode::Nabla).unwrap();
    assert_eq!(prove_with(&goal, &rs, &Limits::depth(10)), Err(ProveFailure::Exhausted(10)));
}
