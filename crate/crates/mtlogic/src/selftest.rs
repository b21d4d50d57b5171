//! The desk-scale acceptance suite. Each criterion runs on exhaustive or
//! seeded frame families and reports a one-line verdict; `selftest` in the
//! CLI and the `acceptance` test target both print these.

use std::fmt;
use std::time::{Duration, Instant};

use anyhow::{anyhow, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alba::{check_run, trace_alba, verify_pure, source_ineq};
use crate::calculus::{
    check_derivation, check_derivation_with, extension_rule, parse_drv_file, prove_with, rule_sound_on, ruleset,
    sequent_valid_on, Limits, RuleKind, CORPUS,
};
use crate::constructions::{
    all_monotone_nablas, complex_nabla, costar_c, costar_n, frame_of_nabla, star_c, star_n,
};
use crate::correspondence::{check_equiv, frame_condition, AxiomId};
use crate::inductive::classify;
use crate::semantics::{all_cframes, all_nframes, random_cframes, valid_mt, valid_single, CFrame, Frame};
use crate::syntax::{Mode, Sequent, Sig, Single, SingleSequent, Structure};
use crate::translate::translate_sequent;

/// Default seed for every sampled family.
pub const DEFAULT_SEED: u64 = 2020;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}. {}: {} ({:.1}s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

pub const NAMES: [&str; 8] = [
    "duality round trips",
    "two-sorted round trips",
    "translation invariance",
    "correspondence table",
    "analytic classifier",
    "ALBA runs",
    "derivation corpus and rule soundness",
    "prover smoke",
];

/// Run criterion `id` (1 to 8).
pub fn criterion(id: usize, seed: u64) -> Outcome {
    let start = Instant::now();
    let res = match id {
        1 => round_trips(),
        2 => two_sorted_round_trips(seed),
        3 => translation_invariance(seed),
        4 => correspondence_table(seed),
        5 => classifier(),
        6 => alba_runs(seed),
        7 => corpus_and_rules(seed),
        8 => prover_smoke(seed),
        _ => Err(anyhow!("no criterion {}", id)),
    };
    let elapsed = start.elapsed();
    let (pass, detail) = match res {
        Ok(v) => v,
        Err(e) => (false, format!("error: {:#}", e)),
    };
    Outcome { id, name: NAMES.get(id.wrapping_sub(1)).copied().unwrap_or("?"), pass, detail, elapsed }
}

pub fn run_all(seed: u64) -> Vec<Outcome> {
    (1..=8).map(|i| criterion(i, seed)).collect()
}

// ------------------------------------------------------------------ families

/// Every monotone n-frame with one to `max` worlds.
pub fn nframes_upto(max: usize) -> Vec<Frame> {
    (1..=max).flat_map(all_nframes).map(Frame::N).collect()
}

/// Every c-frame on two worlds (4^8 of them).
pub fn all_cframes2() -> Vec<CFrame> {
    (0..1u64 << 16).map(|code| CFrame { size: 2, f: (0..8).map(|i| (code >> (2 * i)) & 3).collect() }).collect()
}

/// All one-world c-frames plus `count` seeded two-world ones.
pub fn cframe_sample(count: usize, seed: u64) -> Vec<Frame> {
    let mut v: Vec<Frame> = all_cframes(1).into_iter().map(Frame::C).collect();
    v.extend(random_cframes(2, count, seed).into_iter().map(Frame::C));
    v
}

// ---------------------------------------------------------------- generators

/// A random formula of depth at most `depth` over `p` and `q`.
pub fn random_single(rng: &mut ChaCha8Rng, mode: Mode, depth: usize) -> Single {
    let atom = |rng: &mut ChaCha8Rng| match rng.gen_range(0..6) {
        0 => Single::Top,
        1 => Single::Bot,
        2 | 3 => Single::prop("p"),
        _ => Single::prop("q"),
    };
    if depth == 0 || rng.gen_range(0..4) == 0 {
        return atom(rng);
    }
    let d = depth - 1;
    match rng.gen_range(0..4) {
        0 => Single::neg(random_single(rng, mode, d)),
        1 => Single::and(random_single(rng, mode, d), random_single(rng, mode, d)),
        2 => Single::or(random_single(rng, mode, d), random_single(rng, mode, d)),
        _ => match mode {
            Mode::Nabla => Single::nabla(random_single(rng, mode, d)),
            Mode::Cond => Single::cond(random_single(rng, mode, d), random_single(rng, mode, d)),
        },
    }
}

pub fn random_sequents(mode: Mode, count: usize, depth: usize, seed: u64) -> Vec<SingleSequent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| SingleSequent { lhs: random_single(&mut rng, mode, depth), rhs: random_single(&mut rng, mode, depth) })
        .collect()
}

fn terms(s: &Sequent) -> (&crate::syntax::Term, &crate::syntax::Term) {
    match (&s.lhs, &s.rhs) {
        (Structure::Form(l), Structure::Form(r)) => (l, r),
        _ => unreachable!("translations are formula sequents"),
    }
}

fn count_where<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<bool> + Sync + Send) -> Result<usize> {
    let bad = crate::par::map(items, |x| f(x).map(|ok| !ok));
    let mut n = 0;
    for b in bad {
        if b? {
            n += 1;
        }
    }
    Ok(n)
}

type Verdict = Result<(bool, String)>;

// ---------------------------------------------------------------- criteria

fn round_trips() -> Verdict {
    let mut bad = 0;
    let mut sizes = Vec::new();
    for n in 1..=3 {
        let frames: Vec<Frame> = all_nframes(n).into_iter().map(Frame::N).collect();
        bad += count_where(&frames, |f| match f {
            Frame::N(f) => Ok(frame_of_nabla(&complex_nabla(f))? == *f),
            _ => unreachable!(),
        })?;
        let ops = all_monotone_nablas(n);
        bad += count_where(&ops, |a| Ok(complex_nabla(&frame_of_nabla(a)?) == *a))?;
        sizes.push(format!("|W|={}: {} frames, {} operations", n, frames.len(), ops.len()));
    }
    Ok((bad == 0, format!("{} failures; {}", bad, sizes.join("; "))))
}

fn two_sorted_round_trips(seed: u64) -> Verdict {
    let nf = nframes_upto(3);
    let bad_n = count_where(&nf, |f| match f {
        Frame::N(f) => Ok(costar_n(&star_n(f))? == *f),
        _ => unreachable!(),
    })?;
    let cf = cframe_sample(500, seed);
    let bad_c = count_where(&cf, |f| match f {
        Frame::C(g) => Ok(costar_c(&star_c(g))? == *g),
        _ => unreachable!(),
    })?;
    Ok((
        bad_n + bad_c == 0,
        format!("{} n-frames, {} c-frames, {} failures", nf.len(), cf.len(), bad_n + bad_c),
    ))
}

fn invariance(mode: Mode, seqs: &[SingleSequent], frames: &[Frame]) -> Result<usize> {
    let translated = seqs.iter().map(|s| translate_sequent(s, mode)).collect::<Result<Vec<_>, _>>()?;
    count_where(frames, |f| {
        for (s, t) in seqs.iter().zip(&translated) {
            let (l, r) = terms(t);
            let two = match f {
                Frame::N(n) => valid_mt(&star_n(n), l, r)?,
                Frame::C(g) => valid_mt(&star_c(g), l, r)?,
            };
            if valid_single(f, s)? != two {
                return Ok(false);
            }
        }
        Ok(true)
    })
}

fn translation_invariance(seed: u64) -> Verdict {
    let start = Instant::now();
    let ns = random_sequents(Mode::Nabla, 200, 3, seed);
    let nf = nframes_upto(2);
    let bad_n = invariance(Mode::Nabla, &ns, &nf)?;
    let cs = random_sequents(Mode::Cond, 200, 3, seed ^ 1);
    let cf: Vec<Frame> = cframe_sample(100 - all_cframes(1).len(), seed);
    let bad_c = invariance(Mode::Cond, &cs, &cf)?;
    let secs = start.elapsed().as_secs_f64();
    Ok((
        bad_n + bad_c == 0 && secs < 300.0,
        format!(
            "{}x{} nabla and {}x{} cond checks, {} frames disagree, {:.1}s of 300s",
            ns.len(),
            nf.len(),
            cs.len(),
            cf.len(),
            bad_n + bad_c,
            secs
        ),
    ))
}

fn correspondence_table(seed: u64) -> Verdict {
    let nf = nframes_upto(3);
    let cf = cframe_sample(500, seed);
    let mut bad = Vec::new();
    for id in AxiomId::ALL {
        let frames = if id.mode() == Mode::Nabla { &nf } else { &cf };
        let n = count_where(frames, |f| Ok(check_equiv(id, f)?.agree))?;
        if n > 0 {
            bad.push(format!("{}: {}", id, n));
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "14/14 rows agree".into() } else { bad.join(", ") }))
}

fn classifier() -> Verdict {
    const YES: [AxiomId; 9] = [
        AxiomId::N,
        AxiomId::P,
        AxiomId::C,
        AxiomId::T,
        AxiomId::D,
        AxiomId::CS,
        AxiomId::CEM,
        AxiomId::ID,
        AxiomId::CN,
    ];
    let mut wrong = Vec::new();
    for id in AxiomId::ALL {
        let src = source_ineq(id)?;
        let got = classify(&src.lhs, &src.rhs)?.is_analytic();
        if got != YES.contains(&id) {
            wrong.push(id.to_string());
        }
    }
    Ok((wrong.is_empty(), if wrong.is_empty() { "9 analytic, 5 not".into() } else { format!("wrong on {}", wrong.join(", ")) }))
}

fn alba_runs(seed: u64) -> Verdict {
    let nf = nframes_upto(2);
    let cf = cframe_sample(200, seed);
    let mut problems = Vec::new();
    for id in AxiomId::ALL {
        let frames = if id.mode() == Mode::Nabla { &nf } else { &cf };
        let run = match trace_alba(id) {
            Ok(r) => r,
            Err(e) => {
                problems.push(format!("{}: {}", id, e));
                continue;
            }
        };
        let dis = check_run(&run, frames)?;
        if !dis.is_empty() {
            problems.push(format!("{}: step {} disagrees", id, dis[0].step));
        }
        let out = run.output();
        if !out.is_pure() {
            problems.push(format!("{}: output not pure", id));
            continue;
        }
        let n = count_where(frames, |f| Ok(verify_pure(out, f)? == frame_condition(id, f)?))?;
        if n > 0 {
            problems.push(format!("{}: output differs from the condition on {} frames", id, n));
        }
    }
    Ok((problems.is_empty(), if problems.is_empty() { "14/14 runs equivalent at every step".into() } else { problems.join("; ") }))
}

fn corpus_and_rules(seed: u64) -> Verdict {
    let mut problems = Vec::new();
    for (name, text) in CORPUS {
        let f = parse_drv_file(text)?;
        let sig = f.sig.ok_or_else(|| anyhow!("{} names no calculus", name))?;
        let rs = ruleset(sig, &f.ext, f.cut)?;
        if let Err(e) = check_derivation_with(&f.root, &rs, &f.hyps) {
            problems.push(format!("{}: {}", name, e));
        }
    }
    // Extension rules on every frame with |W| <= 2 meeting their condition.
    let nf = nframes_upto(2);
    let mut cf: Vec<Frame> = all_cframes(1).into_iter().map(Frame::C).collect();
    cf.extend(all_cframes2().into_iter().map(Frame::C));
    let mut checked = 0;
    for id in AxiomId::ALL {
        let Ok(rule) = extension_rule(id) else { continue };
        let frames = if id.mode() == Mode::Nabla { &nf } else { &cf };
        let good: Vec<&Frame> = frames.iter().filter(|f| frame_condition(id, f).unwrap_or(false)).collect();
        checked += good.len();
        let bad = count_where(&good, |f| sound_on(&rule, f))?;
        if bad > 0 {
            problems.push(format!("rule {} fails on {} frames", id, bad));
        }
    }
    // Base rules on n-frames |W| <= 2 and the sampled c-frames.
    let cs = cframe_sample(500, seed);
    for (sig, frames) in [(Sig::Nabla, &nf), (Sig::Cond, &cs)] {
        let rs = ruleset(sig, &[], true)?;
        for r in rs.rules.iter().filter(|r| r.kind != RuleKind::Extension) {
            let bad = count_where(frames, |f| sound_on(r, f))?;
            if bad > 0 {
                problems.push(format!("{:?} rule {} fails on {} frames", sig, r.name, bad));
            }
        }
    }
    Ok((
        problems.is_empty(),
        if problems.is_empty() {
            format!("{} files check; extension rules sound on {} frames", CORPUS.len(), checked)
        } else {
            problems.join("; ")
        },
    ))
}

fn sound_on(r: &crate::calculus::Rule, f: &Frame) -> Result<bool> {
    Ok(match f {
        Frame::N(n) => rule_sound_on(r, &star_n(n))?,
        Frame::C(g) => rule_sound_on(r, &star_c(g))?,
    })
}

fn prover_smoke(seed: u64) -> Verdict {
    let nf = nframes_upto(2);
    let cf = cframe_sample(100 - all_cframes(1).len(), seed);
    let mut lines = Vec::new();
    let mut ok = true;
    for id in [AxiomId::N, AxiomId::P, AxiomId::T, AxiomId::ID] {
        let sig = id.mode().sig();
        let rs = ruleset(sig, &[id], false)?;
        let goal = translate_sequent(&id.sequent(), id.mode())?;
        let limits = Limits { timeout: Some(Duration::from_secs(10)), ..Limits::depth(14) };
        let start = Instant::now();
        let d = match prove_with(&goal, &rs, &limits) {
            Ok(d) => d,
            Err(e) => {
                ok = false;
                lines.push(format!("{}: {}", id, e));
                continue;
            }
        };
        let secs = start.elapsed().as_secs_f64();
        let frames = if sig == Sig::Nabla { &nf } else { &cf };
        let good: Vec<&Frame> = frames.iter().filter(|f| frame_condition(id, f).unwrap_or(false)).collect();
        let invalid = count_where(&good, |f| {
            Ok(match f {
                Frame::N(n) => sequent_valid_on(&star_n(n), &d.sequent)?,
                Frame::C(g) => sequent_valid_on(&star_c(g), &d.sequent)?,
            })
        })?;
        let fine = d.is_cut_free()
            && d.depth() <= 14
            && secs < 10.0
            && check_derivation(&d, &rs).is_ok()
            && invalid == 0
            && d.sequent == goal;
        ok &= fine;
        lines.push(format!("{} depth {} in {:.2}s{}", id, d.depth(), secs, if fine { "" } else { " REJECTED" }));
    }
    Ok((ok, lines.join(", ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_seeded_and_bounded() {
        let a = random_sequents(Mode::Cond, 50, 3, 7);
        assert_eq!(a, random_sequents(Mode::Cond, 50, 3, 7));
        assert_ne!(a, random_sequents(Mode::Cond, 50, 3, 8));
        for s in &a {
            assert!(s.lhs.depth() <= 3 && s.rhs.depth() <= 3);
            let mut props = Vec::new();
            s.lhs.props(&mut props);
            s.rhs.props(&mut props);
            assert!(props.len() <= 2);
            assert!(s.lhs.check_mode(Mode::Cond).is_ok());
        }
    }

    #[test]
    fn families_have_the_expected_sizes() {
        assert_eq!(nframes_upto(2).len(), 3 + 36);
        assert_eq!(all_nframes(3).len(), 8000);
        let all = all_cframes2();
        assert_eq!(all.len(), 65536);
        assert_eq!(all[1].f[0], 1);
        assert_eq!(cframe_sample(10, 1).len(), 4 + 10);
    }

    #[test]
    fn cheap_criteria_pass() {
        for id in [1, 5] {
            let o = criterion(id, DEFAULT_SEED);
            assert!(o.pass, "{}", o);
        }
        assert!(!criterion(9, 0).pass);
    }
}
