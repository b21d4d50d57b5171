use std::fs;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mtlogic::alba::{source_ineq, trace_alba};
use mtlogic::calculus::{parse_drv_file, prove_with, ruleset, Limits, ProveFailure};
use mtlogic::constructions::{
    bullet_down_c, bullet_down_n, bullet_up_c, bullet_up_n, complex_cond, complex_nabla, costar_c, costar_n,
    frame_of_cond, frame_of_nabla, star_c, star_n,
};
use mtlogic::correspondence::{check_equiv, AxiomId};
use mtlogic::inductive::classify;
use mtlogic::semantics::{
    all_cframes, all_nframes, countermodel_mt, countermodel_single, eval_mt, eval_single, list_of, random_cframes,
    AnyFrame, Env, Frame, Set,
};
use mtlogic::selftest::{all_cframes2, criterion, DEFAULT_SEED};
use mtlogic::syntax::{
    parse_sequent, parse_single, parse_single_sequent, parse_term, unicode, unicode_seq, Mode, Sequent, Sig, Structure,
    Term,
};
use mtlogic::translate::{mode_of, tau1, tau2, tau_cond, translate_sequent};

/// Exit status for a logical negative: invalid, not analytic, check failed.
pub const NEGATIVE: i32 = 1;
/// Exit status for usage and resource errors.
pub const USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "mtlogic", version, about = "Monotone modal and conditional logic through two-sorted translations")]
pub struct Cli {
    /// Seed for every sampled frame family.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads for frame enumeration.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Nabla,
    Cond,
}

impl ModeArg {
    fn mode(self) -> Mode {
        match self {
            ModeArg::Nabla => Mode::Nabla,
            ModeArg::Cond => Mode::Cond,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Op {
    Star,
    Costar,
    BulletUp,
    BulletDown,
}

#[derive(Args, Debug)]
struct FrameSource {
    /// A JSON frame file.
    #[arg(long, conflicts_with = "frames")]
    frame: Option<PathBuf>,
    /// A frame family: `all:N`, `upto:N`, `random:N:COUNT` or `file:PATH`.
    #[arg(long)]
    frames: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Parse a formula or sequent and print it back.
    Parse {
        text: String,
        /// Single-type language; omit for the two-sorted languages.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        unicode: bool,
    },
    /// Translate a single-type formula or sequent into the two-sorted language.
    Translate {
        text: String,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        unicode: bool,
    },
    /// Truth set of a formula on a frame.
    Eval {
        formula: String,
        #[arg(long)]
        frame: PathBuf,
        /// Valuation entries like `p=0,1`; repeat per proposition.
        #[arg(long = "val")]
        vals: Vec<String>,
    },
    /// Is the sequent valid on the frame(s)?
    Valid {
        sequent: String,
        #[command(flatten)]
        src: FrameSource,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Print a refuting valuation.
    Countermodel {
        sequent: String,
        #[arg(long)]
        frame: PathBuf,
    },
    /// Apply a frame or algebra construction and print the resulting frame.
    Construct {
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long)]
        frame: PathBuf,
    },
    /// Compare an axiom's frame condition with its validity.
    Correspond {
        #[arg(long)]
        axiom: String,
        #[arg(long, default_value = "upto:2")]
        frames: String,
        /// One line per frame as well as the summary.
        #[arg(long)]
        verbose: bool,
    },
    /// Is an inequality analytic inductive?
    Classify {
        /// `lhs <= rhs` in the two-sorted language.
        #[arg(long, conflicts_with = "axiom")]
        ineq: Option<String>,
        #[arg(long)]
        axiom: Option<String>,
    },
    /// Run the scripted ALBA reduction of an axiom.
    Alba {
        #[arg(long)]
        axiom: String,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        unicode: bool,
    },
    /// Check a derivation file.
    Check {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_enum)]
        calculus: Option<ModeArg>,
        /// Extensions, overriding the file header.
        #[arg(long, value_delimiter = ',')]
        ext: Vec<String>,
        #[arg(long)]
        cut: bool,
    },
    /// Search for a derivation.
    Prove {
        #[arg(long)]
        goal: String,
        #[arg(long, value_delimiter = ',')]
        ext: Vec<String>,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long, value_enum)]
        calculus: Option<ModeArg>,
        #[arg(long)]
        cut: bool,
        /// Give up after this many seconds.
        #[arg(long)]
        timeout: Option<f64>,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Only these criteria (1 to 8).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

/// Logical outcome of a command that ran to completion.
enum Status {
    Ok,
    Negative,
}

pub fn main_with(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { USAGE } else { 0 };
        }
    };
    let jobs = cli.jobs;
    if jobs == Some(1) {
        mtlogic::par::set_sequential(true);
    }
    match mtlogic::par::with_jobs(jobs, || run(cli)) {
        Ok(Status::Ok) => 0,
        Ok(Status::Negative) => NEGATIVE,
        Err(e) => {
            eprintln!("error: {:#}", e);
            USAGE
        }
    }
}

fn run(cli: Cli) -> Result<Status> {
    let seed = cli.seed;
    match cli.cmd {
        Cmd::Parse { text, mode, unicode: uni } => cmd_parse(&text, mode, uni),
        Cmd::Translate { text, mode, unicode: uni } => cmd_translate(&text, mode, uni),
        Cmd::Eval { formula, frame, vals } => cmd_eval(&formula, &frame, &vals),
        Cmd::Valid { sequent, src, mode } => cmd_valid(&sequent, &src, mode, seed),
        Cmd::Countermodel { sequent, frame } => cmd_countermodel(&sequent, &frame),
        Cmd::Construct { op, frame } => cmd_construct(op, &frame),
        Cmd::Correspond { axiom, frames, verbose } => cmd_correspond(&axiom, &frames, verbose, seed),
        Cmd::Classify { ineq, axiom } => cmd_classify(ineq.as_deref(), axiom.as_deref()),
        Cmd::Alba { axiom, trace, unicode: uni } => cmd_alba(&axiom, trace, uni),
        Cmd::Check { file, calculus, ext, cut } => cmd_check(&file, calculus, &ext, cut),
        Cmd::Prove { goal, ext, depth, calculus, cut, timeout } => cmd_prove(&goal, &ext, depth, calculus, cut, timeout),
        Cmd::Selftest { only } => {
            let ids: Vec<usize> = if only.is_empty() { (1..=8).collect() } else { only };
            let mut ok = true;
            for id in ids {
                let o = criterion(id, seed);
                println!("{}", o);
                ok &= o.pass;
            }
            Ok(if ok { Status::Ok } else { Status::Negative })
        }
    }
}

fn axiom(name: &str) -> Result<AxiomId> {
    Ok(name.parse::<AxiomId>()?)
}

fn read_frame(path: &PathBuf) -> Result<AnyFrame> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    AnyFrame::parse_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn show_set(s: Set) -> String {
    let v: Vec<String> = list_of(s).iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn show_env(env: &Env) -> String {
    let parts: Vec<String> = env.entries.iter().map(|(k, v)| format!("{} = {}", k, show_set(*v))).collect();
    parts.join("; ")
}

/// Single-type sequent in the given or inferred mode.
fn single_sequent(text: &str, mode: Option<ModeArg>) -> Result<mtlogic::syntax::SingleSequent> {
    match mode {
        Some(m) => Ok(parse_single_sequent(text, m.mode())?),
        None => match parse_single_sequent(text, Mode::Nabla) {
            Ok(s) => Ok(s),
            Err(_) => Ok(parse_single_sequent(text, Mode::Cond)?),
        },
    }
}

fn single_formula(text: &str, mode: Option<ModeArg>) -> Result<mtlogic::syntax::Single> {
    match mode {
        Some(m) => Ok(parse_single(text, m.mode())?),
        None => match parse_single(text, Mode::Nabla) {
            Ok(s) => Ok(s),
            Err(_) => Ok(parse_single(text, Mode::Cond)?),
        },
    }
}

fn cmd_parse(text: &str, mode: Option<ModeArg>, uni: bool) -> Result<Status> {
    let seq = text.contains("|-");
    if mode.is_some() {
        if seq {
            println!("{}", single_sequent(text, mode)?);
        } else {
            println!("{}", single_formula(text, mode)?);
        }
        return Ok(Status::Ok);
    }
    if seq {
        let s = parse_sequent(text)?;
        let sort = s.check()?;
        println!("{}", if uni { unicode_seq(&s) } else { s.to_string() });
        println!("sort: {:?}", sort);
    } else {
        let t = parse_term(text)?;
        let sort = t.sort()?;
        println!("{}", if uni { unicode(&t) } else { t.to_string() });
        println!("sort: {:?}", sort);
    }
    Ok(Status::Ok)
}

fn cmd_translate(text: &str, mode: Option<ModeArg>, uni: bool) -> Result<Status> {
    let show = |t: &Term| if uni { unicode(t) } else { t.to_string() };
    if text.contains("|-") {
        let s = single_sequent(text, mode)?;
        let m = match mode {
            Some(m) => m.mode(),
            None => mode_of(&s)?,
        };
        let t = translate_sequent(&s, m)?;
        println!("{}", if uni { unicode_seq(&t) } else { t.to_string() });
    } else {
        let f = single_formula(text, mode)?;
        let m = match mode {
            Some(m) => m.mode(),
            None if f.check_mode(Mode::Nabla).is_ok() => Mode::Nabla,
            None => Mode::Cond,
        };
        match m {
            Mode::Nabla => {
                println!("tau1: {}", show(&tau1(&f)?.term));
                println!("tau2: {}", show(&tau2(&f)?.term));
            }
            Mode::Cond => println!("{}", show(&tau_cond(&f)?.term)),
        }
    }
    Ok(Status::Ok)
}

fn parse_vals(vals: &[String], n: usize) -> Result<Env> {
    let mut env = Env::new();
    for v in vals {
        let (name, pts) = v.split_once('=').ok_or_else(|| anyhow!("expected `p=0,1`, got `{}`", v))?;
        let mut s: Set = 0;
        for p in pts.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let i: usize = p.parse().with_context(|| format!("point `{}`", p))?;
            if i >= n {
                bail!("point {} outside a carrier of size {}", i, n);
            }
            s |= 1 << i;
        }
        env.bind(Term::Prop(name.trim().to_string()), s);
    }
    Ok(env)
}

fn cmd_eval(formula: &str, path: &PathBuf, vals: &[String]) -> Result<Status> {
    let frame = read_frame(path)?;
    let set = match &frame {
        AnyFrame::Single(f) => {
            let phi = parse_single(formula, f.mode())?;
            eval_single(f, &parse_vals(vals, f.size())?, &phi)?
        }
        AnyFrame::TsN(k) => eval_mt(k, &parse_vals(vals, k.nx)?, &parse_term(formula)?)?,
        AnyFrame::TsC(k) => eval_mt(k, &parse_vals(vals, k.nx)?, &parse_term(formula)?)?,
    };
    println!("{}", show_set(set));
    Ok(Status::Ok)
}

/// Frames named by a family spec.
fn family(spec: &str, mode: Mode, seed: u64) -> Result<Vec<Frame>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| s.parse::<usize>().with_context(|| format!("bad number `{}` in `{}`", s, spec));
    let exactly = |n: usize| -> Result<Vec<Frame>> {
        Ok(match (mode, n) {
            (Mode::Nabla, 1..=3) => all_nframes(n).into_iter().map(Frame::N).collect(),
            (Mode::Cond, 1) => all_cframes(1).into_iter().map(Frame::C).collect(),
            (Mode::Cond, 2) => all_cframes2().into_iter().map(Frame::C).collect(),
            _ => bail!("exhaustive {:?} frames only up to {} worlds", mode, if mode == Mode::Nabla { 3 } else { 2 }),
        })
    };
    match parts.as_slice() {
        ["all", n] => exactly(num(n)?),
        ["upto", n] => {
            let mut v = Vec::new();
            for k in 1..=num(n)? {
                v.extend(exactly(k)?);
            }
            Ok(v)
        }
        ["random", n, count] => {
            let (n, count) = (num(n)?, num(count)?);
            if n == 0 || n > 4 {
                bail!("sampled frames take 1 to 4 worlds");
            }
            match mode {
                Mode::Cond => Ok(random_cframes(n, count, seed).into_iter().map(Frame::C).collect()),
                Mode::Nabla => {
                    use rand::{Rng, SeedableRng};
                    if n > 3 {
                        bail!("monotone n-frames are enumerated up to three worlds");
                    }
                    let all = all_nframes(n);
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    Ok((0..count).map(|_| Frame::N(all[rng.gen_range(0..all.len())].clone())).collect())
                }
            }
        }
        ["file", path] => match read_frame(&PathBuf::from(path))? {
            AnyFrame::Single(f) if f.mode() == mode => Ok(vec![f]),
            AnyFrame::Single(_) => bail!("{} holds a frame of the other kind", path),
            _ => bail!("{} holds a two-sorted frame; use a single-type one", path),
        },
        _ => bail!("unknown frame family `{}`", spec),
    }
}

fn cmd_valid(text: &str, src: &FrameSource, mode: Option<ModeArg>, seed: u64) -> Result<Status> {
    if let Some(path) = &src.frame {
        let frame = read_frame(path)?;
        let ok = match &frame {
            AnyFrame::Single(f) => {
                let s = parse_single_sequent(text, f.mode())?;
                countermodel_single(f, &s)?.is_none()
            }
            AnyFrame::TsN(k) => {
                let (l, r) = formula_sides(&parse_sequent(text)?)?;
                countermodel_mt(k, &l, &r)?.is_none()
            }
            AnyFrame::TsC(k) => {
                let (l, r) = formula_sides(&parse_sequent(text)?)?;
                countermodel_mt(k, &l, &r)?.is_none()
            }
        };
        println!("{}", if ok { "valid" } else { "not valid" });
        return Ok(if ok { Status::Ok } else { Status::Negative });
    }
    let spec = src.frames.as_deref().ok_or_else(|| anyhow!("give --frame or --frames"))?;
    let s = single_sequent(text, mode)?;
    let m = match mode {
        Some(m) => m.mode(),
        None => mode_of(&s)?,
    };
    let frames = family(spec, m, seed)?;
    let results = mtlogic::par::map(&frames, |f| countermodel_single(f, &s).map(|c| c.is_none()));
    let mut good = 0;
    for r in results {
        good += usize::from(r?);
    }
    println!("{}/{} frames validate", good, frames.len());
    Ok(if good == frames.len() { Status::Ok } else { Status::Negative })
}

fn formula_sides(s: &Sequent) -> Result<(Term, Term)> {
    match (&s.lhs, &s.rhs) {
        (Structure::Form(l), Structure::Form(r)) => Ok((l.clone(), r.clone())),
        _ => bail!("semantic commands take formula sequents, not structures"),
    }
}

fn cmd_countermodel(text: &str, path: &PathBuf) -> Result<Status> {
    let frame = read_frame(path)?;
    let found = match &frame {
        AnyFrame::Single(f) => countermodel_single(f, &parse_single_sequent(text, f.mode())?)?,
        AnyFrame::TsN(k) => {
            let (l, r) = formula_sides(&parse_sequent(text)?)?;
            countermodel_mt(k, &l, &r)?
        }
        AnyFrame::TsC(k) => {
            let (l, r) = formula_sides(&parse_sequent(text)?)?;
            countermodel_mt(k, &l, &r)?
        }
    };
    match found {
        Some(env) => {
            println!("{}", show_env(&env));
            Ok(Status::Ok)
        }
        None => {
            println!("none: the sequent is valid on this frame");
            Ok(Status::Negative)
        }
    }
}

fn cmd_construct(op: Op, path: &PathBuf) -> Result<Status> {
    let frame = read_frame(path)?;
    let out = match (op, frame) {
        (Op::Star, AnyFrame::Single(Frame::N(f))) => AnyFrame::TsN(star_n(&f)),
        (Op::Star, AnyFrame::Single(Frame::C(g))) => AnyFrame::TsC(star_c(&g)),
        (Op::Costar, AnyFrame::TsN(k)) => AnyFrame::Single(Frame::N(costar_n(&k)?)),
        (Op::Costar, AnyFrame::TsC(k)) => AnyFrame::Single(Frame::C(costar_c(&k)?)),
        // On frames, the algebraic constructions go through complex algebras.
        (Op::BulletUp, AnyFrame::Single(Frame::N(f))) => AnyFrame::TsN(bullet_up_n(&complex_nabla(&f))?),
        (Op::BulletUp, AnyFrame::Single(Frame::C(g))) => AnyFrame::TsC(bullet_up_c(&complex_cond(&g))?),
        (Op::BulletDown, AnyFrame::TsN(k)) => AnyFrame::Single(Frame::N(frame_of_nabla(&bullet_down_n(&k)?)?)),
        (Op::BulletDown, AnyFrame::TsC(k)) => AnyFrame::Single(Frame::C(frame_of_cond(&bullet_down_c(&k)?)?)),
        (op, _) => bail!("{:?} does not apply to this kind of frame", op),
    };
    println!("{}", out.to_json());
    Ok(Status::Ok)
}

fn cmd_correspond(name: &str, spec: &str, verbose: bool, seed: u64) -> Result<Status> {
    let id = axiom(name)?;
    let frames = family(spec, id.mode(), seed)?;
    let results = mtlogic::par::map(&frames, |f| check_equiv(id, f));
    let mut agree = 0;
    for (i, r) in results.into_iter().enumerate() {
        let e = r?;
        agree += usize::from(e.agree);
        if verbose || !e.agree {
            println!(
                "frame {}: condition {}, valid {}{}",
                i,
                e.condition,
                e.valid,
                if e.agree { "" } else { "  DISAGREE" }
            );
        }
    }
    println!("{}: {}", id, id.condition_text());
    println!("{}/{} agree", agree, frames.len());
    Ok(if agree == frames.len() { Status::Ok } else { Status::Negative })
}

fn cmd_classify(ineq: Option<&str>, ax: Option<&str>) -> Result<Status> {
    let (lhs, rhs) = match (ineq, ax) {
        (Some(text), _) => {
            let (l, r) = text.split_once("<=").ok_or_else(|| anyhow!("expected `lhs <= rhs`"))?;
            (parse_term(l)?, parse_term(r)?)
        }
        (None, Some(a)) => {
            let i = source_ineq(axiom(a)?)?;
            (i.lhs, i.rhs)
        }
        (None, None) => bail!("give --ineq or --axiom"),
    };
    let v = classify(&lhs, &rhs)?;
    println!("{} <= {}", lhs, rhs);
    println!("{}", v);
    Ok(if v.is_analytic() { Status::Ok } else { Status::Negative })
}

fn cmd_alba(name: &str, trace: bool, uni: bool) -> Result<Status> {
    let id = axiom(name)?;
    let run = match trace_alba(id) {
        Ok(r) => r,
        Err(e) => {
            println!("run failed: {}", e);
            return Ok(Status::Negative);
        }
    };
    let show = |q: &mtlogic::alba::QuasiIneq| if uni { q.unicode() } else { q.to_string() };
    if trace {
        for (i, s) in run.steps.iter().enumerate() {
            println!("{:>2}. [{}] {}", i, s.label, show(&s.q));
        }
    }
    let out = run.output();
    println!("output: {}", show(out));
    println!("pure: {}", if out.is_pure() { "yes" } else { "no" });
    Ok(if out.is_pure() { Status::Ok } else { Status::Negative })
}

fn sig_of(m: ModeArg) -> Sig {
    m.mode().sig()
}

fn parse_ext(ext: &[String]) -> Result<Vec<AxiomId>> {
    ext.iter().filter(|e| !e.trim().is_empty()).map(|e| axiom(e)).collect()
}

fn cmd_check(path: &PathBuf, calculus: Option<ModeArg>, ext: &[String], cut: bool) -> Result<Status> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut file = parse_drv_file(&text)?;
    if let Some(c) = calculus {
        file.sig = Some(sig_of(c));
    }
    if !ext.is_empty() {
        file.ext = parse_ext(ext)?;
    }
    file.cut |= cut;
    let sig = match file.sig {
        Some(s) => s,
        None => file.ext.first().map(|a| a.mode().sig()).unwrap_or(Sig::Nabla),
    };
    match file.check(sig)? {
        Ok(()) => {
            println!("ok");
            Ok(Status::Ok)
        }
        Err(e) => {
            println!("{}", e);
            Ok(Status::Negative)
        }
    }
}

fn cmd_prove(
    text: &str,
    ext: &[String],
    depth: usize,
    calculus: Option<ModeArg>,
    cut: bool,
    timeout: Option<f64>,
) -> Result<Status> {
    let ext = parse_ext(ext)?;
    // A two-sorted sequent, or a single-type one to translate first.
    let goal = match parse_sequent(text) {
        Ok(s) => s,
        Err(e) => {
            let hint = calculus.map(|c| c.mode()).or_else(|| ext.first().map(|a| a.mode()));
            let single = match hint {
                Some(m) => parse_single_sequent(text, m),
                None => parse_single_sequent(text, Mode::Nabla).or_else(|_| parse_single_sequent(text, Mode::Cond)),
            }
            .map_err(|_| e)?;
            let m = match hint {
                Some(m) => m,
                None => mode_of(&single)?,
            };
            translate_sequent(&single, m)?
        }
    };
    goal.check()?;
    let sig = match (calculus, ext.first()) {
        (Some(c), _) => sig_of(c),
        (None, Some(a)) => a.mode().sig(),
        (None, None) if goal.check_sig(Sig::Nabla).is_ok() => Sig::Nabla,
        (None, None) => Sig::Cond,
    };
    let rs = ruleset(sig, &ext, cut)?;
    let limits = Limits { timeout: timeout.map(Duration::from_secs_f64), ..Limits::depth(depth) };
    match prove_with(&goal, &rs, &limits) {
        Ok(d) => {
            print!("{}", d);
            Ok(Status::Ok)
        }
        Err(e @ ProveFailure::Exhausted(_)) => {
            println!("{}", e);
            Ok(Status::Negative)
        }
        Err(e) => Err(anyhow!(e)),
    }
}
