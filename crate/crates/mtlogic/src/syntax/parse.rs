use super::lexer::{lex, Spanned, Tok};
use super::*;

const UNARY: [Conn; 14] = [
    Conn::Neg,
    Conn::DiamNu,
    Conn::BoxNuc,
    Conn::Sim,
    Conn::BoxNi,
    Conn::DiamNni,
    Conn::BoxArrNni,
    Conn::DiamIn,
    Conn::BoxNin,
    Conn::BoxArrNin,
    Conn::BoxBnu,
    Conn::DiamBnuc,
    Conn::BoxNu,
    Conn::DiamNi,
];

const BINARY: [Conn; 7] = [Conn::And, Conn::Or, Conn::Tri, Conn::Cap, Conn::Cup, Conn::BlackTri, Conn::BlackTriR];

const KEYWORDS: [&str; 6] = ["top", "bot", "nabla", "sim", "cap", "cup"];

/// Schema variable classes, keyed by the name with trailing digits and
/// primes removed. `true` marks structure variables.
fn var_class(name: &str) -> Option<(bool, Sort)> {
    let base = name.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
    match base {
        "A" | "B" => Some((false, Sort::S)),
        "Al" | "Be" => Some((false, Sort::N)),
        "X" | "Y" | "Z" | "W" | "U" | "V" => Some((true, Sort::S)),
        "Ga" | "De" | "Th" | "Pi" | "Si" | "La" => Some((true, Sort::N)),
        _ => None,
    }
}

fn tok_text(t: &Tok) -> String {
    match t {
        Tok::Word(w) | Tok::Upper(w) | Tok::Sym(w) => w.clone(),
        Tok::Digit(d) => d.to_string(),
        Tok::SOp(s) => format!("{{{}}}", s),
        Tok::LParen => "(".into(),
        Tok::RParen => ")".into(),
        Tok::Turnstile => "|-".into(),
        Tok::Leq => "<=".into(),
    }
}

enum Bin {
    Logic(Conn),
    Struct(SConn),
    Implies,
    Iff,
}

struct Parser {
    toks: Vec<Spanned>,
    i: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Parser> {
        Ok(Parser { toks: lex(text)?, i: 0, end: text.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|s| &s.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|s| s.pos).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(SyntaxError::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|s| s.tok.clone());
        self.i += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        match self.peek() {
            Some(t) if *t == want => {
                self.i += 1;
                Ok(())
            }
            Some(t) => self.err(format!("expected `{}`, found `{}`", tok_text(&want), tok_text(t))),
            None => self.err(format!("expected `{}`, found end of input", tok_text(&want))),
        }
    }

    fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    fn binop(&self) -> Option<Bin> {
        match self.peek()? {
            Tok::Sym(s) if s == "->" => Some(Bin::Implies),
            Tok::Sym(s) if s == "<->" => Some(Bin::Iff),
            Tok::Sym(s) => BINARY.iter().copied().find(|c| c.token() == s).map(Bin::Logic),
            Tok::Word(w) if w == "cap" => Some(Bin::Logic(Conn::Cap)),
            Tok::Word(w) if w == "cup" => Some(Bin::Logic(Conn::Cup)),
            Tok::SOp(s) => match SConn::from_token(s) {
                Some(c) if c.typing().0.len() == 2 => Some(Bin::Struct(c)),
                _ => None,
            },
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Structure> {
        let a = self.unit()?;
        let op = match self.binop() {
            None => return Ok(a),
            Some(op) => op,
        };
        let pos = self.pos();
        self.i += 1;
        let b = self.unit()?;
        if self.binop().is_some() {
            return self.err("binary connectives must be parenthesized");
        }
        let forms = |a: Structure, b: Structure| -> Result<(Term, Term)> {
            match (a, b) {
                (Structure::Form(x), Structure::Form(y)) => Ok((x, y)),
                _ => Err(SyntaxError::Parse { pos, msg: "logical connective applied to a structure".into() }),
            }
        };
        match op {
            Bin::Struct(c) => Ok(Structure::build(c, vec![a, b])),
            Bin::Logic(c) => {
                let (x, y) = forms(a, b)?;
                Ok(Structure::Form(Term::binary(c, x, y)))
            }
            Bin::Implies => {
                let (x, y) = forms(a, b)?;
                Ok(Structure::Form(Term::or(Term::neg(x), y)))
            }
            Bin::Iff => {
                let (x, y) = forms(a, b)?;
                Ok(Structure::Form(Term::and(
                    Term::or(Term::neg(x.clone()), y.clone()),
                    Term::or(Term::neg(y), x),
                )))
            }
        }
    }

    fn unit(&mut self) -> Result<Structure> {
        let pos = self.pos();
        let tok = match self.bump() {
            Some(t) => t,
            None => return self.err("unexpected end of input"),
        };
        let unary_logic = |s: &str| UNARY.iter().copied().find(|c| c.token() == s);
        match tok {
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Sym(ref s) if unary_logic(s).is_some() => {
                let c = unary_logic(s).unwrap();
                match self.unit()? {
                    Structure::Form(t) => Ok(Structure::Form(Term::unary(c, t))),
                    _ => Err(SyntaxError::Parse { pos, msg: format!("`{}` applied to a structure", s) }),
                }
            }
            Tok::Word(ref w) if w == "sim" => match self.unit()? {
                Structure::Form(t) => Ok(Structure::Form(Term::Sim(Box::new(t)))),
                _ => Err(SyntaxError::Parse { pos, msg: "`sim` applied to a structure".into() }),
            },
            Tok::Word(w) => match w.as_str() {
                "top" => Ok(Structure::Form(Term::Top)),
                "bot" => Ok(Structure::Form(Term::Bot)),
                k if KEYWORDS.contains(&k) => {
                    Err(SyntaxError::Parse { pos, msg: format!("`{}` is not valid here", k) })
                }
                _ => Ok(Structure::Form(Term::Prop(w))),
            },
            Tok::Digit('1') => Ok(Structure::Form(Term::One)),
            Tok::Digit(_) => Ok(Structure::Form(Term::Zero)),
            Tok::Upper(name) => match var_class(&name) {
                Some((true, s)) => Ok(Structure::Var(s, name)),
                Some((false, s)) => Ok(Structure::Form(Term::Var(s, name))),
                None => Err(SyntaxError::Parse { pos, msg: format!("unknown schema variable `{}`", name) }),
            },
            Tok::SOp(s) => match SConn::from_token(&s) {
                Some(c) => match c.typing().0.len() {
                    0 => Ok(Structure::build(c, vec![])),
                    1 => {
                        let a = self.unit()?;
                        Ok(Structure::build(c, vec![a]))
                    }
                    _ => Err(SyntaxError::Parse { pos, msg: format!("`{{{}}}` is binary", s) }),
                },
                None => Err(SyntaxError::Parse { pos, msg: format!("unknown structural connective `{{{}}}`", s) }),
            },
            t => Err(SyntaxError::Parse { pos, msg: format!("unexpected `{}`", tok_text(&t)) }),
        }
    }

    fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err(format!("trailing input `{}`", tok_text(self.peek().unwrap())))
        }
    }
}

/// Parse a sorted term (no signature restriction, schema variables allowed).
pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser::new(text)?;
    let s = p.expr()?;
    p.finish()?;
    match s {
        Structure::Form(t) => {
            t.sort()?;
            Ok(t)
        }
        _ => Err(SyntaxError::Parse { pos: 0, msg: "expected a formula, found a structure".into() }),
    }
}

/// Parse a formula of `L_MT` for the given signature.
pub fn parse_mt(text: &str, sig: Sig) -> Result<MtFormula> {
    MtFormula::new(sig, parse_term(text)?)
}

/// Parse `X |- Y` over structures; sorts and polarity are checked.
pub fn parse_sequent(text: &str) -> Result<Sequent> {
    let mut p = Parser::new(text)?;
    let lhs = p.expr()?;
    p.expect(Tok::Turnstile)?;
    let rhs = p.expr()?;
    p.finish()?;
    let s = Sequent::new(lhs, rhs);
    s.check()?;
    Ok(s)
}

/// Parse a single-type sequent, or an inequality written with `<=`.
pub fn parse_single_sequent(text: &str, mode: Mode) -> Result<SingleSequent> {
    let mut p = SingleParser { p: Parser::new(text)? };
    let lhs = p.expr()?;
    match p.p.peek() {
        Some(Tok::Turnstile) | Some(Tok::Leq) => p.p.i += 1,
        _ => return p.p.err("expected `|-`"),
    }
    let rhs = p.expr()?;
    p.p.finish()?;
    lhs.check_mode(mode)?;
    rhs.check_mode(mode)?;
    Ok(SingleSequent { lhs, rhs })
}

/// Parse a formula of `L_nabla` or `L_>`.
pub fn parse_single(text: &str, mode: Mode) -> Result<Single> {
    let mut p = SingleParser { p: Parser::new(text)? };
    let f = p.expr()?;
    p.p.finish()?;
    f.check_mode(mode)?;
    Ok(f)
}

struct SingleParser {
    p: Parser,
}

impl SingleParser {
    fn binop(&self) -> Option<String> {
        match self.p.peek()? {
            Tok::Sym(s) if ["&", "|", ">", "->", "<->"].contains(&s.as_str()) => Some(s.clone()),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Single> {
        let a = self.unit()?;
        let op = match self.binop() {
            None => return Ok(a),
            Some(op) => op,
        };
        self.p.i += 1;
        let b = self.unit()?;
        if self.binop().is_some() {
            return self.p.err("binary connectives must be parenthesized");
        }
        Ok(match op.as_str() {
            "&" => Single::and(a, b),
            "|" => Single::or(a, b),
            ">" => Single::cond(a, b),
            "->" => Single::implies(a, b),
            _ => Single::and(Single::implies(a.clone(), b.clone()), Single::implies(b, a)),
        })
    }

    fn unit(&mut self) -> Result<Single> {
        let pos = self.p.pos();
        match self.p.bump() {
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.p.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Sym(s)) if s == "~" => Ok(Single::neg(self.unit()?)),
            Some(Tok::Word(w)) => match w.as_str() {
                "nabla" => Ok(Single::nabla(self.unit()?)),
                "top" => Ok(Single::Top),
                "bot" => Ok(Single::Bot),
                k if KEYWORDS.contains(&k) => {
                    Err(SyntaxError::Parse { pos, msg: format!("`{}` is not valid here", k) })
                }
                _ => Ok(Single::Prop(w)),
            },
            Some(t) => Err(SyntaxError::Parse { pos, msg: format!("unexpected `{}`", tok_text(&t)) }),
            None => self.p.err("unexpected end of input"),
        }
    }
}
