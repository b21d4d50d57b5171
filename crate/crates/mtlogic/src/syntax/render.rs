use super::*;

pub(super) fn single(f: &Single) -> String {
    match f {
        Single::Prop(p) => p.clone(),
        Single::Top => "top".into(),
        Single::Bot => "bot".into(),
        Single::Neg(a) => format!("~{}", single(a)),
        Single::Nabla(a) => format!("nabla {}", single(a)),
        Single::And(a, b) => format!("({} & {})", single(a), single(b)),
        Single::Or(a, b) => format!("({} | {})", single(a), single(b)),
        Single::Cond(a, b) => format!("({} > {})", single(a), single(b)),
    }
}

fn leaf(t: &Term, uni: bool) -> String {
    match t {
        Term::Prop(p) => p.clone(),
        Term::Top => if uni { "⊤" } else { "top" }.into(),
        Term::Bot => if uni { "⊥" } else { "bot" }.into(),
        Term::One => "1".into(),
        Term::Zero => "0".into(),
        Term::Var(_, n) => n.clone(),
        Term::Nom(_, n) => format!("{{{}}}", n),
        Term::CoNom(_, n) => {
            if uni {
                format!("{{{}}}ᶜ", n)
            } else {
                format!("-{{{}}}", n)
            }
        }
        _ => unreachable!(),
    }
}

fn uni_conn(c: Conn) -> &'static str {
    match c {
        Conn::Neg => "¬",
        Conn::And => "∧",
        Conn::Or => "∨",
        Conn::DiamNu => "⟨ν⟩",
        Conn::BoxNuc => "[νᶜ]",
        Conn::Tri => "▷",
        Conn::Sim => "∼",
        Conn::Cap => "∩",
        Conn::Cup => "∪",
        Conn::BoxNi => "[∋]",
        Conn::DiamNni => "⟨∌⟩",
        Conn::BoxArrNni => "[∌⟩",
        Conn::DiamIn => "⟨∈⟩",
        Conn::BoxNin => "[∉]",
        Conn::BoxArrNin => "[∉⟩",
        Conn::BoxBnu => "[⟊ν]",
        Conn::DiamBnuc => "⟨⟊νᶜ⟩",
        Conn::BlackTri => "▲",
        Conn::BlackTriR => "▸",
        Conn::BoxNu => "[ν]",
        Conn::DiamNi => "⟨∋⟩",
    }
}

fn term_with(t: &Term, uni: bool) -> String {
    match t.split() {
        None => leaf(t, uni),
        Some((c, kids)) => {
            let op = if uni { uni_conn(c) } else { c.token() };
            if kids.len() == 2 {
                format!("({} {} {})", term_with(kids[0], uni), op, term_with(kids[1], uni))
            } else if c == Conn::Neg || uni {
                format!("{}{}", op, term_with(kids[0], uni))
            } else {
                format!("{} {}", op, term_with(kids[0], uni))
            }
        }
    }
}

pub(super) fn term(t: &Term) -> String {
    term_with(t, false)
}

/// Mathematical notation, used for traces and documentation.
pub fn unicode(t: &Term) -> String {
    term_with(t, true)
}

/// Unicode rendering of a sequent of plain formulas.
pub fn unicode_seq(s: &Sequent) -> String {
    format!("{} ⊢ {}", unicode_structure(&s.lhs), unicode_structure(&s.rhs))
}

fn unicode_structure(s: &Structure) -> String {
    match s {
        Structure::Form(t) => unicode(t),
        Structure::Var(_, n) => n.clone(),
        _ => {
            let (c, kids) = s.split().unwrap();
            let mark = match c.tonicity() {
                Tonicity::Hat => "\u{0302}",
                Tonicity::Check => "\u{030C}",
                Tonicity::Tilde => "\u{0303}",
            };
            let op = format!("{}{}", sconn_uni(c), mark);
            match kids.len() {
                0 => op,
                1 => format!("{}{}", op, unicode_structure(kids[0])),
                _ => format!("({} {} {})", unicode_structure(kids[0]), op, unicode_structure(kids[1])),
            }
        }
    }
}

fn sconn_uni(c: SConn) -> &'static str {
    match c {
        SConn::STop => "⊤",
        SConn::SBot => "⊥",
        SConn::SNeg => "¬",
        SConn::SAnd => "∧",
        SConn::SOr => "∨",
        SConn::DiamNu => "⟨ν⟩",
        SConn::BoxNuc => "[νᶜ]",
        SConn::DiamIn => "⟨∈⟩",
        SConn::BoxNin => "[∉]",
        SConn::BoxArrNin => "[∉⟩",
        SConn::Tri => "▷",
        SConn::BlackTri => "▲",
        SConn::NOne => "1",
        SConn::NZero => "0",
        SConn::NSim => "∼",
        SConn::NCap => "∩",
        SConn::NCup => "∪",
        SConn::BoxNi => "[∋]",
        SConn::DiamNni => "⟨∌⟩",
        SConn::BoxArrNni => "[∌⟩",
        SConn::BoxBnu => "[⟊ν]",
        SConn::DiamBnuc => "⟨⟊νᶜ⟩",
        SConn::BlackTriR => "▸",
    }
}

pub(super) fn structure(s: &Structure) -> String {
    match s {
        Structure::Form(t) => term(t),
        Structure::Var(_, n) => n.clone(),
        _ => {
            let (c, kids) = s.split().unwrap();
            match kids.len() {
                0 => format!("{{{}}}", c.token()),
                1 => format!("{{{}}} {}", c.token(), structure(kids[0])),
                _ => format!("({} {{{}}} {})", structure(kids[0]), c.token(), structure(kids[1])),
            }
        }
    }
}
