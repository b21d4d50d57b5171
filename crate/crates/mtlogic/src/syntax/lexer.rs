use super::{Result, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// Lowercase identifier or keyword (`top`, `nabla`, `sim`, ...).
    Word(String),
    /// Uppercase identifier: a schema variable.
    Upper(String),
    /// `1` or `0`.
    Digit(char),
    /// Symbolic operator, including `<nu>`, `[ni]`, `[nni>`.
    Sym(String),
    /// Structural connective `{op}`, stored without braces.
    SOp(String),
    LParen,
    RParen,
    Turnstile,
    Leq,
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub pos: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(SyntaxError::Parse { pos, msg: msg.into() })
}

pub fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let word_at = |mut j: usize| {
            let s = j;
            while j < chars.len() && chars[j].is_ascii_alphanumeric() {
                j += 1;
            }
            (chars[s..j].iter().collect::<String>(), j)
        };
        let tok = match c {
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            '{' => {
                let close = match chars[i..].iter().position(|&d| d == '}') {
                    Some(k) => i + k,
                    None => return err(i, "unclosed `{`"),
                };
                let inner: String = chars[i + 1..close].iter().collect();
                i = close + 1;
                Tok::SOp(inner.trim().to_string())
            }
            '~' | '&' | '^' => {
                i += 1;
                Tok::Sym(c.to_string())
            }
            '>' => {
                i += 1;
                Tok::Sym(">".into())
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    i += 2;
                    Tok::Sym("->".into())
                } else {
                    return err(i, "stray `-`");
                }
            }
            '|' => match (chars.get(i + 1), chars.get(i + 2)) {
                (Some('-'), _) => {
                    i += 2;
                    Tok::Turnstile
                }
                (Some('>'), Some('>')) => {
                    i += 3;
                    Tok::Sym("|>>".into())
                }
                (Some('>'), _) => {
                    i += 2;
                    Tok::Sym("|>".into())
                }
                _ => {
                    i += 1;
                    Tok::Sym("|".into())
                }
            },
            '<' => match chars.get(i + 1) {
                Some('-') if chars.get(i + 2) == Some(&'>') => {
                    i += 3;
                    Tok::Sym("<->".into())
                }
                Some('=') => {
                    i += 2;
                    Tok::Leq
                }
                Some('|') => {
                    i += 2;
                    Tok::Sym("<|".into())
                }
                Some(d) if d.is_ascii_alphabetic() => {
                    let (w, j) = word_at(i + 1);
                    if chars.get(j) != Some(&'>') {
                        return err(i, format!("expected `>` after `<{}`", w));
                    }
                    i = j + 1;
                    Tok::Sym(format!("<{}>", w))
                }
                _ => return err(i, "unexpected `<`"),
            },
            '[' => {
                let (w, j) = word_at(i + 1);
                match chars.get(j) {
                    Some(']') if !w.is_empty() => {
                        i = j + 1;
                        Tok::Sym(format!("[{}]", w))
                    }
                    Some('>') if !w.is_empty() => {
                        i = j + 1;
                        Tok::Sym(format!("[{}>", w))
                    }
                    _ => return err(i, "malformed bracket operator"),
                }
            }
            '0' | '1' => {
                i += 1;
                Tok::Digit(c)
            }
            c if c.is_ascii_lowercase() => {
                let (w, j) = word_at(i);
                i = j;
                Tok::Word(w)
            }
            c if c.is_ascii_uppercase() => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '\'') {
                    j += 1;
                }
                let w: String = chars[i..j].iter().collect();
                i = j;
                Tok::Upper(w)
            }
            _ => return err(i, format!("unexpected character `{}`", c)),
        };
        out.push(Spanned { tok, pos: start });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_bracket_words() {
        let toks: Vec<Tok> = lex("[nni> p |>> <bnuc> {<nu>} X |- 0").unwrap().into_iter().map(|s| s.tok).collect();
        assert_eq!(
            toks,
            vec![
                Tok::Sym("[nni>".into()),
                Tok::Word("p".into()),
                Tok::Sym("|>>".into()),
                Tok::Sym("<bnuc>".into()),
                Tok::SOp("<nu>".into()),
                Tok::Upper("X".into()),
                Tok::Turnstile,
                Tok::Digit('0'),
            ]
        );
    }

    #[test]
    fn comment_ends_line() {
        assert_eq!(lex("p # q").unwrap().len(), 1);
    }
}
