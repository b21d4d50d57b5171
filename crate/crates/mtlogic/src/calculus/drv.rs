//! The `.drv` text format: one node per line, `rule  sequent`, children
//! indented two spaces below their parent. Blank lines and `#` comments are
//! skipped. Header lines starting with `@` say which calculus to check
//! against:
//!
//! ```text
//! @calculus nabla        (or cond)
//! @ext T,P
//! @cut                   (allow Cut_S / Cut_N)
//! @hyp A |- B            (an assumption; leaves may cite it as `hyp`)
//! ```

use crate::correspondence::AxiomId;
use crate::syntax::{parse_sequent, Sequent, Sig};

use super::{check_derivation_with, ruleset, CalculusError, CheckFailure, Derivation, Result};

/// A parsed `.drv` file: the tree plus its header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrvFile {
    pub sig: Option<Sig>,
    pub ext: Vec<AxiomId>,
    pub cut: bool,
    pub hyps: Vec<Sequent>,
    pub root: Derivation,
}

impl DrvFile {
    /// Check against the calculus named in the header, or `sig` if the
    /// header has none.
    pub fn check(&self, default: Sig) -> Result<std::result::Result<(), CheckFailure>> {
        let rs = ruleset(self.sig.unwrap_or(default), &self.ext, self.cut)?;
        Ok(check_derivation_with(&self.root, &rs, &self.hyps))
    }
}

pub fn parse_drv_file(text: &str) -> Result<DrvFile> {
    let err = |line: usize, msg: String| CalculusError::Format { line, msg };
    let (mut sig, mut ext, mut cut, mut hyps) = (None, Vec::new(), false, Vec::new());
    for (i, raw) in text.lines().enumerate() {
        let Some(d) = raw.trim().strip_prefix('@') else { continue };
        let (key, rest) = d.split_once(char::is_whitespace).unwrap_or((d, ""));
        let rest = rest.trim();
        match key {
            "calculus" => {
                sig = Some(match rest {
                    "nabla" => Sig::Nabla,
                    "cond" => Sig::Cond,
                    _ => return Err(err(i + 1, format!("unknown calculus `{}`", rest))),
                })
            }
            "ext" => {
                for name in rest.split(',').filter(|n| !n.trim().is_empty()) {
                    ext.push(name.parse::<AxiomId>().map_err(|e| err(i + 1, e.to_string()))?);
                }
            }
            "cut" => cut = true,
            "hyp" => hyps.push(parse_sequent(rest).map_err(|e| err(i + 1, e.to_string()))?),
            _ => return Err(err(i + 1, format!("unknown directive `@{}`", key))),
        }
    }
    Ok(DrvFile { sig, ext, cut, hyps, root: parse_drv(text)? })
}

pub fn render_drv(d: &Derivation) -> String {
    fn go(d: &Derivation, indent: usize, out: &mut String) {
        out.push_str(&" ".repeat(indent * 2));
        out.push_str(&d.rule);
        out.push_str("  ");
        out.push_str(&d.sequent.to_string());
        out.push('\n');
        for c in &d.children {
            go(c, indent + 1, out);
        }
    }
    let mut out = String::new();
    go(d, 0, &mut out);
    out
}

pub fn parse_drv(text: &str) -> Result<Derivation> {
    let err = |line: usize, msg: String| CalculusError::Format { line, msg };
    // (depth, node) pairs in file order
    let mut flat: Vec<(usize, usize, Derivation)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim_start_matches(' ');
        if trimmed.trim().is_empty() || trimmed.starts_with('#') || trimmed.starts_with('@') {
            continue;
        }
        if trimmed.starts_with('\t') {
            return Err(err(line, "indent with spaces, not tabs".into()));
        }
        let indent = raw.len() - trimmed.len();
        if indent % 2 != 0 {
            return Err(err(line, format!("odd indentation ({} spaces)", indent)));
        }
        let (rule, rest) = match trimmed.split_once(char::is_whitespace) {
            Some((r, s)) => (r, s.trim()),
            None => return Err(err(line, "expected `rule sequent`".into())),
        };
        let sequent = parse_sequent(rest).map_err(|e| err(line, e.to_string()))?;
        flat.push((indent / 2, line, Derivation::leaf(sequent, rule)));
    }
    if flat.is_empty() {
        return Err(err(0, "empty derivation".into()));
    }
    if flat[0].0 != 0 {
        return Err(err(flat[0].1, "the root must not be indented".into()));
    }
    // Fold children into parents from a stack of open nodes.
    let mut stack: Vec<(usize, Derivation)> = Vec::new();
    let close = |stack: &mut Vec<(usize, Derivation)>| {
        let (_, done) = stack.pop().unwrap();
        stack.last_mut().unwrap().1.children.push(done);
    };
    for (depth, line, node) in flat {
        if let Some((top, _)) = stack.last() {
            if depth > top + 1 {
                return Err(err(line, "indentation skips a level".into()));
            }
            if depth == 0 {
                return Err(err(line, "a second root".into()));
            }
        }
        while stack.last().map(|(d, _)| *d >= depth).unwrap_or(false) {
            close(&mut stack);
        }
        stack.push((depth, node));
    }
    while stack.len() > 1 {
        close(&mut stack);
    }
    Ok(stack.pop().unwrap().1)
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: &str = "# T
T  {<nu>} [ni] A |- A
  [ni]L  [ni] A |- {[ni]} A
    Id_S  A |- A
";

    #[test]
    fn round_trip() {
        let d = parse_drv(T).unwrap();
        assert_eq!(d.size(), 3);
        assert_eq!(d.rule, "T");
        assert_eq!(parse_drv(&render_drv(&d)).unwrap(), d);
    }

    #[test]
    fn siblings_and_errors() {
        let text = "&R  (A {&} B) |- (A & B)\n  Id_S  A |- A\n  Id_S  B |- B\n";
        let d = parse_drv(text).unwrap();
        assert_eq!(d.children.len(), 2);
        assert!(matches!(parse_drv("Id_S A |- A\n    Id_S A |- A"), Err(CalculusError::Format { line: 2, .. })));
        assert!(matches!(parse_drv(" Id_S A |- A"), Err(CalculusError::Format { line: 1, .. })));
        assert!(matches!(parse_drv("Id_S A |-"), Err(CalculusError::Format { line: 1, .. })));
        assert!(matches!(parse_drv("Id_S A |- A\nId_S A |- A"), Err(CalculusError::Format { line: 2, .. })));
        assert!(parse_drv("# nothing\n").is_err());
    }

    #[test]
    fn header_directives() {
        let text = "@calculus nabla\n@ext T\n@hyp A |- B\n".to_string() + T;
        let f = parse_drv_file(&text).unwrap();
        assert_eq!(f.sig, Some(Sig::Nabla));
        assert_eq!(f.ext, vec![AxiomId::T]);
        assert_eq!(f.hyps.len(), 1);
        assert_eq!(f.check(Sig::Cond).unwrap(), Ok(()));
        assert!(parse_drv_file("@ext Q\nId_S A |- A").is_err());
        assert!(parse_drv_file("@frobnicate\nId_S A |- A").is_err());
    }
}
