//! Versioned key-indented report: a tree of sections and single-line values.
//!
//! ```text
//! kni-report v1
//! tool: kni 0.1.0
//! verdict:
//!   verdict: non-integrability criteria satisfied
//! ```
//!
//! Two spaces per level. A line `key:` opens a section, `key: value` is a
//! leaf. The trailing `timings` section is the only part that varies
//! between identical runs.

use std::str::FromStr;

use kni_core::ParseError;

pub const HEADER: &str = "kni-report v1";

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Value(String),
    Section(Section),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Section {
    pub entries: Vec<(String, Node)>,
}

fn clean_value(v: &str) -> String {
    let one_line: String = v
        .chars()
        .map(|c| if c == '\n' || c == '\r' { ' ' } else { c })
        .collect();
    let t = one_line.trim();
    if t.is_empty() {
        "(none)".to_string()
    } else {
        t.to_string()
    }
}

impl Section {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value(&mut self, key: &str, v: impl ToString) -> &mut Self {
        debug_assert!(!key.contains(':') && !key.contains('/'), "bad key {key}");
        self.entries
            .push((key.to_string(), Node::Value(clean_value(&v.to_string()))));
        self
    }

    pub fn section(&mut self, key: &str, s: Section) -> &mut Self {
        self.entries.push((key.to_string(), Node::Section(s)));
        self
    }

    pub fn get_node(&self, path: &str) -> Option<&Node> {
        let mut cur = self;
        let parts: Vec<&str> = path.split('/').collect();
        for (k, part) in parts.iter().enumerate() {
            let node = cur.entries.iter().find(|(n, _)| n == part).map(|(_, v)| v)?;
            if k + 1 == parts.len() {
                return Some(node);
            }
            match node {
                Node::Section(s) => cur = s,
                Node::Value(_) => return None,
            }
        }
        None
    }

    /// Leaf value at a `/`-separated path.
    pub fn get(&self, path: &str) -> Option<&str> {
        match self.get_node(path)? {
            Node::Value(v) => Some(v),
            Node::Section(_) => None,
        }
    }

    pub fn get_section(&self, path: &str) -> Option<&Section> {
        match self.get_node(path)? {
            Node::Section(s) => Some(s),
            Node::Value(_) => None,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        self.write(0, &mut s);
        s
    }

    fn write(&self, depth: usize, out: &mut String) {
        for (k, n) in &self.entries {
            for _ in 0..depth {
                out.push_str("  ");
            }
            match n {
                Node::Value(v) => {
                    out.push_str(k);
                    out.push_str(": ");
                    out.push_str(v);
                    out.push('\n');
                }
                Node::Section(s) => {
                    out.push_str(k);
                    out.push_str(":\n");
                    s.write(depth + 1, out);
                }
            }
        }
    }

    fn paths(&self, prefix: &str, out: &mut Vec<(String, bool)>) {
        for (k, n) in &self.entries {
            let p = if prefix.is_empty() {
                k.clone()
            } else {
                format!("{prefix}/{k}")
            };
            match n {
                Node::Value(_) => out.push((p, true)),
                Node::Section(s) => {
                    out.push((p.clone(), false));
                    s.paths(&p, out);
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub body: Section,
    /// Stage name and wall-clock seconds.
    pub timings: Vec<(String, f64)>,
}

impl Report {
    pub fn get(&self, path: &str) -> Option<&str> {
        self.body.get(path)
    }

    /// Everything except timings; identical configs give identical text.
    pub fn to_text_without_timings(&self) -> String {
        let mut s = String::new();
        s.push_str(HEADER);
        s.push('\n');
        self.body.write(0, &mut s);
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = self.to_text_without_timings();
        if !self.timings.is_empty() {
            s.push_str("timings:\n");
            for (k, t) in &self.timings {
                s.push_str(&format!("  {k}: {t:.3} s\n"));
            }
        }
        s
    }
}

/// Every leaf path a v1 report may contain. `#` stands for a positive
/// integer inside a key.
pub const SCHEMA: &[&str] = &[
    "tool",
    "config/source",
    "config/monodromy.tol",
    "config/monodromy.base",
    "config/monodromy.enabled",
    "config/compare.tol",
    "config/series.order",
    "config/extremal.tol",
    "config/switch.eps",
    "stages/fixtures",
    "stages/mechanics",
    "stages/variational",
    "stages/opalgebra",
    "stages/classify",
    "stages/monodromy",
    "stages/verdict",
    "mechanics/first integral bracket",
    "mechanics/alpha^2 from C",
    "mechanics/alpha^2 from field",
    "mechanics/kappa",
    "mechanics/branch count",
    "mechanics/branch #/alpha",
    "mechanics/branch #/beta",
    "mechanics/branch #/gamma0",
    "mechanics/branch #/field residuals zero",
    "mechanics/branch #/C",
    "mechanics/branch #/H",
    "mechanics/branch #/x3 = sqrt2 p3",
    "mechanics/printed triple/alpha",
    "mechanics/printed triple/beta",
    "mechanics/printed triple/gamma0",
    "mechanics/printed triple/residual #",
    "mechanics/printed triple/residuals zero",
    "mechanics/selected branch",
    "variational/symplectic",
    "variational/lower-left block zero",
    "variational/normal block/ordering",
    "variational/normal block/entry # #",
    "variational/a3 fixture #/p3",
    "variational/a3 fixture #/match",
    "variational/a3 fixture #/best candidate",
    "variational/a3 fixture #/mismatches",
    "variational/a3 fixture #/searched",
    "opalgebra/y0",
    "opalgebra/derived operator/coordinate",
    "opalgebra/derived operator/order",
    "opalgebra/derived operator/even in w",
    "opalgebra/derived operator/a#",
    "opalgebra/derived operator/equals hyp fixture",
    "opalgebra/derived operator/differs from hyp fixture in",
    "opalgebra/derived operator/equals typo variant",
    "opalgebra/derived operator/differs from typo variant in",
    "opalgebra/a3 fixture # reduction/coordinate",
    "opalgebra/a3 fixture # reduction/order",
    "opalgebra/a3 fixture # reduction/even in w",
    "opalgebra/a3 fixture # reduction/equals hyp fixture",
    "opalgebra/a3 fixture # reduction/equals typo variant",
    "opalgebra/a3 fixture # reduction/annihilates y0",
    "opalgebra/annihilates y0/derived",
    "opalgebra/annihilates y0/hyp fixture",
    "opalgebra/annihilates y0/typo variant",
    "opalgebra/operator used",
    "opalgebra/hypergeometric chart/twist",
    "opalgebra/hypergeometric chart/substitution",
    "opalgebra/hypergeometric chart/order",
    "opalgebra/hypergeometric chart/a#",
    "opalgebra/printed gamma/params",
    "opalgebra/printed gamma/series order",
    "opalgebra/printed gamma/series residual zero",
    "opalgebra/printed gamma/first nonzero residual",
    "opalgebra/printed gamma/right division remainder zero",
    "opalgebra/factor count",
    "opalgebra/factor #/params",
    "opalgebra/factor #/series order",
    "opalgebra/factor #/series residual zero",
    "opalgebra/factor #/first nonzero residual",
    "opalgebra/factor #/right division remainder zero",
    "opalgebra/open question",
    "classify/fuchsian",
    "classify/singular support",
    "classify/singularity #/point",
    "classify/singularity #/regular",
    "classify/singularity #/indicial",
    "classify/singularity #/exponents",
    "classify/kimura printed gamma/tag",
    "classify/kimura printed gamma/witness",
    "classify/kimura factor/params",
    "classify/kimura factor/tag",
    "classify/kimura factor/witness",
    "classify/classification used",
    "monodromy/base",
    "monodromy/tol",
    "monodromy/loop #/around",
    "monodromy/loop #/vertices",
    "monodromy/loop #/residual",
    "monodromy/loop #/steps",
    "monodromy/loop #/det",
    "monodromy/loop #/expected det",
    "monodromy/loop #/eigenvalues",
    "monodromy/loop #/local spectrum gap",
    "monodromy/loop #/row #",
    "monodromy/composite/vertices",
    "monodromy/composite/residual",
    "monodromy/composite/steps",
    "monodromy/composite/row #",
    "monodromy/composite/relation",
    "monodromy/defect # #",
    "monodromy/max defect",
    "monodromy/abelian",
    "monodromy/common eigenvector",
    "verdict/verdict",
    "verdict/contradiction",
    "verdict/flag #",
    "verdict/step #",
];

pub const REQUIRED: &[&str] = &["tool", "config/source", "stages/verdict"];

/// Segment match: `#` in the pattern matches a run of ASCII digits.
fn segment_matches(pat: &str, s: &str) -> bool {
    match pat.split_once('#') {
        None => pat == s,
        Some((pre, post)) => {
            let Some(rest) = s.strip_prefix(pre) else {
                return false;
            };
            let digits = rest.bytes().take_while(u8::is_ascii_digit).count();
            digits > 0 && segment_matches(post, &rest[digits..])
        }
    }
}

fn path_matches(pat: &str, path: &str) -> bool {
    let (p, q): (Vec<&str>, Vec<&str>) = (pat.split('/').collect(), path.split('/').collect());
    p.len() == q.len() && p.iter().zip(&q).all(|(a, b)| segment_matches(a, b))
}

fn section_allowed(path: &str) -> bool {
    let depth = path.split('/').count();
    SCHEMA.iter().any(|pat| {
        let parts: Vec<&str> = pat.split('/').collect();
        parts.len() > depth && path_matches(&parts[..depth].join("/"), path)
    })
}

/// Timing entries are free-form stage names one level below `timings`.
fn leaf_allowed(path: &str) -> bool {
    path.starts_with("timings/") && !path[8..].contains('/') || SCHEMA.iter().any(|p| path_matches(p, path))
}

fn parse_tree(lines: &[(usize, &str)], pos: &mut usize, depth: usize) -> Result<Section, ParseError> {
    let mut sec = Section::new();
    while *pos < lines.len() {
        let (ln, raw) = lines[*pos];
        let indent = raw.len() - raw.trim_start_matches(' ').len();
        if indent % 2 != 0 {
            return Err(ParseError::new(
                ln,
                indent + 1,
                "indentation must be a multiple of two spaces",
            ));
        }
        let level = indent / 2;
        if level < depth {
            break;
        }
        if level > depth {
            return Err(ParseError::new(ln, indent + 1, "unexpected indentation"));
        }
        let text = &raw[indent..];
        if text.starts_with(char::is_whitespace) {
            return Err(ParseError::new(ln, indent + 1, "tabs are not allowed in indentation"));
        }
        *pos += 1;
        if let Some(key) = text.strip_suffix(':') {
            if key.is_empty() || key.contains(':') {
                return Err(ParseError::new(ln, indent + 1, "malformed section key"));
            }
            let child = parse_tree(lines, pos, depth + 1)?;
            if child.entries.is_empty() {
                return Err(ParseError::new(ln, indent + 1, format!("section `{key}` is empty")));
            }
            sec.entries.push((key.to_string(), Node::Section(child)));
        } else {
            let (key, value) = text
                .split_once(": ")
                .ok_or_else(|| ParseError::new(ln, indent + 1, "expected `key: value` or `key:`"))?;
            if key.is_empty() || key.contains(':') {
                return Err(ParseError::new(ln, indent + 1, "malformed key"));
            }
            if value.trim().is_empty() || value != value.trim() {
                return Err(ParseError::new(
                    ln,
                    indent + key.len() + 3,
                    "value must be non-empty and trimmed",
                ));
            }
            if sec.entries.iter().any(|(k, _)| k == key) {
                return Err(ParseError::new(ln, indent + 1, format!("duplicate key `{key}`")));
            }
            sec.entries.push((key.to_string(), Node::Value(value.to_string())));
        }
    }
    Ok(sec)
}

fn parse_timing(v: &str) -> Option<f64> {
    v.strip_suffix(" s")?
        .parse()
        .ok()
        .filter(|t: &f64| t.is_finite() && *t >= 0.0)
}

impl FromStr for Report {
    type Err = ParseError;

    /// Strict reader: wrong version, unknown fields or missing required
    /// fields are errors.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut it = s.lines().enumerate();
        match it.next() {
            Some((_, h)) if h == HEADER => {}
            Some((_, h)) if h.starts_with("kni-report ") => {
                return Err(ParseError::new(
                    1,
                    12,
                    format!("unsupported report version `{}`", &h[11..]),
                ))
            }
            _ => return Err(ParseError::new(1, 1, format!("missing `{HEADER}` header"))),
        }
        let lines: Vec<(usize, &str)> = it
            .map(|(n, l)| (n + 1, l))
            .filter(|(_, l)| !l.trim().is_empty())
            .collect();
        let mut pos = 0;
        let mut body = parse_tree(&lines, &mut pos, 0)?;
        let mut paths = Vec::new();
        body.paths("", &mut paths);
        for (p, leaf) in &paths {
            let ok = if *leaf {
                leaf_allowed(p)
            } else {
                p == "timings" || section_allowed(p)
            };
            if !ok {
                let ln = lines
                    .iter()
                    .find(|(_, l)| l.trim_start().starts_with(p.rsplit('/').next().unwrap_or(p)))
                    .map_or(0, |x| x.0);
                return Err(ParseError::new(ln, 1, format!("unknown field `{p}`")));
            }
        }
        for r in REQUIRED {
            if body.get(r).is_none() {
                return Err(ParseError::new(
                    lines.len() + 1,
                    1,
                    format!("missing required field `{r}`"),
                ));
            }
        }
        let mut timings = Vec::new();
        if let Some(k) = body.entries.iter().position(|(k, _)| k == "timings") {
            if k + 1 != body.entries.len() {
                return Err(ParseError::new(0, 1, "`timings` must be the last section"));
            }
            if let (_, Node::Section(t)) = body.entries.remove(k) {
                for (name, n) in t.entries {
                    let Node::Value(v) = n else {
                        unreachable!("checked by schema")
                    };
                    let secs = parse_timing(&v)
                        .ok_or_else(|| ParseError::new(0, 1, format!("bad timing `{v}` for {name}")))?;
                    timings.push((name, secs));
                }
            }
        }
        Ok(Report { body, timings })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut body = Section::new();
        body.value("tool", "kni 0.1.0");
        let mut cfg = Section::new();
        cfg.value("source", "derived");
        body.section("config", cfg);
        let mut st = Section::new();
        st.value("verdict", "ok");
        body.section("stages", st);
        let mut m = Section::new();
        let mut l1 = Section::new();
        l1.value("around", "i").value("row 1", "1 0").value("row 2", "0 1");
        m.section("loop 1", l1);
        m.value("defect 1 2", "0.5");
        body.section("monodromy", m);
        Report {
            body,
            timings: vec![("mechanics".into(), 0.25)],
        }
    }

    #[test]
    fn round_trip() {
        let r = sample();
        let text = r.to_text();
        let back: Report = text.parse().unwrap();
        assert_eq!(back.body, r.body);
        assert_eq!(back.to_text(), text);
        assert_eq!(back.get("monodromy/loop 1/row 2"), Some("0 1"));
    }

    #[test]
    fn rejects_unknown_and_bad_version() {
        let text = sample().to_text();
        let extra = text.replace("  source: derived\n", "  source: derived\n  colour: blue\n");
        let e = extra.parse::<Report>().unwrap_err();
        assert!(e.message.contains("unknown field `config/colour`"), "{e}");
        let v2 = text.replace("kni-report v1", "kni-report v2");
        assert!(v2.parse::<Report>().unwrap_err().message.contains("unsupported"));
        let bad_indent = text.replace("  source", "   source");
        assert!(bad_indent.parse::<Report>().is_err());
        let missing = text.replace("tool: kni 0.1.0\n", "");
        assert!(missing
            .parse::<Report>()
            .unwrap_err()
            .message
            .contains("missing required"));
        let bad_num = text.replace("loop 1:", "loop x:");
        assert!(bad_num.parse::<Report>().is_err());
    }

    #[test]
    fn pattern_matching() {
        assert!(segment_matches("defect # #", "defect 12 3"));
        assert!(!segment_matches("defect # #", "defect 1 x"));
        assert!(segment_matches("a#", "a4"));
        assert!(!segment_matches("a#", "a"));
        assert!(section_allowed("monodromy/loop 3"));
        assert!(!section_allowed("monodromy/loops"));
    }

    #[test]
    fn values_are_single_line() {
        let mut s = Section::new();
        s.value("k", "two\nlines").value("e", "");
        assert_eq!(s.get("k"), Some("two lines"));
        assert_eq!(s.get("e"), Some("(none)"));
    }
}
