//! Flat `key = value` configuration with command-line overrides.

use std::fmt;
use std::str::FromStr;

use kni_core::exactfield::{parse_constant, CycNum};
use kni_core::ParseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    /// Derive everything from the Hamiltonian.
    Derived,
    /// Start from the shipped order-4 operator fixtures.
    Fixture,
    /// Reducible hypergeometric control with abelian monodromy.
    Control,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Derived => "derived",
            Source::Fixture => "fixture",
            Source::Control => "control",
        }
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "derived" => Ok(Source::Derived),
            "fixture" => Ok(Source::Fixture),
            "control" => Ok(Source::Control),
            _ => Err(format!("unknown source `{s}` (expected derived, fixture or control)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub source: Source,
    pub monodromy_tol: f64,
    /// `None` picks the base automatically (1 when it is far enough from
    /// every singularity).
    pub monodromy_base: Option<CycNum>,
    pub monodromy_enabled: bool,
    pub compare_tol: f64,
    pub series_order: usize,
    pub extremal_tol: f64,
    pub switch_eps: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            source: Source::Derived,
            monodromy_tol: 1e-8,
            monodromy_base: None,
            monodromy_enabled: true,
            compare_tol: 1e-6,
            series_order: 40,
            extremal_tol: 1e-12,
            switch_eps: 1e-12,
        }
    }
}

pub const KEYS: [&str; 8] = [
    "source",
    "monodromy.tol",
    "monodromy.base",
    "monodromy.enabled",
    "compare.tol",
    "series.order",
    "extremal.tol",
    "switch.eps",
];

const MAX_SERIES_ORDER: usize = 400;

fn positive(v: &str) -> Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| format!("`{v}` is not a number"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("`{v}` must be positive and finite"))
    }
}

impl Config {
    /// Set one key; the error carries no location.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let v = value.trim();
        match key.trim() {
            "source" => self.source = v.parse()?,
            "monodromy.tol" => self.monodromy_tol = positive(v)?,
            "monodromy.base" => {
                self.monodromy_base = if v == "auto" {
                    None
                } else {
                    Some(parse_constant(v).map_err(|e| e.message)?)
                }
            }
            "monodromy.enabled" => {
                self.monodromy_enabled = v.parse().map_err(|_| format!("`{v}` is not true or false"))?
            }
            "compare.tol" => self.compare_tol = positive(v)?,
            "series.order" => {
                let n: usize = v.parse().map_err(|_| format!("`{v}` is not a non-negative integer"))?;
                if n == 0 || n > MAX_SERIES_ORDER {
                    return Err(format!("series.order must lie in 1..={MAX_SERIES_ORDER}"));
                }
                self.series_order = n;
            }
            "extremal.tol" => self.extremal_tol = positive(v)?,
            "switch.eps" => self.switch_eps = positive(v)?,
            k => return Err(format!("unknown key `{k}`")),
        }
        Ok(())
    }

    /// `key=value` as given on the command line.
    pub fn apply_override(&mut self, kv: &str) -> Result<(), ParseError> {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| ParseError::new(1, 1, format!("override `{kv}` is not key=value")))?;
        self.set(k, v).map_err(|m| ParseError::new(1, k.len() + 2, m))
    }

    /// Values in `KEYS` order, as written to reports.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        vec![
            ("source", self.source.name().to_string()),
            ("monodromy.tol", format!("{:e}", self.monodromy_tol)),
            (
                "monodromy.base",
                self.monodromy_base.as_ref().map_or("auto".to_string(), |b| b.pretty()),
            ),
            ("monodromy.enabled", self.monodromy_enabled.to_string()),
            ("compare.tol", format!("{:e}", self.compare_tol)),
            ("series.order", self.series_order.to_string()),
            ("extremal.tol", format!("{:e}", self.extremal_tol)),
            ("switch.eps", format!("{:e}", self.switch_eps)),
        ]
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.entries() {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Config {
    type Err = ParseError;

    /// Blank lines and `#` comments are skipped; keys may appear once.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut c = Config::default();
        let mut seen = Vec::new();
        for (n, raw) in s.lines().enumerate() {
            let line = n + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| ParseError::new(line, 1, "expected `key = value`"))?;
            let key = k.trim();
            let col = raw.find(key).unwrap_or(0) + 1;
            if seen.contains(&key.to_string()) {
                return Err(ParseError::new(line, col, format!("duplicate key `{key}`")));
            }
            c.set(key, v).map_err(|m| {
                let vcol = if m.starts_with("unknown key") {
                    col
                } else {
                    k.chars().count() + 2
                };
                ParseError::new(line, vcol, m)
            })?;
            seen.push(key.to_string());
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = Config::default();
        let back: Config = c.to_string().parse().unwrap();
        assert_eq!(back, c);
        assert_eq!(c.entries().len(), KEYS.len());
        for ((k, _), key) in c.entries().iter().zip(KEYS) {
            assert_eq!(*k, key);
        }
    }

    #[test]
    fn parses_and_rejects() {
        let c: Config = "# control run\nsource = control\nmonodromy.tol = 1e-9  # tighter\nmonodromy.base = -1\n"
            .parse()
            .unwrap();
        assert_eq!(c.source, Source::Control);
        assert_eq!(c.monodromy_tol, 1e-9);
        assert_eq!(c.monodromy_base, Some(CycNum::from_int(-1)));
        let e = "series.order = 10\nmonodromy.tolerance = 1"
            .parse::<Config>()
            .unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
        assert!(e.message.contains("unknown key"));
        assert!("monodromy.tol = -1".parse::<Config>().is_err());
        assert!("series.order = 0".parse::<Config>().is_err());
        assert!("source = derived\nsource = control".parse::<Config>().is_err());
        assert!("just words".parse::<Config>().is_err());
    }

    #[test]
    fn overrides() {
        let mut c = Config::default();
        c.apply_override("monodromy.enabled=false").unwrap();
        assert!(!c.monodromy_enabled);
        assert!(c.apply_override("nope=1").is_err());
        assert!(c.apply_override("monodromy.tol").is_err());
    }
}
