//! Read-only data files shipped with the crate, verified against CHECKSUMS.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactfield::{CycNum, RatFn};
use crate::opalgebra::{hyp_operator, DiffOp, HGParams};
use crate::variational::{displayed_a3, literal_p3, VarSystem};

pub const HYP_PRINTED: &str = include_str!("../data/hyp_printed.diffop");
pub const HYP_VARIANT: &str = include_str!("../data/hyp_variant.diffop");
pub const A3_LITERAL: &str = include_str!("../data/a3_literal.varsys");
pub const A3_BRANCH: &str = include_str!("../data/a3_branch.varsys");
pub const CONTROL_HG: &str = include_str!("../data/control_hg.diffop");
pub const SCHWARZ: &str = include_str!("../data/schwarz.txt");
pub const CHECKSUMS: &str = include_str!("../data/CHECKSUMS");

/// (file name, contents) of every checksummed file.
pub const FILES: [(&str, &str); 6] = [
    ("hyp_printed.diffop", HYP_PRINTED),
    ("hyp_variant.diffop", HYP_VARIANT),
    ("a3_literal.varsys", A3_LITERAL),
    ("a3_branch.varsys", A3_BRANCH),
    ("control_hg.diffop", CONTROL_HG),
    ("schwarz.txt", SCHWARZ),
];

pub fn sha256_hex(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

/// `<hex>  <name>` lines, as produced by sha256sum.
pub fn checksums_text() -> String {
    FILES.iter().map(|(n, c)| format!("{}  {n}\n", sha256_hex(c))).collect()
}

pub fn verify_checksums() -> Result<()> {
    for line in CHECKSUMS.lines().filter(|l| !l.trim().is_empty()) {
        let (hash, name) = line
            .split_once("  ")
            .ok_or_else(|| Error::Config(format!("malformed CHECKSUMS line `{line}`")))?;
        let (_, body) = FILES
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::Config(format!("CHECKSUMS lists unknown file {name}")))?;
        if sha256_hex(body) != hash {
            return Err(Error::Config(format!("checksum mismatch for {name}")));
        }
    }
    if CHECKSUMS.lines().filter(|l| !l.trim().is_empty()).count() != FILES.len() {
        return Err(Error::Config("CHECKSUMS does not cover every data file".into()));
    }
    Ok(())
}

fn parse<T: std::str::FromStr<Err = crate::error::ParseError>>(name: &str, s: &str) -> Result<T> {
    s.parse().map_err(|e| Error::Config(format!("{name}: {e}")))
}

pub fn hyp_printed() -> Result<DiffOp> {
    parse("hyp_printed.diffop", HYP_PRINTED)
}

pub fn hyp_variant() -> Result<DiffOp> {
    parse("hyp_variant.diffop", HYP_VARIANT)
}

pub fn a3_literal() -> Result<VarSystem> {
    parse("a3_literal.varsys", A3_LITERAL)
}

pub fn a3_branch() -> Result<VarSystem> {
    parse("a3_branch.varsys", A3_BRANCH)
}

pub fn control_hg() -> Result<DiffOp> {
    parse("control_hg.diffop", CONTROL_HG)
}

/// HG(c − 1, c, c) with c = 1/3: solutions (1 − u)^{2/3} and u^{2/3},
/// reducible with diagonal monodromy.
pub fn control_params() -> HGParams {
    let c = CycNum::frac(1, 3);
    HGParams::new(&c - &CycNum::one(), c.clone(), c)
}

fn with_header(comment: &str, body: String) -> String {
    let mut s = String::new();
    for l in comment.lines() {
        s.push_str("# ");
        s.push_str(l);
        s.push('\n');
    }
    s + &body
}

/// Contents every data file is expected to have, rebuilt from code.
pub fn generated() -> Result<Vec<(&'static str, String)>> {
    let branch_p3 = RatFn::var().pow(2);
    let branch_p3 = (&branch_p3 - &RatFn::constant(CycNum::i()))
        .div(&RatFn::var())?
        .scale(&CycNum::i());
    Ok(vec![
        (
            "hyp_printed.diffop",
            with_header(
                "order-4 scalar operator, x1 chart, coefficients exactly as printed\n(last denominator 4(x1 - 1)^3 x1^4)",
                hyp_operator(false).to_text(),
            ),
        ),
        (
            "hyp_variant.diffop",
            with_header(
                "order-4 scalar operator, x1 chart, last denominator read as 4(x1 - i)^3 x1^4",
                hyp_operator(true).to_text(),
            ),
        ),
        (
            "a3_literal.varsys",
            with_header(
                "normal block as printed, w chart (x1 = w^2), p3 = (x1 - i)/sqrt(x1)",
                displayed_a3(&literal_p3())?.to_text(),
            ),
        ),
        (
            "a3_branch.varsys",
            with_header(
                "normal block as printed, w chart (x1 = w^2), p3 = i(x1 - i)/sqrt(x1)",
                displayed_a3(&branch_p3)?.to_text(),
            ),
        ),
        (
            "control_hg.diffop",
            with_header(
                "negative control: HG(-2/3, 1/3, 1/3), u chart",
                control_params().operator().to_text(),
            ),
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_files_match_code() {
        let gen = generated().unwrap();
        let bless = std::env::var_os("KNI_BLESS").is_some();
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
        for (name, body) in &gen {
            let shipped = FILES.iter().find(|f| f.0 == *name).unwrap().1;
            if bless {
                std::fs::write(dir.join(name), body).unwrap();
            } else {
                assert_eq!(shipped, body, "{name} is stale; rerun with KNI_BLESS=1");
            }
        }
        if bless {
            // checksums of the freshly written files
            let mut text = String::new();
            for (name, shipped) in FILES {
                let body = gen
                    .iter()
                    .find(|g| g.0 == name)
                    .map(|g| g.1.clone())
                    .unwrap_or_else(|| shipped.to_string());
                text.push_str(&format!("{}  {name}\n", sha256_hex(&body)));
            }
            std::fs::write(dir.join("CHECKSUMS"), text).unwrap();
        } else {
            assert_eq!(CHECKSUMS, checksums_text());
            verify_checksums().unwrap();
        }
    }

    #[test]
    fn fixtures_parse() {
        assert_eq!(hyp_printed().unwrap(), hyp_operator(false));
        assert_eq!(hyp_variant().unwrap(), hyp_operator(true));
        assert_eq!(a3_literal().unwrap().n, 4);
        assert_eq!(control_hg().unwrap(), control_params().operator());
    }
}
