//! Fuchs test, Kimura's classification of hypergeometric Galois groups and
//! the assembled verdict.

mod verdict;

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactfield::roots::roots_in_field;
use crate::exactfield::{CycNum, Poly};
use crate::opalgebra::{indicial_data, DiffOp, Exponent, Point};

pub use crate::opalgebra::HGParams;
pub use verdict::{verdict_chain, MonodromyEvidence, Verdict, CRITERIA_SATISFIED, INCONSISTENT, NO_OBSTRUCTION};

/// (1 − c, c − a − b, a − b)
pub fn exponent_differences(p: &HGParams) -> [CycNum; 3] {
    [&CycNum::one() - &p.c, &(&p.c - &p.a) - &p.b, &p.a - &p.b]
}

/// Parameters with differences (λ, μ, ν): c = 1 − λ, a = (c − μ + ν)/2,
/// b = (c − μ − ν)/2.
pub fn from_differences(l: &CycNum, m: &CycNum, n: &CycNum) -> HGParams {
    let half = BigRational::new(1.into(), 2.into());
    let c = &CycNum::one() - l;
    let a = (&(&c - m) + n).scale(&half);
    let b = (&(&c - m) - n).scale(&half);
    HGParams::new(a, b, c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiniteKind {
    Tetrahedral,
    Octahedral,
    Icosahedral,
}

impl FiniteKind {
    fn from_name(s: &str) -> Option<Self> {
        match s {
            "tetrahedral" => Some(FiniteKind::Tetrahedral),
            "octahedral" => Some(FiniteKind::Octahedral),
            "icosahedral" => Some(FiniteKind::Icosahedral),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FiniteKind::Tetrahedral => "tetrahedral",
            FiniteKind::Octahedral => "octahedral",
            FiniteKind::Icosahedral => "icosahedral",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaloisTag {
    Reducible,
    ImprimitiveDihedral,
    FinitePrimitive(FiniteKind),
    Sl2,
}

impl GaloisTag {
    pub fn name(&self) -> &'static str {
        match self {
            GaloisTag::Reducible => "reducible",
            GaloisTag::ImprimitiveDihedral => "imprimitive-dihedral",
            GaloisTag::FinitePrimitive(_) => "finite-primitive",
            GaloisTag::Sl2 => "SL2",
        }
    }

    /// SL2 is the only tag whose identity component is not abelian.
    pub fn virtually_abelian_possible(&self) -> bool {
        !matches!(self, GaloisTag::Sl2)
    }
}

impl fmt::Display for GaloisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaloisTag::FinitePrimitive(k) => write!(f, "finite-primitive ({})", k.name()),
            t => write!(f, "{}", t.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisClass {
    pub tag: GaloisTag,
    pub witness: String,
}

#[derive(Clone, Debug)]
pub struct SchwarzEntry {
    pub id: String,
    pub diffs: [BigRational; 3],
    pub kind: FiniteKind,
}

pub const SCHWARZ_TABLE: &str = include_str!("../../data/schwarz.txt");

fn parse_table(text: &str) -> Result<Vec<SchwarzEntry>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Config(format!("schwarz table line {}: `{line}`", no + 1));
        if f.len() != 5 {
            return Err(bad());
        }
        let q = |s: &str| {
            crate::exactfield::parse_constant(s)
                .ok()
                .and_then(|c| c.as_rational().cloned())
        };
        let diffs = [
            q(f[1]).ok_or_else(bad)?,
            q(f[2]).ok_or_else(bad)?,
            q(f[3]).ok_or_else(bad)?,
        ];
        let kind = FiniteKind::from_name(f[4]).ok_or_else(bad)?;
        out.push(SchwarzEntry {
            id: f[0].to_string(),
            diffs,
            kind,
        });
    }
    Ok(out)
}

pub fn schwarz_table() -> &'static [SchwarzEntry] {
    static TABLE: OnceLock<Vec<SchwarzEntry>> = OnceLock::new();
    TABLE.get_or_init(|| parse_table(SCHWARZ_TABLE).expect("embedded table parses"))
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn is_int(q: &BigRational) -> bool {
    q.is_integer()
}

/// Integer shifts of the (signed, permuted) triple with even total.
fn schwarz_match(d: &[BigRational; 3]) -> Option<&'static SchwarzEntry> {
    schwarz_table().iter().find(|e| {
        PERMS.iter().any(|p| {
            (0..8u8).any(|mask| {
                let mut total = BigInt::zero();
                for k in 0..3 {
                    let mut v = d[p[k]].clone();
                    if mask >> k & 1 == 1 {
                        v = -v;
                    }
                    let diff = &v - &e.diffs[k];
                    if !is_int(&diff) {
                        return false;
                    }
                    total += diff.to_integer();
                }
                (total % BigInt::from(2)).is_zero()
            })
        })
    })
}

fn fmt_triple(d: &[CycNum; 3]) -> String {
    format!("({}, {}, {})", d[0].pretty(), d[1].pretty(), d[2].pretty())
}

/// Kimura's theorem: reducibility, the dihedral family, Schwarz's list, else SL2.
pub fn kimura_classify(p: &HGParams) -> GaloisClass {
    let named = [
        ("a", p.a.clone()),
        ("b", p.b.clone()),
        ("c − a", &p.c - &p.a),
        ("c − b", &p.c - &p.b),
    ];
    if let Some((name, v)) = named.iter().find(|(_, v)| v.is_integer()) {
        return GaloisClass {
            tag: GaloisTag::Reducible,
            witness: format!("{name} = {} is an integer", v.pretty()),
        };
    }
    let d = exponent_differences(p);
    let halves: Vec<usize> = (0..3).filter(|&k| d[k].is_half_odd_integer()).collect();
    if halves.len() >= 2 {
        return GaloisClass {
            tag: GaloisTag::ImprimitiveDihedral,
            witness: format!("two exponent differences are half odd integers {}", fmt_triple(&d)),
        };
    }
    if !d.iter().all(|x| x.is_real()) {
        return GaloisClass {
            tag: GaloisTag::Sl2,
            witness: format!("non-real exponent differences {}", fmt_triple(&d)),
        };
    }
    if !d.iter().all(|x| x.is_rational()) {
        return GaloisClass {
            tag: GaloisTag::Sl2,
            witness: format!("irrational exponent differences {}", fmt_triple(&d)),
        };
    }
    let q = [
        d[0].as_rational().expect("rational").clone(),
        d[1].as_rational().expect("rational").clone(),
        d[2].as_rational().expect("rational").clone(),
    ];
    match schwarz_match(&q) {
        Some(e) => GaloisClass {
            tag: GaloisTag::FinitePrimitive(e.kind),
            witness: format!("exponent differences {} match Schwarz entry {}", fmt_triple(&d), e.id),
        },
        None => GaloisClass {
            tag: GaloisTag::Sl2,
            witness: format!(
                "rational exponent differences {} outside Schwarz's list",
                fmt_triple(&d)
            ),
        },
    }
}

#[derive(Clone, Debug)]
pub struct SingularityReport {
    pub point: Point,
    pub regular: bool,
    pub exponents: Vec<Exponent>,
    pub indicial: Poly,
}

/// ∞ is an ordinary point when the monic operator in t = 1/x has
/// coefficients analytic at t = 0.
fn infinity_is_singular(l: &DiffOp) -> Result<bool> {
    let m = l.invert()?.monic()?;
    Ok(m.coeffs().iter().any(|c| c.den().coeff(0).is_zero()))
}

/// Singular support with the Fuchs criterion and local exponents at each point.
pub fn fuchs_test(l: &DiffOp) -> Result<Vec<SingularityReport>> {
    let sp = l.singular_polynomial()?;
    let roots = roots_in_field(&sp);
    let found: usize = roots.iter().map(|(_, m)| m).sum();
    if Some(found) != sp.degree() {
        return Err(Error::SingularityOutsideField(format!(
            "singular polynomial {} has roots outside K",
            sp.to_text()
        )));
    }
    let mut points: Vec<Point> = roots.into_iter().map(|(r, _)| Point::Finite(r)).collect();
    if infinity_is_singular(l)? {
        points.push(Point::Infinity);
    }
    points
        .into_iter()
        .map(|p| {
            let d = indicial_data(l, &p)?;
            Ok(SingularityReport {
                point: p,
                regular: d.regular,
                exponents: d.exponents,
                indicial: d.poly,
            })
        })
        .collect()
}

pub fn is_fuchsian(reports: &[SingularityReport]) -> bool {
    reports.iter().all(|r| r.regular)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{Chart, RatFn};
    use crate::opalgebra::hyp_operator;

    fn q(n: i64, d: i64) -> CycNum {
        CycNum::frac(n, d)
    }

    #[test]
    fn printed_gamma_is_sl2() {
        let c = kimura_classify(&HGParams::printed_gamma());
        assert_eq!(c.tag, GaloisTag::Sl2);
        assert_eq!(c.witness, "non-real exponent differences (−i√3, −2 + i√3, 2 − i√3)");
        assert_eq!(kimura_classify(&HGParams::corrected_gamma()).tag, GaloisTag::Sl2);
    }

    #[test]
    fn differences() {
        let d = exponent_differences(&HGParams::new(q(1, 2), q(1, 2), q(1, 1)));
        assert!(d.iter().all(|x| x.is_zero()));
        let d = exponent_differences(&HGParams::new(q(1, 6), q(5, 6), q(1, 2)));
        assert_eq!(d, [q(1, 2), q(-1, 2), q(-2, 3)]);
        let p = from_differences(&d[0], &d[1], &d[2]);
        assert_eq!(exponent_differences(&p), d);
    }

    #[test]
    fn controls() {
        let t = |a, b, c| kimura_classify(&HGParams::new(a, b, c)).tag;
        assert_eq!(t(q(-2, 1), q(1, 2), q(1, 1)), GaloisTag::Reducible);
        assert_eq!(t(q(1, 3), q(-4, 1), q(1, 7)), GaloisTag::Reducible);
        let dihedral = from_differences(&q(1, 2), &q(1, 2), &q(1, 3));
        assert_eq!(kimura_classify(&dihedral).tag, GaloisTag::ImprimitiveDihedral);
        let ico = from_differences(&q(1, 2), &q(1, 3), &q(1, 5));
        assert_eq!(
            kimura_classify(&ico).tag,
            GaloisTag::FinitePrimitive(FiniteKind::Icosahedral)
        );
        let tet = from_differences(&q(7, 2), &q(-2, 3), &q(1, 3));
        assert_eq!(
            kimura_classify(&tet).tag,
            GaloisTag::FinitePrimitive(FiniteKind::Tetrahedral)
        );
        let s2 = CycNum::sqrt2();
        let generic = from_differences(&s2, &q(1, 3), &q(1, 7));
        let c = kimura_classify(&generic);
        assert_eq!(c.tag, GaloisTag::Sl2);
        assert!(c.witness.starts_with("irrational"));
        let outside = from_differences(&q(1, 7), &q(1, 3), &q(1, 5));
        assert_eq!(kimura_classify(&outside).tag, GaloisTag::Sl2);
    }

    #[test]
    fn table_has_fourteen_entries() {
        assert_eq!(schwarz_table().len(), 14);
    }

    #[test]
    fn hyp_is_fuchsian_on_zero_i_infinity() {
        let r = fuchs_test(&hyp_operator(true)).unwrap();
        assert!(is_fuchsian(&r));
        let pts: Vec<String> = r.iter().map(|s| s.point.to_string()).collect();
        assert_eq!(pts.len(), 3);
        assert!(pts.contains(&"0".to_string()) && pts.contains(&"i".to_string()) && pts.contains(&"∞".to_string()));
    }

    #[test]
    fn euler_and_airy() {
        let x = RatFn::var();
        let euler = DiffOp::new(Chart::X1, vec![RatFn::from_int(-1), x.clone(), x.pow(2)]);
        let r = fuchs_test(&euler).unwrap();
        assert_eq!(r.len(), 2);
        assert!(is_fuchsian(&r));
        let airy = DiffOp::new(Chart::X1, vec![-&x, RatFn::zero(), RatFn::one()]);
        let r = fuchs_test(&airy).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].point, Point::Infinity);
        assert!(!r[0].regular);
    }
}
