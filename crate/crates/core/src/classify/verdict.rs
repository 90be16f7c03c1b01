//! The implication chain from the factor's Galois group to the
//! non-integrability conclusion, with consistency flags.

use super::{GaloisClass, GaloisTag};

pub const CRITERIA_SATISFIED: &str = "non-integrability criteria satisfied";
pub const NO_OBSTRUCTION: &str = "no obstruction found";
pub const INCONSISTENT: &str = "inconsistent evidence";

/// Commutator defects above this count as non-commuting.
pub const NON_ABELIAN_THRESHOLD: f64 = 0.1;

#[derive(Clone, Debug)]
pub struct MonodromyEvidence {
    pub max_defect: f64,
    pub abelian: bool,
    pub common_eigenvector: bool,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub verdict: &'static str,
    pub chain: Vec<String>,
    pub flags: Vec<String>,
    pub contradiction: bool,
}

pub fn verdict_chain(class: &GaloisClass, evidence: Option<&MonodromyEvidence>) -> Verdict {
    let mut flags = Vec::new();
    let mut contradiction = false;
    match evidence {
        None => flags.push("numeric corroboration absent".to_string()),
        Some(e) => match class.tag {
            // a common eigenvector is expected: y0 itself spans an invariant line
            GaloisTag::Sl2 if e.abelian => {
                contradiction = true;
                flags.push(format!(
                    "contradiction: SL2 classification but abelian monodromy (max defect {:.3e})",
                    e.max_defect
                ));
            }
            GaloisTag::Sl2 if e.max_defect <= NON_ABELIAN_THRESHOLD => {
                flags.push(format!(
                    "weak numeric evidence: max commutator defect {:.3e}",
                    e.max_defect
                ));
            }
            GaloisTag::Reducible if e.max_defect > NON_ABELIAN_THRESHOLD => {
                contradiction = true;
                flags.push(format!(
                    "contradiction: reducible classification but commutator defect {:.3e}",
                    e.max_defect
                ));
            }
            _ => {}
        },
    }
    let mut chain = vec![format!(
        "hypergeometric factor: Galois group {} ({}) [Kimura 1969, Schwarz's list]",
        class.tag, class.witness
    )];
    let verdict = if contradiction {
        INCONSISTENT
    } else if class.tag == GaloisTag::Sl2 {
        chain.extend([
            "the factor's solutions lie in the Picard-Vessiot extension of the scalar operator, so its group over C(x1) contains SL2(C) [Galois correspondence]".to_string(),
            "the scalar operator is Fuchsian, so its group over C(x1) is the Zariski closure of its monodromy; continuation inside the regular domain keeps SL2(C) over meromorphic functions in x1 [Schlesinger density]".to_string(),
            "adjoining √x1 is an extension of degree 2, which can only pass to a subgroup of index at most 2; the identity component still contains SL2(C)".to_string(),
            "the normal variational equation along the collision solution has a Galois group that is not virtually abelian".to_string(),
            "by Morales-Ramis, the Hamiltonian is not meromorphically Liouville integrable".to_string(),
        ]);
        CRITERIA_SATISFIED
    } else {
        chain.push(format!(
            "a {} group has abelian identity component; this factor gives no obstruction",
            class.tag
        ));
        NO_OBSTRUCTION
    };
    Verdict {
        verdict,
        chain,
        flags,
        contradiction,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(tag: GaloisTag) -> GaloisClass {
        GaloisClass {
            tag,
            witness: "test".into(),
        }
    }

    fn ev(d: f64) -> MonodromyEvidence {
        MonodromyEvidence {
            max_defect: d,
            abelian: d < 1e-6,
            common_eigenvector: true,
        }
    }

    #[test]
    fn outcomes() {
        let v = verdict_chain(&class(GaloisTag::Sl2), Some(&ev(0.7)));
        assert_eq!(v.verdict, CRITERIA_SATISFIED);
        assert!(v.flags.is_empty());
        let v = verdict_chain(&class(GaloisTag::Reducible), Some(&ev(0.0)));
        assert_eq!(v.verdict, NO_OBSTRUCTION);
        let v = verdict_chain(&class(GaloisTag::Sl2), None);
        assert_eq!(v.verdict, CRITERIA_SATISFIED);
        assert_eq!(v.flags, vec!["numeric corroboration absent".to_string()]);
        let v = verdict_chain(&class(GaloisTag::Reducible), Some(&ev(0.5)));
        assert!(v.contradiction);
        assert_eq!(v.verdict, INCONSISTENT);
        let v = verdict_chain(&class(GaloisTag::Sl2), Some(&ev(0.0)));
        assert!(v.contradiction);
    }
}
