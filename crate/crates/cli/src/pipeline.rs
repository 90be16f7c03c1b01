//! The verification pipeline: mechanics → variational → opalgebra →
//! classify → monodromy → verdict, each stage feeding the next.

use std::time::Instant;

use num_complex::Complex64;

use kni_core::classify::{
    fuchs_test, is_fuchsian, kimura_classify, verdict_chain, GaloisClass, MonodromyEvidence, SingularityReport,
};
use kni_core::exactfield::RatFn;
use kni_core::fixtures;
use kni_core::mechanics::{
    first_integral_c, poisson_bracket, restricted_h, solve_collision_ansatz, CollisionBranch, S_PAIRS,
};
use kni_core::monodromy::{
    companion_system, continue_all, format_complex, format_rows, group_tests, local_spectrum_gap, loop_set,
    path_product, CMatrix, LinearSystem, Loop, MonodromyMatrix,
};
use kni_core::opalgebra::{
    annihilates, cyclic_reduce, factor_twist, find_hg_factors, first_nonzero, series_check, to_hypergeometric_chart,
    y0_log_derivative, DiffOp, HGParams, Point,
};
use kni_core::variational::{
    extract_normal_block, is_infinitesimally_symplectic, match_up_to_signed_permutation, variational_matrix,
    x1_time_block_system, MatchReport, VarSystem,
};
use kni_core::{Error, Result};

use crate::config::{Config, Source};
use crate::report::{Report, Section};

pub const OK: &str = "ok";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Verdict = 0,
    Contradiction = 2,
    StageFailure = 3,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit: ExitStatus,
}

/// Names of the coefficients where `a` and `b` differ.
pub fn differing_coeffs(a: &DiffOp, b: &DiffOp) -> Vec<String> {
    let n = a.coeffs().len().max(b.coeffs().len());
    (0..n)
        .filter(|&k| a.coeff(k) != b.coeff(k))
        .map(|k| format!("a{k}"))
        .collect()
}

fn list_or_none(v: &[String]) -> String {
    if v.is_empty() {
        "(none)".into()
    } else {
        v.join(", ")
    }
}

// ---------------------------------------------------------------- mechanics

const RESIDUAL_NAMES: [&str; 4] = ["x1", "x3", "p1", "p3"];

fn branch_section(b: &CollisionBranch) -> Result<Section> {
    let mut s = Section::new();
    s.value("alpha", b.alpha.pretty())
        .value("beta", b.beta.pretty())
        .value("gamma0", b.gamma0.pretty())
        .value("field residuals zero", b.residuals()?.iter().all(RatFn::is_zero))
        .value("C", b.c_along()?.pretty("w"))
        .value("H", b.h_along()?.pretty("w"))
        .value("x3 = sqrt2 p3", b.has_sqrt2_gauge());
    Ok(s)
}

/// Branch inventory; `Err(NoBranches)` when the ansatz has no solution.
pub fn mechanics_stage() -> Result<(Section, CollisionBranch)> {
    let mut s = Section::new();
    let bracket = poisson_bracket(&restricted_h(), &first_integral_c(), &S_PAIRS)?;
    s.value(
        "first integral bracket",
        if bracket.is_identically_zero()? { "0" } else { "nonzero" },
    );
    let sol = solve_collision_ansatz()?;
    if sol.branches.is_empty() {
        return Err(Error::NoBranches("the ansatz returned an empty branch set".into()));
    }
    s.value("alpha^2 from C", sol.alpha_sq_from_c.pretty())
        .value("alpha^2 from field", sol.alpha_sq_from_field.pretty())
        .value("kappa", sol.kappa.pretty())
        .value("branch count", sol.branches.len());
    for (k, b) in sol.branches.iter().enumerate() {
        s.section(&format!("branch {}", k + 1), branch_section(b)?);
    }
    let printed = CollisionBranch::printed();
    let res = printed.residuals()?;
    let mut p = Section::new();
    p.value("alpha", printed.alpha.pretty())
        .value("beta", printed.beta.pretty())
        .value("gamma0", printed.gamma0.pretty());
    for (k, r) in res.iter().enumerate() {
        p.value(
            &format!("residual {}", k + 1),
            format!("{} equation: {}", RESIDUAL_NAMES[k], r.pretty("w")),
        );
    }
    p.value("residuals zero", res.iter().all(RatFn::is_zero));
    s.section("printed triple", p);
    let k = sol
        .branches
        .iter()
        .position(CollisionBranch::has_sqrt2_gauge)
        .unwrap_or(0);
    s.value("selected branch", k + 1);
    Ok((s, sol.branches[k].clone()))
}

// -------------------------------------------------------------- variational

fn match_section(label: &str, derived: &VarSystem, reference: &VarSystem) -> Result<(Section, MatchReport)> {
    let m = match_up_to_signed_permutation(derived, reference)?;
    let mut s = Section::new();
    s.value("p3", label);
    match &m.found {
        Some(p) => s.value("match", p.describe(&derived.ordering)),
        None => s.value("match", "none"),
    };
    s.value("best candidate", m.best.describe(&derived.ordering))
        .value("mismatches", m.mismatches)
        .value("searched", m.searched);
    Ok((s, m))
}

pub const A3_FIXTURE_LABELS: [&str; 2] = ["i(x1 − i)/√x1 (consistent branch)", "(x1 − i)/√x1 (as printed)"];

/// The derived normal block and the coordinate that plays the role of the
/// fixture's first coordinate.
pub fn variational_stage(b: &CollisionBranch) -> Result<(Section, VarSystem, usize)> {
    let mut s = Section::new();
    let a = variational_matrix(b)?;
    s.value("symplectic", is_infinitesimally_symplectic(&a));
    let a3 = extract_normal_block(&x1_time_block_system(b)?)?;
    s.value("lower-left block zero", true);
    let mut nb = Section::new();
    nb.value("ordering", a3.ordering.join(","));
    for r in 0..a3.n {
        for c in 0..a3.n {
            nb.value(&format!("entry {} {}", r + 1, c + 1), a3.get(r, c).pretty("w"));
        }
    }
    s.section("normal block", nb);
    let mut coord = a3.ordering.iter().position(|o| o == "p4").unwrap_or(a3.n - 1);
    for (k, (label, fx)) in A3_FIXTURE_LABELS
        .iter()
        .zip([fixtures::a3_branch()?, fixtures::a3_literal()?])
        .enumerate()
    {
        let (sec, m) = match_section(label, &a3, &fx)?;
        if k == 0 {
            if let Some(p) = &m.found {
                coord = p.perm[0];
            }
        }
        s.section(&format!("a3 fixture {}", k + 1), sec);
    }
    Ok((s, a3, coord))
}

// --------------------------------------------------------------- opalgebra

pub struct OpalgebraData {
    /// Operator used downstream, with its label.
    pub operator: DiffOp,
    pub used: &'static str,
    /// Right factor used for classification.
    pub factor: Option<HGParams>,
}

fn series_block(s: &mut Section, l: &DiffOp, p: &HGParams, order: usize) -> Result<bool> {
    let r = series_check(l, &p.series(order)?)?;
    let first = first_nonzero(&r);
    let (_, rem) = l.right_divide(&p.operator())?;
    s.value("params", p)
        .value("series order", order)
        .value("series residual zero", first.is_none())
        .value(
            "first nonzero residual",
            first.map_or("(none)".to_string(), |k| k.to_string()),
        )
        .value("right division remainder zero", rem.is_zero());
    Ok(first.is_none() && rem.is_zero())
}

/// Cyclic reduction on `coord`, passed to the x1 chart when even in w.
pub fn reduction_section(a3: &VarSystem, coord: usize) -> Result<(Section, Option<DiffOp>)> {
    let mut s = Section::new();
    let l = cyclic_reduce(a3, coord)?;
    let even = l.is_even();
    s.value("coordinate", &a3.ordering[coord])
        .value("order", l.order().unwrap_or(0))
        .value("even in w", even);
    let lx = if even { Some(l.w_to_x1()?) } else { None };
    Ok((s, lx))
}

fn hypergeometric_section(s: &mut Section, l4: &DiffOp, cfg: &Config) -> Result<(DiffOp, Vec<HGParams>)> {
    let lu = to_hypergeometric_chart(l4)?;
    let mut h = Section::new();
    h.value("twist", factor_twist().pretty("x1"))
        .value("substitution", "u = 1 + i·x1")
        .value("order", lu.order().unwrap_or(0));
    for (k, c) in lu.coeffs().iter().enumerate() {
        h.value(&format!("a{k}"), c.pretty("u"));
    }
    s.section("hypergeometric chart", h);
    let printed = HGParams::printed_gamma();
    let mut pg = Section::new();
    let printed_ok = series_block(&mut pg, &lu, &printed, cfg.series_order)?;
    s.section("printed gamma", pg);
    let found = find_hg_factors(&lu)?;
    s.value("factor count", found.len());
    for (k, p) in found.iter().enumerate() {
        let mut f = Section::new();
        series_block(&mut f, &lu, p, cfg.series_order)?;
        s.section(&format!("factor {}", k + 1), f);
    }
    if !printed_ok {
        s.value(
            "open question",
            match found.first() {
                Some(p) => format!(
                    "the printed parameters {printed} do not give a right factor; the factor present is {p} and is used for classification"
                ),
                None => format!("the printed parameters {printed} do not give a right factor and no factor was found"),
            },
        );
    }
    Ok((lu, found))
}

pub fn opalgebra_stage(derived: Option<(&VarSystem, usize)>, cfg: &Config) -> Result<(Section, OpalgebraData)> {
    let mut s = Section::new();
    let printed = fixtures::hyp_printed()?;
    let variant = fixtures::hyp_variant()?;
    let r0 = y0_log_derivative();
    s.value("y0", "(i − x1)/√x1");
    let mut derived_op = None;
    if let Some((a3, coord)) = derived {
        let (mut sec, lx) = reduction_section(a3, coord)?;
        if let Some(lx) = &lx {
            for (k, c) in lx.coeffs().iter().enumerate() {
                sec.value(&format!("a{k}"), c.pretty("x1"));
            }
            let (dp, dv) = (differing_coeffs(lx, &printed), differing_coeffs(lx, &variant));
            sec.value("equals hyp fixture", dp.is_empty())
                .value("differs from hyp fixture in", list_or_none(&dp))
                .value("equals typo variant", dv.is_empty())
                .value("differs from typo variant in", list_or_none(&dv));
        }
        s.section("derived operator", sec);
        derived_op = lx;
    }
    for (k, fx) in [fixtures::a3_branch()?, fixtures::a3_literal()?].iter().enumerate() {
        let (mut sec, lx) = reduction_section(fx, 0)?;
        if let Some(lx) = &lx {
            sec.value("equals hyp fixture", lx == &printed)
                .value("equals typo variant", lx == &variant)
                .value("annihilates y0", annihilates(lx, &r0)?);
        }
        s.section(&format!("a3 fixture {} reduction", k + 1), sec);
    }
    let mut ann = Section::new();
    let derived_ok = match &derived_op {
        Some(l) => {
            let a = annihilates(l, &r0)?;
            ann.value("derived", a);
            a
        }
        None => false,
    };
    let printed_ok = annihilates(&printed, &r0)?;
    let variant_ok = annihilates(&variant, &r0)?;
    ann.value("hyp fixture", printed_ok).value("typo variant", variant_ok);
    s.section("annihilates y0", ann);
    let (used, operator) = if derived_ok {
        ("derived", derived_op.expect("checked"))
    } else if printed_ok {
        ("hyp fixture", printed)
    } else if variant_ok {
        ("typo variant", variant)
    } else {
        return Err(Error::NotASolution(
            "y0 is annihilated by none of the derived operator, the fixture and its typo variant".into(),
        ));
    };
    s.value("operator used", used);
    let (_, found) = hypergeometric_section(&mut s, &operator, cfg)?;
    Ok((
        s,
        OpalgebraData {
            operator,
            used,
            factor: found.into_iter().next(),
        },
    ))
}

fn control_opalgebra_stage(cfg: &Config) -> Result<(Section, OpalgebraData)> {
    let mut s = Section::new();
    let op = fixtures::control_hg()?;
    s.value("operator used", "control fixture");
    let found = find_hg_factors(&op)?;
    s.value("factor count", found.len());
    for (k, p) in found.iter().enumerate() {
        let mut f = Section::new();
        series_block(&mut f, &op, p, cfg.series_order)?;
        s.section(&format!("factor {}", k + 1), f);
    }
    Ok((
        s,
        OpalgebraData {
            operator: op,
            used: "control fixture",
            factor: found.into_iter().next(),
        },
    ))
}

// ---------------------------------------------------------------- classify

pub fn singularity_section(r: &SingularityReport) -> Section {
    let mut s = Section::new();
    s.value("point", &r.point)
        .value("regular", r.regular)
        .value("indicial", r.indicial.pretty("ρ"))
        .value(
            "exponents",
            r.exponents
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", "),
        );
    s
}

pub fn class_section(p: &HGParams, c: &GaloisClass, with_params: bool) -> Section {
    let mut s = Section::new();
    if with_params {
        s.value("params", p);
    }
    s.value("tag", &c.tag).value("witness", &c.witness);
    s
}

pub struct ClassifyData {
    pub reports: Vec<SingularityReport>,
    pub class: GaloisClass,
    pub fuchsian: bool,
}

pub fn classify_stage(op: &DiffOp, factor: Option<&HGParams>, with_printed: bool) -> Result<(Section, ClassifyData)> {
    let mut s = Section::new();
    let reports = fuchs_test(op)?;
    let fuchsian = is_fuchsian(&reports);
    s.value("fuchsian", fuchsian).value(
        "singular support",
        reports
            .iter()
            .map(|r| r.point.to_string())
            .collect::<Vec<_>>()
            .join(", "),
    );
    for (k, r) in reports.iter().enumerate() {
        s.section(&format!("singularity {}", k + 1), singularity_section(r));
    }
    let printed = HGParams::printed_gamma();
    let printed_class = kimura_classify(&printed);
    if with_printed {
        s.section("kimura printed gamma", class_section(&printed, &printed_class, false));
    }
    let class = match factor {
        Some(p) => {
            let c = kimura_classify(p);
            s.section("kimura factor", class_section(p, &c, true));
            s.value("classification used", "factor");
            c
        }
        None => {
            s.value("classification used", "printed gamma");
            printed_class
        }
    };
    Ok((
        s,
        ClassifyData {
            reports,
            class,
            fuchsian,
        },
    ))
}

// --------------------------------------------------------------- monodromy

/// Candidate base points tried in order when none is configured.
const AUTO_BASES: [(f64, f64); 4] = [(1.0, 0.0), (-1.0, 0.0), (2.0, 0.0), (0.0, -1.0)];

fn exact_label(z: Complex64, reports: &[SingularityReport]) -> (String, Option<&SingularityReport>) {
    for r in reports {
        if let Point::Finite(p) = &r.point {
            if (p.to_complex() - z).norm() < 1e-9 {
                return (p.pretty(), Some(r));
            }
        }
    }
    (format_complex(z), None)
}

fn vertices_text(lp: &Loop) -> String {
    lp.vertices
        .iter()
        .map(|&z| format_complex(z))
        .collect::<Vec<_>>()
        .join("; ")
}

fn matrix_rows(s: &mut Section, m: &CMatrix) {
    for (k, row) in format_rows(m).into_iter().enumerate() {
        s.value(&format!("row {}", k + 1), row);
    }
}

pub struct MonodromyData {
    pub evidence: MonodromyEvidence,
    /// Problems that weaken the evidence without invalidating it.
    pub warnings: Vec<String>,
}

fn resolve_base(
    sys: &LinearSystem,
    cfg: &Config,
    labels: &[String],
) -> Result<(Complex64, kni_core::monodromy::LoopSet)> {
    if let Some(b) = &cfg.monodromy_base {
        let z = b.to_complex();
        return Ok((z, loop_set(&sys.singularities, z, labels)?));
    }
    let mut last = Error::InvalidArgument("no base point candidates".into());
    for (re, im) in AUTO_BASES {
        let z = Complex64::new(re, im);
        if sys.singularities.iter().any(|s| (s - z).norm() < 0.5) {
            continue;
        }
        match loop_set(&sys.singularities, z, labels) {
            Ok(set) => return Ok((z, set)),
            Err(e) => last = e,
        }
    }
    Err(last)
}

pub fn monodromy_stage(op: &DiffOp, reports: &[SingularityReport], cfg: &Config) -> Result<(Section, MonodromyData)> {
    let tol = cfg.monodromy_tol;
    let sys = companion_system(op)?;
    let labels: Vec<String> = sys.singularities.iter().map(|&z| exact_label(z, reports).0).collect();
    let (base, set) = resolve_base(&sys, cfg, &labels)?;
    let mut s = Section::new();
    s.value("base", format_complex(base)).value("tol", format!("{tol:e}"));
    let mut loops = set.generators.clone();
    loops.push(set.composite.clone());
    let results: Vec<MonodromyMatrix> = continue_all(&sys, &loops, tol).into_iter().collect::<Result<_>>()?;
    let mut warnings = Vec::new();
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    for (k, (m, &j)) in results.iter().zip(&set.order).enumerate() {
        let (label, rep) = exact_label(sys.singularities[j], reports);
        let mut ls = Section::new();
        ls.value("around", &label)
            .value("vertices", vertices_text(&set.generators[k]))
            .value("residual", format!("{:.3e}", m.residual))
            .value("steps", m.stats.accepted)
            .value("det", format_complex(m.det()));
        if let Some(r) = rep {
            let ex: Vec<Complex64> = r.exponents.iter().map(|e| e.to_complex()).collect();
            let expected = (two_pi_i * ex.iter().sum::<Complex64>()).exp();
            let gap = local_spectrum_gap(&m.matrix, &ex);
            ls.value("expected det", format_complex(expected));
            ls.value(
                "eigenvalues",
                m.eigenvalues()
                    .into_iter()
                    .map(format_complex)
                    .collect::<Vec<_>>()
                    .join(", "),
            );
            ls.value("local spectrum gap", format!("{gap:.3e}"));
            if gap > cfg.compare_tol {
                warnings.push(format!("loop around {label}: local spectrum gap {gap:.3e}"));
            }
            let det_gap = (m.det() - expected).norm() / expected.norm().max(1.0);
            if det_gap > cfg.compare_tol {
                warnings.push(format!(
                    "loop around {label}: det differs from e^(2πiΣρ) by {det_gap:.3e}"
                ));
            }
        } else {
            ls.value(
                "eigenvalues",
                m.eigenvalues()
                    .into_iter()
                    .map(format_complex)
                    .collect::<Vec<_>>()
                    .join(", "),
            );
        }
        matrix_rows(&mut ls, &m.matrix);
        s.section(&format!("loop {}", k + 1), ls);
    }
    let gens: Vec<CMatrix> = results[..set.generators.len()]
        .iter()
        .map(|m| m.matrix.clone())
        .collect();
    let comp = &results[set.generators.len()];
    let prod = path_product(&gens).expect("at least one generator");
    let relation = (&prod - &comp.matrix).norm() / comp.matrix.norm();
    let mut cs = Section::new();
    cs.value("vertices", vertices_text(&set.composite))
        .value("residual", format!("{:.3e}", comp.residual))
        .value("steps", comp.stats.accepted);
    matrix_rows(&mut cs, &comp.matrix);
    cs.value("relation", format!("{relation:.3e}"));
    s.section("composite", cs);
    if relation > 10.0 * tol {
        warnings.push(format!("composite relation {relation:.3e} above 10·tol"));
    }
    let g = group_tests(&gens);
    for (a, b, d) in &g.defects {
        s.value(&format!("defect {} {}", a + 1, b + 1), format!("{d:.6e}"));
    }
    s.value("max defect", format!("{:.6e}", g.max_defect))
        .value("abelian", g.abelian)
        .value("common eigenvector", g.common_eigenvector.is_some());
    Ok((
        s,
        MonodromyData {
            evidence: MonodromyEvidence {
                max_defect: g.max_defect,
                abelian: g.abelian,
                common_eigenvector: g.common_eigenvector.is_some(),
            },
            warnings,
        },
    ))
}

// ------------------------------------------------------------------ driver

struct Run {
    body: Section,
    stages: Section,
    timings: Vec<(String, f64)>,
}

impl Run {
    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings.push((name.to_string(), t.elapsed().as_secs_f64()));
        out
    }
}

fn status<T>(r: &Result<T>) -> String {
    match r {
        Ok(_) => OK.to_string(),
        Err(e) => format!("failed: {e}"),
    }
}

/// Run every stage. Only an empty branch set aborts; other failures are
/// recorded in `stages` and the run continues with what is available.
pub fn run_pipeline(cfg: &Config) -> Result<Outcome> {
    let mut run = Run {
        body: Section::new(),
        stages: Section::new(),
        timings: Vec::new(),
    };
    run.body.value("tool", format!("kni {}", env!("CARGO_PKG_VERSION")));
    let mut cs = Section::new();
    for (k, v) in cfg.entries() {
        cs.value(k, v);
    }
    run.body.section("config", cs);
    let mut sections: Vec<(&str, Section)> = Vec::new();
    let mut degraded: Vec<String> = Vec::new();

    run.stages.value("fixtures", status(&fixtures::verify_checksums()));

    let mut derived: Option<(VarSystem, usize)> = None;
    if cfg.source == Source::Derived {
        let mech = run.time("mechanics", mechanics_stage);
        let branch = match mech {
            Err(e @ Error::NoBranches(_)) => return Err(e),
            Err(e) => {
                run.stages.value("mechanics", format!("failed: {e}"));
                degraded.push("derivation unavailable; fixtures used".into());
                None
            }
            Ok((s, b)) => {
                run.stages.value("mechanics", OK);
                sections.push(("mechanics", s));
                Some(b)
            }
        };
        match branch {
            Some(b) => match run.time("variational", || variational_stage(&b)) {
                Ok((s, a3, coord)) => {
                    run.stages.value("variational", OK);
                    sections.push(("variational", s));
                    derived = Some((a3, coord));
                }
                Err(e) => {
                    run.stages.value("variational", format!("failed: {e}"));
                    degraded.push("normal block unavailable; fixtures used".into());
                }
            },
            None => {
                run.stages.value("variational", "skipped: no branch");
            }
        }
    } else {
        let why = format!("skipped: source = {}", cfg.source.name());
        run.stages.value("mechanics", &why).value("variational", &why);
    }

    let opal = run.time("opalgebra", || match cfg.source {
        Source::Control => control_opalgebra_stage(cfg),
        _ => opalgebra_stage(derived.as_ref().map(|(a, k)| (a, *k)), cfg),
    });
    let opal = match opal {
        Ok((s, d)) => {
            run.stages.value("opalgebra", OK);
            sections.push(("opalgebra", s));
            Some(d)
        }
        Err(e) => {
            run.stages.value("opalgebra", format!("failed: {e}"));
            None
        }
    };

    let classified = match &opal {
        Some(d) => {
            let with_printed = cfg.source != Source::Control;
            match run.time("classify", || {
                classify_stage(&d.operator, d.factor.as_ref(), with_printed)
            }) {
                Ok((s, c)) => {
                    run.stages.value("classify", OK);
                    sections.push(("classify", s));
                    if d.factor.is_none() {
                        degraded.push("no verified hypergeometric factor; printed parameters classified".into());
                    }
                    if !c.fuchsian {
                        degraded.push("operator is not Fuchsian; density argument does not apply".into());
                    }
                    Some(c)
                }
                Err(e) => {
                    run.stages.value("classify", format!("failed: {e}"));
                    None
                }
            }
        }
        None => {
            run.stages.value("classify", "skipped: no operator");
            None
        }
    };

    let evidence = match (&opal, &classified) {
        _ if !cfg.monodromy_enabled => {
            run.stages.value("monodromy", "skipped: disabled by configuration");
            None
        }
        (Some(d), Some(c)) => match run.time("monodromy", || monodromy_stage(&d.operator, &c.reports, cfg)) {
            Ok((s, m)) => {
                if m.warnings.is_empty() {
                    run.stages.value("monodromy", OK);
                } else {
                    run.stages
                        .value("monodromy", format!("degraded: {}", m.warnings.join("; ")));
                    degraded.extend(m.warnings.iter().cloned());
                }
                sections.push(("monodromy", s));
                Some(m.evidence)
            }
            Err(e) => {
                run.stages.value("monodromy", format!("failed: {e}"));
                None
            }
        },
        _ => {
            run.stages.value("monodromy", "skipped: no classified operator");
            None
        }
    };

    let exit = match &classified {
        Some(c) => {
            let v = run.time("verdict", || verdict_chain(&c.class, evidence.as_ref()));
            run.stages.value("verdict", OK);
            let mut s = Section::new();
            s.value("verdict", v.verdict).value("contradiction", v.contradiction);
            for (k, f) in v.flags.iter().chain(&degraded).enumerate() {
                s.value(&format!("flag {}", k + 1), f);
            }
            for (k, step) in v.chain.iter().enumerate() {
                s.value(&format!("step {}", k + 1), step);
            }
            sections.push(("verdict", s));
            if v.contradiction {
                ExitStatus::Contradiction
            } else {
                ExitStatus::Verdict
            }
        }
        None => {
            run.stages.value("verdict", "failed: no classification available");
            ExitStatus::StageFailure
        }
    };

    let mut body = run.body;
    body.section("stages", run.stages);
    for (k, s) in sections {
        body.section(k, s);
    }
    Ok(Outcome {
        report: Report {
            body,
            timings: run.timings,
        },
        exit,
    })
}
