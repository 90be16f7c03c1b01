//! Acceptance criteria. Prints one PASS/FAIL line per criterion; exits
//! nonzero when a criterion fails that is not listed in `KNOWN_RED`.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kni_cli::pipeline::{mechanics_stage, opalgebra_stage, variational_stage};
use kni_cli::{run_pipeline, Config, Source};
use kni_core::classify::{
    from_differences, fuchs_test, is_fuchsian, kimura_classify, FiniteKind, GaloisTag, CRITERIA_SATISFIED,
    NO_OBSTRUCTION,
};
use kni_core::exactfield::{Chart, CycNum, RatFn};
use kni_core::fixtures;
use kni_core::mechanics::{
    first_integral_c, integrate_extremal, poisson_bracket, restricted_h, solve_collision_ansatz, CollisionBranch,
    ExtremalOptions, RealState, S_PAIRS,
};
use kni_core::monodromy::{
    char_poly, companion_system, continue_all, continue_along, group_tests, loop_set, poly_from_roots, square_loop,
    CMatrix,
};
use kni_core::opalgebra::{
    annihilates, cyclic_reduce, first_nonzero, indicial_data, series_check, to_hypergeometric_chart, y0_log_derivative,
    DiffOp, HGParams, Point,
};
use kni_core::variational::{
    extract_normal_block, is_infinitesimally_symplectic, variational_matrix, x1_time_block_system,
};

/// The literal series claim for the printed hypergeometric parameters does
/// not hold: the operator has no solution 2F1 with those parameters.
const KNOWN_RED: &[&str] = &["6a"];

struct Outcome {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn record(out: &mut Vec<Outcome>, id: &'static str, pass: bool, detail: impl Into<String>) {
    out.push(Outcome {
        id,
        pass,
        detail: detail.into(),
    });
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_cyc(rng: &mut ChaCha8Rng) -> CycNum {
    let mut z = CycNum::zero();
    for k in 0..8 {
        let n = rng.gen_range(-60..=60);
        let d = rng.gen_range(1..=25);
        z += &(&CycNum::frac(n, d) * &CycNum::zeta_pow(k));
    }
    z
}

fn criterion_1(out: &mut Vec<Outcome>) {
    let t = Instant::now();
    let z = CycNum::zeta();
    let s2 = &(&z.pow(3) - &z.pow(5)) + &z;
    let sq2 = &s2 * &s2 == CycNum::from_int(2);
    let s3 = &(&z.pow(4) * &CycNum::from_int(2)) - &CycNum::one();
    let sq3 = &s3 * &s3 == CycNum::from_int(-3);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut ok = 0;
    let mut tried = 0;
    while tried < 1000 {
        let x = random_cyc(&mut rng);
        if x.is_zero() {
            continue;
        }
        tried += 1;
        if x.inv().map(|y| &x * &y == CycNum::one()).unwrap_or(false) {
            ok += 1;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    record(
        out,
        "1",
        sq2 && sq3 && ok == 1000 && secs < 1.0,
        format!("(ζ³−ζ⁵+ζ)²=2: {sq2}, (2ζ⁴−1)²=−3: {sq3}, inverses {ok}/1000, {secs:.3} s (< 1 s)"),
    );
}

fn criterion_2(out: &mut Vec<Outcome>) {
    let b = poisson_bracket(&restricted_h(), &first_integral_c(), &S_PAIRS)
        .and_then(|e| e.is_identically_zero())
        .unwrap_or(false);
    record(out, "2", b, format!("{{H|S, C}} ≡ 0: {b}"));
}

fn criterion_3(out: &mut Vec<Outcome>) {
    let Ok(sol) = solve_collision_ansatz() else {
        record(out, "3", false, "solve_collision_ansatz failed");
        return;
    };
    let two_i = &CycNum::i() * &CycNum::from_int(2);
    let all_ok = sol.branches.iter().all(|b| {
        b.check().is_ok()
            && b.c_along().ok().and_then(|c| c.as_constant()) == Some(two_i.clone())
            && b.h_along().map(|h| h.is_zero()).unwrap_or(false)
    });
    let gauge = sol.branches.iter().any(CollisionBranch::has_sqrt2_gauge);
    let printed = CollisionBranch::printed().residuals();
    let printed_nonzero = printed
        .as_ref()
        .map(|r| r.iter().filter(|x| !x.is_zero()).count())
        .unwrap_or(0);
    record(
        out,
        "3",
        !sol.branches.is_empty() && all_ok && gauge && printed.is_ok(),
        format!(
            "{} branches, residuals/C=2i/H=0 hold: {all_ok}, x3=√2·p3 on some branch: {gauge}, printed triple: {printed_nonzero} nonzero residuals (recorded)",
            sol.branches.len()
        ),
    );
}

fn criterion_4(out: &mut Vec<Outcome>) {
    let b = solve_collision_ansatz().unwrap().branches[0].clone();
    let sym = variational_matrix(&b)
        .map(|a| is_infinitesimally_symplectic(&a))
        .unwrap_or(false);
    let ll = x1_time_block_system(&b).and_then(|s| extract_normal_block(&s)).is_ok();
    let m = variational_stage(&b);
    let (matched, searched) = match &m {
        Ok((s, _, _)) => (
            s.get("a3 fixture 1/match").unwrap_or("?").to_string(),
            s.get("a3 fixture 1/searched").unwrap_or("?").to_string(),
        ),
        Err(_) => ("error".into(), "0".into()),
    };
    record(
        out,
        "4",
        sym && ll && m.is_ok(),
        format!("AᵀJ+JA=0: {sym}, lower-left block zero: {ll}, signed-permutation search terminated after {searched}: {matched}"),
    );
}

fn criterion_5(out: &mut Vec<Outcome>) {
    let r0 = y0_log_derivative();
    let printed = fixtures::hyp_printed().unwrap();
    let variant = fixtures::hyp_variant().unwrap();
    let mut shape_ok = true;
    let mut derived_ann = false;
    let mut notes = Vec::new();
    for (name, fx) in [
        ("branch p3", fixtures::a3_branch().unwrap()),
        ("printed p3", fixtures::a3_literal().unwrap()),
    ] {
        match cyclic_reduce(&fx, 0) {
            Ok(l) => {
                let even = l.is_even();
                shape_ok &= l.order() == Some(4) && even;
                if let Ok(lx) = l.w_to_x1() {
                    let a = annihilates(&lx, &r0).unwrap_or(false);
                    derived_ann |= a;
                    notes.push(format!(
                        "{name}: order 4 even, = fixture {}, = typo variant {}, annihilates y0 {a}",
                        lx == printed,
                        lx == variant
                    ));
                }
            }
            Err(e) => {
                shape_ok = false;
                notes.push(format!("{name}: {e}"));
            }
        }
    }
    let pa = annihilates(&printed, &r0).unwrap_or(false);
    let va = annihilates(&variant, &r0).unwrap_or(false);
    notes.push(format!("fixture annihilates y0 {pa}, typo variant {va}"));
    record(out, "5", shape_ok && (derived_ann || pa || va), notes.join("; "));
}

fn operator_used() -> DiffOp {
    let (_, b) = mechanics_stage().unwrap();
    let (_, a3, k) = variational_stage(&b).unwrap();
    opalgebra_stage(Some((&a3, k)), &Config::default()).unwrap().1.operator
}

fn criterion_6(out: &mut Vec<Outcome>, l: &DiffOp) {
    let lu = to_hypergeometric_chart(l).unwrap();
    let check = |p: &HGParams| {
        let r = series_check(&lu, &p.series(40).unwrap()).unwrap();
        let (_, rem) = lu.right_divide(&p.operator()).unwrap();
        (first_nonzero(&r), rem.is_zero())
    };
    let (first, rem_zero) = check(&HGParams::printed_gamma());
    record(
        out,
        "6a",
        first.is_none(),
        format!(
            "2F1{} series residual to order 40: {}",
            HGParams::printed_gamma(),
            first.map_or("identically zero".to_string(), |k| format!(
                "first nonzero at index {k}"
            ))
        ),
    );
    let report = run_pipeline(&Config {
        monodromy_enabled: false,
        ..Config::default()
    })
    .unwrap()
    .report;
    let reported = report.get("opalgebra/printed gamma/right division remainder zero");
    let flagged = report.get("opalgebra/open question").is_some();
    let consistent = reported == Some(if rem_zero { "true" } else { "false" }) && (rem_zero || flagged);
    record(
        out,
        "6b",
        consistent,
        format!("right-division remainder reported (zero: {rem_zero}); open-question flag raised: {flagged}"),
    );
    let star = HGParams::corrected_gamma();
    let (first, rem_zero) = check(&star);
    record(
        out,
        "6c",
        first.is_none() && rem_zero,
        format!(
            "factor present 2F1{star}: series residual zero to order 40 {}, remainder zero {rem_zero}",
            first.is_none()
        ),
    );
}

fn criterion_7(out: &mut Vec<Outcome>) {
    let g = kimura_classify(&HGParams::printed_gamma());
    let want = "non-real exponent differences (−i√3, −2 + i√3, 2 − i√3)";
    let main_ok = g.tag == GaloisTag::Sl2 && g.witness == want;
    let q = CycNum::frac;
    let controls: Vec<(&str, HGParams, GaloisTag)> = vec![
        (
            "terminating a = −2",
            HGParams::new(q(-2, 1), q(1, 2), q(1, 1)),
            GaloisTag::Reducible,
        ),
        (
            "terminating b = −4",
            HGParams::new(q(1, 3), q(-4, 1), q(1, 7)),
            GaloisTag::Reducible,
        ),
        (
            "dihedral (1/2, 1/2, 1/3)",
            from_differences(&q(1, 2), &q(1, 2), &q(1, 3)),
            GaloisTag::ImprimitiveDihedral,
        ),
        (
            "icosahedral (1/2, 1/3, 1/5)",
            from_differences(&q(1, 2), &q(1, 3), &q(1, 5)),
            GaloisTag::FinitePrimitive(FiniteKind::Icosahedral),
        ),
        (
            "octahedral (1/2, 1/3, 1/4)",
            from_differences(&q(1, 2), &q(1, 3), &q(1, 4)),
            GaloisTag::FinitePrimitive(FiniteKind::Octahedral),
        ),
        (
            "real irrational (√2, 1/3, 1/7)",
            from_differences(&CycNum::sqrt2(), &q(1, 3), &q(1, 7)),
            GaloisTag::Sl2,
        ),
    ];
    let mut right = 0;
    let mut wrong = Vec::new();
    for (name, p, tag) in &controls {
        let got = kimura_classify(p).tag;
        if got == *tag {
            right += 1;
        } else {
            wrong.push(format!("{name}: got {got}"));
        }
    }
    record(
        out,
        "7",
        main_ok && right >= 5 && wrong.is_empty(),
        format!(
            "printed parameters → {} ({}); controls {right}/{} correct{}",
            g.tag,
            g.witness,
            controls.len(),
            if wrong.is_empty() {
                String::new()
            } else {
                format!(" [{}]", wrong.join("; "))
            }
        ),
    );
}

fn criterion_8(out: &mut Vec<Outcome>, l: &DiffOp) {
    let reports = fuchs_test(l).unwrap();
    let support: Vec<String> = reports.iter().map(|r| r.point.to_string()).collect();
    let want = ["0", "i", "∞"];
    let same = support.len() == 3 && want.iter().all(|w| support.iter().any(|s| s == w));
    record(
        out,
        "8",
        is_fuchsian(&reports) && same,
        format!(
            "Fuchsian {}, singular support {{{}}}",
            is_fuchsian(&reports),
            support.join(", ")
        ),
    );
}

fn criterion_9(out: &mut Vec<Outcome>, l: &DiffOp) {
    let t = Instant::now();
    let tol = 1e-8;
    let sys = companion_system(l).unwrap();
    let base = c(1.0, 0.0);
    // (a) contractible loop around the regular point 3
    let lp = square_loop(base, c(3.0, 0.0), 0.5, "3").unwrap();
    let m = continue_along(&sys, &lp, tol).unwrap();
    let id_err = (&m.matrix - CMatrix::identity(4, 4)).norm();
    // (b) eigenvalues at 0 against the indicial exponents
    let set = loop_set(&sys.singularities, base, &[]).unwrap();
    let res: Vec<_> = continue_all(&sys, &set.generators, tol)
        .into_iter()
        .map(|r| r.unwrap())
        .collect();
    let k0 = set
        .order
        .iter()
        .position(|&j| sys.singularities[j].norm() < 1e-12)
        .unwrap();
    let ex: Vec<Complex64> = indicial_data(l, &Point::zero())
        .unwrap()
        .exponents
        .iter()
        .map(|e| e.to_complex())
        .collect();
    let two_pi_i = c(0.0, 2.0 * std::f64::consts::PI);
    let target: Vec<Complex64> = ex.iter().map(|e| (two_pi_i * e).exp()).collect();
    let gap = char_poly(&res[k0].matrix)
        .iter()
        .zip(poly_from_roots(&target))
        .map(|(a, b)| (a - b).norm() / b.norm().max(1.0))
        .fold(0.0, f64::max);
    // (c) commutator defect
    let gens: Vec<CMatrix> = res.iter().map(|r| r.matrix.clone()).collect();
    let defect = group_tests(&gens).max_defect;
    // (d) y′ = y/(3x) around 0
    let third = RatFn::var().inv().unwrap().scale(&CycNum::frac(1, 3));
    let cube = companion_system(&DiffOp::new(Chart::X1, vec![-&third, RatFn::one()])).unwrap();
    let lp = square_loop(base, c(0.0, 0.0), 0.5, "0").unwrap();
    let m3 = continue_along(&cube, &lp, 1e-11).unwrap();
    let err3 = (m3.matrix[(0, 0)] - (two_pi_i / 3.0).exp()).norm();
    let secs = t.elapsed().as_secs_f64();
    record(
        out,
        "9",
        id_err < 1e-6 && gap < 1e-6 && defect > 0.1 && err3 < 1e-10 && secs < 30.0,
        format!(
            "(a) ‖M−I‖ {id_err:.2e} (< 1e-6); (b) spectrum gap at 0 {gap:.2e} (< 1e-6); (c) defect {defect:.3} (> 0.1); (d) x^(1/3) error {err3:.2e} (< 1e-10); {secs:.2} s (< 30 s)"
        ),
    );
}

fn criterion_10(out: &mut Vec<Outcome>) {
    let opts = |thrust: bool, floor: Option<f64>| ExtremalOptions {
        tol: 1e-12,
        thrust,
        x1_floor: floor,
        ..Default::default()
    };
    let kepler = integrate_extremal(
        &RealState::new(0.0, [1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]),
        10.0,
        &opts(false, None),
    );
    let controlled = integrate_extremal(
        &RealState::new(0.0, [1.0, 0.0, 0.0, 1.0, 0.1, 0.2, 0.3, 1.0]),
        10.0,
        &opts(true, None),
    );
    // on the line with p3 < 0, where |p3| = −p3 and C is conserved
    let line = integrate_extremal(
        &RealState::new(0.0, [2.0, 0.0, 0.0, 0.0, -0.5, 0.0, -1.0, 0.0]),
        10.0,
        &opts(true, Some(0.2)),
    );
    match (kepler, controlled, line) {
        (Ok(k), Ok(cr), Ok(ln)) => {
            let pass = k.max_energy_drift <= 1e-9
                && k.t_end == 10.0
                && cr.max_h_drift <= 1e-9
                && cr.t_end == 10.0
                && cr.events.is_empty()
                && ln.max_c_drift <= 1e-9;
            record(
                out,
                "10",
                pass,
                format!(
                    "Kepler energy drift {:.2e}, controlled H drift {:.2e}, collision-line C drift {:.2e} until x1 = {:.3} at t = {:.3} (all ≤ 1e-9)",
                    k.max_energy_drift,
                    cr.max_h_drift,
                    ln.max_c_drift,
                    ln.samples.last().map_or(f64::NAN, |s| s.y[0]),
                    ln.t_end
                ),
            );
        }
        (k, cr, ln) => record(
            out,
            "10",
            false,
            format!("integration failed: {:?} {:?} {:?}", k.err(), cr.err(), ln.err()),
        ),
    }
}

fn criterion_11(out: &mut Vec<Outcome>) {
    let t = Instant::now();
    let main = run_pipeline(&Config::default()).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let r = &main.report;
    let verdict = r.get("verdict/verdict").unwrap_or("(none)");
    let contradiction = r.get("verdict/contradiction") == Some("true");
    let green = r
        .body
        .get_section("stages")
        .map(|s| {
            s.entries
                .iter()
                .all(|(_, n)| matches!(n, kni_cli::report::Node::Value(v) if v == "ok"))
        })
        .unwrap_or(false);
    let control = run_pipeline(&Config {
        source: Source::Control,
        ..Config::default()
    })
    .unwrap();
    let cv = control.report.get("verdict/verdict").unwrap_or("(none)");
    record(
        out,
        "11",
        verdict == CRITERIA_SATISFIED && !contradiction && green && secs < 60.0 && cv == NO_OBSTRUCTION,
        format!("default: \"{verdict}\", contradiction {contradiction}, all stages ok {green}, {secs:.2} s (< 60 s); control: \"{cv}\""),
    );
}

fn main() {
    let mut out = Vec::new();
    criterion_1(&mut out);
    criterion_2(&mut out);
    criterion_3(&mut out);
    criterion_4(&mut out);
    criterion_5(&mut out);
    let l = operator_used();
    criterion_6(&mut out, &l);
    criterion_7(&mut out);
    criterion_8(&mut out, &l);
    criterion_9(&mut out, &l);
    criterion_10(&mut out);
    criterion_11(&mut out);
    let mut unexpected = 0;
    for o in &out {
        let known = KNOWN_RED.contains(&o.id);
        let tag = match (o.pass, known) {
            (true, false) => "PASS",
            (true, true) => "PASS (listed as known red)",
            (false, true) => "FAIL (known red)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("criterion {:<3} {tag}: {}", o.id, o.detail);
    }
    let passed = out.iter().filter(|o| o.pass).count();
    println!(
        "acceptance: {passed}/{} passed, {unexpected} unexpected failures",
        out.len()
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}
