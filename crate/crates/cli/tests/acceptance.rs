//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the lines always reach the console.

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;

use egvi::config::parse_unvalidated;
use egvi::{cmd_compare, cmd_run, parse_config, Console, ExitStatus};
use extragradient::diagnostics::{check_fejer, check_step1};
use extragradient::operators::{
    audit_ism, IsmKind, MaximalMonotone, PseudoKind, StrictPseudocontraction, AUDIT_ISM, AUDIT_LIPSCHITZ,
    AUDIT_MONOTONE,
};
use extragradient::sampling::{rng, uniform_in_cube};
use extragradient::schemes::{step_ko, step_pseudo_ko, step_resolvent_ko, IterationState};
use extragradient::sets::audit_projection;
use extragradient::suite::{standard_suite, SuiteProblem};
use extragradient::{
    run, solve_vi_reference, verify_vi_certificate, ConvexSet, IdentityMap, IsmOperator, Matrix, NonexpansiveMap,
    SchemeKind, StoppingRule, TerminalReason, Tolerance, Trace, Vector,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEED: u64 = 20_240_601;

fn v(xs: &[f64]) -> Vector<f64> {
    Vector::from_f64(xs).unwrap()
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn listed<T: std::fmt::Display>(items: &[T]) -> String {
    if items.is_empty() {
        String::new()
    } else {
        let names: Vec<String> = items.iter().map(ToString::to_string).collect();
        format!("; failing: {}", names.join(", "))
    }
}

fn suite() -> Vec<SuiteProblem<f64>> {
    standard_suite().unwrap()
}

fn ko_stop() -> StoppingRule<f64> {
    StoppingRule::new(10_000, 1e-10, 0.0).unwrap()
}

fn ko_trace(p: &SuiteProblem<f64>) -> Trace<f64> {
    run(&p.problem, SchemeKind::Ko, &p.x0, &ko_stop()).unwrap()
}

fn projection_audit() -> Outcome {
    let tol = Tolerance::new(1e-10, 1e-8, 1e-8, 1e-9).unwrap();
    let sets = [
        (ConvexSet::WholeSpace, 3),
        (ConvexSet::cube(3, -1.0, 2.0).unwrap(), 3),
        (ConvexSet::new_ball(v(&[1.0, -2.0, 0.5]), 1.5).unwrap(), 3),
        (ConvexSet::new_halfspace(v(&[1.0, 2.0, -1.0]), 0.7).unwrap(), 3),
        (ConvexSet::new_simplex(4).unwrap(), 4),
    ];
    let mut worst = f64::NEG_INFINITY;
    let mut failed = Vec::new();
    for (set, dim) in &sets {
        let suite = audit_projection(set, *dim, 10_000, SEED, &tol).unwrap();
        for r in &suite.reports {
            worst = worst.max(r.max_violation);
            if !r.passed || r.max_violation > 1e-10 {
                failed.push(format!("{} {}", set.kind_name(), r.property_name));
            }
        }
    }
    ensure(
        failed.is_empty(),
        format!(
            "5 sets x 3 properties, worst normalized violation {worst:e}{}",
            listed(&failed)
        ),
    )
}

fn operator_certificates() -> Outcome {
    let tol = Tolerance::default();
    let diag = Matrix::diagonal(&[1.0, 2.0]).unwrap();
    let pseudo = StrictPseudocontraction::with_minimal_k(PseudoKind::ScaledNegation { s: 2.0 }).unwrap();
    let good = [
        (IsmOperator::zero(), 3),
        (IsmOperator::shift_residual(v(&[1.0, -2.0, 3.0])), 3),
        (
            IsmOperator::affine_gradient(
                Matrix::from_f64_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap(),
                v(&[1.0, 0.0]),
            )
            .unwrap(),
            2,
        ),
        (IsmOperator::affine_gradient(diag.clone(), v(&[0.0, 0.0])).unwrap(), 2),
        (IsmOperator::from_pseudocontraction(pseudo), 2),
    ];
    let mut bad = vec![(
        IsmOperator::new(
            IsmKind::AffineGradient {
                matrix: diag,
                offset: v(&[0.0, 0.0]),
            },
            0.9,
        )
        .unwrap(),
        2,
    )];
    for alpha in [1e-3, 0.5, 1.0, 10.0] {
        bad.push((IsmOperator::rotation90(alpha).unwrap(), 2));
    }
    let mut problems = Vec::new();
    let mut implication_checked = 0;
    for (i, (op, dim)) in good.iter().chain(&bad).enumerate() {
        let s = audit_ism(op, *dim, 10_000, SEED + i as u64, &tol).unwrap();
        let ism = s.report(AUDIT_ISM).unwrap().passed;
        let expected = i < good.len();
        if ism != expected {
            problems.push(format!("{} alpha={} ism={ism}", op.kind_name(), op.alpha));
        }
        if ism {
            implication_checked += 1;
            if !(s.report(AUDIT_MONOTONE).unwrap().passed && s.report(AUDIT_LIPSCHITZ).unwrap().passed) {
                problems.push(format!("{} passed ism but not its consequences", op.kind_name()));
            }
        }
    }
    ensure(
        problems.is_empty(),
        format!(
            "{} accepted, {} refuted, consequences held on {implication_checked}{}",
            good.len(),
            bad.len(),
            listed(&problems)
        ),
    )
}

fn fejer_suite() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for p in suite() {
        let trace = ko_trace(&p);
        let fejer = check_fejer(&trace, &p.solution, 1e-9).unwrap();
        let step1 = check_step1(&trace, &p.solution, 1e-10).unwrap();
        let good = fejer.passed && step1.passed && step1.samples == trace.iterations() && trace.iterations() <= 10_000;
        ok &= good;
        lines.push(format!("{}:{}", p.name, trace.iterations()));
        if !good {
            lines.push(format!("[{fejer}] [{step1}]"));
        }
    }
    ensure(ok, format!("10 problems, iterations {}", lines.join(" ")))
}

fn oracle_agreement() -> Outcome {
    let tol = Tolerance::default();
    let mut worst_gap: f64 = 0.0;
    let mut worst_cert = f64::INFINITY;
    let mut failed = Vec::new();
    for (i, p) in suite().into_iter().enumerate() {
        let trace = ko_trace(&p);
        let reference = solve_vi_reference(&p.problem.set, p.operator_a(), p.dim(), 1e-13).unwrap();
        let gap = trace.final_x().distance(&reference).unwrap();
        let cert = verify_vi_certificate(
            &p.problem.set,
            p.operator_a(),
            trace.final_x(),
            100_000,
            SEED + i as u64,
            &tol,
        )
        .unwrap();
        worst_gap = worst_gap.max(gap);
        worst_cert = worst_cert.min(cert.worst_violation);
        if trace.terminal_reason != TerminalReason::Residual
            || gap > 1e-6
            || !cert.feasible
            || cert.worst_violation < -1e-8
        {
            failed.push(p.name);
        }
    }
    ensure(
        failed.is_empty(),
        format!(
            "max |x_KO - x_ref| {worst_gap:e}, min certificate value {worst_cert:e}{}",
            listed(&failed)
        ),
    )
}

fn vanishing_residuals() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    for p in suite() {
        let trace = ko_trace(&p);
        let x = trace.final_x().clone();
        let a = p.operator_a();
        let t = p.problem.map_t.as_ref().unwrap();
        let lambda = p.problem.lambda.as_ref().unwrap().value(trace.iterations());
        let alpha = p.problem.alpha_n.value(trace.iterations());
        let probe = step_ko(&IterationState::start(x.clone()), &p.problem.set, a, t, lambda, alpha).unwrap();
        let gaps = [
            x.distance(&t.apply_t(&x).unwrap()).unwrap(),
            x.distance(probe.aux.t.as_ref().unwrap()).unwrap(),
            x.distance(probe.aux.y.as_ref().unwrap()).unwrap(),
            x.distance(probe.aux.tt.as_ref().unwrap()).unwrap(),
        ];
        let m = gaps.into_iter().fold(0.0, f64::max);
        worst = worst.max(m);
        if trace.terminal_reason != TerminalReason::Residual || m > 1e-6 {
            failed.push(p.name);
        }
    }
    ensure(
        failed.is_empty(),
        format!("max terminal gap {worst:e}{}", listed(&failed)),
    )
}

fn structural_identities() -> Outcome {
    let s = StrictPseudocontraction::with_minimal_k(PseudoKind::ScaledNegation { s: 3.0 }).unwrap();
    let a_pseudo = IsmOperator::from_pseudocontraction(s.clone());
    let rot = NonexpansiveMap::rotation(0.9).unwrap();
    let set = ConvexSet::new_ball(v(&[0.5, -0.5]), 2.0).unwrap();
    let cone = MaximalMonotone::NormalCone(set.clone());
    let a = IsmOperator::affine_gradient(
        Matrix::from_f64_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap(),
        v(&[-1.0, 3.0]),
    )
    .unwrap();
    let mut r = rng(SEED);
    let (mut pseudo_gap, mut resolvent_gap): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let x0 = uniform_in_cube(&mut r, &v(&[0.0, 0.0]), 10.0);
        let (mut p, mut q) = (IterationState::start(x0.clone()), IterationState::start(x0.clone()));
        let (mut b, mut c) = (IterationState::start(x0.clone()), IterationState::start(x0));
        for _ in 0..50 {
            p = step_pseudo_ko(&p, &rot, &s, 0.2, 0.4).unwrap();
            q = step_ko(&q, &ConvexSet::WholeSpace, &a_pseudo, &rot, 0.2, 0.4).unwrap();
            pseudo_gap = pseudo_gap.max(p.x.distance(&q.x).unwrap());
            b = step_resolvent_ko(&b, &cone, &a, 0.3, 0.25, 0.6).unwrap();
            c = step_ko(&c, &set, &a, &IdentityMap, 0.25, 0.6).unwrap();
            resolvent_gap = resolvent_gap.max(b.x.distance(&c.x).unwrap());
        }
    }
    ensure(
        pseudo_gap <= 1e-12 && resolvent_gap <= 1e-12,
        format!("100 starts x 50 steps: pseudo {pseudo_gap:e}, normal cone {resolvent_gap:e}"),
    )
}

fn corollary_reduction() -> Outcome {
    let mut failed = Vec::new();
    for p in suite() {
        let mut problem = p.problem.clone();
        problem.map_t = Some(NonexpansiveMap::Identity);
        let with_t = run(&problem, SchemeKind::Ko, &p.x0, &ko_stop()).unwrap();
        let without = run(&problem, SchemeKind::KoNoT, &p.x0, &ko_stop()).unwrap();
        if with_t.records != without.records || with_t.terminal_reason != without.terminal_reason {
            failed.push(p.name);
        }
    }
    ensure(
        failed.is_empty(),
        format!("10 problems, identical records{}", listed(&failed)),
    )
}

/// Smallest `n` with `0.5 * factor^n <= 1e-8`, the residual of `x_n = factor^n (1, 0)`.
fn geometric_count(factor: f64) -> usize {
    ((2e-8f64).ln() / factor.ln()).ceil() as usize
}

fn speed_claim() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("speed.conf");
    fs::write(
        &config,
        "dimension = 2\nscheme = picard_mann\nx0 = [1, 0]\nmap_t.kind = contraction\nmap_t.c = 0.5\n\
         map_t.fixed_point = [0, 0]\nalpha_n.kind = constant\nalpha_n.value = 0.5\n\
         stop.max_iterations = 10000\nstop.residual_threshold = 1e-8\n",
    )
    .unwrap();
    let out = dir.path().join("compare.csv");
    let schemes: Vec<String> = ["picard_mann", "mann", "ishikawa"].map(String::from).to_vec();
    let (mut so, mut se) = (Vec::new(), Vec::new());
    let status = cmd_compare(
        &config,
        &schemes,
        &out,
        None,
        &mut Console {
            out: &mut so,
            err: &mut se,
        },
    );
    let mut counts = Vec::new();
    for row in csv::Reader::from_path(&out).unwrap().records() {
        counts.push(row.unwrap()[1].parse::<usize>().unwrap());
    }
    // per-step factors at alpha_n = 1/2: 0.5 (0.5 + 0.5 * 0.5), 0.5 + 0.5 * 0.5, 0.5 + 0.25 * 0.75
    let expected = [geometric_count(0.375), geometric_count(0.75), geometric_count(0.6875)];
    ensure(
        status == ExitStatus::Success && counts[0] < counts[1] && counts[0] < counts[2] && counts == expected,
        format!(
            "picard_mann={} mann={} ishikawa={} (geometric {:?})",
            counts[0], counts[1], counts[2], expected
        ),
    )
}

fn schedule_enforcement() -> Outcome {
    let base = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/box_shift_ko.conf")).unwrap();
    let cases = [
        ("lambda.value = 0.5", "lambda.value = 2", "lambda.high >= 2*alpha"),
        ("lambda.value = 0.5", "lambda.value = 2.5", "lambda.high >= 2*alpha"),
        (
            "lambda.value = 0.5",
            "lambda.value = 0.5\nlambda.low = 0\nlambda.high = 1",
            "lambda.low <= 0",
        ),
        (
            "lambda.value = 0.5",
            "lambda.value = 0.5\nlambda.low = 0.5\nlambda.high = 3.0",
            "lambda.high >= 2*alpha",
        ),
        ("alpha_n.value = 0.5", "alpha_n.value = 1", "alpha_n.high >= 1"),
        ("alpha_n.value = 0.5", "alpha_n.value = 0", "alpha_n.low <= 0"),
    ];
    let dir = tempfile::tempdir().unwrap();
    let mut problems = Vec::new();
    for (i, (from, to, bound)) in cases.iter().enumerate() {
        let text = base.replace(from, to);
        let named = match parse_config(&text) {
            Ok(_) => false,
            Err(errs) => errs.iter().any(|e| e.message.starts_with(bound)),
        };
        let config = parse_unvalidated(&text).unwrap();
        let refused = matches!(
            run(&config.problem, config.scheme, &config.x0, &config.stop),
            Err(extragradient::RunError::Schedule(_))
        );
        let path = dir.path().join(format!("case{i}.conf"));
        let out = dir.path().join(format!("case{i}.csv"));
        fs::write(&path, &text).unwrap();
        let (mut so, mut se) = (Vec::new(), Vec::new());
        let status = cmd_run(
            &path,
            &out,
            None,
            &mut Console {
                out: &mut so,
                err: &mut se,
            },
        );
        if !(named && refused && status == ExitStatus::Failure && !out.exists()) {
            problems.push(*bound);
        }
    }
    ensure(
        problems.is_empty(),
        format!(
            "{} violating configs refused before iteration{}",
            cases.len(),
            listed(&problems)
        ),
    )
}

fn determinism_and_format() -> Outcome {
    let config = std::path::PathBuf::from(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../configs/ball_affine_averaged.conf"
    ));
    let dir = tempfile::tempdir().unwrap();
    let render = |name: &str| {
        let out = dir.path().join(name);
        let (mut so, mut se) = (Vec::new(), Vec::new());
        let status = cmd_run(
            &config,
            &out,
            None,
            &mut Console {
                out: &mut so,
                err: &mut se,
            },
        );
        (status, fs::read(out).unwrap())
    };
    let (s1, first) = render("a.csv");
    let (s2, second) = render("b.csv");
    let parsed = parse_config(&fs::read_to_string(&config).unwrap()).unwrap();
    let trace = run(&parsed.problem, parsed.scheme, &parsed.x0, &parsed.stop).unwrap();
    let mut reader = csv::Reader::from_reader(first.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    let mut mismatches = 0;
    let mut fields = 0;
    let mut rows = 0;
    for (row, rec) in reader.records().zip(&trace.records) {
        let row = row.unwrap();
        rows += 1;
        let expected = [
            Some(rec.n as f64),
            Some(rec.resid_fix),
            Some(rec.resid_vi),
            Some(rec.step_norm),
            rec.dist_known,
            rec.fejer_margin,
        ];
        for (text, want) in row.iter().zip(expected) {
            fields += 1;
            let digits = text
                .trim_start_matches('-')
                .split(['e', 'E'])
                .next()
                .unwrap()
                .replace('.', "");
            let got = if text.is_empty() {
                None
            } else {
                text.parse::<f64>().ok()
            };
            if got != want || digits.trim_start_matches('0').len() > 17 {
                mismatches += 1;
            }
        }
    }
    ensure(
        s1 == ExitStatus::Success
            && s2 == ExitStatus::Success
            && first == second
            && header == ["n", "resid_fix", "resid_vi", "step_norm", "dist_known", "fejer_margin"]
            && rows == trace.records.len()
            && mismatches == 0,
        format!(
            "{} bytes identical across runs, {rows} rows, {fields} fields exact",
            first.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("projection audit", projection_audit),
        ("operator certificates", operator_certificates),
        ("fejer suite", fejer_suite),
        ("convergence to oracle", oracle_agreement),
        ("vanishing residuals", vanishing_residuals),
        ("structural identities", structural_identities),
        ("corollary reduction", corollary_reduction),
        ("speed claim", speed_claim),
        ("schedule enforcement", schedule_enforcement),
        ("determinism and format", determinism_and_format),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag} {name}: {detail}", i + 1);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
