//! Acceptance suite: every release criterion as one test that prints a
//! pass/fail line (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Criterion 2 pins the halving-ratio band [12, 18] and is expected to fail
//! at the two largest step sizes: the scheme's full-state pre-asymptotic
//! errors shrink faster than 18x per halving there. The magnitude bands and
//! every other criterion pass.

use mrrk::config::{parse_config, ErrorNorm, Overrides};
use mrrk::multirate::{self, MultirateConfig, Recording};
use mrrk::problems::{self, ExactSolution, MassSpringChain};
use mrrk::rk::{self, ButcherTableau};
use mrrk::spline::{ClampedCubicSpline, Extrapolation};
use mrrk::study::{self, fit_order, StudyOutput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;
use std::time::Instant;

fn verdict(criterion: &str, pass: bool, detail: &str) {
    println!(
        "acceptance criterion {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion}: {detail}");
}

/// Benchmark sweep (both schemes, default grid H = 0.25 .. 0.00390625),
/// shared across criteria.
fn benchmark_study() -> &'static (StudyOutput, f64) {
    static STUDY: OnceLock<(StudyOutput, f64)> = OnceLock::new();
    STUDY.get_or_init(|| {
        let cfg = parse_config("mode = both\n", &Overrides::default()).unwrap();
        assert_eq!(cfg.norm, ErrorNorm::Euclidean);
        let start = Instant::now();
        let output = study::run_study(&cfg).unwrap();
        (output, start.elapsed().as_secs_f64())
    })
}

#[test]
fn criterion_1_convergence_order() {
    let (output, elapsed) = benchmark_study();
    let report = output.multirate.as_ref().unwrap();
    assert_eq!(report.rows.len(), 7);
    let slow = report.order_slow.expect("slow order fitted");
    let fast = report.order_fast.expect("fast order fitted");
    let pass = (3.7..=4.3).contains(&slow) && (3.7..=4.3).contains(&fast);
    verdict(
        "1 (convergence order)",
        pass,
        &format!("fitted orders slow {slow:.3}, fast {fast:.3}, target [3.7, 4.3]; sweep took {elapsed:.1} s"),
    );
}

#[test]
fn criterion_2_error_magnitude_and_halving_ratios() {
    let (output, _) = benchmark_study();
    let report = output.multirate.as_ref().unwrap();
    let coarsest = &report.rows[0];
    assert!((coarsest.h_macro - 0.25).abs() < 1e-15);

    let slow_in_band = (1.3e-7..=1.3e-5).contains(&coarsest.error_slow);
    let fast_in_band = (1.1e-7..=1.1e-5).contains(&coarsest.error_fast);
    let ratios_slow = report.halving_ratios(|r| r.error_slow);
    let ratios_fast = report.halving_ratios(|r| r.error_fast);
    let ratios_ok = ratios_slow
        .iter()
        .chain(&ratios_fast)
        .all(|r| (12.0..=18.0).contains(r));

    let fmt = |rs: &[f64]| {
        rs.iter()
            .map(|r| format!("{r:.1}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let detail = format!(
        "H=0.25 errors slow {:.3e} (band [1.3e-7, 1.3e-5]: {}), fast {:.3e} (band [1.1e-7, 1.1e-5]: {}); \
         halving ratios slow [{}], fast [{}], target [12, 18]: {}",
        coarsest.error_slow,
        if slow_in_band { "ok" } else { "out" },
        coarsest.error_fast,
        if fast_in_band { "ok" } else { "out" },
        fmt(&ratios_slow),
        fmt(&ratios_fast),
        if ratios_ok { "ok" } else { "out" },
    );
    verdict(
        "2 (error magnitude and halving ratios)",
        slow_in_band && fast_in_band && ratios_ok,
        &detail,
    );
}

#[test]
fn criterion_3_cost_accounting() {
    let cfg = parse_config("mode = both\n", &Overrides::default()).unwrap();
    let report = study::compare_costs(&cfg).unwrap();
    let pass = report.singlerate_per_window == 800
        && report.multirate_per_window == 116
        && report.singlerate_per_window_analytic == 800
        && report.multirate_per_window_analytic == 116;
    verdict(
        "3 (cost accounting)",
        pass,
        &format!(
            "measured per macro step: singlerate {} vs multirate {} (analytic {} vs {})",
            report.singlerate_per_window,
            report.multirate_per_window,
            report.singlerate_per_window_analytic,
            report.multirate_per_window_analytic
        ),
    );
}

#[test]
fn criterion_4_spline_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut instances = 0usize;
    let mut worst_reproduction = 0.0f64;
    let mut worst_jump = 0.0f64;

    // Cubic reproduction, including extrapolation over the multirate reach
    // (distance m * h past the end of a uniform grid).
    for _ in 0..120 {
        let n_seg = rng.random_range(2..9);
        let t0: f64 = rng.random_range(-2.0..2.0);
        let h: f64 = rng.random_range(0.05..0.8);
        let ts: Vec<f64> = (0..=n_seg).map(|i| t0 + i as f64 * h).collect();
        let c: [f64; 4] = std::array::from_fn(|_| rng.random_range(-3.0..3.0));
        let q = |t: f64| c[0] + c[1] * t + c[2] * t * t + c[3] * t * t * t;
        let dq = |t: f64| c[1] + 2.0 * c[2] * t + 3.0 * c[3] * t * t;
        let ys: Vec<Vec<f64>> = ts.iter().map(|&t| vec![q(t)]).collect();
        let spline = ClampedCubicSpline::clamped(&ts, &ys, &[dq(ts[0])], &[dq(ts[n_seg])]).unwrap();
        let reach = 4.0 * h;
        let window = spline
            .window(
                spline.start(),
                spline.end() + reach,
                Extrapolation::LastSegment,
            )
            .unwrap();
        let mut sup_err = 0.0f64;
        let mut sup_q = 0.0f64;
        for k in 0..=300 {
            let t = spline.start() + (spline.end() + reach - spline.start()) * k as f64 / 300.0;
            sup_err = sup_err.max((window.eval(t).unwrap()[0] - q(t)).abs());
            sup_q = sup_q.max(q(t).abs());
        }
        worst_reproduction = worst_reproduction.max(sup_err / (1.0 + sup_q));
        instances += 1;
    }

    // Interior C2 continuity on random data over random non-uniform grids.
    for _ in 0..100 {
        let n_seg = rng.random_range(2..9);
        let mut ts = vec![rng.random_range(-2.0..2.0)];
        for _ in 0..n_seg {
            let gap: f64 = rng.random_range(0.05..1.5);
            ts.push(ts.last().unwrap() + gap);
        }
        let ys: Vec<Vec<f64>> = (0..=n_seg)
            .map(|_| vec![rng.random_range(-10.0..10.0)])
            .collect();
        let d0 = [rng.random_range(-5.0..5.0)];
        let d1 = [rng.random_range(-5.0..5.0)];
        let spline = ClampedCubicSpline::clamped(&ts, &ys, &d0, &d1).unwrap();
        let window = spline
            .window(spline.start(), spline.end(), Extrapolation::Forbidden)
            .unwrap();
        let mut scale = 0.0f64;
        for k in 0..=100 {
            let t = spline.start() + (spline.end() - spline.start()) * k as f64 / 100.0;
            scale = scale.max(window.eval_derivative(t, 2).unwrap()[0].abs());
        }
        // One-sided second derivatives at each interior node, re-derived
        // from the node data via the Hermite basis at s = 1 and s = 0.
        let values = spline.values();
        let slopes = spline.slopes();
        for i in 1..n_seg {
            let hm = ts[i] - ts[i - 1];
            let hp = ts[i + 1] - ts[i];
            let left = 6.0 * (values[i - 1][0] - values[i][0]) / (hm * hm)
                + (2.0 * slopes[i - 1][0] + 4.0 * slopes[i][0]) / hm;
            let right = 6.0 * (values[i + 1][0] - values[i][0]) / (hp * hp)
                - (4.0 * slopes[i][0] + 2.0 * slopes[i + 1][0]) / hp;
            worst_jump = worst_jump.max((left - right).abs() / (1.0 + scale));
        }
        instances += 1;
    }

    // Interpolation order on sin over halving grids.
    let mut errors = Vec::new();
    for level in 0..5 {
        let n = 8 << level;
        let ts: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let ys: Vec<Vec<f64>> = ts.iter().map(|&t| vec![t.sin()]).collect();
        let spline = ClampedCubicSpline::clamped(&ts, &ys, &[1.0], &[1.0f64.cos()]).unwrap();
        let window = spline.window(0.0, 1.0, Extrapolation::Forbidden).unwrap();
        let mut sup = 0.0f64;
        for k in 0..=2000 {
            let t = k as f64 / 2000.0;
            sup = sup.max((window.eval(t).unwrap()[0] - t.sin()).abs());
        }
        errors.push((1.0 / n as f64, sup));
    }
    let order = fit_order(&errors).unwrap();

    let pass =
        instances >= 200 && worst_reproduction <= 1e-12 && worst_jump <= 1e-10 && order >= 3.8;
    verdict(
        "4 (spline property suite)",
        pass,
        &format!(
            "{instances} randomized instances; worst cubic reproduction {worst_reproduction:.2e} (<= 1e-12), \
             worst C2 jump {worst_jump:.2e} (<= 1e-10), sin interpolation order {order:.2} (>= 3.8)"
        ),
    );
}

#[test]
fn criterion_5_decoupled_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut systems = 0usize;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let d_slow = rng.random_range(1..5);
        let d_fast = rng.random_range(1..4);
        let lambda_slow: Vec<f64> = (0..d_slow).map(|_| rng.random_range(-1.0..-0.05)).collect();
        let lambda_fast: Vec<f64> = (0..d_fast).map(|_| rng.random_range(-12.0..-2.0)).collect();
        let y0_slow: Vec<f64> = (0..d_slow).map(|_| rng.random_range(0.5..2.0)).collect();
        let y0_fast: Vec<f64> = (0..d_fast).map(|_| rng.random_range(0.5..2.0)).collect();
        let m = rng.random_range(2..6);
        let h_macro = [0.1, 0.125, 0.2][rng.random_range(0..3)];
        let windows = rng.random_range(3..7);
        let t_end = h_macro * windows as f64;

        let ls = lambda_slow.clone();
        let lf = lambda_fast.clone();
        let ivp = mrrk::PartitionedIvp::new(
            Box::new(move |_, ys: &[f64], _: &[f64]| {
                ys.iter().zip(&ls).map(|(y, l)| l * y).collect()
            }),
            Box::new(move |_, _: &[f64], yf: &[f64]| {
                yf.iter().zip(&lf).map(|(y, l)| l * y).collect()
            }),
            y0_slow.clone(),
            y0_fast.clone(),
            0.0,
            t_end,
        )
        .unwrap();
        let cfg = MultirateConfig::new(ButcherTableau::rk4(), h_macro, m);
        let run = multirate::integrate(&ivp, &cfg).unwrap();

        // Per-block singlerate reference following the scheme's schedule:
        // the bootstrap window advances the slow block with micro steps (the
        // coupled system is micro-stepped there), later windows with H.
        let tableau = ButcherTableau::rk4();
        let h = cfg.micro_step();
        let ls = lambda_slow.clone();
        let slow_rhs = move |_: f64, y: &[f64]| -> mrrk::Result<Vec<f64>> {
            Ok(y.iter().zip(&ls).map(|(v, l)| l * v).collect())
        };
        let lf = lambda_fast.clone();
        let fast_rhs = move |_: f64, y: &[f64]| -> mrrk::Result<Vec<f64>> {
            Ok(y.iter().zip(&lf).map(|(v, l)| l * v).collect())
        };
        let mut slow_ref = vec![y0_slow.clone()];
        let bootstrap = rk::singlerate_integrate(&tableau, &slow_rhs, 0.0, &y0_slow, h, m).unwrap();
        slow_ref.push(bootstrap.last().unwrap().1.clone());
        for n in 1..windows {
            let prev = slow_ref.last().unwrap().clone();
            slow_ref.push(
                rk::rk_step(&tableau, &slow_rhs, n as f64 * h_macro, &prev, h_macro).unwrap(),
            );
        }
        let fast_ref =
            rk::singlerate_integrate(&tableau, &fast_rhs, 0.0, &y0_fast, h, m * windows).unwrap();

        for (n, (ys, yf)) in run.macro_slow.iter().zip(&run.macro_fast).enumerate() {
            for (got, want) in ys.iter().zip(&slow_ref[n]) {
                worst = worst.max((got - want).abs() / want.abs());
            }
            for (got, want) in yf.iter().zip(&fast_ref[m * n].1) {
                worst = worst.max((got - want).abs() / want.abs());
            }
        }
        systems += 1;
    }
    let pass = systems >= 20 && worst <= 1e-13;
    verdict(
        "5 (decoupled equivalence)",
        pass,
        &format!("{systems} randomized diagonal systems, worst relative deviation {worst:.2e} (<= 1e-13)"),
    );
}

#[test]
fn criterion_6_waveform_accuracy_orders() {
    let chain = MassSpringChain::default();
    let oracle = ExactSolution::new(&chain).unwrap();
    let euclid = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();

    let mut fast_points = Vec::new();
    let mut slow_points = Vec::new();
    for &h_macro in &[0.4, 0.2, 0.1, 0.05, 0.025] {
        let ivp = problems::build_chain_ivp(&chain, 0.0, 40.0).unwrap();
        let cfg = MultirateConfig::new(ButcherTableau::rk4(), h_macro, 20);
        let run = multirate::integrate_with(&ivp, &cfg, Recording::Waveforms).unwrap();
        let waves = run.waveforms.as_ref().unwrap();
        // The window starting at t = 20.
        let record = waves
            .iter()
            .find(|w| (w.t_lo - 20.0).abs() < 1e-9)
            .expect("window at t = 20");
        let fast_window = record
            .fast_extrapolant
            .window(record.t_lo, record.t_hi, Extrapolation::LastSegment)
            .unwrap();
        let slow_window = record
            .slow_interpolant
            .window(record.t_lo, record.t_hi, Extrapolation::Forbidden)
            .unwrap();
        let mut fast_err = 0.0f64;
        let mut slow_err = 0.0f64;
        for k in 0..=64 {
            let t = record.t_lo + (record.t_hi - record.t_lo) * k as f64 / 64.0;
            let (x, v) = oracle.state_at(t);
            let (ref_slow, ref_fast) = problems::blocks_from_physical(&x, &v);
            let fast = fast_window.eval(t).unwrap();
            let slow = slow_window.eval(t).unwrap();
            let dfast: Vec<f64> = fast.iter().zip(&ref_fast).map(|(a, b)| a - b).collect();
            let dslow: Vec<f64> = slow.iter().zip(&ref_slow).map(|(a, b)| a - b).collect();
            fast_err = fast_err.max(euclid(&dfast));
            slow_err = slow_err.max(euclid(&dslow));
        }
        fast_points.push((h_macro, fast_err));
        slow_points.push((h_macro, slow_err));
    }
    let fast_order = fit_order(&fast_points).unwrap();
    let slow_order = fit_order(&slow_points).unwrap();
    let pass = fast_order >= 3.7 && slow_order >= 3.7;
    verdict(
        "6 (waveform accuracy orders)",
        pass,
        &format!(
            "extrapolated fast waveform order {fast_order:.2}, interpolated slow waveform order {slow_order:.2} (>= 3.7)"
        ),
    );
}

#[test]
fn criterion_7_oracle_self_check() {
    let chain = MassSpringChain::default();
    let oracle = ExactSolution::new(&chain).unwrap();

    // Cross-check against a fine singlerate RK4 run.
    let ivp = problems::build_chain_ivp(&chain, 0.0, 40.0).unwrap();
    let run = multirate::integrate_singlerate(&ivp, &ButcherTableau::rk4(), 1e-4).unwrap();
    let (_, y_end) = run.final_state();
    let (x, v) = oracle.state_at(40.0);
    let (ref_slow, ref_fast) = problems::blocks_from_physical(&x, &v);
    let reference: Vec<f64> = ref_slow.iter().chain(&ref_fast).copied().collect();
    let diff = y_end
        .iter()
        .zip(&reference)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();

    // Energy conservation of the exact solution.
    let e0 = problems::energy(&chain, &chain.x0, &chain.v0);
    let mut drift = 0.0f64;
    for k in 0..=200 {
        let (x, v) = oracle.state_at(0.2 * k as f64);
        drift = drift.max((problems::energy(&chain, &x, &v) - e0).abs());
    }
    let pass = diff <= 1e-8 && drift <= 1e-10 * e0;
    verdict(
        "7 (oracle self-check)",
        pass,
        &format!(
            "fine-RK4 (h = 1e-4) agreement {diff:.2e} (<= 1e-8), relative energy drift {:.2e} (<= 1e-10)",
            drift / e0
        ),
    );
}

#[test]
fn criterion_8_singlerate_baseline_order() {
    let (output, _) = benchmark_study();
    let report = output.singlerate.as_ref().unwrap();
    let slow = report.order_slow.expect("slow order fitted");
    let fast = report.order_fast.expect("fast order fitted");
    let pass = (3.8..=4.2).contains(&slow) && (3.8..=4.2).contains(&fast);
    verdict(
        "8 (singlerate baseline order)",
        pass,
        &format!("fitted orders slow {slow:.3}, fast {fast:.3}, target [3.8, 4.2]"),
    );
}
