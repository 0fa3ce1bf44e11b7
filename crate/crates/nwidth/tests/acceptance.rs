//! End-to-end acceptance suite. Each test prints one PASS line for its
//! criterion; a failed assertion marks the criterion as failed.

use nwidth::experiments::{fit_constant, fit_epsilon, fit_rate};
use nwidth::fourier::coefficients;
use nwidth::fourier::hws_split;
use nwidth::signals::{
    antiderivative_signal, box_convolve, hws_assemble, jump_signal, ramp_signal, random_steps,
    Field2, Signal, TrigTerm,
};
use nwidth::snapshots::{
    basis_matrix, midpoint_grid, pod_width_curve, projection_distances, singular_values,
    snapshot_matrix, snapshot_matrix_2d,
};
use nwidth::widths::{
    gm_bounds, gm_spectrum, jump_width_trigamma, merge_spectra, nonhws_bound, sort_spectrum,
    spectrum, width_curve, Parity,
};
use std::f64::consts::PI;
use std::time::Instant;

fn pod_curve(g: &Signal, nx: usize, nmu: usize, n_max: usize) -> Vec<f64> {
    let m = snapshot_matrix(g, nx, nmu);
    let s = singular_values(&m).expect("svd");
    pod_width_curve(&s, m.weight, n_max)
}

/// Criterion 1: the trigamma-based jump width matches a brute-force sorted
/// tail sum (10^7 terms plus asymptotic remainder) to 1e-10 for N <= 1000,
/// in under 5 seconds.
#[test]
fn c01_jump_width_vs_brute_force_oracle() {
    let start = Instant::now();
    const K: usize = 10_000_000;
    const STORE: usize = 1002;
    // lambda_k = 4 / ((2k-1) pi)^2, each with multiplicity 2
    let lam = |k: usize| 4.0 / ((2.0 * k as f64 - 1.0) * PI).powi(2);
    // sum the bulk from the small end for accuracy
    let mut bulk = 0.0f64;
    for k in (STORE + 1..=K).rev() {
        bulk += lam(k);
    }
    // remainder sum_{k>K} (2k-1)^{-2} by the asymptotic expansion at K + 1/2
    let x = K as f64 + 0.5;
    let remainder = (4.0 / (PI * PI)) * 0.25 * (1.0 / x + 1.0 / (2.0 * x * x));
    // suffix of block sums: tail_blocks[j] = sum_{k > j} lambda_k
    let mut tail_blocks = vec![0.0f64; STORE + 1];
    tail_blocks[STORE] = bulk + remainder;
    for j in (0..STORE).rev() {
        tail_blocks[j] = tail_blocks[j + 1] + lam(j + 1);
    }
    let mut worst = 0.0f64;
    for n in 0..=1000usize {
        let j = n / 2;
        let tail2 = if n % 2 == 0 {
            2.0 * tail_blocks[j]
        } else {
            lam(j + 1) + 2.0 * tail_blocks[j + 1]
        };
        let oracle = tail2.sqrt();
        let got = jump_width_trigamma(n);
        worst = worst.max((got - oracle).abs() / oracle);
    }
    let elapsed = start.elapsed();
    assert!(
        worst < 1e-10,
        "criterion 1 FAIL: worst relative error {worst}"
    );
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "criterion 1 FAIL: took {elapsed:?}"
    );
    println!(
        "criterion 1 PASS: jump width vs 1e7-term oracle, worst rel err {worst:.2e}, {elapsed:?}"
    );
}

/// Criterion 2: Parseval anchors delta_0(jump) = 1 and delta_0(g_1) = 1/sqrt(12).
#[test]
fn c02_delta0_anchors() {
    let d0_jump = jump_width_trigamma(0);
    assert!(
        (d0_jump - 1.0).abs() < 1e-12,
        "criterion 2 FAIL: jump delta_0 = {d0_jump}"
    );
    let curve = width_curve(&sort_spectrum(gm_spectrum(1, 64)), 0).unwrap();
    let d0_g1 = curve[0].delta;
    let expect = 1.0 / 12f64.sqrt();
    assert!(
        (d0_g1 - expect).abs() < 1e-12,
        "criterion 2 FAIL: g_1 delta_0 = {d0_g1}"
    );
    println!("criterion 2 PASS: delta_0(jump) = {d0_jump}, delta_0(g_1) = {d0_g1}");
}

/// Criterion 3: POD reproduction of the jump width curve — within 1% of the
/// trigamma curve for N <= 100 at 2500^2, and within 2% at 1000^2.
#[test]
fn c03_pod_reproduces_trigamma_curve() {
    let g = jump_signal();
    for (n, tol) in [(2500usize, 0.01), (1000, 0.02)] {
        let curve = pod_curve(&g, n, n, 100);
        let mut worst = 0.0f64;
        for (i, &v) in curve.iter().enumerate() {
            let exact = jump_width_trigamma(i);
            worst = worst.max((v - exact).abs() / exact);
        }
        assert!(
            worst < tol,
            "criterion 3 FAIL: {n}x{n} worst rel err {worst} > {tol}"
        );
        println!("criterion 3 PASS ({n}x{n}): worst rel err {worst:.2e} (tol {tol})");
    }
}

/// Criterion 4: the ratio N^{-1/2} / delta_N on the analytic curve reaches
/// pi/2 within 0.5% at N = 2000.
#[test]
fn c04_ratio_reaches_half_pi() {
    let ratio = 1.0 / (2000f64.sqrt() * jump_width_trigamma(2000));
    let rel = (ratio / (PI / 2.0) - 1.0).abs();
    assert!(
        rel < 0.005,
        "criterion 4 FAIL: ratio {ratio}, rel dev {rel}"
    );
    println!(
        "criterion 4 PASS: ratio at N=2000 is {ratio} (pi/2 = {})",
        PI / 2.0
    );
}

/// Criterion 5: Theorem-style sandwich for the antiderivative family — the
/// exact delta_N(g_m) lies within the closed-form bounds at every even
/// N <= 1024 for m in 0..=4, and the fitted rate over [32, 512] is m + 1/2.
#[test]
fn c05_gm_sandwich_and_rates() {
    for m in 0..=4u32 {
        let sorted = sort_spectrum(gm_spectrum(m, 2048));
        let rows = width_curve(&sorted, 1024).unwrap();
        for n in (2..=1024usize).step_by(2) {
            let (lo, hi) = gm_bounds(m, n).unwrap();
            let d = rows[n].delta;
            assert!(
                lo <= d && d <= hi,
                "criterion 5 FAIL: m={m} N={n}: {d} outside [{lo}, {hi}]"
            );
        }
        let curve: Vec<f64> = rows.iter().map(|r| r.delta).collect();
        let rate = fit_rate(&curve, 32, 512).unwrap().value;
        let expect = m as f64 + 0.5;
        assert!(
            (rate - expect).abs() < 0.05,
            "criterion 5 FAIL: m={m} rate {rate} vs {expect}"
        );
        println!("criterion 5 PASS (m={m}): sandwich holds, rate {rate:.4} vs {expect}");
    }
}

/// Criterion 6: with odd-parity full-block bases, the worst-case and average
/// projection distances coincide (within 0.5%) for jump and g_1 at n = 2500.
#[test]
fn c06_linf_equals_l2_for_full_blocks() {
    let grid = midpoint_grid(2500);
    for (name, g) in [("jump", jump_signal()), ("g_1", antiderivative_signal(1))] {
        let m = snapshot_matrix(&g, 2500, 2500);
        for n in [2usize, 10, 50] {
            let psi = basis_matrix(Parity::Odd, n / 2, &grid).unwrap();
            let (l2, linf) = projection_distances(&m, &psi).unwrap();
            let rel = (linf / l2 - 1.0).abs();
            assert!(
                rel < 0.005,
                "criterion 6 FAIL: {name} N={n}: Linf {linf} vs L2 {l2} (rel {rel})"
            );
            println!("criterion 6 PASS ({name}, N={n}): Linf/L2 - 1 = {rel:.2e}");
        }
    }
}

/// Criterion 7: shift-isometry — block energies of g(. - mu) are
/// mu-independent (within 1e-6) across 100 sampled mu, from analytic
/// coefficients.
#[test]
fn c07_shift_isometry() {
    for (name, g) in [
        ("jump", jump_signal()),
        ("g_1", antiderivative_signal(1)),
        ("ramp m=2", hws_assemble(&ramp_signal(2, 0.04002).unwrap())),
    ] {
        let Signal::Piecewise(p) = &g else {
            unreachable!()
        };
        let base = coefficients(&g, 10).unwrap();
        let mut worst = 0.0f64;
        for i in 0..100 {
            let mu = (i as f64 + 0.5) / 100.0;
            let shifted = Signal::Piecewise(p.shift_periodic(-mu));
            let c = coefficients(&shifted, 10).unwrap();
            for k in 1..=10 {
                worst = worst.max((c.energy(k) - base.energy(k)).abs());
            }
        }
        assert!(
            worst < 1e-6,
            "criterion 7 FAIL: {name} energy drift {worst}"
        );
        println!("criterion 7 PASS ({name}): max block-energy drift {worst:.2e}");
    }
}

/// Criterion 8: fitted ramp steepness reproduces the reference table within
/// 2e-3 for m = 1..5.
#[test]
fn c08_epsilon_table() {
    let expect = [0.03316, 0.04002, 0.04592, 0.05116, 0.05592];
    for (m, &e) in (1..=5u32).zip(&expect) {
        let fit = fit_epsilon(m).unwrap();
        assert!(
            (fit.value - e).abs() < 2e-3,
            "criterion 8 FAIL: m={m} eps {} vs {e}",
            fit.value
        );
        println!(
            "criterion 8 PASS (m={m}): eps = {:.5} (expected {e})",
            fit.value
        );
    }
}

/// Criterion 9: POD curves of the assembled ramps fit the rates m + 3/2
/// within 0.15 over [32, 512], with compensated-constant residual < 0.15
/// on the asymptotic part [128, 512] of the window.
///
/// A C^m ramp has a jump in its (m+1)-st derivative, so its block energies
/// decay like k^{-2(m+2)} and the width curve like N^{-(m+3/2)}.
#[test]
fn c09_ramp_rates() {
    let eps_table = [0.025, 0.03316, 0.04002, 0.04592];
    for (m, &eps) in (0..=3u32).zip(&eps_table) {
        let g = hws_assemble(&ramp_signal(m, eps).unwrap());
        let curve = pod_curve(&g, 2500, 2500, 512);
        let expect = m as f64 + 1.5;
        let rate = fit_rate(&curve, 32, 512).unwrap().value;
        assert!(
            (rate - expect).abs() < 0.15,
            "criterion 9 FAIL: m={m} rate {rate} vs {expect}"
        );
        let constant = fit_constant(&curve, expect, 128, 512).unwrap();
        assert!(
            constant.residual < 0.15,
            "criterion 9 FAIL: m={m} compensated residual {}",
            constant.residual
        );
        println!(
            "criterion 9 PASS (m={m}): rate {rate:.3} vs {expect}, constant residual {:.3}",
            constant.residual
        );
    }
}

/// Criterion 10: steeper q_0 ramps share the 3/2 decay rate (within 0.05)
/// while the fitted constants strictly decrease with epsilon.
///
/// The rate is fitted over [64, 256], past the jump-like preasymptotic
/// regime of the steepest ramp but before grid-resolution effects; the
/// constants are fitted on the asymptotic tail [128, 512].
#[test]
fn c10_steepness_rates_and_constants() {
    let eps_list = [0.2, 0.1, 0.05, 0.025];
    let mut rates = Vec::new();
    let mut constants = Vec::new();
    for &eps in &eps_list {
        let g = hws_assemble(&ramp_signal(0, eps).unwrap());
        let curve = pod_curve(&g, 2500, 2500, 512);
        rates.push(fit_rate(&curve, 64, 256).unwrap().value);
        constants.push(fit_constant(&curve, 1.5, 128, 512).unwrap().value);
    }
    for (i, &r) in rates.iter().enumerate() {
        for &r2 in &rates[i + 1..] {
            assert!(
                (r - r2).abs() < 0.05,
                "criterion 10 FAIL: rates {rates:?} disagree"
            );
        }
    }
    // eps_list is decreasing, so constants must increase along the list
    for w in constants.windows(2) {
        assert!(
            w[1] > w[0],
            "criterion 10 FAIL: constants {constants:?} not strictly decreasing in eps"
        );
    }
    println!("criterion 10 PASS: rates {rates:?}, constants {constants:?}");
}

/// Criterion 11: each box-convolution pass strictly increases the fitted
/// decay rate, in 1D and in the 2D tensor setup.
#[test]
fn c11_random_smoothing_rates() {
    // 1D
    let base = random_steps(20, 2024).unwrap();
    let mut rates1 = Vec::new();
    for p in 0..=3u32 {
        let g = box_convolve(&base, 0.1, p).unwrap();
        let curve = pod_curve(&g, 1000, 1000, 512);
        rates1.push(fit_rate(&curve, 32, 512).unwrap().value);
    }
    for w in rates1.windows(2) {
        assert!(
            w[1] > w[0],
            "criterion 11 FAIL: 1D rates {rates1:?} not increasing"
        );
    }
    // 2D tensor field
    let field = Field2::random_blocks(20, 10, 2024).unwrap();
    let mut rates2 = Vec::new();
    for p in 0..=3u32 {
        let f = field
            .box_convolve_x(0.1, p)
            .unwrap()
            .box_convolve_y(0.1, p)
            .unwrap();
        let m = snapshot_matrix_2d(&f, 200, 40, 320);
        let s = singular_values(&m).unwrap();
        let curve = pod_width_curve(&s, m.weight, 128);
        rates2.push(fit_rate(&curve, 16, 128).unwrap().value);
    }
    for w in rates2.windows(2) {
        assert!(
            w[1] > w[0],
            "criterion 11 FAIL: 2D rates {rates2:?} not increasing"
        );
    }
    println!("criterion 11 PASS: 1D rates {rates1:?}, 2D rates {rates2:?}");
}

/// Criterion 12: the merged-spectrum bound dominates the measured POD widths
/// of the non-HWS signal sgn + cos(2 pi x) for all N <= 200.
#[test]
fn c12_nonhws_bound_dominates_pod() {
    let g = Signal::sum(
        jump_signal(),
        Signal::Trig {
            a0: 0.0,
            terms: vec![TrigTerm {
                k: 2,
                a: 1.0,
                b: 0.0,
            }],
        },
    );
    let parts = hws_split(&coefficients(&g, 800).unwrap());
    let norm = g.l2_norm_sq().unwrap();
    let odd = spectrum(&parts, Parity::Odd, Some(2.0));
    let even = spectrum(&parts, Parity::Even, Some(norm - 2.0));
    let sorted = sort_spectrum(merge_spectra(&odd, &even).unwrap());
    let curve = pod_curve(&g, 1000, 1000, 200);
    let mut min_gap = f64::MAX;
    for (n, &delta) in curve.iter().enumerate() {
        let bound = nonhws_bound(&sorted, n).unwrap();
        assert!(
            delta <= bound + 1e-8,
            "criterion 12 FAIL: N={n}: POD {delta} above bound {bound}"
        );
        min_gap = min_gap.min(bound - delta);
    }
    println!("criterion 12 PASS: bound dominates POD, min gap {min_gap:.3e}");
}
