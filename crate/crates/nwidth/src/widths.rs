//! Analytic N-width engine: eigen-spectra of the shift manifold, optimal
//! sorting, exact width formulas, trigamma evaluation, and decay bounds.
//!
//! For half-wave symmetric data the correlation operator of
//! `{g(. - mu) : mu in [0, 1]}` has closed-form spectrum: one eigenvalue
//! `lambda_k = (a_k^2 + b_k^2) / 4` of multiplicity two per retained Fourier
//! frequency, plus (even parity) the constant-mode eigenvalue
//! `(int_Omega g)^2`. Widths are tail sums of the nonincreasingly sorted
//! flattened eigenvalue list.

use crate::fourier::HwsParts;
use crate::{Error, Result};
use std::f64::consts::{E, PI};

// ---------------------------------------------------------------------------
// trigamma
// ---------------------------------------------------------------------------

/// Trigamma function `psi'(x)` for `x > 0`, relative error below 1e-12.
///
/// Uses the recurrence `psi'(x) = psi'(x+1) + 1/x^2` to lift the argument to
/// `x >= 10`, then the asymptotic expansion
/// `1/x + 1/(2x^2) + sum_j B_{2j} x^{-2j-1}` truncated after the `x^{-15}`
/// term (eight series terms; the first omitted term is below 1e-15 relative
/// at x = 10).
pub fn trigamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "trigamma requires x > 0, got {x}"
        )));
    }
    let mut acc = 0.0;
    let mut z = x;
    while z < 10.0 {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    // Bernoulli numbers B_2..B_14 over the respective factors
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let tail = inv2
        * (-1.0 / 30.0
            + inv2
                * (1.0 / 42.0
                    + inv2
                        * (-1.0 / 30.0
                            + inv2
                                * (5.0 / 66.0 + inv2 * (-691.0 / 2730.0 + inv2 * (7.0 / 6.0))))));
    let series = inv * (1.0 + inv * (0.5 + inv * (1.0 / 6.0 + tail)));
    Ok(acc + series)
}

// ---------------------------------------------------------------------------
// spectra
// ---------------------------------------------------------------------------

/// Parity of a half-wave symmetric spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// One frequency block: Fourier index `freq`, block energy
/// `e = a_freq^2 + b_freq^2`, eigenvalue `e/4` with multiplicity two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub freq: usize,
    pub energy: f64,
}

impl Block {
    pub fn eigenvalue(&self) -> f64 {
        self.energy / 4.0
    }
}

/// Eigenvalue mass beyond the stored blocks (flattened, i.e. counting the
/// multiplicity two).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailModel {
    /// Blocks continue as `lambda_k = 4((2k-1)pi)^(-2(m+1))`; evaluated in
    /// closed form via odd-power tail sums.
    GmClosedForm { m: u32 },
    /// Fixed remaining mass. `exact` records whether it comes from an exact
    /// norm (Parseval) or a truncation-plus-bound estimate.
    Remainder { mass: f64, exact: bool },
}

/// Spectrum of the manifold correlation operator.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum {
    /// `None` marks a merged (both-parity) spectrum, usable only for bounds.
    pub parity: Option<Parity>,
    /// Constant-mode eigenvalue `(int_Omega g)^2`; zero for pure odd parity.
    pub lambda_const: f64,
    pub blocks: Vec<Block>,
    pub tail: TailModel,
}

impl EigenSpectrum {
    /// Flattened eigenvalue mass beyond the stored blocks.
    pub fn tail_mass(&self) -> f64 {
        match self.tail {
            TailModel::GmClosedForm { m } => {
                let s = 2.0 * (m as f64 + 1.0);
                8.0 * PI.powf(-s) * odd_power_tail(s, self.blocks.len() + 1)
            }
            TailModel::Remainder { mass, .. } => mass,
        }
    }

    /// Total flattened mass `lambda_const + 2 sum lambda_k` including the
    /// tail; equals `int_P ||u_mu||^2 dmu` for half-wave symmetric data.
    pub fn total_mass(&self) -> f64 {
        self.lambda_const
            + self
                .blocks
                .iter()
                .map(|b| 2.0 * b.eigenvalue())
                .sum::<f64>()
            + self.tail_mass()
    }
}

/// Build a pure-parity spectrum from split Fourier coefficients.
///
/// Odd parity keeps the odd-index blocks (frequencies `2k-1`), even parity
/// the even-index blocks (frequencies `2k`) plus the constant mode
/// `lambda_const = (int_Omega g)^2 = a0^2 / 2`. If the exact squared
/// `L2(Omega_P)` norm is supplied, the truncated mass beyond the stored
/// blocks is attached as an exact remainder.
pub fn spectrum(parts: &HwsParts, parity: Parity, norm_sq: Option<f64>) -> EigenSpectrum {
    let (blocks, lambda_const): (Vec<Block>, f64) = match parity {
        Parity::Odd => (
            (1..=parts.odd_a.len())
                .map(|k| Block {
                    freq: 2 * k - 1,
                    energy: parts.odd_energy(k),
                })
                .collect(),
            0.0,
        ),
        Parity::Even => (
            (1..=parts.even_a.len())
                .map(|k| Block {
                    freq: 2 * k,
                    energy: parts.even_energy(k),
                })
                .collect(),
            parts.a0 * parts.a0 / 2.0,
        ),
    };
    let tail = match norm_sq {
        Some(nsq) => {
            // total flattened mass of a pure-parity signal is ||g||^2 / 2
            let stored: f64 = lambda_const + blocks.iter().map(|b| b.energy / 2.0).sum::<f64>();
            TailModel::Remainder {
                mass: (0.5 * nsq - stored).max(0.0),
                exact: true,
            }
        }
        None => TailModel::Remainder {
            mass: 0.0,
            exact: false,
        },
    };
    EigenSpectrum {
        parity: Some(parity),
        lambda_const,
        blocks,
        tail,
    }
}

/// Closed-form odd-parity spectrum of the antiderivative family `g_m`
/// (`m = 0` is the sign datum): `lambda_k = 4((2k-1)pi)^(-2(m+1))`.
pub fn gm_spectrum(m: u32, k_max: usize) -> EigenSpectrum {
    let s = 2.0 * (m as f64 + 1.0);
    let blocks = (1..=k_max)
        .map(|k| {
            let freq = 2 * k - 1;
            Block {
                freq,
                energy: 16.0 * (freq as f64 * PI).powf(-s),
            }
        })
        .collect();
    EigenSpectrum {
        parity: Some(Parity::Odd),
        lambda_const: 0.0,
        blocks,
        tail: TailModel::GmClosedForm { m },
    }
}

/// Closed-form spectrum of the jump datum `g = sgn`.
pub fn jump_spectrum(k_max: usize) -> EigenSpectrum {
    gm_spectrum(0, k_max)
}

/// Merge an odd and an even pure-parity spectrum into a both-parity spectrum
/// for the non-HWS upper bound. Tails collapse to a fixed remainder mass.
pub fn merge_spectra(a: &EigenSpectrum, b: &EigenSpectrum) -> Result<EigenSpectrum> {
    match (a.parity, b.parity) {
        (Some(Parity::Odd), Some(Parity::Even)) | (Some(Parity::Even), Some(Parity::Odd)) => {}
        _ => {
            return Err(Error::InvalidParameter(
                "merge requires one odd and one even pure-parity spectrum".into(),
            ))
        }
    }
    let exact = |s: &EigenSpectrum| match s.tail {
        TailModel::GmClosedForm { .. } => true,
        TailModel::Remainder { exact, .. } => exact,
    };
    let mut blocks = a.blocks.clone();
    blocks.extend(b.blocks.iter().copied());
    Ok(EigenSpectrum {
        parity: None,
        lambda_const: a.lambda_const + b.lambda_const,
        blocks,
        tail: TailModel::Remainder {
            mass: a.tail_mass() + b.tail_mass(),
            exact: exact(a) && exact(b),
        },
    })
}

// ---------------------------------------------------------------------------
// sorting
// ---------------------------------------------------------------------------

/// Spectrum with its blocks in nonincreasing-energy order and the flattened
/// eigenvalue list with suffix sums precomputed.
#[derive(Debug, Clone)]
pub struct SortedSpectrum {
    spectrum: EigenSpectrum,
    /// 1-based original block indices in sorted order.
    permutation: Vec<usize>,
    /// Flattened nonincreasing eigenvalues: each block twice, the constant
    /// mode (if positive-parity-relevant) once, placed by value.
    flattened: Vec<f64>,
    /// `suffix[i] = sum(flattened[i..]) + tail mass`, accumulated from the
    /// small end for accuracy.
    suffix: Vec<f64>,
}

pub fn sort_spectrum(s: EigenSpectrum) -> SortedSpectrum {
    // entries: (value, tie key, original 1-based block index or 0 for const)
    let mut entries: Vec<(f64, usize, usize)> = Vec::with_capacity(2 * s.blocks.len() + 1);
    if s.lambda_const > 0.0 || s.parity != Some(Parity::Odd) {
        entries.push((s.lambda_const, 0, 0));
    }
    for (i, b) in s.blocks.iter().enumerate() {
        let lam = b.eigenvalue();
        entries.push((lam, b.freq, i + 1));
        entries.push((lam, b.freq, i + 1));
    }
    // nonincreasing by value; ties broken by ascending frequency (const
    // counts as frequency 0 and therefore leads its ties)
    entries.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then_with(|| x.1.cmp(&y.1)));
    let mut permutation = Vec::with_capacity(s.blocks.len());
    for &(_, _, idx) in &entries {
        if idx > 0 && !permutation.contains(&idx) {
            permutation.push(idx);
        }
    }
    let flattened: Vec<f64> = entries.iter().map(|e| e.0).collect();
    let tail_mass = s.tail_mass();
    let mut suffix = vec![0.0; flattened.len() + 1];
    suffix[flattened.len()] = tail_mass;
    for i in (0..flattened.len()).rev() {
        suffix[i] = suffix[i + 1] + flattened[i];
    }
    SortedSpectrum {
        spectrum: s,
        permutation,
        flattened,
        suffix,
    }
}

impl SortedSpectrum {
    pub fn spectrum(&self) -> &EigenSpectrum {
        &self.spectrum
    }

    /// 1-based original block indices in sorted (nonincreasing energy) order.
    pub fn block_permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Flattened nonincreasing eigenvalue list (stored range).
    pub fn flattened(&self) -> &[f64] {
        &self.flattened
    }

    /// `sum_{k > n} lambda~_k` including the beyond-storage tail.
    ///
    /// Errors if `n` exceeds the stored range, since the sorted order is not
    /// known past it.
    pub fn tail_after(&self, n: usize) -> Result<f64> {
        if n > self.flattened.len() {
            return Err(Error::InvalidParameter(format!(
                "tail after {n} requested but only {} eigenvalues stored",
                self.flattened.len()
            )));
        }
        Ok(self.suffix[n])
    }
}

// ---------------------------------------------------------------------------
// widths
// ---------------------------------------------------------------------------

/// One row of a width curve.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthRow {
    pub n: usize,
    pub delta: f64,
    pub d_lo: f64,
    pub d_hi: f64,
    /// True when `d_N = delta_N` exactly (matched parity); false when only
    /// the bracket `[d_lo, d_hi]` is known.
    pub exact: bool,
    pub method: &'static str,
}

/// Exact L2-average width and Kolmogorov width (value or bracket) at
/// dimension `n` for a pure-parity sorted spectrum.
///
/// At matched parity (even `n` for odd parity, odd `n` for even parity, and
/// `n = 0` always, where both widths equal the mu-independent snapshot norm)
/// the two widths coincide. At mismatched parity only `delta_n` is exact and
/// `d_n` is bracketed by `[delta_n, delta at the previous matched n]`.
pub fn exact_width(s: &SortedSpectrum, n: usize) -> Result<WidthRow> {
    let parity = s.spectrum.parity.ok_or_else(|| {
        Error::Unsupported(
            "exact widths need a pure-parity spectrum; use nonhws_bound for merged spectra".into(),
        )
    })?;
    let delta = s.tail_after(n)?.sqrt();
    let matched = n == 0
        || match parity {
            Parity::Odd => n.is_multiple_of(2),
            Parity::Even => n % 2 == 1,
        };
    if matched {
        Ok(WidthRow {
            n,
            delta,
            d_lo: delta,
            d_hi: delta,
            exact: true,
            method: "exact",
        })
    } else {
        let d_hi = s.tail_after(n - 1)?.sqrt();
        Ok(WidthRow {
            n,
            delta,
            d_lo: delta,
            d_hi,
            exact: false,
            method: "bracket",
        })
    }
}

/// Width rows for `n = 0..=n_max`.
pub fn width_curve(s: &SortedSpectrum, n_max: usize) -> Result<Vec<WidthRow>> {
    (0..=n_max).map(|n| exact_width(s, n)).collect()
}

/// Exact L2-average width of the jump datum via the trigamma formula
/// `delta_N^2 = (psi'(floor(N/2) + 1/2) + psi'(floor((N+1)/2) + 1/2)) / pi^2`.
pub fn jump_width_trigamma(n: usize) -> f64 {
    let a = (n / 2) as f64 + 0.5;
    let b = n.div_ceil(2) as f64 + 0.5;
    ((trigamma(a).unwrap() + trigamma(b).unwrap()) / (PI * PI)).sqrt()
}

/// Lower and upper width bounds for the antiderivative family `g_m`:
/// `lower = 2 (2m+1)^(-1/2) pi^(-(m+1)) (N+1)^(-(2m+1)/2)`,
/// `upper = sqrt(8) pi^(-(m+1)) N^(-(2m+1)/2)`.
pub fn gm_bounds(m: u32, n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InvalidParameter("bounds need N >= 1".into()));
    }
    let mf = m as f64;
    let rate = -(2.0 * mf + 1.0) / 2.0;
    let scale = PI.powf(-(mf + 1.0));
    let lower = 2.0 / (2.0 * mf + 1.0).sqrt() * scale * (n as f64 + 1.0).powf(rate);
    let upper = 8.0_f64.sqrt() * scale * (n as f64).powf(rate);
    Ok((lower, upper))
}

/// Upper bound on the Kolmogorov width for general (non-HWS) data:
/// `d_N^2 <= 2 sum_{k > N} lambda~_k` over the merged sorted spectrum.
pub fn nonhws_bound(s: &SortedSpectrum, n: usize) -> Result<f64> {
    Ok((2.0 * s.tail_after(n)?).sqrt())
}

/// Corollary variant bounding `d_{2N}`: `d_{2N}^2 <= 2 sum_{k > N} lambda_k`
/// over the sorted block eigenvalues (constant mode counted as one entry).
pub fn nonhws_bound_corollary(s: &SortedSpectrum, n: usize) -> Result<f64> {
    let mut lams: Vec<f64> = s.spectrum.blocks.iter().map(|b| b.eigenvalue()).collect();
    if s.spectrum.lambda_const > 0.0 || s.spectrum.parity != Some(Parity::Odd) {
        lams.push(s.spectrum.lambda_const);
    }
    lams.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if n > lams.len() {
        return Err(Error::InvalidParameter(format!(
            "block tail after {n} requested but only {} blocks stored",
            lams.len()
        )));
    }
    let tail: f64 = lams[n..].iter().rev().sum::<f64>() + s.spectrum.tail_mass();
    Ok((2.0 * tail).sqrt())
}

// ---------------------------------------------------------------------------
// decay bounds
// ---------------------------------------------------------------------------

/// Base of the exponential width decay for data with holomorphic extension:
/// `d = pi e / 2`.
pub fn exp_decay_base() -> f64 {
    PI * E / 2.0
}

/// Prefactor of the exponential width bound: `K = sqrt(32 e / pi)`.
pub fn exp_decay_factor() -> f64 {
    (32.0 * E / PI).sqrt()
}

/// A width decay bound curve `N -> bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayBound {
    /// `c * N^(-r)`.
    Polynomial { r: f64, c: f64 },
    /// `C * K * d^(-N)` with `d = pi e / 2`, `K = sqrt(32 e / pi)`.
    Exponential { c: f64 },
}

impl DecayBound {
    pub fn polynomial(r: f64, c: f64) -> Result<Self> {
        if r.is_nan() || r <= 0.0 {
            return Err(Error::InvalidParameter(
                "polynomial rate must be positive".into(),
            ));
        }
        Ok(DecayBound::Polynomial { r, c })
    }

    pub fn exponential(c: f64) -> Result<Self> {
        if c < 0.0 {
            return Err(Error::InvalidParameter(
                "exponential constant must be >= 0".into(),
            ));
        }
        Ok(DecayBound::Exponential { c })
    }

    pub fn eval(&self, n: usize) -> Result<f64> {
        match *self {
            DecayBound::Polynomial { r, c } => {
                if n == 0 {
                    return Err(Error::InvalidParameter(
                        "polynomial bound undefined at N = 0".into(),
                    ));
                }
                Ok(c * (n as f64).powf(-r))
            }
            DecayBound::Exponential { c } => {
                Ok(c * exp_decay_factor() * exp_decay_base().powi(-(n as i32)))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// tail sums
// ---------------------------------------------------------------------------

/// `sum_{k >= k0} (2k - 1)^(-s)` for `s > 1`, to near machine precision.
///
/// Sums roughly a thousand terms directly, then closes with Euler-Maclaurin:
/// `sum_{k >= K} f(k) = int_K^inf f + f(K)/2 - f'(K)/12 + f'''(K)/720 + ...`,
/// whose first omitted term is far below 1e-15 relative at K ~ 1000.
pub fn odd_power_tail(s: f64, k0: usize) -> f64 {
    assert!(s > 1.0 && k0 >= 1);
    let big_k = k0 + 1000;
    let mut direct = 0.0;
    for k in (k0..big_k).rev() {
        direct += (2.0 * k as f64 - 1.0).powf(-s);
    }
    let y = 2.0 * big_k as f64 - 1.0; // f(K) = y^(-s)
    let integral = y.powf(1.0 - s) / (2.0 * (s - 1.0));
    let half = 0.5 * y.powf(-s);
    let d1 = s * y.powf(-s - 1.0) / 6.0; // -f'(K)/12
    let d3 = -s * (s + 1.0) * (s + 2.0) * y.powf(-s - 3.0) / 90.0; // f'''(K)/720
    direct + integral + half + d1 + d3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{coefficients, hws_split};
    use crate::signals::{
        antiderivative_signal, hws_assemble, jump_signal, ramp_signal, Signal, TrigTerm,
    };
    use approx::assert_abs_diff_eq;

    #[test]
    fn trigamma_identities() {
        let half = trigamma(0.5).unwrap();
        assert!((half - PI * PI / 2.0).abs() / half < 1e-13);
        let one = trigamma(1.0).unwrap();
        assert!((one - PI * PI / 6.0).abs() / one < 1e-13);
        assert!(trigamma(0.0).is_err());
        assert!(trigamma(-3.0).is_err());
    }

    #[test]
    fn trigamma_recurrence() {
        // deterministic pseudo-random arguments spanning small and large x
        let mut x = 0.137;
        for _ in 0..200 {
            let lhs = trigamma(x).unwrap() - trigamma(x + 1.0).unwrap();
            let rhs = 1.0 / (x * x);
            assert!(
                (lhs - rhs).abs() / rhs < 1e-12,
                "recurrence fails at x = {x}"
            );
            x = (x * 9301.0 + 49297.0) % 47.0 + 0.05;
        }
    }

    #[test]
    fn odd_power_tail_reference_values() {
        // full sums: sum (2k-1)^(-2) = pi^2/8, sum (2k-1)^(-4) = pi^4/96
        assert_abs_diff_eq!(odd_power_tail(2.0, 1), PI * PI / 8.0, epsilon = 1e-14);
        assert_abs_diff_eq!(odd_power_tail(4.0, 1), PI.powi(4) / 96.0, epsilon = 1e-15);
        // consistency of the split
        let whole = odd_power_tail(2.0, 1);
        let head: f64 = (1..=500).map(|k| (2.0 * k as f64 - 1.0).powi(-2)).sum();
        assert_abs_diff_eq!(whole - head, odd_power_tail(2.0, 501), epsilon = 1e-15);
    }

    #[test]
    fn jump_width_anchors() {
        assert_abs_diff_eq!(jump_width_trigamma(0), 1.0, epsilon = 1e-12);
        let expect = (1.0 - 8.0 / (PI * PI)).sqrt();
        assert_abs_diff_eq!(jump_width_trigamma(2), expect, epsilon = 1e-12);
        // large-N asymptotics: sqrt(N) * delta_N -> 2/pi
        let n = 200_000;
        let scaled = (n as f64).sqrt() * jump_width_trigamma(n);
        assert!((scaled - 2.0 / PI).abs() < 1e-5, "scaled width {scaled}");
    }

    #[test]
    fn exact_width_matches_trigamma() {
        let s = sort_spectrum(jump_spectrum(700));
        for n in 0..=1000 {
            let row = exact_width(&s, n).unwrap();
            let reference = jump_width_trigamma(n);
            assert!(
                (row.delta - reference).abs() / reference < 1e-12,
                "mismatch at N = {n}: {} vs {reference}",
                row.delta
            );
        }
    }

    #[test]
    fn gm_anchor_values() {
        let s1 = sort_spectrum(gm_spectrum(1, 64));
        let d0 = exact_width(&s1, 0).unwrap().delta;
        assert_abs_diff_eq!(d0, 1.0 / 12.0_f64.sqrt(), epsilon = 1e-14);
        // delta_4 of the jump: tail after dropping the first two blocks
        let s0 = sort_spectrum(jump_spectrum(64));
        let expect = (1.0 - 8.0 / (PI * PI) * (1.0 + 1.0 / 9.0)).sqrt();
        assert_abs_diff_eq!(exact_width(&s0, 4).unwrap().delta, expect, epsilon = 1e-14);
    }

    #[test]
    fn gm_spectrum_matches_coefficients() {
        for m in 0..=2u32 {
            let g = antiderivative_signal(m);
            let parts = hws_split(&coefficients(&g, 40).unwrap());
            let from_coeffs = spectrum(&parts, Parity::Odd, Some(g.l2_norm_sq().unwrap()));
            let closed = gm_spectrum(m, from_coeffs.blocks.len());
            for (a, b) in from_coeffs.blocks.iter().zip(&closed.blocks) {
                assert_eq!(a.freq, b.freq);
                assert_abs_diff_eq!(a.energy, b.energy, epsilon = 1e-13);
            }
            assert_abs_diff_eq!(from_coeffs.tail_mass(), closed.tail_mass(), epsilon = 1e-12);
        }
    }

    #[test]
    fn sorting_rules() {
        let spec = EigenSpectrum {
            parity: Some(Parity::Odd),
            lambda_const: 0.0,
            blocks: vec![
                Block {
                    freq: 1,
                    energy: 1.0,
                },
                Block {
                    freq: 3,
                    energy: 3.0,
                },
                Block {
                    freq: 5,
                    energy: 2.0,
                },
            ],
            tail: TailModel::Remainder {
                mass: 0.0,
                exact: true,
            },
        };
        let sorted = sort_spectrum(spec);
        assert_eq!(sorted.block_permutation(), &[2, 3, 1]);

        // equal energies: lower frequency first
        let tie = EigenSpectrum {
            parity: Some(Parity::Odd),
            lambda_const: 0.0,
            blocks: vec![
                Block {
                    freq: 9,
                    energy: 2.0,
                },
                Block {
                    freq: 3,
                    energy: 2.0,
                },
            ],
            tail: TailModel::Remainder {
                mass: 0.0,
                exact: true,
            },
        };
        assert_eq!(sort_spectrum(tie).block_permutation(), &[2, 1]);

        // jump spectrum needs no sorting
        let jump = sort_spectrum(jump_spectrum(16));
        assert_eq!(jump.block_permutation(), (1..=16).collect::<Vec<_>>());
    }

    #[test]
    fn constant_mode_placement() {
        // constant signal c: lambda_const = c^2, no blocks
        let c = 0.8;
        let g = Signal::Piecewise(crate::signals::PiecewisePoly::constant(c));
        let parts = hws_split(&coefficients(&g, 8).unwrap());
        let spec = spectrum(&parts, Parity::Even, Some(g.l2_norm_sq().unwrap()));
        assert_abs_diff_eq!(spec.lambda_const, c * c, epsilon = 1e-14);
        assert!(spec.blocks.iter().all(|b| b.energy < 1e-14));
        let sorted = sort_spectrum(spec);
        assert_abs_diff_eq!(sorted.flattened()[0], c * c, epsilon = 1e-14);
        // delta_0 = |c|, delta_1 = 0 (and N = 0 is exact for the width too)
        let r0 = exact_width(&sorted, 0).unwrap();
        assert_abs_diff_eq!(r0.delta, c, epsilon = 1e-12);
        assert!(r0.exact);
        assert!(exact_width(&sorted, 1).unwrap().delta < 1e-7);
    }

    #[test]
    fn width_curve_monotone_and_bracketed() {
        let s = sort_spectrum(jump_spectrum(64));
        let curve = width_curve(&s, 50).unwrap();
        for w in curve.windows(2) {
            assert!(w[1].delta <= w[0].delta + 1e-15);
        }
        for row in &curve {
            assert!(row.d_lo <= row.d_hi + 1e-15);
            assert!(row.delta <= row.d_hi + 1e-15);
            assert_eq!(row.exact, row.n % 2 == 0);
            if !row.exact {
                // odd N: upper bracket is the previous matched width
                assert_abs_diff_eq!(row.d_hi, curve[row.n - 1].delta, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn merged_spectrum_rejected_for_exact_widths() {
        let odd = jump_spectrum(16);
        let even = EigenSpectrum {
            parity: Some(Parity::Even),
            lambda_const: 0.0,
            blocks: vec![Block {
                freq: 2,
                energy: 1.0,
            }],
            tail: TailModel::Remainder {
                mass: 0.0,
                exact: true,
            },
        };
        let merged = sort_spectrum(merge_spectra(&odd, &even).unwrap());
        assert!(matches!(
            exact_width(&merged, 2),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn gm_bound_values_and_sandwich() {
        let (lo, up) = gm_bounds(0, 4).unwrap();
        assert_abs_diff_eq!(lo, 2.0 / (PI * 5.0_f64.sqrt()), epsilon = 1e-14);
        assert_abs_diff_eq!(up, 2.0_f64.sqrt() / PI, epsilon = 1e-14);
        for m in 0..=5u32 {
            let s = sort_spectrum(gm_spectrum(m, 80));
            for n in (2..=128).step_by(2) {
                let (lo, up) = gm_bounds(m, n).unwrap();
                let d = exact_width(&s, n).unwrap().delta;
                assert!(
                    lo <= d && d <= up,
                    "sandwich fails: m={m} N={n} {lo} {d} {up}"
                );
            }
        }
        assert!(gm_bounds(1, 0).is_err());
    }

    #[test]
    fn nonhws_bound_basics() {
        let s = sort_spectrum(jump_spectrum(512));
        // N = 0: bound sqrt(2 * total mass) = sqrt(2), true width 1
        assert_abs_diff_eq!(
            nonhws_bound(&s, 0).unwrap(),
            2.0_f64.sqrt(),
            epsilon = 1e-12
        );
        assert!(nonhws_bound(&s, 1000).unwrap() < nonhws_bound(&s, 100).unwrap());
        assert!(nonhws_bound(&s, 1024).unwrap() < 0.05);
        // corollary: d_{2N} bound from block tails dominates the exact width
        for n in 1..=100 {
            let cor = nonhws_bound_corollary(&s, n).unwrap();
            assert!(exact_width(&s, 2 * n).unwrap().delta <= cor + 1e-15);
        }
    }

    #[test]
    fn mixed_signal_merged_bound() {
        // sgn + cos(2 pi x): odd jump blocks interleaved with one even block
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
        let parts = hws_split(&coefficients(&g, 400).unwrap());
        let norm = g.l2_norm_sq().unwrap();
        let odd = spectrum(&parts, Parity::Odd, Some(2.0)); // jump part norm
        let even = spectrum(&parts, Parity::Even, Some(norm - 2.0));
        let merged = merge_spectra(&odd, &even).unwrap();
        assert_abs_diff_eq!(merged.total_mass(), 0.5 * norm, epsilon = 1e-10);
        let sorted = sort_spectrum(merged);
        // brute-force merge oracle: eigenvalues 4/((2k-1)pi)^2 twice each,
        // plus 0.25 twice for the cosine block
        // stored odd blocks cover frequencies 2k-1 <= 399, i.e. k <= 200
        let mut oracle: Vec<f64> = Vec::new();
        for k in 1..=200usize {
            let lam = 4.0 / ((2.0 * k as f64 - 1.0) * PI).powi(2);
            oracle.push(lam);
            oracle.push(lam);
        }
        oracle.push(0.25);
        oracle.push(0.25);
        oracle.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (i, &lam) in oracle.iter().take(40).enumerate() {
            assert_abs_diff_eq!(sorted.flattened()[i], lam, epsilon = 1e-13);
        }
        let tail2: f64 = oracle[2..].iter().rev().sum();
        // flattened mass beyond the stored blocks: 2 sum_{k>200} 4/((2k-1)pi)^2
        let beyond = 8.0 / (PI * PI) * odd_power_tail(2.0, 201);
        let expect = (2.0 * (tail2 + beyond)).sqrt();
        assert_abs_diff_eq!(nonhws_bound(&sorted, 2).unwrap(), expect, epsilon = 1e-11);
    }

    #[test]
    fn decay_bound_values() {
        assert!((exp_decay_base() - 4.27).abs() < 0.005);
        assert!((exp_decay_factor() - 5.26).abs() < 0.005);
        let zero = DecayBound::exponential(0.0).unwrap();
        assert_eq!(zero.eval(7).unwrap(), 0.0);
        assert!(DecayBound::polynomial(-1.0, 1.0).is_err());
        // c = 1, r = 1/2 dominates the jump curve for N >= 1
        let b = DecayBound::polynomial(0.5, 1.0).unwrap();
        for n in 1..=2000 {
            assert!(jump_width_trigamma(n) <= b.eval(n).unwrap());
        }
    }

    /// Trace identity: lambda_const + 2 sum lambda = int_P ||u_mu||^2 dmu,
    /// with the right side computed independently as the exact weighted
    /// integral int_{-1}^{1} (1 - |t|) g(t)^2 dt.
    #[test]
    fn parseval_trace_identity() {
        for (g, parity) in [
            (jump_signal(), Parity::Odd),
            (antiderivative_signal(1), Parity::Odd),
            (antiderivative_signal(3), Parity::Odd),
            (hws_assemble(&ramp_signal(2, 0.05).unwrap()), Parity::Odd),
        ] {
            let Signal::Piecewise(p) = &g else {
                unreachable!()
            };
            let mut rhs = 0.0;
            let mut breaks: Vec<f64> = p.breakpoints().to_vec();
            if !breaks.contains(&0.0) {
                breaks.push(0.0);
                breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
            }
            // exact integration of (1 - |t|) g^2 piece by piece (g^2 is a
            // polynomial on each piece; 50-point Gauss would also do, but
            // high-order monomials integrate exactly here via the moments)
            for w in breaks.windows(2) {
                rhs += gauss64(|t| (1.0 - t.abs()) * p.eval(t) * p.eval(t), w[0], w[1]);
            }
            let parts = hws_split(&coefficients(&g, 2000).unwrap());
            let spec = spectrum(&parts, parity, Some(g.l2_norm_sq().unwrap()));
            assert_abs_diff_eq!(spec.total_mass(), rhs, epsilon = 1e-9);
        }
    }

    /// Shift-isometry: the Omega-restricted block energy of g(. - mu) equals
    /// e_k / 2 for every mu.
    #[test]
    fn shift_isometry_on_omega() {
        let Signal::Piecewise(p) = jump_signal() else {
            unreachable!()
        };
        let e: Vec<f64> = {
            let parts = hws_split(&coefficients(&jump_signal(), 10).unwrap());
            (1..=5).map(|k| parts.odd_energy(k)).collect()
        };
        for i in 0..20 {
            let mu = (i as f64 + 0.37) / 20.0;
            let shifted = p.shift_periodic(-mu);
            for (kk, &ek) in e.iter().enumerate() {
                let freq = 2 * kk + 1;
                let c = shifted.fourier_cos_between(freq, 0.0, 1.0);
                let s = shifted.fourier_sin_between(freq, 0.0, 1.0);
                let energy = 2.0 * (c * c + s * s);
                assert_abs_diff_eq!(energy, ek / 2.0, epsilon = 1e-10);
            }
        }
    }

    fn gauss64<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
        // composite 10-point Gauss on 16 panels: effectively exact for the
        // polynomial integrands used above
        let mut total = 0.0;
        let n = 16;
        for i in 0..n {
            let lo = a + (b - a) * i as f64 / n as f64;
            let hi = a + (b - a) * (i + 1) as f64 / n as f64;
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            const X: [f64; 10] = [
                -0.9739065285171717,
                -0.8650633666889845,
                -0.6794095682990244,
                -0.4333953941292472,
                -0.1488743389816312,
                0.1488743389816312,
                0.4333953941292472,
                0.6794095682990244,
                0.8650633666889845,
                0.9739065285171717,
            ];
            const W: [f64; 10] = [
                0.0666713443086881,
                0.1494513491505806,
                0.219_086_362_515_982,
                0.2692667193099963,
                0.2955242247147529,
                0.2955242247147529,
                0.2692667193099963,
                0.219_086_362_515_982,
                0.1494513491505806,
                0.0666713443086881,
            ];
            for (x, w) in X.iter().zip(&W) {
                total += half * w * f(mid + half * x);
            }
        }
        total
    }
}
