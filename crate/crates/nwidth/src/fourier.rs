//! Fourier coefficients on `Omega_P = (-1, 1)`, half-wave-symmetric
//! classification and splitting, and Sobolev-norm diagnostics.
//!
//! The basis is `{1/sqrt(2), cos(k pi x), sin(k pi x)}`, orthonormal in
//! `L2(Omega_P)`. Everything in this crate stores coefficients in this single
//! normalization; the sqrt(2)-scaled restriction to `Omega = (0, 1)` appears
//! only in the snapshot module's basis matrices.

use crate::signals::{wrap, Signal};
use crate::{Error, Result};
use std::f64::consts::PI;

/// How a coefficient was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Quadrature,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Analytic => write!(f, "analytic"),
            Provenance::Quadrature => write!(f, "quadrature"),
        }
    }
}

/// Truncated Fourier coefficient sequence in the `L2(Omega_P)` normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    pub a0: f64,
    /// `a[k-1] = <g, cos(k pi .)>`, k = 1..=K
    pub a: Vec<f64>,
    /// `b[k-1] = <g, sin(k pi .)>`, k = 1..=K
    pub b: Vec<f64>,
    pub provenance: Vec<Provenance>,
    pub a0_provenance: Provenance,
}

impl FourierCoefficients {
    pub fn k_max(&self) -> usize {
        self.a.len()
    }

    /// Block energy `a_k^2 + b_k^2`.
    pub fn energy(&self, k: usize) -> f64 {
        self.a[k - 1] * self.a[k - 1] + self.b[k - 1] * self.b[k - 1]
    }

    /// Parseval partial sum `a0^2 + sum_k (a_k^2 + b_k^2)`.
    pub fn parseval_sum(&self) -> f64 {
        self.a0 * self.a0 + (1..=self.k_max()).map(|k| self.energy(k)).sum::<f64>()
    }
}

/// Compute the first `k_max` Fourier coefficients of `g`.
///
/// Piecewise-polynomial and trigonometric signals use closed-form
/// integration; anything else falls back to adaptive composite
/// Gauss-Legendre quadrature, which errors out if the tolerance is not
/// reached.
pub fn coefficients(g: &Signal, k_max: usize) -> Result<FourierCoefficients> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    match g {
        Signal::Piecewise(p) => {
            let a0 = p.integral() / std::f64::consts::SQRT_2;
            let a = (1..=k_max).map(|k| p.fourier_cos(k)).collect();
            let b = (1..=k_max).map(|k| p.fourier_sin(k)).collect();
            Ok(FourierCoefficients {
                a0,
                a,
                b,
                provenance: vec![Provenance::Analytic; k_max],
                a0_provenance: Provenance::Analytic,
            })
        }
        Signal::Trig { a0, terms } => {
            let mut a = vec![0.0; k_max];
            let mut b = vec![0.0; k_max];
            for t in terms {
                if t.k >= 1 && t.k <= k_max {
                    a[t.k - 1] += t.a;
                    b[t.k - 1] += t.b;
                }
            }
            Ok(FourierCoefficients {
                a0: *a0,
                a,
                b,
                provenance: vec![Provenance::Analytic; k_max],
                a0_provenance: Provenance::Analytic,
            })
        }
        Signal::Sum(x, y) => {
            let cx = coefficients(x, k_max)?;
            let cy = coefficients(y, k_max)?;
            let merge = |p: Provenance, q: Provenance| {
                if p == Provenance::Quadrature || q == Provenance::Quadrature {
                    Provenance::Quadrature
                } else {
                    Provenance::Analytic
                }
            };
            Ok(FourierCoefficients {
                a0: cx.a0 + cy.a0,
                a: cx.a.iter().zip(&cy.a).map(|(u, v)| u + v).collect(),
                b: cx.b.iter().zip(&cy.b).map(|(u, v)| u + v).collect(),
                provenance: cx
                    .provenance
                    .iter()
                    .zip(&cy.provenance)
                    .map(|(&p, &q)| merge(p, q))
                    .collect(),
                a0_provenance: merge(cx.a0_provenance, cy.a0_provenance),
            })
        }
        Signal::SigmoidHws { .. } => quadrature_coefficients(g, k_max),
    }
}

/// Abscissae and weights of 10-point Gauss-Legendre on [-1, 1].
const GL10_X: [f64; 10] = [
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
const GL10_W: [f64; 10] = [
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

/// Composite 10-point Gauss-Legendre over panels between the given nodes.
fn composite_gl<F: Fn(f64) -> f64>(f: &F, nodes: &[f64]) -> f64 {
    let mut total = 0.0;
    for w in nodes.windows(2) {
        let half = 0.5 * (w[1] - w[0]);
        let mid = 0.5 * (w[0] + w[1]);
        let mut s = 0.0;
        for (x, wt) in GL10_X.iter().zip(&GL10_W) {
            s += wt * f(mid + half * x);
        }
        total += half * s;
    }
    total
}

fn panel_nodes(breaks: &[f64], per_unit: usize) -> Vec<f64> {
    let mut nodes = Vec::new();
    for w in breaks.windows(2) {
        let len = w[1] - w[0];
        let n = ((len * per_unit as f64).ceil() as usize).max(1);
        for i in 0..n {
            nodes.push(w[0] + len * i as f64 / n as f64);
        }
    }
    nodes.push(*breaks.last().unwrap());
    nodes
}

/// Adaptive composite quadrature for one inner product, refined until two
/// successive resolutions agree.
fn adaptive_inner<F: Fn(f64) -> f64>(f: F, breaks: &[f64], k: usize, what: &str) -> Result<f64> {
    let tol = 1e-11;
    // at least 20 nodes per oscillation of mode k: panel length <= 1/k
    let mut per_unit = (2 * k).max(8);
    let mut prev = composite_gl(&f, &panel_nodes(breaks, per_unit));
    for _ in 0..6 {
        per_unit *= 2;
        let next = composite_gl(&f, &panel_nodes(breaks, per_unit));
        let diff = (next - prev).abs();
        if diff <= tol * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNotConverged {
        what: what.to_string(),
        achieved: f64::NAN,
        requested: tol,
    })
}

fn quadrature_coefficients(g: &Signal, k_max: usize) -> Result<FourierCoefficients> {
    let breaks = g.breakpoints();
    let a0 = adaptive_inner(|x| g.eval(x), &breaks, 1, "a0")? / std::f64::consts::SQRT_2;
    let mut a = Vec::with_capacity(k_max);
    let mut b = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let om = k as f64 * PI;
        a.push(adaptive_inner(
            |x| g.eval(x) * (om * x).cos(),
            &breaks,
            k,
            "a_k",
        )?);
        b.push(adaptive_inner(
            |x| g.eval(x) * (om * x).sin(),
            &breaks,
            k,
            "b_k",
        )?);
    }
    Ok(FourierCoefficients {
        a0,
        a,
        b,
        provenance: vec![Provenance::Quadrature; k_max],
        a0_provenance: Provenance::Quadrature,
    })
}

/// Half-wave symmetry class of a signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hws {
    Even,
    Odd,
    None,
}

/// Default classification tolerance for exactly-represented signals.
pub const HWS_TOL_ANALYTIC: f64 = 1e-9;
/// Default classification tolerance for quadrature-backed signals.
pub const HWS_TOL_QUADRATURE: f64 = 1e-6;

/// Classify `g` as even/odd half-wave symmetric by sampling
/// `g(x) -+ g(x+1)` on `(-1, 0)`.
pub fn hws_classify(g: &Signal, tol: f64) -> Hws {
    assert!(tol > 0.0);
    let mut xs: Vec<f64> = (0..2000)
        .map(|i| -1.0 + (i as f64 + 0.5) / 2000.0)
        .collect();
    for b in g.breakpoints() {
        for cand in [wrap(b), wrap(b) - 1.0, wrap(b + 1.0) - 1.0] {
            if cand > -1.0 && cand < 0.0 {
                xs.push(cand);
            }
        }
    }
    let mut sup_odd: f64 = 0.0;
    let mut sup_even: f64 = 0.0;
    for &x in &xs {
        let v = g.eval(x);
        let w = g.eval(x + 1.0);
        sup_odd = sup_odd.max((v + w).abs());
        sup_even = sup_even.max((v - w).abs());
    }
    if sup_even <= tol && sup_even <= sup_odd {
        Hws::Even
    } else if sup_odd <= tol {
        Hws::Odd
    } else {
        Hws::None
    }
}

/// Even/odd split of a coefficient sequence: the even part holds `a0` and the
/// even-index modes `(a_{2k}, b_{2k})`, the odd part the odd-index modes.
#[derive(Debug, Clone, PartialEq)]
pub struct HwsParts {
    pub a0: f64,
    /// `even_a[k-1] = a_{2k}` etc.
    pub even_a: Vec<f64>,
    pub even_b: Vec<f64>,
    /// `odd_a[k-1] = a_{2k-1}` etc.
    pub odd_a: Vec<f64>,
    pub odd_b: Vec<f64>,
    pub a0_provenance: Provenance,
    pub even_provenance: Vec<Provenance>,
    pub odd_provenance: Vec<Provenance>,
}

pub fn hws_split(c: &FourierCoefficients) -> HwsParts {
    let k_max = c.k_max();
    let mut parts = HwsParts {
        a0: c.a0,
        even_a: Vec::new(),
        even_b: Vec::new(),
        odd_a: Vec::new(),
        odd_b: Vec::new(),
        a0_provenance: c.a0_provenance,
        even_provenance: Vec::new(),
        odd_provenance: Vec::new(),
    };
    for k in 1..=k_max {
        if k % 2 == 0 {
            parts.even_a.push(c.a[k - 1]);
            parts.even_b.push(c.b[k - 1]);
            parts.even_provenance.push(c.provenance[k - 1]);
        } else {
            parts.odd_a.push(c.a[k - 1]);
            parts.odd_b.push(c.b[k - 1]);
            parts.odd_provenance.push(c.provenance[k - 1]);
        }
    }
    parts
}

/// Inverse of [`hws_split`]; exact on coefficient sequences.
pub fn hws_reassemble(p: &HwsParts) -> FourierCoefficients {
    let k_max = p.even_a.len() + p.odd_a.len();
    let mut a = Vec::with_capacity(k_max);
    let mut b = Vec::with_capacity(k_max);
    let mut provenance = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        if k % 2 == 0 {
            a.push(p.even_a[k / 2 - 1]);
            b.push(p.even_b[k / 2 - 1]);
            provenance.push(p.even_provenance[k / 2 - 1]);
        } else {
            a.push(p.odd_a[(k - 1) / 2]);
            b.push(p.odd_b[(k - 1) / 2]);
            provenance.push(p.odd_provenance[(k - 1) / 2]);
        }
    }
    FourierCoefficients {
        a0: p.a0,
        a,
        b,
        provenance,
        a0_provenance: p.a0_provenance,
    }
}

impl HwsParts {
    /// Energy of even-parity block k (`a_{2k}^2 + b_{2k}^2`).
    pub fn even_energy(&self, k: usize) -> f64 {
        self.even_a[k - 1] * self.even_a[k - 1] + self.even_b[k - 1] * self.even_b[k - 1]
    }

    /// Energy of odd-parity block k (`a_{2k-1}^2 + b_{2k-1}^2`).
    pub fn odd_energy(&self, k: usize) -> f64 {
        self.odd_a[k - 1] * self.odd_a[k - 1] + self.odd_b[k - 1] * self.odd_b[k - 1]
    }
}

/// Partial sums of the weighted Sobolev sequence norm
/// `sum_k (1 + k^2)^r (a_k^2 + b_k^2)`.
///
/// Boundedness of the sequence (inspected by the caller) indicates membership
/// `g` in `H^r`; no finite truncation can decide it, so this is a diagnostic,
/// not a boolean.
pub fn sobolev_tail_diagnostic(c: &FourierCoefficients, r: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(c.k_max());
    let mut sum = 0.0;
    for k in 1..=c.k_max() {
        let kf = k as f64;
        sum += (1.0 + kf * kf).powf(r) * c.energy(k);
        out.push(sum);
    }
    out
}
