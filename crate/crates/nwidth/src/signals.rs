//! Catalog of initial/boundary data for the transport problem.
//!
//! All signals live on `(-1, 1)` and are evaluated everywhere through the
//! 2-periodic extension. Piecewise-polynomial kinds are carried exactly
//! (breakpoints plus per-piece monomial coefficients), so downstream Fourier
//! coefficients and integrals can be computed in closed form.

use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Breakpoints closer than this are merged when refining partitions.
const BREAK_MERGE_TOL: f64 = 1e-12;

/// Reduce `x` to the fundamental period `[-1, 1)`.
pub fn wrap(x: f64) -> f64 {
    let t = x - 2.0 * ((x + 1.0) / 2.0).floor();
    // floor can land exactly on 1.0 for x slightly below an odd integer
    if t >= 1.0 {
        t - 2.0
    } else {
        t
    }
}

// ---------------------------------------------------------------------------
// polynomial helpers (monomial coefficients, low order first)
// ---------------------------------------------------------------------------

pub(crate) fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn poly_trim(mut c: Vec<f64>) -> Vec<f64> {
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    c
}

fn poly_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    poly_trim(
        (0..n)
            .map(|i| a.get(i).copied().unwrap_or(0.0) + b.get(i).copied().unwrap_or(0.0))
            .collect(),
    )
}

fn poly_scale(c: &[f64], s: f64) -> Vec<f64> {
    c.iter().map(|ci| ci * s).collect()
}

pub(crate) fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Coefficients of `p(alpha*x + beta)`.
fn poly_compose_affine(c: &[f64], alpha: f64, beta: f64) -> Vec<f64> {
    // Horner in the affine argument, with polynomial accumulator.
    let mut acc = vec![0.0];
    for &ci in c.iter().rev() {
        acc = poly_mul(&acc, &[beta, alpha]);
        if acc.is_empty() {
            acc = vec![0.0];
        }
        acc[0] += ci;
    }
    poly_trim(acc)
}

fn poly_derivative(c: &[f64]) -> Vec<f64> {
    if c.len() <= 1 {
        return vec![0.0];
    }
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &ci)| ci * i as f64)
        .collect()
}

/// Antiderivative with zero constant term.
fn poly_antiderivative(c: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0];
    out.extend(c.iter().enumerate().map(|(i, &ci)| ci / (i + 1) as f64));
    out
}

// ---------------------------------------------------------------------------
// PiecewisePoly
// ---------------------------------------------------------------------------

/// Exact piecewise polynomial on `[-1, 1]`.
///
/// `breaks` is strictly increasing with first element `-1` and last `1`.
/// Internally `pieces[i]` holds monomial coefficients in the *local* variable
/// `u = x - mid_i` centered at the midpoint of the i-th interval; the local
/// frame keeps steep, narrow pieces (e.g. ramps with small epsilon) well
/// conditioned, which a global monomial basis is not.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly {
    breaks: Vec<f64>,
    pieces: Vec<Vec<f64>>,
}

fn validate_partition(breaks: &[f64], pieces: &[Vec<f64>]) -> Result<()> {
    if breaks.len() < 2 || pieces.len() + 1 != breaks.len() {
        return Err(Error::InvalidParameter(
            "piecewise poly needs n+1 breakpoints for n pieces".into(),
        ));
    }
    if breaks[0] != -1.0 || *breaks.last().unwrap() != 1.0 {
        return Err(Error::InvalidParameter(
            "breakpoints must start at -1 and end at 1".into(),
        ));
    }
    if breaks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "breakpoints must be strictly increasing".into(),
        ));
    }
    if pieces.iter().any(|p| p.is_empty()) {
        return Err(Error::InvalidParameter(
            "coefficient lists must be non-empty".into(),
        ));
    }
    Ok(())
}

impl PiecewisePoly {
    /// Build from per-piece coefficients in the global variable `x`.
    pub fn new(breaks: Vec<f64>, global_pieces: Vec<Vec<f64>>) -> Result<Self> {
        validate_partition(&breaks, &global_pieces)?;
        let pieces = breaks
            .windows(2)
            .zip(global_pieces)
            .map(|(w, p)| poly_compose_affine(&p, 1.0, 0.5 * (w[0] + w[1])))
            .collect();
        Ok(Self { breaks, pieces })
    }

    /// Build from per-piece coefficients already in the local midpoint frames.
    pub(crate) fn from_local(breaks: Vec<f64>, pieces: Vec<Vec<f64>>) -> Result<Self> {
        validate_partition(&breaks, &pieces)?;
        Ok(Self { breaks, pieces })
    }

    pub fn constant(c: f64) -> Self {
        Self {
            breaks: vec![-1.0, 1.0],
            pieces: vec![vec![c]],
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breaks
    }

    /// Per-piece local (midpoint-centered) monomial coefficients.
    pub fn pieces(&self) -> &[Vec<f64>] {
        &self.pieces
    }

    fn mid(&self, i: usize) -> f64 {
        0.5 * (self.breaks[i] + self.breaks[i + 1])
    }

    /// Index of the piece whose open interval contains `t` (`t` in `[-1,1)`,
    /// not equal to a breakpoint).
    fn piece_index(&self, t: f64) -> usize {
        let idx = self.breaks.partition_point(|&b| b <= t);
        idx.saturating_sub(1).min(self.pieces.len() - 1)
    }

    fn piece_value(&self, i: usize, t: f64) -> f64 {
        poly_eval(&self.pieces[i], t - self.mid(i))
    }

    /// Periodic evaluation. At a jump the midpoint of the one-sided limits is
    /// returned.
    pub fn eval(&self, x: f64) -> f64 {
        let (left, right) = self.one_sided_limits(x);
        if left == right {
            left
        } else {
            0.5 * (left + right)
        }
    }

    /// Periodic evaluation taking the right-sided limit at jumps (the
    /// sampling convention for snapshot matrices, where the midpoint value
    /// would misrepresent the almost-everywhere value of the datum).
    pub fn eval_right(&self, x: f64) -> f64 {
        self.one_sided_limits(x).1
    }

    /// One-sided limits just left/right of the (wrapped) point `x`.
    pub fn one_sided_limits(&self, x: f64) -> (f64, f64) {
        let t = wrap(x);
        let last = self.pieces.len() - 1;
        if t == -1.0 {
            return (self.piece_value(last, 1.0), self.piece_value(0, -1.0));
        }
        match self.breaks.binary_search_by(|b| b.partial_cmp(&t).unwrap()) {
            Ok(i) if i > 0 && i <= last => (self.piece_value(i - 1, t), self.piece_value(i, t)),
            _ => {
                let v = self.piece_value(self.piece_index(t), t);
                (v, v)
            }
        }
    }

    /// Exact integral over the full period `[-1, 1]`.
    pub fn integral(&self) -> f64 {
        self.breaks
            .windows(2)
            .zip(&self.pieces)
            .map(|(w, p)| {
                let anti = poly_antiderivative(p);
                let h = 0.5 * (w[1] - w[0]);
                poly_eval(&anti, h) - poly_eval(&anti, -h)
            })
            .sum()
    }

    /// Exact integral from `a` to `b`, both in `[-1, 1]`.
    pub fn integral_between(&self, a: f64, b: f64) -> f64 {
        assert!((-1.0..=1.0).contains(&a) && (-1.0..=1.0).contains(&b));
        if a > b {
            return -self.integral_between(b, a);
        }
        let mut total = 0.0;
        for (i, (w, p)) in self.breaks.windows(2).zip(&self.pieces).enumerate() {
            let lo = w[0].max(a);
            let hi = w[1].min(b);
            if lo < hi {
                let anti = poly_antiderivative(p);
                let m = self.mid(i);
                total += poly_eval(&anti, hi - m) - poly_eval(&anti, lo - m);
            }
        }
        total
    }

    /// Continuous antiderivative `F(x) = int_{-1}^x p`, as a piecewise poly.
    pub fn antiderivative(&self) -> PiecewisePoly {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut running = 0.0;
        for (w, p) in self.breaks.windows(2).zip(&self.pieces) {
            let anti = poly_antiderivative(p);
            let h = 0.5 * (w[1] - w[0]);
            let mut piece = anti.clone();
            piece[0] += running - poly_eval(&anti, -h);
            running = poly_eval(&piece, h);
            pieces.push(piece);
        }
        PiecewisePoly {
            breaks: self.breaks.clone(),
            pieces,
        }
    }

    /// Piecewise derivative (away from breakpoints).
    pub fn derivative(&self) -> PiecewisePoly {
        PiecewisePoly {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|p| poly_derivative(p)).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> PiecewisePoly {
        PiecewisePoly {
            breaks: self.breaks.clone(),
            pieces: self.pieces.iter().map(|p| poly_scale(p, s)).collect(),
        }
    }

    pub fn offset(&self, c: f64) -> PiecewisePoly {
        let mut out = self.clone();
        for p in &mut out.pieces {
            p[0] += c;
        }
        out
    }

    /// Sum on the refined common partition.
    pub fn add(&self, other: &PiecewisePoly) -> PiecewisePoly {
        let breaks = merge_breaks(&self.breaks, &other.breaks);
        let pieces = breaks
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                let i = self.piece_index(mid);
                let j = other.piece_index(mid);
                // recenter both source pieces into the new local frame
                let a = poly_compose_affine(&self.pieces[i], 1.0, mid - self.mid(i));
                let b = poly_compose_affine(&other.pieces[j], 1.0, mid - other.mid(j));
                poly_add(&a, &b)
            })
            .collect();
        PiecewisePoly { breaks, pieces }
    }

    /// The function `x -> p~(x + s)` where `p~` is the 2-periodic extension.
    pub fn shift_periodic(&self, s: f64) -> PiecewisePoly {
        let mut breaks: Vec<f64> = self
            .breaks
            .iter()
            .map(|&b| wrap(b - s))
            .chain([-1.0, 1.0])
            .collect();
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.dedup_by(|a, b| (*a - *b).abs() < BREAK_MERGE_TOL);
        if (breaks[0] + 1.0).abs() < BREAK_MERGE_TOL {
            breaks[0] = -1.0;
        }
        let last = breaks.len() - 1;
        if (breaks[last] - 1.0).abs() < BREAK_MERGE_TOL {
            breaks[last] = 1.0;
        }
        let pieces = breaks
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                let t = wrap(mid + s);
                let i = self.piece_index(t);
                // rigid motion: only the local center moves
                poly_compose_affine(&self.pieces[i], 1.0, t - self.mid(i))
            })
            .collect();
        PiecewisePoly { breaks, pieces }
    }

    /// One pass of periodic convolution with the normalized box of the given
    /// width, computed exactly. Raises the polynomial degree by one.
    pub fn box_convolve_once(&self, width: f64) -> Result<PiecewisePoly> {
        if width <= 0.0 {
            return Err(Error::InvalidParameter("box width must be positive".into()));
        }
        let mean = self.integral() / 2.0;
        let centered = self.offset(-mean);
        // periodic antiderivative of the zero-mean part
        let anti = centered.antiderivative();
        let plus = anti.shift_periodic(width / 2.0);
        let minus = anti.shift_periodic(-width / 2.0);
        Ok(plus.add(&minus.scale(-1.0)).scale(1.0 / width).offset(mean))
    }

    /// Exact squared `L2(Omega_P)` norm.
    pub fn l2_norm_sq(&self) -> f64 {
        self.breaks
            .windows(2)
            .zip(&self.pieces)
            .map(|(w, p)| {
                let anti = poly_antiderivative(&poly_mul(p, p));
                let h = 0.5 * (w[1] - w[0]);
                poly_eval(&anti, h) - poly_eval(&anti, -h)
            })
            .sum()
    }

    /// Closed-form `<p, cos(k pi .)>` over `[-1, 1]`.
    pub fn fourier_cos(&self, k: usize) -> f64 {
        self.fourier_moment_between(k, true, -1.0, 1.0)
    }

    /// Closed-form `<p, sin(k pi .)>` over `[-1, 1]`.
    pub fn fourier_sin(&self, k: usize) -> f64 {
        self.fourier_moment_between(k, false, -1.0, 1.0)
    }

    /// Closed-form `int_a^b p(x) cos(k pi x) dx` with `[a, b]` inside `[-1, 1]`.
    pub fn fourier_cos_between(&self, k: usize, a: f64, b: f64) -> f64 {
        self.fourier_moment_between(k, true, a, b)
    }

    /// Closed-form `int_a^b p(x) sin(k pi x) dx` with `[a, b]` inside `[-1, 1]`.
    pub fn fourier_sin_between(&self, k: usize, a: f64, b: f64) -> f64 {
        self.fourier_moment_between(k, false, a, b)
    }

    fn fourier_moment_between(&self, k: usize, cosine: bool, a: f64, b: f64) -> f64 {
        assert!(k >= 1);
        assert!((-1.0..=1.0).contains(&a) && (-1.0..=1.0).contains(&b) && a <= b);
        let omega = k as f64 * std::f64::consts::PI;
        let mut total = 0.0;
        for (i, (w, p)) in self.breaks.windows(2).zip(&self.pieces).enumerate() {
            let lo = w[0].max(a);
            let hi = w[1].min(b);
            if lo >= hi {
                continue;
            }
            let m = self.mid(i);
            // local frame: trig argument is omega*u + phase
            let (c_m, s_m) = trig_moments(omega, omega * m, lo - m, hi - m, p.len() - 1);
            let moments = if cosine { &c_m } else { &s_m };
            total += p.iter().zip(moments).map(|(ci, mi)| ci * mi).sum::<f64>();
        }
        total
    }
}

/// `int_a^b u^n cos(omega u + phase) du` and the sine analogue for
/// n = 0..=nmax, by the usual integration-by-parts recursion.
fn trig_moments(omega: f64, phase: f64, a: f64, b: f64, nmax: usize) -> (Vec<f64>, Vec<f64>) {
    let (sa, ca) = (omega * a + phase).sin_cos();
    let (sb, cb) = (omega * b + phase).sin_cos();
    let mut c = Vec::with_capacity(nmax + 1);
    let mut s = Vec::with_capacity(nmax + 1);
    c.push((sb - sa) / omega);
    s.push((ca - cb) / omega);
    let mut apow = a;
    let mut bpow = b;
    for n in 1..=nmax {
        let nf = n as f64;
        c.push((bpow * sb - apow * sa) / omega - nf / omega * s[n - 1]);
        s.push((apow * ca - bpow * cb) / omega + nf / omega * c[n - 1]);
        apow *= a;
        bpow *= b;
    }
    (c, s)
}

fn merge_breaks(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out.dedup_by(|x, y| (*x - *y).abs() < BREAK_MERGE_TOL);
    out
}

// ---------------------------------------------------------------------------
// Signal
// ---------------------------------------------------------------------------

/// A single term `a*cos(k pi x) + b*sin(k pi x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigTerm {
    pub k: usize,
    pub a: f64,
    pub b: f64,
}

/// An evaluable datum on `Omega_P = (-1, 1)` with period-2 extension.
#[derive(Debug, Clone, PartialEq)]
pub enum Signal {
    /// Exact piecewise polynomial.
    Piecewise(PiecewisePoly),
    /// Finite trigonometric polynomial `a0/sqrt(2) + sum terms`.
    Trig { a0: f64, terms: Vec<TrigTerm> },
    /// Odd-HWS assembly of the recursive sigmoid ramp.
    SigmoidHws { eps: f64, depth: u32 },
    /// Pointwise sum of two signals.
    Sum(Box<Signal>, Box<Signal>),
}

impl Signal {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Signal::Piecewise(p) => p.eval(x),
            Signal::Trig { a0, terms } => {
                let t = wrap(x);
                let mut v = a0 / std::f64::consts::SQRT_2;
                for term in terms {
                    let arg = term.k as f64 * std::f64::consts::PI * t;
                    v += term.a * arg.cos() + term.b * arg.sin();
                }
                v
            }
            Signal::SigmoidHws { eps, depth } => {
                let t = wrap(x);
                if t <= -0.5 {
                    -sigmoid_recursive(t + 1.0, *eps, *depth)
                } else if t <= 0.5 {
                    sigmoid_recursive(t, *eps, *depth)
                } else {
                    -sigmoid_recursive(t - 1.0, *eps, *depth)
                }
            }
            Signal::Sum(a, b) => a.eval(x) + b.eval(x),
        }
    }

    /// Evaluation with the right-sided limit at jumps; equals [`eval`] for
    /// continuous signals. Used to sample snapshot matrices, where the
    /// midpoint convention would not represent the almost-everywhere value.
    ///
    /// [`eval`]: Signal::eval
    pub fn eval_right(&self, x: f64) -> f64 {
        match self {
            Signal::Piecewise(p) => p.eval_right(x),
            Signal::Sum(a, b) => a.eval_right(x) + b.eval_right(x),
            _ => self.eval(x),
        }
    }

    /// Breakpoints / junction points in `[-1, 1]`, for sampling and quadrature.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Signal::Piecewise(p) => p.breakpoints().to_vec(),
            Signal::Trig { .. } => vec![-1.0, 1.0],
            Signal::SigmoidHws { eps, depth } => {
                let h = 0.5 * eps * (std::f64::consts::PI / 2.0).powi(*depth as i32);
                let mut b = vec![-1.0, -0.5, 0.0, 0.5, 1.0];
                for c in [-1.0, 0.0, 1.0] {
                    for e in [c - h, c + h] {
                        if (-1.0..=1.0).contains(&e) {
                            b.push(e);
                        }
                    }
                }
                b.sort_by(|x, y| x.partial_cmp(y).unwrap());
                b.dedup();
                b
            }
            Signal::Sum(a, b) => {
                let mut out = a.breakpoints();
                out.extend(b.breakpoints());
                out.sort_by(|x, y| x.partial_cmp(y).unwrap());
                out.dedup_by(|x, y| (*x - *y).abs() < BREAK_MERGE_TOL);
                out
            }
        }
    }

    /// Whether Fourier coefficients of this signal are available in closed
    /// form.
    pub fn is_analytic(&self) -> bool {
        match self {
            Signal::Piecewise(_) | Signal::Trig { .. } => true,
            Signal::SigmoidHws { .. } => false,
            Signal::Sum(a, b) => a.is_analytic() && b.is_analytic(),
        }
    }

    /// Exact squared `L2(Omega_P)` norm where available.
    pub fn l2_norm_sq(&self) -> Result<f64> {
        match self {
            Signal::Piecewise(p) => Ok(p.l2_norm_sq()),
            Signal::Trig { a0, terms } => {
                Ok(a0 * a0 + terms.iter().map(|t| t.a * t.a + t.b * t.b).sum::<f64>())
            }
            Signal::Sum(a, b) => {
                let cross = match (a.as_ref(), b.as_ref()) {
                    (Signal::Piecewise(p), Signal::Trig { a0, terms })
                    | (Signal::Trig { a0, terms }, Signal::Piecewise(p)) => {
                        let mut c = a0 / std::f64::consts::SQRT_2 * p.integral();
                        for t in terms {
                            c += t.a * p.fourier_cos(t.k) + t.b * p.fourier_sin(t.k);
                        }
                        c
                    }
                    _ => {
                        return Err(Error::Unsupported(
                            "exact norm of this signal combination".into(),
                        ))
                    }
                };
                Ok(a.l2_norm_sq()? + b.l2_norm_sq()? + 2.0 * cross)
            }
            Signal::SigmoidHws { .. } => Err(Error::Unsupported(
                "exact norm of the sigmoid signal".into(),
            )),
        }
    }

    pub fn sum(a: Signal, b: Signal) -> Signal {
        Signal::Sum(Box::new(a), Box::new(b))
    }
}

/// Recursive sigmoid ramp from -1 to 1, centered at 0, clamped outside its
/// support of half-width `eps/2 * (pi/2)^depth`.
fn sigmoid_recursive(x: f64, eps: f64, depth: u32) -> f64 {
    let m = (std::f64::consts::PI / 2.0).powi(depth as i32);
    let mut t = (2.0 * x / (eps * m)).clamp(-1.0, 1.0);
    for _ in 0..depth {
        t = (std::f64::consts::FRAC_PI_2 * t).sin();
    }
    t
}

// ---------------------------------------------------------------------------
// catalog constructors
// ---------------------------------------------------------------------------

/// The sign datum `g = sgn(x)` on `(-1, 1)`.
pub fn jump_signal() -> Signal {
    Signal::Piecewise(
        PiecewisePoly::new(vec![-1.0, 0.0, 1.0], vec![vec![-1.0], vec![1.0]]).unwrap(),
    )
}

/// The m-fold antiderivative family: `g_0 = sgn`, and
/// `g_m(x) = int_0^x g_{m-1} - 1/2 int_0^1 g_{m-1}`.
pub fn antiderivative_signal(m: u32) -> Signal {
    let mut p = match jump_signal() {
        Signal::Piecewise(p) => p,
        _ => unreachable!(),
    };
    for _ in 0..m {
        let anti = p.antiderivative(); // int_{-1}^x
        let at_zero = anti.eval(0.0);
        let half_mean = 0.5 * p.integral_between(0.0, 1.0);
        p = anti.offset(-at_zero - half_mean);
    }
    Signal::Piecewise(p)
}

/// Smoothstep coefficients, ramp regularity m = 0..=5. `RAMP_POLYS[m]` are the
/// monomial coefficients of the degree-(2m+1) polynomial taking 0 to 1 on
/// [0, 1] with m vanishing derivatives at both ends.
const RAMP_POLYS: [&[f64]; 6] = [
    &[0.0, 1.0],
    &[0.0, 0.0, 3.0, -2.0],
    &[0.0, 0.0, 0.0, 10.0, -15.0, 6.0],
    &[0.0, 0.0, 0.0, 0.0, 35.0, -84.0, 70.0, -20.0],
    &[0.0, 0.0, 0.0, 0.0, 0.0, 126.0, -420.0, 540.0, -315.0, 70.0],
    &[
        0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 462.0, -1980.0, 3465.0, -3080.0, 1386.0, -252.0,
    ],
];

/// A ramp `q` on `(-1/2, 1/2)`: 0 left of the ramp interval
/// `[-eps/2, eps/2]`, 1 right of it.
#[derive(Debug, Clone, PartialEq)]
pub enum Ramp {
    /// `q_m(x) = P_m(x/eps + 1/2)` with the degree-(2m+1) smoothstep `P_m`.
    Poly { m: u32, eps: f64 },
    /// Recursive sigmoid ramp (C-infinity), rescaled to run 0..1.
    Sigmoid { eps: f64, depth: u32 },
}

pub const DEFAULT_SIGMOID_DEPTH: u32 = 5;

/// Polynomial ramp of regularity `C^m`.
pub fn ramp_signal(m: u32, eps: f64) -> Result<Ramp> {
    if !(0.0..1.0).contains(&eps) || eps <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "ramp steepness eps must be in (0, 1), got {eps}"
        )));
    }
    if m as usize >= RAMP_POLYS.len() {
        return Err(Error::InvalidParameter(format!(
            "ramp regularity m must be in 0..=5, got {m}"
        )));
    }
    Ok(Ramp::Poly { m, eps })
}

/// Sigmoid (C-infinity) ramp with the given recursion depth.
pub fn sigmoid_ramp(eps: f64, depth: u32) -> Result<Ramp> {
    if !(0.0..1.0).contains(&eps) || eps <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "ramp steepness eps must be in (0, 1), got {eps}"
        )));
    }
    Ok(Ramp::Sigmoid { eps, depth })
}

impl Ramp {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Ramp::Poly { m, eps } => {
                let s = (x / eps + 0.5).clamp(0.0, 1.0);
                poly_eval(RAMP_POLYS[*m as usize], s)
            }
            Ramp::Sigmoid { eps, depth } => 0.5 * (sigmoid_recursive(x, *eps, *depth) + 1.0),
        }
    }
}

/// Assemble the odd half-wave symmetric datum `g = g_q` from a ramp:
/// `g = 1 - 2q(x+1)` on `(-1, -1/2]`, `2q(x) - 1` on `(-1/2, 1/2]`,
/// `1 - 2q(x-1)` on `(1/2, 1)`.
pub fn hws_assemble(q: &Ramp) -> Signal {
    match q {
        Ramp::Sigmoid { eps, depth } => Signal::SigmoidHws {
            eps: *eps,
            depth: *depth,
        },
        Ramp::Poly { m, eps } => {
            let p = RAMP_POLYS[*m as usize];
            let h = eps / 2.0;
            let breaks = vec![-1.0, -1.0 + h, -h, h, 1.0 - h, 1.0];
            // local coefficients of sign*(2 P_m((x - c)/eps + 1/2) - 1) on
            // the ramp interval [lo, hi] around center c
            let local_ramp = |c: f64, sign: f64, lo: f64, hi: f64| -> Vec<f64> {
                let mid = 0.5 * (lo + hi);
                let mut q = poly_compose_affine(p, 1.0 / eps, (mid - c) / eps + 0.5);
                q = poly_scale(&q, 2.0 * sign);
                q[0] -= sign;
                q
            };
            let pieces = vec![
                local_ramp(-1.0, -1.0, -1.0, -1.0 + h), // descending ramp around -1
                vec![-1.0],
                local_ramp(0.0, 1.0, -h, h), // ascending ramp around 0
                vec![1.0],
                local_ramp(1.0, -1.0, 1.0 - h, 1.0), // descending ramp around +1
            ];
            Signal::Piecewise(PiecewisePoly::from_local(breaks, pieces).unwrap())
        }
    }
}

/// Piecewise-constant signal with `n_steps` equal-width plateaus on
/// `(-1, 1)`, heights i.i.d. uniform in `[0, 1)` from a seeded generator.
pub fn random_steps(n_steps: usize, seed: u64) -> Result<Signal> {
    if n_steps == 0 {
        return Err(Error::InvalidParameter("need at least one step".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let heights: Vec<f64> = (0..n_steps).map(|_| rng.gen::<f64>()).collect();
    let breaks: Vec<f64> = (0..=n_steps)
        .map(|i| -1.0 + 2.0 * i as f64 / n_steps as f64)
        .collect();
    let pieces = heights.into_iter().map(|h| vec![h]).collect();
    Ok(Signal::Piecewise(PiecewisePoly::new(breaks, pieces)?))
}

/// Periodic convolution with the normalized box of the given width, applied
/// `passes` times. Exact for piecewise-polynomial and trigonometric signals.
pub fn box_convolve(g: &Signal, width: f64, passes: u32) -> Result<Signal> {
    if width <= 0.0 {
        return Err(Error::InvalidParameter("box width must be positive".into()));
    }
    match g {
        Signal::Piecewise(p) => {
            let mut out = p.clone();
            for _ in 0..passes {
                out = out.box_convolve_once(width)?;
            }
            Ok(Signal::Piecewise(out))
        }
        Signal::Trig { a0, terms } => {
            // each mode is damped by sinc(k pi width / 2) per pass
            let damped = terms
                .iter()
                .map(|t| {
                    let arg = t.k as f64 * std::f64::consts::PI * width / 2.0;
                    let f = (arg.sin() / arg).powi(passes as i32);
                    TrigTerm {
                        k: t.k,
                        a: t.a * f,
                        b: t.b * f,
                    }
                })
                .collect();
            Ok(Signal::Trig {
                a0: *a0,
                terms: damped,
            })
        }
        Signal::Sum(a, b) => Ok(Signal::sum(
            box_convolve(a, width, passes)?,
            box_convolve(b, width, passes)?,
        )),
        Signal::SigmoidHws { .. } => Err(Error::Unsupported(
            "box convolution of the sigmoid signal".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// 2D tensor fields
// ---------------------------------------------------------------------------

/// Bivariate datum `G(x, y)` on `Omega_P x (0, 1)`, stored as a finite sum of
/// separable terms `gx(x) * gy(2y - 1)` so that box convolutions in either
/// coordinate stay exact.
#[derive(Debug, Clone)]
pub struct Field2 {
    terms: Vec<(PiecewisePoly, PiecewisePoly)>,
}

impl Field2 {
    pub fn separable(gx: PiecewisePoly, gy: PiecewisePoly) -> Self {
        Field2 {
            terms: vec![(gx, gy)],
        }
    }

    /// Piecewise-constant blocks: `ny` horizontal strips, each carrying an
    /// independent random step profile in x with `nx_blocks` plateaus.
    pub fn random_blocks(nx_blocks: usize, ny: usize, seed: u64) -> Result<Self> {
        if nx_blocks == 0 || ny == 0 {
            return Err(Error::InvalidParameter(
                "block counts must be positive".into(),
            ));
        }
        let mut terms = Vec::with_capacity(ny);
        for strip in 0..ny {
            let gx = match random_steps(nx_blocks, seed.wrapping_add(strip as u64 + 1))? {
                Signal::Piecewise(p) => p,
                _ => unreachable!(),
            };
            // indicator of the y-strip, in the mapped variable 2y - 1
            let lo = -1.0 + 2.0 * strip as f64 / ny as f64;
            let hi = -1.0 + 2.0 * (strip + 1) as f64 / ny as f64;
            let mut breaks = vec![-1.0, 1.0];
            if lo > -1.0 {
                breaks.insert(breaks.len() - 1, lo);
            }
            if hi < 1.0 {
                breaks.insert(breaks.len() - 1, hi);
            }
            let pieces = breaks
                .windows(2)
                .map(|w| {
                    let mid = 0.5 * (w[0] + w[1]);
                    vec![if mid > lo && mid < hi { 1.0 } else { 0.0 }]
                })
                .collect();
            let gy = PiecewisePoly::new(breaks, pieces)?;
            terms.push((gx, gy));
        }
        Ok(Field2 { terms })
    }

    /// `G(x, y)` with `y` in `(0, 1)`; jumps sampled by right-sided limits.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let ym = 2.0 * y - 1.0;
        self.terms
            .iter()
            .map(|(gx, gy)| gx.eval_right(x) * gy.eval_right(ym))
            .sum()
    }

    /// `u_mu(x, y) = G(x - mu, y)`.
    pub fn eval_shifted(&self, x: f64, y: f64, mu: f64) -> f64 {
        self.eval(x - mu, y)
    }

    /// Box convolution in x (periodic over `Omega_P`).
    pub fn box_convolve_x(&self, width: f64, passes: u32) -> Result<Field2> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (gx, gy) in &self.terms {
            let mut g = gx.clone();
            for _ in 0..passes {
                g = g.box_convolve_once(width)?;
            }
            terms.push((g, gy.clone()));
        }
        Ok(Field2 { terms })
    }

    /// Box convolution in y; `width` is in y-units (the mapped coordinate has
    /// twice the scale).
    pub fn box_convolve_y(&self, width: f64, passes: u32) -> Result<Field2> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (gx, gy) in &self.terms {
            let mut g = gy.clone();
            for _ in 0..passes {
                g = g.box_convolve_once(2.0 * width)?;
            }
            terms.push((gx.clone(), g));
        }
        Ok(Field2 { terms })
    }

    pub fn terms(&self) -> &[(PiecewisePoly, PiecewisePoly)] {
        &self.terms
    }
}
