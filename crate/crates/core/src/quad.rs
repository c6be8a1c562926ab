//! Adaptive composite Gauss–Legendre quadrature on the line, with a log-space
//! variant for positive integrands whose scale can leave the f64 range.
//!
//! The adaptive driver keeps a max-heap of subintervals ordered by an
//! embedded error estimate (whole-interval rule against the two-half
//! composite) and refines the worst interval until the global estimate meets
//! the tolerance or the budget runs out. Integrands with known kinks pass
//! their breakpoints so no interval straddles one.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::magnitude::Mag;

/// Gauss–Legendre rule order used on every subinterval.
const GL_N: usize = 12;
const MAX_INTERVALS: usize = 20_000;

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1], by
/// Newton iteration on the Legendre polynomial from the Chebyshev guesses.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2);
    let mut rule = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        // Newton: P_n(x) via Bonnet recursion, derivative from the standard identity.
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.push((x, w));
    }
    rule.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    rule
}

thread_local! {
    static GL_RULE: Vec<(f64, f64)> = gauss_legendre(GL_N);
}

fn gl_on<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    GL_RULE.with(|rule| {
        let mut acc = 0.0;
        for &(x, w) in rule {
            acc += w * f(mid + half * x);
        }
        acc * half
    })
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

struct Interval {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
    }
}

fn make_interval<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, evals: &mut usize) -> Interval {
    let whole = gl_on(f, a, b);
    let mid = 0.5 * (a + b);
    let split = gl_on(f, a, mid) + gl_on(f, mid, b);
    *evals += 3 * GL_N;
    Interval {
        a,
        b,
        value: split,
        error: (whole - split).abs(),
    }
}

/// Integrate f over the consecutive breakpoints, refining adaptively until
/// the summed error estimate is below `rel_tol · |value|` (with a tiny
/// absolute floor so an identically-zero integrand converges immediately).
pub fn integrate<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64], rel_tol: f64) -> QuadResult {
    assert!(breakpoints.len() >= 2, "need at least two breakpoints");
    let mut evals = 0usize;
    let mut heap = BinaryHeap::new();
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            heap.push(make_interval(&f, w[0], w[1], &mut evals));
        }
    }
    loop {
        let total: f64 = heap.iter().map(|i| i.value).sum();
        let err: f64 = heap.iter().map(|i| i.error).sum();
        let target = rel_tol * total.abs() + 1e-305;
        if err <= target || heap.len() >= MAX_INTERVALS {
            return QuadResult {
                value: total,
                abs_error: err,
                evaluations: evals,
                converged: err <= target,
            };
        }
        let worst = heap.pop().expect("heap nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at floating-point resolution: cannot refine further
            let mut done = worst;
            done.error = 0.0;
            heap.push(done);
            continue;
        }
        heap.push(make_interval(&f, worst.a, mid, &mut evals));
        heap.push(make_interval(&f, mid, worst.b, &mut evals));
    }
}

/// Breakpoints for [a, b] graded toward `a` with exponent `s ≥ 1`:
/// a + (b−a)·(i/n)^s. Used for integrands with a power-type feature at `a`.
pub fn graded_breakpoints(a: f64, b: f64, n: usize, s: f64) -> Vec<f64> {
    assert!(n >= 1 && b > a && s >= 1.0);
    (0..=n)
        .map(|i| a + (b - a) * ((i as f64) / (n as f64)).powf(s))
        .collect()
}

/// Adaptive integration of a positive integrand given by its natural log.
///
/// The integrand is shifted by the largest sampled log before exponentiating,
/// so the computation stays in range even when exp(ln_f) itself would
/// overflow. Returns the log of the integral with a relative error bound.
pub fn integrate_ln<F: Fn(f64) -> f64>(ln_f: F, breakpoints: &[f64], rel_tol: f64) -> Mag {
    integrate_ln_counted(ln_f, breakpoints, rel_tol).0
}

/// As [`integrate_ln`], also reporting the number of integrand evaluations.
pub fn integrate_ln_counted<F: Fn(f64) -> f64>(
    ln_f: F,
    breakpoints: &[f64],
    rel_tol: f64,
) -> (Mag, usize) {
    assert!(breakpoints.len() >= 2);
    // Scout pass for the shift: sample each piece at a few interior points.
    let mut shift = f64::NEG_INFINITY;
    for w in breakpoints.windows(2) {
        for k in 0..=8 {
            let t = w[0] + (w[1] - w[0]) * (k as f64) / 8.0;
            let v = ln_f(t);
            if v.is_finite() && v > shift {
                shift = v;
            }
        }
    }
    if !shift.is_finite() {
        // integrand is identically zero on the sample: treat as zero integral
        return (Mag::from_ln(f64::NEG_INFINITY, 0.0), 0);
    }
    let g = |t: f64| {
        let v = ln_f(t);
        if v.is_finite() {
            (v - shift).exp()
        } else {
            0.0
        }
    };
    let res = integrate(g, breakpoints, rel_tol);
    if res.value <= 0.0 {
        return (Mag::from_ln(f64::NEG_INFINITY, 0.0), res.evaluations);
    }
    (
        Mag::from_ln(shift + res.value.ln(), res.abs_error / res.value),
        res.evaluations,
    )
}
