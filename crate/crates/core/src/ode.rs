//! Embedded Dormand–Prince 5(4) integrator for small first-order systems.
//!
//! Only what the radial shooting solver needs: fixed state dimension 2,
//! adaptive step control on the embedded error estimate, optional step cap,
//! and a stop predicate evaluated on accepted steps.

use crate::error::{Error, Result};

pub type State = [f64; 2];

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];
const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

pub struct Options {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

/// One accepted step of the integration.
#[derive(Debug, Clone, Copy)]
pub struct Step {
    pub t: f64,
    pub y: State,
}

/// Integrate y' = f(t, y) from (t0, y0) to t_end, recording every accepted
/// step. `stop` is checked after each accepted step; returning true ends the
/// integration early (the triggering step is still recorded).
pub fn integrate<F, S>(
    f: F,
    t0: f64,
    y0: State,
    t_end: f64,
    opts: &Options,
    mut stop: S,
) -> Result<Vec<Step>>
where
    F: Fn(f64, &State) -> State,
    S: FnMut(f64, &State) -> bool,
{
    assert!(t_end > t0);
    let mut t = t0;
    let mut y = y0;
    let mut h = opts.h_init.min(opts.h_max).min(t_end - t0);
    let mut out = vec![Step { t, y }];
    let mut k = [[0.0f64; 2]; 7];
    k[0] = f(t, &y);

    for _ in 0..opts.max_steps {
        if t >= t_end {
            return Ok(out);
        }
        h = h.min(t_end - t);

        for stage in 0..6 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(stage + 1) {
                ys[0] += h * A[stage][j] * kj[0];
                ys[1] += h * A[stage][j] * kj[1];
            }
            k[stage + 1] = f(t + C[stage] * h, &ys);
        }

        let mut y5 = y;
        let mut y4 = y;
        for (j, kj) in k.iter().enumerate() {
            y5[0] += h * B5[j] * kj[0];
            y5[1] += h * B5[j] * kj[1];
            y4[0] += h * B4[j] * kj[0];
            y4[1] += h * B4[j] * kj[1];
        }

        let mut err: f64 = 0.0;
        for i in 0..2 {
            let scale = opts.abs_tol + opts.rel_tol * y5[i].abs().max(y[i].abs());
            err = err.max(((y5[i] - y4[i]) / scale).abs());
        }

        if err <= 1.0 || h <= 1e-14 * t_end {
            t += h;
            y = y5;
            out.push(Step { t, y });
            k[0] = k[6]; // FSAL
            if stop(t, &y) {
                return Ok(out);
            }
        } else {
            k[0] = f(t, &y);
        }

        let factor = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
        h = (h * factor.clamp(0.2, 5.0)).min(opts.h_max);
    }
    Err(Error::Solver(format!(
        "step budget exhausted at t = {t} (target {t_end})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_period() {
        // y'' = -y from (1, 0): y(t) = cos t
        let steps = integrate(
            |_, y| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            10.0,
            &Options {
                rel_tol: 1e-10,
                abs_tol: 1e-12,
                h_init: 1e-3,
                h_max: 0.1,
                max_steps: 100_000,
            },
            |_, _| false,
        )
        .unwrap();
        let last = steps.last().unwrap();
        assert!((last.y[0] - 10.0f64.cos()).abs() < 1e-8);
        assert!((last.y[1] + 10.0f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn stop_predicate_halts_early() {
        let steps = integrate(
            |_, y| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            10.0,
            &Options {
                rel_tol: 1e-8,
                abs_tol: 1e-10,
                h_init: 1e-3,
                h_max: 0.05,
                max_steps: 100_000,
            },
            |_, y| y[0] <= 0.0,
        )
        .unwrap();
        let last = steps.last().unwrap();
        assert!(last.t < 2.0 && last.t > 1.5); // zero of cos at π/2
    }
}
