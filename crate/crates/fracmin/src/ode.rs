//! Adaptive embedded Runge–Kutta (Dormand–Prince 5(4)) initial value solver.
//!
//! Integration proceeds exactly through a caller-supplied grid: the step is
//! capped at the next grid point, so grid values carry solver accuracy and no
//! interpolation is involved.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct OdeConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: u64,
}

impl Default for OdeConfig {
    fn default() -> Self {
        OdeConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_steps: 50_000_000,
        }
    }
}

const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
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
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

#[inline]
fn axpy<const D: usize>(y: &[f64; D], h: f64, coeffs: &[f64], k: &[[f64; D]]) -> [f64; D] {
    let mut out = *y;
    for (c, ki) in coeffs.iter().zip(k) {
        if *c != 0.0 {
            for d in 0..D {
                out[d] += h * c * ki[d];
            }
        }
    }
    out
}

/// Integrate `y' = f(t, y)` from `grid[0]` through every grid point.
///
/// `check` runs after each accepted step and may abort with a domain error
/// (e.g. positivity loss). Returns the state at each grid point, starting
/// with `y0` itself.
pub fn integrate_to_grid<const D: usize, F, G>(
    mut f: F,
    y0: [f64; D],
    grid: &[f64],
    cfg: &OdeConfig,
    mut check: G,
) -> Result<Vec<[f64; D]>>
where
    F: FnMut(f64, &[f64; D]) -> [f64; D],
    G: FnMut(f64, &[f64; D]) -> Result<()>,
{
    if grid.len() < 2 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams(
            "ODE grid must be strictly increasing with >= 2 points".into(),
        ));
    }
    let mut out = Vec::with_capacity(grid.len());
    out.push(y0);

    let mut t = grid[0];
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = ((grid[1] - grid[0]) * 0.1).min(1e-2 * (1.0 + t.abs()));
    let mut steps: u64 = 0;

    for &target in &grid[1..] {
        while t < target {
            steps += 1;
            if steps > cfg.max_steps {
                return Err(Error::StepFailure { r: t, f: y[0] });
            }
            let h_cap = (target - t).min(h);
            let hh = h_cap;

            let k2 = f(t + C[1] * hh, &axpy(&y, hh, &A2, &[k1]));
            let k3 = f(t + C[2] * hh, &axpy(&y, hh, &A3, &[k1, k2]));
            let k4 = f(t + C[3] * hh, &axpy(&y, hh, &A4, &[k1, k2, k3]));
            let k5 = f(t + C[4] * hh, &axpy(&y, hh, &A5, &[k1, k2, k3, k4]));
            let k6 = f(t + C[5] * hh, &axpy(&y, hh, &A6, &[k1, k2, k3, k4, k5]));
            let ks5 = [k1, k2, k3, k4, k5, k6];
            let y5 = axpy(&y, hh, &B5[..6], &ks5);
            let k7 = f(t + hh, &y5);
            let ks = [k1, k2, k3, k4, k5, k6, k7];
            let y4 = axpy(&y, hh, &B4, &ks);

            let mut err2 = 0.0;
            let mut bad = false;
            for d in 0..D {
                if !y5[d].is_finite() {
                    bad = true;
                    break;
                }
                let sc = cfg.abs_tol + cfg.rel_tol * y[d].abs().max(y5[d].abs());
                let e = (y5[d] - y4[d]) / sc;
                err2 += e * e;
            }
            let err = if bad {
                f64::INFINITY
            } else {
                (err2 / D as f64).sqrt()
            };

            if err <= 1.0 {
                t += hh;
                y = y5;
                k1 = k7; // FSAL
                check(t, &y)?;
                let grow = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                h = (hh * grow).max(1e-14 * (1.0 + t.abs()));
            } else {
                let shrink = if err.is_finite() {
                    (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
                } else {
                    0.1
                };
                h = hh * shrink;
                if h < 1e-14 * (1.0 + t.abs()) {
                    return Err(Error::StepFailure { r: t, f: y[0] });
                }
            }
        }
        out.push(y);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential() {
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        let sol = integrate_to_grid(
            |_, y: &[f64; 1]| [y[0]],
            [1.0],
            &grid,
            &OdeConfig::default(),
            |_, _| Ok(()),
        )
        .unwrap();
        for (i, s) in sol.iter().enumerate() {
            assert!((s[0] - (grid[i]).exp()).abs() < 1e-9);
        }
    }

    #[test]
    fn harmonic_oscillator() {
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
        let sol = integrate_to_grid(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            [1.0, 0.0],
            &grid,
            &OdeConfig::default(),
            |_, _| Ok(()),
        )
        .unwrap();
        let end = sol.last().unwrap();
        assert!((end[0] - (10.0f64).cos()).abs() < 1e-7);
        assert!((end[1] + (10.0f64).sin()).abs() < 1e-7);
    }

    #[test]
    fn check_hook_aborts() {
        let grid = [0.0, 1.0, 2.0];
        let res = integrate_to_grid(
            |_, y: &[f64; 1]| [-y[0]],
            [1.0],
            &grid,
            &OdeConfig::default(),
            |t, y| {
                if y[0] < 0.5 {
                    Err(Error::PositivityLoss { r: t })
                } else {
                    Ok(())
                }
            },
        );
        assert!(matches!(res, Err(Error::PositivityLoss { .. })));
    }
}
