//! Bracketed scalar root finding (Brent's method).

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub bracket: (f64, f64),
    pub iterations: u32,
}

/// Brent's method on a sign-changing bracket [a, b].
pub fn brent<F: FnMut(f64) -> Result<f64>>(
    f: F,
    a0: f64,
    b0: f64,
    xtol: f64,
    max_iter: u32,
) -> Result<Root> {
    brent_ftol(f, a0, b0, xtol, 0.0, max_iter)
}

/// Brent's method that also stops once `|f(x)| <= ftol`.
pub fn brent_ftol<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    a0: f64,
    b0: f64,
    xtol: f64,
    ftol: f64,
    max_iter: u32,
) -> Result<Root> {
    let (mut a, mut b) = (a0, b0);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(Root { x: a, fx: 0.0, bracket: (a0, b0), iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: 0.0, bracket: (a0, b0), iterations: 0 });
    }
    if fa * fb > 0.0 {
        return Err(Error::BracketFailure(format!(
            "f({a}) = {fa:.3e} and f({b}) = {fb:.3e} have the same sign"
        )));
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for it in 1..=max_iter {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 || fb.abs() <= ftol {
            return Ok(Root {
                x: b,
                fx: fb,
                bracket: if b < c { (b, c) } else { (c, b) },
                iterations: it,
            });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic / secant step
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 {
            d
        } else {
            tol1.copysign(xm)
        };
        fb = f(b)?;
    }
    Err(Error::NonConvergence {
        value: b,
        error: (c - b).abs(),
        evaluations: max_iter as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2() {
        let r = brent(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-14, 200).unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change() {
        assert!(matches!(
            brent(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 100),
            Err(Error::BracketFailure(_))
        ));
    }

    #[test]
    fn transcendental() {
        // arctan(x) + x/(1+x^2) = pi/4 — the aperture_s0(3,1) condition
        let target = std::f64::consts::FRAC_PI_4;
        let r = brent(
            |x| Ok(x.atan() + x / (1.0 + x * x) - target),
            1e-3,
            1.0,
            1e-14,
            200,
        )
        .unwrap();
        assert!((r.x - 0.44161079170532835).abs() < 1e-10, "got {}", r.x);
    }
}
