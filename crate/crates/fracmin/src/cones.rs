//! Lawson cones: the fractional mean curvature functional `H(alpha)` at the
//! unit-slope reference point and the s-minimal aperture `alpha(s, m, n)`.
//!
//! The solid cone is `E_a = {(y, z) in R^m x R^n : |z| > a |y|}` and `H(a)`
//! is the principal-value integral of `(chi_E - chi_Ec) / |x - p|^{N+s}`
//! with `p = (e1, a e1)`. Reduced coordinates: radii `(r, rho)` plus one
//! polar angle per factor sphere, with the distance written in the
//! cancellation-free form
//! `(r-1)^2 + 4 r sin^2(t/2) + (rho-a)^2 + 4 rho a sin^2(f/2)`.

use crate::error::{Error, Result};
use crate::quad::{integrate_1d, QuadConfig, Singularity};
use crate::roots;
use rayon::prelude::*;
use serde::Serialize;

/// Area of the unit sphere `S^k` in `R^{k+1}`.
pub fn sphere_area(k: u32) -> f64 {
    // A_k = 2 pi^{(k+1)/2} / Gamma((k+1)/2); Gamma at integer/half-integer
    let half = (k + 1) % 2 == 1;
    let mut gamma = if half {
        std::f64::consts::PI.sqrt() // Gamma(1/2)
    } else {
        1.0 // Gamma(1)
    };
    let mut x = if half { 0.5 } else { 1.0 };
    while x + 1.0 <= (k + 1) as f64 / 2.0 {
        gamma *= x;
        x += 1.0;
    }
    2.0 * std::f64::consts::PI.powf((k + 1) as f64 / 2.0) / gamma
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConeSpec {
    pub m: u32,
    pub n: u32,
    pub s: f64,
    pub alpha: f64,
}

impl ConeSpec {
    pub fn new(m: u32, n: u32, s: f64, alpha: f64) -> Result<Self> {
        if m < 1 || n < 1 {
            return Err(Error::InvalidParams(format!("m = {m}, n = {n} must be >= 1")));
        }
        if !(0.0..1.0).contains(&s) {
            return Err(Error::InvalidParams(format!("s = {s} outside [0, 1)")));
        }
        if !(alpha > 0.0) {
            return Err(Error::InvalidParams(format!("alpha = {alpha} must be > 0")));
        }
        Ok(ConeSpec { m, n, s, alpha })
    }

    /// Canonical orientation `n <= m` via `(m, n, a) ~ (n, m, 1/a)`.
    pub fn canonical(self) -> Self {
        if self.n > self.m {
            ConeSpec {
                m: self.n,
                n: self.m,
                alpha: 1.0 / self.alpha,
                ..self
            }
        } else {
            self
        }
    }

    fn dim(&self) -> u32 {
        self.m + self.n
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ApertureResult {
    pub alpha: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
    pub iterations: u32,
}

/// Stable evaluation of `x^{-e} - (x+d)^{-e}` for `d >= 0`.
#[inline]
fn pow_diff(x: f64, d: f64, e: f64) -> f64 {
    x.powf(-e) * (-(-e * (d / x).ln_1p()).exp_m1())
}

/// Exact odd-binomial form of `(b+w)^k - (b-w)^k`.
#[inline]
fn pow_sym_diff(b: f64, w: f64, k: u32) -> f64 {
    let mut sum = 0.0;
    let mut binom = k as f64; // C(k,1)
    let mut j = 1u32;
    while j <= k {
        sum += binom * b.powi((k - j) as i32) * w.powi(j as i32);
        // advance C(k,j) -> C(k,j+2)
        if j + 2 <= k {
            binom *= ((k - j) * (k - j - 1)) as f64 / ((j + 1) * (j + 2)) as f64;
        }
        j += 2;
    }
    2.0 * sum
}

/// `∫_0^width f(u) du` for integrands behaving like
/// `u^{-s} (B0 + A0 u^s + B1 u)` at the left edge: the piece below
/// `u_split` integrates in closed form from a three-sample fit, the rest
/// goes through the flattening substitution `u = x^{1/(1-s)}`. This keeps
/// every evaluation of `f` at `u >= u_split`, away from conditioning and
/// overflow trouble near the edge.
fn edge_integral<F: Fn(f64) -> f64>(
    f: F,
    s: f64,
    width: f64,
    u_split: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    debug_assert!(u_split * 8.0 < width);
    let us = [u_split, 2.0 * u_split, 4.0 * u_split];
    let mut rhs = [0.0f64; 3];
    let mut mat = [[0.0f64; 3]; 3];
    for (k, &u) in us.iter().enumerate() {
        let v = f(u);
        if !v.is_finite() {
            return Err(Error::NonFinite { x: u });
        }
        rhs[k] = v * u.powf(s);
        mat[k] = [1.0, u.powf(s), u];
    }
    let coef = solve3(mat, rhs).ok_or_else(|| {
        Error::InvalidParams("singular fit system in edge continuation".into())
    })?;
    let (b0, a0, b1) = (coef[0], coef[1], coef[2]);
    let near = b0 * u_split.powf(1.0 - s) / (1.0 - s) + a0 * u_split
        + b1 * u_split.powf(2.0 - s) / (2.0 - s);

    let p = 1.0 / (1.0 - s);
    let x_lo = u_split.powf(1.0 - s);
    let x_hi = width.powf(1.0 - s);
    let main = integrate_1d(
        |x| {
            let u = x.powf(p);
            f(u) * p * x.powf(p - 1.0)
        },
        x_lo,
        x_hi,
        cfg,
    )?;
    Ok(near + main.value)
}

/// Direct 3x3 solve by Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()
        })?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in (col + 1)..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for col in (0..3).rev() {
        let mut v = b[col];
        for k in (col + 1)..3 {
            v -= a[col][k] * x[k];
        }
        x[col] = v / a[col][col];
    }
    Some(x)
}

/// `∫_0^pi sin^{m-2}(t) g(sin^2(t/2)) dt`, degenerating to the two-point
/// sum over `S^0` for `m = 1`.
fn theta_integral<G: Fn(f64) -> f64>(m: u32, g: G, cfg: &QuadConfig) -> f64 {
    if m == 1 {
        return g(0.0) + g(1.0);
    }
    let me = (m - 2) as i32;
    integrate_1d(
        |t: f64| {
            let st = (0.5 * t).sin();
            let w = if me == 0 { 1.0 } else { t.sin().powi(me) };
            w * g(st * st)
        },
        0.0,
        std::f64::consts::PI,
        cfg,
    )
    .map(|q| q.value)
    .unwrap_or(f64::NAN)
}

/// `∫_0^pi sin^{n-2}(p) (a + c sin^2(p/2))^{-e} dp` (n >= 2).
fn phi_kernel(n: u32, a: f64, c: f64, e: f64, cfg: &QuadConfig) -> f64 {
    theta_integral(n, |sp2| (a + c * sp2).powf(-e), cfg)
}

/// Stable `∫_0^pi sin^{n-2}(p) [ (a + c s^2)^{-e} - (a + d0 + (c+dc) s^2)^{-e} ] dp`.
fn phi_kernel_diff(n: u32, a: f64, c: f64, e: f64, d0: f64, dc: f64, cfg: &QuadConfig) -> f64 {
    theta_integral(n, |sp2| pow_diff(a + c * sp2, d0 + dc * sp2, e), cfg)
}

/// Pointwise-paired slice `h(1+u) + h(1-u)` (with the `r^{m-1}` radial
/// weights), organized so the `u^{-1-s}`-sized one-sided parts cancel in
/// exact arithmetic: the `z`/`rho` line is folded around the kernel peak
/// and all residual differences use `expm1`-stable forms. The result
/// behaves like `u^{-s}` near `u = 0`.
fn paired_slice(spec: &ConeSpec, u: f64, cfg: &QuadConfig) -> f64 {
    debug_assert!(u < 1.0);
    let (m, n, s, a) = (spec.m, spec.n, spec.s, spec.alpha);
    let nn = spec.dim();
    let e = (nn as f64 + s) / 2.0;
    let rp = 1.0 + u;
    let rm = 1.0 - u;
    let wp = rp.powi((m - 1) as i32);
    let wm = rm.powi((m - 1) as i32);
    let wdiff = -pow_sym_diff(1.0, u, m - 1); // wm - wp, exact
    let uu = u * u;
    let tcfg = cfg.inner();
    let pcfg = tcfg.inner();

    if n == 1 {
        // Near branch kernels depend on z only through (z-a)^2, so the fold
        // z = a +- w cancels exactly outside the band |z - a| < a u.
        // Band (width 2 a u, both z-sides):
        //   2 * [wm K(A) - wp K(A + 8u st2)] with A = uu + 4 rm st2 + w^2
        let band = integrate_1d(
            |x: f64| {
                let w = a * u * x;
                2.0 * a
                    * u
                    * theta_integral(
                        m,
                        |st2| {
                            let am = uu + 4.0 * rm * st2 + w * w;
                            wdiff * am.powf(-e) + wp * pow_diff(am, 8.0 * u * st2, e)
                        },
                        &tcfg,
                    )
            },
            0.0,
            1.0,
            cfg,
        )
        .map(|q| q.value)
        .unwrap_or(f64::NAN);

        // Leftover z > 2a (both sides outside the cone):
        let far = 2.0 * a + 2.0;
        let tail_f = |z: f64| {
            let w2 = (z - a) * (z - a);
            theta_integral(
                m,
                |st2| {
                    wp * (uu + 4.0 * rp * st2 + w2).powf(-e)
                        + wm * (uu + 4.0 * rm * st2 + w2).powf(-e)
                },
                &tcfg,
            )
        };
        let mut leftover = integrate_1d(tail_f, 2.0 * a, far, cfg)
            .map(|q| q.value)
            .unwrap_or(f64::NAN);
        leftover += integrate_1d(tail_f, far, f64::INFINITY, cfg)
            .map(|q| q.value)
            .unwrap_or(f64::NAN);

        // Mirror branch (z < 0): kernel offset (|z| + a)^2 keeps it away
        // from the singular point; integrate the three sign regions directly.
        let mirror_f = |t: f64, cp: f64, cm: f64| {
            let w2 = (t + a) * (t + a);
            theta_integral(
                m,
                |st2| {
                    cp * wp * (uu + 4.0 * rp * st2 + w2).powf(-e)
                        + cm * wm * (uu + 4.0 * rm * st2 + w2).powf(-e)
                },
                &tcfg,
            )
        };
        let mut mirror = 0.0;
        if a * rm > 0.0 {
            mirror += integrate_1d(|t| mirror_f(t, -1.0, -1.0), 0.0, a * rm, cfg)
                .map(|q| q.value)
                .unwrap_or(f64::NAN);
        }
        mirror += integrate_1d(|t| mirror_f(t, -1.0, 1.0), a * rm, a * rp, cfg)
            .map(|q| q.value)
            .unwrap_or(f64::NAN);
        let mirror_tail = |t: f64| mirror_f(t, 1.0, 1.0);
        mirror += integrate_1d(mirror_tail, a * rp, far, cfg)
            .map(|q| q.value)
            .unwrap_or(f64::NAN);
        mirror += integrate_1d(mirror_tail, far, f64::INFINITY, cfg)
            .map(|q| q.value)
            .unwrap_or(f64::NAN);

        band + leftover + mirror
    } else {
        let nk = n - 1;
        // Band rho in (a rm, a rp): wm G(rm, rho) - wp G(rp, rho), stable in
        // the r-direction; parametrized by x in (-1, 1) around rho = a.
        let band = integrate_1d(
            |x: f64| {
                let rho = a * (1.0 + u * x);
                let drho = (rho - a) * (rho - a);
                let c = 4.0 * rho * a;
                a * u
                    * rho.powi(nk as i32)
                    * theta_integral(
                        m,
                        |st2| {
                            let am = uu + 4.0 * rm * st2 + drho;
                            wdiff * phi_kernel(n, am, c, e, &pcfg)
                                + wp * phi_kernel_diff(n, am, c, e, 8.0 * u * st2, 0.0, &pcfg)
                        },
                        &tcfg,
                    )
            },
            -1.0,
            1.0,
            cfg,
        )
        .map(|q| q.value)
        .unwrap_or(f64::NAN);

        // Folded region w in (a u, a): F(a+w) - F(a-w); the (rho - a)^2
        // offsets agree, the phi coefficient and rho weight differ. The
        // integrand scales like w^{-1-s}, so integrate in y = ln(w/(a u)),
        // where it decays like e^{-s y}.
        let fold_at = |w: f64| -> f64 {
            let w2 = w * w;
            let rw_diff = pow_sym_diff(a, w, nk); // (a+w)^{n-1} - (a-w)^{n-1}
            let rw_m = (a - w).powi(nk as i32);
            let c_minus = 4.0 * (a - w) * a;
            let dc = 8.0 * a * w; // c_plus - c_minus
            theta_integral(
                m,
                |st2| {
                    let mut v = 0.0;
                    for (rr, wr) in [(rp, wp), (rm, wm)] {
                        let arg = uu + 4.0 * rr * st2 + w2;
                        // (a+w)^{n-1} K(c+) - (a-w)^{n-1} K(c-)
                        //   = rw_diff K(c+) + rw_m (K(c+) - K(c-))
                        let k_plus = phi_kernel(n, arg, c_minus + dc, e, &pcfg);
                        let k_gap = -phi_kernel_diff(n, arg, c_minus, e, 0.0, dc, &pcfg);
                        v += wr * (rw_diff * k_plus + rw_m * k_gap);
                    }
                    v
                },
                &tcfg,
            )
        };
        let ymax = (1.0 / u).ln();
        let folded = integrate_1d(
            |y: f64| {
                let w = a * u * y.exp();
                fold_at(w) * w
            },
            0.0,
            ymax,
            cfg,
        )
        .map(|q| q.value)
        .unwrap_or(f64::NAN);

        // Leftover rho > 2a, both sides outside:
        let far = 2.0 * a + 2.0;
        let tail_f = |rho: f64| {
            let drho = (rho - a) * (rho - a);
            let c = 4.0 * rho * a;
            rho.powi(nk as i32)
                * theta_integral(
                    m,
                    |st2| {
                        wp * phi_kernel(n, uu + 4.0 * rp * st2 + drho, c, e, &pcfg)
                            + wm * phi_kernel(n, uu + 4.0 * rm * st2 + drho, c, e, &pcfg)
                    },
                    &tcfg,
                )
        };
        let mut leftover = integrate_1d(tail_f, 2.0 * a, far, cfg)
            .map(|q| q.value)
            .unwrap_or(f64::NAN);
        leftover += integrate_1d(tail_f, far, f64::INFINITY, cfg)
            .map(|q| q.value)
            .unwrap_or(f64::NAN);

        band + folded + leftover
    }
}

/// Rescaled tail slice: for `r = 1/v >= 2` the full radial integrand obeys
/// `r^{m-1} slice(r) = r^{-1-s} S(v)` with `S` the cross-section integral in
/// the scaled variables (`zeta = z/r`, `t = rho/r`), smooth and O(1) on
/// `v in (0, 1/2]`. The caller supplies the `v^{s-1}` weight and its
/// endpoint annotation.
fn slice_scaled(spec: &ConeSpec, v: f64, cfg: &QuadConfig) -> f64 {
    let (m, n, s, a) = (spec.m, spec.n, spec.s, spec.alpha);
    let nn = spec.dim();
    let e = (nn as f64 + s) / 2.0;
    let omv2 = (1.0 - v) * (1.0 - v);
    let tcfg = cfg.inner();

    if n == 1 {
        // zeta-line: sgn(|zeta| - a), kernel offsets (zeta -+ a v)^2
        let f = |off: f64| {
            theta_integral(m, |st2| (omv2 + 4.0 * v * st2 + off).powf(-e), &tcfg)
        };
        let peak = a * v;
        let mut total = 0.0;
        let cuts = if peak < a { vec![0.0, peak, a] } else { vec![0.0, a] };
        for w in cuts.windows(2) {
            total -= integrate_1d(|z| f((z - peak) * (z - peak)), w[0], w[1], cfg)
                .map(|q| q.value)
                .unwrap_or(f64::NAN);
        }
        total -= integrate_1d(|z| f((z + peak) * (z + peak)), 0.0, a, cfg)
            .map(|q| q.value)
            .unwrap_or(f64::NAN);
        let far = a + 2.0;
        for (lo, hi) in [(a, far), (far, f64::INFINITY)] {
            total += integrate_1d(|z| f((z - peak) * (z - peak)), lo, hi, cfg)
                .map(|q| q.value)
                .unwrap_or(f64::NAN);
            total += integrate_1d(|z| f((z + peak) * (z + peak)), lo, hi, cfg)
                .map(|q| q.value)
                .unwrap_or(f64::NAN);
        }
        total
    } else {
        let nk = (n - 1) as i32;
        let pcfg = tcfg.inner();
        let g = |t: f64| {
            let off = (t - a * v) * (t - a * v);
            let c = 4.0 * t * a * v;
            t.powi(nk)
                * theta_integral(
                    m,
                    |st2| phi_kernel(n, omv2 + 4.0 * v * st2 + off, c, e, &pcfg),
                    &tcfg,
                )
        };
        let mut total = 0.0;
        let peak = a * v;
        let cuts = if peak < a { vec![0.0, peak, a] } else { vec![0.0, a] };
        for w in cuts.windows(2) {
            total -= integrate_1d(g, w[0], w[1], cfg).map(|q| q.value).unwrap_or(f64::NAN);
        }
        let far = a + 2.0;
        total += integrate_1d(g, a, far, cfg).map(|q| q.value).unwrap_or(f64::NAN);
        total += integrate_1d(g, far, f64::INFINITY, cfg)
            .map(|q| q.value)
            .unwrap_or(f64::NAN);
        total
    }
}

/// Fractional mean curvature functional of the Lawson cone at the reference
/// point `p = (e1, alpha e1)`:
/// `H(alpha) = p.v. ∫_{R^N} (chi_E - chi_Ec)(x) / |x - p|^{N+s} dx`.
///
/// The radial integral is a principal value around `r = 1`, realized by the
/// symmetric pairing `r = 1 ± u` with the surviving even part annotated with
/// exponent `s`; the tail `r > 2` decays like `r^{-1-s}` and is flattened
/// accordingly.
pub fn cone_h(spec: &ConeSpec, cfg: &QuadConfig) -> Result<f64> {
    if !(spec.s > 0.0 && spec.s < 1.0) {
        return Err(Error::InvalidParams(format!(
            "cone_h needs 0 < s < 1 (got {}); use aperture_s0 at s = 0",
            spec.s
        )));
    }
    let spec = spec.canonical();
    let icfg = cfg.inner();
    let p_at = |u: f64| paired_slice(&spec, u, &icfg);

    // paired p.v. core over r in (0, 2), pairing applied inside the slice
    // kernels; the u^{-s} edge at u = 0 is handled by fitted continuation
    let core_value = edge_integral(p_at, spec.s, 1.0, 1e-4, cfg)?;

    // tail r in (2, inf): with v = 1/r it becomes ∫_0^{1/2} v^{s-1} S(v) dv,
    // an O(1)-conditioned integral with endpoint exponent 1-s at v = 0
    let mut tail_cfg = cfg.clone();
    tail_cfg.singularities = vec![Singularity {
        location: 0.0,
        exponent: 1.0 - spec.s,
    }];
    let tail = integrate_1d(
        |v| v.powf(spec.s - 1.0) * slice_scaled(&spec, v, &icfg),
        0.0,
        0.5,
        &tail_cfg,
    )?;

    let prefactor = match (spec.m, spec.n) {
        (m, 1) if m >= 2 => sphere_area(m - 2),
        (1, 1) => 1.0,
        (m, n) => sphere_area(m - 2) * sphere_area(n - 2),
    };
    Ok(prefactor * (core_value + tail.value))
}

/// Absolutely convergent cross-check route: `H = 2 ∫ (chi_E - chi_L)` where
/// `L` is the outer tangent half-space at the reference point. Kept for one
/// configuration as an independent evaluator of [`cone_h`].
pub fn cone_h_halfspace_route(spec: &ConeSpec, cfg: &QuadConfig) -> Result<f64> {
    let spec = spec.canonical();
    let (m, n, s, a) = (spec.m, spec.n, spec.s, spec.alpha);
    if n != 1 || m < 2 {
        return Err(Error::InvalidParams(
            "half-space subtraction route implemented for n = 1 cones".into(),
        ));
    }
    let nn = spec.dim();
    let expo = (nn as f64 + s) / 2.0;
    let me = (m - 2) as i32;

    // coordinates: r > 0, theta in (0, pi), z in R;
    // chi_E = [|z| > a r], chi_L = [z < a r cos(theta)].
    // chi_E - chi_L is -1 on (-ar, ar cos(theta)), +1 on (ar, inf), else 0.
    let zcfg = cfg.inner();
    let theta_int = |r: f64| -> f64 {
        let rm1 = (r - 1.0) * (r - 1.0);
        integrate_1d(
            |t: f64| {
                let st = (0.5 * t).sin();
                let base = rm1 + 4.0 * r * st * st;
                let w = if me == 0 { 1.0 } else { t.sin().powi(me) };
                let zl = a * r * t.cos();
                let kernel = |z: f64| (base + (z - a) * (z - a)).powf(-expo);
                let inner = &zcfg.inner();
                let mut v = 0.0;
                if zl > -a * r {
                    // peak at z = a may sit inside; a >= 0 > -ar only matters for a < zl
                    let cuts = if -a * r < a && a < zl {
                        vec![-a * r, a, zl]
                    } else {
                        vec![-a * r, zl]
                    };
                    for wdw in cuts.windows(2) {
                        if wdw[1] > wdw[0] {
                            v -= integrate_1d(kernel, wdw[0], wdw[1], inner)
                                .map(|q| q.value)
                                .unwrap_or(f64::NAN);
                        }
                    }
                }
                v += integrate_1d(kernel, a * r, f64::INFINITY, inner)
                    .map(|q| q.value)
                    .unwrap_or(f64::NAN);
                w * v
            },
            0.0,
            std::f64::consts::PI,
            &zcfg,
        )
        .map(|q| q.value)
        .unwrap_or(f64::NAN)
    };

    let rad = |r: f64| r.powi((m - 1) as i32) * theta_int(r);
    // the r-slicing of the wedge integrand still carries an odd w^{-1-s}
    // part at r = 1; pair the two sides so only the u^{-s} even part remains
    let paired = |w: f64| rad(1.0 + w) + rad(1.0 - w);
    let core = edge_integral(paired, s, 1.0, 1e-3, cfg)?;
    let mid = integrate_1d(rad, 2.0, 4.0, cfg)?;
    let mut tail_cfg = cfg.clone();
    tail_cfg.singularities = vec![Singularity {
        location: f64::INFINITY,
        exponent: 1.0 - s,
    }];
    let tail = integrate_1d(rad, 4.0, f64::INFINITY, &tail_cfg)?;
    Ok(2.0 * sphere_area(m - 2) * (core + mid.value + tail.value))
}

/// s-minimal aperture: the unique root of `alpha -> H(alpha)` on `(0, 1]`.
///
/// `tol` bounds the residual `|H(alpha)|`. The symmetric case `m == n`
/// short-circuits to `alpha = 1`.
pub fn aperture(m: u32, n: u32, s: f64, tol: f64, cfg: &QuadConfig) -> Result<ApertureResult> {
    let spec = ConeSpec::new(m, n, s, 1.0)?.canonical();
    if spec.m == spec.n {
        return Ok(ApertureResult {
            alpha: 1.0,
            residual: 0.0,
            bracket: (1.0, 1.0),
            iterations: 0,
        });
    }
    let mut hcfg = cfg.clone();
    hcfg.abs_tol = cfg.abs_tol.min(tol / 5.0);

    let h = |alpha: f64| -> Result<f64> {
        cone_h(
            &ConeSpec {
                alpha,
                ..spec
            },
            &hcfg,
        )
    };

    // probe small-to-large; H decreases in alpha with H -> +inf at 0
    let probes = [1e-3, 1e-2, 1e-1, 1.0];
    let mut lo = None;
    let mut values = Vec::new();
    for i in 0..probes.len() {
        let v = h(probes[i])?;
        values.push((probes[i], v));
        if v <= 0.0 {
            if i == 0 {
                // expand below 1e-3
                let mut a = probes[0] / 10.0;
                loop {
                    let va = h(a)?;
                    values.push((a, va));
                    if va > 0.0 {
                        lo = Some((a, probes[0]));
                        break;
                    }
                    a /= 10.0;
                    if a < 1e-9 {
                        break;
                    }
                }
            } else {
                lo = Some((probes[i - 1], probes[i]));
            }
            break;
        }
        if i + 1 == probes.len() {
            // H positive everywhere probed: report and fail loudly
            let report: Vec<String> = values
                .iter()
                .map(|(a, v)| format!("H({a:.3e}) = {v:+.3e}"))
                .collect();
            return Err(Error::BracketFailure(report.join(", ")));
        }
    }
    let (a, b) = lo.ok_or_else(|| {
        let report: Vec<String> = values
            .iter()
            .map(|(x, v)| format!("H({x:.3e}) = {v:+.3e}"))
            .collect();
        Error::BracketFailure(report.join(", "))
    })?;

    let root = roots::brent_ftol(h, a, b, 1e-12, tol, 200)?;
    Ok(ApertureResult {
        alpha: root.x,
        residual: root.fx.abs(),
        bracket: root.bracket,
        iterations: root.iterations,
    })
}

/// Limiting aperture as `s -> 0`: the unique `alpha` balancing
/// `∫_alpha^inf t^{n-1} (1+t^2)^{-N/2} dt` against `∫_0^alpha`.
pub fn aperture_s0(m: u32, n: u32, tol: f64) -> Result<f64> {
    let spec = ConeSpec::new(m, n, 0.0, 1.0)?.canonical();
    let (m, n) = (spec.m, spec.n);
    if m == n {
        return Ok(1.0);
    }
    let nn = (m + n) as f64;
    let nm1 = (n - 1) as i32;
    let cfg = QuadConfig::with_tol(1e-14, 1e-13);
    let weight = move |t: f64| t.powi(nm1) * (1.0 + t * t).powf(-nn / 2.0);
    let c0 = |alpha: f64| -> Result<f64> {
        let up = integrate_1d(weight, alpha, f64::INFINITY, &cfg)?;
        let lo = integrate_1d(weight, 0.0, alpha, &cfg)?;
        Ok(up.value - lo.value)
    };
    let root = roots::brent_ftol(c0, 1e-6, 1.0, tol.min(1e-12), 0.0, 200)?;
    Ok(root.x)
}

/// `H(alpha)` sampled on a strictly increasing grid (parallel over points).
pub fn h_monotone_scan(
    m: u32,
    n: u32,
    s: f64,
    grid: &[f64],
    cfg: &QuadConfig,
) -> Result<Vec<(f64, f64)>> {
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParams(
            "alpha grid must be strictly increasing and non-empty".into(),
        ));
    }
    grid.par_iter()
        .map(|&alpha| {
            let spec = ConeSpec::new(m, n, s, alpha)?;
            Ok((alpha, cone_h(&spec, cfg)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        let pi = std::f64::consts::PI;
        assert!((sphere_area(0) - 2.0).abs() < 1e-14);
        assert!((sphere_area(1) - 2.0 * pi).abs() < 1e-13);
        assert!((sphere_area(2) - 4.0 * pi).abs() < 1e-13);
        assert!((sphere_area(3) - 2.0 * pi * pi).abs() < 1e-13);
        assert!((sphere_area(5) - pi * pi * pi).abs() < 1e-12);
    }

    #[test]
    fn canonicalization_swaps() {
        let c = ConeSpec::new(1, 3, 0.5, 2.0).unwrap().canonical();
        assert_eq!((c.m, c.n), (3, 1));
        assert!((c.alpha - 0.5).abs() < 1e-15);
    }

    #[test]
    fn aperture_s0_closed_forms() {
        // (2,1): condition reduces to alpha/sqrt(1+alpha^2) = 1/2
        let a21 = aperture_s0(2, 1, 1e-12).unwrap();
        assert!((a21 - 1.0 / 3f64.sqrt()).abs() < 1e-10, "{a21}");
        // (3,1): arctan(a) + a/(1+a^2) = pi/4
        let a31 = aperture_s0(3, 1, 1e-12).unwrap();
        let resid = a31.atan() + a31 / (1.0 + a31 * a31) - std::f64::consts::FRAC_PI_4;
        assert!(resid.abs() < 1e-10, "resid {resid}");
        // symmetric cases
        assert_eq!(aperture_s0(4, 4, 1e-12).unwrap(), 1.0);
    }

    #[test]
    fn aperture_symmetric_short_circuit() {
        let r = aperture(3, 3, 0.5, 1e-3, &QuadConfig::default()).unwrap();
        assert_eq!(r.alpha, 1.0);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn invalid_s_rejected() {
        let spec = ConeSpec::new(2, 1, 0.0, 0.5);
        assert!(spec.is_ok());
        assert!(cone_h(&spec.unwrap(), &QuadConfig::default()).is_err());
    }
}

/// Debug-only exposure of the paired slice (used while calibrating the
/// small-u continuation).
#[doc(hidden)]
pub fn paired_slice_dbg(spec: &ConeSpec, u: f64, cfg: &QuadConfig) -> f64 {
    paired_slice(spec, u, cfg)
}

#[doc(hidden)]
pub fn slice_scaled_dbg(spec: &ConeSpec, v: f64, cfg: &QuadConfig) -> f64 {
    slice_scaled(spec, v, cfg)
}
