//! Stability constants of Lawson cones: the fractional Hardy constant
//! `H(m,n,s)`, the geometric constant `A0(m,n,s)^2`, the `beta`-family
//! `C(m,n,s,beta)`, verdicts, and the full constant table at `s = 0`.
//!
//! All values are in the *normalized* convention: the bare radial integrals
//! over `r in [0,1]` with the inner angular kernels, i.e. the table numbers
//! with the `(1+a^2)^{(3+s)/2} A_{m-2} A_{n-2}` prefactor divided out
//! (`A_{n-2}` omitted for n = 1). `raw = normalized * divisor` is a
//! bookkeeping identity.

use crate::cones::{self, sphere_area};
use crate::error::{Error, Result};
use crate::quad::{integrate_1d, mc_oracle, QuadConfig, Singularity};
use rayon::prelude::*;
use serde::Serialize;

/// Value with a propagated quadrature error estimate.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Stable,
    Unstable,
    /// `|H - A0^2|` below combined quadrature error: reported, never guessed.
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Stable => write!(f, "Stable"),
            Verdict::Unstable => write!(f, "Unstable"),
            Verdict::Inconclusive => write!(f, "Inconclusive"),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct StabilityReport {
    pub m: u32,
    pub n: u32,
    pub s: f64,
    pub alpha_used: f64,
    pub h_norm: f64,
    pub a0sq_norm: f64,
    pub h_raw: f64,
    pub a0sq_raw: f64,
    pub verdict: Verdict,
    pub err_h: f64,
    pub err_a0: f64,
}

/// Normalization divisor shared by `H` and `A0^2`:
/// `(1+a^2)^{(3+s)/2} A_{m-2} A_{n-2}`, with `A_{n-2}` omitted for `n = 1`.
pub fn divisor(m: u32, n: u32, s: f64, alpha: f64) -> f64 {
    let base = (1.0 + alpha * alpha).powf((3.0 + s) / 2.0) * sphere_area(m - 2);
    if n >= 2 {
        base * sphere_area(n - 2)
    } else {
        base
    }
}

fn check_params(m: u32, n: u32, s: f64) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidParams(format!(
            "stability formulas need m >= 2 (got m = {m})"
        )));
    }
    if n < 1 || n > m {
        return Err(Error::InvalidParams(format!(
            "need 1 <= n <= m (got m = {m}, n = {n})"
        )));
    }
    if !(0.0..1.0).contains(&s) {
        return Err(Error::InvalidParams(format!("s = {s} outside [0, 1)")));
    }
    Ok(())
}

/// Inner angular integral `I(r)` of the Hardy-constant integrand
/// (for n = 1 the sum `I_+ + I_-` over the two sheets).
fn inner_i(m: u32, n: u32, s: f64, alpha: f64, r: f64, cfg: &QuadConfig) -> f64 {
    let nn = (m + n) as f64;
    let expo = (nn + s) / 2.0;
    let me = (m - 2) as i32;
    let rm1 = (r - 1.0) * (r - 1.0);
    let four_r = 4.0 * r;
    let a2 = alpha * alpha;
    if n == 1 {
        // base offsets a^2 (r -+ 1)^2 on the same/opposite sheet
        let f = |t: f64, off: f64| {
            let st = (0.5 * t).sin();
            let w = if me == 0 { 1.0 } else { t.sin().powi(me) };
            w * (rm1 + four_r * st * st + off).powf(-expo)
        };
        let same = integrate_1d(|t| f(t, a2 * rm1), 0.0, std::f64::consts::PI, cfg);
        let opp = integrate_1d(
            |t| f(t, a2 * (r + 1.0) * (r + 1.0)),
            0.0,
            std::f64::consts::PI,
            cfg,
        );
        same.map(|q| q.value).unwrap_or(f64::NAN) + opp.map(|q| q.value).unwrap_or(f64::NAN)
    } else {
        let ne = (n - 2) as i32;
        let pcfg = cfg.inner();
        integrate_1d(
            |t: f64| {
                let st = (0.5 * t).sin();
                let base = (1.0 + a2) * rm1 + four_r * st * st;
                let w = if me == 0 { 1.0 } else { t.sin().powi(me) };
                let phi = integrate_1d(
                    |p: f64| {
                        let sp = (0.5 * p).sin();
                        let wp = if ne == 0 { 1.0 } else { p.sin().powi(ne) };
                        wp * (base + a2 * four_r * sp * sp).powf(-expo)
                    },
                    0.0,
                    std::f64::consts::PI,
                    &pcfg,
                );
                w * phi.map(|q| q.value).unwrap_or(f64::NAN)
            },
            0.0,
            std::f64::consts::PI,
            cfg,
        )
        .map(|q| q.value)
        .unwrap_or(f64::NAN)
    }
}

/// Inner angular integral `J(r)` of the `A0^2` integrand
/// (for n = 1 the sum `J_+ + J_-`).
fn inner_j(m: u32, n: u32, s: f64, alpha: f64, r: f64, cfg: &QuadConfig) -> f64 {
    let nn = (m + n) as f64;
    let expo = (nn + s) / 2.0;
    let me = (m - 2) as i32;
    let rm1 = (r - 1.0) * (r - 1.0);
    let four_r = 4.0 * r;
    let a2 = alpha * alpha;
    if n == 1 {
        let jp = integrate_1d(
            |t: f64| {
                let st = (0.5 * t).sin();
                let w = if me == 0 { 1.0 } else { t.sin().powi(me) };
                let num = a2 / (1.0 + a2) * 2.0 * st * st; // a^2 (1 - cos t)/(1+a^2)
                num * w * ((1.0 + a2) * rm1 + four_r * st * st).powf(-expo)
            },
            0.0,
            std::f64::consts::PI,
            cfg,
        );
        let jm = integrate_1d(
            |t: f64| {
                let st = (0.5 * t).sin();
                let w = if me == 0 { 1.0 } else { t.sin().powi(me) };
                let num = (2.0 + a2 * 2.0 * st * st) / (1.0 + a2); // (2 + a^2(1-cos t))/(1+a^2)
                num * w * (rm1 + four_r * st * st + a2 * (r + 1.0) * (r + 1.0)).powf(-expo)
            },
            0.0,
            std::f64::consts::PI,
            cfg,
        );
        jp.map(|q| q.value).unwrap_or(f64::NAN) + jm.map(|q| q.value).unwrap_or(f64::NAN)
    } else {
        let ne = (n - 2) as i32;
        let pcfg = cfg.inner();
        integrate_1d(
            |t: f64| {
                let st = (0.5 * t).sin();
                let base = (1.0 + a2) * rm1 + four_r * st * st;
                let numt = a2 * 2.0 * st * st; // a^2 (1 - cos t)
                let w = if me == 0 { 1.0 } else { t.sin().powi(me) };
                let phi = integrate_1d(
                    |p: f64| {
                        let sp = (0.5 * p).sin();
                        let wp = if ne == 0 { 1.0 } else { p.sin().powi(ne) };
                        // (1 + a^2 - a^2 cos t - cos p)/(1+a^2)
                        let num = (numt + 2.0 * sp * sp) / (1.0 + a2);
                        num * wp * (base + a2 * four_r * sp * sp).powf(-expo)
                    },
                    0.0,
                    std::f64::consts::PI,
                    &pcfg,
                );
                w * phi.map(|q| q.value).unwrap_or(f64::NAN)
            },
            0.0,
            std::f64::consts::PI,
            cfg,
        )
        .map(|q| q.value)
        .unwrap_or(f64::NAN)
    }
}

/// Aperture used by the stability formulas: `alpha_0` at `s = 0`, otherwise
/// the s-minimal aperture.
pub fn aperture_for(m: u32, n: u32, s: f64, cfg: &QuadConfig) -> Result<f64> {
    if s == 0.0 {
        cones::aperture_s0(m, n, 1e-12)
    } else {
        Ok(cones::aperture(m, n, s, 1e-5, cfg)?.alpha)
    }
}

/// Normalized `C(m, n, s, beta)`: the `r in [0,1]` integral of the bracket
/// `r^{N-2} - r^{N-2-beta} + r^s - r^{beta+s}` against `I(r)`.
///
/// The bracket's double zero at `r = 1` offsets the kernel blow-up, leaving
/// an integrable endpoint of exponent `s`.
pub fn c_beta(m: u32, n: u32, s: f64, alpha: f64, beta: f64, cfg: &QuadConfig) -> Result<Estimate> {
    check_params(m, n, s)?;
    let nn = (m + n) as f64;
    if !(beta > 0.0 && beta < nn - 2.0 - s) {
        return Err(Error::InvalidParams(format!(
            "beta = {beta} outside (0, N-2-s) = (0, {})",
            nn - 2.0 - s
        )));
    }
    let icfg = cfg.inner();
    let bracket = move |r: f64| -> f64 {
        r.powf(nn - 2.0) - r.powf(nn - 2.0 - beta) + r.powf(s) - r.powf(beta + s)
    };
    let mut rcfg = cfg.clone();
    rcfg.singularities = vec![Singularity {
        location: 1.0,
        exponent: s,
    }];
    let q = integrate_1d(
        |r| bracket(r) * inner_i(m, n, s, alpha, r, &icfg),
        0.0,
        1.0,
        &rcfg,
    )?;
    Ok(Estimate {
        value: q.value,
        error: q.error_estimate,
    })
}

/// Normalized fractional Hardy constant `H(m,n,s) = C(m,n,s,(N-2-s)/2)`,
/// at the module's aperture for `(m, n, s)` unless one is supplied.
pub fn hardy_constant(m: u32, n: u32, s: f64, cfg: &QuadConfig) -> Result<Estimate> {
    check_params(m, n, s)?;
    let alpha = aperture_for(m, n, s, cfg)?;
    hardy_constant_at(m, n, s, alpha, cfg)
}

pub fn hardy_constant_at(
    m: u32,
    n: u32,
    s: f64,
    alpha: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    let beta = ((m + n) as f64 - 2.0 - s) / 2.0;
    c_beta(m, n, s, alpha, beta, cfg)
}

/// Normalized `A0(m,n,s)^2`: the `r in [0,1]` integral of
/// `(r^{N-2} + r^s) J(r)`.
pub fn a0_squared(m: u32, n: u32, s: f64, cfg: &QuadConfig) -> Result<Estimate> {
    check_params(m, n, s)?;
    let alpha = aperture_for(m, n, s, cfg)?;
    a0_squared_at(m, n, s, alpha, cfg)
}

pub fn a0_squared_at(m: u32, n: u32, s: f64, alpha: f64, cfg: &QuadConfig) -> Result<Estimate> {
    check_params(m, n, s)?;
    let nn = (m + n) as f64;
    let icfg = cfg.inner();
    let mut rcfg = cfg.clone();
    rcfg.singularities = vec![Singularity {
        location: 1.0,
        exponent: s,
    }];
    let q = integrate_1d(
        |r| (r.powf(nn - 2.0) + r.powf(s)) * inner_j(m, n, s, alpha, r, &icfg),
        0.0,
        1.0,
        &rcfg,
    )?;
    Ok(Estimate {
        value: q.value,
        error: q.error_estimate,
    })
}

/// Full report with the verdict `Stable` iff `H >= A0^2` (shared
/// normalization makes the normalized comparison valid); differences below
/// the combined quadrature error yield `Inconclusive`.
pub fn verdict(m: u32, n: u32, s: f64, cfg: &QuadConfig) -> Result<StabilityReport> {
    check_params(m, n, s)?;
    let alpha = aperture_for(m, n, s, cfg)?;
    let h = hardy_constant_at(m, n, s, alpha, cfg)?;
    let a0 = a0_squared_at(m, n, s, alpha, cfg)?;
    let div = divisor(m, n, s, alpha);
    let gap = h.value - a0.value;
    let verdict = if gap.abs() < h.error + a0.error {
        Verdict::Inconclusive
    } else if gap >= 0.0 {
        Verdict::Stable
    } else {
        Verdict::Unstable
    };
    Ok(StabilityReport {
        m,
        n,
        s,
        alpha_used: alpha,
        h_norm: h.value,
        a0sq_norm: a0.value,
        h_raw: h.value * div,
        a0sq_raw: a0.value * div,
        verdict,
        err_h: h.error,
        err_a0: a0.error,
    })
}

/// One row of the constant table; a failed cell carries the error text
/// instead of fabricated numbers.
#[derive(Clone, Debug, Serialize)]
pub struct TableCell {
    pub m: u32,
    pub n: u32,
    pub report: std::result::Result<StabilityReport, String>,
}

/// The 27 cells `2 <= m <= 7, 1 <= n <= m` at `s = 0` with `alpha_0`
/// apertures, computed as independent work items and merged by cell index.
pub fn table1(cfg: &QuadConfig) -> Vec<TableCell> {
    let cells: Vec<(u32, u32)> = (2..=7u32).flat_map(|m| (1..=m).map(move |n| (m, n))).collect();
    cells
        .par_iter()
        .map(|&(m, n)| TableCell {
            m,
            n,
            report: verdict(m, n, 0.0, cfg).map_err(|e| e.to_string()),
        })
        .collect()
}

/// Monte Carlo cross-check of the two-angle inner integral `I(r)` used by
/// the table cells (design-decision safeguard for the corner handling).
pub fn inner_i_mc_check(
    m: u32,
    n: u32,
    s: f64,
    alpha: f64,
    r: f64,
    samples: u64,
    seed: u64,
) -> Result<(f64, f64, f64)> {
    let icfg = QuadConfig::with_tol(1e-10, 1e-9);
    let quad = inner_i(m, n, s, alpha, r, &icfg);
    let nn = (m + n) as f64;
    let expo = (nn + s) / 2.0;
    let me = (m - 2) as i32;
    let ne = n as i32 - 2;
    let a2 = alpha * alpha;
    let pi = std::f64::consts::PI;
    let (est, sigma) = mc_oracle(
        |x| {
            let (t, p) = (x[0], x[1]);
            let st = (0.5 * t).sin();
            let sp = (0.5 * p).sin();
            let d = (1.0 + a2) * (r - 1.0) * (r - 1.0)
                + 4.0 * r * st * st
                + a2 * 4.0 * r * sp * sp;
            let wt = if me == 0 { 1.0 } else { t.sin().powi(me) };
            let wp = if ne == 0 { 1.0 } else { p.sin().powi(ne) };
            wt * wp * d.powf(-expo)
        },
        &[(0.0, pi), (0.0, pi)],
        samples,
        seed,
    )?;
    Ok((quad, est, sigma))
}

/// Rayleigh quotients of radial test functions against the cone's Hardy
/// form, in the shared normalized convention (quotient is comparable to
/// [`hardy_constant`] directly).
///
/// `phi` is given as a function of the parametrization radius `r` (so
/// `|x| = r sqrt(1+a^2)`), compactly supported away from the tip.
pub fn hardy_rayleigh_check<F: Fn(f64) -> f64 + Sync>(
    m: u32,
    n: u32,
    s: f64,
    phis: &[F],
    support: (f64, f64),
    cfg: &QuadConfig,
) -> Result<Vec<f64>> {
    check_params(m, n, s)?;
    let alpha = aperture_for(m, n, s, cfg)?;
    let nn = (m + n) as f64;
    let (lo, hi) = support;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidParams(
            "support must satisfy 0 < lo < hi".into(),
        ));
    }

    // angular kernel between radii r and rp (n = 1: same + opposite sheets)
    let icfg = cfg.inner().inner();
    let kernel = |r: f64, rp: f64| -> f64 {
        let expo = (nn + s) / 2.0;
        let a2 = alpha * alpha;
        let me = (m - 2) as i32;
        let drr = (r - rp) * (r - rp);
        let four = 4.0 * r * rp;
        if n == 1 {
            let f = |t: f64, off: f64| {
                let st = (0.5 * t).sin();
                let w = if me == 0 { 1.0 } else { t.sin().powi(me) };
                w * (drr + four * st * st + off).powf(-expo)
            };
            let same = integrate_1d(|t| f(t, a2 * drr), 0.0, std::f64::consts::PI, &icfg);
            let opp = integrate_1d(
                |t| f(t, a2 * (r + rp) * (r + rp)),
                0.0,
                std::f64::consts::PI,
                &icfg,
            );
            same.map(|q| q.value).unwrap_or(f64::NAN)
                + opp.map(|q| q.value).unwrap_or(f64::NAN)
        } else {
            let ne = (n - 2) as i32;
            let pcfg = icfg.inner();
            integrate_1d(
                |t: f64| {
                    let st = (0.5 * t).sin();
                    let base = (1.0 + a2) * drr + four * st * st;
                    let w = if me == 0 { 1.0 } else { t.sin().powi(me) };
                    let phi_int = integrate_1d(
                        |p: f64| {
                            let sp = (0.5 * p).sin();
                            let wp = if ne == 0 { 1.0 } else { p.sin().powi(ne) };
                            wp * (base + a2 * four * sp * sp).powf(-expo)
                        },
                        0.0,
                        std::f64::consts::PI,
                        &pcfg,
                    );
                    w * phi_int.map(|q| q.value).unwrap_or(f64::NAN)
                },
                0.0,
                std::f64::consts::PI,
                &icfg,
            )
            .map(|q| q.value)
            .unwrap_or(f64::NAN)
        }
    };

    phis.par_iter()
        .map(|phi| {
            // denominator: ∫ phi^2 r^{N-3-s} dr over the support
            let den = integrate_1d(
                |r| phi(r) * phi(r) * r.powf(nn - 3.0 - s),
                lo,
                hi,
                cfg,
            )?
            .value;
            // numerator: (1/2) ∬ (phi(r)-phi(rp))^2 K(r,rp) r^{N-2} rp^{N-2};
            // outer over the support, inner over (0, inf) with the diagonal
            // annotated at exponent s
            let ocfg = cfg.clone();
            let inner_cfg_base = cfg.inner();
            let num = integrate_1d(
                |r: f64| {
                    let mut icfg2 = inner_cfg_base.clone();
                    icfg2.singularities = vec![Singularity {
                        location: r,
                        exponent: s,
                    }];
                    let g = |rp: f64| {
                        let d = phi(r) - phi(rp);
                        if d == 0.0 {
                            return 0.0;
                        }
                        d * d * kernel(r, rp) * rp.powf(nn - 2.0)
                    };
                    // inner radii over (0, B) past the support plus the tail
                    let big = 4.0 * hi;
                    let mut v = integrate_1d(g, 0.0, big, &icfg2)
                        .map(|q| q.value)
                        .unwrap_or(f64::NAN);
                    let tcfg = inner_cfg_base.clone();
                    v += integrate_1d(g, big, f64::INFINITY, &tcfg)
                        .map(|q| q.value)
                        .unwrap_or(f64::NAN);
                    v * r.powf(nn - 2.0)
                },
                lo,
                hi,
                &ocfg,
            )?
            .value;
            Ok(0.5 * num / den)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadConfig {
        QuadConfig::with_tol(1e-8, 1e-7)
    }

    #[test]
    fn divisor_identity() {
        let d = divisor(4, 3, 0.0, 0.8398812757028064);
        let expected =
            (1.0f64 + 0.8398812757028064f64.powi(2)).powf(1.5) * sphere_area(2) * sphere_area(1);
        assert!((d - expected).abs() < 1e-12);
    }

    #[test]
    fn beta_symmetry_algebraic() {
        // bracket is invariant under beta -> N-2-s-beta; values must agree
        let a0 = cones::aperture_s0(4, 3, 1e-12).unwrap();
        let c1 = c_beta(4, 3, 0.0, a0, 1.0, &cfg()).unwrap();
        let c2 = c_beta(4, 3, 0.0, a0, 4.0, &cfg()).unwrap();
        assert!(
            (c1.value - c2.value).abs() <= 2.0 * (c1.error + c2.error) + 1e-7,
            "C(1.0) = {} vs C(4.0) = {}",
            c1.value,
            c2.value
        );
    }

    #[test]
    fn beta_range_enforced() {
        let r = c_beta(4, 3, 0.0, 0.8, 5.5, &cfg());
        assert!(matches!(r, Err(Error::InvalidParams(_))));
    }

    #[test]
    fn m1_rejected() {
        assert!(check_params(1, 1, 0.0).is_err());
    }
}
