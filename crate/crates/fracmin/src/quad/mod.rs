//! Adaptive quadrature engine shared by all modules.
//!
//! Capabilities: globally adaptive Gauss–Kronrod integration on finite and
//! semi-infinite intervals, power-law flattening of annotated endpoint or
//! interior weak singularities `|t - c|^{-sigma}` with `0 <= sigma < 1`,
//! symmetric-excision principal values (with a Richardson-extrapolated
//! delta-excision fallback), nested multi-dimensional integration with a
//! per-level tolerance budget, and a seeded uniform Monte Carlo estimator
//! used as an independent oracle.

mod kronrod;
mod mc;
mod nd;

pub use mc::mc_oracle;
pub use nd::{integrate_nd, AxisSpec, DuffyCorner, NdDomain};

use crate::error::{Error, Result};
use kronrod::gk15;
use std::collections::BinaryHeap;

/// An annotated integrable singularity `|t - location|^{-exponent}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Singularity {
    pub location: f64,
    pub exponent: f64,
}

/// How [`integrate_pv`] realizes the principal value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PvMode {
    /// Pair `f(c+u) + f(c-u)` on the symmetric core, then add the remainder.
    #[default]
    SymmetricPairing,
    /// Delta-excision at `delta, delta/2, delta/4` with Aitken extrapolation.
    RichardsonExcision,
}

#[derive(Clone, Debug)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: u32,
    pub singularities: Vec<Singularity>,
    pub pv_points: Vec<f64>,
    pub pv_mode: PvMode,
    pub mc_seed: u64,
    pub mc_samples: u64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 4000,
            singularities: Vec::new(),
            pv_points: Vec::new(),
            pv_mode: PvMode::SymmetricPairing,
            mc_seed: 0x5eed,
            mc_samples: 100_000,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        QuadConfig {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    pub fn singularity(mut self, location: f64, exponent: f64) -> Self {
        self.singularities.push(Singularity {
            location,
            exponent,
        });
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParams(format!(
                "tolerances must be positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        for s in &self.singularities {
            if !(0.0..1.0).contains(&s.exponent) {
                return Err(Error::InvalidParams(format!(
                    "singularity exponent {} outside [0, 1)",
                    s.exponent
                )));
            }
        }
        Ok(())
    }

    /// Tolerance budget for one nesting level deeper.
    pub fn inner(&self) -> Self {
        QuadConfig {
            abs_tol: self.abs_tol / 10.0,
            rel_tol: (self.rel_tol / 10.0).max(1e-14),
            singularities: Vec::new(),
            pv_points: Vec::new(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
}

/// Coordinate map applied to one integration piece before adaptive work.
#[derive(Clone, Copy, Debug)]
enum Map {
    Id,
    /// Singularity at the left endpoint `c`: t = c + u^{1/(1-sigma)}.
    PowLeft { c: f64, p: f64 },
    /// Singularity at the right endpoint `c`: t = c - u^{1/(1-sigma)}.
    PowRight { c: f64, p: f64 },
    /// Semi-infinite tail [r0, inf): t = r0 / u^p, u in (0, 1]; p > 1 also
    /// flattens a declared slow algebraic tail.
    InvPow { r0: f64, p: f64 },
}

impl Map {
    #[inline]
    fn apply(&self, u: f64) -> (f64, f64) {
        match *self {
            Map::Id => (u, 1.0),
            Map::PowLeft { c, p } => (c + u.powf(p), p * u.powf(p - 1.0)),
            Map::PowRight { c, p } => (c - u.powf(p), p * u.powf(p - 1.0)),
            Map::InvPow { r0, p } => (r0 * u.powf(-p), r0 * p * u.powf(-p - 1.0)),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Piece {
    map: Map,
    lo: f64,
    hi: f64,
}

struct Segment {
    piece: usize,
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    splittable: bool,
    seq: u64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.seq == other.seq
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // splittable first, then largest error; seq breaks ties deterministically
        (self.splittable, self.error, other.seq)
            .partial_cmp(&(other.splittable, other.error, self.seq))
            .unwrap_or(std::cmp::Ordering::Equal)
    }
}

fn too_small(lo: f64, hi: f64) -> bool {
    (hi - lo).abs() <= 100.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0)
}

/// Globally adaptive loop over prepared pieces.
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    pieces: &[Piece],
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: u32,
) -> Result<QuadResult> {
    let mut evals: u64 = 0;
    let mut seq: u64 = 0;
    let mut heap: BinaryHeap<Segment> = BinaryHeap::new();
    let mut value = 0.0;
    let mut error = 0.0;

    let eval_segment = |piece: usize, lo: f64, hi: f64, evals: &mut u64, seq: &mut u64| {
        let map = pieces[piece].map;
        let mut g = |u: f64| {
            let (t, j) = map.apply(u);
            f(t) * j
        };
        *evals += 15;
        *seq += 1;
        match gk15(&mut g, lo, hi) {
            Ok(r) => Ok(Segment {
                piece,
                lo,
                hi,
                value: r.value,
                error: r.error,
                splittable: !too_small(lo, hi),
                seq: *seq,
            }),
            Err(x) => {
                let (t, _) = map.apply(x);
                Err(Error::NonFinite { x: t })
            }
        }
    };

    for (i, p) in pieces.iter().enumerate() {
        if p.hi <= p.lo {
            continue;
        }
        let s = eval_segment(i, p.lo, p.hi, &mut evals, &mut seq)?;
        value += s.value;
        error += s.error;
        heap.push(s);
    }

    let mut subdivisions = 0u32;
    while error > abs_tol.max(rel_tol * value.abs()) {
        if subdivisions >= max_subdivisions {
            return Err(Error::NonConvergence {
                value,
                error,
                evaluations: evals,
            });
        }
        let worst = match heap.pop() {
            Some(s) if s.splittable => s,
            _ => {
                // nothing left to split; tolerance unreachable
                return Err(Error::NonConvergence {
                    value,
                    error,
                    evaluations: evals,
                });
            }
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        let left = eval_segment(worst.piece, worst.lo, mid, &mut evals, &mut seq)?;
        let right = eval_segment(worst.piece, mid, worst.hi, &mut evals, &mut seq)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;

        // re-sum occasionally to control accumulation of rounding in the updates
        if subdivisions % 256 == 0 {
            value = heap.iter().map(|s| s.value).sum();
            error = heap.iter().map(|s| s.error).sum();
        }
    }

    Ok(QuadResult {
        value,
        error_estimate: error,
        evaluations: evals,
    })
}

/// Split [a, b] (b may be `f64::INFINITY`) into pieces with singular
/// endpoints flattened by the power substitution.
fn plan_pieces(a: f64, b: f64, sing: &[Singularity]) -> Vec<Piece> {
    let finite_hi = if b.is_finite() {
        b
    } else {
        // map [r0, inf) through t = r0/u; choose r0 past all annotations
        let mut r0 = a.abs().max(1.0);
        for s in sing {
            if s.location.is_finite() {
                r0 = r0.max(2.0 * s.location.abs());
            }
        }
        r0.max(a)
    };

    let mut cuts: Vec<f64> = vec![a, finite_hi];
    for s in sing {
        if s.location > a && s.location < finite_hi {
            cuts.push(s.location);
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();

    let exponent_at = |c: f64| -> Option<f64> {
        sing.iter()
            .find(|s| {
                (s.location - c).abs() <= 1e-12 * c.abs().max(1.0) && s.exponent > 0.0
            })
            .map(|s| s.exponent)
    };

    let mut pieces = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let sl = exponent_at(lo);
        let sr = exponent_at(hi);
        match (sl, sr) {
            (None, None) => pieces.push(Piece {
                map: Map::Id,
                lo,
                hi,
            }),
            (Some(sig), None) => {
                let p = 1.0 / (1.0 - sig);
                pieces.push(Piece {
                    map: Map::PowLeft { c: lo, p },
                    lo: 0.0,
                    hi: (hi - lo).powf(1.0 - sig),
                });
            }
            (None, Some(sig)) => {
                let p = 1.0 / (1.0 - sig);
                pieces.push(Piece {
                    map: Map::PowRight { c: hi, p },
                    lo: 0.0,
                    hi: (hi - lo).powf(1.0 - sig),
                });
            }
            (Some(sig_l), Some(sig_r)) => {
                let mid = 0.5 * (lo + hi);
                let pl = 1.0 / (1.0 - sig_l);
                let pr = 1.0 / (1.0 - sig_r);
                pieces.push(Piece {
                    map: Map::PowLeft { c: lo, p: pl },
                    lo: 0.0,
                    hi: (mid - lo).powf(1.0 - sig_l),
                });
                pieces.push(Piece {
                    map: Map::PowRight { c: hi, p: pr },
                    lo: 0.0,
                    hi: (hi - mid).powf(1.0 - sig_r),
                });
            }
        }
    }

    if !b.is_finite() {
        // A singularity annotated at +inf declares the exponent of the
        // transformed endpoint u = 0 (i.e. f ~ r^{-d} gives exponent 2-d when
        // d < 2); the power substitution then flattens the slow tail too.
        let tail_exp = sing
            .iter()
            .find(|s| s.location.is_infinite())
            .map(|s| s.exponent)
            .unwrap_or(0.0);
        let p = 1.0 / (1.0 - tail_exp);
        // keep t = r0 u^{-p} representable; the discarded far tail is
        // negligible for any integrand this map is declared for
        let lo = f64::EPSILON.max((finite_hi * 1e-280).powf(1.0 / p));
        pieces.push(Piece {
            map: Map::InvPow { r0: finite_hi, p },
            lo,
            hi: 1.0,
        });
    }
    pieces
}

/// Adaptive integration of `f` over `(a, b)`; `b` may be `f64::INFINITY`.
///
/// Weak singularities listed in `cfg.singularities` are flattened by the
/// substitution `t = c ± u^{1/(1-sigma)}`. Deterministic for a fixed config.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    cfg.validate()?;
    if !(a < b) || a.is_nan() || b.is_nan() || a.is_infinite() {
        return Err(Error::DomainError { a, b });
    }
    let pieces = plan_pieces(a, b, &cfg.singularities);
    adapt(&f, &pieces, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions)
}

/// Principal value of `∫_a^b f` with the singular point `c` inside `(a, b)`.
///
/// Default realization pairs `u -> f(c+u) + f(c-u)` on the symmetric core
/// and integrates the asymmetric remainder separately; `PvMode::RichardsonExcision`
/// instead extrapolates delta-excisions at `delta, delta/2, delta/4`.
/// An annotation at `c` in `cfg.singularities` gives the exponent of the
/// *even* singular part surviving the pairing.
pub fn integrate_pv<F: Fn(f64) -> f64>(
    f: F,
    c: f64,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    cfg.validate()?;
    if !(a < c && c < b) {
        return Err(Error::DomainError { a, b });
    }
    match cfg.pv_mode {
        PvMode::SymmetricPairing => {
            let rho = (c - a).min(b - c);
            let exponent = cfg
                .singularities
                .iter()
                .find(|s| (s.location - c).abs() <= 1e-12 * c.abs().max(1.0))
                .map(|s| s.exponent)
                .unwrap_or(0.0);
            let mut core_cfg = cfg.clone();
            core_cfg.singularities = vec![Singularity {
                location: 0.0,
                exponent,
            }];
            let paired = |u: f64| f(c + u) + f(c - u);
            let core = integrate_1d(paired, 0.0, rho, &core_cfg)?;

            let mut rest_cfg = cfg.clone();
            rest_cfg
                .singularities
                .retain(|s| (s.location - c).abs() > 1e-12 * c.abs().max(1.0));
            let rest = if b - c > rho {
                integrate_1d(&f, c + rho, b, &rest_cfg)?
            } else if c - a > rho {
                integrate_1d(&f, a, c - rho, &rest_cfg)?
            } else {
                QuadResult {
                    value: 0.0,
                    error_estimate: 0.0,
                    evaluations: 0,
                }
            };
            Ok(QuadResult {
                value: core.value + rest.value,
                error_estimate: core.error_estimate + rest.error_estimate,
                evaluations: core.evaluations + rest.evaluations,
            })
        }
        PvMode::RichardsonExcision => {
            let delta0 = 0.125 * (c - a).min(b - c);
            let mut vals = [0.0f64; 3];
            let mut errs = 0.0;
            let mut evals = 0;
            let mut sub = cfg.clone();
            sub.pv_mode = PvMode::SymmetricPairing;
            sub.singularities.clear();
            for (k, v) in vals.iter_mut().enumerate() {
                let d = delta0 / 2f64.powi(k as i32);
                let left = integrate_1d(&f, a, c - d, &sub)?;
                let right = integrate_1d(&f, c + d, b, &sub)?;
                *v = left.value + right.value;
                errs += left.error_estimate + right.error_estimate;
                evals += left.evaluations + right.evaluations;
            }
            // Aitken extrapolation of the geometric excision error
            let d1 = vals[1] - vals[0];
            let d2 = vals[2] - vals[1];
            let denom = d2 - d1;
            let (value, extrap_err) = if denom.abs() > 1e-300 {
                let v = vals[2] - d2 * d2 / denom;
                (v, (v - vals[2]).abs())
            } else {
                (vals[2], d2.abs())
            };
            Ok(QuadResult {
                value,
                error_estimate: errs + extrap_err,
                evaluations: evals,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadConfig {
        QuadConfig::with_tol(1e-12, 1e-10)
    }

    #[test]
    fn polynomial_exact() {
        let r = integrate_1d(|t| 3.0 * t * t, 0.0, 1.0, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_sqrt_endpoint() {
        let c = QuadConfig::with_tol(1e-12, 1e-10).singularity(0.0, 0.5);
        let r = integrate_1d(|t| t.powf(-0.5), 0.0, 1.0, &c).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10, "got {}", r.value);
    }

    #[test]
    fn singular_accuracy_family() {
        for s in [0.1, 0.5, 0.9] {
            let c = QuadConfig::with_tol(1e-12, 1e-10).singularity(0.0, s);
            let r = integrate_1d(|t| t.powf(-s), 0.0, 1.0, &c).unwrap();
            let exact = 1.0 / (1.0 - s);
            assert!(
                (r.value - exact).abs() <= 1e-10 * exact,
                "s={s}: {} vs {exact}",
                r.value
            );
        }
    }

    #[test]
    fn semi_infinite_tail() {
        // ∫_0^∞ (1+t^2)^{-3/2} dt = 1 (antiderivative t/sqrt(1+t^2))
        let r = integrate_1d(|t| (1.0 + t * t).powf(-1.5), 0.0, f64::INFINITY, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "got {}", r.value);
    }

    #[test]
    fn interior_singularity_split() {
        // ∫_0^2 |t-1|^{-1/2} dt = 4
        let c = QuadConfig::with_tol(1e-12, 1e-10).singularity(1.0, 0.5);
        let r = integrate_1d(|t| (t - 1.0).abs().powf(-0.5), 0.0, 2.0, &c).unwrap();
        assert!((r.value - 4.0).abs() < 1e-9, "got {}", r.value);
    }

    #[test]
    fn domain_error() {
        assert!(matches!(
            integrate_1d(|t| t, 1.0, 0.0, &cfg()),
            Err(Error::DomainError { .. })
        ));
    }

    #[test]
    fn nonfinite_detected() {
        let r = integrate_1d(|t| 1.0 / (t - 0.5), 0.0, 1.0, &cfg());
        assert!(matches!(r, Err(Error::NonFinite { .. }) | Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn pv_odd_kernel() {
        // p.v. ∫_{-1}^{1} dt/t = 0
        let r = integrate_pv(|t| 1.0 / t, 0.0, -1.0, 1.0, &cfg()).unwrap();
        assert!(r.value.abs() < 1e-12, "got {}", r.value);
    }

    #[test]
    fn pv_symmetric_logs() {
        // p.v. ∫_0^2 dt/(t-1) = 0
        let r = integrate_pv(|t| 1.0 / (t - 1.0), 1.0, 0.0, 2.0, &cfg()).unwrap();
        assert!(r.value.abs() < 1e-12, "got {}", r.value);
    }

    #[test]
    fn pv_rational() {
        // p.v. ∫_0^2 t/(t-1) dt = 2  (t/(t-1) = 1 + 1/(t-1))
        let r = integrate_pv(|t| t / (t - 1.0), 1.0, 0.0, 2.0, &cfg()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10, "got {}", r.value);
    }

    #[test]
    fn pv_modes_agree() {
        let mut c = cfg();
        c.pv_mode = PvMode::RichardsonExcision;
        let f = |t: f64| t.exp() / (t - 1.0);
        let a = integrate_pv(f, 1.0, 0.0, 2.0, &cfg()).unwrap();
        let b = integrate_pv(f, 1.0, 0.0, 2.0, &c).unwrap();
        assert!(
            (a.value - b.value).abs() <= 1e-6 + a.error_estimate + b.error_estimate,
            "pairing {} vs excision {}",
            a.value,
            b.value
        );
    }

    #[test]
    fn pv_consistency_with_plain_integral() {
        // integrable function: pv == ordinary integral
        let f = |t: f64| (t - 1.0).abs().sqrt();
        let pv = integrate_pv(f, 1.0, 0.0, 2.0, &cfg()).unwrap();
        let plain = integrate_1d(f, 0.0, 2.0, &cfg()).unwrap();
        assert!((pv.value - plain.value).abs() < 1e-9);
    }

    #[test]
    fn determinism() {
        let run = || integrate_1d(|t| (t * 37.0).sin() / (1.0 + t), 0.0, 5.0, &cfg()).unwrap();
        let a = run();
        let b = run();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.evaluations, b.evaluations);
    }
}
