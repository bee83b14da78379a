//! Nested multi-dimensional integration (dimension 2..=4).

use super::{integrate_1d, QuadConfig, QuadResult, Singularity};
use crate::error::{Error, Result};
use std::cell::RefCell;

/// One axis of a product domain with its own singularity annotations.
#[derive(Clone, Debug)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    pub singularities: Vec<Singularity>,
}

impl AxisSpec {
    pub fn new(lo: f64, hi: f64) -> Self {
        AxisSpec {
            lo,
            hi,
            singularities: Vec::new(),
        }
    }

    pub fn singularity(mut self, location: f64, exponent: f64) -> Self {
        self.singularities.push(Singularity {
            location,
            exponent,
        });
        self
    }
}

/// Radial corner singularity `dist(x, vertex)^{-exponent}` at a vertex of a
/// 2-D domain, removed by a Duffy-type split.
#[derive(Clone, Debug)]
pub struct DuffyCorner {
    pub vertex: [f64; 2],
    pub exponent: f64,
}

#[derive(Clone, Debug)]
pub struct NdDomain {
    pub axes: Vec<AxisSpec>,
    pub duffy: Option<DuffyCorner>,
}

impl NdDomain {
    pub fn rect(intervals: &[(f64, f64)]) -> Self {
        NdDomain {
            axes: intervals.iter().map(|&(a, b)| AxisSpec::new(a, b)).collect(),
            duffy: None,
        }
    }
}

fn nest<F: Fn(&[f64]) -> f64>(
    f: &F,
    axes: &[AxisSpec],
    level: usize,
    point: &RefCell<Vec<f64>>,
    cfg: &QuadConfig,
    evals: &RefCell<u64>,
    pending: &RefCell<Option<Error>>,
) -> f64 {
    let axis = &axes[level];
    let mut lcfg = cfg.clone();
    lcfg.singularities = axis.singularities.clone();
    let last = level + 1 == axes.len();
    let res = integrate_1d(
        |x| {
            if pending.borrow().is_some() {
                return 0.0;
            }
            point.borrow_mut()[level] = x;
            if last {
                *evals.borrow_mut() += 1;
                f(&point.borrow())
            } else {
                nest(f, axes, level + 1, point, &lcfg.inner(), evals, pending)
            }
        },
        axis.lo,
        axis.hi,
        &lcfg,
    );
    match res {
        Ok(r) => r.value,
        Err(e) => {
            let mut p = pending.borrow_mut();
            if p.is_none() {
                *p = Some(e);
            }
            0.0
        }
    }
}

/// Nested adaptive integration over a product of up to four intervals.
///
/// Inner levels receive a tenth of the enclosing level's tolerance budget;
/// the reported error estimate is the outer level's. A `DuffyCorner` on a
/// 2-D domain splits the rectangle at the vertex into two triangles, each
/// mapped to a square so the corner blow-up becomes a one-axis power
/// singularity (flattened by annotation).
pub fn integrate_nd<F: Fn(&[f64]) -> f64>(
    f: F,
    domain: &NdDomain,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    cfg.validate()?;
    let dim = domain.axes.len();
    if dim == 0 || dim > 4 {
        return Err(Error::DimensionError { dim });
    }
    for a in &domain.axes {
        if !(a.lo < a.hi) {
            return Err(Error::DomainError { a: a.lo, b: a.hi });
        }
    }

    if let Some(duffy) = &domain.duffy {
        if dim != 2 {
            return Err(Error::InvalidParams(
                "Duffy corner split supported on 2-D domains only".into(),
            ));
        }
        return integrate_duffy(&f, domain, duffy, cfg);
    }

    let pending: RefCell<Option<Error>> = RefCell::new(None);
    let evals = RefCell::new(0u64);
    let point = RefCell::new(vec![0.0; dim]);
    let axis0 = &domain.axes[0];
    let mut cfg0 = cfg.clone();
    cfg0.singularities = axis0.singularities.clone();
    let r = integrate_1d(
        |x| {
            if pending.borrow().is_some() {
                return 0.0;
            }
            point.borrow_mut()[0] = x;
            if dim == 1 {
                *evals.borrow_mut() += 1;
                f(&point.borrow())
            } else {
                nest(&f, &domain.axes, 1, &point, &cfg0.inner(), &evals, &pending)
            }
        },
        axis0.lo,
        axis0.hi,
        &cfg0,
    );

    if let Some(e) = pending.into_inner() {
        return Err(e);
    }
    let r = r?;
    let total_evals = *evals.borrow();
    Ok(QuadResult {
        value: r.value,
        error_estimate: r.error_estimate,
        evaluations: total_evals,
    })
}

/// Duffy split of a rectangle around a corner singularity.
fn integrate_duffy<F: Fn(&[f64]) -> f64>(
    f: &F,
    domain: &NdDomain,
    duffy: &DuffyCorner,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    let ax = &domain.axes[0];
    let ay = &domain.axes[1];
    let (vx, vy) = (duffy.vertex[0], duffy.vertex[1]);
    let sx = if (vx - ax.lo).abs() < (vx - ax.hi).abs() {
        1.0
    } else {
        -1.0
    };
    let sy = if (vy - ay.lo).abs() < (vy - ay.hi).abs() {
        1.0
    } else {
        -1.0
    };
    let lx = (ax.hi - ax.lo).abs();
    let ly = (ay.hi - ay.lo).abs();

    // Triangle 1: |eta| <= |xi| scaled; triangle 2: the complement. Each maps
    // to (u, v) in (0,1]^2 with x = vertex + sx*lx*u, y = vertex + sy*ly*u*v
    // (and symmetrically), Jacobian lx*ly*u. The u-axis then carries the
    // corner exponent minus one power absorbed by the Jacobian.
    let residual_exp = (duffy.exponent - 1.0).max(0.0);
    let u_axis = AxisSpec::new(0.0, 1.0).singularity(0.0, residual_exp.min(0.9999));
    let v_axis = AxisSpec::new(0.0, 1.0);

    let mut total = 0.0;
    let mut err = 0.0;
    let mut evals = 0;
    for tri in 0..2 {
        let g = |p: &[f64]| {
            let (u, v) = (p[0], p[1]);
            let (x, y) = if tri == 0 {
                (vx + sx * lx * u, vy + sy * ly * u * v)
            } else {
                (vx + sx * lx * u * v, vy + sy * ly * u)
            };
            f(&[x, y]) * lx * ly * u
        };
        let sub = NdDomain {
            axes: vec![u_axis.clone(), v_axis.clone()],
            duffy: None,
        };
        // dyn indirection stops the generic instantiation from recursing
        let r = integrate_nd(&g as &dyn Fn(&[f64]) -> f64, &sub, cfg)?;
        total += r.value;
        err += r.error_estimate;
        evals += r.evaluations;
    }
    Ok(QuadResult {
        value: total,
        error_estimate: err,
        evaluations: evals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square() {
        let d = NdDomain::rect(&[(0.0, 1.0), (0.0, 1.0)]);
        let r = integrate_nd(|_| 1.0, &d, &QuadConfig::with_tol(1e-10, 1e-8)).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sin_theta_1d() {
        let d = NdDomain::rect(&[(0.0, std::f64::consts::PI)]);
        let r = integrate_nd(|p| p[0].sin(), &d, &QuadConfig::with_tol(1e-10, 1e-8)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn separable_3d() {
        let d = NdDomain::rect(&[(0.0, 1.0), (0.0, 1.0), (0.0, 1.0)]);
        let r = integrate_nd(
            |p| p[0] * p[1] * p[2],
            &d,
            &QuadConfig::with_tol(1e-9, 1e-7),
        )
        .unwrap();
        assert!((r.value - 0.125).abs() < 1e-8, "got {}", r.value);
    }

    #[test]
    fn dimension_cap() {
        let d = NdDomain::rect(&[(0.0, 1.0); 5]);
        assert!(matches!(
            integrate_nd(|_| 1.0, &d, &QuadConfig::default()),
            Err(Error::DimensionError { dim: 5 })
        ));
    }

    #[test]
    fn duffy_corner_integrable() {
        // ∫∫_{[0,1]^2} (x^2+y^2)^{-1/2} dx dy = 2 ln(1+sqrt(2))
        let d = NdDomain {
            axes: vec![AxisSpec::new(0.0, 1.0), AxisSpec::new(0.0, 1.0)],
            duffy: Some(DuffyCorner {
                vertex: [0.0, 0.0],
                exponent: 1.0,
            }),
        };
        let r = integrate_nd(
            |p| (p[0] * p[0] + p[1] * p[1]).powf(-0.5),
            &d,
            &QuadConfig::with_tol(1e-9, 1e-8),
        )
        .unwrap();
        let exact = 2.0 * (1.0 + 2f64.sqrt()).ln();
        assert!((r.value - exact).abs() < 1e-7, "got {} vs {exact}", r.value);
    }
}
