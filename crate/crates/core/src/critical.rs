//! Floating-point side: evaluation of the equations and of `W`, Newton search
//! for real points of the versal space, and finite-difference checks of
//! `∂W/∂a_i = k_{n-1-i}`.
//!
//! Generic over the float type (`f32` or `f64`); polynomials are converted
//! from their exact form once, with the Jacobian differentiated exactly first.

use nalgebra::{DMatrix, DVector, RealField};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::laufer::DeformationResult;
use crate::superpotential::{gradient_field, Superpotential};
use crate::{Coeff, Error, MPoly, ParamPoly, Rat, Result};

/// Float scalar usable by the numerical layer.
pub trait Real: Coeff + RealField + Copy {}

impl<T: Coeff + RealField + Copy> Real for T {}

fn to_real<F: Real>(r: &Rat) -> F {
    F::from_f64(r.to_f64().unwrap_or(f64::NAN)).expect("finite float conversion")
}

fn lift<F: Real>(v: f64) -> F {
    F::from_f64(v).expect("finite float conversion")
}

/// Polynomial with its exact coefficients rounded to `F`.
pub fn to_float_poly<F: Real>(p: &ParamPoly) -> MPoly<F> {
    p.map_coeffs(to_real::<F>)
}

/// Residual system for Newton: in the square case the gradient field
/// `v_i = k_{n-1-i}` (Jacobian = Hessian of `W`), otherwise `k_1 .. k_{n-1}`.
#[derive(Clone, Debug)]
pub struct NumericSystem<F> {
    arity: usize,
    square: bool,
    field: Vec<MPoly<F>>,
    jacobian: Vec<Vec<MPoly<F>>>,
}

impl<F: Real> NumericSystem<F> {
    pub fn new(eqs: &DeformationResult) -> Result<Self> {
        let arity = eqs.arity();
        let square = eqs.is_square();
        let exact = if square {
            gradient_field(eqs)?
        } else {
            eqs.equations.clone()
        };
        let jacobian = exact
            .iter()
            .map(|v| {
                (0..arity)
                    .map(|j| v.diff(j).map(|d| to_float_poly(&d)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NumericSystem {
            arity,
            square,
            field: exact.iter().map(to_float_poly).collect(),
            jacobian,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_square(&self) -> bool {
        self.square
    }

    pub fn residual(&self, a: &[F]) -> Result<DVector<F>> {
        let values = self
            .field
            .iter()
            .map(|p| p.eval(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(DVector::from_vec(values))
    }

    pub fn jacobian_at(&self, a: &[F]) -> Result<DMatrix<F>> {
        let rows = self.field.len();
        let mut j = DMatrix::zeros(rows, self.arity);
        for (r, row) in self.jacobian.iter().enumerate() {
            for (c, p) in row.iter().enumerate() {
                j[(r, c)] = p.eval(a)?;
            }
        }
        Ok(j)
    }
}

/// `(k_1(a), .., k_{n-1}(a))`.
pub fn eval_field<F: Real>(eqs: &DeformationResult, a: &[F]) -> Result<Vec<F>> {
    eqs.equations
        .iter()
        .map(|k| to_float_poly::<F>(k).eval(a))
        .collect()
}

pub fn eval_potential<F: Real>(w: &Superpotential, a: &[F]) -> Result<F> {
    to_float_poly::<F>(&w.w).eval(a)
}

/// Exact `Σ_i k_i(a)^2` at the binary rational nearest to each coordinate.
pub fn exact_residual_sq(eqs: &DeformationResult, a: &[f64]) -> Result<Rat> {
    let point = a
        .iter()
        .map(|&v| {
            Rat::from_float(v).ok_or_else(|| Error::InvalidInput(format!("non-finite coordinate {v}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut acc = Rat::from_integer(0.into());
    for k in &eqs.equations {
        let v = k.eval(&point)?;
        acc += &v * &v;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FdReport {
    pub points: usize,
    pub max_deviation: f64,
    pub worst_point: Vec<f64>,
}

/// Central differences of `W` against `v_i = k_{n-1-i}`.
///
/// Deviation is `|fd − v_i| / max(1, |v_i|)`; fails if it exceeds `tol` anywhere.
pub fn fd_gradient_check(
    w: &Superpotential,
    eqs: &DeformationResult,
    points: &[Vec<f64>],
    step: f64,
    tol: f64,
) -> Result<FdReport> {
    let field: Vec<MPoly<f64>> = gradient_field(eqs)?.iter().map(to_float_poly).collect();
    let wf = to_float_poly::<f64>(&w.w);
    let mut report = FdReport {
        points: points.len(),
        max_deviation: 0.0,
        worst_point: Vec::new(),
    };
    for a in points {
        let mut probe = a.clone();
        for (i, v) in field.iter().enumerate() {
            let orig = probe[i];
            probe[i] = orig + step;
            let up = wf.eval(&probe)?;
            probe[i] = orig - step;
            let down = wf.eval(&probe)?;
            probe[i] = orig;
            let fd = (up - down) / (2.0 * step);
            let exact = v.eval(a)?;
            let dev = (fd - exact).abs() / exact.abs().max(1.0);
            if report.worst_point.is_empty() || dev > report.max_deviation {
                report.max_deviation = dev;
                report.worst_point = a.clone();
            }
        }
    }
    if report.max_deviation > tol {
        return Err(Error::FdCheck {
            deviation: report.max_deviation,
            tolerance: tol,
            point: report.worst_point,
        });
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonOptions<F> {
    /// Stop once `‖k(a)‖ <= tol`.
    pub tol: F,
    pub max_iter: usize,
    /// Radius of the start region; leaving `10 * box_radius` counts as divergence.
    pub box_radius: F,
    /// Singular values below `rcond * σ_max` are treated as zero.
    pub rcond: F,
}

impl Default for NewtonOptions<f64> {
    fn default() -> Self {
        NewtonOptions {
            tol: 1e-10,
            max_iter: 200,
            box_radius: 1.0,
            rcond: 1e-12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalPoint<F> {
    pub point: Vec<F>,
    pub gradient_norm: F,
    pub hessian_min_singular_value: F,
    pub iterations: usize,
    pub converged: bool,
    /// A pseudo-inverse step was needed, or the endpoint Jacobian is numerically singular.
    pub singular: bool,
    pub diverged: bool,
}

fn norm<F: Real>(v: &DVector<F>) -> F {
    v.norm()
}

fn singular_values<F: Real>(j: &DMatrix<F>) -> (F, F) {
    let sv = j.clone().singular_values();
    let max = sv.iter().copied().fold(F::zero(), |a, b| if b > a { b } else { a });
    let min = sv.iter().copied().fold(max, |a, b| if b < a { b } else { a });
    (min, max)
}

/// Newton iteration `a ← a − J^{-1} k(a)` with monotone step halving.
///
/// Falls back to an SVD pseudo-inverse step when the Jacobian is singular or
/// the system is not square (Gauss-Newton).
pub fn newton_solve<F: Real>(
    sys: &NumericSystem<F>,
    start: &[F],
    opts: &NewtonOptions<F>,
) -> Result<CriticalPoint<F>> {
    if start.len() != sys.arity() {
        return Err(Error::LengthMismatch {
            expected: sys.arity(),
            got: start.len(),
        });
    }
    let limit = opts.box_radius * lift::<F>(10.0);
    let min_step = lift::<F>(1.0 / 1024.0);
    let mut a = DVector::from_column_slice(start);
    let mut r = sys.residual(a.as_slice())?;
    let mut used_pinv = false;
    let mut diverged = false;
    let mut iterations = 0;
    while norm(&r) > opts.tol && iterations < opts.max_iter {
        let j = sys.jacobian_at(a.as_slice())?;
        let (smin, smax) = singular_values(&j);
        if smax <= F::zero() {
            break;
        }
        let rhs = -r.clone();
        let well_posed = sys.is_square() && smin > opts.rcond * smax;
        let step = match well_posed.then(|| j.clone().lu().solve(&rhs)).flatten() {
            Some(s) => s,
            None => {
                used_pinv = true;
                j.svd(true, true)
                    .solve(&rhs, opts.rcond * smax)
                    .map_err(|e| Error::Internal(e.to_string()))?
            }
        };
        let current = norm(&r);
        let mut t = F::one();
        let (next, next_r) = loop {
            let cand = &a + &step * t;
            let cand_r = sys.residual(cand.as_slice())?;
            if norm(&cand_r) < current || t <= min_step {
                break (cand, cand_r);
            }
            t *= lift::<F>(0.5);
        };
        a = next;
        r = next_r;
        iterations += 1;
        if a.norm() > limit {
            diverged = true;
            break;
        }
    }
    let gradient_norm = norm(&r);
    let (smin, _) = singular_values(&sys.jacobian_at(a.as_slice())?);
    Ok(CriticalPoint {
        point: a.iter().copied().collect(),
        gradient_norm,
        hessian_min_singular_value: smin,
        iterations,
        converged: !diverged && gradient_norm <= opts.tol,
        singular: used_pinv || smin <= opts.tol.sqrt(),
        diverged,
    })
}

/// `count` points drawn uniformly from the ball `‖a‖ <= radius` (rejection from the cube).
pub fn sample_ball(dim: usize, count: usize, radius: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p: Vec<f64> = (0..dim).map(|_| rng.gen_range(-radius..=radius)).collect();
        if p.iter().map(|v| v * v).sum::<f64>() <= radius * radius {
            out.push(p);
        }
    }
    out
}

/// Newton from `count` seeded random starts in the ball of radius
/// `opts.box_radius`; endpoints sorted lexicographically.
pub fn multi_start<F: Real>(
    sys: &NumericSystem<F>,
    count: usize,
    seed: u64,
    opts: &NewtonOptions<F>,
) -> Result<Vec<CriticalPoint<F>>> {
    let radius = opts
        .box_radius
        .to_subset()
        .ok_or_else(|| Error::InvalidInput("box radius not representable".into()))?;
    let mut out = sample_ball(sys.arity(), count, radius, seed)
        .into_iter()
        .map(|p| {
            let start: Vec<F> = p.into_iter().map(lift::<F>).collect();
            newton_solve(sys, &start, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|x, y| {
        x.point
            .iter()
            .zip(&y.point)
            .map(|(a, b)| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprparse::parse_expr;
    use crate::gluing::GluingData;
    use crate::laufer::deformation_equations_laufer;
    use crate::superpotential::integrate_potential;
    use crate::GluingPoly;

    fn eqs(f: &str) -> DeformationResult {
        let d = GluingData::new(1, 3, parse_expr(f).unwrap(), GluingPoly::zero(), GluingPoly::zero()).unwrap();
        deformation_equations_laufer(&d).unwrap()
    }

    const REFERENCE: &str = "y2^2 + x^2*y2^3";

    #[test]
    fn evaluation_examples() {
        let e = eqs(REFERENCE);
        assert_eq!(eval_field(&e, &[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(eval_field(&e, &[1.0, 1.0]).unwrap(), vec![-2.0, -2.0]);
        let w = integrate_potential(&e).unwrap();
        assert_eq!(eval_potential(&w, &[1.0, 1.0]).unwrap(), -1.25);
        assert_eq!(eval_potential(&w, &[1.0f32, 1.0]).unwrap(), -1.25f32);
        assert!(eval_field(&e, &[1.0]).is_err());
    }

    #[test]
    fn fd_check_passes_and_detects_perturbation() {
        let e = eqs(REFERENCE);
        let w = integrate_potential(&e).unwrap();
        let pts = sample_ball(2, 20, 0.5, 7);
        let report = fd_gradient_check(&w, &e, &pts, 1e-5, 1e-6).unwrap();
        assert!(report.max_deviation < 1e-6);

        let mut bad = w.clone();
        bad.w = &bad.w + &crate::exprparse::parse_param_poly("1/1000*a0^3", 2).unwrap();
        let expected_worst = pts
            .iter()
            .map(|p| 3e-3 * p[0] * p[0])
            .fold(0.0f64, f64::max);
        match fd_gradient_check(&bad, &e, &pts, 1e-5, 1e-6) {
            Err(Error::FdCheck { deviation, .. }) => {
                assert!((deviation - expected_worst).abs() < 1e-6 + 1e-3 * expected_worst);
            }
            other => panic!("perturbation not detected: {other:?}"),
        }
    }

    #[test]
    fn fd_check_zero_potential() {
        let e = eqs("0");
        let w = integrate_potential(&e).unwrap();
        let report = fd_gradient_check(&w, &e, &sample_ball(2, 5, 0.5, 1), 1e-5, 1e-6).unwrap();
        assert_eq!(report.max_deviation, 0.0);
    }

    #[test]
    fn newton_from_origin_takes_no_steps() {
        let sys = NumericSystem::<f64>::new(&eqs(REFERENCE)).unwrap();
        let cp = newton_solve(&sys, &[0.0, 0.0], &NewtonOptions::default()).unwrap();
        assert!(cp.converged);
        assert_eq!(cp.iterations, 0);
    }

    #[test]
    fn newton_reference_curve_reaches_origin() {
        let sys = NumericSystem::<f64>::new(&eqs(REFERENCE)).unwrap();
        let cp = newton_solve(&sys, &[0.1, 0.1], &NewtonOptions::default()).unwrap();
        assert!(cp.converged, "{cp:?}");
        assert!(cp.point.iter().all(|v| v.abs() < 1e-3), "{cp:?}");
        assert!(cp.gradient_norm <= 1e-10);
    }

    #[test]
    fn newton_degenerate_line() {
        let e = eqs("x*y2^2");
        let sys = NumericSystem::<f64>::new(&e).unwrap();
        let cp = newton_solve(&sys, &[0.1, 0.5], &NewtonOptions::default()).unwrap();
        assert!(cp.converged);
        assert!(cp.point[0].abs() <= 1e-5);
        assert!(cp.singular);
        let exact = exact_residual_sq(&e, &cp.point).unwrap();
        assert!(exact.to_f64().unwrap() <= 1e-20);
    }

    #[test]
    fn degenerate_origin_converges_linearly() {
        // homogeneous quadratic field: J(a) a = 2 v(a), so each full step maps a to a / 2
        let sys = NumericSystem::<f64>::new(&eqs("x*y2^2")).unwrap();
        let mut prev = vec![0.1, 0.5];
        for _ in 0..6 {
            let opts = NewtonOptions {
                max_iter: 1,
                ..NewtonOptions::default()
            };
            let cp = newton_solve(&sys, &prev, &opts).unwrap();
            assert_eq!(cp.iterations, 1);
            for (x, y) in cp.point.iter().zip(&prev) {
                assert!((x - y / 2.0).abs() <= 1e-12 * y.abs().max(1e-300));
            }
            prev = cp.point;
        }
    }

    #[test]
    fn reference_curve_rate_is_linear() {
        // origin is degenerate; along the a1 and a0 directions the field is
        // homogeneous of degree 2 and 3, giving contraction factors 1/2 and 2/3
        let sys = NumericSystem::<f64>::new(&eqs(REFERENCE)).unwrap();
        let opts = NewtonOptions {
            max_iter: 1,
            tol: 0.0,
            ..NewtonOptions::default()
        };
        for start in [[0.1, 0.1], [0.15, -0.05], [-0.1, 0.12], [0.05, 0.0]] {
            let mut a = start.to_vec();
            let mut errs = Vec::new();
            for _ in 0..20 {
                a = newton_solve(&sys, &a, &opts).unwrap().point;
                errs.push(a.iter().map(|v| v * v).sum::<f64>().sqrt());
            }
            for w in errs[5..].windows(2) {
                let ratio = w[1] / w[0];
                assert!((0.49..=0.67).contains(&ratio), "{start:?}: ratio {ratio}");
            }
        }
    }

    #[test]
    fn newton_in_single_precision() {
        let sys = NumericSystem::<f32>::new(&eqs(REFERENCE)).unwrap();
        let opts = NewtonOptions {
            tol: 1e-5f32,
            max_iter: 100,
            box_radius: 1.0,
            rcond: 1e-6,
        };
        let cp = newton_solve(&sys, &[0.1f32, 0.1], &opts).unwrap();
        assert!(cp.converged);
    }

    #[test]
    fn multi_start_is_deterministic_and_sorted() {
        let sys = NumericSystem::<f64>::new(&eqs(REFERENCE)).unwrap();
        let opts = NewtonOptions {
            box_radius: 0.2,
            ..NewtonOptions::default()
        };
        let a = multi_start(&sys, 10, 3, &opts).unwrap();
        let b = multi_start(&sys, 10, 3, &opts).unwrap();
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0].point[0] <= w[1].point[0]));
    }

    #[test]
    fn sample_ball_respects_radius() {
        let pts = sample_ball(3, 50, 0.2, 11);
        assert_eq!(pts.len(), 50);
        assert!(pts.iter().all(|p| p.iter().map(|v| v * v).sum::<f64>() <= 0.04 + 1e-15));
    }
}
