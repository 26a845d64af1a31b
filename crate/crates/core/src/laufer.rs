//! Laufer curves: `g = h = 0` and `f = f(x, y2)` holomorphic on `U0`.
//!
//! Here `L^{-1}(s(a))` has a closed form, and the equations are read straight
//! off the Taylor coefficients `f_i(a)` of `f(x, Σ a_j x^j)`: `k_i = −f_i`.

use std::fmt;

use serde::Serialize;

use crate::algebra::Chart;
use crate::cech::ZeroCochain;
use crate::gluing::{section_of_h0, GluingData};
use crate::{ChartSeries, Error, ParamPoly, Rat, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Laufer,
    General,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Laufer => "laufer",
            Method::General => "general",
        })
    }
}

/// The equations `k_1 .. k_{n-1}` cutting out the versal deformation space,
/// plus the auxiliary coefficients used by the universal family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationResult {
    pub m: u32,
    pub n: u32,
    /// `k_1 .. k_{n-1}`.
    pub equations: Vec<ParamPoly>,
    /// Value of `z1` on the family chart over `U1` (for Laufer curves, `f_0`).
    pub k0: ParamPoly,
    /// `(j, k_j)` for `j >= n`: the family has `y1 = Σ_{j>=n} k_j x^{j-n}`.
    pub higher: Vec<(u32, ParamPoly)>,
    pub method: Method,
    /// `None` when exact, otherwise the parameter degree the result is valid to.
    pub degree_bound: Option<u32>,
}

impl DeformationResult {
    pub fn arity(&self) -> usize {
        self.m as usize + 1
    }

    /// Equal number of equations and unknowns, i.e. `m - n = -2`.
    pub fn is_square(&self) -> bool {
        self.equations.len() == self.arity()
    }

    /// Equations truncated to parameter degree `bound`.
    pub fn truncated_equations(&self, bound: u32) -> Vec<ParamPoly> {
        self.equations.iter().map(|k| k.truncate(bound)).collect()
    }

    /// Every equation vanishes to order at least 2 at the origin.
    pub fn starts_in_degree_two(&self) -> bool {
        self.equations
            .iter()
            .all(|k| k.min_degree().is_none_or(|d| d >= 2))
    }
}

fn require_laufer(d: &GluingData) -> Result<()> {
    if d.is_laufer() {
        Ok(())
    } else {
        Err(Error::NotLaufer(
            "g and h must vanish and f must be a polynomial in x, y2 without negative x powers"
                .into(),
        ))
    }
}

/// `f(x, Σ a_j x^j)` as a series in `x`.
pub fn taylor_series(d: &GluingData) -> Result<ChartSeries> {
    require_laufer(d)?;
    let s = section_of_h0(d, None);
    d.f().substitute_y(&s.phi0[0], &s.phi0[1], None)
}

/// `[f_0, .., f_max_index]`.
pub fn taylor_coeffs(d: &GluingData, max_index: u32) -> Result<Vec<ParamPoly>> {
    let g = taylor_series(d)?;
    Ok((0..=max_index as i64).map(|i| g.coeff(i)).collect())
}

/// Equations `k_i = −f_i`, `1 <= i <= n-1`; exact.
pub fn deformation_equations_laufer(d: &GluingData) -> Result<DeformationResult> {
    let g = taylor_series(d)?;
    let n = d.n() as i64;
    let equations = (1..n).map(|i| -g.coeff(i)).collect();
    let higher = g
        .terms()
        .filter(|&(j, _)| j >= n)
        .map(|(j, c)| (j as u32, -c))
        .collect();
    Ok(DeformationResult {
        m: d.m(),
        n: d.n(),
        equations,
        k0: g.coeff(0),
        higher,
        method: Method::Laufer,
        degree_bound: None,
    })
}

/// `L^{-1}(s(a)) = ((−h, Σ a_i x^i), (f_0, Σ a_i w^{m-i}))` with
/// `h = Σ_{i>=n} f_i x^{i-n}`.
pub fn closed_form_linv(d: &GluingData) -> Result<ZeroCochain> {
    let g = taylor_series(d)?;
    let n = d.n() as i64;
    let s = section_of_h0(d, None);
    let tail = g.filter_exponents(|e| e >= n).shift(-n);
    ZeroCochain::new(
        [-tail, s.phi0[1].clone()],
        [ChartSeries::constant(Chart::W, g.coeff(0)), s.phi1[1].clone()],
        None,
    )
}

/// Chart equations of the universal family over the versal space:
/// `y1 = y1(x), y2 = y2(x)` over `U0` and `z1, z2(w)` over `U1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCharts {
    pub m: u32,
    pub n: u32,
    pub y1: ChartSeries,
    pub y2: ChartSeries,
    pub z1: ChartSeries,
    pub z2: ChartSeries,
    /// `k_1 .. k_{n-1}`, generators of the ideal the gluing holds modulo.
    pub equations: Vec<ParamPoly>,
}

/// Builds the universal family and checks that it glues.
///
/// Signs are the ones for which `z1 = x^n y1 + f(x, y2)` reproduces
/// `z1 = k_0` up to `−Σ_{i=1}^{n-1} k_i x^i`: `y1 = Σ_{j>=n} k_j x^{j-n}`
/// with `k_j = −f_j`, and `z1 = f_0`.
pub fn family_charts(d: &GluingData) -> Result<FamilyCharts> {
    let eqs = deformation_equations_laufer(d)?;
    let arity = d.arity();
    let n = d.n();
    let mut y1 = ChartSeries::zero(Chart::X, arity);
    for (j, k) in &eqs.higher {
        y1 = &y1 + &ChartSeries::monomial(Chart::X, (j - n) as i64, k.clone());
    }
    let s = section_of_h0(d, None);
    let family = FamilyCharts {
        m: d.m(),
        n,
        y1,
        y2: s.phi0[1].clone(),
        z1: ChartSeries::constant(Chart::W, eqs.k0.clone()),
        z2: s.phi1[1].clone(),
        equations: eqs.equations,
    };
    let residual = family.gluing_residual(d)?;
    if residual != family.expected_residual() {
        return Err(Error::Internal(format!(
            "family charts do not glue: residual {residual}"
        )));
    }
    Ok(family)
}

impl FamilyCharts {
    /// `(x^n y1 + f(x, y1, y2)) − z1` in `x`, together with the check that
    /// `x^-m y2 = z2`.
    pub fn gluing_residual(&self, d: &GluingData) -> Result<ChartSeries> {
        let z2 = self.y2.shift(-(self.m as i64)).convert();
        if z2 != self.z2 {
            return Err(Error::Internal("z2 does not match x^-m y2".into()));
        }
        let glued = &self.y1.shift(self.n as i64) + &d.f().substitute_y(&self.y1, &self.y2, None)?;
        Ok(&glued - &self.z1.convert())
    }

    /// `−Σ_{i=1}^{n-1} k_i x^i`, which vanishes on the versal space.
    pub fn expected_residual(&self) -> ChartSeries {
        let arity = self.y2.arity();
        self.equations
            .iter()
            .enumerate()
            .fold(ChartSeries::zero(Chart::X, arity), |acc, (i, k)| {
                &acc + &ChartSeries::monomial(Chart::X, i as i64 + 1, -k)
            })
    }

    /// Substitutes `a_j = value` in every chart and equation.
    pub fn specialize(&self, j: usize, value: &Rat) -> Result<FamilyCharts> {
        let sub = |s: &ChartSeries| -> Result<ChartSeries> {
            let terms = s
                .terms()
                .map(|(e, c)| Ok((e, c.partial_eval(j, value)?)))
                .collect::<Result<Vec<_>>>()?;
            ChartSeries::from_terms(s.chart(), s.arity(), terms)
        };
        Ok(FamilyCharts {
            m: self.m,
            n: self.n,
            y1: sub(&self.y1)?,
            y2: sub(&self.y2)?,
            z1: sub(&self.z1)?,
            z2: sub(&self.z2)?,
            equations: self
                .equations
                .iter()
                .map(|k| k.partial_eval(j, value))
                .collect::<Result<_>>()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::map_l;
    use crate::exprparse::{parse_expr, parse_param_poly};
    use crate::{int, GluingPoly};

    fn laufer(m: i64, n: i64, f: &str) -> GluingData {
        GluingData::new(m, n, parse_expr(f).unwrap(), GluingPoly::zero(), GluingPoly::zero()).unwrap()
    }

    fn p(src: &str) -> ParamPoly {
        parse_param_poly(src, 2).unwrap()
    }

    #[test]
    fn taylor_reference_curve() {
        let d = laufer(1, 3, "y2^2 + x^2*y2^3");
        let f = taylor_coeffs(&d, 5).unwrap();
        assert_eq!(
            f,
            vec![
                p("a0^2"),
                p("2*a0*a1"),
                p("a1^2 + a0^3"),
                p("3*a0^2*a1"),
                p("3*a0*a1^2"),
                p("a1^3"),
            ]
        );
    }

    #[test]
    fn taylor_zero_and_shifted() {
        let d = laufer(1, 3, "0");
        assert!(taylor_coeffs(&d, 4).unwrap().iter().all(ParamPoly::is_zero));
        let d = laufer(1, 3, "x*y2^2");
        let f = taylor_coeffs(&d, 3).unwrap();
        assert_eq!(f, vec![p("0"), p("a0^2"), p("2*a0*a1"), p("a1^2")]);
    }

    #[test]
    fn non_laufer_rejected() {
        let d = laufer(1, 3, "y1*y2");
        assert!(matches!(taylor_coeffs(&d, 2), Err(Error::NotLaufer(_))));
        assert!(matches!(deformation_equations_laufer(&d), Err(Error::NotLaufer(_))));
        assert!(matches!(family_charts(&d), Err(Error::NotLaufer(_))));
    }

    #[test]
    fn equations_examples() {
        let r = deformation_equations_laufer(&laufer(1, 3, "y2^2 + x^2*y2^3")).unwrap();
        assert_eq!(r.equations, vec![p("-2*a0*a1"), p("-a1^2 - a0^3")]);
        assert_eq!(r.k0, p("a0^2"));
        assert_eq!(
            r.higher,
            vec![(3, p("-3*a0^2*a1")), (4, p("-3*a0*a1^2")), (5, p("-a1^3"))]
        );
        assert!(r.starts_in_degree_two());

        let r = deformation_equations_laufer(&laufer(1, 3, "0")).unwrap();
        assert_eq!(r.equations.len(), 2);
        assert!(r.equations.iter().all(ParamPoly::is_zero));

        let r = deformation_equations_laufer(&laufer(1, 3, "x*y2^2")).unwrap();
        assert_eq!(r.equations, vec![p("-a0^2"), p("-2*a0*a1")]);
    }

    #[test]
    fn closed_form_inverse() {
        let d = laufer(1, 3, "y2^2");
        let phi = closed_form_linv(&d).unwrap();
        assert!(phi.phi0[0].is_zero());
        assert_eq!(phi.phi1[0].coeff(0), p("a0^2"));
        assert_eq!(map_l(&phi, &d), section_of_h0(&d, None));

        let d = laufer(1, 3, "0");
        assert_eq!(closed_form_linv(&d).unwrap(), section_of_h0(&d, None));

        let d = laufer(1, 3, "y2^2 + x^2*y2^3");
        let phi = closed_form_linv(&d).unwrap();
        let h = -&phi.phi0[0];
        assert_eq!(h.coeff(0), p("3*a0^2*a1"));
        assert_eq!(h.coeff(1), p("3*a0*a1^2"));
        assert_eq!(h.coeff(2), p("a1^3"));
        assert_eq!(map_l(&phi, &d), section_of_h0(&d, None));
    }

    #[test]
    fn family_examples() {
        let fam = family_charts(&laufer(1, 3, "0")).unwrap();
        assert!(fam.y1.is_zero() && fam.z1.is_zero());

        let fam = family_charts(&laufer(1, 3, "x*y2^2")).unwrap();
        assert_eq!(fam.y1, ChartSeries::constant(Chart::X, -p("a1^2")));
        assert!(fam.z1.is_zero());

        let d = laufer(1, 3, "y2^2 + x^2*y2^3");
        let fam = family_charts(&d).unwrap();
        assert_eq!(fam.z1.coeff(0), p("a0^2"));
        assert_eq!(fam.y1.to_string(), "(-3*a0^2*a1) + (-3*a0*a1^2)*x + (-1*a1^3)*x^2");
    }

    #[test]
    fn family_glues_on_the_versal_space() {
        // zero set of (−a0^2, −2 a0 a1) is the line a0 = 0
        let d = laufer(1, 3, "x*y2^2");
        let fam = family_charts(&d).unwrap().specialize(0, &int(0)).unwrap();
        assert!(fam.equations.iter().all(ParamPoly::is_zero));
        assert!(fam.gluing_residual(&d).unwrap().is_zero());
    }
}
