//! Čech cochains of the normal bundle for the cover `{V0, V1}` of the curve,
//! and the maps used to cut the versal deformation space out of `H^0(N)`:
//!
//! * `δ : C^0 → C^1`, the coboundary;
//! * `H : C^1 → H^1(N)`, truncation to `w^-1 .. w^-(n-1)` in the first slot;
//! * `B : C^1 → δC^0`, the complementary projection;
//! * `E0 : δC^0 → C^0`, a section of `δ`;
//! * `K : C^0 → C^1`, the patching defect of the curve described by a cochain;
//! * `L = 1 + E0·B·K − E0·δ`, invertible near 0.
//!
//! One-cochains are always written in the `V1` trivialization (chart `w`).
//! Everything is computed modulo parameter degree `> D`.

use crate::algebra::Chart;
use crate::gluing::{section_of_h0, GluingData};
use crate::laufer::{DeformationResult, Method};
use crate::{ChartSeries, Error, ParamPoly, Result};

/// Element of `C^0(V, N)`: a pair of functions holomorphic on `V0` (in `x`) and
/// a pair holomorphic on `V1` (in `w`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroCochain {
    pub phi0: [ChartSeries; 2],
    pub phi1: [ChartSeries; 2],
    pub bound: Option<u32>,
}

impl ZeroCochain {
    /// Checks charts and holomorphy, then truncates to `bound`.
    pub fn new(phi0: [ChartSeries; 2], phi1: [ChartSeries; 2], bound: Option<u32>) -> Result<Self> {
        for s in &phi0 {
            expect_holomorphic(s, Chart::X)?;
        }
        for s in &phi1 {
            expect_holomorphic(s, Chart::W)?;
        }
        let arity = phi0[0].arity();
        if let Some(s) = phi0.iter().chain(&phi1).find(|s| s.arity() != arity) {
            return Err(Error::ArityMismatch {
                left: arity,
                right: s.arity(),
            });
        }
        Ok(ZeroCochain { phi0, phi1, bound }.truncated())
    }

    pub fn zero(arity: usize, bound: Option<u32>) -> Self {
        ZeroCochain {
            phi0: [ChartSeries::zero(Chart::X, arity), ChartSeries::zero(Chart::X, arity)],
            phi1: [ChartSeries::zero(Chart::W, arity), ChartSeries::zero(Chart::W, arity)],
            bound,
        }
    }

    pub fn arity(&self) -> usize {
        self.phi0[0].arity()
    }

    pub fn is_zero(&self) -> bool {
        self.phi0.iter().chain(&self.phi1).all(ChartSeries::is_zero)
    }

    fn map(&self, f: impl Fn(&ChartSeries) -> ChartSeries) -> Self {
        ZeroCochain {
            phi0: [f(&self.phi0[0]), f(&self.phi0[1])],
            phi1: [f(&self.phi1[0]), f(&self.phi1[1])],
            bound: self.bound,
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&ChartSeries, &ChartSeries) -> ChartSeries) -> Self {
        ZeroCochain {
            phi0: [f(&self.phi0[0], &other.phi0[0]), f(&self.phi0[1], &other.phi0[1])],
            phi1: [f(&self.phi1[0], &other.phi1[0]), f(&self.phi1[1], &other.phi1[1])],
            bound: self.bound,
        }
        .truncated()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn truncate(&self, bound: u32) -> Self {
        let mut out = self.map(|s| s.truncate(bound));
        out.bound = Some(bound);
        out
    }

    /// Part of exact parameter degree `d` in every component.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        self.map(|s| s.map_coeffs(|c| c.homogeneous_part(d)))
    }

    /// Smallest parameter degree occurring anywhere, `None` for zero.
    pub fn min_param_degree(&self) -> Option<u32> {
        self.phi0
            .iter()
            .chain(&self.phi1)
            .filter_map(ChartSeries::min_param_degree)
            .min()
    }

    fn truncated(self) -> Self {
        match self.bound {
            Some(b) => self.map(|s| s.truncate(b)),
            None => self,
        }
    }
}

fn expect_holomorphic(s: &ChartSeries, chart: Chart) -> Result<()> {
    if s.chart() != chart {
        return Err(Error::ChartMismatch {
            left: chart.symbol(),
            right: s.chart().symbol(),
        });
    }
    match s.min_exponent() {
        Some(e) if e < 0 => Err(Error::InvalidInput(format!(
            "0-cochain component has {}^{e}, not holomorphic on its chart",
            chart.symbol()
        ))),
        _ => Ok(()),
    }
}

/// Element of `C^1(V, N)`: a pair of Laurent series on the overlap, in the `V1`
/// trivialization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneCochain {
    pub psi: [ChartSeries; 2],
    pub bound: Option<u32>,
}

impl OneCochain {
    pub fn new(psi: [ChartSeries; 2], bound: Option<u32>) -> Result<Self> {
        for s in &psi {
            if s.chart() != Chart::W {
                return Err(Error::ChartMismatch {
                    left: 'w',
                    right: s.chart().symbol(),
                });
            }
        }
        if psi[0].arity() != psi[1].arity() {
            return Err(Error::ArityMismatch {
                left: psi[0].arity(),
                right: psi[1].arity(),
            });
        }
        Ok(OneCochain { psi, bound }.truncated())
    }

    pub fn arity(&self) -> usize {
        self.psi[0].arity()
    }

    pub fn is_zero(&self) -> bool {
        self.psi.iter().all(ChartSeries::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        OneCochain {
            psi: [&self.psi[0] + &other.psi[0], &self.psi[1] + &other.psi[1]],
            bound: self.bound,
        }
        .truncated()
    }

    pub fn sub(&self, other: &Self) -> Self {
        OneCochain {
            psi: [&self.psi[0] - &other.psi[0], &self.psi[1] - &other.psi[1]],
            bound: self.bound,
        }
        .truncated()
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        OneCochain {
            psi: [
                self.psi[0].map_coeffs(|c| c.homogeneous_part(d)),
                self.psi[1].map_coeffs(|c| c.homogeneous_part(d)),
            ],
            bound: self.bound,
        }
    }

    fn truncated(self) -> Self {
        match self.bound {
            Some(b) => OneCochain {
                psi: [self.psi[0].truncate(b), self.psi[1].truncate(b)],
                bound: self.bound,
            },
            None => self,
        }
    }
}

/// `δφ = φ^1 − φ^0·F`, written in `w`.
pub fn coboundary(phi: &ZeroCochain, d: &GluingData) -> OneCochain {
    let t = d.transition().apply([&phi.phi0[0], &phi.phi0[1]]);
    OneCochain {
        psi: [&phi.phi1[0] - &t[0], &phi.phi1[1] - &t[1]],
        bound: phi.bound,
    }
}

fn in_h1_window(e: i64, n: u32) -> bool {
    -(n as i64) < e && e < 0
}

/// Projection onto `H^1(N)`: first-slot coefficients of `w^-1 .. w^-(n-1)`, second slot zeroed.
pub fn project_h(psi: &OneCochain, n: u32) -> OneCochain {
    OneCochain {
        psi: [
            psi.psi[0].filter_exponents(|e| in_h1_window(e, n)),
            ChartSeries::zero(Chart::W, psi.arity()),
        ],
        bound: psi.bound,
    }
}

/// `[k_1, .., k_{n-1}]` where `H(ψ) = (Σ k_i w^-i, 0)`.
pub fn h1_coefficients(psi: &OneCochain, n: u32) -> Vec<ParamPoly> {
    (1..n as i64).map(|i| psi.psi[0].coeff(-i)).collect()
}

/// Projection onto coboundaries: drops the `H^1` window of the first slot.
pub fn project_b(psi: &OneCochain, n: u32) -> OneCochain {
    OneCochain {
        psi: [
            psi.psi[0].filter_exponents(|e| !in_h1_window(e, n)),
            psi.psi[1].clone(),
        ],
        bound: psi.bound,
    }
}

/// The section `E0` of `δ` on coboundary-shaped one-cochains.
pub fn lift_e0(psi: &OneCochain, d: &GluingData) -> Result<ZeroCochain> {
    let (m, n) = (d.m() as i64, d.n() as i64);
    let arity = psi.arity();
    let [b, c] = &psi.psi;
    let mut phi = ZeroCochain::zero(arity, psi.bound);
    for (i, coeff) in b.terms() {
        if in_h1_window(i, n as u32) {
            return Err(Error::NotACoboundary { exponent: i });
        }
        if i <= -n {
            phi.phi0[0].add_coeff(-n - i, -coeff);
        } else {
            phi.phi1[0].add_coeff(i, coeff.clone());
        }
    }
    for (i, coeff) in c.terms() {
        if i < 0 {
            phi.phi0[1].add_coeff(m - i, -coeff);
        } else {
            phi.phi1[1].add_coeff(i, coeff.clone());
        }
    }
    Ok(phi)
}

/// Patching defect of the curve `y = φ^0(x)`, `z = φ^1(w)`,
/// `w = x^-1 + h(x, φ^0)`: zero exactly when the pieces glue through the
/// transition maps.
pub fn map_k(phi: &ZeroCochain, d: &GluingData) -> OneCochain {
    let bound = phi.bound;
    let arity = phi.arity();
    let [y1, y2] = &phi.phi0;
    let subst = |p: &crate::GluingPoly| {
        p.substitute_y(y1, y2, bound)
            .expect("0-cochain components share chart and arity")
    };
    let pulled_back: [ChartSeries; 2] = if d.h().is_zero() {
        [phi.phi1[0].convert(), phi.phi1[1].convert()]
    } else {
        let wmap = &ChartSeries::monomial(Chart::X, -1, ParamPoly::one(arity)) + &subst(d.h());
        [
            phi.phi1[0]
                .compose(&wmap, bound)
                .expect("phi1 is holomorphic in w"),
            phi.phi1[1]
                .compose(&wmap, bound)
                .expect("phi1 is holomorphic in w"),
        ]
    };
    let first = &pulled_back[0] - &(&y1.shift(d.n() as i64) + &subst(d.f()));
    let second = &pulled_back[1] - &(&y2.shift(-(d.m() as i64)) + &subst(d.g()));
    OneCochain {
        psi: [first.convert(), second.convert()],
        bound,
    }
    .truncated()
}

/// `L(φ) = φ + E0·B·K(φ) − E0·δ(φ)`.
pub fn map_l(phi: &ZeroCochain, d: &GluingData) -> ZeroCochain {
    let k = map_k(phi, d);
    let delta = coboundary(phi, d);
    let ebk = lift_e0(&project_b(&k, d.n()), d).expect("B lands in coboundaries");
    let ed = lift_e0(&delta, d).expect("δφ is a coboundary");
    phi.add(&ebk).sub(&ed)
}

/// Solves `L(φ) = target` modulo parameter degree `> bound` by the fixed-point
/// iteration `φ ← target − E0·B·(K − δ)(φ)`.
///
/// The correction is at least quadratic in `φ` (`f, g, h ∈ I^2`), so each pass
/// fixes one more parameter degree. Returns the solution and the number of
/// passes until it stopped changing.
pub fn invert_l(target: &ZeroCochain, d: &GluingData, bound: u32) -> Result<(ZeroCochain, usize)> {
    if bound == 0 {
        return Err(Error::InvalidInput("degree bound must be >= 1".into()));
    }
    let target = target.truncate(bound);
    let mut phi = target.clone();
    let max_passes = bound as usize + 2;
    for pass in 1..=max_passes {
        let nonlinear = map_k(&phi, d).sub(&coboundary(&phi, d));
        let correction = lift_e0(&project_b(&nonlinear, d.n()), d)?;
        let next = target.sub(&correction);
        if next == phi {
            return Ok((phi, pass));
        }
        phi = next;
    }
    Err(Error::NonTermination {
        iterations: max_passes,
    })
}

/// `L^{-1}(s(a))` and `K` of it, the latter carrying the obstruction in its `H^1` part.
pub fn obstruction(d: &GluingData, bound: u32) -> Result<(ZeroCochain, OneCochain)> {
    let s = section_of_h0(d, Some(bound));
    let (phi, _) = invert_l(&s, d, bound)?;
    let k = map_k(&phi, d);
    Ok((phi, k))
}

/// Versal deformation equations `k_1 .. k_{n-1}` from `H·K·L^{-1}(s(a))`,
/// valid modulo parameter degree `> bound`.
pub fn deformation_equations_general(d: &GluingData, bound: u32) -> Result<DeformationResult> {
    let (phi, k) = obstruction(d, bound)?;
    let equations = h1_coefficients(&k, d.n());
    let k0 = phi.phi1[0].coeff(0);
    let higher = phi.phi0[0]
        .terms()
        .map(|(e, c)| (e as u32 + d.n(), c.clone()))
        .collect();
    Ok(DeformationResult {
        m: d.m(),
        n: d.n(),
        equations,
        k0,
        higher,
        method: Method::General,
        degree_bound: Some(bound),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprparse::{parse_expr, parse_param_poly};
    use crate::GluingPoly;

    fn laufer(m: i64, n: i64, f: &str) -> GluingData {
        GluingData::new(m, n, parse_expr(f).unwrap(), GluingPoly::zero(), GluingPoly::zero()).unwrap()
    }

    fn p(src: &str, arity: usize) -> ParamPoly {
        parse_param_poly(src, arity).unwrap()
    }

    fn w(e: i64, c: ParamPoly) -> ChartSeries {
        ChartSeries::monomial(Chart::W, e, c)
    }

    #[test]
    fn coboundary_examples() {
        let d = laufer(1, 3, "0");
        assert!(coboundary(&section_of_h0(&d, None), &d).is_zero());

        let mut phi = ZeroCochain::zero(2, None);
        phi.phi1[0] = w(0, p("7", 2));
        let delta = coboundary(&phi, &d);
        assert_eq!(delta.psi[0], w(0, p("7", 2)));
        assert!(delta.psi[1].is_zero());
    }

    #[test]
    fn project_h_and_b_examples() {
        let one = ParamPoly::one(2);
        let psi = OneCochain::new(
            [
                &(&w(0, p("a0", 2)) + &w(-1, p("a1", 2))) + &w(-3, p("a0*a1", 2)),
                w(2, one.clone()),
            ],
            None,
        )
        .unwrap();
        let h = project_h(&psi, 3);
        assert_eq!(h.psi[0], w(-1, p("a1", 2)));
        assert!(h.psi[1].is_zero());
        assert_eq!(project_h(&h, 3), h);
        assert_eq!(h1_coefficients(&psi, 3), vec![p("a1", 2), ParamPoly::zero(2)]);

        let psi2 = OneCochain::new(
            [
                &(&w(-1, one.clone()) + &w(-3, one.clone())) + &w(0, one.clone()),
                w(-5, one.clone()),
            ],
            None,
        )
        .unwrap();
        let b = project_b(&psi2, 3);
        assert_eq!(b.psi[0], &w(-3, one.clone()) + &w(0, one.clone()));
        assert_eq!(b.psi[1], w(-5, one.clone()));
        assert!(project_h(&b, 3).is_zero());
    }

    #[test]
    fn lift_e0_examples() {
        let d = laufer(1, 3, "0");
        let one = ParamPoly::one(2);
        let zero_w = ChartSeries::zero(Chart::W, 2);

        let psi = OneCochain::new([w(-3, one.clone()), zero_w.clone()], None).unwrap();
        let phi = lift_e0(&psi, &d).unwrap();
        assert_eq!(phi.phi0[0], ChartSeries::constant(Chart::X, -one.clone()));
        assert!(phi.phi0[1].is_zero() && phi.phi1[0].is_zero() && phi.phi1[1].is_zero());
        assert_eq!(coboundary(&phi, &d), psi);

        let psi = OneCochain::new([zero_w.clone(), w(-1, one.clone())], None).unwrap();
        let phi = lift_e0(&psi, &d).unwrap();
        assert_eq!(phi.phi0[1], ChartSeries::monomial(Chart::X, 2, -one.clone()));
        assert_eq!(coboundary(&phi, &d), psi);

        let zero = OneCochain::new([zero_w.clone(), zero_w.clone()], None).unwrap();
        assert!(lift_e0(&zero, &d).unwrap().is_zero());

        let bad = OneCochain::new([w(-2, one), zero_w], None).unwrap();
        assert_eq!(lift_e0(&bad, &d).unwrap_err(), Error::NotACoboundary { exponent: -2 });
    }

    #[test]
    fn k_examples() {
        let d = laufer(1, 3, "y2^2");
        assert!(map_k(&ZeroCochain::zero(2, Some(4)), &d).is_zero());

        let s = section_of_h0(&d, Some(4));
        let k = map_k(&s, &d);
        // oracle: -(a0 + a1 x)^2 in w
        let y2 = s.phi0[1].clone();
        let expected = (-(y2.pow_truncated(2, None))).convert();
        assert_eq!(k.psi[0], expected);
        assert_eq!(k.psi[0].coeff(-2), -p("a1^2", 2));
        assert!(k.psi[1].is_zero());

        let d = laufer(1, 3, "y1*y2 + x*y1^3");
        let s = section_of_h0(&d, Some(4));
        assert!(map_k(&s, &d).is_zero());
    }

    #[test]
    fn l_examples() {
        let d = laufer(1, 3, "y2^2 + x^2*y2^3");
        assert!(map_l(&ZeroCochain::zero(2, Some(5)), &d).is_zero());

        let trivial = laufer(2, 3, "0");
        let s = section_of_h0(&trivial, Some(3));
        assert_eq!(map_l(&s, &trivial), s);
    }

    #[test]
    fn invert_trivial_and_y1_divisible() {
        let d = laufer(1, 3, "0");
        let s = section_of_h0(&d, Some(4));
        let (phi, passes) = invert_l(&s, &d, 4).unwrap();
        assert_eq!((phi, passes), (s, 1));

        let d = laufer(1, 3, "y1*y2");
        let s = section_of_h0(&d, Some(4));
        let (phi, _) = invert_l(&s, &d, 4).unwrap();
        assert_eq!(phi, s);
    }

    #[test]
    fn invert_laufer_square() {
        // f_2 = a1^2 has index < n, so h = Σ_{i≥3} f_i x^{i-3} = 0 and φ^0_1 stays 0.
        let d = laufer(1, 3, "y2^2");
        let s = section_of_h0(&d, Some(3));
        let (phi, passes) = invert_l(&s, &d, 3).unwrap();
        assert_eq!(passes, 2);
        assert_eq!(phi.phi1[0], ChartSeries::constant(Chart::W, p("a0^2", 2)));
        assert!(phi.phi0[0].is_zero());
        assert_eq!(map_l(&phi, &d), s);
    }

    #[test]
    fn reference_curve_general_path() {
        let d = laufer(1, 3, "y2^2 + x^2*y2^3");
        let r = deformation_equations_general(&d, 4).unwrap();
        assert_eq!(r.equations, vec![p("-2*a0*a1", 2), p("-a1^2 - a0^3", 2)]);
        assert_eq!(r.k0, p("a0^2", 2));
    }

    #[test]
    fn unobstructed_gluing() {
        let d = laufer(2, 4, "0");
        let r = deformation_equations_general(&d, 5).unwrap();
        assert_eq!(r.equations.len(), 3);
        assert!(r.equations.iter().all(ParamPoly::is_zero));
    }

    #[test]
    fn y1_term_inactive_at_low_order() {
        let d = laufer(1, 3, "y2^2 + y1*y2");
        let r = deformation_equations_general(&d, 3).unwrap();
        assert_eq!(r.equations, vec![p("-2*a0*a1", 2), p("-a1^2", 2)]);
        let plain = deformation_equations_general(&laufer(1, 3, "y2^2"), 3).unwrap();
        assert_eq!(r.equations, plain.equations);
    }

    #[test]
    fn non_laufer_gluing_with_h_and_g() {
        let f = parse_expr("y2^2 + y1*y2").unwrap();
        let g = parse_expr("x^-1*y2^2").unwrap();
        let h = parse_expr("y2^2").unwrap();
        let d = GluingData::new(1, 3, f, g, h).unwrap();
        let s = section_of_h0(&d, Some(5));
        let (phi, _) = invert_l(&s, &d, 5).unwrap();
        assert_eq!(map_l(&phi, &d), s);
        let k = map_k(&phi, &d);
        // K(L^{-1} s) lives entirely in the H^1 window
        assert!(k.psi[1].is_zero());
        assert!(k.psi[0].terms().all(|(e, _)| in_h1_window(e, 3)));
        assert_eq!(k.psi[0].coeff(-1).min_degree(), Some(2));
    }
}
