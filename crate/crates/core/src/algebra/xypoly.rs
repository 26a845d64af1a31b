use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use super::{power_text, write_sum, Chart, LaurentSeries, MPoly};
use crate::{Coeff, Error, Result};

/// Exponents of a monomial `x^x * y1^y1 * y2^y2`; `x` may be negative.
///
/// Ordered by y-degree, then `y2`, then `y1`, then `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct XyExp {
    pub x: i64,
    pub y1: u32,
    pub y2: u32,
}

impl XyExp {
    pub fn new(x: i64, y1: u32, y2: u32) -> Self {
        XyExp { x, y1, y2 }
    }

    pub fn y_degree(&self) -> u32 {
        self.y1 + self.y2
    }
}

impl Ord for XyExp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.y_degree()
            .cmp(&other.y_degree())
            .then(self.y2.cmp(&other.y2))
            .then(self.y1.cmp(&other.y1))
            .then(self.x.cmp(&other.x))
    }
}

impl PartialOrd for XyExp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Display for XyExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = [
            power_text("x", self.x),
            power_text("y1", self.y1 as i64),
            power_text("y2", self.y2 as i64),
        ]
        .into_iter()
        .flatten()
        .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Polynomial in `x^{±1}, y1, y2`, the ambient coordinates of the chart `U0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XyPoly<C> {
    terms: BTreeMap<XyExp, C>,
}

impl<C: Coeff> Default for XyPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> XyPoly<C> {
    pub fn zero() -> Self {
        XyPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(c: C, x: i64, y1: u32, y2: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(XyExp::new(x, y1, y2), c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (XyExp, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&XyExp, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: XyExp) -> C {
        self.terms.get(&e).cloned().unwrap_or_else(C::zero)
    }

    pub(crate) fn add_term(&mut self, e: XyExp, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn depends_on_y1(&self) -> bool {
        self.terms.keys().any(|e| e.y1 > 0)
    }

    pub fn min_x_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.x).min()
    }

    pub fn max_x_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.x).max()
    }

    pub fn max_y_degree(&self) -> Option<u32> {
        self.terms.keys().map(XyExp::y_degree).max()
    }

    /// First monomial (in term order) of y-degree below `d`.
    pub fn first_below_y_degree(&self, d: u32) -> Option<(XyExp, C)> {
        self.terms
            .iter()
            .find(|(e, _)| e.y_degree() < d)
            .map(|(e, c)| (*e, c.clone()))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::monomial(C::one(), 0, 0, 0), |acc, _| &acc * self)
    }

    /// Partial derivative with respect to `y2`.
    pub fn diff_y2(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e.y2 > 0 {
                let k = C::from_u32(e.y2).expect("exponent fits coefficient type");
                out.add_term(XyExp::new(e.x, e.y1, e.y2 - 1), c.clone() * k);
            }
        }
        out
    }

    /// Expands `self(x, y1_val, y2_val)` as a Laurent series in `x`.
    ///
    /// Both substituted values must be series in `x` with the same arity; the
    /// parameter degree of every intermediate product is truncated at `bound`.
    pub fn substitute_y(
        &self,
        y1_val: &LaurentSeries<C>,
        y2_val: &LaurentSeries<C>,
        bound: Option<u32>,
    ) -> Result<LaurentSeries<C>> {
        for s in [y1_val, y2_val] {
            if s.chart() != Chart::X {
                return Err(Error::ChartMismatch {
                    left: 'x',
                    right: s.chart().symbol(),
                });
            }
        }
        if y1_val.arity() != y2_val.arity() {
            return Err(Error::ArityMismatch {
                left: y1_val.arity(),
                right: y2_val.arity(),
            });
        }
        let arity = y1_val.arity();
        let mut pow1 = PowerCache::new(y1_val, bound);
        let mut pow2 = PowerCache::new(y2_val, bound);
        let mut grouped: HashMap<(u32, u32), LaurentSeries<C>> = HashMap::new();
        for (e, c) in &self.terms {
            let entry = grouped
                .entry((e.y1, e.y2))
                .or_insert_with(|| LaurentSeries::zero(Chart::X, arity));
            entry.add_coeff(e.x, MPoly::constant(arity, c.clone()).truncate_opt(bound));
        }
        let mut keys: Vec<_> = grouped.keys().copied().collect();
        keys.sort_unstable();
        let mut out = LaurentSeries::zero(Chart::X, arity);
        for key in keys {
            let (e1, e2) = key;
            let xpart = &grouped[&key];
            let p1 = pow1.get(e1).clone();
            if p1.is_zero() {
                continue;
            }
            let p2 = pow2.get(e2);
            let yy = p1.mul_truncated(p2, bound)?;
            out = &out + &xpart.mul_truncated(&yy, bound)?;
        }
        Ok(out)
    }
}

struct PowerCache<'a, C> {
    base: &'a LaurentSeries<C>,
    bound: Option<u32>,
    powers: Vec<LaurentSeries<C>>,
}

impl<'a, C: Coeff> PowerCache<'a, C> {
    fn new(base: &'a LaurentSeries<C>, bound: Option<u32>) -> Self {
        let one = LaurentSeries::constant(base.chart(), MPoly::one(base.arity()));
        PowerCache {
            base,
            bound,
            powers: vec![one],
        }
    }

    fn get(&mut self, k: u32) -> &LaurentSeries<C> {
        while self.powers.len() <= k as usize {
            let last = self.powers.last().expect("nonempty");
            let next = last
                .mul_truncated(self.base, self.bound)
                .expect("same chart and arity");
            self.powers.push(next);
        }
        &self.powers[k as usize]
    }
}

impl<C: Coeff> Neg for &XyPoly<C> {
    type Output = XyPoly<C>;
    fn neg(self) -> XyPoly<C> {
        XyPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl<C: Coeff> Add for &XyPoly<C> {
    type Output = XyPoly<C>;
    fn add(self, rhs: &XyPoly<C>) -> XyPoly<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &XyPoly<C> {
    type Output = XyPoly<C>;
    fn sub(self, rhs: &XyPoly<C>) -> XyPoly<C> {
        self + &(-rhs)
    }
}

impl<C: Coeff> Mul for &XyPoly<C> {
    type Output = XyPoly<C>;
    fn mul(self, rhs: &XyPoly<C>) -> XyPoly<C> {
        let mut out = XyPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(
                    XyExp::new(a.x + b.x, a.y1 + b.y1, a.y2 + b.y2),
                    ca.clone() * cb.clone(),
                );
            }
        }
        out
    }
}

impl<C: Coeff + Signed + Display> Display for XyPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(
            f,
            self.terms.iter().map(|(e, c)| {
                let text = if *e == XyExp::new(0, 0, 0) {
                    String::new()
                } else {
                    e.to_string()
                };
                (c, text)
            }),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, ChartSeries, GluingPoly, ParamPoly};
    use proptest::prelude::*;

    fn a(j: usize) -> ParamPoly {
        ParamPoly::var(2, j).unwrap()
    }

    fn y2_linear() -> ChartSeries {
        &ChartSeries::constant(Chart::X, a(0)) + &ChartSeries::monomial(Chart::X, 1, a(1))
    }

    fn zero_x() -> ChartSeries {
        ChartSeries::zero(Chart::X, 2)
    }

    #[test]
    fn substitute_square() {
        let f = GluingPoly::monomial(int(1), 0, 0, 2);
        let g = f.substitute_y(&zero_x(), &y2_linear(), None).unwrap();
        assert_eq!(g.coeff(0), a(0).pow(2));
        assert_eq!(g.coeff(1), (&a(0) * &a(1)).scale(&int(2)));
        assert_eq!(g.coeff(2), a(1).pow(2));
        assert_eq!(g.max_exponent(), Some(2));
    }

    #[test]
    fn zero_slot_annihilates() {
        let f = GluingPoly::monomial(int(1), 0, 1, 1);
        assert!(f.substitute_y(&zero_x(), &y2_linear(), None).unwrap().is_zero());
    }

    #[test]
    fn x_factor_shifts() {
        let f = GluingPoly::monomial(int(1), 1, 0, 2);
        let g = f.substitute_y(&zero_x(), &y2_linear(), None).unwrap();
        // oracle: (a0 + a1 x)^2 shifted by one
        let sq = y2_linear().pow_truncated(2, None).shift(1);
        assert_eq!(g, sq);
        assert_eq!(g.min_exponent(), Some(1));
    }

    #[test]
    fn display_orders_by_y_degree() {
        let f = &GluingPoly::monomial(int(1), 2, 0, 3) + &GluingPoly::monomial(int(1), 0, 0, 2);
        assert_eq!(f.to_string(), "y2^2 + x^2*y2^3");
        let g = GluingPoly::monomial(int(1), -1, 1, 1);
        assert_eq!(g.to_string(), "x^-1*y1*y2");
    }

    fn arb_xy() -> impl Strategy<Value = GluingPoly> {
        prop::collection::vec((-1i64..3, 0u32..3, 0u32..3, -3i64..4), 0..4).prop_map(|t| {
            GluingPoly::from_terms(t.into_iter().map(|(x, a, b, c)| (XyExp::new(x, a, b), int(c))))
        })
    }

    fn arb_value() -> impl Strategy<Value = ChartSeries> {
        prop::collection::vec((0i64..3, 0usize..2, -2i64..3), 0..3).prop_map(|t| {
            ChartSeries::from_terms(
                Chart::X,
                2,
                t.into_iter().map(|(e, j, c)| (e, a(j).scale(&int(c)))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn substitution_is_a_ring_homomorphism(
            r in arb_xy(), s in arb_xy(), y1 in arb_value(), y2 in arb_value()
        ) {
            let lhs = (&r * &s).substitute_y(&y1, &y2, None).unwrap();
            let rhs = &r.substitute_y(&y1, &y2, None).unwrap() * &s.substitute_y(&y1, &y2, None).unwrap();
            prop_assert_eq!(lhs, rhs);
            let sum = (&r + &s).substitute_y(&y1, &y2, None).unwrap();
            let sum_rhs = &r.substitute_y(&y1, &y2, None).unwrap() + &s.substitute_y(&y1, &y2, None).unwrap();
            prop_assert_eq!(sum, sum_rhs);
        }
    }
}
