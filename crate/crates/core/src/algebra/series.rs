use std::collections::BTreeMap;
use std::fmt::{self, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use super::MPoly;
use crate::{Coeff, Error, Result};

/// Coordinate on the curve: `x` on `V0`, `w = 1/x` on `V1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chart {
    X,
    W,
}

impl Chart {
    pub fn other(self) -> Chart {
        match self {
            Chart::X => Chart::W,
            Chart::W => Chart::X,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Chart::X => 'x',
            Chart::W => 'w',
        }
    }
}

/// Finite Laurent polynomial `Σ_e c_e t^e` in a chart variable `t`, with
/// polynomial coefficients `c_e ∈ C[a_0 .. a_m]`. Zero coefficients are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries<C> {
    chart: Chart,
    arity: usize,
    terms: BTreeMap<i64, MPoly<C>>,
}

impl<C: Coeff> LaurentSeries<C> {
    pub fn zero(chart: Chart, arity: usize) -> Self {
        LaurentSeries {
            chart,
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// `coeff * t^exponent`.
    pub fn monomial(chart: Chart, exponent: i64, coeff: MPoly<C>) -> Self {
        let mut s = Self::zero(chart, coeff.arity());
        s.add_coeff(exponent, coeff);
        s
    }

    pub fn constant(chart: Chart, coeff: MPoly<C>) -> Self {
        Self::monomial(chart, 0, coeff)
    }

    pub fn from_terms<I>(chart: Chart, arity: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, MPoly<C>)>,
    {
        let mut s = Self::zero(chart, arity);
        for (e, c) in terms {
            if c.arity() != arity {
                return Err(Error::ArityMismatch {
                    left: arity,
                    right: c.arity(),
                });
            }
            s.add_coeff(e, c);
        }
        Ok(s)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero coefficients in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &MPoly<C>)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, exponent: i64) -> MPoly<C> {
        self.terms
            .get(&exponent)
            .cloned()
            .unwrap_or_else(|| MPoly::zero(self.arity))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Smallest total degree in the parameters over all coefficients.
    pub fn min_param_degree(&self) -> Option<u32> {
        self.terms.values().filter_map(MPoly::min_degree).min()
    }

    pub(crate) fn add_coeff(&mut self, exponent: i64, c: MPoly<C>) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exponent) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&exponent);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(exponent, c);
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.chart != other.chart {
            return Err(Error::ChartMismatch {
                left: self.chart.symbol(),
                right: other.chart.symbol(),
            });
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_coeff(e, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_coeff(e, -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.mul_truncated(other, None)
    }

    /// Laurent product; coefficient products drop parameter degree above `bound`.
    pub fn mul_truncated(&self, other: &Self, bound: Option<u32>) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.chart, self.arity);
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &other.terms {
                out.add_coeff(ea + eb, ca.mul_truncated(cb, bound)?);
            }
        }
        Ok(out)
    }

    pub fn pow_truncated(&self, k: u32, bound: Option<u32>) -> Self {
        let one = Self::constant(self.chart, MPoly::one(self.arity)).truncate_opt(bound);
        (0..k).fold(one, |acc, _| {
            acc.mul_truncated(self, bound).expect("same chart and arity")
        })
    }

    /// Multiplies every coefficient by the polynomial `p`.
    pub fn scale(&self, p: &MPoly<C>) -> Self {
        self.scale_truncated(p, None)
    }

    pub fn scale_truncated(&self, p: &MPoly<C>, bound: Option<u32>) -> Self {
        let mut out = Self::zero(self.chart, self.arity);
        for (&e, c) in &self.terms {
            out.add_coeff(e, c.mul_truncated(p, bound).expect("same arity"));
        }
        out
    }

    pub fn scale_scalar(&self, c: &C) -> Self {
        let mut out = Self::zero(self.chart, self.arity);
        for (&e, v) in &self.terms {
            out.add_coeff(e, v.scale(c));
        }
        out
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            chart: self.chart,
            arity: self.arity,
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Rewrites the series in the other chart through `w = x^{-1}`: exponent `i` becomes `-i`.
    pub fn convert(&self) -> Self {
        LaurentSeries {
            chart: self.chart.other(),
            arity: self.arity,
            terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Keeps only the exponents selected by `keep`.
    pub fn filter_exponents(&self, keep: impl Fn(i64) -> bool) -> Self {
        LaurentSeries {
            chart: self.chart,
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(&e, _)| keep(e))
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
        }
    }

    /// Drops every coefficient term of total parameter degree `> bound`.
    pub fn truncate(&self, bound: u32) -> Self {
        let mut out = Self::zero(self.chart, self.arity);
        for (&e, c) in &self.terms {
            out.add_coeff(e, c.truncate(bound));
        }
        out
    }

    pub(crate) fn truncate_opt(self, bound: Option<u32>) -> Self {
        match bound {
            Some(b) => self.truncate(b),
            None => self,
        }
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&MPoly<C>) -> MPoly<C>) -> Self {
        let mut out = Self::zero(self.chart, self.arity);
        for (&e, c) in &self.terms {
            out.add_coeff(e, f(c));
        }
        out
    }

    /// Evaluates `self` (a polynomial in `w`, nonnegative exponents only) at
    /// `w = wmap`, where `wmap` is a Laurent series in `x`. Horner scheme, with
    /// parameter degree truncated at `bound` after every product.
    pub fn compose(&self, wmap: &Self, bound: Option<u32>) -> Result<Self> {
        if let Some(e) = self.min_exponent().filter(|&e| e < 0) {
            return Err(Error::UnsupportedComposition { exponent: e });
        }
        if wmap.arity != self.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: wmap.arity,
            });
        }
        let top = match self.max_exponent() {
            Some(t) => t,
            None => return Ok(Self::zero(wmap.chart, self.arity)),
        };
        let mut acc = Self::zero(wmap.chart, self.arity);
        for e in (0..=top).rev() {
            acc = acc.mul_truncated(wmap, bound)?;
            acc.add_coeff(0, self.coeff(e).truncate_opt(bound));
        }
        Ok(acc)
    }
}

impl<C: Coeff> Neg for &LaurentSeries<C> {
    type Output = LaurentSeries<C>;
    fn neg(self) -> LaurentSeries<C> {
        LaurentSeries {
            chart: self.chart,
            arity: self.arity,
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl<C: Coeff> Neg for LaurentSeries<C> {
    type Output = LaurentSeries<C>;
    fn neg(self) -> LaurentSeries<C> {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics on chart or arity mismatch; use the `try_` form for fallible code paths.
        impl<C: Coeff> $trait<&LaurentSeries<C>> for &LaurentSeries<C> {
            type Output = LaurentSeries<C>;
            fn $method(self, rhs: &LaurentSeries<C>) -> LaurentSeries<C> {
                self.$checked(rhs).expect("series chart or arity mismatch")
            }
        }

        impl<C: Coeff> $trait for LaurentSeries<C> {
            type Output = LaurentSeries<C>;
            fn $method(self, rhs: LaurentSeries<C>) -> LaurentSeries<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

/// `(c_0) + (c_1)*x + (c_2)*x^2`, ascending in the chart exponent.
impl<C: Coeff + Signed + Display> Display for LaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let t = self.chart.symbol();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&e, c)| match e {
                0 => format!("({c})"),
                1 => format!("({c})*{t}"),
                _ => format!("({c})*{t}^{e}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
