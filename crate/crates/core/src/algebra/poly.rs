use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::{self, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use super::{power_text, write_sum};
use crate::{Coeff, Error, Result};

/// Exponent vector of a monomial `a_0^{e_0} ... a_m^{e_m}`.
///
/// Ordered graded-lexicographically with `a_0 < a_1 < ... < a_m`: total degree
/// first, ties broken by the exponent of `a_m`, then `a_{m-1}`, and so on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, j: usize) -> Self {
        let mut e = vec![0; arity];
        e[j] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter_map(|(j, &e)| power_text(&format!("a{j}"), e as i64))
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Sparse polynomial in `a_0 .. a_{arity-1}`. No zero coefficient is ever stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly<C> {
    arity: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> MPoly<C> {
    pub fn zero(arity: usize) -> Self {
        MPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, C::one())
    }

    pub fn constant(arity: usize, c: C) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(Monomial::one(arity), c);
        p
    }

    /// The coordinate `a_j`.
    pub fn var(arity: usize, j: usize) -> Result<Self> {
        if j >= arity {
            return Err(Error::IndexOutOfRange { index: j, arity });
        }
        let mut p = Self::zero(arity);
        p.add_term(Monomial::var(arity, j), C::one());
        Ok(p)
    }

    pub fn from_terms<I>(arity: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
    {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            if e.len() != arity {
                return Err(Error::ArityMismatch {
                    left: arity,
                    right: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn arity(&self) -> usize {
        self.arity
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

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> C {
        self.coeff(&Monomial::one(self.arity))
    }

    /// Largest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Smallest total degree, `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.mul_truncated(other, None)
    }

    /// Product with every term of total degree above `bound` dropped.
    pub fn mul_truncated(&self, other: &Self, bound: Option<u32>) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = Self::zero(self.arity);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                if let Some(b) = bound {
                    if da + mb.degree() > b {
                        // other's terms ascend in degree
                        break;
                    }
                }
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        self.pow_truncated(k, None)
    }

    pub fn pow_truncated(&self, k: u32, bound: Option<u32>) -> Self {
        let mut result = Self::one(self.arity).truncate_opt(bound);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul_truncated(&base, bound).expect("same arity");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_truncated(&base, bound).expect("same arity");
            }
        }
        result
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.arity);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Partial derivative with respect to `a_j`.
    pub fn diff(&self, j: usize) -> Result<Self> {
        if j >= self.arity {
            return Err(Error::IndexOutOfRange {
                index: j,
                arity: self.arity,
            });
        }
        let mut out = Self::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.0[j];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[j] -= 1;
            let factor = C::from_u32(e).expect("exponent fits coefficient type");
            out.add_term(dm, c.clone() * factor);
        }
        Ok(out)
    }

    /// Drops every term of total degree `> bound`.
    pub fn truncate(&self, bound: u32) -> Self {
        MPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= bound)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub(crate) fn truncate_opt(self, bound: Option<u32>) -> Self {
        match bound {
            Some(b) => self.truncate(b),
            None => self,
        }
    }

    /// The part of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        MPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `a_j = value`, keeping the arity.
    pub fn partial_eval(&self, j: usize, value: &C) -> Result<Self> {
        if j >= self.arity {
            return Err(Error::IndexOutOfRange {
                index: j,
                arity: self.arity,
            });
        }
        let mut out = Self::zero(self.arity);
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let e = std::mem::take(&mut rest.0[j]);
            out.add_term(rest, c.clone() * pow_coeff(value, e));
        }
        Ok(out)
    }

    /// Evaluates at `point`, using a table of powers per coordinate.
    pub fn eval(&self, point: &[C]) -> Result<C> {
        if point.len() != self.arity {
            return Err(Error::LengthMismatch {
                expected: self.arity,
                got: point.len(),
            });
        }
        let mut powers: Vec<Vec<C>> = point.iter().map(|v| vec![C::one(), v.clone()]).collect();
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (j, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[j];
                while table.len() <= e as usize {
                    let next = table[table.len() - 1].clone() * point[j].clone();
                    table.push(next);
                }
                t = t * table[e as usize].clone();
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Applies `f` to every coefficient, dropping results that vanish.
    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> MPoly<D> {
        let mut out = MPoly::zero(self.arity);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

impl<C: Coeff> MPoly<C> {
    /// Replaces each coefficient `c` of a degree-`d` term by `f(d, c)`.
    pub fn map_by_degree(&self, f: impl Fn(u32, &C) -> C) -> Self {
        let mut out = Self::zero(self.arity);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(m.degree(), c));
        }
        out
    }
}

fn pow_coeff<C: Coeff>(v: &C, e: u32) -> C {
    let mut r = C::one();
    for _ in 0..e {
        r = r * v.clone();
    }
    r
}

impl<C: Coeff> Neg for MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        -&self
    }
}

impl<C: Coeff> Neg for &MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        MPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        /// Panics on arity mismatch; use the `try_` form for fallible code paths.
        impl<C: Coeff> $trait<&MPoly<C>> for &MPoly<C> {
            type Output = MPoly<C>;
            fn $method(self, rhs: &MPoly<C>) -> MPoly<C> {
                self.$checked(rhs).expect("polynomial arity mismatch")
            }
        }

        impl<C: Coeff> $trait for MPoly<C> {
            type Output = MPoly<C>;
            fn $method(self, rhs: MPoly<C>) -> MPoly<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<C: Coeff + Signed + Display> Display for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(
            f,
            self.terms.iter().map(|(m, c)| {
                let text = if m.is_one() { String::new() } else { m.to_string() };
                (c, text)
            }),
        )
    }
}
