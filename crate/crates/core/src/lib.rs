//! Versal deformations of smooth rational curves `C ≅ P^1` in threefolds.
//!
//! Given two-chart gluing data `(m, n, f, g, h)` describing a neighbourhood of a
//! curve with normal bundle `O(m) ⊕ O(-n)`, this crate computes the obstruction
//! equations `k_1 .. k_{n-1}` cutting out the versal deformation space, the
//! universal family over it for Laufer curves, the superpotential `W` in the
//! Calabi-Yau case (`m - n = -2`), and numerical critical points of `W`.
//!
//! The algebra layer is generic over the coefficient type (any [`Coeff`]); the
//! deformation pipeline runs over exact rationals through the aliases exported
//! here ([`Rat`], [`ParamPoly`], [`ChartSeries`], [`GluingPoly`]), while the
//! numerical layer evaluates the same polynomials over `f32`/`f64`.

pub mod algebra;
pub mod cech;
pub mod cli;
pub mod critical;
pub mod exprparse;
pub mod gluing;
pub mod laufer;
pub mod superpotential;

mod error;

pub use error::{Error, Result};

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{FromPrimitive, One, Zero};

pub use algebra::{Chart, LaurentSeries, MPoly, Monomial, XyExp, XyPoly};
pub use cech::{OneCochain, ZeroCochain};
pub use gluing::{GluingData, GluingInput, TransitionMatrix};
pub use laufer::{DeformationResult, Method};
pub use superpotential::Superpotential;

/// Coefficient ring for the polynomial and series types.
///
/// Both exact rationals and machine floats satisfy it.
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + FromPrimitive
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + FromPrimitive
        + Neg<Output = Self>
        + Add<Output = Self>
        + Sub<Output = Self>
        + Mul<Output = Self>
{
}

/// Arbitrary-precision rational, always kept in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

/// Polynomial in the deformation parameters `a_0 .. a_m` over `Q`.
pub type ParamPoly = MPoly<Rat>;

/// Laurent polynomial in a chart variable (`x` or `w`) with [`ParamPoly`] coefficients.
pub type ChartSeries = LaurentSeries<Rat>;

/// Polynomial in `x^{±1}, y1, y2` over `Q`: one of the gluing corrections `f, g, h`.
pub type GluingPoly = XyPoly<Rat>;

/// Builds the rational `num / den`.
///
/// # Panics
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

/// The integer `k` as a rational.
pub fn int(k: i64) -> Rat {
    Rat::from_integer(k.into())
}
