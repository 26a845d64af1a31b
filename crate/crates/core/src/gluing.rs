//! Input geometry: the twists `(m, n)` of `N = O(m) ⊕ O(-n)` and the gluing
//! corrections `f, g, h` of the transition
//!
//! ```text
//! z1 = x^n  y1 + f(x, y1, y2)
//! z2 = x^-m y2 + g(x, y1, y2)
//! w  = x^-1    + h(x, y1, y2)
//! ```

use serde::{Deserialize, Serialize};

use crate::algebra::Chart;
use crate::cech::ZeroCochain;
use crate::exprparse::parse_expr;
use crate::{ChartSeries, Error, GluingPoly, ParamPoly, Result};

/// Validated gluing data.
#[derive(Clone, Debug, PartialEq)]
pub struct GluingData {
    m: u32,
    n: u32,
    f: GluingPoly,
    g: GluingPoly,
    h: GluingPoly,
    laufer: bool,
}

impl GluingData {
    /// Checks `m >= 0`, `n >= 2` and that `f, g, h` lie in `I^2` (every monomial
    /// has y-degree at least 2), and records whether the curve is a Laufer curve.
    pub fn new(m: i64, n: i64, f: GluingPoly, g: GluingPoly, h: GluingPoly) -> Result<Self> {
        if m < 0 {
            return Err(Error::InvalidTwist(format!("m = {m} must be >= 0")));
        }
        if n < 2 {
            return Err(Error::InvalidTwist(format!("n = {n} must be >= 2")));
        }
        if m > u32::MAX as i64 || n > u32::MAX as i64 {
            return Err(Error::InvalidTwist("twist out of range".into()));
        }
        for (name, p) in [("f", &f), ("g", &g), ("h", &h)] {
            if let Some((e, _)) = p.first_below_y_degree(2) {
                return Err(Error::NotInIdealSquare {
                    name,
                    monomial: e.to_string(),
                    degree: e.y_degree(),
                });
            }
        }
        let laufer = g.is_zero()
            && h.is_zero()
            && !f.depends_on_y1()
            && f.min_x_exponent().is_none_or(|e| e >= 0);
        Ok(GluingData {
            m: m as u32,
            n: n as u32,
            f,
            g,
            h,
            laufer,
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn f(&self) -> &GluingPoly {
        &self.f
    }

    pub fn g(&self) -> &GluingPoly {
        &self.g
    }

    pub fn h(&self) -> &GluingPoly {
        &self.h
    }

    /// Number of deformation parameters `a_0 .. a_m`, i.e. `h^0(N)`.
    pub fn arity(&self) -> usize {
        self.m as usize + 1
    }

    /// `h^1(N) = n - 1`.
    pub fn h1_dim(&self) -> usize {
        self.n as usize - 1
    }

    /// `g = h = 0` and `f = f(x, y2)` holomorphic on all of `U0`.
    pub fn is_laufer(&self) -> bool {
        self.laufer
    }

    pub fn transition(&self) -> TransitionMatrix {
        TransitionMatrix {
            m: self.m,
            n: self.n,
        }
    }
}

/// Same checks as [`GluingData::new`]; kept as a free function for call sites
/// that only want the verdict.
pub fn validate(m: i64, n: i64, f: GluingPoly, g: GluingPoly, h: GluingPoly) -> Result<GluingData> {
    GluingData::new(m, n, f, g, h)
}

/// The transition matrix `diag(x^n, x^-m)` of the normal bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub m: u32,
    pub n: u32,
}

impl TransitionMatrix {
    /// Exponent of `x` in the determinant.
    pub fn det_exponent(&self) -> i64 {
        self.n as i64 - self.m as i64
    }

    /// Row vector times matrix: `(x^n φ1, x^-m φ2)`, returned in the `w` chart.
    pub fn apply(&self, phi0: [&ChartSeries; 2]) -> [ChartSeries; 2] {
        [
            phi0[0].shift(self.n as i64).convert(),
            phi0[1].shift(-(self.m as i64)).convert(),
        ]
    }

    /// Inverse of [`apply`](Self::apply): `w`-chart pair back to the `x` chart.
    pub fn apply_inverse(&self, phi1: [&ChartSeries; 2]) -> [ChartSeries; 2] {
        [
            phi1[0].convert().shift(-(self.n as i64)),
            phi1[1].convert().shift(self.m as i64),
        ]
    }
}

/// The universal section `s(a) = ((0, Σ a_i x^i), (0, Σ a_i w^{m-i}))` of `H^0(N)`.
pub fn section_of_h0(d: &GluingData, bound: Option<u32>) -> ZeroCochain {
    let arity = d.arity();
    let mut in_x = ChartSeries::zero(Chart::X, arity);
    let mut in_w = ChartSeries::zero(Chart::W, arity);
    for i in 0..arity {
        let a = ParamPoly::var(arity, i).expect("index below arity");
        in_x = &in_x + &ChartSeries::monomial(Chart::X, i as i64, a.clone());
        in_w = &in_w + &ChartSeries::monomial(Chart::W, (arity - 1 - i) as i64, a);
    }
    ZeroCochain::new(
        [ChartSeries::zero(Chart::X, arity), in_x],
        [ChartSeries::zero(Chart::W, arity), in_w],
        bound,
    )
    .expect("s(a) is holomorphic on both charts")
}

/// On-disk input: `{"m": int, "n": int, "f": str, "g": str, "h": str}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingInput {
    pub m: i64,
    pub n: i64,
    pub f: String,
    #[serde(default = "zero_text")]
    pub g: String,
    #[serde(default = "zero_text")]
    pub h: String,
}

fn zero_text() -> String {
    "0".into()
}

impl GluingInput {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    /// Parses the three expressions and validates the result.
    pub fn build(&self) -> Result<GluingData> {
        let f = parse_expr(&self.f)?;
        let g = parse_expr(&self.g)?;
        let h = parse_expr(&self.h)?;
        GluingData::new(self.m, self.n, f, g, h)
    }
}
