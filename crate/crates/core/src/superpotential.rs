//! Superpotential reconstruction in the Calabi-Yau case `m - n = -2`.
//!
//! With `n - 1 = m + 1` equations in `m + 1` unknowns, the field
//! `v_i = k_{n-1-i}` is a gradient: `v = ∇W`. `W` is rebuilt degree by degree
//! with the Euler operator, `W_{d+1} = (Σ_i a_i v_i^{(d)}) / (d + 1)`.

use crate::exprparse::parse_expr;
use crate::gluing::GluingData;
use crate::laufer::DeformationResult;
use crate::{int, Error, GluingPoly, ParamPoly, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superpotential {
    pub w: ParamPoly,
    pub m: u32,
    pub n: u32,
}

/// Trivial canonical bundle: `m - n = -2`.
pub fn cy_check(d: &GluingData) -> bool {
    d.m() as i64 - d.n() as i64 == -2
}

/// `v_i = k_{n-1-i}`, `0 <= i <= m`.
pub fn gradient_field(eqs: &DeformationResult) -> Result<Vec<ParamPoly>> {
    if !eqs.is_square() {
        return Err(Error::NotCalabiYau(eqs.m as i64 - eqs.n as i64));
    }
    Ok(eqs.equations.iter().rev().cloned().collect())
}

/// Outcome of the symmetric-Jacobian test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Integrability {
    Integrable,
    /// `∂v_i/∂a_j − ∂v_j/∂a_i = difference ≠ 0`.
    Obstructed {
        i: usize,
        j: usize,
        difference: ParamPoly,
    },
}

impl Integrability {
    pub fn holds(&self) -> bool {
        matches!(self, Integrability::Integrable)
    }
}

/// Checks `∂k_{n-1-i}/∂a_j = ∂k_{n-1-j}/∂a_i` for all `i < j`.
pub fn check_integrability(eqs: &DeformationResult) -> Result<Integrability> {
    field_integrability(&gradient_field(eqs)?)
}

/// Symmetric-Jacobian test for an arbitrary field `v_0 .. v_m`.
pub fn field_integrability(field: &[ParamPoly]) -> Result<Integrability> {
    for i in 0..field.len() {
        for j in i + 1..field.len() {
            let difference = field[i].diff(j)?.try_sub(&field[j].diff(i)?)?;
            if !difference.is_zero() {
                return Ok(Integrability::Obstructed { i, j, difference });
            }
        }
    }
    Ok(Integrability::Integrable)
}

/// Euler-operator potential of `field`: `Σ_i a_i v_i` with each degree-`d`
/// term divided by `d`. Linear in the field; `W(0) = 0`.
pub fn euler_potential(field: &[ParamPoly], arity: usize) -> Result<ParamPoly> {
    if field.len() != arity {
        return Err(Error::LengthMismatch {
            expected: arity,
            got: field.len(),
        });
    }
    let mut radial = ParamPoly::zero(arity);
    for (i, v) in field.iter().enumerate() {
        radial = radial.try_add(&ParamPoly::var(arity, i)?.try_mul(v)?)?;
    }
    Ok(radial.map_by_degree(|d, c| c / int(d as i64)))
}

/// `W` with `∂W/∂a_i = k_{n-1-i}` exactly; refuses non-square or non-integrable systems.
pub fn integrate_potential(eqs: &DeformationResult) -> Result<Superpotential> {
    let field = gradient_field(eqs)?;
    if let Integrability::Obstructed { i, j, difference } = field_integrability(&field)? {
        return Err(Error::Integrability {
            i,
            j,
            difference: difference.to_string(),
        });
    }
    let w = euler_potential(&field, eqs.arity())?;
    for (i, v) in field.iter().enumerate() {
        if w.diff(i)? != *v {
            return Err(Error::Internal(format!(
                "reconstructed potential fails dW/da{i} = k{}",
                eqs.n as usize - 1 - i
            )));
        }
    }
    Ok(Superpotential {
        w,
        m: eqs.m,
        n: eqs.n,
    })
}

/// Result of [`coeff_symmetry_lemma_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub checked: usize,
    /// `(i, j, k)` with `∂h_i/∂a_j ≠ ∂h_k/∂a_{k+j-i}`.
    pub failures: Vec<(usize, usize, usize)>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every admissible triple `(i, j, k)` with `i, k <= max_index`, `0 <= j <= m`
/// and `0 <= k + j - i <= m`.
pub fn lemma_triples(m: usize, max_index: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..=max_index {
        for j in 0..=m {
            for k in 0..=max_index {
                let t = k as i64 + j as i64 - i as i64;
                if (0..=m as i64).contains(&t) {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

/// Verifies `∂h_i/∂a_j = ∂h_k/∂a_{k+j-i}` for the coefficients `h_i` of
/// `r(x, Σ_{j<=m} a_j x^j)`.
///
/// With `triples = None`, every admissible triple up to the last nonzero
/// coefficient plus `m` is checked.
pub fn coeff_symmetry_lemma_check(
    r: &GluingPoly,
    m: usize,
    triples: Option<&[(usize, usize, usize)]>,
) -> Result<LemmaReport> {
    if r.depends_on_y1() {
        return Err(Error::InvalidInput("r must not depend on y1".into()));
    }
    if r.min_x_exponent().is_some_and(|e| e < 0) {
        return Err(Error::InvalidInput("r must be holomorphic in x".into()));
    }
    let arity = m + 1;
    let mut y2 = crate::ChartSeries::zero(crate::Chart::X, arity);
    for j in 0..arity {
        y2 = &y2 + &crate::ChartSeries::monomial(crate::Chart::X, j as i64, ParamPoly::var(arity, j)?);
    }
    let zero = crate::ChartSeries::zero(crate::Chart::X, arity);
    let h = r.substitute_y(&zero, &y2, None)?;
    let top = h.max_exponent().unwrap_or(0).max(0) as usize + m;
    let all;
    let triples = match triples {
        Some(t) => t,
        None => {
            all = lemma_triples(m, top);
            &all
        }
    };
    let mut report = LemmaReport {
        checked: 0,
        failures: Vec::new(),
    };
    for &(i, j, k) in triples {
        let t = k as i64 + j as i64 - i as i64;
        if j > m || t < 0 || t > m as i64 {
            return Err(Error::IndexOutOfRange {
                index: j.max(t.max(0) as usize),
                arity,
            });
        }
        let lhs = h.coeff(i as i64).diff(j)?;
        let rhs = h.coeff(k as i64).diff(t as usize)?;
        report.checked += 1;
        if lhs != rhs {
            report.failures.push((i, j, k));
        }
    }
    Ok(report)
}

/// Convenience wrapper parsing `r` from text.
pub fn lemma_check_text(r: &str, m: usize) -> Result<LemmaReport> {
    coeff_symmetry_lemma_check(&parse_expr(r)?, m, None)
}
