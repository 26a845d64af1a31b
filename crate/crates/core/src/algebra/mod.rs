//! Exact arithmetic kernel: sparse multivariate polynomials in the deformation
//! parameters, Laurent polynomials in a chart variable, and polynomials in the
//! ambient coordinates `(x, y1, y2)`.

mod poly;
mod series;
mod xypoly;

pub use poly::{MPoly, Monomial};
pub use series::{Chart, LaurentSeries};
pub use xypoly::{XyExp, XyPoly};

use std::fmt::{self, Display};

use num_traits::Signed;

use crate::Coeff;

/// Writes `c_1*m_1 + c_2*m_2 - ...` with the shared sign and unit-coefficient rules:
/// a coefficient of exactly `+1` in front of a nonconstant monomial is omitted,
/// every other coefficient (including `-1`) is written out.
pub(crate) fn write_sum<'a, C, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    C: Coeff + Signed + Display + 'a,
    I: IntoIterator<Item = (&'a C, String)>,
{
    let mut first = true;
    for (c, mono) in terms {
        let negative = c.is_negative();
        let mag = c.abs();
        match (first, negative) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        first = false;
        if mono.is_empty() {
            write!(f, "{mag}")?;
        } else if !negative && mag.is_one() {
            f.write_str(&mono)?;
        } else {
            write!(f, "{mag}*{mono}")?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// `name` or `name^e`, empty for `e == 0`.
pub(crate) fn power_text(name: &str, e: i64) -> Option<String> {
    match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    }
}
