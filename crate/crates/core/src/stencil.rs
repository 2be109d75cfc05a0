//! Seven-point stencils on the triangular lattice.
//!
//! A bispectral relation reads `eigenvalue * F(c) = sum_k coeff_k * F(c + shift_k)`
//! where `c` runs over one triangle (degrees or variables) and the eigenvalue
//! depends only on the point of the other triangle.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{Matrix, Rational, TriangleGrid};

/// The seven shifts every relation in this crate is built from.
pub const SHIFTS: [(i64, i64); 7] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1), (0, 0)];

/// Which index pair a relation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// acts on `(i, j)`, eigenvalue depends on `(x, y)`
    Degree,
    /// acts on `(x, y)`, eigenvalue depends on `(i, j)`
    Variable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StencilTerm {
    pub shift: (i64, i64),
    pub coeff: Rational,
}

impl StencilTerm {
    pub fn new(shift: (i64, i64), coeff: Rational) -> Self {
        StencilTerm { shift, coeff }
    }
}

/// Drops terms whose coefficient vanishes exactly.
pub(crate) fn nonzero(terms: Vec<StencilTerm>) -> Vec<StencilTerm> {
    terms.into_iter().filter(|t| !t.coeff.is_zero()).collect()
}

/// `eigenvalue * F - sum coeff * F(shifted)` for every pair of a value table
/// (degree points as rows, variable points as columns). Each stencil is
/// built once per center.
pub(crate) fn residual_table(
    grid: &TriangleGrid,
    values: &Matrix,
    side: Side,
    stencil: impl Fn((usize, usize)) -> Result<Vec<StencilTerm>>,
    eigenvalue: impl Fn((usize, usize)) -> Rational,
    what: &str,
) -> Result<Matrix> {
    let d = grid.len();
    let mut out = Matrix::zeros(d, d);
    for (center, point) in grid.iter().enumerate() {
        let mut resolved = Vec::new();
        for term in stencil(point)? {
            let (a, b) = (point.0 as i64 + term.shift.0, point.1 as i64 + term.shift.1);
            match grid.index_of(a, b) {
                Some(k) => resolved.push((k, term.coeff)),
                None if side == Side::Degree => {
                    return Err(Error::out_of_domain(
                        what.to_string(),
                        format!("nonzero coefficient on degree ({a}, {b})"),
                    ));
                }
                // the families vanish outside the variable triangle
                None => {}
            }
        }
        for other in 0..d {
            let ev = eigenvalue(grid.point(other));
            let (r, c) = match side {
                Side::Degree => (center, other),
                Side::Variable => (other, center),
            };
            let mut res = ev * &values[(r, c)];
            for (k, coeff) in &resolved {
                let v = match side {
                    Side::Degree => &values[(*k, c)],
                    Side::Variable => &values[(r, *k)],
                };
                res -= coeff * v;
            }
            out[(r, c)] = res;
        }
    }
    Ok(out)
}
