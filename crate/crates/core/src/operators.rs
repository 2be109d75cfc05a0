//! Bispectral relations as sparse matrices on the triangle.
//!
//! Rows are output points and columns input points, so a family column (or
//! row, for the difference operators) is a right eigenvector.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{format_rational, Matrix, Rational, TriangleGrid};
use crate::griffiths::{GRelationId, ParamSet};
use crate::stencil::{Side, StencilTerm, SHIFTS};
use crate::tratnik::{TRelationId, TratnikParams};

pub type Point = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    Tratnik(TRelationId),
    Griffiths(GRelationId),
    Identity,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 8] = [
        OperatorKind::Tratnik(TRelationId::RecX),
        OperatorKind::Tratnik(TRelationId::RecY),
        OperatorKind::Tratnik(TRelationId::DiffJ),
        OperatorKind::Tratnik(TRelationId::DiffI),
        OperatorKind::Griffiths(GRelationId::RecX),
        OperatorKind::Griffiths(GRelationId::RecY),
        OperatorKind::Griffiths(GRelationId::DiffI),
        OperatorKind::Griffiths(GRelationId::DiffJ),
    ];

    pub fn side(self) -> Option<Side> {
        match self {
            OperatorKind::Tratnik(r) => Some(r.side()),
            OperatorKind::Griffiths(r) => Some(r.side()),
            OperatorKind::Identity => None,
        }
    }

    /// The eigenvalue the relation pairs with, as a function of the point of
    /// the other triangle.
    pub fn eigenvalue(self, other: Point) -> Rational {
        match self {
            OperatorKind::Tratnik(r) => r.eigenvalue(other),
            OperatorKind::Griffiths(r) => r.eigenvalue(other),
            OperatorKind::Identity => Rational::one(),
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorKind::Tratnik(r) => write!(f, "tratnik-{r}"),
            OperatorKind::Griffiths(r) => write!(f, "griffiths-{r}"),
            OperatorKind::Identity => f.write_str("identity"),
        }
    }
}

impl FromStr for OperatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "identity" {
            return Ok(OperatorKind::Identity);
        }
        if let Some(rest) = s.strip_prefix("tratnik-") {
            return rest.parse().map(OperatorKind::Tratnik);
        }
        if let Some(rest) = s.strip_prefix("griffiths-") {
            return rest.parse().map(OperatorKind::Griffiths);
        }
        Err(Error::out_of_domain("operator kind", s.to_string()))
    }
}

/// Parameters for either family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyParams {
    Tratnik(TratnikParams),
    Griffiths(ParamSet),
}

impl FamilyParams {
    pub fn n(&self) -> usize {
        match self {
            FamilyParams::Tratnik(p) => p.n,
            FamilyParams::Griffiths(p) => p.n,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            FamilyParams::Tratnik(p) => json!({
                "p1": format_rational(&p.p1),
                "p2": format_rational(&p.p2),
            }),
            FamilyParams::Griffiths(p) => json!({
                "p1": format_rational(&p.p1),
                "p2": format_rational(&p.p2),
                "p3": format_rational(&p.p3),
                "lambda": format_rational(&p.lambda),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StencilOperator {
    pub grid: TriangleGrid,
    /// sorted, zero-free
    pub entries: BTreeMap<(Point, Point), Rational>,
    pub kind: OperatorKind,
}

impl StencilOperator {
    pub fn identity(grid: TriangleGrid) -> Self {
        let entries = grid.iter().map(|p| ((p, p), Rational::one())).collect();
        StencilOperator {
            grid,
            entries,
            kind: OperatorKind::Identity,
        }
    }

    pub fn get(&self, row: Point, col: Point) -> Rational {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn max_row_nnz(&self) -> usize {
        let mut counts: BTreeMap<Point, usize> = BTreeMap::new();
        for (row, _) in self.entries.keys() {
            *counts.entry(*row).or_default() += 1;
        }
        counts.into_values().max().unwrap_or(0)
    }

    /// Whether every entry sits at one of the seven stencil shifts from its row.
    pub fn within_stencil(&self) -> bool {
        self.entries.keys().all(|(r, c)| {
            let d = (c.0 as i64 - r.0 as i64, c.1 as i64 - r.1 as i64);
            SHIFTS.contains(&d)
        })
    }

    pub fn to_dense(&self) -> Matrix {
        let d = self.grid.len();
        let mut m = Matrix::zeros(d, d);
        for ((r, c), v) in &self.entries {
            m[(self.index(*r), self.index(*c))] = v.clone();
        }
        m
    }

    fn index(&self, p: Point) -> usize {
        self.grid
            .index_of(p.0 as i64, p.1 as i64)
            .expect("entry inside the grid")
    }

    /// Exact sparse product `self * other`.
    pub fn mul(&self, other: &StencilOperator) -> Result<BTreeMap<(Point, Point), Rational>> {
        same_grid(self, other)?;
        let mut by_row: BTreeMap<Point, Vec<(Point, &Rational)>> = BTreeMap::new();
        for ((r, c), v) in &other.entries {
            by_row.entry(*r).or_default().push((*c, v));
        }
        let mut out: BTreeMap<(Point, Point), Rational> = BTreeMap::new();
        for ((r, k), a) in &self.entries {
            if let Some(row) = by_row.get(k) {
                for (c, b) in row {
                    *out.entry((*r, *c)).or_insert_with(Rational::zero) += a * *b;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// Dump with sorted `[row, column, value]` triples. `params` is `None` for
    /// the identity.
    pub fn to_json(&self, params: Option<&FamilyParams>) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|((r, c), v)| json!([[r.0, r.1], [c.0, c.1], format_rational(v)]))
            .collect();
        json!({
            "kind": self.kind.to_string(),
            "N": self.grid.size_param(),
            "params": params.map_or_else(|| json!({}), FamilyParams::to_json),
            "entries": entries,
        })
    }
}

fn same_grid(a: &StencilOperator, b: &StencilOperator) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::ShapeMismatch(format!(
            "operators on N = {} and N = {}",
            a.grid.size_param(),
            b.grid.size_param()
        )));
    }
    Ok(())
}

/// Materializes the relation of `kind` on the triangle of size `params.n()`.
///
/// Variable-side terms that land outside the triangle are dropped, since the
/// families vanish there. Degree-side coefficients vanish on their own at
/// the boundary; a nonzero one pointing outside is reported.
pub fn build_operator(kind: OperatorKind, params: &FamilyParams) -> Result<StencilOperator> {
    let grid = TriangleGrid::new(params.n());
    let stencil = |center: Point| -> Result<Vec<StencilTerm>> {
        match (kind, params) {
            (OperatorKind::Tratnik(r), FamilyParams::Tratnik(p)) => Ok(r.stencil(center, p)),
            (OperatorKind::Griffiths(r), FamilyParams::Griffiths(p)) => r.stencil(center, p),
            (OperatorKind::Identity, _) => Ok(vec![StencilTerm::new((0, 0), Rational::one())]),
            _ => Err(Error::ShapeMismatch(format!(
                "operator {kind} needs the parameters of its own family"
            ))),
        }
    };
    match params {
        FamilyParams::Tratnik(p) => p.validate()?,
        FamilyParams::Griffiths(p) => p.validate()?,
    }
    let mut entries = BTreeMap::new();
    for row in grid.iter() {
        for term in stencil(row)? {
            let (a, b) = (row.0 as i64 + term.shift.0, row.1 as i64 + term.shift.1);
            if !grid.contains(a, b) {
                if kind.side() == Some(Side::Degree) {
                    return Err(Error::out_of_domain(
                        format!("operator {kind}"),
                        format!("row {row:?} has a nonzero coefficient on ({a}, {b})"),
                    ));
                }
                continue;
            }
            let col = (a as usize, b as usize);
            let e = entries.entry((row, col)).or_insert_with(Rational::zero);
            *e += term.coeff;
        }
    }
    entries.retain(|_, v: &mut Rational| !v.is_zero());
    Ok(StencilOperator {
        grid,
        entries,
        kind,
    })
}

/// Largest `|op v - eigenvalue v|` over all eigenvector candidates taken from
/// `table` (degree points x variable points). Degree-side operators act on
/// columns, variable-side ones on rows; `eigenvalue` receives the point of
/// the other triangle.
pub fn eigen_residual(
    op: &StencilOperator,
    table: &Matrix,
    eigenvalue: impl Fn(Point) -> Rational,
) -> Result<Rational> {
    let d = op.grid.len();
    if table.rows() != d || table.cols() != d {
        return Err(Error::ShapeMismatch(format!(
            "table is {}x{}, operator grid has {d} points",
            table.rows(),
            table.cols()
        )));
    }
    let on_rows = op.kind.side() == Some(Side::Variable);
    // value of the eigenvector `other` at point `p`
    let at = |other: usize, p: usize| -> &Rational {
        if on_rows {
            &table[(other, p)]
        } else {
            &table[(p, other)]
        }
    };
    let mut worst = Rational::zero();
    for other in 0..d {
        let ev = eigenvalue(op.grid.point(other));
        let mut image = vec![Rational::zero(); d];
        for ((r, c), v) in &op.entries {
            image[op.index(*r)] += v * at(other, op.index(*c));
        }
        for (p, img) in image.into_iter().enumerate() {
            let res = (img - &ev * at(other, p)).abs();
            if res > worst {
                worst = res;
            }
        }
    }
    Ok(worst)
}

/// Whether `a b = b a` exactly.
pub fn commutator_is_zero(a: &StencilOperator, b: &StencilOperator) -> Result<bool> {
    Ok(a.mul(b)? == b.mul(a)?)
}
