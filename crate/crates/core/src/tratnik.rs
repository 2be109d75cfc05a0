//! Bivariate Tratnik polynomials of Krawtchouk type,
//! `T_{i,j}(x, y) = k_i(x; p1, N-j) k_j(y; p2, N-x)`,
//! their two recurrence and two difference relations, and an orthogonality
//! diagnostic.

use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::{
    check_probability_like, factorial, format_rational, int, nullspace, pow, Matrix, Rational,
    TriangleGrid,
};
use crate::krawtchouk::KrawtchoukFamily;
use crate::stencil::{nonzero, residual_table, Side, StencilTerm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TratnikParams {
    pub p1: Rational,
    pub p2: Rational,
    pub n: usize,
}

impl TratnikParams {
    pub fn new(p1: Rational, p2: Rational, n: usize) -> Result<Self> {
        let tp = TratnikParams { p1, p2, n };
        tp.validate()?;
        Ok(tp)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability_like("p1", &self.p1)?;
        check_probability_like("p2", &self.p2)
    }

    pub fn describe(&self) -> String {
        format!(
            "--p1 {} --p2 {} --N {}",
            format_rational(&self.p1),
            format_rational(&self.p2),
            self.n
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TRelationId {
    RecX,
    RecY,
    DiffJ,
    DiffI,
}

impl TRelationId {
    pub const ALL: [TRelationId; 4] = [
        TRelationId::RecX,
        TRelationId::RecY,
        TRelationId::DiffJ,
        TRelationId::DiffI,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TRelationId::RecX => "rec-x",
            TRelationId::RecY => "rec-y",
            TRelationId::DiffJ => "diff-j",
            TRelationId::DiffI => "diff-i",
        }
    }

    pub fn side(self) -> Side {
        match self {
            TRelationId::RecX | TRelationId::RecY => Side::Degree,
            TRelationId::DiffJ | TRelationId::DiffI => Side::Variable,
        }
    }

    /// Eigenvalue as a function of the point on the opposite triangle.
    pub fn eigenvalue(self, other: (usize, usize)) -> Rational {
        let (a, b) = (other.0 as i64, other.1 as i64);
        match self {
            TRelationId::RecX => int(-a),
            TRelationId::RecY => int(-b),
            TRelationId::DiffJ => int(-(b + 1)),
            TRelationId::DiffI => int(-(a + 1)),
        }
    }

    /// Stencil at `center`, a degree point for the recurrences and a variable
    /// point for the difference relations. Vanishing terms are dropped.
    pub fn stencil(self, center: (usize, usize), params: &TratnikParams) -> Vec<StencilTerm> {
        let (p1, p2) = (&params.p1, &params.p2);
        let one = Rational::one();
        let (q1, q2) = (&one - p1, &one - p2);
        let n = params.n as i64;
        let t = StencilTerm::new;
        let terms = match self {
            TRelationId::RecX => {
                let (i, j) = (center.0 as i64, center.1 as i64);
                let m = int(n - i - j);
                let up = p1 * &m;
                let down = &q1 * int(i);
                vec![
                    t((1, 0), up.clone()),
                    t((-1, 0), down.clone()),
                    t((0, 0), -(up + down)),
                ]
            }
            TRelationId::RecY => {
                let (i, j) = (center.0 as i64, center.1 as i64);
                let (ii, jj, m) = (int(i), int(j), int(n - i - j));
                vec![
                    t((1, 0), -(p1 * p2 * &m)),
                    t((-1, 0), -(&ii * &q1 * p2)),
                    t((0, 1), p2 * &m),
                    t((0, -1), &jj * &q1 * &q2),
                    t((1, -1), &jj * p1 * &q2),
                    t((-1, 1), &ii * p2),
                    t((0, 0), -(&q1 * p2 * &m + &jj * &q2 + &ii * p1 * p2)),
                ]
            }
            TRelationId::DiffJ => {
                let (x, y) = (center.0 as i64, center.1 as i64);
                let up = &q2 * int(y + 1);
                let down = p2 * int(n - x - y + 1);
                vec![
                    t((0, 1), up.clone()),
                    t((0, -1), down.clone()),
                    t((0, 0), -(up + down)),
                ]
            }
            TRelationId::DiffI => {
                let (x, y) = (center.0 as i64, center.1 as i64);
                let (x1, y1, k) = (int(x + 1), int(y + 1), int(n - x - y + 1));
                vec![
                    t((1, 0), &q1 * &x1),
                    t((-1, 0), p1 * &q2 * &k),
                    t((0, 1), -(p1 * &q2 * &y1)),
                    t((0, -1), -(p1 * p2 * &k)),
                    t((1, -1), &q1 * p2 / &q2 * &x1),
                    t((-1, 1), p1 * &q2 * &y1),
                    t((0, 0), -(&q1 * &x1 + p1 * p2 * &y1 + p1 * &q2 * &k)),
                ]
            }
        };
        nonzero(terms)
    }
}

impl fmt::Display for TRelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TRelationId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TRelationId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::out_of_domain("tratnik relation id", s.to_string()))
    }
}

fn check_degree(i: usize, j: usize, n: usize) -> Result<()> {
    if i + j > n {
        return Err(Error::out_of_domain(
            "tratnik degree",
            format!("(i, j) = ({i}, {j}) with i + j > N = {n}"),
        ));
    }
    Ok(())
}

/// `k_i(x; p1, N-j) * k_j(y; p2, N-x)` looked up in shared tables; 0 when
/// `(x, y)` leaves the triangle.
pub(crate) fn t_from_families(
    i: usize,
    j: usize,
    x: i64,
    y: i64,
    n: usize,
    first: &KrawtchoukFamily,
    second: &KrawtchoukFamily,
) -> Rational {
    if x < 0 || x as usize > n - j {
        return Rational::zero();
    }
    match (first.k_ref(i, x, n - j), second.k_ref(j, y, n - x as usize)) {
        (Some(a), Some(b)) => a * b,
        _ => Rational::zero(),
    }
}

/// `T_{i,j}(x, y; p1, p2, N)`.
pub fn t_eval(i: usize, j: usize, x: i64, y: i64, params: &TratnikParams) -> Result<Rational> {
    check_degree(i, j, params.n)?;
    let first = KrawtchoukFamily::new(params.p1.clone(), params.n)?;
    let second = KrawtchoukFamily::new(params.p2.clone(), params.n)?;
    Ok(t_from_families(i, j, x, y, params.n, &first, &second))
}

/// Values `T_{i,j}(x, y)` for every degree point (rows) and variable point
/// (columns) of `TriangleGrid(N)`.
#[derive(Clone, Debug)]
pub struct TratnikTable {
    params: TratnikParams,
    grid: TriangleGrid,
    values: Matrix,
}

impl TratnikTable {
    pub fn new(params: &TratnikParams) -> Result<Self> {
        let n = params.n;
        let first = KrawtchoukFamily::new(params.p1.clone(), n)?;
        let second = KrawtchoukFamily::new(params.p2.clone(), n)?;
        let grid = TriangleGrid::new(n);
        let values = Matrix::from_fn(grid.len(), grid.len(), |r, c| {
            let (i, j) = grid.point(r);
            let (x, y) = grid.point(c);
            t_from_families(i, j, x as i64, y as i64, n, &first, &second)
        });
        Ok(TratnikTable {
            params: params.clone(),
            grid,
            values,
        })
    }

    pub fn params(&self) -> &TratnikParams {
        &self.params
    }

    pub fn grid(&self) -> &TriangleGrid {
        &self.grid
    }

    /// Degree x variable matrix of values.
    pub fn values(&self) -> &Matrix {
        &self.values
    }

    /// Zero outside the variable triangle. Panics on a degree outside the
    /// triangle.
    pub fn get(&self, i: usize, j: usize, x: i64, y: i64) -> Rational {
        let r = self
            .grid
            .index_of(i as i64, j as i64)
            .expect("degree inside the triangle");
        match self.grid.index_of(x, y) {
            Some(c) => self.values[(r, c)].clone(),
            None => Rational::zero(),
        }
    }

    /// Residuals of `rel` over both triangles, degrees as rows.
    pub fn relation_residuals(&self, rel: TRelationId) -> Result<Matrix> {
        residual_table(
            &self.grid,
            &self.values,
            rel.side(),
            |c| Ok(rel.stencil(c, &self.params)),
            |p| rel.eigenvalue(p),
            &format!("tratnik relation {rel}"),
        )
    }

    /// LHS - RHS of `rel` at degree `(i, j)` and variable `(x, y)`.
    pub fn relation_residual(
        &self,
        rel: TRelationId,
        i: usize,
        j: usize,
        x: usize,
        y: usize,
    ) -> Result<Rational> {
        let n = self.params.n;
        check_degree(i, j, n)?;
        if x + y > n {
            return Err(Error::out_of_domain(
                format!("tratnik relation {rel}"),
                format!("(x, y) = ({x}, {y}) outside the triangle N = {n}"),
            ));
        }
        let (ii, jj, xx, yy) = (i as i64, j as i64, x as i64, y as i64);
        let mut rhs = Rational::zero();
        match rel.side() {
            Side::Degree => {
                for term in rel.stencil((i, j), &self.params) {
                    let (a, b) = (ii + term.shift.0, jj + term.shift.1);
                    if !self.grid.contains(a, b) {
                        return Err(Error::out_of_domain(
                            format!("tratnik relation {rel}"),
                            format!("nonzero coefficient on degree ({a}, {b})"),
                        ));
                    }
                    rhs += &term.coeff * self.get(a as usize, b as usize, xx, yy);
                }
                Ok(rel.eigenvalue((x, y)) * self.get(i, j, xx, yy) - rhs)
            }
            Side::Variable => {
                for term in rel.stencil((x, y), &self.params) {
                    rhs += &term.coeff * self.get(i, j, xx + term.shift.0, yy + term.shift.1);
                }
                Ok(rel.eigenvalue((i, j)) * self.get(i, j, xx, yy) - rhs)
            }
        }
    }
}

/// LHS - RHS of `rel`; zero on the admissible domain.
pub fn t_relation_residual(
    rel: TRelationId,
    i: usize,
    j: usize,
    x: usize,
    y: usize,
    params: &TratnikParams,
) -> Result<Rational> {
    TratnikTable::new(params)?.relation_residual(rel, i, j, x, y)
}

/// `sum_{(x,y)} weight(x, y) T_{i,j}(x, y) T_{i',j'}(x, y)` over the triangle.
pub fn t_gram_diagnostic(
    weight: impl Fn(usize, usize) -> Rational,
    params: &TratnikParams,
) -> Result<Matrix> {
    let table = TratnikTable::new(params)?;
    let grid = table.grid();
    let w: Vec<Rational> = grid.iter().map(|(x, y)| weight(x, y)).collect();
    let v = table.values();
    Ok(Matrix::from_fn(grid.len(), grid.len(), |a, b| {
        (0..grid.len()).fold(Rational::zero(), |acc, c| {
            acc + &w[c] * &v[(a, c)] * &v[(b, c)]
        })
    }))
}

/// Trinomial-type weight that makes the Gram diagonal:
/// `((1-p1)/(p1(1-p2)))^x ((1-p2)/p2)^y x! y! (N-x-y)!`.
///
/// Found by solving the off-diagonal conditions at small N
/// (see [`solve_diagonalizing_weight`]) and summing the Krawtchouk
/// orthogonality first over `y`, then over `x`.
pub fn trinomial_weight(x: usize, y: usize, params: &TratnikParams) -> Rational {
    let one = Rational::one();
    let (p1, p2) = (&params.p1, &params.p2);
    let rx = (&one - p1) / (p1 * (&one - p2));
    let ry = (&one - p2) / p2;
    pow(&rx, x as i64)
        * pow(&ry, y as i64)
        * factorial(x)
        * factorial(y)
        * factorial(params.n - x - y)
}

/// Diagonal of the Gram matrix under [`trinomial_weight`]:
/// `((1-p1)/p1)^i i! (N-i-j)! (1-p1)^(j-N) ((1-p2)/p2)^j j! (1-p2)^(-N)`.
pub fn trinomial_norm(i: usize, j: usize, params: &TratnikParams) -> Rational {
    let one = Rational::one();
    let (p1, p2) = (&params.p1, &params.p2);
    let n = params.n as i64;
    pow(&((&one - p1) / p1), i as i64)
        * factorial(i)
        * factorial(params.n - i - j)
        * pow(&(&one - p1), j as i64 - n)
        * pow(&((&one - p2) / p2), j as i64)
        * factorial(j)
        * pow(&(&one - p2), -n)
}

/// Solves the linear conditions "every off-diagonal Gram entry vanishes" for
/// the weight values on the triangle. Returns the weight scaled to
/// `w(0, 0) = N!` when the solution space is one-dimensional.
pub fn solve_diagonalizing_weight(params: &TratnikParams) -> Result<Option<Vec<Rational>>> {
    let table = TratnikTable::new(params)?;
    let d = table.grid().len();
    let v = table.values();
    let mut rows = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            rows.push((0..d).map(|c| &v[(a, c)] * &v[(b, c)]).collect::<Vec<_>>());
        }
    }
    let system = Matrix::from_fn(rows.len(), d, |r, c| rows[r][c].clone());
    let basis = nullspace(&system);
    if basis.len() != 1 || basis[0][0].is_zero() {
        return Ok(None);
    }
    let scale = factorial(params.n) / &basis[0][0];
    Ok(Some(basis[0].iter().map(|w| w * &scale).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{binomial, pochhammer, rat};

    fn params(p1: Rational, p2: Rational, n: usize) -> TratnikParams {
        TratnikParams::new(p1, p2, n).unwrap()
    }

    /// `k_i(x; p, n)` expanded from its series with Pochhammer symbols.
    fn k_series(i: usize, x: i64, p: &Rational, n: usize) -> Rational {
        if x < 0 || x as usize > n {
            return Rational::zero();
        }
        let one = Rational::one();
        let mut s = Rational::zero();
        for k in 0..=i.min(x as usize) {
            s += pochhammer(&int(-(i as i64)), k) * pochhammer(&int(-x), k)
                / (pochhammer(&int(-(n as i64)), k) * factorial(k))
                * pow(&p.recip(), k as i64);
        }
        pow(&(p / (&one - p)), x) * binomial(n as i64, x).unwrap() * s
    }

    /// Double sum of both series, independent of the table machinery.
    fn t_oracle(i: usize, j: usize, x: i64, y: i64, pr: &TratnikParams) -> Rational {
        if x < 0 || x as usize > pr.n - j {
            return Rational::zero();
        }
        k_series(i, x, &pr.p1, pr.n - j) * k_series(j, y, &pr.p2, pr.n - x as usize)
    }

    #[test]
    fn factorization_matches_series_oracle() {
        for (p1, p2) in [(rat(1, 3), rat(1, 5)), (rat(-4, 3), rat(9, 7))] {
            for n in 0..6 {
                let pr = params(p1.clone(), p2.clone(), n);
                let table = TratnikTable::new(&pr).unwrap();
                for (i, j) in TriangleGrid::new(n).iter() {
                    for x in -1..=n as i64 + 1 {
                        for y in -1..=n as i64 + 1 {
                            assert_eq!(table.get(i, j, x, y), t_oracle(i, j, x, y, &pr));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn value_examples() {
        let pr = params(rat(1, 3), rat(2, 5), 4);
        for (i, j) in TriangleGrid::new(4).iter() {
            assert_eq!(t_eval(i, j, 0, 0, &pr).unwrap(), int(1));
        }
        let (r1, r2) = (rat(1, 2), rat(2, 3));
        for (x, y) in TriangleGrid::new(4).iter() {
            let expected = pow(&r1, x as i64)
                * binomial(4, x as i64).unwrap()
                * pow(&r2, y as i64)
                * binomial(4 - x as i64, y as i64).unwrap();
            assert_eq!(t_eval(0, 0, x as i64, y as i64, &pr).unwrap(), expected);
        }
        let half = params(rat(1, 2), rat(1, 2), 2);
        for (x, y) in TriangleGrid::new(2).iter() {
            let first = binomial(2, x as i64).unwrap() * int(1 - x as i64);
            let second = binomial(2 - x as i64, y as i64).unwrap();
            assert_eq!(
                t_eval(1, 0, x as i64, y as i64, &half).unwrap(),
                first * second
            );
        }
        assert!(t_eval(2, 1, 0, 0, &half).is_err());
    }

    #[test]
    fn rec_y_single_point() {
        let pr = params(rat(1, 2), rat(1, 3), 4);
        assert_eq!(
            t_relation_residual(TRelationId::RecY, 1, 1, 1, 1, &pr).unwrap(),
            int(0)
        );
    }

    #[test]
    fn diff_j_closes_at_origin() {
        let pr = params(rat(3, 7), rat(5, 11), 3);
        assert_eq!(
            t_relation_residual(TRelationId::DiffJ, 0, 0, 0, 0, &pr).unwrap(),
            int(0)
        );
    }

    #[test]
    fn difference_relations_on_hypotenuse() {
        // the (x, y-1) term at y = 0 has a nonzero coefficient and relies on
        // zero-extension
        let pr = params(rat(2, 7), rat(3, 5), 4);
        let table = TratnikTable::new(&pr).unwrap();
        for (i, j) in TriangleGrid::new(4).iter() {
            for x in 0..=4 {
                let y = 4 - x;
                for rel in [TRelationId::DiffI, TRelationId::DiffJ] {
                    assert!(table.relation_residual(rel, i, j, x, y).unwrap().is_zero());
                }
            }
            assert!(table
                .relation_residual(TRelationId::DiffJ, i, j, 4, 0)
                .unwrap()
                .is_zero());
        }
    }

    #[test]
    fn all_relations_small() {
        for (p1, p2) in [(rat(1, 3), rat(1, 5)), (rat(-2, 3), rat(7, 4))] {
            for n in 0..6 {
                let table = TratnikTable::new(&params(p1.clone(), p2.clone(), n)).unwrap();
                let grid = TriangleGrid::new(n);
                for rel in TRelationId::ALL {
                    for (i, j) in grid.iter() {
                        for (x, y) in grid.iter() {
                            let r = table.relation_residual(rel, i, j, x, y).unwrap();
                            assert!(r.is_zero(), "{rel} ({i},{j}) ({x},{y}) N={n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn residual_domain_errors() {
        let pr = params(rat(1, 3), rat(1, 5), 2);
        assert!(t_relation_residual(TRelationId::RecX, 2, 1, 0, 0, &pr).is_err());
        assert!(t_relation_residual(TRelationId::DiffI, 0, 0, 2, 1, &pr).is_err());
    }

    #[test]
    fn zero_weight_gives_zero_gram() {
        let pr = params(rat(1, 3), rat(1, 5), 2);
        let g = t_gram_diagnostic(|_, _| Rational::zero(), &pr).unwrap();
        assert!(g.row(0).iter().chain(g.row(5)).all(Zero::is_zero));
        assert!(g.is_diagonal());
    }

    #[test]
    fn solved_weight_matches_closed_form() {
        for (p1, p2) in [(rat(1, 3), rat(1, 5)), (rat(2, 7), rat(3, 11))] {
            for n in 1..=3 {
                let pr = params(p1.clone(), p2.clone(), n);
                let solved = solve_diagonalizing_weight(&pr)
                    .unwrap()
                    .expect("unique weight");
                let closed: Vec<_> = TriangleGrid::new(n)
                    .iter()
                    .map(|(x, y)| trinomial_weight(x, y, &pr))
                    .collect();
                assert_eq!(solved, closed, "N={n}");
            }
        }
    }

    #[test]
    fn trinomial_gram_is_diagonal_and_positive() {
        let pr = params(rat(1, 3), rat(1, 5), 5);
        let g = t_gram_diagnostic(|x, y| trinomial_weight(x, y, &pr), &pr).unwrap();
        assert!(g.is_diagonal());
        for (k, (i, j)) in TriangleGrid::new(5).iter().enumerate() {
            assert_eq!(g[(k, k)], trinomial_norm(i, j, &pr));
            assert!(g[(k, k)] > Rational::zero());
        }
    }

    #[test]
    fn residual_table_matches_pointwise() {
        let table =
            TratnikTable::new(&TratnikParams::new(rat(-2, 3), rat(7, 4), 3).unwrap()).unwrap();
        let grid = table.grid().clone();
        for rel in TRelationId::ALL {
            let res = table.relation_residuals(rel).unwrap();
            assert!(res.first_nonzero().is_none(), "{rel}");
            for (r, (i, j)) in grid.iter().enumerate() {
                for (c, (x, y)) in grid.iter().enumerate() {
                    assert_eq!(
                        res[(r, c)],
                        table.relation_residual(rel, i, j, x, y).unwrap()
                    );
                }
            }
        }
    }
}
