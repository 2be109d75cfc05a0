//! λ-Griffiths polynomials
//!
//! ```text
//! G^λ_{i,j}(x, y) = sum_{a=0}^{N-j} λ^a k_i(a; p1, N-j) k_j(y; p2, N-a) k_a(x; p3, N-y)
//! ```
//!
//! with their two Tratnik rewrites, duality, the four bispectral relations,
//! and biorthogonality against `G^{μ/λ}`.
//!
//! The weight that makes `sum_{x,y} W(x,y) G^λ_{i,j}(x,y) G^{μ/λ}_{i',j'}(x,y)`
//! diagonal is `W(x,y) = Ω_{x,y}(p2,p3) (1-p3)^(-2y)`, i.e. `Ω` with its last
//! factor `(1-p3)^y` replaced by `(1-p3)^(-y)`. The diagonal is
//! `Ω_{i,j}(p2,p1) / ((1-p1)(1-p2)(1-p3))^N` with `Ω` taken as written.
//! [`g_gram_with_weight`] evaluates the pairing under any other weight.

use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::{
    check_probability_like, factorial, format_rational, int, pow, rational_sqrt, Matrix, Rational,
    TriangleGrid,
};
use crate::krawtchouk::KrawtchoukFamily;
use crate::stencil::{nonzero, residual_table, Side, StencilTerm};
use crate::tratnik::t_from_families;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSet {
    pub p1: Rational,
    pub p2: Rational,
    pub p3: Rational,
    pub lambda: Rational,
    pub n: usize,
}

impl ParamSet {
    pub fn new(
        p1: Rational,
        p2: Rational,
        p3: Rational,
        lambda: Rational,
        n: usize,
    ) -> Result<Self> {
        let ps = ParamSet {
            p1,
            p2,
            p3,
            lambda,
            n,
        };
        ps.validate()?;
        Ok(ps)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability_like("p1", &self.p1)?;
        check_probability_like("p2", &self.p2)?;
        check_probability_like("p3", &self.p3)?;
        if self.lambda.is_zero() {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: "0".into(),
                reason: "must be nonzero",
            });
        }
        Ok(())
    }

    pub fn with_lambda(&self, lambda: Rational) -> Result<Self> {
        ParamSet::new(
            self.p1.clone(),
            self.p2.clone(),
            self.p3.clone(),
            lambda,
            self.n,
        )
    }

    pub fn mu(&self) -> Result<Rational> {
        mu(&self.p1, &self.p2, &self.p3)
    }

    /// Same polynomials with `λ` replaced by `μ/λ`.
    pub fn partner(&self) -> Result<Self> {
        self.with_lambda(self.mu()? / &self.lambda)
    }

    /// `(p3, p2, p1)` with the same `λ`: the right-hand side of the duality.
    pub fn dual(&self) -> Self {
        ParamSet {
            p1: self.p3.clone(),
            p2: self.p2.clone(),
            p3: self.p1.clone(),
            lambda: self.lambda.clone(),
            n: self.n,
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "--p1 {} --p2 {} --p3 {} --lambda {} --N {}",
            format_rational(&self.p1),
            format_rational(&self.p2),
            format_rational(&self.p3),
            format_rational(&self.lambda),
            self.n
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EvalMethod {
    DirectSum,
    ViaTratnikXY,
    ViaTratnikYX,
}

impl EvalMethod {
    pub const ALL: [EvalMethod; 3] = [
        EvalMethod::DirectSum,
        EvalMethod::ViaTratnikXY,
        EvalMethod::ViaTratnikYX,
    ];
}

struct Families {
    k1: KrawtchoukFamily,
    k2: KrawtchoukFamily,
    k3: KrawtchoukFamily,
}

impl Families {
    fn new(params: &ParamSet) -> Result<Self> {
        Ok(Families {
            k1: KrawtchoukFamily::new(params.p1.clone(), params.n)?,
            k2: KrawtchoukFamily::new(params.p2.clone(), params.n)?,
            k3: KrawtchoukFamily::new(params.p3.clone(), params.n)?,
        })
    }

    fn direct(&self, i: usize, j: usize, x: i64, y: i64, lambda: &Rational, n: usize) -> Rational {
        if y < 0 || y as usize > n || x < 0 {
            return Rational::zero();
        }
        let y_u = y as usize;
        let mut sum = Rational::zero();
        let mut lam_a = Rational::one();
        // terms with a > N - y vanish through k_j(y; p2, N-a)
        for a in 0..=(n - j).min(n - y_u) {
            if let (Some(f1), Some(f2), Some(f3)) = (
                self.k1.k_ref(i, a as i64, n - j),
                self.k2.k_ref(j, y, n - a),
                self.k3.k_ref(a, x, n - y_u),
            ) {
                sum += &lam_a * f1 * f2 * f3;
            }
            lam_a *= lambda;
        }
        sum
    }

    fn via_tratnik_xy(
        &self,
        i: usize,
        j: usize,
        x: i64,
        y: i64,
        lambda: &Rational,
        n: usize,
    ) -> Rational {
        let mut sum = Rational::zero();
        for a in 0..=(n - j) {
            let t = t_from_families(i, j, a as i64, y, n, &self.k1, &self.k2);
            if t.is_zero() {
                continue;
            }
            // t != 0 forces 0 <= y <= N - a
            let k = self.k3.k(a, x, n - y as usize);
            sum += pow(lambda, a as i64) * t * k;
        }
        sum
    }

    fn via_tratnik_yx(
        &self,
        i: usize,
        j: usize,
        x: i64,
        y: i64,
        lambda: &Rational,
        n: usize,
    ) -> Rational {
        let mut sum = Rational::zero();
        for a in 0..=(n - j) {
            let k = self.k1.k(i, a as i64, n - j);
            if k.is_zero() {
                continue;
            }
            let t = t_from_families(j, a, y, x, n, &self.k2, &self.k3);
            sum += pow(lambda, a as i64) * k * t;
        }
        sum
    }
}

fn check_degree(i: usize, j: usize, n: usize) -> Result<()> {
    if i + j > n {
        return Err(Error::out_of_domain(
            "griffiths degree",
            format!("(i, j) = ({i}, {j}) with i + j > N = {n}"),
        ));
    }
    Ok(())
}

/// `G^λ_{i,j}(x, y)` by the chosen route. Zero for `(x, y)` outside the
/// triangle.
pub fn g_eval(
    i: usize,
    j: usize,
    x: i64,
    y: i64,
    params: &ParamSet,
    method: EvalMethod,
) -> Result<Rational> {
    params.validate()?;
    check_degree(i, j, params.n)?;
    let fam = Families::new(params)?;
    let (l, n) = (&params.lambda, params.n);
    Ok(match method {
        EvalMethod::DirectSum => fam.direct(i, j, x, y, l, n),
        EvalMethod::ViaTratnikXY => fam.via_tratnik_xy(i, j, x, y, l, n),
        EvalMethod::ViaTratnikYX => fam.via_tratnik_yx(i, j, x, y, l, n),
    })
}

/// The `a = 0` term of the defining sum, `k_j(y; p2, N) (p3/(1-p3))^x C(N-y, x)`:
/// the value the family tends to as `λ -> 0`.
pub fn g_lambda_zero_truncation(
    i: usize,
    j: usize,
    x: i64,
    y: i64,
    params: &ParamSet,
) -> Result<Rational> {
    check_degree(i, j, params.n)?;
    let fam = Families::new(&ParamSet {
        lambda: Rational::one(),
        ..params.clone()
    })?;
    let n = params.n;
    if y < 0 || y as usize > n || x < 0 {
        return Ok(Rational::zero());
    }
    // k_i(0; p1, N-j) = 1
    Ok(fam.k2.k(j, y, n) * fam.k3.k(0, x, n - y as usize))
}

/// `[(p1/(1-p1))^i (p2/(1-p2))^j / (i! j! (N-i-j)!)] G^{λ(1-p1)/p1}_{i,j}(x, y)`.
pub fn g_tilde_eval(i: usize, j: usize, x: i64, y: i64, params: &ParamSet) -> Result<Rational> {
    params.validate()?;
    check_degree(i, j, params.n)?;
    let scaled = params.with_lambda(tilde_lambda(params))?;
    let g = g_eval(i, j, x, y, &scaled, EvalMethod::DirectSum)?;
    Ok(tilde_prefactor(i, j, params) * g)
}

fn tilde_lambda(params: &ParamSet) -> Rational {
    &params.lambda * (Rational::one() - &params.p1) / &params.p1
}

fn tilde_prefactor(i: usize, j: usize, params: &ParamSet) -> Rational {
    let one = Rational::one();
    let r1 = &params.p1 / (&one - &params.p1);
    let r2 = &params.p2 / (&one - &params.p2);
    pow(&r1, i as i64) * pow(&r2, j as i64)
        / (factorial(i) * factorial(j) * factorial(params.n - i - j))
}

/// `G~_{i,j}(x,y; p1,p2,p3) - G~_{x,y}(i,j; p3,p2,p1)` at equal `λ`.
pub fn g_duality_residual(
    i: usize,
    j: usize,
    x: usize,
    y: usize,
    params: &ParamSet,
) -> Result<Rational> {
    check_degree(x, y, params.n)?;
    let lhs = g_tilde_eval(i, j, x as i64, y as i64, params)?;
    let rhs = g_tilde_eval(x, y, i as i64, j as i64, &params.dual())?;
    Ok(lhs - rhs)
}

/// Tilde-normalized values over degree x variable points.
pub fn g_tilde_table(params: &ParamSet) -> Result<Matrix> {
    let table = GriffithsTable::new(&params.with_lambda(tilde_lambda(params))?)?;
    let grid = table.grid().clone();
    Ok(Matrix::from_fn(grid.len(), grid.len(), |r, c| {
        let (i, j) = grid.point(r);
        tilde_prefactor(i, j, params) * &table.values()[(r, c)]
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GRelationId {
    RecX,
    RecY,
    DiffI,
    DiffJ,
}

impl GRelationId {
    pub const ALL: [GRelationId; 4] = [
        GRelationId::RecX,
        GRelationId::RecY,
        GRelationId::DiffI,
        GRelationId::DiffJ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GRelationId::RecX => "rec-x",
            GRelationId::RecY => "rec-y",
            GRelationId::DiffI => "diff-i",
            GRelationId::DiffJ => "diff-j",
        }
    }

    pub fn side(self) -> Side {
        match self {
            GRelationId::RecX | GRelationId::RecY => Side::Degree,
            GRelationId::DiffI | GRelationId::DiffJ => Side::Variable,
        }
    }

    pub fn eigenvalue(self, other: (usize, usize)) -> Rational {
        let (a, b) = (other.0 as i64, other.1 as i64);
        match self {
            GRelationId::RecX | GRelationId::DiffI => int(-a),
            GRelationId::RecY | GRelationId::DiffJ => int(-b),
        }
    }

    fn check_denominators(self, params: &ParamSet) -> Result<()> {
        let one = Rational::one();
        let bad = |what: &str| {
            Err(Error::DegenerateParams(format!(
                "{} requires {what}",
                self.name()
            )))
        };
        match self {
            GRelationId::RecX => {
                if params.lambda.is_zero() {
                    return bad("lambda != 0");
                }
                if params.p1 == one {
                    return bad("p1 != 1");
                }
            }
            GRelationId::RecY => {}
            GRelationId::DiffI => {
                if params.lambda.is_zero() {
                    return bad("lambda != 0");
                }
                if params.p3 == one {
                    return bad("p3 != 1");
                }
                if params.p2 == one {
                    return bad("p2 != 1");
                }
            }
            GRelationId::DiffJ => {
                if params.p3 == one {
                    return bad("p3 != 1");
                }
            }
        }
        Ok(())
    }

    /// Stencil at a degree point (recurrences) or variable point (difference
    /// relations), transcribed term by term without simplification.
    pub fn stencil(self, center: (usize, usize), params: &ParamSet) -> Result<Vec<StencilTerm>> {
        self.check_denominators(params)?;
        let (p1, p2, p3, l) = (&params.p1, &params.p2, &params.p3, &params.lambda);
        let one = Rational::one();
        let (q1, q2, q3) = (&one - p1, &one - p2, &one - p3);
        let n = params.n as i64;
        let t = StencilTerm::new;
        let terms = match self {
            GRelationId::RecX => {
                let (i, j) = (center.0 as i64, center.1 as i64);
                let (ii, jj, m) = (int(i), int(j), int(n - i - j));
                // λ p1 (1-p3)/(1-p1) - p3
                let a = l * p1 * &q3 / &q1 - p3;
                // λ(1-p3) + p3
                let b = l * &q3 + p3;
                // λ(1-p2) - 1
                let c = l * &q2 - &one;
                // λ p1 (1-p2) + 1 - p1
                let d = l * p1 * &q2 + &q1;
                vec![
                    t((1, 0), &q1 / l * &a * (l * p1 * &q2 / &q1 + &one) * &m),
                    t((-1, 0), -(&q1 / l * &b * &c * &ii)),
                    t((0, 1), p2 * &a * &m),
                    t((0, -1), -(&q1 * p3 / l * &c * &jj)),
                    t((1, -1), -(p3 / l * &d * &jj)),
                    t((-1, 1), -(p2 * &b * &ii)),
                    t(
                        (0, 0),
                        -(&b * &d / l * &ii + p2 * p3 * &jj
                            - &c * (l * p1 * &q3 - p3 * &q1) / l * &m),
                    ),
                ]
            }
            GRelationId::RecY => {
                let (i, j) = (center.0 as i64, center.1 as i64);
                let (ii, jj, m) = (int(i), int(j), int(n - i - j));
                vec![
                    t((1, 0), -(p1 * p2 * &m)),
                    t((-1, 0), -(p2 * &q1 * &ii)),
                    t((0, 1), p2 * &m),
                    t((0, -1), &q1 * &q2 * &jj),
                    t((1, -1), p1 * &q2 * &jj),
                    t((-1, 1), p2 * &ii),
                    t((0, 0), -(p1 * p2 * &ii + &q2 * &jj + p2 * &q1 * &m)),
                ]
            }
            GRelationId::DiffI => {
                let (x, y) = (center.0 as i64, center.1 as i64);
                let (xx, yy, rest) = (int(x), int(y), int(n - x - y));
                let (x1, y1, k) = (int(x + 1), int(y + 1), int(n - x - y + 1));
                // λ p1 (1-p2)(1-p3) - p3 (1-p1)
                let b = l * p1 * &q2 * &q3 - p3 * &q1;
                let lm = &one - l;
                vec![
                    t(
                        (1, 0),
                        &x1 * &lm / l * &q3 * (l * p1 * (p2 - &one) + p1 - &one),
                    ),
                    t(
                        (-1, 0),
                        -(&k * (l * (p3 - &one) - p3) / (l * (p3 - &one)) * &b),
                    ),
                    t((0, 1), -(&y1 * p1 * &q2 * &lm)),
                    t((0, -1), -(&k * p2 / (l * &q2) * &b)),
                    t(
                        (1, -1),
                        -(&x1 * p2 * &q3 / (l * &q2) * (l * p1 * &q2 + &q1)),
                    ),
                    t((-1, 1), -(&y1 * p1 * &q2 / &q3 * (l * &q3 + p3))),
                    t(
                        (0, 0),
                        -(&xx / l * (l * &q3 + p3) * (l * p1 * &q2 + &q1)
                            + &yy * p1 * p2
                            + &rest * &lm / l * &b),
                    ),
                ]
            }
            GRelationId::DiffJ => {
                let (x, y) = (center.0 as i64, center.1 as i64);
                let (xx, yy, rest) = (int(x), int(y), int(n - x - y));
                let (x1, y1, k) = (int(x + 1), int(y + 1), int(n - x - y + 1));
                vec![
                    t((1, 0), -(&x1 * p2 * &q3)),
                    t((-1, 0), -(&k * p2 * p3)),
                    t((0, 1), &y1 * &q2),
                    t((0, -1), &k * p2 * &q3),
                    t((1, -1), &x1 * p2 * &q3),
                    t((-1, 1), &y1 * &q2 * p3 / &q3),
                    t((0, 0), -(&xx * p3 * p2 + &yy * &q2 + &rest * p2 * &q3)),
                ]
            }
        };
        Ok(nonzero(terms))
    }
}

impl fmt::Display for GRelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GRelationId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GRelationId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::out_of_domain("griffiths relation id", s.to_string()))
    }
}

/// Every `G^λ_{i,j}(x, y)` for one parameter set, degree points as rows and
/// variable points as columns.
#[derive(Clone, Debug)]
pub struct GriffithsTable {
    params: ParamSet,
    grid: TriangleGrid,
    values: Matrix,
}

impl GriffithsTable {
    pub fn new(params: &ParamSet) -> Result<Self> {
        Self::with_method(params, EvalMethod::DirectSum)
    }

    pub fn with_method(params: &ParamSet, method: EvalMethod) -> Result<Self> {
        params.validate()?;
        let fam = Families::new(params)?;
        let grid = TriangleGrid::new(params.n);
        let (l, n) = (&params.lambda, params.n);
        let values = Matrix::from_fn(grid.len(), grid.len(), |r, c| {
            let (i, j) = grid.point(r);
            let (x, y) = (grid.point(c).0 as i64, grid.point(c).1 as i64);
            match method {
                EvalMethod::DirectSum => fam.direct(i, j, x, y, l, n),
                EvalMethod::ViaTratnikXY => fam.via_tratnik_xy(i, j, x, y, l, n),
                EvalMethod::ViaTratnikYX => fam.via_tratnik_yx(i, j, x, y, l, n),
            }
        });
        Ok(GriffithsTable {
            params: params.clone(),
            grid,
            values,
        })
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn grid(&self) -> &TriangleGrid {
        &self.grid
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

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
    pub fn relation_residuals(&self, rel: GRelationId) -> Result<Matrix> {
        residual_table(
            &self.grid,
            &self.values,
            rel.side(),
            |c| rel.stencil(c, &self.params),
            |p| rel.eigenvalue(p),
            &format!("griffiths relation {rel}"),
        )
    }

    pub fn relation_residual(
        &self,
        rel: GRelationId,
        i: usize,
        j: usize,
        x: usize,
        y: usize,
    ) -> Result<Rational> {
        let n = self.params.n;
        check_degree(i, j, n)?;
        if x + y > n {
            return Err(Error::out_of_domain(
                format!("griffiths relation {rel}"),
                format!("(x, y) = ({x}, {y}) outside the triangle N = {n}"),
            ));
        }
        let (ii, jj, xx, yy) = (i as i64, j as i64, x as i64, y as i64);
        let mut rhs = Rational::zero();
        match rel.side() {
            Side::Degree => {
                for term in rel.stencil((i, j), &self.params)? {
                    let (a, b) = (ii + term.shift.0, jj + term.shift.1);
                    if !self.grid.contains(a, b) {
                        return Err(Error::out_of_domain(
                            format!("griffiths relation {rel}"),
                            format!("nonzero coefficient on degree ({a}, {b})"),
                        ));
                    }
                    rhs += &term.coeff * self.get(a as usize, b as usize, xx, yy);
                }
                Ok(rel.eigenvalue((x, y)) * self.get(i, j, xx, yy) - rhs)
            }
            Side::Variable => {
                for term in rel.stencil((x, y), &self.params)? {
                    rhs += &term.coeff * self.get(i, j, xx + term.shift.0, yy + term.shift.1);
                }
                Ok(rel.eigenvalue((i, j)) * self.get(i, j, xx, yy) - rhs)
            }
        }
    }
}

/// LHS - RHS of `rel` with all seven stencil terms; zero on the triangles.
pub fn g_relation_residual(
    rel: GRelationId,
    i: usize,
    j: usize,
    x: usize,
    y: usize,
    params: &ParamSet,
) -> Result<Rational> {
    // denominators first, so degenerate input never reaches evaluation
    rel.check_denominators(params)?;
    GriffithsTable::new(params)?.relation_residual(rel, i, j, x, y)
}

/// `μ = (1-p1) p3 / (p1 (1-p2) (1-p3))`.
pub fn mu(p1: &Rational, p2: &Rational, p3: &Rational) -> Result<Rational> {
    let one = Rational::one();
    let den = p1 * (&one - p2) * (&one - p3);
    if den.is_zero() {
        return Err(Error::DegenerateParams(
            "mu needs p1 != 0, p2 != 1 and p3 != 1".into(),
        ));
    }
    Ok((&one - p1) * p3 / den)
}

/// `Ω_{x,y}(pa, pb) = x! y! (N-x-y)! ((1-pa)/pa)^y ((1-pb)/pb)^x (1-pb)^y`.
/// The first slot powers `y`, the second powers `x`.
pub fn omega(x: usize, y: usize, pa: &Rational, pb: &Rational, n: usize) -> Result<Rational> {
    if x + y > n {
        return Err(Error::out_of_domain(
            "omega",
            format!("(x, y) = ({x}, {y}) outside the triangle N = {n}"),
        ));
    }
    check_probability_like("pa", pa)?;
    check_probability_like("pb", pb)?;
    let one = Rational::one();
    Ok(factorial(x)
        * factorial(y)
        * factorial(n - x - y)
        * pow(&((&one - pa) / pa), y as i64)
        * pow(&((&one - pb) / pb), x as i64)
        * pow(&(&one - pb), y as i64))
}

/// Weight of the biorthogonality pairing, `Ω_{x,y}(p2, p3) (1-p3)^(-2y)`.
/// It does not involve `λ`.
pub fn biorth_weight(x: usize, y: usize, params: &ParamSet) -> Result<Rational> {
    let q3 = Rational::one() - &params.p3;
    Ok(omega(x, y, &params.p2, &params.p3, params.n)? * pow(&q3, -2 * y as i64))
}

/// Diagonal of the biorthogonality pairing,
/// `Ω_{i,j}(p2, p1) / ((1-p1)(1-p2)(1-p3))^N`.
pub fn biorth_norm(i: usize, j: usize, params: &ParamSet) -> Result<Rational> {
    let one = Rational::one();
    let prod = (&one - &params.p1) * (&one - &params.p2) * (&one - &params.p3);
    Ok(omega(i, j, &params.p2, &params.p1, params.n)? / pow(&prod, params.n as i64))
}

/// `sum_{(x,y)} weight(x, y) G^λ_{i,j}(x, y) G^{λ'}_{i',j'}(x, y)` with
/// `λ' = partner_lambda`.
pub fn g_gram_with_weight(
    weight: impl Fn(usize, usize) -> Rational,
    params: &ParamSet,
    partner_lambda: &Rational,
) -> Result<Matrix> {
    let left = GriffithsTable::new(params)?;
    let right = GriffithsTable::new(&params.with_lambda(partner_lambda.clone())?)?;
    Ok(pair_tables(&weight, &left, &right))
}

fn pair_tables(
    weight: &impl Fn(usize, usize) -> Rational,
    left: &GriffithsTable,
    right: &GriffithsTable,
) -> Matrix {
    let grid = left.grid();
    let w: Vec<Rational> = grid.iter().map(|(x, y)| weight(x, y)).collect();
    let (a, b) = (left.values(), right.values());
    let d = grid.len();
    // scale the left factor once instead of per entry
    let wa = Matrix::from_fn(d, d, |r, c| &w[c] * &a[(r, c)]);
    Matrix::from_fn(d, d, |r, s| {
        (0..d).fold(Rational::zero(), |acc, c| acc + &wa[(r, c)] * &b[(s, c)])
    })
}

/// Biorthogonality Gram of `G^λ` against `G^{μ/λ}`.
pub fn g_biorth_gram(params: &ParamSet) -> Result<Matrix> {
    params.validate()?;
    let partner = params.partner()?;
    let left = GriffithsTable::new(params)?;
    let right = GriffithsTable::new(&partner)?;
    let weights: Vec<Rational> = left
        .grid()
        .iter()
        .map(|(x, y)| biorth_weight(x, y, params))
        .collect::<Result<_>>()?;
    let grid = left.grid().clone();
    Ok(pair_tables(
        &|x, y| weights[grid.index_of(x as i64, y as i64).unwrap()].clone(),
        &left,
        &right,
    ))
}

/// `(+√μ, -√μ)` when `μ` is the square of a rational.
pub fn orthogonal_lambdas(
    p1: &Rational,
    p2: &Rational,
    p3: &Rational,
) -> Result<Option<(Rational, Rational)>> {
    let m = mu(p1, p2, p3)?;
    Ok(rational_sqrt(&m).map(|r| (r.clone(), -r)))
}

/// The `p3` for which `μ(p1, p2, p3) = s²`, i.e. the solution of
/// `(1-p1) p3 = s² p1 (1-p2) (1-p3)`.
pub fn p3_for_square_mu(p1: &Rational, p2: &Rational, s: &Rational) -> Rational {
    let one = Rational::one();
    let c = s * s * p1 * (&one - p2);
    &c / ((&one - p1) + &c)
}
