//! Univariate Krawtchouk functions in the weight-dressed normalization
//!
//! ```text
//! k_i(x; p, N) = (p/(1-p))^x C(N, x) 2F1(-i, -x; -N; 1/p)
//! ```
//!
//! together with their orthogonality weight, duality, and the catalog of
//! fourteen three-term identities that the bivariate constructions are built
//! from. Evaluation outside `0 <= x <= N` returns 0 through the binomial
//! prefactor; every boundary stencil below relies on that.

use num_traits::{One, Zero};
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exact::{
    binomial, check_probability_like, factorial, hyp2f1_terminating, int, pow, Matrix, Rational,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrawtchoukParams {
    pub p: Rational,
    pub n: usize,
}

impl KrawtchoukParams {
    pub fn new(p: Rational, n: usize) -> Result<Self> {
        check_probability_like("p", &p)?;
        Ok(KrawtchoukParams { p, n })
    }
}

/// `k_i(x; p, size)` without parameter validation. The caller guarantees
/// `p` is not 0 or 1 and that `i` is a legal degree whenever `0 <= x <= size`.
pub(crate) fn k_raw(i: usize, x: i64, p: &Rational, size: usize) -> Rational {
    if x < 0 || x as usize > size {
        return Rational::zero();
    }
    let ratio = p / (Rational::one() - p);
    let prefactor = pow(&ratio, x) * binomial(size as i64, x).expect("size is non-negative");
    let series = hyp2f1_terminating(i, x as usize, size, &p.recip())
        .expect("x <= size keeps the series inside its domain");
    prefactor * series
}

/// `k_i(x; p, N)`; zero for `x` outside `0..=N`.
pub fn k_eval(i: usize, x: i64, params: &KrawtchoukParams) -> Result<Rational> {
    if i > params.n {
        return Err(Error::out_of_domain(
            "k_eval",
            format!("degree {i} outside 0..={}", params.n),
        ));
    }
    Ok(k_raw(i, x, &params.p, params.n))
}

/// `w(x; p, N) = ((1-p)/p)^x x! (N-x)!`.
pub fn k_weight(x: usize, params: &KrawtchoukParams) -> Result<Rational> {
    if x > params.n {
        return Err(Error::out_of_domain(
            "k_weight",
            format!("x = {x} outside 0..={}", params.n),
        ));
    }
    Ok(weight_raw(x, &params.p, params.n))
}

pub(crate) fn weight_raw(x: usize, p: &Rational, size: usize) -> Rational {
    let ratio = (Rational::one() - p) / p;
    pow(&ratio, x as i64) * factorial(x) * factorial(size - x)
}

/// Full `(size+1) x (size+1)` table of `k_i(x; p, size)`.
#[derive(Clone, Debug)]
pub struct KrawtchoukTable {
    size: usize,
    values: Vec<Rational>,
}

impl KrawtchoukTable {
    pub fn new(p: &Rational, size: usize) -> Self {
        let mut values = Vec::with_capacity((size + 1) * (size + 1));
        for i in 0..=size {
            for x in 0..=size {
                values.push(k_raw(i, x as i64, p, size));
            }
        }
        KrawtchoukTable { size, values }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `k_i(x)` with zero-extension in `x`. Panics if `i > size`.
    pub fn get(&self, i: usize, x: i64) -> Rational {
        assert!(i <= self.size, "degree {i} exceeds size {}", self.size);
        if x < 0 || x as usize > self.size {
            Rational::zero()
        } else {
            self.values[i * (self.size + 1) + x as usize].clone()
        }
    }

    fn get_ref(&self, i: usize, x: usize) -> &Rational {
        &self.values[i * (self.size + 1) + x]
    }
}

/// Memoized tables `k_i(x; p, M)` for every size `M` in `0..=max_size`,
/// filled on first use. Each slot is written at most once, so concurrent
/// readers see either nothing or the final table.
#[derive(Debug)]
pub struct KrawtchoukFamily {
    p: Rational,
    tables: Vec<OnceLock<KrawtchoukTable>>,
}

impl KrawtchoukFamily {
    pub fn new(p: Rational, max_size: usize) -> Result<Self> {
        check_probability_like("p", &p)?;
        Ok(KrawtchoukFamily {
            p,
            tables: (0..=max_size).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn max_size(&self) -> usize {
        self.tables.len() - 1
    }

    pub fn table(&self, size: usize) -> &KrawtchoukTable {
        self.tables[size].get_or_init(|| KrawtchoukTable::new(&self.p, size))
    }

    /// `k_i(x; p, size)` with zero-extension in `x`.
    pub fn k(&self, i: usize, x: i64, size: usize) -> Rational {
        self.k_ref(i, x, size)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Borrowing lookup; `None` stands for an exact zero from zero-extension.
    pub(crate) fn k_ref(&self, i: usize, x: i64, size: usize) -> Option<&Rational> {
        if x < 0 || x as usize > size {
            return None;
        }
        Some(self.table(size).get_ref(i, x as usize))
    }
}

/// `sum_x w(x) k_i(x) k_l(x)` for all degree pairs.
pub fn k_gram(params: &KrawtchoukParams) -> Matrix {
    let n = params.n;
    let table = KrawtchoukTable::new(&params.p, n);
    let weights: Vec<Rational> = (0..=n).map(|x| weight_raw(x, &params.p, n)).collect();
    Matrix::from_fn(n + 1, n + 1, |i, l| {
        (0..=n).fold(Rational::zero(), |acc, x| {
            acc + &weights[x] * table.get_ref(i, x) * table.get_ref(l, x)
        })
    })
}

/// Diagonal `w(i; p, N) / (1-p)^N` of the orthogonality relation.
pub fn k_norm(i: usize, params: &KrawtchoukParams) -> Result<Rational> {
    Ok(k_weight(i, params)? / pow(&(Rational::one() - &params.p), params.n as i64))
}

/// `w(x) k_i(x) - w(i) k_x(i)`; identically zero.
pub fn k_duality_residual(i: usize, x: usize, params: &KrawtchoukParams) -> Result<Rational> {
    let lhs = k_weight(x, params)? * k_eval(i, x as i64, params)?;
    let rhs = k_weight(i, params)? * k_eval(x, i as i64, params)?;
    Ok(lhs - rhs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationId {
    Difference,
    Recurrence,
    ContigDiff1,
    ContigDiff2,
    ContigRecu1,
    ContigRecu2,
    Forward,
    Backward,
    DualForward,
    DualBackward,
    ShiftedDiff1,
    ShiftedDiff2,
    ShiftedRecu1,
    ShiftedRecu2,
}

impl RelationId {
    pub const ALL: [RelationId; 14] = [
        RelationId::Difference,
        RelationId::Recurrence,
        RelationId::ContigDiff1,
        RelationId::ContigDiff2,
        RelationId::ContigRecu1,
        RelationId::ContigRecu2,
        RelationId::Forward,
        RelationId::Backward,
        RelationId::DualForward,
        RelationId::DualBackward,
        RelationId::ShiftedDiff1,
        RelationId::ShiftedDiff2,
        RelationId::ShiftedRecu1,
        RelationId::ShiftedRecu2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationId::Difference => "difference",
            RelationId::Recurrence => "recurrence",
            RelationId::ContigDiff1 => "contig-diff-1",
            RelationId::ContigDiff2 => "contig-diff-2",
            RelationId::ContigRecu1 => "contig-recu-1",
            RelationId::ContigRecu2 => "contig-recu-2",
            RelationId::Forward => "forward",
            RelationId::Backward => "backward",
            RelationId::DualForward => "dual-forward",
            RelationId::DualBackward => "dual-backward",
            RelationId::ShiftedDiff1 => "shifted-diff-1",
            RelationId::ShiftedDiff2 => "shifted-diff-2",
            RelationId::ShiftedRecu1 => "shifted-recu-1",
            RelationId::ShiftedRecu2 => "shifted-recu-2",
        }
    }

    /// Degrees `i` and arguments `x` at which the relation is checked for
    /// polynomials of size `n`, or `None` when `n` is too small for the
    /// relation to reference only legal sizes and degrees.
    pub fn admissible(self, n: usize) -> Option<(RangeInclusive<usize>, RangeInclusive<usize>)> {
        use RelationId::*;
        let xs = 0..=n;
        match self {
            // reference size n-1 with degree i
            ContigDiff1 => (n >= 1).then(|| (0..=n - 1, xs)),
            // reference degree i+1 at size n
            ShiftedDiff2 => (n >= 1).then(|| (0..=n - 1, xs)),
            // reference degree i-1
            Backward => (n >= 1).then_some((1..=n, xs)),
            ShiftedDiff1 => (n >= 1).then_some((1..=n, xs)),
            // size n-1, the offending degree-n term carries a factor (n-i)
            ContigRecu1 | DualBackward => (n >= 1).then_some((0..=n, xs)),
            Difference | Recurrence | ContigDiff2 | ContigRecu2 | Forward | DualForward
            | ShiftedRecu1 | ShiftedRecu2 => Some((0..=n, xs)),
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RelationId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::out_of_domain("relation id", s.to_string()))
    }
}

/// One `coeff * k_degree(arg; p, size)` term of a relation.
#[derive(Clone, Debug)]
struct Term {
    coeff: Rational,
    degree: i64,
    arg: i64,
    size: i64,
}

fn term(coeff: Rational, degree: i64, arg: i64, size: i64) -> Term {
    Term {
        coeff,
        degree,
        arg,
        size,
    }
}

/// Left and right sides of `rel` at degree `n`, argument `x`, size `size`.
fn relation_sides(
    rel: RelationId,
    n: i64,
    x: i64,
    size: i64,
    p: &Rational,
) -> (Vec<Term>, Vec<Term>) {
    use RelationId::*;
    let one = Rational::one();
    let q = &one - p;
    let nn = size;
    match rel {
        Difference => (
            vec![term(int(-(n + 1)), n, x, nn)],
            vec![
                term(&q * int(x + 1), n, x + 1, nn),
                term(p * int(nn - x + 1), n, x - 1, nn),
                term(-(&q * int(x + 1) + p * int(nn - x + 1)), n, x, nn),
            ],
        ),
        Recurrence => (
            vec![term(int(-x), n, x, nn)],
            vec![
                term(p * int(nn - n), n + 1, x, nn),
                term(&q * int(n), n - 1, x, nn),
                term(-(p * int(nn - n) + &q * int(n)), n, x, nn),
            ],
        ),
        ContigDiff1 => (
            vec![term(one.clone(), n, x, nn)],
            vec![
                term(one.clone(), n, x, nn - 1),
                term(p / &q, n, x - 1, nn - 1),
            ],
        ),
        ContigDiff2 => (
            vec![term(int(nn + 1 - n) / &q, n, x, nn)],
            vec![
                term(int(nn + 1 - x), n, x, nn + 1),
                term(int(x + 1), n, x + 1, nn + 1),
            ],
        ),
        ContigRecu1 => (
            vec![term(int(nn - x), n, x, nn)],
            vec![
                term(int(nn - n), n, x, nn - 1),
                term(int(n), n - 1, x, nn - 1),
            ],
        ),
        ContigRecu2 => (
            vec![term(one.clone(), n, x, nn)],
            vec![
                term(p.clone(), n + 1, x, nn + 1),
                term(q.clone(), n, x, nn + 1),
            ],
        ),
        Forward => (
            vec![term(int(n + 1) / &q, n, x, nn)],
            vec![
                term(p / &q * int(nn + 1 - x), n + 1, x, nn + 1),
                term(int(-(x + 1)), n + 1, x + 1, nn + 1),
            ],
        ),
        Backward => (
            vec![term(one.clone(), n, x, nn)],
            vec![
                term(one.clone(), n - 1, x, nn - 1),
                term(-one.clone(), n - 1, x - 1, nn - 1),
            ],
        ),
        DualForward => (
            vec![term(q.recip(), n, x, nn)],
            vec![
                term(one.clone(), n, x + 1, nn + 1),
                term(-one.clone(), n + 1, x + 1, nn + 1),
            ],
        ),
        DualBackward => (
            vec![term(int(x), n, x, nn)],
            vec![
                term(p * int(nn - n) / &q, n, x - 1, nn - 1),
                term(int(-n), n - 1, x - 1, nn - 1),
            ],
        ),
        ShiftedDiff1 => (
            vec![term(int(nn + 1 - n) / &q, n, x, nn)],
            vec![
                term(int(x + 1), n - 1, x + 1, nn),
                term(int(-(nn + 1 - x)), n - 1, x - 1, nn),
                term(int(nn - 2 * x), n - 1, x, nn),
            ],
        ),
        ShiftedDiff2 => (
            vec![term(int(n + 1), n, x, nn)],
            vec![
                term(-(&q * int(x + 1)), n + 1, x + 1, nn),
                term(p * p / &q * int(nn + 1 - x), n + 1, x - 1, nn),
                term(-(p * int(2 * x - nn)), n + 1, x, nn),
            ],
        ),
        ShiftedRecu1 => (
            vec![term(int(x), n, x, nn)],
            vec![
                term(p * p * int(nn - n) / &q, n + 1, x - 1, nn),
                term(-(int(n) * &q), n - 1, x - 1, nn),
                term(p * int(nn - 2 * n), n, x - 1, nn),
            ],
        ),
        ShiftedRecu2 => (
            vec![term(int(nn - x) / &q, n, x, nn)],
            vec![
                term(int(n - nn), n + 1, x + 1, nn),
                term(int(n), n - 1, x + 1, nn),
                term(int(nn - 2 * n), n, x + 1, nn),
            ],
        ),
    }
}

fn eval_terms(rel: RelationId, terms: &[Term], family: &KrawtchoukFamily) -> Result<Rational> {
    let mut acc = Rational::zero();
    for t in terms {
        if t.coeff.is_zero() || t.arg < 0 || t.arg > t.size {
            continue;
        }
        if t.size < 0 || t.degree < 0 || t.degree > t.size || t.size as usize > family.max_size() {
            return Err(Error::out_of_domain(
                format!("relation {rel}"),
                format!(
                    "term k_{}({}; p, {}) has a nonzero coefficient but an illegal degree or size",
                    t.degree, t.arg, t.size
                ),
            ));
        }
        acc += &t.coeff * family.k(t.degree as usize, t.arg, t.size as usize);
    }
    Ok(acc)
}

/// LHS - RHS of `rel` at `(i, x)`, using a shared table family whose
/// `max_size` must be at least `params.n + 1`.
pub fn relation_residual_with(
    rel: RelationId,
    i: usize,
    x: usize,
    n: usize,
    family: &KrawtchoukFamily,
) -> Result<Rational> {
    let in_domain = rel
        .admissible(n)
        .is_some_and(|(is, xs)| is.contains(&i) && xs.contains(&x));
    if !in_domain {
        return Err(Error::out_of_domain(
            format!("relation {rel}"),
            format!("(i, x) = ({i}, {x}) at N = {n}"),
        ));
    }
    let (lhs, rhs) = relation_sides(rel, i as i64, x as i64, n as i64, family.p());
    Ok(eval_terms(rel, &lhs, family)? - eval_terms(rel, &rhs, family)?)
}

/// LHS - RHS of `rel` at `(i, x)`; zero on the admissible domain.
pub fn k_relation_residual(
    rel: RelationId,
    i: usize,
    x: usize,
    params: &KrawtchoukParams,
) -> Result<Rational> {
    let family = KrawtchoukFamily::new(params.p.clone(), params.n + 1)?;
    relation_residual_with(rel, i, x, params.n, &family)
}
