//! Exact rational scalars, combinatorial primitives, the terminating
//! Gauss series and the triangular index sets shared by every family.
//!
//! All values here are canonical `BigRational`s: the denominator is positive
//! and coprime to the numerator after every operation, so `==` is exact
//! equality of rational numbers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical form.
pub type Rational = BigRational;

/// `num/den` as a rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"num/den"` or a bare integer, with optional sign and surrounding
/// whitespace. A zero denominator is a parse error.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let err = || Error::ParseRational(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// `"num/den"` in decimal, with the denominator omitted when it is 1.
pub fn format_rational(q: &Rational) -> String {
    // BigRational's Display already omits a unit denominator and carries the
    // sign on the numerator.
    q.to_string()
}

/// Exact integer power; negative exponents invert.
pub fn pow(q: &Rational, e: i64) -> Rational {
    if e >= 0 {
        Pow::pow(q, e as u64)
    } else {
        Pow::pow(q.recip(), e.unsigned_abs())
    }
}

pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Rational::from_integer(acc)
}

/// C(n, k) with the zero-extension convention: 0 whenever `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> Result<Rational> {
    if n < 0 {
        return Err(Error::NegativeBinomial { n });
    }
    if k < 0 || k > n {
        return Ok(Rational::zero());
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for t in 0..k {
        acc *= n - t;
        acc /= t + 1;
    }
    Ok(Rational::from_integer(acc))
}

/// Rising factorial (a)_k = a(a+1)...(a+k-1), computed as a literal product.
pub fn pochhammer(a: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    let mut f = a.clone();
    for _ in 0..k {
        acc *= &f;
        f += Rational::one();
    }
    acc
}

/// Terminating `2F1(-i, -x; -n; z)`, summed term by term up to `min(i, x)`.
///
/// The lower parameter `(-n)_k` only vanishes for `k > n`, so the series is
/// well defined whenever `min(i, x) <= n`.
pub fn hyp2f1_terminating(i: usize, x: usize, n: usize, z: &Rational) -> Result<Rational> {
    let top = i.min(x);
    if top > n {
        return Err(Error::out_of_domain(
            "hyp2f1_terminating",
            format!("min(i, x) = {top} exceeds n = {n}; (-n)_k vanishes inside the sum"),
        ));
    }
    let (mi, mx, mn) = (int(-(i as i64)), int(-(x as i64)), int(-(n as i64)));
    let mut sum = Rational::zero();
    // Running term t_k = (-i)_k (-x)_k / ((-n)_k k!) z^k.
    let mut term = Rational::one();
    for k in 0..=top {
        sum += &term;
        if k < top {
            let kk = int(k as i64);
            term = term * (&mi + &kk) * (&mx + &kk) * z / ((&mn + &kk) * (&kk + Rational::one()));
        }
    }
    Ok(sum)
}

/// Positive rational square root, when one exists.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    // Canonical form: q is a square iff numerator and denominator both are.
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Rejects 0 and 1, the two values at which `p/(1-p)` or `1/p` blow up or vanish.
pub(crate) fn check_probability_like(name: &'static str, p: &Rational) -> Result<()> {
    if p.is_zero() || p.is_one() {
        return Err(Error::InvalidParameter {
            name,
            value: format_rational(p),
            reason: "must differ from 0 and 1",
        });
    }
    Ok(())
}

/// Lattice points `(a, b)` with `a, b >= 0` and `a + b <= n`, in lexicographic
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleGrid {
    n: usize,
    points: Vec<(usize, usize)>,
}

impl TriangleGrid {
    pub fn new(n: usize) -> Self {
        let points = (0..=n)
            .flat_map(|a| (0..=n - a).map(move |b| (a, b)))
            .collect();
        TriangleGrid { n, points }
    }

    pub fn size_param(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[(usize, usize)] {
        &self.points
    }

    pub fn point(&self, index: usize) -> (usize, usize) {
        self.points[index]
    }

    pub fn contains(&self, a: i64, b: i64) -> bool {
        a >= 0 && b >= 0 && (a + b) as usize <= self.n
    }

    /// Position of `(a, b)` in `points()`, or `None` outside the triangle.
    pub fn index_of(&self, a: i64, b: i64) -> Option<usize> {
        if !self.contains(a, b) {
            return None;
        }
        let (a, b, n) = (a as usize, b as usize, self.n);
        // rows 0..a hold (n+1) + n + ... + (n-a+2) points
        Some(a * (n + 1) - a * a.saturating_sub(1) / 2 + b)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.points.iter().copied()
    }
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self[(r, c)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.rows.min(self.cols))
            .map(|k| self[(k, k)].clone())
            .collect()
    }

    /// First nonzero off-diagonal entry, scanning row by row.
    pub fn first_off_diagonal(&self) -> Option<(usize, usize, &Rational)> {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .find(|&(r, c)| r != c && !self[(r, c)].is_zero())
            .map(|(r, c)| (r, c, &self[(r, c)]))
    }

    pub fn first_nonzero(&self) -> Option<(usize, usize, &Rational)> {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .find(|&(r, c)| !self[(r, c)].is_zero())
            .map(|(r, c)| (r, c, &self[(r, c)]))
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|q| q.to_f64().unwrap_or(f64::NAN))
                    .collect()
            })
            .collect()
    }
}

/// Basis of the right null space of `m`, by exact Gauss-Jordan elimination.
/// Free columns are set to 1 one at a time.
pub fn nullspace(m: &Matrix) -> Vec<Vec<Rational>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&k| !a[(k, c)].is_zero()) else {
            continue;
        };
        for k in 0..cols {
            a.data.swap(pr * cols + k, r * cols + k);
        }
        let inv = a[(r, c)].recip();
        for k in c..cols {
            a[(r, k)] *= &inv;
        }
        for other in 0..rows {
            if other == r || a[(other, c)].is_zero() {
                continue;
            }
            let f = a[(other, c)].clone();
            for k in c..cols {
                let v = &f * &a[(r, k)];
                a[(other, k)] -= v;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[(row, free)].clone();
            }
            v
        })
        .collect()
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(format_rational).collect();
            writeln!(f, "{}", cells.join("\t"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2).unwrap(), int(10));
        assert_eq!(binomial(3, -1).unwrap(), int(0));
        assert_eq!(binomial(4, 7).unwrap(), int(0));
        assert_eq!(binomial(0, 0).unwrap(), int(1));
        assert_eq!(binomial(-1, 0), Err(Error::NegativeBinomial { n: -1 }));
    }

    #[test]
    fn hyp2f1_examples() {
        let z = rat(7, 3);
        for n in 0..5 {
            for x in 0..=n {
                assert_eq!(hyp2f1_terminating(0, x, n, &z).unwrap(), int(1));
                assert_eq!(hyp2f1_terminating(x, 0, n, &z).unwrap(), int(1));
            }
        }
        // 1 + (-1)(-1)/(-2) * 2 = 0
        assert_eq!(hyp2f1_terminating(1, 1, 2, &int(2)).unwrap(), int(0));
        assert!(hyp2f1_terminating(3, 3, 2, &z).is_err());
        // i > n is fine as long as x <= n
        assert!(hyp2f1_terminating(5, 2, 2, &z).is_ok());
    }

    #[test]
    fn pochhammer_negative_base() {
        // (-3)_4 = (-3)(-2)(-1)(0)
        assert_eq!(pochhammer(&int(-3), 4), int(0));
        assert_eq!(pochhammer(&int(-3), 3), int(-6));
        assert_eq!(pochhammer(&rat(1, 2), 2), rat(3, 4));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(rational_sqrt(&int(1)), Some(int(1)));
        assert_eq!(rational_sqrt(&rat(4, 9)), Some(rat(2, 3)));
        assert_eq!(rational_sqrt(&int(2)), None);
        assert_eq!(rational_sqrt(&rat(-4, 9)), None);
        assert_eq!(rational_sqrt(&int(0)), Some(int(0)));
    }

    #[test]
    fn rational_text_format() {
        assert_eq!(format_rational(&rat(-3, 7)), "-3/7");
        assert_eq!(format_rational(&int(42)), "42");
        assert_eq!(format_rational(&rat(6, -4)), "-3/2");
        assert_eq!(parse_rational(" -3/7 ").unwrap(), rat(-3, 7));
        assert_eq!(parse_rational("42").unwrap(), int(42));
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
        for bad in ["", "1/0", "x", "1.5", "1/2/3"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn triangle_grid_layout() {
        let g = TriangleGrid::new(2);
        assert_eq!(
            g.points(),
            &[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]
        );
        assert_eq!(g.index_of(1, 1), Some(4));
        assert_eq!(g.index_of(2, 1), None);
        assert_eq!(g.index_of(-1, 0), None);
        for n in 0..12 {
            let g = TriangleGrid::new(n);
            assert_eq!(g.len(), (n + 1) * (n + 2) / 2);
            for (k, &(a, b)) in g.points().iter().enumerate() {
                assert_eq!(g.index_of(a as i64, b as i64), Some(k));
            }
        }
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = Matrix::from_fn(2, 3, |r, c| int(((r + 1) * (c + 1)) as i64));
        let basis = nullspace(&m);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for r in 0..2 {
                let dot = (0..3).fold(Rational::zero(), |acc, c| acc + &m[(r, c)] * &v[c]);
                assert!(dot.is_zero());
            }
        }
        assert!(nullspace(&Matrix::from_fn(2, 2, |r, c| int((r == c) as i64))).is_empty());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-60i64..60, 1i64..40).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a - &a, Rational::zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * a.recip(), Rational::one());
            }
            prop_assert!(a.denom() > &BigInt::zero());
        }

        #[test]
        fn hyp2f1_upper_symmetry(n in 0usize..9, i in 0usize..9, x in 0usize..9, z in small_rational()) {
            let (i, x) = (i.min(n), x.min(n));
            prop_assert_eq!(
                hyp2f1_terminating(i, x, n, &z).unwrap(),
                hyp2f1_terminating(x, i, n, &z).unwrap()
            );
        }

        #[test]
        fn rational_text_roundtrip(q in small_rational()) {
            prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }

        #[test]
        fn sqrt_of_square(q in small_rational()) {
            prop_assert_eq!(rational_sqrt(&(&q * &q)), Some(q.abs()));
        }
    }
}
