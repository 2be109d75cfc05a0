//! Three-mode oscillator model of λ-Griffiths polynomials.
//!
//! Quadratic generators `sum B_ik a_i^† a_k` act on the degree-`N` Fock
//! block. The product
//!
//! ```text
//! U(R_xz(φ)) U(R_yz(θ)) U_ϕ U(R_xz(-ψ)),   U_ϕ = exp(iϕ a_1^† a_1)
//! ```
//!
//! has squared moduli of the form
//!
//! ```text
//! |U_{(i,j),(x,y)}|² = c W(x,y) |G^λ_{i,j}(x,y)|² / h_{i,j},   λ = σ e^{iϕ} √μ
//! ```
//!
//! with `W` the biorthogonality weight and `h` its diagonal. [`fit_and_verify`]
//! recovers `(p1, p2, p3, c, σ)` from a handful of entries and checks the
//! rest. The third rotation is taken with reversed orientation: with all
//! three rotations oriented alike the same fit goes through with `σ = -1`
//! instead (see [`ThirdRotation`]).

use nalgebra::{DMatrix, Matrix4, Vector4};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{Matrix, Rational, TriangleGrid};

pub type CMatrix = DMatrix<Complex64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FockState {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

impl FockState {
    fn modes(self) -> [usize; 3] {
        [self.n1, self.n2, self.n3]
    }

    fn from_modes(m: [usize; 3]) -> Self {
        FockState {
            n1: m[0],
            n2: m[1],
            n3: m[2],
        }
    }
}

/// States with `n1 + n2 + n3 = n`, ordered like the points `(n1, n2)` of
/// [`TriangleGrid`].
pub fn fock_basis(n: usize) -> Vec<FockState> {
    TriangleGrid::new(n)
        .iter()
        .map(|(a, b)| FockState {
            n1: a,
            n2: b,
            n3: n - a - b,
        })
        .collect()
}

fn fock_index(grid: &TriangleGrid, s: FockState) -> usize {
    grid.index_of(s.n1 as i64, s.n2 as i64)
        .expect("state in the degree block")
}

/// A 3x3 coefficient matrix `B` of `sum B_ik a_i^† a_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorMatrix(pub [[Complex64; 3]; 3]);

impl GeneratorMatrix {
    pub fn zero() -> Self {
        GeneratorMatrix([[Complex64::zero(); 3]; 3])
    }

    pub fn from_real(b: [[f64; 3]; 3]) -> Self {
        let mut g = Self::zero();
        for (row, src) in g.0.iter_mut().zip(b) {
            for (e, v) in row.iter_mut().zip(src) {
                *e = Complex64::new(v, 0.0);
            }
        }
        g
    }

    fn plane(a: usize, b: usize, angle: f64) -> Self {
        let mut g = Self::zero();
        g.0[a][b] = Complex64::new(angle, 0.0);
        g.0[b][a] = Complex64::new(-angle, 0.0);
        g
    }

    /// `B_13 = α = -B_31`.
    pub fn rotation_xz(alpha: f64) -> Self {
        Self::plane(0, 2, alpha)
    }

    /// `B_23 = α = -B_32`.
    pub fn rotation_yz(alpha: f64) -> Self {
        Self::plane(1, 2, alpha)
    }

    /// `i ϕ a_1^† a_1`; `ϕ` may be complex.
    pub fn twist(varphi: Complex64) -> Self {
        let mut g = Self::zero();
        g.0[0][0] = Complex64::i() * varphi;
        g
    }
}

/// Matrix of `sum B_ik a_i^† a_k` on the degree-`n` block, columns as inputs.
pub fn rep_generator(b: &GeneratorMatrix, n: usize) -> CMatrix {
    let basis = fock_basis(n);
    let grid = TriangleGrid::new(n);
    let mut m = CMatrix::zeros(basis.len(), basis.len());
    for (col, s) in basis.iter().enumerate() {
        for i in 0..3 {
            for k in 0..3 {
                let coeff = b.0[i][k];
                let mut modes = s.modes();
                if coeff.is_zero() || modes[k] == 0 {
                    continue;
                }
                let mut f = (modes[k] as f64).sqrt();
                modes[k] -= 1;
                f *= (modes[i] as f64 + 1.0).sqrt();
                modes[i] += 1;
                let row = fock_index(&grid, FockState::from_modes(modes));
                m[(row, col)] += coeff * f;
            }
        }
    }
    m
}

/// The same operator in the unnormalized monomial basis `x^n`, where
/// `a_i^† a_k` sends `x^n` to `n_k x^(n - e_k + e_i)`. Entries stay rational;
/// conjugating by `diag(sqrt(n1! n2! n3!))` gives [`rep_generator`].
pub fn rep_generator_exact(b: &[[Rational; 3]; 3], n: usize) -> Matrix {
    let basis = fock_basis(n);
    let grid = TriangleGrid::new(n);
    let mut m = Matrix::zeros(basis.len(), basis.len());
    for (col, s) in basis.iter().enumerate() {
        for i in 0..3 {
            for k in 0..3 {
                let mut modes = s.modes();
                if b[i][k].is_zero() || modes[k] == 0 {
                    continue;
                }
                let f = Rational::from_integer(modes[k].into());
                modes[k] -= 1;
                modes[i] += 1;
                let row = fock_index(&grid, FockState::from_modes(modes));
                m[(row, col)] += &b[i][k] * f;
            }
        }
    }
    m
}

/// Matrix exponential (scaling and squaring with a Padé approximant).
pub fn rep_exp(m: &CMatrix) -> Result<CMatrix> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("matrix exponential argument".into()));
    }
    Ok(m.exp())
}

/// `max |U U^† - I|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let d = u * u.adjoint() - CMatrix::identity(u.nrows(), u.ncols());
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Orientation of the last factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThirdRotation {
    /// `U(R_xz(-ψ))`: the fit lands on `λ = +e^{iϕ}√μ`
    Reversed,
    /// `U(R_xz(ψ))`: the fit lands on `λ = -e^{iϕ}√μ`
    AsWritten,
}

/// The four-factor product on the degree-`n` block.
pub fn oscillator_product(
    phi: f64,
    theta: f64,
    psi: f64,
    varphi: Complex64,
    n: usize,
    third: ThirdRotation,
) -> Result<CMatrix> {
    let psi = match third {
        ThirdRotation::Reversed => -psi,
        ThirdRotation::AsWritten => psi,
    };
    let factors = [
        GeneratorMatrix::rotation_xz(phi),
        GeneratorMatrix::rotation_yz(theta),
        GeneratorMatrix::twist(varphi),
        GeneratorMatrix::rotation_xz(psi),
    ];
    let mut u = CMatrix::identity(fock_basis(n).len(), fock_basis(n).len());
    for g in &factors {
        u *= rep_exp(&rep_generator(g, n))?;
    }
    Ok(u)
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, t| acc * (n - t) as f64 / (t + 1) as f64)
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, t| acc * t as f64)
}

/// Floating-point Krawtchouk function, zero outside `0..=size`.
pub fn k_f64(i: usize, x: i64, p: f64, size: usize) -> f64 {
    if x < 0 || x as usize > size {
        return 0.0;
    }
    let x = x as usize;
    let top = i.min(x);
    let (mut sum, mut term) = (0.0, 1.0);
    for kk in 0..=top {
        sum += term;
        if kk < top {
            term *= (kk as f64 - i as f64) * (kk as f64 - x as f64)
                / ((kk as f64 - size as f64) * (kk + 1) as f64)
                / p;
        }
    }
    (p / (1.0 - p)).powi(x as i32) * binomial_f64(size, x) * sum
}

/// `G^λ_{i,j}(x, y)` in floating point with complex `λ`.
#[allow(clippy::too_many_arguments)]
pub fn g_complex(
    i: usize,
    j: usize,
    x: i64,
    y: i64,
    p: [f64; 3],
    lambda: Complex64,
    n: usize,
) -> Complex64 {
    if y < 0 || y as usize > n || x < 0 {
        return Complex64::zero();
    }
    let yu = y as usize;
    let mut sum = Complex64::zero();
    let mut lam_a = Complex64::one();
    for a in 0..=(n - j).min(n - yu) {
        let v =
            k_f64(i, a as i64, p[0], n - j) * k_f64(j, y, p[1], n - a) * k_f64(a, x, p[2], n - yu);
        sum += lam_a * v;
        lam_a *= lambda;
    }
    sum
}

fn omega_f64(x: usize, y: usize, a: f64, b: f64, n: usize) -> f64 {
    factorial_f64(x)
        * factorial_f64(y)
        * factorial_f64(n - x - y)
        * ((1.0 - a) / a).powi(y as i32)
        * ((1.0 - b) / b).powi(x as i32)
        * (1.0 - b).powi(y as i32)
}

/// `μ(p1, p2, p3)` in floating point.
pub fn mu_f64(p: [f64; 3]) -> f64 {
    (1.0 - p[0]) * p[2] / (p[0] * (1.0 - p[1]) * (1.0 - p[2]))
}

/// `λ = σ e^{iϕ} √μ`.
pub fn model_lambda(p: [f64; 3], varphi: Complex64, branch: f64) -> Complex64 {
    (Complex64::i() * varphi).exp() * mu_f64(p).sqrt() * branch
}

/// Model value of `|U_{(i,j),(x,y)}|²`.
pub fn model_entry(
    p: [f64; 3],
    norm: f64,
    lambda: Complex64,
    n: usize,
    degree: (usize, usize),
    point: (usize, usize),
) -> f64 {
    let (i, j) = degree;
    let (x, y) = point;
    let weight = omega_f64(x, y, p[1], p[2], n) / (1.0 - p[2]).powi(2 * y as i32);
    let h = omega_f64(i, j, p[1], p[0], n)
        / ((1.0 - p[0]) * (1.0 - p[1]) * (1.0 - p[2])).powi(n as i32);
    let g = g_complex(i, j, x as i64, y as i64, p, lambda, n);
    norm * weight * g.norm_sqr() / h
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Angles {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OscillatorReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub angles: Angles,
    pub varphi: ComplexValue,
    pub third_rotation: ThirdRotation,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub normalization: f64,
    pub mu: f64,
    pub lambda: ComplexValue,
    /// `σ` in `λ = σ e^{iϕ} √μ`
    pub lambda_branch: i8,
    pub plus_sqrt_mu: bool,
    pub fitted_entries: usize,
    pub verified_entries: usize,
    pub max_mismatch: f64,
    pub unitarity_defect: f64,
}

type Entry = ((usize, usize), (usize, usize));

/// Entries used to solve for `(p1, p2, p3, c)`.
const FIT_ENTRIES: [Entry; 4] = [
    ((0, 0), (0, 0)),
    ((0, 0), (1, 0)),
    ((0, 0), (0, 1)),
    ((1, 0), (0, 0)),
];

/// Entries used to choose among the roots of the fit system.
const SELECT_ENTRIES: [Entry; 4] = [
    ((0, 1), (0, 0)),
    ((1, 0), (1, 0)),
    ((0, 1), (0, 1)),
    ((1, 0), (0, 1)),
];

const STARTS: [f64; 3] = [0.15, 0.5, 0.85];

fn logistic(t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp())
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

struct Problem<'a> {
    target: &'a CMatrix,
    grid: TriangleGrid,
    varphi: Complex64,
    n: usize,
}

impl Problem<'_> {
    fn observed(&self, e: &Entry) -> f64 {
        let r = self.grid.index_of(e.0 .0 as i64, e.0 .1 as i64).unwrap();
        let c = self.grid.index_of(e.1 .0 as i64, e.1 .1 as i64).unwrap();
        self.target[(r, c)].norm_sqr()
    }

    fn unpack(z: &Vector4<f64>) -> ([f64; 3], f64) {
        ([logistic(z[0]), logistic(z[1]), logistic(z[2])], z[3].exp())
    }

    fn residuals(&self, z: &Vector4<f64>, branch: f64, entries: &[Entry; 4]) -> Vector4<f64> {
        let (p, c) = Self::unpack(z);
        let lambda = model_lambda(p, self.varphi, branch);
        Vector4::from_fn(|k, _| {
            let e = &entries[k];
            model_entry(p, c, lambda, self.n, e.0, e.1) - self.observed(e)
        })
    }

    /// Damped Gauss-Newton with a forward-difference Jacobian.
    fn levenberg_marquardt(&self, mut z: Vector4<f64>, branch: f64) -> Option<Vector4<f64>> {
        let mut f = self.residuals(&z, branch, &FIT_ENTRIES);
        let mut cost = f.norm_squared();
        let mut damping = 1e-3;
        for _ in 0..200 {
            if !cost.is_finite() {
                return None;
            }
            if cost < 1e-28 {
                break;
            }
            let mut jac = Matrix4::zeros();
            for k in 0..4 {
                let h = 1e-7 * z[k].abs().max(1.0);
                let mut zh = z;
                zh[k] += h;
                jac.set_column(k, &((self.residuals(&zh, branch, &FIT_ENTRIES) - f) / h));
            }
            let jtj = jac.transpose() * jac;
            let grad = jac.transpose() * f;
            let scaled =
                jtj + Matrix4::from_diagonal(&(jtj.diagonal().add_scalar(1e-12) * damping));
            let step = scaled.lu().solve(&(-grad))?;
            let trial = z + step;
            let ft = self.residuals(&trial, branch, &FIT_ENTRIES);
            let ct = ft.norm_squared();
            if ct < cost {
                z = trial;
                f = ft;
                cost = ct;
                damping *= 0.3;
            } else {
                damping *= 10.0;
                if damping > 1e12 {
                    break;
                }
            }
        }
        (f.amax() < 1e-10).then_some(z)
    }
}

fn check_angle(name: &str, a: f64) -> Result<()> {
    if !a.is_finite() {
        return Err(Error::NonFinite(format!("angle {name}")));
    }
    let quarter = std::f64::consts::FRAC_PI_2;
    let r = (a / quarter).round();
    if (a - r * quarter).abs() < 1e-9 {
        return Err(Error::FitFailure(format!(
            "angle {name} = {a} is a multiple of pi/2, the rotation collapses"
        )));
    }
    Ok(())
}

/// Builds the product, fits the model to four entries, and compares every
/// squared entry against the fitted model.
pub fn fit_and_verify(
    phi: f64,
    theta: f64,
    psi: f64,
    varphi: Complex64,
    n: usize,
) -> Result<OscillatorReport> {
    fit_and_verify_with(phi, theta, psi, varphi, n, ThirdRotation::Reversed)
}

pub fn fit_and_verify_with(
    phi: f64,
    theta: f64,
    psi: f64,
    varphi: Complex64,
    n: usize,
    third: ThirdRotation,
) -> Result<OscillatorReport> {
    if n == 0 {
        return Err(Error::out_of_domain(
            "oscillator degree",
            "N must be at least 1",
        ));
    }
    check_angle("phi", phi)?;
    check_angle("theta", theta)?;
    check_angle("psi", psi)?;
    if !varphi.re.is_finite() || !varphi.im.is_finite() {
        return Err(Error::NonFinite("varphi".into()));
    }
    let u = oscillator_product(phi, theta, psi, varphi, n, third)?;
    let problem = Problem {
        target: &u,
        grid: TriangleGrid::new(n),
        varphi,
        n,
    };

    // every converged start, scored on the selection entries
    let mut best: Option<(f64, f64, Vector4<f64>)> = None;
    for branch in [1.0, -1.0] {
        for &a in &STARTS {
            for &b in &STARTS {
                for &c in &STARTS {
                    let z0 = Vector4::new(logit(a), logit(b), logit(c), 0.0);
                    let Some(z) = problem.levenberg_marquardt(z0, branch) else {
                        continue;
                    };
                    let score = problem
                        .residuals(&z, branch, &SELECT_ENTRIES)
                        .norm_squared();
                    if score.is_finite() && best.as_ref().is_none_or(|b| score < b.0) {
                        best = Some((score, branch, z));
                    }
                }
            }
        }
    }
    let (_, branch, z) = best
        .ok_or_else(|| Error::FitFailure("no start solved the low-index matching system".into()))?;
    let (p, norm) = Problem::unpack(&z);
    if p.iter().any(|&q| !(1e-12..=1.0 - 1e-12).contains(&q)) {
        return Err(Error::FitFailure(format!(
            "fitted parameters {p:?} hit the boundary"
        )));
    }

    let lambda = model_lambda(p, varphi, branch);
    let grid = TriangleGrid::new(n);
    let mut max_mismatch: f64 = 0.0;
    for (r, degree) in grid.iter().enumerate() {
        for (c, point) in grid.iter().enumerate() {
            let model = model_entry(p, norm, lambda, n, degree, point);
            max_mismatch = max_mismatch.max((model - u[(r, c)].norm_sqr()).abs());
        }
    }
    let d = grid.len();
    Ok(OscillatorReport {
        n,
        angles: Angles { phi, theta, psi },
        varphi: varphi.into(),
        third_rotation: third,
        p1: p[0],
        p2: p[1],
        p3: p[2],
        normalization: norm,
        mu: mu_f64(p),
        lambda: lambda.into(),
        lambda_branch: if branch > 0.0 { 1 } else { -1 },
        plus_sqrt_mu: branch > 0.0,
        fitted_entries: FIT_ENTRIES.len(),
        verified_entries: d * d - FIT_ENTRIES.len() - SELECT_ENTRIES.len(),
        max_mismatch,
        unitarity_defect: unitarity_defect(&u),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::griffiths::{g_eval, EvalMethod, ParamSet};
    use num_traits::ToPrimitive;

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        (a - b).iter().all(|z| z.norm() <= tol)
    }

    #[test]
    fn basis_layout() {
        let b1 = fock_basis(1);
        let modes: Vec<_> = b1.iter().map(|s| s.modes()).collect();
        assert_eq!(modes, vec![[0, 0, 1], [0, 1, 0], [1, 0, 0]]);
        assert_eq!(fock_basis(2).len(), 6);
        let grid = TriangleGrid::new(4);
        for (k, s) in fock_basis(4).into_iter().enumerate() {
            assert_eq!(s.n1 + s.n2 + s.n3, 4);
            assert_eq!(fock_index(&grid, s), k);
        }
    }

    #[test]
    fn fundamental_rep_is_b() {
        let b = GeneratorMatrix::from_real([[0.1, 0.2, 0.3], [-0.4, 0.5, 0.6], [0.7, -0.8, 0.9]]);
        let m = rep_generator(&b, 1);
        // basis order is e3, e2, e1
        let perm = [2, 1, 0];
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(m[(r, c)], b.0[perm[r]][perm[c]]);
            }
        }
    }

    #[test]
    fn twist_rep_and_identity_rep() {
        let m = rep_generator(&GeneratorMatrix::twist(Complex64::new(0.3, 0.0)), 3);
        for (k, s) in fock_basis(3).into_iter().enumerate() {
            assert!((m[(k, k)] - Complex64::new(0.0, 0.3 * s.n1 as f64)).norm() < 1e-15);
        }
        let eye = GeneratorMatrix::from_real([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let m = rep_generator(&eye, 3);
        assert!(close(
            &m,
            &(CMatrix::identity(10, 10) * Complex64::new(3.0, 0.0)),
            1e-12
        ));
    }

    #[test]
    fn exp_basics() {
        let z = CMatrix::zeros(6, 6);
        assert!(close(
            &rep_exp(&z).unwrap(),
            &CMatrix::identity(6, 6),
            1e-15
        ));
        let u = rep_exp(&rep_generator(
            &GeneratorMatrix::twist(Complex64::new(0.3, 0.0)),
            3,
        ))
        .unwrap();
        for (k, s) in fock_basis(3).into_iter().enumerate() {
            let want = Complex64::new(0.0, 0.3 * s.n1 as f64).exp();
            assert!((u[(k, k)] - want).norm() < 1e-14);
        }
        let b = GeneratorMatrix::from_real([[0.0, 0.7, -0.2], [-0.7, 0.0, 1.1], [0.2, -1.1, 0.0]]);
        let mut minus = b;
        minus.0.iter_mut().flatten().for_each(|z| *z = -*z);
        let prod =
            rep_exp(&rep_generator(&b, 4)).unwrap() * rep_exp(&rep_generator(&minus, 4)).unwrap();
        assert!(close(&prod, &CMatrix::identity(15, 15), 1e-10));
        assert!(unitarity_defect(&rep_exp(&rep_generator(&b, 4)).unwrap()) < 1e-10);
        let mut bad = CMatrix::zeros(2, 2);
        bad[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(rep_exp(&bad), Err(Error::NonFinite(_))));
    }

    #[test]
    fn exact_rep_is_a_lie_homomorphism() {
        let a = [
            [int(1), int(2), int(0)],
            [int(0), int(-1), int(3)],
            [int(-2), int(0), int(1)],
        ];
        let b = [
            [int(0), int(1), int(-1)],
            [int(2), int(0), int(0)],
            [int(1), int(1), int(-3)],
        ];
        let mut ab = [
            [int(0), int(0), int(0)],
            [int(0), int(0), int(0)],
            [int(0), int(0), int(0)],
        ];
        for i in 0..3 {
            for k in 0..3 {
                for t in 0..3 {
                    ab[i][k] += &a[i][t] * &b[t][k] - &b[i][t] * &a[t][k];
                }
            }
        }
        for n in 0..=4 {
            let (ra, rb) = (rep_generator_exact(&a, n), rep_generator_exact(&b, n));
            let comm = exact_sub(&exact_mul(&ra, &rb), &exact_mul(&rb, &ra));
            assert_eq!(comm, rep_generator_exact(&ab, n));
        }
    }

    fn exact_mul(a: &Matrix, b: &Matrix) -> Matrix {
        Matrix::from_fn(a.rows(), b.cols(), |r, c| {
            (0..a.cols()).fold(Rational::zero(), |acc, k| acc + &a[(r, k)] * &b[(k, c)])
        })
    }

    fn exact_sub(a: &Matrix, b: &Matrix) -> Matrix {
        Matrix::from_fn(a.rows(), a.cols(), |r, c| &a[(r, c)] - &b[(r, c)])
    }

    #[test]
    fn exact_and_float_reps_are_similar() {
        let q = [
            [rat(1, 2), int(2), int(0)],
            [int(0), int(-1), rat(3, 4)],
            [int(-2), int(0), int(1)],
        ];
        let mut b = GeneratorMatrix::zero();
        for (brow, qrow) in b.0.iter_mut().zip(&q) {
            for (e, v) in brow.iter_mut().zip(qrow) {
                *e = Complex64::new(v.to_f64().unwrap(), 0.0);
            }
        }
        let n = 3;
        let exact = rep_generator_exact(&q, n).to_f64();
        let float = rep_generator(&b, n);
        let scale: Vec<f64> = fock_basis(n)
            .iter()
            .map(|s| (factorial_f64(s.n1) * factorial_f64(s.n2) * factorial_f64(s.n3)).sqrt())
            .collect();
        for r in 0..exact.len() {
            for c in 0..exact.len() {
                let want = exact[r][c] * scale[r] / scale[c];
                assert!((float[(r, c)].re - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn float_griffiths_matches_exact() {
        let params = ParamSet::new(rat(1, 3), rat(2, 5), rat(3, 7), rat(-5, 4), 4).unwrap();
        let p = [1.0 / 3.0, 0.4, 3.0 / 7.0];
        let lambda = Complex64::new(-1.25, 0.0);
        for (i, j) in TriangleGrid::new(4).iter() {
            for (x, y) in TriangleGrid::new(4).iter() {
                let exact =
                    g_eval(i, j, x as i64, y as i64, &params, EvalMethod::DirectSum).unwrap();
                let want = exact.to_f64().unwrap();
                let got = g_complex(i, j, x as i64, y as i64, p, lambda, 4);
                assert!((got.re - want).abs() <= 1e-10 * want.abs().max(1.0));
                assert_eq!(got.im, 0.0);
            }
        }
    }

    #[test]
    fn n1_fit_is_exact() {
        let r = fit_and_verify(0.4, 0.9, 1.2, Complex64::new(0.3, 0.0), 1).unwrap();
        assert!(r.max_mismatch < 1e-12, "{r:?}");
        assert!(r.unitarity_defect < 1e-12);
    }

    #[test]
    fn real_twist_fits_plus_branch() {
        for varphi in [0.0, 0.3] {
            let r = fit_and_verify(0.4, 0.9, 1.2, Complex64::new(varphi, 0.0), 3).unwrap();
            assert!(r.max_mismatch < 1e-8, "{r:?}");
            assert!(r.plus_sqrt_mu);
            assert!(r.unitarity_defect < 1e-10);
            assert!((r.normalization - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn imaginary_twist_is_not_unitary() {
        let r = fit_and_verify(0.4, 0.9, 1.2, Complex64::new(0.0, 0.7), 3).unwrap();
        assert!(r.max_mismatch < 1e-8, "{r:?}");
        assert!(r.unitarity_defect > 1e-3);
        assert!(r.lambda.im.abs() < 1e-12);
    }

    #[test]
    fn uniform_orientation_lands_on_minus_branch() {
        let r = fit_and_verify_with(
            0.4,
            0.9,
            1.2,
            Complex64::new(0.3, 0.0),
            3,
            ThirdRotation::AsWritten,
        )
        .unwrap();
        assert!(r.max_mismatch < 1e-8, "{r:?}");
        assert_eq!(r.lambda_branch, -1);
    }

    #[test]
    fn degenerate_angles_are_rejected() {
        assert!(matches!(
            fit_and_verify(0.0, 0.9, 1.2, Complex64::new(0.3, 0.0), 2),
            Err(Error::FitFailure(_))
        ));
        assert!(matches!(
            fit_and_verify(
                0.4,
                std::f64::consts::FRAC_PI_2,
                1.2,
                Complex64::new(0.3, 0.0),
                2
            ),
            Err(Error::FitFailure(_))
        ));
        assert!(fit_and_verify(0.4, 0.9, f64::NAN, Complex64::new(0.3, 0.0), 2).is_err());
    }
}
