//! Dense complex linear algebra used by every measure in the crate.
//!
//! Matrices are plain `ndarray::Array2<Complex64>`; the [`Hermitian`] and
//! [`Unitary`] newtypes carry the structural guarantees the spectral
//! formulas depend on.

mod eigen;

use ndarray::Array2;
use num_complex::Complex64;

use crate::{Error, Result};

pub use eigen::{eig_hermitian, EigenDecomposition};

pub type C64 = Complex64;
pub type CMatrix = Array2<C64>;

/// Relative scale below which an eigenvalue is treated as roundoff.
pub const PSD_RTOL: f64 = 1e-10;

/// Positive-semidefiniteness tolerance for a spectrum whose largest
/// eigenvalue is `largest`.
pub fn psd_tol(largest: f64) -> f64 {
    PSD_RTOL * largest.max(1.0)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    Array2::from_diag_elem(n, c(1.0, 0.0))
}

pub fn adjoint(a: &CMatrix) -> CMatrix {
    a.t().mapv(|z| z.conj())
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.dim(), b.dim(), "max_abs_diff on differently shaped matrices");
    a.iter()
        .zip(b.iter())
        .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

/// `max |A - A^H|`.
pub fn hermiticity_residual(a: &CMatrix) -> f64 {
    let (r, cols) = a.dim();
    if r != cols {
        return f64::INFINITY;
    }
    let mut worst = 0.0f64;
    for i in 0..r {
        for k in i..r {
            worst = worst.max((a[[i, k]] - a[[k, i]].conj()).norm());
        }
    }
    worst
}

/// `max |U^H U - I|`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let (r, cols) = u.dim();
    if r != cols {
        return f64::INFINITY;
    }
    max_abs_diff(&adjoint(u).dot(u), &identity(r))
}

fn check_square(a: &CMatrix, what: &str) -> Result<usize> {
    let (r, cols) = a.dim();
    if r != cols || r == 0 {
        return Err(Error::DimensionMismatch(format!(
            "{what} must be a non-empty square matrix, got {r}x{cols}"
        )));
    }
    Ok(r)
}

fn check_same(a: &CMatrix, b: &CMatrix, what: &str) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{what}: {:?} vs {:?}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

pub fn trace(a: &CMatrix) -> C64 {
    a.diag().sum()
}

/// `Tr(AB)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Result<C64> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    if ac != br || ar != bc {
        return Err(Error::DimensionMismatch(format!(
            "trace_product: {ar}x{ac} times {br}x{bc}"
        )));
    }
    let mut acc = c(0.0, 0.0);
    for i in 0..ar {
        for j in 0..ac {
            acc += a[[i, j]] * b[[j, i]];
        }
    }
    Ok(acc)
}

/// `Tr(A X B Y)`, evaluated as `Tr((AX)(BY))` so only two products are formed.
pub fn trace_quad(a: &CMatrix, x: &CMatrix, b: &CMatrix, y: &CMatrix) -> Result<C64> {
    check_same(a, x, "trace_quad")?;
    check_same(a, b, "trace_quad")?;
    check_same(a, y, "trace_quad")?;
    trace_product(&a.dot(x), &b.dot(y))
}

/// Kronecker product. The composite index is `i = i1 * dim(B) + i2`.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = CMatrix::zeros((ar * br, ac * bc));
    for i1 in 0..ar {
        for k1 in 0..ac {
            let s = a[[i1, k1]];
            if s == c(0.0, 0.0) {
                continue;
            }
            for i2 in 0..br {
                for k2 in 0..bc {
                    out[[i1 * br + i2, k1 * bc + k2]] = s * b[[i2, k2]];
                }
            }
        }
    }
    out
}

/// Which factor of a bipartite system a partial trace removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial trace over `traced` of a matrix on `C^{m1} ⊗ C^{m2}`.
pub fn partial_trace(a: &CMatrix, dims: (usize, usize), traced: Subsystem) -> Result<CMatrix> {
    let n = check_square(a, "partial_trace input")?;
    let (m1, m2) = dims;
    if m1 == 0 || m2 == 0 || m1 * m2 != n {
        return Err(Error::DimensionMismatch(format!(
            "partial_trace: dims ({m1}, {m2}) do not factor dimension {n}"
        )));
    }
    let out = match traced {
        Subsystem::Second => CMatrix::from_shape_fn((m1, m1), |(i, k)| {
            (0..m2).map(|j| a[[i * m2 + j, k * m2 + j]]).sum()
        }),
        Subsystem::First => CMatrix::from_shape_fn((m2, m2), |(i, k)| {
            (0..m1).map(|j| a[[j * m2 + i, j * m2 + k]]).sum()
        }),
    };
    Ok(out)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    check_same(a, b, "commutator")?;
    Ok(a.dot(b) - b.dot(a))
}

/// Dense Hermitian matrix. Only the upper triangle of the input is read; the
/// lower triangle is rebuilt by conjugate symmetry and the diagonal is made
/// real, so `A == A^H` holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Hermitian {
    m: CMatrix,
}

impl Hermitian {
    pub fn from_upper(mut m: CMatrix) -> Result<Self> {
        let n = check_square(&m, "Hermitian matrix")?;
        for i in 0..n {
            m[[i, i]].im = 0.0;
            for k in (i + 1)..n {
                m[[k, i]] = m[[i, k]].conj();
            }
        }
        Ok(Self { m })
    }

    /// Accepts `m` if `max |m - m^H| <= 1e-10 * max(1, max|m|)`.
    pub fn new(m: CMatrix) -> Result<Self> {
        check_square(&m, "Hermitian matrix")?;
        let residual = hermiticity_residual(&m);
        if residual > PSD_RTOL * max_abs(&m).max(1.0) {
            return Err(Error::NotHermitian { residual });
        }
        Self::from_upper(m)
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let m = Array2::from_diag(&ndarray::Array1::from_iter(d.iter().map(|&x| c(x, 0.0))));
        Self { m }
    }

    pub fn identity(n: usize) -> Self {
        Self { m: identity(n) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn eig(&self) -> Result<EigenDecomposition> {
        eig_hermitian(self)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { m: self.m.mapv(|z| z * s) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(&self.m, &other.m, "Hermitian add")?;
        Ok(Self { m: &self.m + &other.m })
    }

    /// Real-weighted sum `Σ w_j A_j`; real combinations stay Hermitian.
    pub fn combination(weights: &[f64], terms: &[&Hermitian]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty combination".into()))?;
        let mut m = CMatrix::zeros(first.m.dim());
        for (&w, t) in weights.iter().zip(terms) {
            check_same(&m, &t.m, "Hermitian combination")?;
            m.scaled_add(c(w, 0.0), &t.m);
        }
        Self::from_upper(m)
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self { m: tensor(&self.m, &other.m) }
    }

    /// `U A U^H`.
    pub fn conjugate_by(&self, u: &Unitary) -> Result<Self> {
        check_same(&self.m, &u.m, "unitary conjugation")?;
        Self::from_upper(u.m.dot(&self.m).dot(&adjoint(&u.m)))
    }

    /// `‖A‖_max · ‖B‖_max`-scaled zero test on the commutator.
    pub fn commutes_with(&self, b: &CMatrix, tol: Option<f64>) -> Result<bool> {
        let comm = commutator(&self.m, b)?;
        let tol = tol.unwrap_or_else(|| PSD_RTOL * (max_abs(&self.m) * max_abs(b)).max(1.0));
        Ok(max_abs(&comm) <= tol)
    }
}

/// `V · diag(clamp(λ)^α) · V^H` for a positive-semidefinite `A`.
///
/// Eigenvalues in `[-psd_tol, 0)` are clamped to zero, `0^α = 0` for every
/// `α`, including `α = 0`.
pub fn matrix_power(a: &Hermitian, alpha: f64) -> Result<Hermitian> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let eig = a.eig()?;
    let values = eig.clamped_nonnegative()?;
    Ok(eig.apply(&values, |x| power_or_zero(x, alpha)))
}

/// `x^α` with `0^α = 0`.
pub fn power_or_zero(x: f64, alpha: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.powf(alpha)
    }
}

/// Square matrix with `U^H U = I` to within `1e-10`.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    m: CMatrix,
}

impl Unitary {
    pub fn new(m: CMatrix) -> Result<Self> {
        check_square(&m, "unitary")?;
        let residual = unitarity_residual(&m);
        if residual > 1e-10 {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { m })
    }

    pub fn identity(n: usize) -> Self {
        Self { m: identity(n) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn adjoint(&self) -> Self {
        Self { m: adjoint(&self.m) }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self { m: tensor(&self.m, &other.m) }
    }
}

/// Modified Gram-Schmidt (applied twice) on the columns of `g`. The
/// triangular factor then has a positive real diagonal, which is the phase
/// fixing that makes the QR of a Ginibre matrix Haar distributed.
pub(crate) fn orthonormalize_columns(g: &CMatrix) -> CMatrix {
    let mut q = g.clone();
    let n = q.ncols();
    for _pass in 0..2 {
        for j in 0..n {
            for k in 0..j {
                let proj: C64 = q
                    .column(k)
                    .iter()
                    .zip(q.column(j).iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let qk = q.column(k).to_owned();
                q.column_mut(j).scaled_add(-proj, &qk);
            }
            let norm = q.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            q.column_mut(j).mapv_inplace(|z| z / norm);
        }
    }
    q
}

/// Lift a real matrix to a complex one.
pub fn from_real(a: &Array2<f64>) -> CMatrix {
    a.mapv(|x| c(x, 0.0))
}

/// Matrix from row-major real entries.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols);
    Array2::from_shape_fn((rows, cols), |(i, k)| c(entries[i * cols + k], 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn pauli_x() -> CMatrix {
        real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    #[test]
    fn trace_of_identity() {
        assert_eq!(trace(&identity(5)), c(5.0, 0.0));
    }

    #[test]
    fn purity_of_maximally_mixed_four() {
        let rho = identity(4).mapv(|z| z / 4.0);
        let p = trace_product(&rho, &rho).unwrap();
        assert!(close(p.re, 0.25, 1e-15) && p.im == 0.0);
    }

    #[test]
    fn trace_quad_pure_zero_pauli_x() {
        // ρ = |0><0| is its own square root; <0|x|0> = 0 kills the contraction.
        let rho = real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let x = pauli_x();
        let v = trace_quad(&rho, &x, &rho, &x).unwrap();
        let explicit = trace(&rho.dot(&x).dot(&rho).dot(&x));
        assert_eq!(v, c(0.0, 0.0));
        assert_eq!(explicit, c(0.0, 0.0));
    }

    #[test]
    fn trace_quad_rejects_mismatch() {
        let a = identity(2);
        let b = identity(3);
        assert!(matches!(
            trace_quad(&a, &a, &b, &a),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(tensor(&identity(2), &identity(2)), identity(4));

        let d1 = Hermitian::from_real_diagonal(&[2.0, 3.0]);
        let d2 = Hermitian::from_real_diagonal(&[5.0, 7.0]);
        let expected = Hermitian::from_real_diagonal(&[10.0, 14.0, 15.0, 21.0]);
        assert_eq!(d1.tensor(&d2), expected);

        let zero = real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let half = identity(2).mapv(|z| z / 2.0);
        let expected = Hermitian::from_real_diagonal(&[0.5, 0.5, 0.0, 0.0]);
        assert_eq!(tensor(&zero, &half), *expected.matrix());
    }

    #[test]
    fn partial_trace_of_singlet_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [0.0, s, -s, 0.0];
        let proj = Array2::from_shape_fn((4, 4), |(i, k)| c(psi[i] * psi[k], 0.0));
        let half = identity(2).mapv(|z| z / 2.0);
        for traced in [Subsystem::First, Subsystem::Second] {
            let r = partial_trace(&proj, (2, 2), traced).unwrap();
            assert!(max_abs_diff(&r, &half) < 1e-15);
        }
        let mixed = identity(4).mapv(|z| z / 4.0);
        let r = partial_trace(&mixed, (2, 2), Subsystem::First).unwrap();
        assert!(max_abs_diff(&r, &half) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        assert!(partial_trace(&identity(6), (2, 2), Subsystem::First).is_err());
        assert!(partial_trace(&identity(6), (4, 2), Subsystem::Second).is_err());
    }

    #[test]
    fn pauli_commutator() {
        let x = pauli_x();
        let y = CMatrix::from_shape_vec((2, 2), vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
            .unwrap();
        let z = real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let comm = commutator(&x, &y).unwrap();
        assert!(max_abs_diff(&comm, &z.mapv(|v| v * c(0.0, 2.0))) < 1e-15);
    }

    #[test]
    fn hermitian_from_upper_is_exact() {
        let m = CMatrix::from_shape_vec(
            (2, 2),
            vec![c(1.0, 0.3), c(2.0, -1.0), c(99.0, 99.0), c(4.0, 0.0)],
        )
        .unwrap();
        let h = Hermitian::from_upper(m).unwrap();
        assert_eq!(hermiticity_residual(h.matrix()), 0.0);
        assert_eq!(h.matrix()[[1, 0]], c(2.0, 1.0));
        assert_eq!(h.matrix()[[0, 0]], c(1.0, 0.0));
    }

    #[test]
    fn hermitian_new_rejects_asymmetric() {
        let m = real_matrix(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert!(matches!(Hermitian::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn matrix_power_of_scalar_matrix() {
        let n = 3;
        let a = Hermitian::identity(n).scale(1.0 / n as f64);
        for alpha in [0.1, 0.5, 0.9] {
            let p = matrix_power(&a, alpha).unwrap();
            let expected = identity(n).mapv(|z| z * (n as f64).powf(-alpha));
            assert!(max_abs_diff(p.matrix(), &expected) < 1e-14);
        }
    }

    #[test]
    fn matrix_power_keeps_projector() {
        let proj = Hermitian::new(real_matrix(2, 2, &[0.5, 0.5, 0.5, 0.5])).unwrap();
        for alpha in [0.2, 0.5, 0.7] {
            let p = matrix_power(&proj, alpha).unwrap();
            assert!(max_abs_diff(p.matrix(), proj.matrix()) < 1e-14);
        }
    }

    #[test]
    fn matrix_power_rejects_negative() {
        let a = Hermitian::from_real_diagonal(&[0.6, 0.6, -0.2]);
        match matrix_power(&a, 0.5) {
            Err(Error::NotPositive { eigenvalue, .. }) => assert!(close(eigenvalue, -0.2, 1e-15)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn matrix_power_clamps_roundoff_negatives() {
        let a = Hermitian::from_real_diagonal(&[1.0, -1e-12]);
        let p = matrix_power(&a, 0.5).unwrap();
        assert_eq!(p.matrix()[[1, 1]], c(0.0, 0.0));
    }

    #[test]
    fn unitary_rejects_non_unitary() {
        assert!(matches!(
            Unitary::new(identity(2).mapv(|z| z * 2.0)),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn orthonormalized_columns_are_unitary() {
        let g = CMatrix::from_shape_fn((4, 4), |(i, k)| c((i * 7 + k * 3) as f64 % 5.0 + 0.5, (i + 2 * k) as f64 % 3.0));
        let q = orthonormalize_columns(&g);
        assert!(unitarity_residual(&q) < 1e-12);
    }
}
