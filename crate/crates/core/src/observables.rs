//! Observables and orthonormal bases of the real space of Hermitian matrices
//! under the Hilbert-Schmidt inner product `⟨X, Y⟩ = Tr(XY)`.

use ndarray::Array2;

use crate::linalg::{self, c, trace_product, CMatrix, Hermitian, Unitary};
use crate::states::StateFile;
use crate::{Error, Result};

/// Orthonormality tolerance for basis construction and rotation.
pub const BASIS_TOL: f64 = 1e-10;

/// A Hermitian operator with no trace or positivity constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable(Hermitian);

impl Observable {
    pub fn new(h: Hermitian) -> Self {
        Self(h)
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        Ok(Self(Hermitian::new(m)?))
    }

    /// Read from the state-file format; only Hermiticity is checked.
    pub fn from_file(file: &StateFile) -> Result<Self> {
        Self::from_matrix(file.to_matrix()?)
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self(Hermitian::from_real_diagonal(d))
    }

    pub fn pauli_x() -> Self {
        Self(Hermitian::new(linalg::real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0])).unwrap())
    }

    pub fn pauli_y() -> Self {
        let m = CMatrix::from_shape_vec((2, 2), vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
            .unwrap();
        Self(Hermitian::new(m).unwrap())
    }

    pub fn pauli_z() -> Self {
        Self::diagonal(&[1.0, -1.0])
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn hermitian(&self) -> &Hermitian {
        &self.0
    }

    pub fn matrix(&self) -> &CMatrix {
        self.0.matrix()
    }

    /// `h_ik`.
    pub fn entry(&self, i: usize, k: usize) -> linalg::C64 {
        self.0.matrix()[[i, k]]
    }

    /// `A ⊗ I_m`.
    pub fn extend_right(&self, m: usize) -> Self {
        Self(self.0.tensor(&Hermitian::identity(m)))
    }

    /// `I_m ⊗ A`.
    pub fn extend_left(&self, m: usize) -> Self {
        Self(Hermitian::identity(m).tensor(&self.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.add(&other.0)?))
    }

    /// `U X U^H`.
    pub fn conjugate_by(&self, u: &Unitary) -> Result<Self> {
        Ok(Self(self.0.conjugate_by(u)?))
    }
}

pub fn commutator(a: &Observable, b: &CMatrix) -> Result<CMatrix> {
    linalg::commutator(a.matrix(), b)
}

/// `‖AB - BA‖_max <= tol`, with default `tol = 1e-10 · max(1, ‖A‖_max ‖B‖_max)`.
pub fn commutes(a: &Observable, b: &CMatrix, tol: Option<f64>) -> Result<bool> {
    a.hermitian().commutes_with(b, tol)
}

/// `n²` observables, orthonormal under `Tr(XY)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableBasis {
    dim: usize,
    elements: Vec<Observable>,
}

impl ObservableBasis {
    pub fn new(elements: Vec<Observable>) -> Result<Self> {
        let dim = elements.first().map(Observable::dim).unwrap_or(0);
        if dim == 0 || elements.len() != dim * dim || elements.iter().any(|e| e.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "an observable basis needs dim^2 elements of one dimension, got {} of dim {dim}",
                elements.len()
            )));
        }
        let basis = Self { dim, elements };
        let residual = basis.orthonormality_residual();
        if residual > BASIS_TOL {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Observable] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Observable> {
        self.elements.iter()
    }

    /// `G_jk = Tr(H_j H_k)`; real for Hermitian elements.
    pub fn gram(&self) -> Array2<f64> {
        let m = self.len();
        Array2::from_shape_fn((m, m), |(j, k)| {
            trace_product(self.elements[j].matrix(), self.elements[k].matrix())
                .expect("same dims")
                .re
        })
    }

    pub fn orthonormality_residual(&self) -> f64 {
        let g = self.gram();
        g.indexed_iter().fold(0.0, |w, ((j, k), &v)| {
            let e = if j == k { 1.0 } else { 0.0 };
            w.max((v - e).abs())
        })
    }

    /// Expansion coefficients `Tr(A H_j)`.
    pub fn coefficients(&self, a: &Hermitian) -> Result<Vec<f64>> {
        self.elements
            .iter()
            .map(|h| Ok(trace_product(a.matrix(), h.matrix())?.re))
            .collect()
    }

    /// `Σ_j w_j H_j`.
    pub fn synthesize(&self, weights: &[f64]) -> Result<Hermitian> {
        let terms: Vec<&Hermitian> = self.elements.iter().map(Observable::hermitian).collect();
        Hermitian::combination(weights, &terms)
    }
}

/// Diagonal projectors `|i⟩⟨i|`, then `(|i⟩⟨k| + |k⟩⟨i|)/√2` for `i < k`,
/// then `(-i|i⟩⟨k| + i|k⟩⟨i|)/√2` for `i < k`, pairs in lexicographic order.
pub fn standard_basis(n: usize) -> ObservableBasis {
    assert!(n >= 1, "standard_basis needs n >= 1");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut elements = Vec::with_capacity(n * n);
    for i in 0..n {
        let mut m = CMatrix::zeros((n, n));
        m[[i, i]] = c(1.0, 0.0);
        elements.push(m);
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |k| (i, k))).collect();
    for &(i, k) in &pairs {
        let mut m = CMatrix::zeros((n, n));
        m[[i, k]] = c(s, 0.0);
        m[[k, i]] = c(s, 0.0);
        elements.push(m);
    }
    for &(i, k) in &pairs {
        let mut m = CMatrix::zeros((n, n));
        m[[i, k]] = c(0.0, -s);
        m[[k, i]] = c(0.0, s);
        elements.push(m);
    }
    let elements = elements
        .into_iter()
        .map(|m| Observable(Hermitian::from_upper(m).expect("square")))
        .collect();
    ObservableBasis::new(elements).expect("standard basis is orthonormal")
}

/// `H'_j = Σ_k O_jk H_k` for a real orthogonal `O`.
pub fn rotate_basis(basis: &ObservableBasis, o: &Array2<f64>) -> Result<ObservableBasis> {
    let m = basis.len();
    if o.dim() != (m, m) {
        return Err(Error::DimensionMismatch(format!(
            "rotation must be {m}x{m}, got {:?}",
            o.dim()
        )));
    }
    let g = o.dot(&o.t());
    let residual = g.indexed_iter().fold(0.0f64, |w, ((j, k), &v)| {
        let e = if j == k { 1.0 } else { 0.0 };
        w.max((v - e).abs())
    });
    if residual > BASIS_TOL {
        return Err(Error::NotOrthogonal { residual });
    }
    let elements = (0..m)
        .map(|j| {
            let row: Vec<f64> = o.row(j).to_vec();
            basis.synthesize(&row).map(Observable)
        })
        .collect::<Result<Vec<_>>>()?;
    ObservableBasis::new(elements)
}
