//! Validated density matrices, the named states used throughout the crate,
//! and the JSON matrix file format.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::linalg::{
    c, partial_trace, power_or_zero, psd_tol, real_matrix, trace, CMatrix, EigenDecomposition,
    Hermitian, Subsystem, Unitary, C64,
};
use crate::{Error, Result};

/// Allowed `|Tr ρ - 1|`, and the trace budget for clamping roundoff
/// eigenvalues.
pub const TRACE_TOL: f64 = 1e-10;

/// A Hermitian, positive-semidefinite, unit-trace matrix together with its
/// spectral decomposition.
///
/// The stored matrix is kept exactly as supplied. The spectrum is cleaned:
/// eigenvalues within `psd_tol` of zero are set to exactly zero and the rest
/// are rescaled to sum to one, so every spectral formula sees a true
/// probability vector and a well-defined rank.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: Hermitian,
    spectrum: EigenDecomposition,
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl DensityMatrix {
    pub fn validate(raw: Hermitian) -> Result<Self> {
        let t = trace(raw.matrix()).re;
        if (t - 1.0).abs() > TRACE_TOL {
            return Err(Error::NonUnitTrace { trace: t, residual: (t - 1.0).abs() });
        }
        let mut spectrum = raw.eig()?;
        let largest = spectrum.values.first().copied().unwrap_or(0.0);
        let tol = psd_tol(largest);
        let smallest = spectrum.values.last().copied().unwrap_or(0.0);
        if smallest < -tol {
            return Err(Error::NotPositive { eigenvalue: smallest, tolerance: tol });
        }
        let raw_sum: f64 = spectrum.values.iter().sum();
        for v in spectrum.values.iter_mut() {
            if *v <= tol {
                *v = 0.0;
            }
        }
        let sum: f64 = spectrum.values.iter().sum();
        if (sum - raw_sum).abs() > TRACE_TOL {
            return Err(Error::NotPositive { eigenvalue: smallest, tolerance: tol });
        }
        for v in spectrum.values.iter_mut() {
            *v /= sum;
        }
        Ok(Self { matrix: raw, spectrum })
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        Self::validate(Hermitian::new(m)?)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn hermitian(&self) -> &Hermitian {
        &self.matrix
    }

    pub fn matrix(&self) -> &CMatrix {
        self.matrix.matrix()
    }

    pub fn spectrum(&self) -> &EigenDecomposition {
        &self.spectrum
    }

    /// Cleaned eigenvalues, descending; they sum to one.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.values
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues().iter().filter(|&&x| x > 0.0).count()
    }

    pub fn is_pure(&self) -> bool {
        self.rank() == 1
    }

    /// `ρ^α` through the cleaned spectrum, with `0^α = 0`.
    pub fn power(&self, alpha: f64) -> Hermitian {
        self.spectrum.apply(&self.spectrum.values, |x| power_or_zero(x, alpha))
    }

    /// `Tr ρ^α = Σ λ_i^α` with `0^α = 0`.
    pub fn trace_power(&self, alpha: f64) -> f64 {
        self.eigenvalues().iter().map(|&x| power_or_zero(x, alpha)).sum()
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Self::validate(self.matrix.tensor(&other.matrix))
    }

    pub fn partial_trace(&self, dims: (usize, usize), traced: Subsystem) -> Result<Self> {
        let reduced = partial_trace(self.matrix(), dims, traced)?;
        Self::validate(Hermitian::from_upper(reduced)?)
    }

    /// `w ρ + (1 - w) σ`.
    pub fn mix(&self, other: &Self, w: f64) -> Result<Self> {
        Self::validate(Hermitian::combination(&[w, 1.0 - w], &[&self.matrix, &other.matrix])?)
    }

    /// `U ρ U^H`.
    pub fn conjugate_by(&self, u: &Unitary) -> Result<Self> {
        Self::validate(self.matrix.conjugate_by(u)?)
    }
}

/// `|ψ⟩⟨ψ|` for the normalised `ψ`.
pub fn pure(psi: &[C64]) -> Result<DensityMatrix> {
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if psi.is_empty() || norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let n = psi.len();
    let u: Vec<C64> = psi.iter().map(|z| z / norm).collect();
    let m = CMatrix::from_shape_fn((n, n), |(i, k)| u[i] * u[k].conj());
    DensityMatrix::validate(Hermitian::from_upper(m)?)
}

pub fn maximally_mixed(n: usize) -> DensityMatrix {
    DensityMatrix::validate(Hermitian::identity(n).scale(1.0 / n as f64))
        .expect("I/n is a valid state")
}

/// The two-qubit singlet `(|01⟩ - |10⟩)/√2`.
pub fn singlet() -> Vec<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)]
}

/// Werner state `((4λ-1)/3)|Ψ⁻⟩⟨Ψ⁻| + ((1-λ)/3) I₄`, spectrum
/// `(λ, (1-λ)/3, (1-λ)/3, (1-λ)/3)`. `λ = 1/4` is `I/4`, `λ = 1` the singlet.
pub fn werner(lambda: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::WernerOutOfRange(lambda));
    }
    let psi = singlet();
    let a = (4.0 * lambda - 1.0) / 3.0;
    let b = (1.0 - lambda) / 3.0;
    let m = CMatrix::from_shape_fn((4, 4), |(i, k)| {
        let diag = if i == k { b } else { 0.0 };
        psi[i] * psi[k].conj() * a + diag
    });
    DensityMatrix::validate(Hermitian::from_upper(m)?)
}

/// Hansen's unnormalised 4×4 matrix; its trace is 26.
pub fn hansen_unnormalized() -> Hermitian {
    #[rustfmt::skip]
    let entries = [
        7.0, 5.0, 5.0, 6.0,
        5.0, 6.0, 2.0, 5.0,
        5.0, 2.0, 6.0, 5.0,
        6.0, 5.0, 5.0, 7.0,
    ];
    Hermitian::new(real_matrix(4, 4, &entries)).expect("symmetric")
}

/// Hansen's example divided by its trace 26.
pub fn hansen() -> DensityMatrix {
    DensityMatrix::validate(hansen_unnormalized().scale(1.0 / 26.0)).expect("valid state")
}

/// On-disk matrix: `{"dim": n, "entries": [[re, im], ...], "label": "..."}`
/// with entries in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl StateFile {
    pub fn from_matrix(m: &CMatrix, label: Option<String>) -> Self {
        Self {
            dim: m.nrows(),
            entries: m.iter().map(|z| [z.re, z.im]).collect(),
            label,
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.dim == 0 {
            return Err(Error::Format("field `dim` must be positive".into()));
        }
        if self.entries.len() != self.dim * self.dim {
            return Err(Error::Format(format!(
                "field `entries` has {} values, expected dim^2 = {}",
                self.entries.len(),
                self.dim * self.dim
            )));
        }
        if let Some(bad) = self.entries.iter().position(|e| !e[0].is_finite() || !e[1].is_finite()) {
            return Err(Error::Format(format!("field `entries[{bad}]` is not finite")));
        }
        let v = self.entries.iter().map(|e| c(e[0], e[1])).collect();
        Ok(CMatrix::from_shape_vec((self.dim, self.dim), v).expect("length checked"))
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_matrix(self.to_matrix()?)
    }
}
