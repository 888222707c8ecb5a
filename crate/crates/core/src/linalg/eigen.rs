//! Cyclic Jacobi eigensolver for dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` and then applies
//! the classical real Jacobi rotation, so the working matrix stays Hermitian
//! with a real diagonal throughout. Jacobi gives small eigenvalues to high
//! relative accuracy, which matters for fractional powers near zero.

use super::{adjoint, c, psd_tol, CMatrix, Hermitian, C64};
use crate::{Error, Result};

/// Sweeps allowed per unit of dimension before giving up.
pub const SWEEPS_PER_DIM: usize = 64;

/// Eigenvalues sorted in descending order with orthonormal eigenvectors as
/// columns. Each eigenvector is phased so that its first non-negligible
/// component is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V · diag(f(λ_i)) · V^H` evaluated on the supplied eigenvalues.
    pub fn apply(&self, values: &[f64], f: impl Fn(f64) -> f64) -> Hermitian {
        let n = self.dim();
        let fv: Vec<f64> = values.iter().map(|&x| f(x)).collect();
        let mut out = CMatrix::zeros((n, n));
        for i in 0..n {
            for k in i..n {
                let mut acc = c(0.0, 0.0);
                for (j, &w) in fv.iter().enumerate() {
                    if w != 0.0 {
                        acc += self.vectors[[i, j]] * self.vectors[[k, j]].conj() * w;
                    }
                }
                out[[i, k]] = acc;
            }
        }
        Hermitian::from_upper(out).expect("square by construction")
    }

    pub fn reconstruct(&self) -> Hermitian {
        self.apply(&self.values, |x| x)
    }

    /// Eigenvalues with roundoff negatives in `[-psd_tol, 0)` clamped to
    /// zero; anything more negative is an error.
    pub fn clamped_nonnegative(&self) -> Result<Vec<f64>> {
        let largest = self.values.first().copied().unwrap_or(0.0);
        let tol = psd_tol(largest);
        self.values
            .iter()
            .map(|&x| {
                if x < -tol {
                    Err(Error::NotPositive { eigenvalue: x, tolerance: tol })
                } else {
                    Ok(x.max(0.0))
                }
            })
            .collect()
    }

    /// `V^H X V`: an operator expressed in this eigenbasis.
    pub fn to_eigenbasis(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.dim() != self.vectors.dim() {
            return Err(Error::DimensionMismatch(format!(
                "to_eigenbasis: {:?} vs {:?}",
                x.dim(),
                self.vectors.dim()
            )));
        }
        Ok(adjoint(&self.vectors).dot(x).dot(&self.vectors))
    }
}

pub fn eig_hermitian(a: &Hermitian) -> Result<EigenDecomposition> {
    let n = a.dim();
    let mut m = a.matrix().clone();
    let mut v = super::identity(n);

    let scale = m.iter().fold(0.0f64, |s, z| s.max(z.norm()));
    if scale == 0.0 {
        return Ok(finish(vec![0.0; n], v));
    }
    // Pivots below this are indistinguishable from zero in the input.
    let floor = scale * f64::EPSILON * 1e-3;

    let max_sweeps = SWEEPS_PER_DIM * n.max(1);
    let mut converged = false;
    for _sweep in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[[p, q]];
                let r = apq.norm();
                let app = m[[p, p]].re;
                let aqq = m[[q, q]].re;
                if r <= floor || r <= 0.5 * f64::EPSILON * (app.abs() * aqq.abs()).sqrt() {
                    continue;
                }
                rotated = true;
                rotate(&mut m, &mut v, p, q, apq / r, r, app, aqq);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::SolverFailure { sweeps: max_sweeps, residual: off_diagonal_norm(&m) });
    }

    let values = (0..n).map(|i| m[[i, i]].re).collect();
    Ok(finish(values, v))
}

/// Zero `m[p][q]` with `J = D R`, where `D` rotates the phase `e` of the
/// pivot away and `R` is the real Jacobi rotation on `[[app, r], [r, aqq]]`.
#[allow(clippy::too_many_arguments)]
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize, e: C64, r: f64, app: f64, aqq: f64) {
    let n = m.nrows();
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;

    let ec = e.conj();
    let jpp = c(cs, 0.0);
    let jpq = c(sn, 0.0);
    let jqp = ec * (-sn);
    let jqq = ec * cs;

    // m <- m J
    for k in 0..n {
        let mkp = m[[k, p]];
        let mkq = m[[k, q]];
        m[[k, p]] = mkp * jpp + mkq * jqp;
        m[[k, q]] = mkp * jpq + mkq * jqq;
    }
    // m <- J^H m
    for k in 0..n {
        let mpk = m[[p, k]];
        let mqk = m[[q, k]];
        m[[p, k]] = jpp.conj() * mpk + jqp.conj() * mqk;
        m[[q, k]] = jpq.conj() * mpk + jqq.conj() * mqk;
    }
    m[[p, q]] = c(0.0, 0.0);
    m[[q, p]] = c(0.0, 0.0);
    m[[p, p]].im = 0.0;
    m[[q, q]].im = 0.0;

    // v <- v J
    for k in 0..n {
        let vkp = v[[k, p]];
        let vkq = v[[k, q]];
        v[[k, p]] = vkp * jpp + vkq * jqp;
        v[[k, q]] = vkp * jpq + vkq * jqq;
    }
}

fn off_diagonal_norm(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            if i != k {
                acc += m[[i, k]].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Sort descending (stable, so ties keep solver order) and fix phases.
fn finish(values: Vec<f64>, v: CMatrix) -> EigenDecomposition {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));

    let mut vectors = CMatrix::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        let col = v.column(src);
        let phase = col
            .iter()
            .find(|z| z.norm() > 1e-12)
            .map(|z| z.conj() / z.norm())
            .unwrap_or(c(1.0, 0.0));
        for i in 0..n {
            vectors[[i, dst]] = col[i] * phase;
        }
    }
    let values = order.iter().map(|&i| values[i]).collect();
    EigenDecomposition { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs_diff, real_matrix, unitarity_residual};

    #[test]
    fn identity_two() {
        let e = eig_hermitian(&Hermitian::identity(2)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
        assert!(unitarity_residual(&e.vectors) < 1e-15);
    }

    #[test]
    fn diagonal_is_sorted_descending() {
        let e = eig_hermitian(&Hermitian::from_real_diagonal(&[-1.0, 3.0])).unwrap();
        assert_eq!(e.values, vec![3.0, -1.0]);
        let swap = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(max_abs_diff(&e.vectors, &swap) < 1e-15);
    }

    #[test]
    fn zero_matrix() {
        let z = Hermitian::from_upper(CMatrix::zeros((3, 3))).unwrap();
        let e = eig_hermitian(&z).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
        assert_eq!(e.vectors, identity(3));
    }

    #[test]
    fn complex_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 3 and 1.
        let m = CMatrix::from_shape_vec((2, 2), vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)])
            .unwrap();
        let h = Hermitian::new(m.clone()).unwrap();
        let e = eig_hermitian(&h).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        assert!(max_abs_diff(e.reconstruct().matrix(), &m) < 1e-14);
        // first component of each eigenvector is real positive
        for j in 0..2 {
            let z = e.vectors[[0, j]];
            assert!(z.re > 0.0 && z.im.abs() < 1e-15);
        }
    }

    #[test]
    fn clamping_rejects_large_negatives() {
        let e = eig_hermitian(&Hermitian::from_real_diagonal(&[1.0, -1e-3])).unwrap();
        assert!(matches!(e.clamped_nonnegative(), Err(Error::NotPositive { .. })));
        let e = eig_hermitian(&Hermitian::from_real_diagonal(&[1.0, -1e-11])).unwrap();
        assert_eq!(e.clamped_nonnegative().unwrap(), vec![1.0, 0.0]);
    }
}
