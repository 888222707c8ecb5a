//! Uncertainty measures of a density matrix.
//!
//! Wherever two independent evaluation routes exist they are both exposed:
//! the trace and commutator forms of `I_α`, the matrix and spectral-pair forms
//! of `I_α`, the trace-product and pair-sum forms of `Q_α` and `L`, and the
//! closed form of `Q*` against Gauss-Legendre quadrature of `Q_α` over `α`.

mod critical;
mod properties;
mod quadrature;

use serde::Serialize;

use crate::linalg::{power_or_zero, trace_product, trace_quad, CMatrix};
use crate::observables::{Observable, ObservableBasis};
use crate::states::DensityMatrix;
use crate::{Error, Result};

pub use critical::{bisect, critical_alpha, CriticalAlpha, CRITICAL_ALPHA_FLOOR, DEFAULT_ROOT_TOL};
pub use properties::{check_properties, Property, PropertyConfig, PropertyFailure, PropertyLedger, PropertyTally, Sample};
pub use quadrature::{gauss_legendre, integrate_unit_interval, QUADRATURE_POINTS};

/// Wigner-Yanase-Dyson exponent, strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Alpha(f64);

impl Alpha {
    pub const HALF: Alpha = Alpha(0.5);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::AlphaOutOfRange(alpha))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - α`.
    pub fn complement(self) -> Self {
        Self(1.0 - self.0)
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

fn check_dims(rho: &DensityMatrix, x: &Observable) -> Result<()> {
    if rho.dim() != x.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state has dimension {}, observable {}",
            rho.dim(),
            x.dim()
        )));
    }
    Ok(())
}

/// `Tr(ρX²) - (Tr ρX)²`, clamped to zero when roundoff pushes it into
/// `[-1e-12, 0)`.
pub fn variance(rho: &DensityMatrix, x: &Observable) -> Result<f64> {
    check_dims(rho, x)?;
    let rx = rho.matrix().dot(x.matrix());
    let second = trace_product(&rx, x.matrix())?.re;
    let first = rx.diag().sum().re;
    Ok(clamp_small_negative(second - first * first, 1e-12))
}

fn clamp_small_negative(v: f64, tol: f64) -> f64 {
    if v < 0.0 && v >= -tol {
        0.0
    } else {
        v
    }
}

/// `Tr(ρ^α X ρ^{1-α} X)`, the part of `I_α` that is concave in `ρ`.
pub fn wyd_correlation(rho: &DensityMatrix, x: &Observable, alpha: Alpha) -> Result<f64> {
    check_dims(rho, x)?;
    let a = rho.power(alpha.value());
    let b = rho.power(1.0 - alpha.value());
    Ok(trace_quad(a.matrix(), x.matrix(), b.matrix(), x.matrix())?.re)
}

/// WYD information `I_α(ρ, X) = Tr(ρX²) - Tr(ρ^α X ρ^{1-α} X)`.
///
/// Values in `[-1e-10, 0)` are roundoff and returned as zero.
pub fn wyd_info(rho: &DensityMatrix, x: &Observable, alpha: Alpha) -> Result<f64> {
    check_dims(rho, x)?;
    let second = trace_product(&rho.matrix().dot(x.matrix()), x.matrix())?.re;
    let corr = wyd_correlation(rho, x, alpha)?;
    Ok(clamp_small_negative(second - corr, 1e-10))
}

/// Skew information: `I_α` at `α = 1/2`.
pub fn skew_info(rho: &DensityMatrix, x: &Observable) -> Result<f64> {
    wyd_info(rho, x, Alpha::HALF)
}

/// Commutator form `-½ Tr([ρ^α, X][ρ^{1-α}, X])`.
pub fn wyd_info_commutator(rho: &DensityMatrix, x: &Observable, alpha: Alpha) -> Result<f64> {
    check_dims(rho, x)?;
    let a = rho.power(alpha.value());
    let b = rho.power(1.0 - alpha.value());
    let xm = x.matrix();
    let ca = a.matrix().dot(xm) - xm.dot(a.matrix());
    let cb = b.matrix().dot(xm) - xm.dot(b.matrix());
    Ok(-0.5 * trace_product(&ca, &cb)?.re)
}

/// Spectral-pair form
/// `Σ_{i<j} (λ_i + λ_j - λ_i^α λ_j^{1-α} - λ_i^{1-α} λ_j^α) |h_ij|²`
/// with `h` expressed in the eigenbasis belonging to `eigs`.
pub fn wyd_info_spectral(eigs: &[f64], h_in_eigenbasis: &CMatrix, alpha: Alpha) -> Result<f64> {
    let n = eigs.len();
    if h_in_eigenbasis.dim() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "{n} eigenvalues but a {:?} observable",
            h_in_eigenbasis.dim()
        )));
    }
    let a = alpha.value();
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let (li, lj) = (eigs[i], eigs[j]);
            let weight = li + lj
                - power_or_zero(li, a) * power_or_zero(lj, 1.0 - a)
                - power_or_zero(li, 1.0 - a) * power_or_zero(lj, a);
            acc += weight * h_in_eigenbasis[[i, j]].norm_sqr();
        }
    }
    Ok(acc)
}

/// `I_α(ρ, X)` via the spectral-pair form after rotating `X` into ρ's
/// eigenbasis.
pub fn wyd_info_eigenbasis(rho: &DensityMatrix, x: &Observable, alpha: Alpha) -> Result<f64> {
    check_dims(rho, x)?;
    let h = rho.spectrum().to_eigenbasis(x.matrix())?;
    wyd_info_spectral(rho.eigenvalues(), &h, alpha)
}

/// Luo's uncertainty `L(ρ) = n - (Tr √ρ)²`.
pub fn luo_uncertainty(rho: &DensityMatrix) -> f64 {
    let s = rho.trace_power(0.5);
    rho.dim() as f64 - s * s
}

/// `Σ_{i<k} (√λ_i - √λ_k)²`.
pub fn luo_uncertainty_pairs(rho: &DensityMatrix) -> f64 {
    let roots: Vec<f64> = rho.eigenvalues().iter().map(|x| x.sqrt()).collect();
    pairs(&roots).map(|(a, b)| (a - b) * (a - b)).sum()
}

fn pairs(v: &[f64]) -> impl Iterator<Item = (f64, f64)> + '_ {
    (0..v.len()).flat_map(move |i| ((i + 1)..v.len()).map(move |k| (v[i], v[k])))
}

/// `Q_α(ρ) = n - Tr ρ^α · Tr ρ^{1-α}`.
pub fn q_alpha(rho: &DensityMatrix, alpha: Alpha) -> f64 {
    let a = alpha.value();
    rho.dim() as f64 - rho.trace_power(a) * rho.trace_power(1.0 - a)
}

/// `Q_α(ρ) = n - 1 - Σ_{i<k} (λ_i^α λ_k^{1-α} + λ_i^{1-α} λ_k^α)`.
pub fn q_alpha_pairs(rho: &DensityMatrix, alpha: Alpha) -> f64 {
    let a = alpha.value();
    let cross: f64 = pairs(rho.eigenvalues())
        .map(|(li, lk)| {
            power_or_zero(li, a) * power_or_zero(lk, 1.0 - a)
                + power_or_zero(li, 1.0 - a) * power_or_zero(lk, a)
        })
        .sum();
    rho.dim() as f64 - 1.0 - cross
}

/// `Σ_j I_α(ρ, H_j)` over an orthonormal observable basis.
pub fn q_alpha_via_basis_sum(rho: &DensityMatrix, basis: &ObservableBasis, alpha: Alpha) -> Result<f64> {
    if basis.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "basis of dimension {} for a state of dimension {}",
            basis.dim(),
            rho.dim()
        )));
    }
    basis.iter().map(|h| wyd_info(rho, h, alpha)).sum()
}

/// `Δ(a, b) = ∫₀¹ (a^α b^{1-α} + a^{1-α} b^α) dα`: zero if `ab = 0`, `2a`
/// if `a = b`, otherwise twice the logarithmic mean `(b - a)/(ln b - ln a)`.
///
/// The logarithmic mean is evaluated as `(b - a)/ln1p((b - a)/a)` with
/// `a < b`, which stays accurate as `b → a`.
pub fn delta(a: f64, b: f64) -> Result<f64> {
    for v in [a, b] {
        if v < 0.0 || v.is_nan() {
            return Err(Error::NegativeArgument(v));
        }
    }
    if a == 0.0 || b == 0.0 {
        return Ok(0.0);
    }
    if a == b {
        return Ok(2.0 * a);
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let d = hi - lo;
    Ok(2.0 * d / (d / lo).ln_1p())
}

/// `Q*(ρ) = ∫₀¹ Q_α(ρ) dα = n - 1 - Σ_{i<k} Δ(λ_i, λ_k)`.
pub fn q_star(rho: &DensityMatrix) -> f64 {
    let total: f64 = pairs(rho.eigenvalues())
        .map(|(a, b)| delta(a, b).expect("cleaned spectrum is non-negative"))
        .sum();
    rho.dim() as f64 - 1.0 - total
}

/// `∫₀¹ Q_α(ρ) dα` by fixed Gauss-Legendre quadrature.
pub fn q_star_quadrature(rho: &DensityMatrix) -> f64 {
    let n = rho.dim() as f64;
    let eigs = rho.eigenvalues();
    integrate_unit_interval(QUADRATURE_POINTS, |a| {
        let p: f64 = eigs.iter().map(|&x| power_or_zero(x, a)).sum();
        let q: f64 = eigs.iter().map(|&x| power_or_zero(x, 1.0 - a)).sum();
        n - p * q
    })
}

/// `-Σ λ ln λ` in nats, with `0 ln 0 = 0`.
pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    -rho.eigenvalues()
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum::<f64>()
}

fn check_index(q: f64) -> Result<()> {
    if q > 0.0 && q != 1.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidEntropyIndex(q))
    }
}

/// `ln(Tr ρ^q)/(1 - q)`; tends to the von Neumann entropy as `q → 1`.
pub fn renyi(rho: &DensityMatrix, q: f64) -> Result<f64> {
    check_index(q)?;
    Ok(rho.trace_power(q).ln() / (1.0 - q))
}

/// `(1 - Tr ρ^q)/(q - 1)`.
pub fn tsallis(rho: &DensityMatrix, q: f64) -> Result<f64> {
    check_index(q)?;
    Ok((1.0 - rho.trace_power(q)) / (q - 1.0))
}

/// `Tr ρ²`, from the matrix entries.
pub fn purity(rho: &DensityMatrix) -> f64 {
    trace_product(rho.matrix(), rho.matrix()).expect("square").re
}

/// Normalised Brukner-Zeilinger information `n/(n-1) (Tr ρ² - 1/n)`.
/// A one-dimensional system carries none, so `n = 1` gives zero.
pub fn brukner_zeilinger(rho: &DensityMatrix) -> f64 {
    let n = rho.dim() as f64;
    if rho.dim() == 1 {
        return 0.0;
    }
    n / (n - 1.0) * (purity(rho) - 1.0 / n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Entropies {
    pub von_neumann: f64,
    pub renyi: f64,
    pub tsallis: f64,
    pub brukner_zeilinger: f64,
    pub purity: f64,
}

pub fn entropies(rho: &DensityMatrix, q: f64) -> Result<Entropies> {
    Ok(Entropies {
        von_neumann: von_neumann(rho),
        renyi: renyi(rho, q)?,
        tsallis: tsallis(rho, q)?,
        brukner_zeilinger: brukner_zeilinger(rho),
        purity: purity(rho),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaValue {
    pub alpha: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservableMeasures {
    pub variance: f64,
    pub wyd_info: Vec<AlphaValue>,
}

/// Every scalar measure for one state, and optionally one observable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub n: usize,
    pub rank: usize,
    pub eigenvalues: Vec<f64>,
    pub entropy_index: f64,
    #[serde(flatten)]
    pub entropies: Entropies,
    pub luo: f64,
    pub q_alpha: Vec<AlphaValue>,
    pub q_star: f64,
    pub critical_alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observable: Option<ObservableMeasures>,
}

impl MeasureReport {
    pub fn compute(rho: &DensityMatrix, alphas: &[Alpha], q: f64, observable: Option<&Observable>) -> Result<Self> {
        let observable = observable
            .map(|x| -> Result<ObservableMeasures> {
                Ok(ObservableMeasures {
                    variance: variance(rho, x)?,
                    wyd_info: alphas
                        .iter()
                        .map(|&a| Ok(AlphaValue { alpha: a.value(), value: wyd_info(rho, x, a)? }))
                        .collect::<Result<_>>()?,
                })
            })
            .transpose()?;
        let critical = match critical_alpha(rho, DEFAULT_ROOT_TOL) {
            Ok(CriticalAlpha::Root(a)) => Some(a),
            _ => None,
        };
        Ok(Self {
            n: rho.dim(),
            rank: rho.rank(),
            eigenvalues: rho.eigenvalues().to_vec(),
            entropy_index: q,
            entropies: entropies(rho, q)?,
            luo: luo_uncertainty(rho),
            q_alpha: alphas
                .iter()
                .map(|&a| AlphaValue { alpha: a.value(), value: q_alpha(rho, a) })
                .collect(),
            q_star: q_star(rho),
            critical_alpha: critical,
            observable,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::states::{hansen, maximally_mixed, pure, werner};

    fn alpha(a: f64) -> Alpha {
        Alpha::new(a).unwrap()
    }

    fn ket0() -> DensityMatrix {
        pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap()
    }

    #[test]
    fn alpha_rejects_endpoints() {
        for bad in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(Alpha::new(bad).is_err());
        }
        assert_eq!(alpha(0.3).complement().value(), 0.7);
    }

    #[test]
    fn variance_examples() {
        assert_eq!(variance(&ket0(), &Observable::pauli_z()).unwrap(), 0.0);
        assert!((variance(&ket0(), &Observable::pauli_x()).unwrap() - 1.0).abs() < 1e-15);
        assert!((variance(&maximally_mixed(2), &Observable::pauli_z()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn variance_rejects_dimension_mismatch() {
        assert!(matches!(
            variance(&maximally_mixed(3), &Observable::pauli_x()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn wyd_vanishes_on_commuting_pair() {
        let rho = DensityMatrix::validate(crate::linalg::Hermitian::from_real_diagonal(&[0.7, 0.3])).unwrap();
        let x = Observable::diagonal(&[2.0, -5.0]);
        for a in [0.1, 0.5, 0.8] {
            assert!(wyd_info(&rho, &x, alpha(a)).unwrap().abs() < 1e-13);
        }
    }

    #[test]
    fn wyd_reduces_to_variance_on_pure_states() {
        let x = Observable::pauli_x();
        let rho = pure(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let v = variance(&rho, &x).unwrap();
        for a in [0.2, 0.5, 0.9] {
            assert!((wyd_info(&rho, &x, alpha(a)).unwrap() - v).abs() < 1e-14);
        }
    }

    #[test]
    fn skew_information_of_diag_three_quarters() {
        // (λ₁ + λ₂ - 2√(λ₁λ₂))|h₁₂|² with h₁₂ = 1
        let expected = 1.0 - 3f64.sqrt() / 2.0;
        let rho = DensityMatrix::validate(crate::linalg::Hermitian::from_real_diagonal(&[0.75, 0.25])).unwrap();
        let x = Observable::pauli_x();
        assert!((skew_info(&rho, &x).unwrap() - expected).abs() < 1e-15);
        assert!((wyd_info_commutator(&rho, &x, Alpha::HALF).unwrap() - expected).abs() < 1e-15);

        let h = x.matrix().clone();
        assert!((wyd_info_spectral(&[0.75, 0.25], &h, Alpha::HALF).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.13397).abs() < 1e-5);
    }

    #[test]
    fn spectral_form_trivial_cases() {
        let h = crate::random::random_observable(3, 2);
        assert_eq!(wyd_info_spectral(&[1.0 / 3.0; 3], h.matrix(), alpha(0.3)).unwrap(), 0.0);
        let d = Observable::diagonal(&[1.0, 4.0, -2.0]);
        assert_eq!(wyd_info_spectral(&[0.5, 0.3, 0.2], d.matrix(), alpha(0.3)).unwrap(), 0.0);
        assert!(wyd_info_spectral(&[0.5, 0.5], d.matrix(), alpha(0.3)).is_err());
    }

    #[test]
    fn luo_examples() {
        assert!(luo_uncertainty(&maximally_mixed(5)).abs() < 1e-14);
        assert!((luo_uncertainty(&ket0()) - 1.0).abs() < 1e-15);
        let h = hansen();
        assert!((luo_uncertainty(&h) - 1.5385).abs() < 5e-4);
        assert!((luo_uncertainty(&h) - luo_uncertainty_pairs(&h)).abs() < 1e-12);
    }

    #[test]
    fn q_alpha_examples() {
        for a in [0.1, 0.25, 0.5, 0.9] {
            assert!(q_alpha(&maximally_mixed(4), alpha(a)).abs() < 1e-14);
            let psi: Vec<_> = (0..4).map(|i| c(i as f64, 1.0)).collect();
            assert!((q_alpha(&pure(&psi).unwrap(), alpha(a)) - 3.0).abs() < 1e-12);
        }
        assert!((q_alpha(&hansen(), alpha(0.25)) - 1.2213).abs() < 5e-4);
    }

    #[test]
    fn q_alpha_at_half_is_luo() {
        let h = hansen();
        assert!((q_alpha(&h, Alpha::HALF) - luo_uncertainty(&h)).abs() < 1e-12);
    }

    #[test]
    fn werner_half_at_half() {
        let expected = 4.0 - (0.5f64.sqrt() + 3.0 * (1.0f64 / 6.0).sqrt()).powi(2);
        let v = q_alpha(&werner(0.5).unwrap(), Alpha::HALF);
        assert!((v - expected).abs() < 1e-10);
        assert!((v - 0.26795).abs() < 1e-5);
    }

    #[test]
    fn delta_cases() {
        assert_eq!(delta(0.3, 0.0).unwrap(), 0.0);
        assert_eq!(delta(0.0, 0.0).unwrap(), 0.0);
        assert!((delta(0.2, 0.2).unwrap() - 0.4).abs() < 1e-16);
        assert!(matches!(delta(-0.1, 0.2), Err(Error::NegativeArgument(_))));
        assert_eq!(delta(0.7, 0.1).unwrap(), delta(0.1, 0.7).unwrap());
    }

    #[test]
    fn delta_is_continuous_at_the_diagonal() {
        let a = 0.3;
        for eps in [1e-3, 1e-6, 1e-9, 1e-12, 1e-15] {
            let d = delta(a, a * (1.0 + eps)).unwrap();
            // log mean of a and a(1+ε) is a(1 + ε/2 + O(ε²))
            assert!((d - 2.0 * a * (1.0 + eps / 2.0)).abs() <= 2.0 * a * eps * eps + 1e-15, "{eps}: {d}");
        }
    }

    #[test]
    fn q_star_examples() {
        assert!(q_star(&maximally_mixed(4)).abs() < 1e-14);
        assert!((q_star(&ket0()) - 1.0).abs() < 1e-15);
        assert!((q_star(&hansen()) - 1.0748).abs() < 5e-4);
    }

    #[test]
    fn entropy_examples() {
        let e = entropies(&maximally_mixed(4), 2.0).unwrap();
        assert!((e.von_neumann - 4f64.ln()).abs() < 1e-14);
        assert!(e.brukner_zeilinger.abs() < 1e-15);
        assert!((e.renyi - 4f64.ln()).abs() < 1e-14);
        assert!((e.tsallis - 0.75).abs() < 1e-15);

        let e = entropies(&ket0(), 0.5).unwrap();
        assert_eq!(e.von_neumann, 0.0);
        assert!((e.brukner_zeilinger - 1.0).abs() < 1e-15);
        assert!((e.purity - 1.0).abs() < 1e-15);

        assert!(matches!(entropies(&ket0(), 1.0), Err(Error::InvalidEntropyIndex(_))));
        assert!(matches!(entropies(&ket0(), -2.0), Err(Error::InvalidEntropyIndex(_))));
    }

    #[test]
    fn renyi_and_tsallis_approach_von_neumann() {
        let h = hansen();
        let s = von_neumann(&h);
        for q in [1.0 - 1e-6, 1.0 + 1e-6] {
            assert!((renyi(&h, q).unwrap() - s).abs() < 1e-5);
            assert!((tsallis(&h, q).unwrap() - s).abs() < 1e-5);
        }
    }

    #[test]
    fn report_collects_observable_columns() {
        let r = MeasureReport::compute(&hansen(), &[alpha(0.25), Alpha::HALF], 2.0, Some(&Observable::diagonal(&[1.0, 0.0, 0.0, -1.0])))
            .unwrap();
        assert_eq!(r.q_alpha.len(), 2);
        assert_eq!(r.observable.as_ref().unwrap().wyd_info.len(), 2);
        assert!(r.critical_alpha.is_some());
        let json = serde_json::to_value(&r).unwrap();
        assert!(json.get("von_neumann").is_some());
    }
}
