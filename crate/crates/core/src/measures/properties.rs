//! Executable forms of the algebraic properties of `I_α`, `Q_α` and `Q*`.
//!
//! Each sample is a state with an observable. Auxiliary inputs a property
//! needs (a second state to mix with, a unitary, tensor factors, a pure
//! state, a commuting observable) are drawn from a ChaCha stream seeded by
//! `(seed, sample index)`, so the ledger does not depend on evaluation order.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    critical_alpha, luo_uncertainty, q_alpha, q_alpha_pairs, q_alpha_via_basis_sum, q_star,
    q_star_quadrature, variance, wyd_correlation, wyd_info, wyd_info_commutator,
    wyd_info_eigenbasis, Alpha, CriticalAlpha, DEFAULT_ROOT_TOL,
};
use crate::linalg::{c, max_abs_diff, CMatrix, Hermitian, Subsystem, Unitary};
use crate::observables::{rotate_basis, standard_basis, Observable};
use crate::random;
use crate::states::{pure, DensityMatrix};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    WydConvex,
    CorrelationConcave,
    WydAdditive,
    PartialTraceMonotone,
    PureEqualsVariance,
    VarianceDominates,
    CommutingVanishes,
    UnitaryCovariance,
    UnitaryInvariance,
    CommutingUnitaryInvariance,
    PowerCovariance,
    QBounds,
    QBelowLuo,
    QLuoEquality,
    QConvex,
    QUnitaryInvariant,
    QStarUnitaryInvariant,
    PseudoAdditivity,
    AlphaLimits,
    QStarBounds,
    QStarQuadrature,
    BasisIndependence,
    TraceVsCommutator,
    MatrixVsSpectral,
    QFormsAgree,
    QSymmetric,
    CriticalAlphaReplay,
    Evaluation,
}

impl Property {
    pub fn name(self) -> &'static str {
        use Property::*;
        match self {
            WydConvex => "wyd_convex",
            CorrelationConcave => "correlation_concave",
            WydAdditive => "wyd_additive",
            PartialTraceMonotone => "partial_trace_monotone",
            PureEqualsVariance => "pure_equals_variance",
            VarianceDominates => "variance_dominates",
            CommutingVanishes => "commuting_vanishes",
            UnitaryCovariance => "unitary_covariance",
            UnitaryInvariance => "unitary_invariance",
            CommutingUnitaryInvariance => "commuting_unitary_invariance",
            PowerCovariance => "power_covariance",
            QBounds => "q_bounds",
            QBelowLuo => "q_below_luo",
            QLuoEquality => "q_luo_equality",
            QConvex => "q_convex",
            QUnitaryInvariant => "q_unitary_invariant",
            QStarUnitaryInvariant => "q_star_unitary_invariant",
            PseudoAdditivity => "pseudo_additivity",
            AlphaLimits => "alpha_limits",
            QStarBounds => "q_star_bounds",
            QStarQuadrature => "q_star_quadrature",
            BasisIndependence => "basis_independence",
            TraceVsCommutator => "trace_vs_commutator",
            MatrixVsSpectral => "matrix_vs_spectral",
            QFormsAgree => "q_forms_agree",
            QSymmetric => "q_symmetric",
            CriticalAlphaReplay => "critical_alpha_replay",
            Evaluation => "evaluation",
        }
    }

    pub fn description(self) -> &'static str {
        use Property::*;
        match self {
            WydConvex => "I_a(rho, X) convex in rho",
            CorrelationConcave => "Tr(rho^a X rho^(1-a) X) concave in rho",
            WydAdditive => "I_a(r1 (x) r2, A1 (x) I + I (x) A2) = I_a(r1, A1) + I_a(r2, A2)",
            PartialTraceMonotone => "I_a(rho, A (x) I) >= I_a(tr_2 rho, A)",
            PureEqualsVariance => "pure rho: I_a(rho, X) = V(rho, X)",
            VarianceDominates => "V(rho, X) >= I_a(rho, X)",
            CommutingVanishes => "[rho, X] = 0 => I_a(rho, X) = 0",
            UnitaryCovariance => "I_a(U rho U^H, X) = I_a(rho, U^H X U)",
            UnitaryInvariance => "I_a(U rho U^H, U X U^H) = I_a(rho, X)",
            CommutingUnitaryInvariance => "[U, X] = 0 => I_a(U rho U^H, X) = I_a(rho, X)",
            PowerCovariance => "(U rho U^H)^a = U rho^a U^H",
            QBounds => "0 <= Q_a <= n - 1",
            QBelowLuo => "Q_a <= L",
            QLuoEquality => "Q_a = L iff a = 1/2 or spectrum flat on its support",
            QConvex => "Q_a convex in rho",
            QUnitaryInvariant => "Q_a(U rho U^H) = Q_a(rho)",
            QStarUnitaryInvariant => "Q*(U rho U^H) = Q*(rho)",
            PseudoAdditivity => "P(r1 (x) r2) + P(r1) P(r2) = P(r1) + P(r2)",
            AlphaLimits => "Q_a -> n - rank as a -> 0 or 1",
            QStarBounds => "0 <= Q* <= n - 1 and Q* <= L",
            QStarQuadrature => "closed-form Q* = quadrature of Q_a",
            BasisIndependence => "sum_j I_a(rho, H_j) = Q_a for standard and rotated bases",
            TraceVsCommutator => "trace form of I_a = commutator form",
            MatrixVsSpectral => "matrix form of I_a = spectral-pair form",
            QFormsAgree => "n - Tr rho^a Tr rho^(1-a) = n - 1 - pair sum",
            QSymmetric => "Q_a = Q_(1-a)",
            CriticalAlphaReplay => "Q_(a_c) = Q* with a_c in (0, 1/2]",
            Evaluation => "every measure evaluates without error",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Tolerances for the property checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PropertyConfig {
    /// General equalities and inequalities.
    pub tol: f64,
    /// Slack allowed on convexity and concavity inequalities.
    pub convexity_margin: f64,
    /// Exact algebraic identities: additivity, pseudo-additivity, dual forms.
    pub identity_tol: f64,
    /// Basis-sum and quadrature comparisons.
    pub comparison_tol: f64,
    /// Pure-state reduction to the variance.
    pub pure_tol: f64,
    /// Trace-product vs pair-sum forms of `Q_α`, and `Q_α = L` at `α = 1/2`.
    pub q_forms_tol: f64,
    /// `Q_α = Q_{1-α}`.
    pub symmetry_tol: f64,
    pub seed: u64,
}

impl Default for PropertyConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            convexity_margin: 1e-9,
            identity_tol: 1e-9,
            comparison_tol: 1e-6,
            pure_tol: 1e-10,
            q_forms_tol: 1e-10,
            symmetry_tol: 1e-12,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub rho: DensityMatrix,
    pub observable: Observable,
}

impl Sample {
    pub fn new(rho: DensityMatrix, observable: Observable) -> Self {
        Self { rho, observable }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyTally {
    pub property: Property,
    pub checks: usize,
    pub failures: usize,
    /// Largest `residual - tolerance` seen; positive means a failure.
    pub worst_excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyFailure {
    pub property: Property,
    pub sample: usize,
    pub alpha: Option<f64>,
    pub residual: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PropertyLedger {
    tallies: BTreeMap<Property, PropertyTally>,
    pub failures: Vec<PropertyFailure>,
}

impl PropertyLedger {
    /// Record one check; it fails when `residual > tolerance`.
    pub fn record(&mut self, property: Property, sample: usize, alpha: Option<f64>, residual: f64, tolerance: f64) {
        let failed = residual.is_nan() || residual > tolerance;
        let t = self.tallies.entry(property).or_insert(PropertyTally {
            property,
            checks: 0,
            failures: 0,
            worst_excess: f64::NEG_INFINITY,
        });
        t.checks += 1;
        let excess = if residual.is_nan() { f64::INFINITY } else { residual - tolerance };
        t.worst_excess = t.worst_excess.max(excess);
        if failed {
            t.failures += 1;
            self.failures.push(PropertyFailure { property, sample, alpha, residual, tolerance });
        }
    }

    fn fail(&mut self, property: Property, sample: usize, alpha: Option<f64>) {
        self.record(property, sample, alpha, f64::INFINITY, 0.0);
    }

    pub fn merge(&mut self, other: PropertyLedger) {
        for (p, t) in other.tallies {
            let e = self.tallies.entry(p).or_insert(PropertyTally {
                property: p,
                checks: 0,
                failures: 0,
                worst_excess: f64::NEG_INFINITY,
            });
            e.checks += t.checks;
            e.failures += t.failures;
            e.worst_excess = e.worst_excess.max(t.worst_excess);
        }
        self.failures.extend(other.failures);
    }

    pub fn tallies(&self) -> impl Iterator<Item = &PropertyTally> {
        self.tallies.values()
    }

    pub fn tally(&self, p: Property) -> Option<&PropertyTally> {
        self.tallies.get(&p)
    }

    pub fn total_checks(&self) -> usize {
        self.tallies.values().map(|t| t.checks).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn sample_rng(seed: u64, index: usize) -> random::SeededRng {
    random::rng(seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Check every property on every sample and every `α`.
pub fn check_properties(samples: &[Sample], alphas: &[Alpha], cfg: &PropertyConfig) -> PropertyLedger {
    let ledgers: Vec<PropertyLedger> = samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let mut ledger = PropertyLedger::default();
            if let Err(e) = check_sample(i, s, alphas, cfg, &mut ledger) {
                // An evaluation error is a failed check, not a crash.
                log_error(i, &e);
                ledger.fail(Property::Evaluation, i, None);
            }
            ledger
        })
        .collect();
    let mut out = PropertyLedger::default();
    for l in ledgers {
        out.merge(l);
    }
    out
}

fn log_error(sample: usize, e: &crate::Error) {
    eprintln!("property check on sample {sample} raised: {e}");
}

struct Aux {
    other: DensityMatrix,
    weight: f64,
    unitary: Unitary,
    pure: DensityMatrix,
    factor_state: DensityMatrix,
    factor_obs: Observable,
    composite: DensityMatrix,
    square_factor: DensityMatrix,
    commuting_obs: Observable,
    commuting_unitary: Unitary,
    rotation: ndarray::Array2<f64>,
}

fn draw_aux(index: usize, s: &Sample, cfg: &PropertyConfig) -> Result<Aux> {
    let n = s.rho.dim();
    let mut rng = sample_rng(cfg.seed, index);
    let other = random::ginibre_density_with(n, &mut rng);
    let weight = rng.random::<f64>();
    let unitary = random::unitary_with(n, &mut rng);
    let pure = pure(&random::pure_vector_with(n, &mut rng))?;
    let factor_state = random::ginibre_density_with(2, &mut rng);
    let factor_obs = random::observable_with(2, &mut rng);
    let composite = random::ginibre_density_with(2 * n, &mut rng);
    let square_factor = random::ginibre_density_with(n, &mut rng);

    // Functions of ρ's eigenbasis commute with ρ.
    let diag: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
    let spec = s.rho.spectrum();
    let commuting_obs = Observable::new(spec.apply(&diag, |x| x));

    // exp(iθ) on X's eigenvectors commutes with X.
    let xe = s.observable.hermitian().eig()?;
    let phases: Vec<_> = (0..n).map(|_| c(0.0, rng.random::<f64>() * std::f64::consts::TAU).exp()).collect();
    let v = &xe.vectors;
    let u = CMatrix::from_shape_fn((n, n), |(i, k)| {
        (0..n).map(|j| v[[i, j]] * phases[j] * v[[k, j]].conj()).sum()
    });
    let commuting_unitary = Unitary::new(u)?;
    let rotation = random::orthogonal_with(n * n, &mut rng);

    Ok(Aux {
        other,
        weight,
        unitary,
        pure,
        factor_state,
        factor_obs,
        composite,
        square_factor,
        commuting_obs,
        commuting_unitary,
        rotation,
    })
}

fn check_sample(i: usize, s: &Sample, alphas: &[Alpha], cfg: &PropertyConfig, ledger: &mut PropertyLedger) -> Result<()> {
    use Property::*;
    let rho = &s.rho;
    let x = &s.observable;
    let n = rho.dim();
    let nf = n as f64;
    let aux = draw_aux(i, s, cfg)?;
    let w = aux.weight;

    let mixture = rho.mix(&aux.other, w)?;
    let rotated = rho.conjugate_by(&aux.unitary)?;
    let x_back = x.conjugate_by(&aux.unitary.adjoint())?;
    let x_rot = x.conjugate_by(&aux.unitary)?;
    let commuting_rotated = rho.conjugate_by(&aux.commuting_unitary)?;
    let product = rho.tensor(&aux.factor_state)?;
    let sum_obs = x.extend_right(2).add(&aux.factor_obs.extend_left(n))?;
    let reduced = aux.composite.partial_trace((n, 2), Subsystem::Second)?;
    let x_ext = x.extend_right(2);
    let square_product = rho.tensor(&aux.square_factor)?;
    let std_basis = standard_basis(n);
    let rot_basis = rotate_basis(&std_basis, &aux.rotation)?;
    let luo = luo_uncertainty(rho);
    // Pairs with a zero eigenvalue contribute equally to Q_α and L, so
    // flatness only matters on the support.
    let support: Vec<f64> = rho.eigenvalues().iter().copied().filter(|&l| l > 0.0).collect();
    let spread = support.first().unwrap_or(&0.0) - support.last().unwrap_or(&0.0);
    let var = variance(rho, x)?;
    let pure_var = variance(&aux.pure, x)?;

    for &alpha in alphas {
        let a = Some(alpha.value());
        let info = wyd_info(rho, x, alpha)?;

        // convexity / concavity on a two-point mixture
        let mixed = wyd_info(&mixture, x, alpha)?;
        let chord = w * info + (1.0 - w) * wyd_info(&aux.other, x, alpha)?;
        ledger.record(WydConvex, i, a, mixed - chord, cfg.convexity_margin);
        let corr_mixed = wyd_correlation(&mixture, x, alpha)?;
        let corr_chord = w * wyd_correlation(rho, x, alpha)? + (1.0 - w) * wyd_correlation(&aux.other, x, alpha)?;
        ledger.record(CorrelationConcave, i, a, corr_chord - corr_mixed, cfg.convexity_margin);

        let lhs = wyd_info(&product, &sum_obs, alpha)?;
        let rhs = info + wyd_info(&aux.factor_state, &aux.factor_obs, alpha)?;
        ledger.record(WydAdditive, i, a, (lhs - rhs).abs(), cfg.identity_tol);

        let full = wyd_info(&aux.composite, &x_ext, alpha)?;
        let part = wyd_info(&reduced, x, alpha)?;
        ledger.record(PartialTraceMonotone, i, a, part - full, cfg.tol);

        let pi = wyd_info(&aux.pure, x, alpha)?;
        ledger.record(PureEqualsVariance, i, a, (pi - pure_var).abs(), cfg.pure_tol);
        ledger.record(VarianceDominates, i, a, info - var, cfg.tol);

        ledger.record(CommutingVanishes, i, a, wyd_info(rho, &aux.commuting_obs, alpha)?.abs(), cfg.tol);

        let left = wyd_info(&rotated, x, alpha)?;
        ledger.record(UnitaryCovariance, i, a, (left - wyd_info(rho, &x_back, alpha)?).abs(), cfg.tol);
        ledger.record(UnitaryInvariance, i, a, (wyd_info(&rotated, &x_rot, alpha)? - info).abs(), cfg.tol);
        ledger.record(
            CommutingUnitaryInvariance,
            i,
            a,
            (wyd_info(&commuting_rotated, x, alpha)? - info).abs(),
            cfg.tol,
        );
        let conj_power = rho.power(alpha.value()).conjugate_by(&aux.unitary)?;
        let power_of_conj: Hermitian = rotated.power(alpha.value());
        ledger.record(PowerCovariance, i, a, max_abs_diff(conj_power.matrix(), power_of_conj.matrix()), cfg.tol);

        let q = q_alpha(rho, alpha);
        ledger.record(QBounds, i, a, (-q).max(q - (nf - 1.0)), cfg.tol);
        ledger.record(QBelowLuo, i, a, q - luo, cfg.tol);
        if alpha == Alpha::HALF || spread <= 1e-12 {
            ledger.record(QLuoEquality, i, a, (luo - q).abs(), cfg.q_forms_tol);
        } else if spread >= 1e-3 {
            // strict inequality off the equality cases
            ledger.record(QLuoEquality, i, a, -(luo - q), -cfg.q_forms_tol);
        }

        let q_mixed = q_alpha(&mixture, alpha);
        let q_chord = w * q + (1.0 - w) * q_alpha(&aux.other, alpha);
        ledger.record(QConvex, i, a, q_mixed - q_chord, cfg.convexity_margin);

        ledger.record(QUnitaryInvariant, i, a, (q_alpha(&rotated, alpha) - q).abs(), cfg.tol);

        // P(ρ) = Q(ρ)/N on the N = m² composite, P(ρ_i) = Q(ρ_i)/√N = Q(ρ_i)/m
        let p12 = q_alpha(&square_product, alpha) / (nf * nf);
        let p1 = q / nf;
        let p2 = q_alpha(&aux.square_factor, alpha) / nf;
        ledger.record(PseudoAdditivity, i, a, (p12 + p1 * p2 - (p1 + p2)).abs(), cfg.identity_tol);

        let sum_std = q_alpha_via_basis_sum(rho, &std_basis, alpha)?;
        let sum_rot = q_alpha_via_basis_sum(rho, &rot_basis, alpha)?;
        ledger.record(BasisIndependence, i, a, (sum_std - q).abs().max((sum_rot - q).abs()), cfg.comparison_tol);

        ledger.record(TraceVsCommutator, i, a, (info - wyd_info_commutator(rho, x, alpha)?).abs(), cfg.identity_tol);
        ledger.record(MatrixVsSpectral, i, a, (info - wyd_info_eigenbasis(rho, x, alpha)?).abs(), cfg.identity_tol);
        ledger.record(QFormsAgree, i, a, (q - q_alpha_pairs(rho, alpha)).abs(), cfg.q_forms_tol);
        ledger.record(QSymmetric, i, a, (q - q_alpha(rho, alpha.complement())).abs(), cfg.symmetry_tol);
    }

    // α-independent checks
    let qs = q_star(rho);
    ledger.record(QStarUnitaryInvariant, i, None, (q_star(&rotated) - qs).abs(), cfg.tol);
    ledger.record(QStarBounds, i, None, (-qs).max(qs - (nf - 1.0)).max(qs - luo), cfg.tol);
    ledger.record(QStarQuadrature, i, None, (qs - q_star_quadrature(rho)).abs(), cfg.comparison_tol);

    let near_zero = Alpha(1e-4);
    let near_one = Alpha(1.0 - 1e-4);
    let limit = (n - rho.rank()) as f64;
    let q0 = q_alpha(rho, near_zero);
    let q1 = q_alpha(rho, near_one);
    if rho.rank() == n {
        ledger.record(AlphaLimits, i, Some(1e-4), q0 - 1e-3 * nf, 0.0);
        ledger.record(AlphaLimits, i, Some(1.0 - 1e-4), q1 - 1e-3 * nf, 0.0);
    } else {
        ledger.record(AlphaLimits, i, Some(1e-4), (q0 - limit).abs(), 1e-2);
        ledger.record(AlphaLimits, i, Some(1.0 - 1e-4), (q1 - limit).abs(), 1e-2);
    }
    ledger.record(QFormsAgree, i, Some(1e-4), (q0 - q_alpha_pairs(rho, near_zero)).abs(), cfg.q_forms_tol);

    match critical_alpha(rho, DEFAULT_ROOT_TOL) {
        Ok(CriticalAlpha::Root(ac)) => {
            let inside = if ac > 0.0 && ac <= 0.5 { 0.0 } else { f64::INFINITY };
            let replay = (q_alpha(rho, Alpha(ac)) - qs).abs();
            ledger.record(CriticalAlphaReplay, i, Some(ac), replay.max(inside), cfg.tol);
        }
        Ok(CriticalAlpha::Degenerate) => {
            // constant Q_α: it must actually be flat in α
            let flat = (q0 - luo).abs().max((qs - luo).abs());
            ledger.record(CriticalAlphaReplay, i, None, flat, cfg.tol);
        }
        Err(_) => ledger.fail(CriticalAlphaReplay, i, None),
    }
    Ok(())
}
