//! Parameter mapping and the two measurement-conditioned protocols.
//!
//! Each pulse pair drives the resonator along one of two dressed branches of
//! the qubit. The `|+⟩` branch applies `e^{−iφ} Ô(−l₁, −l₂)` and the `|−⟩`
//! branch `e^{iφ} Ô(l₁, l₂)`. Starting from `|g⟩ = (|+⟩ − |−⟩)/√2`, every
//! ground-state detection therefore applies `½[e^{−iφ}Ô(−l₁,−l₂) + e^{iφ}Ô(l₁,l₂)]`
//! to the resonator, so after `n` detections the resonator holds
//! `2⁻ⁿ Σₘ C(n,m) e^{i(n−2m)φ} Ô^{n−2m}|α₀⟩` and the squared norm of that
//! vector is the probability of the all-ground record.

use std::f64::consts::{PI, TAU};
use std::ops::RangeInclusive;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coherent::{CatCycle, CoherentLabel, Component, Kick, PulseOperator, SuperposedState};
use crate::error::{Error, Result};

/// Largest accepted `η = g/ω`.
pub const MAX_ETA: f64 = 0.05;
/// `Ω₁` must exceed this multiple of `max(Ω₂, g)`.
pub const MIN_DRIVE_RATIO: f64 = 10.0;
/// Below this multiple a warning is raised.
pub const WARN_DRIVE_RATIO: f64 = 100.0;

/// Physical rates, all in rad/s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub omega: f64,
    pub g: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub gamma: f64,
}

impl PhysicalParams {
    pub fn eta(&self) -> f64 {
        self.g / self.omega
    }

    /// `Ω′₁ = Ω₁(1 − η²/2)`.
    pub fn omega1_prime(&self) -> f64 {
        let eta = self.eta();
        self.omega1 * (1.0 - 0.5 * eta * eta)
    }

    /// One pulse-pair period `T = 2π/ω`.
    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.omega, self.g, self.omega1, self.omega2, self.gamma];
        if all.iter().any(|v| !v.is_finite() || *v < 0.0) || self.omega <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "physical rates must be finite and non-negative with omega > 0: {self:?}"
            )));
        }
        let eta = self.eta();
        if eta > MAX_ETA {
            return Err(Error::RegimeViolation(format!(
                "eta = g/omega = {eta:.3e} exceeds {MAX_ETA}"
            )));
        }
        let weak = self.omega2.max(self.g);
        if self.omega1 < MIN_DRIVE_RATIO * weak {
            return Err(Error::RegimeViolation(format!(
                "strong drive Omega1 = {:.3e} is below {MIN_DRIVE_RATIO} x max(Omega2, g) = {:.3e}",
                self.omega1,
                MIN_DRIVE_RATIO * weak
            )));
        }
        Ok(())
    }

    /// Soft regime warnings; empty when the parameters are comfortably inside.
    pub fn regime_warnings(&self) -> Vec<String> {
        let weak = self.omega2.max(self.g);
        if weak > 0.0 && self.omega1 < WARN_DRIVE_RATIO * weak {
            vec![format!(
                "Omega1/max(Omega2, g) = {:.1} is below {WARN_DRIVE_RATIO}",
                self.omega1 / weak
            )]
        } else {
            Vec::new()
        }
    }
}

/// Dimensionless protocol knobs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolParams {
    pub l1: f64,
    pub l2: f64,
    /// Stored reduced to `[0, 2π)`.
    pub phi: f64,
    pub n: usize,
    pub xi: f64,
    pub alpha0: C64,
}

impl ProtocolParams {
    pub fn new(l1: f64, l2: f64, phi: f64, n: usize, xi: f64, alpha0: C64) -> Result<Self> {
        let finite = [l1, l2, phi, xi, alpha0.re, alpha0.im].iter().all(|v| v.is_finite());
        // xi = +inf is the fully dephased limit
        if !finite && !(xi == f64::INFINITY && [l1, l2, phi].iter().all(|v| v.is_finite())) {
            return Err(Error::InvalidParameter("protocol parameters must be finite".into()));
        }
        if l1 < 0.0 || l2 < 0.0 || xi < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "need l1, l2, xi >= 0, got l1={l1}, l2={l2}, xi={xi}"
            )));
        }
        Ok(Self { l1, l2, phi: phi.rem_euclid(TAU), n, xi, alpha0 })
    }

    /// `l₁ = 0.1`, `l₂ = 0.01`, `φ = 9π/2`, `α₀ = 0`, no dephasing.
    pub fn standard(n: usize) -> Self {
        Self::new(0.1, 0.01, 4.5 * PI, n, 0.0, C64::new(0.0, 0.0)).expect("valid defaults")
    }

    pub fn with_n(self, n: usize) -> Self {
        Self { n, ..self }
    }

    pub fn with_phi(self, phi: f64) -> Self {
        Self { phi: phi.rem_euclid(TAU), ..self }
    }

    pub fn with_xi(self, xi: f64) -> Self {
        Self { xi, ..self }
    }

    pub fn forward(&self) -> PulseOperator {
        PulseOperator::new(self.l1, self.l2, Kick::Forward).expect("validated")
    }

    pub fn backward(&self) -> PulseOperator {
        PulseOperator::new(self.l1, self.l2, Kick::Backward).expect("validated")
    }
}

/// Map physical rates to protocol knobs.
pub fn derive_protocol(p: &PhysicalParams, n: usize, alpha0: C64) -> Result<ProtocolParams> {
    p.validate()?;
    let eta = p.eta();
    let l1 = p.omega2 * eta / p.omega;
    let l2 = p.omega1 * eta * eta / p.omega;
    let phi = p.omega1_prime() * PI / p.omega;
    let xi = 3.0 * p.gamma * p.period() / 8.0;
    ProtocolParams::new(l1, l2, phi, n, xi, alpha0)
}

/// Which per-cycle map generates the labels of a chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainKind {
    /// Pulse pairs with both drives switched together.
    Walk,
    /// Strong drive held on, weak drive pulsed.
    Cat,
}

/// Labels `|j⟩ = Uⱼ|α₀⟩` for `j ∈ [−reach, reach]`, where `Uⱼ` is `j` forward
/// cycles for `j > 0` and `|j|` backward cycles for `j < 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelChain {
    kind: ChainKind,
    l1: f64,
    l2: f64,
    labels: Vec<CoherentLabel>,
    reach: usize,
}

impl LabelChain {
    pub fn walk(alpha0: C64, l1: f64, l2: f64, reach: usize) -> Result<Self> {
        Self::build(ChainKind::Walk, alpha0, l1, l2, reach)
    }

    pub fn cat(beta0: C64, l1: f64, l2: f64, reach: usize) -> Result<Self> {
        Self::build(ChainKind::Cat, beta0, l1, l2, reach)
    }

    pub fn for_walk(pp: &ProtocolParams) -> Self {
        Self::walk(pp.alpha0, pp.l1, pp.l2, pp.n).expect("validated")
    }

    fn build(kind: ChainKind, origin: C64, l1: f64, l2: f64, reach: usize) -> Result<Self> {
        PulseOperator::new(l1, l2, Kick::Forward)?;
        let mut chain = Self {
            kind,
            l1,
            l2,
            labels: vec![CoherentLabel::from_amplitude(origin)],
            reach: 0,
        };
        chain.extend_to(reach);
        Ok(chain)
    }

    fn step(&self, label: CoherentLabel, kick: Kick) -> CoherentLabel {
        match self.kind {
            ChainKind::Walk => PulseOperator::new(self.l1, self.l2, kick).expect("validated").apply(label),
            ChainKind::Cat => CatCycle::new(self.l1, self.l2, kick).expect("validated").apply(label),
        }
    }

    /// Grow the chain so that it covers `[−reach, reach]`.
    pub fn extend_to(&mut self, reach: usize) {
        while self.reach < reach {
            let lo = self.step(self.labels[0], Kick::Backward);
            let hi = self.step(*self.labels.last().expect("non-empty"), Kick::Forward);
            self.labels.insert(0, lo);
            self.labels.push(hi);
            self.reach += 1;
        }
    }

    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    pub fn reach(&self) -> usize {
        self.reach
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    pub fn indices(&self) -> RangeInclusive<i32> {
        -(self.reach as i32)..=self.reach as i32
    }

    pub fn get(&self, j: i32) -> Option<CoherentLabel> {
        let idx = j + self.reach as i32;
        if idx < 0 {
            return None;
        }
        self.labels.get(idx as usize).copied()
    }

    /// Label at index `j`; panics outside `[−reach, reach]`.
    pub fn label(&self, j: i32) -> CoherentLabel {
        self.get(j).unwrap_or_else(|| panic!("label index {j} outside chain reach {}", self.reach))
    }

    pub fn labels(&self) -> &[CoherentLabel] {
        &self.labels
    }
}

/// `2⁻ⁿ C(n, m)` for `m = 0..=n`, built row by row.
pub fn binomial_weights(n: usize) -> Vec<f64> {
    let mut row = vec![1.0];
    for _ in 0..n {
        let mut next = vec![0.0; row.len() + 1];
        for (m, w) in row.iter().enumerate() {
            next[m] += 0.5 * w;
            next[m + 1] += 0.5 * w;
        }
        row = next;
    }
    row
}

/// Unnormalized walk coefficients `(j, 2⁻ⁿ C(n,m) e^{ijφ})` with `j = n − 2m`,
/// ordered by `m`.
pub fn walk_coefficients(pp: &ProtocolParams) -> Vec<(i32, C64)> {
    binomial_weights(pp.n)
        .into_iter()
        .enumerate()
        .map(|(m, w)| {
            let j = pp.n as i32 - 2 * m as i32;
            (j, C64::from_polar(w, j as f64 * pp.phi))
        })
        .collect()
}

/// The resonator state after `n` pulse pairs, each heralded by `|g⟩`,
/// together with the probability of that record.
pub fn walk_state_with_probability(pp: &ProtocolParams) -> Result<(SuperposedState, f64)> {
    let chain = LabelChain::for_walk(pp);
    let raw = SuperposedState::new(
        walk_coefficients(pp)
            .into_iter()
            .map(|(j, c)| Component::new(c, chain.label(j)))
            .collect(),
    );
    let probability = raw.norm_sqr();
    Ok((raw.normalize()?, probability))
}

pub fn walk_state(pp: &ProtocolParams) -> Result<SuperposedState> {
    walk_state_with_probability(pp).map(|(s, _)| s)
}

/// Qubit measurement result in the bare basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QubitOutcome {
    Ground,
    Excited,
}

/// `φ′ = 2nφ`, reduced to `[0, 2π)`.
pub fn cat_phase(pp: &ProtocolParams) -> f64 {
    (2.0 * pp.n as f64 * pp.phi).rem_euclid(TAU)
}

/// Unnormalized cat state heralded by `outcome` at the end of `n` cycles,
/// plus the outcome probability.
///
/// The backward branch (`|+⟩`) carries `e^{−iφ′}` and the forward branch
/// (`|−⟩`) carries `±e^{iφ′}`, `+` for a ground detection and `−` for an
/// excited one.
pub fn cat_state_heralded(pp: &ProtocolParams, outcome: QubitOutcome) -> Result<(SuperposedState, f64)> {
    if pp.n == 0 {
        return Err(Error::InvalidParameter("cat protocol needs n >= 1".into()));
    }
    let chain = LabelChain::cat(pp.alpha0, pp.l1, pp.l2, pp.n)?;
    let n = pp.n as i32;
    let phase = cat_phase(pp);
    let sign = match outcome {
        QubitOutcome::Ground => 1.0,
        QubitOutcome::Excited => -1.0,
    };
    let raw = SuperposedState::new(vec![
        Component::new(C64::from_polar(0.5, -phase), chain.label(-n)),
        Component::new(C64::from_polar(0.5 * sign, phase), chain.label(n)),
    ]);
    let probability = raw.norm_sqr();
    Ok((raw.normalize()?, probability))
}

/// `K(e^{−iφ′}e^{iθ′₋ₙ}|β₋ₙ⟩ − e^{iφ′}e^{iθ′ₙ}|βₙ⟩)`, the two-component
/// superposition with the relative minus sign.
///
/// The Fock-space oracle identifies this combination as the state heralded by
/// an excited-state detection; [`cat_state_heralded`] exposes both outcomes.
pub fn cat_state(pp: &ProtocolParams) -> Result<SuperposedState> {
    cat_state_heralded(pp, QubitOutcome::Excited).map(|(s, _)| s)
}

/// Joint qubit ⊗ resonator state `|+⟩⊗plus + |−⟩⊗minus` (unnormalized parts).
#[derive(Clone, Debug, PartialEq)]
pub struct JointState {
    pub plus: SuperposedState,
    pub minus: SuperposedState,
}

impl JointState {
    /// `|g⟩ ⊗ resonator` with `|g⟩ = (|+⟩ − |−⟩)/√2`.
    pub fn ground(resonator: &SuperposedState) -> Self {
        let k = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            plus: resonator.clone().scaled(C64::new(k, 0.0)),
            minus: resonator.clone().scaled(C64::new(-k, 0.0)),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.plus.norm_sqr() + self.minus.norm_sqr()
    }

    /// One pulse pair.
    pub fn cycle(self, pp: &ProtocolParams) -> Self {
        let back = pp.backward();
        let fwd = pp.forward();
        Self {
            plus: self
                .plus
                .map_labels(|l| back.apply(l))
                .scaled(C64::from_polar(1.0, -pp.phi)),
            minus: self
                .minus
                .map_labels(|l| fwd.apply(l))
                .scaled(C64::from_polar(1.0, pp.phi)),
        }
    }
}

/// Prepare `|g⟩ ⊗ resonator` and run one pulse pair.
pub fn single_cycle(pp: &ProtocolParams, resonator: &SuperposedState) -> JointState {
    JointState::ground(resonator).cycle(pp)
}

/// Projected resonator state after a qubit measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementOutcome {
    pub outcome: QubitOutcome,
    pub projected: SuperposedState,
    pub probability: f64,
}

/// Project the qubit onto `outcome` and renormalize the resonator.
pub fn project_qubit(joint: &JointState, outcome: QubitOutcome) -> Result<MeasurementOutcome> {
    let k = std::f64::consts::FRAC_1_SQRT_2;
    // ⟨g|+⟩ = 1/√2, ⟨g|−⟩ = −1/√2, ⟨e|±⟩ = 1/√2
    let minus_weight = match outcome {
        QubitOutcome::Ground => -k,
        QubitOutcome::Excited => k,
    };
    let raw = joint
        .plus
        .clone()
        .scaled(C64::new(k, 0.0))
        .superpose(joint.minus.clone().scaled(C64::new(minus_weight, 0.0)))
        .coalesce(1e-12);
    let probability = raw.norm_sqr() / joint.norm_sqr();
    let projected = raw.normalize()?;
    Ok(MeasurementOutcome { outcome, projected, probability })
}

/// Run `n` cycles with a projection after each, all heralded by `|g⟩`.
/// Returns the final state and the probability of the whole record.
pub fn conditioned_walk(pp: &ProtocolParams) -> Result<(SuperposedState, f64)> {
    let mut state = SuperposedState::coherent(CoherentLabel::from_amplitude(pp.alpha0));
    let mut record = 1.0;
    for _ in 0..pp.n {
        let out = project_qubit(&single_cycle(pp, &state), QubitOutcome::Ground)?;
        record *= out.probability;
        state = out.projected;
    }
    Ok((state, record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn czero() -> C64 {
        C64::new(0.0, 0.0)
    }

    #[test]
    fn derive_maps_to_standard_knobs() {
        // eta = 1e-3, Omega2 eta / omega = 0.1, Omega1 eta^2 / omega = 0.01
        let omega = TAU * 1e9;
        let eta = 1e-3;
        let p = PhysicalParams {
            omega,
            g: eta * omega,
            omega1: 0.01 * omega / (eta * eta),
            omega2: 0.1 * omega / eta,
            gamma: 0.0,
        };
        let pp = derive_protocol(&p, 3, czero()).unwrap();
        assert_abs_diff_eq!(pp.l1, 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(pp.l2, 0.01, epsilon = 1e-12);
        assert_eq!(pp.xi, 0.0);
        assert!(p.regime_warnings().is_empty());
    }

    #[test]
    fn derive_decoupled_qubit() {
        let p = PhysicalParams { omega: 1.0, g: 0.0, omega1: 2.25, omega2: 0.1, gamma: 0.0 };
        let pp = derive_protocol(&p, 1, czero()).unwrap();
        assert_eq!(pp.l1, 0.0);
        assert_eq!(pp.l2, 0.0);
        assert_abs_diff_eq!(pp.phi, 2.25 * PI - TAU, epsilon = 1e-12);
    }

    #[test]
    fn derive_rejects_bad_regimes() {
        let strong = PhysicalParams { omega: 1.0, g: 0.1, omega1: 100.0, omega2: 1.0, gamma: 0.0 };
        assert!(matches!(derive_protocol(&strong, 1, czero()), Err(Error::RegimeViolation(_))));
        let weak_drive = PhysicalParams { omega: 1.0, g: 0.01, omega1: 5.0, omega2: 1.0, gamma: 0.0 };
        assert!(matches!(derive_protocol(&weak_drive, 1, czero()), Err(Error::RegimeViolation(_))));
        let marginal = PhysicalParams { omega: 1.0, g: 0.01, omega1: 20.0, omega2: 1.0, gamma: 0.0 };
        assert!(derive_protocol(&marginal, 1, czero()).is_ok());
        assert_eq!(marginal.regime_warnings().len(), 1);
    }

    #[test]
    fn dephasing_exponent_from_decay_rate() {
        let p = PhysicalParams { omega: 2.0, g: 0.01, omega1: 200.0, omega2: 1.0, gamma: 0.3 };
        let pp = derive_protocol(&p, 1, czero()).unwrap();
        assert_abs_diff_eq!(pp.xi, 3.0 * 0.3 * (TAU / 2.0) / 8.0, epsilon = 1e-15);
    }

    #[test]
    fn phi_is_reduced() {
        let pp = ProtocolParams::standard(1);
        assert_abs_diff_eq!(pp.phi, 0.5 * PI, epsilon = 1e-12);
    }

    #[test]
    fn walk_zero_steps_is_initial_state() {
        let pp = ProtocolParams::standard(0);
        let s = walk_state(&pp).unwrap();
        assert_eq!(s.len(), 1);
        assert_abs_diff_eq!(s.components()[0].coefficient.re, 1.0);
        assert_eq!(s.components()[0].label, CoherentLabel::vacuum());
    }

    #[test]
    fn walk_one_step_two_mirror_components() {
        let pp = ProtocolParams::standard(1);
        let s = walk_state(&pp).unwrap();
        assert_eq!(s.len(), 2);
        let a = s.components()[0];
        let b = s.components()[1];
        assert_abs_diff_eq!(a.label.amplitude.re, 0.00314107591, epsilon = 1e-10);
        assert_abs_diff_eq!(a.label.amplitude.im, 0.199950656, epsilon = 1e-9);
        assert_abs_diff_eq!((b.label.amplitude - a.label.amplitude.conj()).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a.coefficient.norm(), b.coefficient.norm(), epsilon = 1e-15);
    }

    #[test]
    fn raw_coefficients_are_binomial() {
        let pp = ProtocolParams::standard(7);
        let raw = walk_coefficients(&pp);
        let c0 = raw[0].1.norm();
        let expected = [1.0, 7.0, 21.0, 35.0, 35.0, 21.0, 7.0, 1.0];
        for ((_, c), e) in raw.iter().zip(expected) {
            assert_abs_diff_eq!(c.norm() / c0, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn cat_zero_kick_limit() {
        let base = ProtocolParams::new(0.0, 0.0, 0.0, 1, 0.0, czero()).unwrap();
        // phi' = 2 n phi = pi/2 needs phi = pi/4 for n = 1
        let ok = cat_state(&base.with_phi(PI / 4.0)).unwrap();
        assert_abs_diff_eq!(ok.norm_sqr(), 1.0, epsilon = 1e-12);
        assert!(ok.labels().all(|l| l.amplitude.norm() == 0.0));
        assert!(matches!(cat_state(&base), Err(Error::DegenerateState { .. })));
        assert!(cat_state(&base.with_n(0)).is_err());
    }

    #[test]
    fn cat_labels_follow_printed_recursion() {
        let pp = ProtocolParams::standard(10);
        let chain = LabelChain::cat(czero(), pp.l1, pp.l2, 10).unwrap();
        let mut beta = czero();
        let i = C64::new(0.0, 1.0);
        for j in 1..=10 {
            beta = (beta + i * pp.l1) * (-2.0 * i * pp.l2 * PI).exp() + i * pp.l1 * (-i * pp.l2 * PI).exp();
            assert_abs_diff_eq!((chain.label(j).amplitude - beta).norm(), 0.0, epsilon = 1e-13);
        }
        let s = cat_state(&pp).unwrap();
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cat_outcome_probabilities_complete() {
        let pp = ProtocolParams::standard(4).with_phi(0.3);
        let (_, pg) = cat_state_heralded(&pp, QubitOutcome::Ground).unwrap();
        let (_, pe) = cat_state_heralded(&pp, QubitOutcome::Excited).unwrap();
        assert_abs_diff_eq!(pg + pe, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_kick_cycle_branches_differ_by_phase() {
        let pp = ProtocolParams::new(0.0, 0.0, 0.7, 1, 0.0, czero()).unwrap();
        let j = single_cycle(&pp, &SuperposedState::coherent(CoherentLabel::vacuum()));
        let p = j.plus.components()[0];
        let m = j.minus.components()[0];
        assert_eq!(p.label.amplitude, m.label.amplitude);
        let ratio = p.coefficient / m.coefficient;
        assert_abs_diff_eq!(ratio.arg(), reduce(-1.4 + PI), epsilon = 1e-12);
    }

    fn reduce(x: f64) -> f64 {
        crate::coherent::reduce_phase(x)
    }

    #[test]
    fn projection_probabilities_sum_to_one() {
        let pp = ProtocolParams::standard(1);
        let j = single_cycle(&pp, &SuperposedState::coherent(CoherentLabel::vacuum()));
        let g = project_qubit(&j, QubitOutcome::Ground).unwrap();
        let e = project_qubit(&j, QubitOutcome::Excited).unwrap();
        assert_abs_diff_eq!(g.probability + e.probability, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g.projected.fidelity(&walk_state(&pp).unwrap()), 1.0, epsilon = 1e-12);
        let c = g.projected.components();
        assert_eq!(c.len(), 2);
        assert_abs_diff_eq!(c[0].coefficient.norm(), c[1].coefficient.norm(), epsilon = 1e-12);
    }

    #[test]
    fn cycle_form_matches_closed_form() {
        for n in 0..=6 {
            let pp = ProtocolParams::standard(n);
            let (closed, p_closed) = walk_state_with_probability(&pp).unwrap();
            let (cycled, p_cycled) = conditioned_walk(&pp).unwrap();
            assert_eq!(cycled.len(), n + 1);
            assert!(closed.fidelity(&cycled) >= 1.0 - 1e-10, "n = {n}");
            assert_abs_diff_eq!(p_closed, p_cycled, epsilon = 1e-12);
        }
    }
}
