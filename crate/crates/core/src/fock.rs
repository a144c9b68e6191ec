//! Truncated Fock-space integrator for qubit ⊗ resonator.
//!
//! Time is in units of `1/ω`. The joint vector is qubit-major with the qubit
//! basis ordered `(|e⟩, |g⟩)`: amplitude `q·N + k` belongs to qubit state `q`
//! and phonon number `k`. Segment propagators are exact matrix exponentials
//! built from a Hermitian eigendecomposition.

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coherent::{CoherentLabel, Kick, SuperposedState};
use crate::error::{Error, Result};
use crate::protocol::{self, PhysicalParams, ProtocolParams, QubitOutcome};

pub const DEFAULT_CUTOFF: usize = 80;
/// Number of top Fock levels watched by the leakage gate.
pub const LEAKAGE_LEVELS: usize = 5;
pub const LEAKAGE_TOLERANCE: f64 = 1e-8;
pub const NORM_TOLERANCE: f64 = 1e-10;
/// Outcomes less likely than this cannot be renormalized.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-14;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Which Hamiltonian drives the resonator while the pulses are on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianForm {
    /// `a†a + Ω′₁σₓ + i l₁ σₓ(a† − a) − l₂ σₓ a†a`.
    Effective,
    /// `Σ_λ P_λ ⊗ [λΩ′₁ + (1 − λl₂) A_λ†A_λ]` with `A_λ = a + iλl₁`.
    Dressed,
    /// `a†a + Ω₁σₓ + iΩ₂(σ⁺ − σ⁻) + η|e⟩⟨e|(a + a†)`, no strong-drive expansion.
    Full,
}

/// Sign of the phonon quadrature in the coupling.
///
/// `Literal` keeps the kick term `+i l₁ σₓ(a† − a)` as written; `Reflected`
/// uses `a → −a`. Only `Reflected` reproduces the closed-form recursion
/// `α ↦ (α + il₁)e^{−il₂π} + il₁` on the `|−⟩` branch; `Literal` yields its
/// mirror image `x → −x`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Reflected,
    Literal,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Reflected => -1.0,
            Orientation::Literal => 1.0,
        }
    }
}

/// Dimensionless model parameters (`ω = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleModel {
    pub l1: f64,
    pub l2: f64,
    /// `Ω′₁/ω`; enters the effective forms only through `φ = πΩ′₁`.
    pub omega1_prime: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub eta: f64,
    pub form: HamiltonianForm,
    pub orientation: Orientation,
}

impl OracleModel {
    pub fn from_physical(p: &PhysicalParams, form: HamiltonianForm, orientation: Orientation) -> Result<Self> {
        p.validate()?;
        let eta = p.eta();
        Ok(Self {
            l1: p.omega2 * eta / p.omega,
            l2: p.omega1 * eta * eta / p.omega,
            omega1_prime: p.omega1_prime() / p.omega,
            omega1: p.omega1 / p.omega,
            omega2: p.omega2 / p.omega,
            eta,
            form,
            orientation,
        })
    }

    /// Physical values consistent with `(l₁, l₂)` at coupling `η`, with `ω = 1`.
    ///
    /// The effective forms depend on `Ω′₁` only through `e^{−iπΩ′₁σₓ}`, so they
    /// take `Ω′₁ = φ/π` from `pp` directly. The full form needs the actual
    /// drive `Ω₁ = l₂/η²`, which fixes `φ`; see [`OracleModel::phi`].
    pub fn from_protocol(pp: &ProtocolParams, eta: f64, form: HamiltonianForm, orientation: Orientation) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(Error::InvalidParameter(format!("oracle needs eta > 0, got {eta}")));
        }
        let omega1 = pp.l2 / (eta * eta);
        let omega2 = pp.l1 / eta;
        let omega1_prime = match form {
            HamiltonianForm::Full => omega1 * (1.0 - 0.5 * eta * eta),
            _ => pp.phi / PI,
        };
        Ok(Self { l1: pp.l1, l2: pp.l2, omega1_prime, omega1, omega2, eta, form, orientation })
    }

    /// `φ = πΩ′₁`, reduced to `[0, 2π)`.
    pub fn phi(&self) -> f64 {
        (PI * self.omega1_prime).rem_euclid(2.0 * PI)
    }

    /// Physical rates in units of `ω`.
    pub fn physical(&self) -> PhysicalParams {
        PhysicalParams { omega: 1.0, g: self.eta, omega1: self.omega1, omega2: self.omega2, gamma: 0.0 }
    }
}

/// Which drives are switched on during a segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Drives {
    pub omega1_on: bool,
    pub omega2_on: bool,
}

impl Drives {
    pub const OFF: Drives = Drives { omega1_on: false, omega2_on: false };
    pub const BOTH: Drives = Drives { omega1_on: true, omega2_on: true };
    pub const STRONG: Drives = Drives { omega1_on: true, omega2_on: false };
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    /// In units of `1/ω`.
    pub duration: f64,
    pub drives: Drives,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pub segments: Vec<Segment>,
}

impl PulseSchedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let s = Self { segments };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self.segments.iter().find(|s| !s.duration.is_finite() || s.duration < 0.0) {
            Some(s) => Err(Error::InvalidParameter(format!("segment duration {} is not a finite non-negative time", s.duration))),
            None => Ok(()),
        }
    }

    /// `n` pulse pairs: both drives on for `π/ω`, then both off for `π/ω`.
    pub fn pulse_pairs(n: usize) -> Self {
        let pair = [Segment { duration: PI, drives: Drives::BOTH }, Segment { duration: PI, drives: Drives::OFF }];
        Self { segments: pair.iter().copied().cycle().take(2 * n).collect() }
    }

    /// `n` cycles with the strong drive held on and the weak drive on for the
    /// first half of each period.
    pub fn cat_cycles(n: usize) -> Self {
        let pair = [Segment { duration: PI, drives: Drives::BOTH }, Segment { duration: PI, drives: Drives::STRONG }];
        Self { segments: pair.iter().copied().cycle().take(2 * n).collect() }
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }
}

/// Joint qubit ⊗ resonator amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct FockStateVector {
    cutoff: usize,
    amplitudes: DVector<C64>,
}

impl FockStateVector {
    pub fn new(cutoff: usize, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != 2 * cutoff {
            return Err(Error::InvalidParameter(format!(
                "joint vector has {} amplitudes, expected 2 x {cutoff}",
                amplitudes.len()
            )));
        }
        Ok(Self { cutoff, amplitudes })
    }

    /// `|q⟩ ⊗ resonator`, where `qubit` gives the `(e, g)` amplitudes.
    pub fn product(qubit: [C64; 2], resonator: &DVector<C64>) -> Self {
        let cutoff = resonator.len();
        let mut amplitudes = DVector::zeros(2 * cutoff);
        for (q, c) in qubit.iter().enumerate() {
            amplitudes.rows_mut(q * cutoff, cutoff).copy_from(&(resonator * *c));
        }
        Self { cutoff, amplitudes }
    }

    /// `|g⟩ ⊗ resonator`.
    pub fn ground(resonator: &DVector<C64>) -> Self {
        Self::product([ZERO, ONE], resonator)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Probability in the top [`LEAKAGE_LEVELS`] phonon levels.
    pub fn leakage(&self) -> f64 {
        let n = self.cutoff;
        let top = n.saturating_sub(LEAKAGE_LEVELS);
        (0..2)
            .flat_map(|q| (top..n).map(move |k| q * n + k))
            .map(|i| self.amplitudes[i].norm_sqr())
            .sum()
    }

    pub fn check_leakage(&self) -> Result<()> {
        let leakage = self.leakage();
        if leakage >= LEAKAGE_TOLERANCE {
            return Err(Error::CutoffTooSmall { cutoff: self.cutoff, leakage });
        }
        Ok(())
    }

    /// Resonator block for qubit state `q` (0 = e, 1 = g), unnormalized.
    pub fn block(&self, q: usize) -> DVector<C64> {
        self.amplitudes.rows(q * self.cutoff, self.cutoff).into_owned()
    }
}

fn annihilation(n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |r, c| if c == r + 1 { C64::new((c as f64).sqrt(), 0.0) } else { ZERO })
}

fn number(n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |r, c| if r == c { C64::new(r as f64, 0.0) } else { ZERO })
}

/// `q ⊗ m` in qubit-major order.
fn kron(q: [[C64; 2]; 2], m: &DMatrix<C64>) -> DMatrix<C64> {
    let n = m.nrows();
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    for (r, row) in q.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            if v != ZERO {
                out.view_mut((r * n, c * n), (n, n)).copy_from(&(m * v));
            }
        }
    }
    out
}

const SIGMA_X: [[C64; 2]; 2] = [[ZERO, ONE], [ONE, ZERO]];
const IDENTITY: [[C64; 2]; 2] = [[ONE, ZERO], [ZERO, ONE]];
/// `|e⟩⟨e|`
const PROJ_E: [[C64; 2]; 2] = [[ONE, ZERO], [ZERO, ZERO]];
/// `σ⁺ − σ⁻ = |e⟩⟨g| − |g⟩⟨e|`
const SIGMA_PM: [[C64; 2]; 2] = [[ZERO, ONE], [C64 { re: -1.0, im: 0.0 }, ZERO]];

fn dressed_projector(lambda: f64) -> [[C64; 2]; 2] {
    let h = C64::new(0.5, 0.0);
    let o = C64::new(0.5 * lambda, 0.0);
    [[h, o], [o, h]]
}

/// Segment Hamiltonian for the given drive configuration.
pub fn build_heff(model: &OracleModel, cutoff: usize, drives: Drives) -> Result<DMatrix<C64>> {
    if cutoff < 2 {
        return Err(Error::InvalidParameter("Fock cutoff must be at least 2".into()));
    }
    let a = annihilation(cutoff);
    let ad = a.adjoint();
    let num = number(cutoff);
    let id = DMatrix::<C64>::identity(cutoff, cutoff);
    let s = model.orientation.sign();
    let mut h = kron(IDENTITY, &num);
    match model.form {
        HamiltonianForm::Full => {
            h += kron(PROJ_E, &((&a + &ad) * C64::new(s * model.eta, 0.0)));
            if drives.omega1_on {
                h += kron(SIGMA_X, &(&id * C64::new(model.omega1, 0.0)));
            }
            if drives.omega2_on {
                h += kron(SIGMA_PM, &(&id * (I * model.omega2)));
            }
        }
        HamiltonianForm::Effective | HamiltonianForm::Dressed if drives.omega2_on && !drives.omega1_on => {
            return Err(Error::InvalidParameter(
                "the effective Hamiltonian needs the strong drive on whenever the weak drive is on".into(),
            ));
        }
        HamiltonianForm::Effective => {
            if drives.omega1_on {
                h += kron(SIGMA_X, &(&id * C64::new(model.omega1_prime, 0.0)));
                h -= kron(SIGMA_X, &(&num * C64::new(model.l2, 0.0)));
            }
            if drives.omega2_on {
                h += kron(SIGMA_X, &((&ad - &a) * (I * (s * model.l1))));
            }
        }
        HamiltonianForm::Dressed => {
            if drives.omega1_on {
                h = DMatrix::zeros(2 * cutoff, 2 * cutoff);
                let kick = if drives.omega2_on { model.l1 } else { 0.0 };
                for lambda in [1.0, -1.0] {
                    let shifted = &a + &id * (I * (s * lambda * kick));
                    let block = &id * C64::new(lambda * model.omega1_prime, 0.0)
                        + shifted.adjoint() * &shifted * C64::new(1.0 - lambda * model.l2, 0.0);
                    h += kron(dressed_projector(lambda), &block);
                }
            }
        }
    }
    Ok(h)
}

/// `e^{−iHt}` for Hermitian `H`.
#[derive(Clone, Debug)]
struct Propagator {
    eigenvalues: Vec<f64>,
    vectors: DMatrix<C64>,
}

impl Propagator {
    fn new(h: DMatrix<C64>) -> Self {
        let e = h.symmetric_eigen();
        Self { eigenvalues: e.eigenvalues.iter().copied().collect(), vectors: e.eigenvectors }
    }

    fn apply(&self, t: f64, v: &DVector<C64>) -> DVector<C64> {
        let mut c = self.vectors.adjoint() * v;
        for (ci, &l) in c.iter_mut().zip(&self.eigenvalues) {
            *ci *= C64::from_polar(1.0, -l * t);
        }
        &self.vectors * c
    }
}

/// Reusable integrator for one model and cutoff.
pub struct FockIntegrator {
    model: OracleModel,
    cutoff: usize,
    cache: HashMap<Drives, Propagator>,
}

impl FockIntegrator {
    pub fn new(model: OracleModel, cutoff: usize) -> Self {
        Self { model, cutoff, cache: HashMap::new() }
    }

    pub fn model(&self) -> &OracleModel {
        &self.model
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    fn propagator(&mut self, drives: Drives) -> Result<&Propagator> {
        if !self.cache.contains_key(&drives) {
            let h = build_heff(&self.model, self.cutoff, drives)?;
            self.cache.insert(drives, Propagator::new(h));
        }
        Ok(&self.cache[&drives])
    }

    /// Piecewise-exact evolution; checks norm and leakage after every segment.
    pub fn evolve(&mut self, state: &FockStateVector, schedule: &PulseSchedule) -> Result<FockStateVector> {
        schedule.validate()?;
        if state.cutoff != self.cutoff {
            return Err(Error::InvalidParameter(format!(
                "state cutoff {} differs from integrator cutoff {}",
                state.cutoff, self.cutoff
            )));
        }
        let norm0 = state.norm();
        let mut v = state.amplitudes.clone();
        for seg in &schedule.segments {
            if seg.duration == 0.0 {
                continue;
            }
            v = self.propagator(seg.drives)?.apply(seg.duration, &v);
            let out = FockStateVector { cutoff: self.cutoff, amplitudes: v };
            let drift = (out.norm() - norm0).abs();
            assert!(drift <= NORM_TOLERANCE, "segment propagator lost unitarity: norm drift {drift:e}");
            out.check_leakage()?;
            v = out.amplitudes;
        }
        Ok(FockStateVector { cutoff: self.cutoff, amplitudes: v })
    }
}

/// One-shot evolution.
pub fn evolve(state: &FockStateVector, schedule: &PulseSchedule, model: &OracleModel) -> Result<FockStateVector> {
    FockIntegrator::new(*model, state.cutoff).evolve(state, schedule)
}

/// Project the qubit on `outcome`; returns the probability and the normalized
/// resonator vector.
pub fn project_and_extract(state: &FockStateVector, outcome: QubitOutcome) -> Result<(f64, DVector<C64>)> {
    let q = match outcome {
        QubitOutcome::Excited => 0,
        QubitOutcome::Ground => 1,
    };
    let block = state.block(q);
    let total = state.amplitudes.norm_squared();
    let probability = block.norm_squared() / total;
    if probability < MIN_OUTCOME_PROBABILITY {
        return Err(Error::ZeroProbabilityOutcome(probability));
    }
    let norm = block.norm();
    Ok((probability, block / C64::new(norm, 0.0)))
}

/// Coherent state `|α⟩` in a Fock basis of size `cutoff`.
pub fn coherent_vector(label: &CoherentLabel, cutoff: usize) -> Result<DVector<C64>> {
    let v = DVector::from_vec(label.fock_amplitudes(cutoff));
    let leakage = 1.0 - v.norm_squared();
    if leakage > LEAKAGE_TOLERANCE {
        return Err(Error::CutoffTooSmall { cutoff, leakage });
    }
    Ok(v)
}

/// Fock expansion of a superposition; fails if more than
/// [`LEAKAGE_TOLERANCE`] of its weight lies past the cutoff.
pub fn expand(closed: &SuperposedState, cutoff: usize) -> Result<DVector<C64>> {
    let mut v = DVector::zeros(cutoff);
    for c in closed.components() {
        v += DVector::from_vec(c.label.fock_amplitudes(cutoff)) * c.coefficient;
    }
    let exact = closed.norm_sqr();
    let leakage = (exact - v.norm_squared()) / exact;
    if leakage > LEAKAGE_TOLERANCE {
        return Err(Error::CutoffTooSmall { cutoff, leakage });
    }
    Ok(v)
}

/// `|⟨closed|fock⟩|²` for normalized arguments.
pub fn fidelity(fock: &DVector<C64>, closed: &SuperposedState) -> Result<f64> {
    let v = expand(closed, fock.len())?;
    Ok(v.dotc(fock).norm_sqr() / (v.norm_squared() * fock.norm_squared()))
}

/// `D(β) = exp(βa† − β̄a)` on a truncated basis.
pub fn displacement_matrix(beta: C64, cutoff: usize) -> DMatrix<C64> {
    let a = annihilation(cutoff);
    // D = exp(−iH) with H = i(βa† − β̄a) Hermitian
    let h = (a.adjoint() * beta - &a * beta.conj()) * I;
    let e = h.symmetric_eigen();
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(|l| C64::from_polar(1.0, -l)));
    &e.eigenvectors * d * e.eigenvectors.adjoint()
}

/// `e^{−iθa†a}`.
pub fn rotation_matrix(theta: f64, cutoff: usize) -> DMatrix<C64> {
    DMatrix::from_fn(cutoff, cutoff, |r, c| if r == c { C64::from_polar(1.0, -theta * r as f64) } else { ZERO })
}

/// Truncated `Ô(±l₁, ±l₂) = D(±il₁) e^{∓il₂π a†a} D(±il₁)`.
pub fn pulse_operator_matrix(l1: f64, l2: f64, kick: Kick, cutoff: usize) -> DMatrix<C64> {
    let s = kick.sign();
    let d = displacement_matrix(C64::new(0.0, s * l1), cutoff);
    &d * rotation_matrix(s * l2 * PI, cutoff) * &d
}

/// Largest entry of `[Ô(l₁,l₂), Ô(−l₁,−l₂)]` outside the top `excluded` levels.
pub fn commutator_defect(l1: f64, l2: f64, cutoff: usize, excluded: usize) -> f64 {
    let f = pulse_operator_matrix(l1, l2, Kick::Forward, cutoff);
    let b = pulse_operator_matrix(l1, l2, Kick::Backward, cutoff);
    let c = &f * &b - &b * &f;
    let keep = cutoff.saturating_sub(excluded);
    c.view((0, 0), (keep, keep)).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Oracle settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub eta: f64,
    pub cutoff: usize,
    pub form: HamiltonianForm,
    pub orientation: Orientation,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { eta: 1e-2, cutoff: DEFAULT_CUTOFF, form: HamiltonianForm::Effective, orientation: Orientation::Reflected }
    }
}

/// Outcome of a measurement-conditioned walk in Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkOracleRun {
    pub model: OracleModel,
    /// Normalized resonator state after the last ground detection.
    pub resonator: DVector<C64>,
    pub step_probabilities: Vec<f64>,
    pub record_probability: f64,
    /// Against the closed form at the model's `φ`.
    pub fidelity: f64,
    pub closed_record_probability: f64,
}

/// `pp.n` pulse pairs from `|g⟩|α₀⟩`, each followed by a ground detection and
/// a fresh `|g⟩` preparation.
pub fn walk_oracle(pp: &ProtocolParams, cfg: &OracleConfig) -> Result<WalkOracleRun> {
    let model = OracleModel::from_protocol(pp, cfg.eta, cfg.form, cfg.orientation)?;
    let mut integ = FockIntegrator::new(model, cfg.cutoff);
    let mut osc = coherent_vector(&CoherentLabel::from_amplitude(pp.alpha0), cfg.cutoff)?;
    let cycle = PulseSchedule::pulse_pairs(1);
    let mut steps = Vec::with_capacity(pp.n);
    for _ in 0..pp.n {
        let out = integ.evolve(&FockStateVector::ground(&osc), &cycle)?;
        let (p, next) = project_and_extract(&out, QubitOutcome::Ground)?;
        steps.push(p);
        osc = next;
    }
    let closed_pp = pp.with_phi(model.phi());
    let (closed, closed_record_probability) = protocol::walk_state_with_probability(&closed_pp)?;
    let fidelity = fidelity(&osc, &closed)?;
    Ok(WalkOracleRun {
        model,
        record_probability: steps.iter().product(),
        step_probabilities: steps,
        resonator: osc,
        fidelity,
        closed_record_probability,
    })
}

/// Cat protocol in Fock space: both heralded outcomes against the closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct CatOracleRun {
    pub model: OracleModel,
    pub ground_probability: f64,
    pub ground_fidelity: f64,
    pub excited_probability: f64,
    pub excited_fidelity: f64,
}

pub fn cat_oracle(pp: &ProtocolParams, cfg: &OracleConfig) -> Result<CatOracleRun> {
    let model = OracleModel::from_protocol(pp, cfg.eta, cfg.form, cfg.orientation)?;
    let osc = coherent_vector(&CoherentLabel::from_amplitude(pp.alpha0), cfg.cutoff)?;
    let out = evolve(&FockStateVector::ground(&osc), &PulseSchedule::cat_cycles(pp.n), &model)?;
    let closed_pp = pp.with_phi(model.phi());
    let mut result = CatOracleRun {
        model,
        ground_probability: 0.0,
        ground_fidelity: 0.0,
        excited_probability: 0.0,
        excited_fidelity: 0.0,
    };
    for outcome in [QubitOutcome::Ground, QubitOutcome::Excited] {
        let (p, v) = project_and_extract(&out, outcome)?;
        let f = fidelity(&v, &protocol::cat_state_heralded(&closed_pp, outcome)?.0)?;
        match outcome {
            QubitOutcome::Ground => (result.ground_probability, result.ground_fidelity) = (p, f),
            QubitOutcome::Excited => (result.excited_probability, result.excited_fidelity) = (p, f),
        }
    }
    Ok(result)
}

/// `|+⟩ = (|e⟩ + |g⟩)/√2` amplitudes.
pub const PLUS: [C64; 2] = [C64 { re: FRAC_1_SQRT_2, im: 0.0 }, C64 { re: FRAC_1_SQRT_2, im: 0.0 }];
