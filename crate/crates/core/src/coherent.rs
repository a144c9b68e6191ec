//! Closed-form algebra of coherent states.
//!
//! Conventions: `x = (a + a†)/√2`, `p = (a − a†)/(i√2)`, `ħ = 1`, free rotation
//! `e^{−iθ a†a}|α⟩ = |α e^{−iθ}⟩` and displacement
//! `D(β)|α⟩ = e^{i Im(β α*)}|α + β⟩`. A [`CoherentLabel`] is the ket
//! `e^{iφ}|α⟩`; the global phase `φ` travels with the label so that operator
//! identities can be checked one label at a time.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Reduce an angle to `(−π, π]`.
pub fn reduce_phase(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Coherent state `e^{i·phase}|amplitude⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentLabel {
    pub amplitude: C64,
    /// Always in `(−π, π]`.
    pub phase: f64,
}

impl CoherentLabel {
    pub fn new(amplitude: C64, phase: f64) -> Self {
        Self { amplitude, phase: reduce_phase(phase) }
    }

    pub fn vacuum() -> Self {
        Self::new(C64::new(0.0, 0.0), 0.0)
    }

    pub fn from_amplitude(amplitude: C64) -> Self {
        Self::new(amplitude, 0.0)
    }

    /// `D(β)` applied to this label.
    pub fn displace(self, beta: C64) -> Self {
        let gained = (beta * self.amplitude.conj()).im;
        Self::new(self.amplitude + beta, self.phase + gained)
    }

    /// `e^{−iθ a†a}` applied to this label.
    pub fn rotate(self, theta: f64) -> Self {
        Self::new(self.amplitude * C64::from_polar(1.0, -theta), self.phase)
    }

    /// Logarithm of `⟨self|other⟩`, phases included.
    pub fn ln_overlap(&self, other: &CoherentLabel) -> C64 {
        let a = self.amplitude;
        let b = other.amplitude;
        C64::new(-0.5 * a.norm_sqr() - 0.5 * b.norm_sqr(), other.phase - self.phase)
            + a.conj() * b
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &CoherentLabel) -> C64 {
        self.ln_overlap(other).exp()
    }

    /// Centre of the state in phase space, `(⟨x⟩, ⟨p⟩)`.
    pub fn phase_space_centre(&self) -> (f64, f64) {
        (
            std::f64::consts::SQRT_2 * self.amplitude.re,
            std::f64::consts::SQRT_2 * self.amplitude.im,
        )
    }

    /// Position-space wavefunction `⟨x|self⟩`.
    pub fn wavefunction(&self, x: f64) -> C64 {
        let (re, im) = (self.amplitude.re, self.amplitude.im);
        let shift = x - std::f64::consts::SQRT_2 * re;
        let arg = C64::new(
            -0.5 * shift * shift,
            std::f64::consts::SQRT_2 * im * x - re * im + self.phase,
        );
        PI.powf(-0.25) * arg.exp()
    }

    /// First `cutoff` Fock amplitudes `⟨k|self⟩ = e^{iφ} e^{−|α|²/2} αᵏ/√(k!)`.
    pub fn fock_amplitudes(&self, cutoff: usize) -> Vec<C64> {
        let mut out = Vec::with_capacity(cutoff);
        let mut c = C64::from_polar((-0.5 * self.amplitude.norm_sqr()).exp(), self.phase);
        for k in 0..cutoff {
            out.push(c);
            c = c * self.amplitude / ((k + 1) as f64).sqrt();
        }
        out
    }

    /// Fock dimension past which this label's tail is below double precision.
    pub fn fock_span(&self) -> usize {
        let r = self.amplitude.norm();
        (r * r + 12.0 * r + 40.0).ceil() as usize
    }

    /// Whether two labels describe the same ket to within `tol`.
    pub fn approx_eq(&self, other: &CoherentLabel, tol: f64) -> bool {
        (self.amplitude - other.amplitude).norm() <= tol
            && reduce_phase(self.phase - other.phase).abs() <= tol
    }
}

/// Direction of a kick: `Forward` is `Ô(l₁, l₂)`, `Backward` is `Ô(−l₁, −l₂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kick {
    Forward,
    Backward,
}

impl Kick {
    pub fn sign(self) -> f64 {
        match self {
            Kick::Forward => 1.0,
            Kick::Backward => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Kick::Forward => Kick::Backward,
            Kick::Backward => Kick::Forward,
        }
    }
}

/// The composite pulse-pair operator `Ô(±l₁, ±l₂) = D(±il₁) e^{∓il₂π a†a} D(±il₁)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseOperator {
    l1: f64,
    l2: f64,
    kick: Kick,
}

impl PulseOperator {
    pub fn new(l1: f64, l2: f64, kick: Kick) -> Result<Self> {
        if !(l1.is_finite() && l2.is_finite()) || l1 < 0.0 || l2 < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "pulse operator needs finite l1, l2 >= 0, got l1={l1}, l2={l2}"
            )));
        }
        Ok(Self { l1, l2, kick })
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    pub fn kick(&self) -> Kick {
        self.kick
    }

    /// `Ô(∓l₁, ∓l₂)`, which is both the adjoint and the inverse of `self`.
    pub fn inverse(&self) -> Self {
        Self { kick: self.kick.flipped(), ..*self }
    }

    pub fn apply(&self, state: CoherentLabel) -> CoherentLabel {
        let s = self.kick.sign();
        let kick = C64::new(0.0, s * self.l1);
        state.displace(kick).rotate(s * self.l2 * PI).displace(kick)
    }

    /// `Ôᵏ` applied `k` times.
    pub fn apply_n(&self, state: CoherentLabel, k: usize) -> CoherentLabel {
        (0..k).fold(state, |acc, _| self.apply(acc))
    }
}

/// One mechanical period of the cat protocol on one dressed branch: the strong
/// drive stays on for the whole period while the weak drive is on for its
/// first half only.
///
/// The forward branch is kicked by `+il₁` and precesses at `ω(1 + l₂)`; the
/// backward branch mirrors both signs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatCycle {
    l1: f64,
    l2: f64,
    kick: Kick,
}

impl CatCycle {
    pub fn new(l1: f64, l2: f64, kick: Kick) -> Result<Self> {
        PulseOperator::new(l1, l2, kick)?;
        Ok(Self { l1, l2, kick })
    }

    pub fn apply(&self, state: CoherentLabel) -> CoherentLabel {
        let s = self.kick.sign();
        let centre = C64::new(0.0, s * self.l1);
        let half_turn = PI * (1.0 + s * self.l2);
        state
            .displace(centre)
            .rotate(half_turn)
            .displace(-centre)
            .rotate(half_turn)
    }
}

/// One term `coefficient · label` of a superposition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Component {
    pub coefficient: C64,
    pub label: CoherentLabel,
}

impl Component {
    pub fn new(coefficient: C64, label: CoherentLabel) -> Self {
        Self { coefficient, label }
    }
}

/// Finite superposition `Σ cₘ |labelₘ⟩` of coherent states.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperposedState {
    components: Vec<Component>,
    normalized: bool,
}

/// Squared norms at or below this fraction of `Σ|cₘ|²` count as cancellation.
pub const DEGENERATE_NORM: f64 = 1e-14;

impl SuperposedState {
    pub fn new(components: Vec<Component>) -> Self {
        Self { components, normalized: false }
    }

    pub fn coherent(label: CoherentLabel) -> Self {
        Self { components: vec![Component::new(C64::new(1.0, 0.0), label)], normalized: true }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn labels(&self) -> impl Iterator<Item = &CoherentLabel> {
        self.components.iter().map(|c| &c.label)
    }

    /// `⟨self|other⟩` from pairwise coherent overlaps.
    pub fn inner(&self, other: &SuperposedState) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for a in &self.components {
            for b in &other.components {
                acc += a.coefficient.conj() * b.coefficient * a.label.overlap(&b.label);
            }
        }
        acc
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self).re
    }

    /// `|⟨self|other⟩|²` for normalized states.
    pub fn fidelity(&self, other: &SuperposedState) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Rescale by one positive real so that `⟨ψ|ψ⟩ = 1`.
    pub fn normalize(self) -> Result<Self> {
        if self.components.is_empty() {
            return Err(Error::DegenerateState { norm_sqr: 0.0, scale: 0.0 });
        }
        let norm_sqr = self.norm_sqr();
        let scale: f64 = self.components.iter().map(|c| c.coefficient.norm_sqr()).sum();
        if !(norm_sqr > DEGENERATE_NORM * scale) || !norm_sqr.is_finite() {
            return Err(Error::DegenerateState { norm_sqr, scale });
        }
        let k = norm_sqr.sqrt().recip();
        let components = self
            .components
            .into_iter()
            .map(|c| Component::new(c.coefficient * k, c.label))
            .collect();
        Ok(Self { components, normalized: true })
    }

    /// Multiply every coefficient by `factor`; clears the normalized flag
    /// unless `|factor| = 1`.
    pub fn scaled(mut self, factor: C64) -> Self {
        for c in &mut self.components {
            c.coefficient *= factor;
        }
        self.normalized = self.normalized && (factor.norm() - 1.0).abs() < 1e-15;
        self
    }

    /// Apply `f` to every label, keeping coefficients.
    pub fn map_labels(mut self, f: impl Fn(CoherentLabel) -> CoherentLabel) -> Self {
        for c in &mut self.components {
            c.label = f(c.label);
        }
        self
    }

    /// Unnormalized sum of two superpositions.
    pub fn superpose(mut self, other: SuperposedState) -> Self {
        self.components.extend(other.components);
        self.normalized = false;
        self
    }

    /// Merge components whose amplitudes agree within `tol`. The merged
    /// coefficient absorbs the phase difference between the labels.
    pub fn coalesce(self, tol: f64) -> Self {
        let normalized = self.normalized;
        let mut merged: Vec<Component> = Vec::with_capacity(self.components.len());
        for c in self.components {
            match merged
                .iter_mut()
                .find(|m| (m.label.amplitude - c.label.amplitude).norm() <= tol)
            {
                Some(m) => {
                    let rel = C64::from_polar(1.0, c.label.phase - m.label.phase);
                    m.coefficient += c.coefficient * rel;
                }
                None => merged.push(c),
            }
        }
        Self { components: merged, normalized }
    }

    /// `⟨x|ψ⟩`.
    pub fn wavefunction(&self, x: f64) -> C64 {
        self.components
            .iter()
            .map(|c| c.coefficient * c.label.wavefunction(x))
            .sum()
    }
}

/// Gram matrix `G_{ab} = ⟨label_a|label_b⟩`.
pub fn gram(labels: &[CoherentLabel]) -> DMatrix<C64> {
    DMatrix::from_fn(labels.len(), labels.len(), |a, b| labels[a].overlap(&labels[b]))
}
