//! Mixed resonator states as weighted coherent dyads, and the per-pulse
//! dephasing map.
//!
//! An ensemble stores `ρ = Σ ρⱼₖ |j⟩⟨k|` over the labels of a [`LabelChain`].
//! Because `Ô|j⟩ = |j+1⟩` and `Ô†|j⟩ = |j−1⟩` hold exactly (phases included),
//! every kick is an integer shift of the dyad indices and no floating-point
//! label matching is ever needed.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::coherent::{gram, CoherentLabel, SuperposedState};
use crate::error::{Error, Result};
use crate::protocol::{self, ChainKind, LabelChain, ProtocolParams, QubitOutcome};

/// `⟨±|ρ_q(t)|∓⟩` decays as `exp(−3Γt/4)`.
pub fn qubit_coherence_decay(t: f64, gamma: f64) -> f64 {
    (-0.75 * gamma * t).exp()
}

/// Per-pulse exponent `ξ = 3ΓT/8` for mechanical period `T`.
pub fn pulse_dephasing_exponent(gamma: f64, period: f64) -> f64 {
    0.375 * gamma * period
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Columns are the Fock amplitudes of each label, in a basis wide enough to
/// hold every label to round-off.
pub fn fock_embedding(labels: &[CoherentLabel]) -> DMatrix<C64> {
    let cutoff = labels.iter().map(|l| l.fock_span()).max().unwrap_or(1);
    let mut m = DMatrix::zeros(cutoff, labels.len());
    for (col, label) in labels.iter().enumerate() {
        for (row, c) in label.fock_amplitudes(cutoff).into_iter().enumerate() {
            // far below round-off; tiny entries underflow inside the eigensolver
            if c.norm() > 1e-60 {
                m[(row, col)] = c;
            }
        }
    }
    m
}

/// Spectrum of the operator `Σ wⱼₖ |labelⱼ⟩⟨labelₖ|`.
///
/// Closely spaced labels make the Gram matrix numerically singular, so the
/// operator is assembled in the Fock basis instead of through `G^{1/2}`.
pub fn operator_spectrum(labels: &[CoherentLabel], weights: &DMatrix<C64>) -> Vec<f64> {
    let l = fock_embedding(labels);
    let m = &l * weights * l.adjoint();
    hermitian_eigenvalues(&((&m + m.adjoint()) * C64::new(0.5, 0.0)))
}

/// Health of an ensemble.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleInvariants {
    pub hermiticity_error: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl EnsembleInvariants {
    pub fn holds(&self, tol: f64) -> bool {
        self.hermiticity_error <= tol && self.trace_error <= tol && self.min_eigenvalue >= -tol
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DyadEnsemble {
    chain: LabelChain,
    /// `weights[(j + reach, k + reach)] = ρⱼₖ`.
    weights: DMatrix<C64>,
    record_probability: f64,
}

impl DyadEnsemble {
    /// `|α₀⟩⟨α₀|` on a walk chain sized for `pp.n` steps.
    pub fn initial(pp: &ProtocolParams) -> Self {
        let chain = LabelChain::for_walk(pp);
        let size = 2 * chain.reach() + 1;
        let mut weights = DMatrix::zeros(size, size);
        weights[(chain.reach(), chain.reach())] = C64::new(1.0, 0.0);
        Self { chain, weights, record_probability: 1.0 }
    }

    /// `|ψ⟩⟨ψ|` for the pure walk state after `pp.n` steps, on the walk chain.
    pub fn from_walk(pp: &ProtocolParams) -> Result<Self> {
        let chain = LabelChain::for_walk(pp);
        let r = chain.reach() as i32;
        let coeffs = protocol::walk_coefficients(pp);
        let mut c = DVector::zeros(2 * chain.reach() + 1);
        for (j, w) in coeffs {
            c[(j + r) as usize] = w;
        }
        let mut out = Self {
            weights: &c * c.adjoint(),
            chain,
            record_probability: 1.0,
        };
        out.record_probability = out.trace().re;
        out.renormalize()?;
        Ok(out)
    }

    /// The two-component cat state with its single cross dyad multiplied by
    /// `e^{−exponent}`.
    pub fn cat_with_suppression(pp: &ProtocolParams, outcome: QubitOutcome, exponent: f64) -> Result<Self> {
        let (state, probability) = protocol::cat_state_heralded(pp, outcome)?;
        let chain = LabelChain::cat(pp.alpha0, pp.l1, pp.l2, pp.n)?;
        let r = chain.reach();
        let n = pp.n;
        let size = 2 * r + 1;
        let c = state.components();
        // components are ordered (−n, +n)
        let idx = [r - n, r + n];
        let mut weights = DMatrix::zeros(size, size);
        let damp = (-exponent).exp();
        for a in 0..2 {
            for b in 0..2 {
                let w = c[a].coefficient * c[b].coefficient.conj();
                weights[(idx[a], idx[b])] = if a == b { w } else { w * damp };
            }
        }
        let mut out = Self { chain, weights, record_probability: probability };
        out.renormalize()?;
        Ok(out)
    }

    /// Cat state heralded as in [`protocol::cat_state`], with cross dyad damped by
    /// `e^{−3nΓT/4} = e^{−2nξ}`.
    pub fn cat(pp: &ProtocolParams) -> Result<Self> {
        Self::cat_with_suppression(pp, QubitOutcome::Excited, 2.0 * pp.n as f64 * pp.xi)
    }

    pub fn chain(&self) -> &LabelChain {
        &self.chain
    }

    pub fn weights(&self) -> &DMatrix<C64> {
        &self.weights
    }

    pub fn reach(&self) -> usize {
        self.chain.reach()
    }

    /// Probability of the all-ground record that produced this ensemble.
    pub fn record_probability(&self) -> f64 {
        self.record_probability
    }

    pub fn weight(&self, j: i32, k: i32) -> C64 {
        let r = self.reach() as i32;
        let (a, b) = (j + r, k + r);
        if a < 0 || b < 0 || a as usize >= self.weights.nrows() || b as usize >= self.weights.nrows() {
            return C64::new(0.0, 0.0);
        }
        self.weights[(a as usize, b as usize)]
    }

    /// Non-zero `(j, k, ρⱼₖ)` triples in row-major order.
    pub fn dyads(&self) -> impl Iterator<Item = (i32, i32, C64)> + '_ {
        let r = self.reach() as i32;
        let size = self.weights.nrows();
        (0..size).flat_map(move |a| {
            (0..size).filter_map(move |b| {
                let w = self.weights[(a, b)];
                (w != C64::new(0.0, 0.0)).then_some((a as i32 - r, b as i32 - r, w))
            })
        })
    }

    pub fn entry_count(&self) -> usize {
        self.dyads().count()
    }

    fn gram(&self) -> DMatrix<C64> {
        gram(self.chain.labels())
    }

    /// `Tr ρ = Σ ρⱼₖ ⟨k|j⟩`.
    pub fn trace(&self) -> C64 {
        (&self.weights * self.gram()).trace()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        let m = &self.weights * self.gram();
        (&m * &m).trace().re
    }

    /// `Σ_{j≠k} |ρⱼₖ ⟨k|j⟩|`.
    pub fn cross_weight(&self) -> f64 {
        let labels = self.chain.labels();
        self.dyads()
            .filter(|(j, k, _)| j != k)
            .map(|(j, k, w)| {
                let r = self.reach() as i32;
                (w * labels[(k + r) as usize].overlap(&labels[(j + r) as usize])).norm()
            })
            .sum()
    }

    /// `|ρⱼₖ| / √(ρⱼⱼ ρₖₖ)`, independent of the overall normalization.
    pub fn coherence_ratio(&self, j: i32, k: i32) -> f64 {
        self.weight(j, k).norm() / (self.weight(j, j).re * self.weight(k, k).re).sqrt()
    }

    pub fn spectrum(&self) -> Vec<f64> {
        operator_spectrum(self.chain.labels(), &self.weights)
    }

    pub fn invariants(&self) -> EnsembleInvariants {
        let herm = (&self.weights - self.weights.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let scale = self.weights.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        let tr = self.trace();
        EnsembleInvariants {
            hermiticity_error: herm / scale,
            trace_error: (tr - C64::new(1.0, 0.0)).norm(),
            min_eigenvalue: self.spectrum().first().copied().unwrap_or(0.0),
        }
    }

    fn renormalize(&mut self) -> Result<()> {
        let tr = self.trace().re;
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::DegenerateState { norm_sqr: tr, scale: 1.0 });
        }
        self.weights /= C64::new(tr, 0.0);
        Ok(())
    }

    fn support_reach(&self) -> usize {
        self.dyads().map(|(j, k, _)| j.unsigned_abs().max(k.unsigned_abs()) as usize).max().unwrap_or(0)
    }

    fn resized(&self, reach: usize) -> DMatrix<C64> {
        let old = self.reach();
        let size = 2 * reach + 1;
        let mut w = DMatrix::zeros(size, size);
        let off = reach - old;
        w.view_mut((off, off), (2 * old + 1, 2 * old + 1)).copy_from(&self.weights);
        w
    }

    /// One pulse pair with dephasing `pp.xi`, followed by the ground projection
    /// and renormalization to unit trace.
    ///
    /// `|j⟩⟨k|` goes to `|j+1⟩⟨k+1| + |j−1⟩⟨k−1| + e^{2iφ−ξ}|j+1⟩⟨k−1| + e^{−2iφ−ξ}|j−1⟩⟨k+1|`.
    pub fn evolve_dyads(&self, pp: &ProtocolParams) -> Result<Self> {
        if self.chain.kind() != ChainKind::Walk {
            return Err(Error::WrongChain("cat"));
        }
        if self.chain.l1() != pp.l1 || self.chain.l2() != pp.l2 {
            return Err(Error::InvalidParameter(format!(
                "ensemble chain built for (l1, l2) = ({}, {}), asked to evolve with ({}, {})",
                self.chain.l1(),
                self.chain.l2(),
                pp.l1,
                pp.l2
            )));
        }
        let mut chain = self.chain.clone();
        let reach = chain.reach().max(self.support_reach() + 1);
        chain.extend_to(reach);
        let src = self.resized(reach);
        let size = 2 * reach + 1;
        let cross = C64::from_polar((-pp.xi).exp(), 2.0 * pp.phi);
        let cross_conj = C64::from_polar((-pp.xi).exp(), -2.0 * pp.phi);
        let mut out = DMatrix::zeros(size, size);
        for a in 0..size {
            for b in 0..size {
                let w = src[(a, b)];
                if w == C64::new(0.0, 0.0) {
                    continue;
                }
                let q = w * 0.25;
                if a + 1 < size && b + 1 < size {
                    out[(a + 1, b + 1)] += q;
                }
                if a > 0 && b > 0 {
                    out[(a - 1, b - 1)] += q;
                }
                if a + 1 < size && b > 0 {
                    out[(a + 1, b - 1)] += q * cross;
                }
                if a > 0 && b + 1 < size {
                    out[(a - 1, b + 1)] += q * cross_conj;
                }
            }
        }
        let mut next = Self { chain, weights: out, record_probability: self.record_probability };
        let step_probability = next.trace().re / self.trace().re;
        next.record_probability *= step_probability;
        next.renormalize()?;
        Ok(next)
    }

    /// Trace distance `½‖ρ − σ‖₁`, valid across different label chains.
    pub fn trace_distance(&self, other: &DyadEnsemble) -> f64 {
        let (la, lb) = (self.chain.labels(), other.chain.labels());
        let (na, nb) = (la.len(), lb.len());
        let labels: Vec<CoherentLabel> = la.iter().chain(lb).copied().collect();
        let mut delta = DMatrix::zeros(na + nb, na + nb);
        delta.view_mut((0, 0), (na, na)).copy_from(&self.weights);
        delta.view_mut((na, na), (nb, nb)).copy_from(&(-&other.weights));
        0.5 * operator_spectrum(&labels, &delta).iter().map(|l| l.abs()).sum::<f64>()
    }

    /// Trace distance to the pure state `|ψ⟩⟨ψ|`.
    pub fn trace_distance_to_pure(&self, psi: &SuperposedState) -> f64 {
        let (la, na) = (self.chain.labels(), self.chain.labels().len());
        let nb = psi.len();
        let labels: Vec<CoherentLabel> = la.iter().copied().chain(psi.labels().copied()).collect();
        let mut delta = DMatrix::zeros(na + nb, na + nb);
        delta.view_mut((0, 0), (na, na)).copy_from(&self.weights);
        for (a, ca) in psi.components().iter().enumerate() {
            for (b, cb) in psi.components().iter().enumerate() {
                delta[(na + a, na + b)] = -ca.coefficient * cb.coefficient.conj();
            }
        }
        0.5 * operator_spectrum(&labels, &delta).iter().map(|l| l.abs()).sum::<f64>()
    }
}

/// `n = pp.n` dephased pulse pairs from `|α₀⟩⟨α₀|`, each heralded by `|g⟩`.
pub fn decohered_walk(pp: &ProtocolParams) -> Result<DyadEnsemble> {
    let mut rho = DyadEnsemble::initial(pp);
    for _ in 0..pp.n {
        rho = rho.evolve_dyads(pp)?;
    }
    Ok(rho)
}

/// Every intermediate ensemble, starting with the initial one.
pub fn decohered_walk_history(pp: &ProtocolParams) -> Result<Vec<DyadEnsemble>> {
    let mut out = vec![DyadEnsemble::initial(pp)];
    for _ in 0..pp.n {
        let next = out.last().expect("non-empty").evolve_dyads(pp)?;
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn decay_law_examples() {
        assert_eq!(qubit_coherence_decay(3.0, 0.0), 1.0);
        // 3 Gamma T / 4 = 2
        let t = 1.7;
        let gamma = 8.0 / (3.0 * t);
        assert_abs_diff_eq!(qubit_coherence_decay(t, gamma), (-2.0f64).exp(), epsilon = 1e-15);
        let gamma = 0.2 * 8.0 / (3.0 * t);
        assert_abs_diff_eq!(pulse_dephasing_exponent(gamma, t), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!((-pulse_dephasing_exponent(gamma, t)).exp(), 0.818730753, epsilon = 1e-9);
        // the per-pulse exponent is the decay over the driven half period
        assert_abs_diff_eq!(
            qubit_coherence_decay(t / 2.0, gamma),
            (-pulse_dephasing_exponent(gamma, t)).exp(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn pure_initial_state() {
        let pp = ProtocolParams::standard(3);
        let rho = DyadEnsemble::initial(&pp);
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
        assert_eq!(rho.entry_count(), 1);
    }

    #[test]
    fn zero_dephasing_tracks_pure_walk() {
        let pp = ProtocolParams::standard(6);
        let hist = decohered_walk_history(&pp).unwrap();
        for (n, rho) in hist.iter().enumerate() {
            let step = pp.with_n(n);
            let (psi, p) = protocol::walk_state_with_probability(&step).unwrap();
            assert!(rho.trace_distance_to_pure(&psi) < 1e-9, "n = {n}");
            assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(rho.record_probability(), p, epsilon = 1e-12);
            assert!(rho.entry_count() <= (n + 1) * (n + 1));
            let inv = rho.invariants();
            assert!(inv.holds(1e-10), "n = {n}: {inv:?}");
        }
    }

    #[test]
    fn infinite_dephasing_is_diagonal() {
        let pp = ProtocolParams::standard(4).with_xi(f64::INFINITY);
        let rho = decohered_walk(&pp).unwrap();
        assert!(rho.dyads().all(|(j, k, _)| j == k));
        assert_eq!(rho.entry_count(), 5);
        assert!(rho.invariants().holds(1e-10));
    }

    #[test]
    fn cat_chain_rejected() {
        let pp = ProtocolParams::standard(2).with_phi(PI / 8.0);
        let rho = DyadEnsemble::cat(&pp).unwrap();
        assert!(matches!(rho.evolve_dyads(&pp), Err(Error::WrongChain(_))));
    }

    #[test]
    fn cat_cross_dyad_suppression() {
        let pp = ProtocolParams::standard(10).with_xi(0.1);
        let pure = DyadEnsemble::cat(&pp.with_xi(0.0)).unwrap();
        let mixed = DyadEnsemble::cat(&pp).unwrap();
        assert_abs_diff_eq!(pure.coherence_ratio(-10, 10), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mixed.coherence_ratio(-10, 10), (-2.0f64).exp(), epsilon = 1e-12);
        assert!(mixed.invariants().holds(1e-10));
        assert!(mixed.purity() < pure.purity());
    }

    #[test]
    fn trace_distance_basics() {
        let pp = ProtocolParams::standard(3);
        let a = decohered_walk(&pp).unwrap();
        assert!(a.trace_distance(&a) < 1e-10);
        let b = decohered_walk(&pp.with_xi(f64::INFINITY)).unwrap();
        let d = a.trace_distance(&b);
        assert!(d > 0.05 && d <= 1.0 + 1e-10);
    }
}
