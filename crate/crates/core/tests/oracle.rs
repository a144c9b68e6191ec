//! Independent checks: high-precision reference values, the Fock-space
//! integrator, and brute-force sums over measurement paths.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nanomech_cat::coherent::{reduce_phase, CoherentLabel, Component, Kick, SuperposedState};
use nanomech_cat::decoherence::decohered_walk;
use nanomech_cat::fock::{
    cat_oracle, coherent_vector, displacement_matrix, fidelity, pulse_operator_matrix, walk_oracle, HamiltonianForm,
    OracleConfig, Orientation,
};
use nanomech_cat::protocol::{cat_state_heralded, walk_state, walk_state_with_probability, LabelChain, ProtocolParams, QubitOutcome};

// 40-digit references, rounded to double.
#[allow(clippy::excessive_precision)]
const ALPHA: [(i32, f64, f64, f64); 3] = [
    (1, 0.0031410759078128293839, 0.1999506560365731557, 0.00031410759078128293839),
    (5, 0.078372011602075133653, 0.9958108250018259652, 0.026666922854473756126),
    (10, 0.3115582673808632075, 1.9671014825854571493, 0.20942124076997774249),
];
#[allow(clippy::excessive_precision)]
const BETA: [(i32, f64, f64); 3] = [
    (1, 0.0094201278607441669915, 0.1997533288794003119),
    (5, 0.17122998340917897495, 0.98110356710748625325),
    (10, 0.63725705039368460669, 1.8612755329455039492),
];

fn dressed() -> OracleConfig {
    OracleConfig { form: HamiltonianForm::Dressed, ..OracleConfig::default() }
}

#[test]
fn walk_labels_match_high_precision_values() {
    let chain = LabelChain::walk(C64::new(0.0, 0.0), 0.1, 0.01, 10).unwrap();
    for (j, re, im, theta) in ALPHA {
        let l = chain.label(j);
        assert!((l.amplitude - C64::new(re, im)).norm() < 1e-13, "alpha{j} = {}", l.amplitude);
        assert!((l.phase - theta).abs() < 1e-13, "theta{j} = {}", l.phase);
        let m = chain.label(-j);
        assert!((m.amplitude - C64::new(re, -im)).norm() < 1e-13);
        assert!((m.phase + theta).abs() < 1e-13);
    }
}

#[test]
fn cat_labels_match_high_precision_values() {
    let chain = LabelChain::cat(C64::new(0.0, 0.0), 0.1, 0.01, 10).unwrap();
    for (j, re, im) in BETA {
        assert!((chain.label(j).amplitude - C64::new(re, im)).norm() < 1e-13);
        assert!((chain.label(-j).amplitude - C64::new(re, -im)).norm() < 1e-13);
    }
}

#[test]
fn coherent_algebra_against_fock_matrices() {
    let cutoff = 90;
    let mut vac = DVector::zeros(cutoff);
    vac[0] = C64::new(1.0, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let a = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let b = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let va = displacement_matrix(a, cutoff) * &vac;
        let vb = displacement_matrix(b, cutoff) * &vac;
        let la = CoherentLabel::from_amplitude(a);
        let lb = CoherentLabel::from_amplitude(b);
        assert!((la.overlap(&lb) - va.dotc(&vb)).norm() < 1e-10);

        // D(b)|a⟩ keeps track of the Weyl phase
        let moved = la.displace(b);
        let direct = displacement_matrix(b, cutoff) * &va;
        let expected = coherent_vector(&moved, cutoff).unwrap();
        assert!((direct - expected).norm() < 1e-9);

        // one pulse pair as a product of Fock matrices
        let (l1, l2) = (rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.2));
        for kick in [Kick::Forward, Kick::Backward] {
            let op = nanomech_cat::coherent::PulseOperator::new(l1, l2, kick).unwrap();
            let via_matrix = pulse_operator_matrix(l1, l2, kick, cutoff) * &va;
            let via_label = coherent_vector(&op.apply(la), cutoff).unwrap();
            assert!((via_matrix - via_label).norm() < 1e-9);
        }
    }
}

#[test]
fn dressed_integrator_reproduces_walk() {
    for n in 1..=4 {
        let pp = ProtocolParams::standard(n);
        let run = walk_oracle(&pp, &dressed()).unwrap();
        assert!(1.0 - run.fidelity < 1e-10, "n={n}: 1-F={:e}", 1.0 - run.fidelity);
        let rel = (run.record_probability - run.closed_record_probability).abs() / run.closed_record_probability;
        assert!(rel < 1e-8, "n={n}: record probability {} vs {}", run.record_probability, run.closed_record_probability);
    }
}

#[test]
fn dressed_integrator_reproduces_walk_off_axis() {
    let pp = ProtocolParams::new(0.2, 0.05, 1.3, 3, 0.0, C64::new(0.4, -0.3)).unwrap();
    let run = walk_oracle(&pp, &dressed()).unwrap();
    assert!(1.0 - run.fidelity < 1e-10, "1-F={:e}", 1.0 - run.fidelity);
}

#[test]
fn effective_integrator_is_close_to_walk() {
    let run = walk_oracle(&ProtocolParams::standard(2), &OracleConfig::default()).unwrap();
    assert!(1.0 - run.fidelity < 1e-3);
}

#[test]
fn orientation_and_rotation_sign_are_fixed_by_the_integrator() {
    let pp = ProtocolParams::standard(3);
    let reflected = walk_oracle(&pp, &dressed()).unwrap();
    let literal = walk_oracle(&pp, &OracleConfig { orientation: Orientation::Literal, ..dressed() }).unwrap();
    assert!(1.0 - reflected.fidelity < 1e-10);
    assert!(1.0 - literal.fidelity > 1e-3);

    // mirror every label phase: the opposite rotation sense
    let mirrored = walk_state(&pp)
        .unwrap()
        .map_labels(|l| CoherentLabel::new(l.amplitude, -l.phase));
    let f = fidelity(&reflected.resonator, &mirrored).unwrap();
    assert!(1.0 - f > 1e-3, "1-F={:e}", 1.0 - f);
}

#[test]
fn dressed_integrator_reproduces_cat_for_both_outcomes() {
    for n in [1, 3, 10] {
        let pp = ProtocolParams::standard(n);
        let run = cat_oracle(&pp, &dressed()).unwrap();
        assert!(1.0 - run.ground_fidelity < 1e-10, "n={n}: ground 1-F={:e}", 1.0 - run.ground_fidelity);
        assert!(1.0 - run.excited_fidelity < 1e-10, "n={n}: excited 1-F={:e}", 1.0 - run.excited_fidelity);
        assert!((run.ground_probability + run.excited_probability - 1.0).abs() < 1e-10);
        let (_, pg) = cat_state_heralded(&pp, QubitOutcome::Ground).unwrap();
        let (_, pe) = cat_state_heralded(&pp, QubitOutcome::Excited).unwrap();
        assert!((run.ground_probability - pg).abs() < 1e-9);
        assert!((run.excited_probability - pe).abs() < 1e-9);
    }
}

#[test]
fn full_hamiltonian_loose_agreement() {
    let cfg = OracleConfig { form: HamiltonianForm::Full, ..OracleConfig::default() };
    for n in 1..=2 {
        let run = walk_oracle(&ProtocolParams::standard(n), &cfg).unwrap();
        assert!(run.fidelity > 0.99, "n={n}: F={}", run.fidelity);
    }
}

/// `Σ wⱼₖ |j⟩⟨k|` in a fixed Fock basis.
fn ensemble_matrix(rho: &nanomech_cat::decoherence::DyadEnsemble, cutoff: usize) -> DMatrix<C64> {
    let chain = rho.chain();
    let mut m = DMatrix::zeros(cutoff, cutoff);
    for (j, k, w) in rho.dyads() {
        let vj = coherent_vector(&chain.label(j), cutoff).unwrap();
        let vk = coherent_vector(&chain.label(k), cutoff).unwrap();
        m += &vj * vk.adjoint() * w;
    }
    m
}

#[test]
fn full_dephasing_equals_sum_over_paths() {
    let cutoff = 100;
    let compare = 60;
    let pp = ProtocolParams::standard(1).with_xi(f64::INFINITY);
    let fwd = pulse_operator_matrix(pp.l1, pp.l2, Kick::Forward, cutoff);
    let bwd = pulse_operator_matrix(pp.l1, pp.l2, Kick::Backward, cutoff);
    let mut start = DVector::zeros(cutoff);
    start[0] = C64::new(1.0, 0.0);
    for n in 1..=8usize {
        let mut sum = DMatrix::zeros(cutoff, cutoff);
        for path in 0..(1u32 << n) {
            let mut v = start.clone();
            for step in 0..n {
                v = if path >> step & 1 == 1 { &fwd * v } else { &bwd * v };
            }
            sum += &v * v.adjoint();
        }
        sum /= C64::new((1u32 << n) as f64, 0.0);
        let rho = decohered_walk(&pp.with_n(n)).unwrap();
        let closed = ensemble_matrix(&rho, cutoff);
        let diff = (sum.view((0, 0), (compare, compare)) - closed.view((0, 0), (compare, compare))).norm();
        assert!(diff < 1e-10, "n={n}: {diff:e}");
    }
}

#[test]
fn purity_matches_fock_space() {
    let cutoff = 60;
    for xi in [0.0, 0.2, 0.5, 1.0, f64::INFINITY] {
        let rho = decohered_walk(&ProtocolParams::standard(5).with_xi(xi)).unwrap();
        let m = ensemble_matrix(&rho, cutoff);
        let fock = (&m * &m).trace().re;
        assert!((fock - rho.purity()).abs() < 1e-10, "xi={xi}: {fock} vs {}", rho.purity());
    }
}

#[test]
fn purity_non_increasing_in_xi() {
    let pp = ProtocolParams::standard(5);
    let purity: Vec<f64> = [0.0, 0.2, 0.5, 1.0]
        .iter()
        .map(|&xi| decohered_walk(&pp.with_xi(xi)).unwrap().purity())
        .collect();
    println!("n=5 purity over xi 0, 0.2, 0.5, 1: {purity:?}");
    assert!(purity.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{purity:?}");
}

#[test]
fn record_probability_is_fock_norm() {
    let pp = ProtocolParams::standard(4);
    let (state, p) = walk_state_with_probability(&pp).unwrap();
    let chain = LabelChain::for_walk(&pp);
    let raw = SuperposedState::new(
        nanomech_cat::protocol::walk_coefficients(&pp)
            .into_iter()
            .map(|(j, c)| Component::new(c, chain.label(j)))
            .collect(),
    );
    let v = nanomech_cat::fock::expand(&raw, 60).unwrap();
    assert!((v.norm_squared() - p).abs() < 1e-12);
    assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
}

#[test]
fn cat_relative_phase_is_twice_cat_phase() {
    let pp = ProtocolParams::standard(3).with_phi(0.7);
    let (s, _) = cat_state_heralded(&pp, QubitOutcome::Ground).unwrap();
    let c = s.components();
    let rel = (c[1].coefficient / c[0].coefficient).arg();
    let phi_prime = nanomech_cat::protocol::cat_phase(&pp);
    assert!((phi_prime - (6.0 * 0.7) % (2.0 * PI)).abs() < 1e-12);
    assert!(reduce_phase(rel - 2.0 * phi_prime).abs() < 1e-12);
}
