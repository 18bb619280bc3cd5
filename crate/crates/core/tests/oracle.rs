//! In-place kernels against dense Kronecker-product matrices.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spinring::network::{run_from, schedule_order, step_unitary, NetworkConfig};
use spinring::statevec::dense::{embed, qcnot_matrix, rotation_matrix, DenseMatrix};
use spinring::statevec::{random_state, AgentType, Lambda, OperatorString, StateVector};

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn basis_bits(n: usize, index: usize) -> Vec<u8> {
    (0..n).map(|q| ((index >> (n - 1 - q)) & 1) as u8).collect()
}

#[test]
fn rotation_kernel_matches_dense_on_every_basis_state() {
    for n in 1..=6 {
        for q in 0..n {
            let alpha = 0.3 + q as f64;
            let m = rotation_matrix(n, q, alpha).unwrap();
            for i in 0..1 << n {
                let mut s = StateVector::basis(n, &basis_bits(n, i)).unwrap();
                let expected = m.apply(s.amplitudes());
                s.apply_local_rotation(q, alpha).unwrap();
                assert!(
                    max_diff(s.amplitudes(), &expected) < 1e-14,
                    "n={n} q={q} i={i}"
                );
            }
        }
    }
}

#[test]
fn qcnot_kernel_matches_dense_on_every_basis_state() {
    for n in 2..=6 {
        for agent in 0..n {
            for env in (0..n).filter(|&e| e != agent) {
                for kind in [AgentType::Zero, AgentType::Pi] {
                    let m = qcnot_matrix(n, agent, env, kind).unwrap();
                    for i in 0..1 << n {
                        let mut s = StateVector::basis(n, &basis_bits(n, i)).unwrap();
                        let expected = m.apply(s.amplitudes());
                        s.apply_qcnot(agent, env, kind).unwrap();
                        assert!(
                            max_diff(s.amplitudes(), &expected) < 1e-15,
                            "n={n} agent={agent} env={env} {kind} i={i}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn expectation_matches_dense_for_every_string() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=4 {
        let psi = random_state(n, &mut rng);
        for code in 0..4usize.pow(n as u32) {
            let factors: Vec<Lambda> = (0..n)
                .map(|q| Lambda::from_index((code / 4usize.pow(q as u32)) % 4).unwrap())
                .collect();
            let dense = embed(
                n,
                &factors
                    .iter()
                    .enumerate()
                    .map(|(q, l)| (q, l.matrix()))
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            let applied = dense.apply(psi.amplitudes());
            let expected: Complex64 = psi
                .amplitudes()
                .iter()
                .zip(&applied)
                .map(|(a, b)| a.conj() * b)
                .sum();
            let got = psi.expectation(&OperatorString::new(factors)).unwrap();
            assert!(expected.im.abs() < 1e-12);
            assert!((got - expected.re).abs() < 1e-12, "n={n} code={code}");
        }
    }
}

#[test]
fn network_run_matches_dense_product() {
    let mut config = NetworkConfig::uniform(&[AgentType::Zero, AgentType::Pi], 3, 0.9);
    config.alphas = vec![0.9, 1.7, -0.4];
    config.offsets = vec![1, 2];
    let n = config.n_qubits();
    let steps = 25;
    let mut total = DenseMatrix::identity(1 << n);
    for (agent, m) in schedule_order(&config, steps) {
        let cycle = 2 * config.sites;
        let g = step_unitary(&config, agent, (m - 1) % cycle + 1).unwrap();
        total = g.gate.dense(n).unwrap().matmul(&total);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let psi = random_state(n, &mut rng);
    let expected = total.apply(psi.amplitudes());
    let out = run_from(&config, psi, steps, |_| {}).unwrap();
    assert!(max_diff(out.amplitudes(), &expected) < 1e-12);
}
