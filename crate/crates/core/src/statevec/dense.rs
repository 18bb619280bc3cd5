//! Dense operators for small registers.
//!
//! Matrices here are built from explicit Kronecker products and never go
//! through the in-place kernels, so they can serve as an independent check
//! on them.

use num_complex::Complex64;

use super::lambda::{identity2, transition, Lambda, Mat2};
use super::AgentType;
use crate::error::{Error, Result};

/// Largest register a dense matrix may act on.
pub const DENSE_QUBIT_LIMIT: usize = 12;

pub(crate) fn guard(n_qubits: usize, limit: usize) -> Result<()> {
    if n_qubits > limit {
        return Err(Error::DenseGuard {
            limit,
            requested: n_qubits,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_mat2(m: &Mat2) -> Self {
        Self {
            dim: 2,
            data: vec![m[0][0], m[0][1], m[1][0], m[1][1]],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let dim = self.dim * other.dim;
        let mut out = DenseMatrix::zeros(dim);
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.get(r1, c1);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        let row = r1 * other.dim + r2;
                        let col = c1 * other.dim + c2;
                        out.data[row * dim + col] = a * other.get(r2, c2);
                    }
                }
            }
        }
        out
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim);
        DenseMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim);
        DenseMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> DenseMatrix {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .sum()
            })
            .collect()
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }
}

/// Full-register operator with the given single-qubit factors and the
/// identity on every other qubit. Qubit 0 is the leftmost tensor factor.
pub fn embed(n_qubits: usize, factors: &[(usize, Mat2)]) -> Result<DenseMatrix> {
    guard(n_qubits, DENSE_QUBIT_LIMIT)?;
    let mut per_qubit = vec![identity2(); n_qubits];
    for &(q, m) in factors {
        if q >= n_qubits {
            return Err(Error::IndexOutOfRange { index: q, n_qubits });
        }
        per_qubit[q] = m;
    }
    Ok(per_qubit.iter().fold(DenseMatrix::identity(1), |acc, m| {
        acc.kron(&DenseMatrix::from_mat2(m))
    }))
}

/// `1 cos(α/2) - λ1 i sin(α/2)` on `qubit`.
pub fn rotation_matrix(n_qubits: usize, qubit: usize, alpha: f64) -> Result<DenseMatrix> {
    let c = Complex64::new((alpha / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(alpha / 2.0).sin());
    let ident = embed(n_qubits, &[])?;
    let l1 = embed(n_qubits, &[(qubit, Lambda::L1.matrix())])?;
    Ok(ident.scale(c).add(&l1.scale(s)))
}

/// `P00 ⊗ λ1 + P11 ⊗ 1` (type 0) or `P00 ⊗ iλ2 + P11 ⊗ 1` (type π).
pub fn qcnot_matrix(
    n_qubits: usize,
    agent: usize,
    env: usize,
    kind: AgentType,
) -> Result<DenseMatrix> {
    if agent == env {
        return Err(Error::SameQubit(agent));
    }
    let target = match kind {
        AgentType::Zero => Lambda::L1.matrix(),
        AgentType::Pi => super::lambda::mat2_scale(&Lambda::L2.matrix(), Complex64::new(0.0, 1.0)),
    };
    let flip = embed(n_qubits, &[(agent, transition(0, 0)), (env, target)])?;
    let keep = embed(n_qubits, &[(agent, transition(1, 1))])?;
    Ok(flip.add(&keep))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_dimensions_and_order() {
        // |1><1| ⊗ 1 puts ones on the lower-right block.
        let m = embed(2, &[(0, transition(1, 1))]).unwrap();
        assert_eq!(m.dim(), 4);
        assert_eq!(m.get(2, 2), Complex64::new(1.0, 0.0));
        assert_eq!(m.get(3, 3), Complex64::new(1.0, 0.0));
        assert_eq!(m.get(0, 0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn guard_rejects_large_registers() {
        assert!(matches!(
            embed(DENSE_QUBIT_LIMIT + 1, &[]),
            Err(Error::DenseGuard { .. })
        ));
    }

    #[test]
    fn qcnot_squares() {
        let u0 = qcnot_matrix(2, 0, 1, AgentType::Zero).unwrap();
        assert!(u0.matmul(&u0).max_abs_diff(&DenseMatrix::identity(4)) < 1e-15);
        let up = qcnot_matrix(2, 0, 1, AgentType::Pi).unwrap();
        let up2 = up.matmul(&up);
        assert!(up2.max_abs_diff(&DenseMatrix::identity(4)) > 0.5);
        assert!(up2.matmul(&up2).max_abs_diff(&DenseMatrix::identity(4)) < 1e-15);
    }
}
