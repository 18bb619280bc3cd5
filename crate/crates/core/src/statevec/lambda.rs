//! Single-qubit operator basis.
//!
//! The operators follow the transition-operator definitions
//! `λ1 = P01 + P10`, `λ2 = i(P01 - P10)`, `λ3 = P11 - P00`, where
//! `Pij = |i><j|`. Relative to the textbook Pauli matrices this gives
//! `λ1 = σx`, `λ2 = -σy`, `λ3 = -σz`, so `λ3|0> = -|0>` and the ground
//! state has Bloch vector `(0, 0, -1)`. Nothing in this crate converts to
//! the standard Pauli signs.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 2x2 complex matrix in row-major order, basis `(|0>, |1>)`.
pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// `|i><j|` as a matrix.
pub fn transition(i: usize, j: usize) -> Mat2 {
    let mut m = [[ZERO; 2]; 2];
    m[i][j] = ONE;
    m
}

pub fn mat2_add(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] + b[0][0], a[0][1] + b[0][1]],
        [a[1][0] + b[1][0], a[1][1] + b[1][1]],
    ]
}

pub fn mat2_sub(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

pub fn mat2_scale(a: &Mat2, s: Complex64) -> Mat2 {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut m = [[ZERO; 2]; 2];
    for (r, row) in m.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    m
}

pub fn mat2_apply(m: &Mat2, v: &[Complex64; 2]) -> [Complex64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

pub fn identity2() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

/// One factor of a c-cluster operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Lambda {
    Identity,
    L1,
    L2,
    L3,
}

impl Lambda {
    pub const ALL: [Lambda; 4] = [Lambda::Identity, Lambda::L1, Lambda::L2, Lambda::L3];
    pub const NON_IDENTITY: [Lambda; 3] = [Lambda::L1, Lambda::L2, Lambda::L3];

    pub fn index(self) -> usize {
        match self {
            Lambda::Identity => 0,
            Lambda::L1 => 1,
            Lambda::L2 => 2,
            Lambda::L3 => 3,
        }
    }

    pub fn from_index(i: usize) -> Option<Lambda> {
        Lambda::ALL.get(i).copied()
    }

    /// Built from the transition operators, entry by entry.
    pub fn matrix(self) -> Mat2 {
        match self {
            Lambda::Identity => mat2_add(&transition(1, 1), &transition(0, 0)),
            Lambda::L1 => mat2_add(&transition(0, 1), &transition(1, 0)),
            Lambda::L2 => mat2_scale(&mat2_sub(&transition(0, 1), &transition(1, 0)), I),
            Lambda::L3 => mat2_sub(&transition(1, 1), &transition(0, 0)),
        }
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Tensor product `λ_j ⊗ λ_k ⊗ ... ⊗ λ_l`, one factor per qubit in layout order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperatorString {
    factors: Vec<Lambda>,
}

impl OperatorString {
    pub fn new(factors: Vec<Lambda>) -> Self {
        Self { factors }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::new(vec![Lambda::Identity; n_qubits])
    }

    /// Identity everywhere except `op` on `qubit`.
    pub fn single(n_qubits: usize, qubit: usize, op: Lambda) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::IndexOutOfRange {
                index: qubit,
                n_qubits,
            });
        }
        let mut s = Self::identity(n_qubits);
        s.factors[qubit] = op;
        Ok(s)
    }

    /// Parse digits such as `"1030"`.
    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .map(|c| {
                c.to_digit(10)
                    .and_then(|d| Lambda::from_index(d as usize))
                    .ok_or_else(|| Error::InvalidConfig(format!("bad operator index {c:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[Lambda] {
        &self.factors
    }

    pub fn set(&mut self, qubit: usize, op: Lambda) {
        self.factors[qubit] = op;
    }

    /// Number of non-identity factors.
    pub fn cluster_size(&self) -> usize {
        self.factors
            .iter()
            .filter(|l| **l != Lambda::Identity)
            .count()
    }
}

impl fmt::Display for OperatorString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.factors {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Mat2, b: &Mat2) -> bool {
        a.iter()
            .flatten()
            .zip(b.iter().flatten())
            .all(|(x, y)| (x - y).norm() < 1e-15)
    }

    fn dagger(a: &Mat2) -> Mat2 {
        [
            [a[0][0].conj(), a[1][0].conj()],
            [a[0][1].conj(), a[1][1].conj()],
        ]
    }

    #[test]
    fn explicit_entries() {
        let l1 = [[ZERO, ONE], [ONE, ZERO]];
        let l2 = [[ZERO, I], [-I, ZERO]];
        let l3 = [[-ONE, ZERO], [ZERO, ONE]];
        assert!(close(&Lambda::L1.matrix(), &l1));
        assert!(close(&Lambda::L2.matrix(), &l2));
        assert!(close(&Lambda::L3.matrix(), &l3));
        assert!(close(&Lambda::Identity.matrix(), &identity2()));
    }

    #[test]
    fn hermitian_traceless_involutory() {
        for l in Lambda::NON_IDENTITY {
            let m = l.matrix();
            assert!(close(&m, &dagger(&m)), "{l:?} not Hermitian");
            assert!((m[0][0] + m[1][1]).norm() < 1e-15, "{l:?} has trace");
            assert!(close(&mat2_mul(&m, &m), &identity2()), "{l:?}^2 != 1");
        }
    }

    #[test]
    fn cluster_size_counts_non_identity() {
        let s = OperatorString::parse("1030").unwrap();
        assert_eq!(s.cluster_size(), 2);
        assert_eq!(s.to_string(), "1030");
        assert_eq!(OperatorString::identity(5).cluster_size(), 0);
        assert!(OperatorString::parse("14").is_err());
    }
}
