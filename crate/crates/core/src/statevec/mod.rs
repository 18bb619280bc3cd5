//! Dense pure-state register and the gate kernels.
//!
//! Layout: qubit 0 is agent S1, qubit K-1 is agent SK, qubit K is
//! environment site 1 and qubit K+M-1 is site M. The basis index of
//! `|b_0 b_1 ... b_{N-1}>` is `sum_q b_q 2^(N-1-q)`, so qubit 0 is the most
//! significant bit.

pub mod dense;
pub mod lambda;

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::io::{Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use dense::{DenseMatrix, DENSE_QUBIT_LIMIT};
pub use lambda::{Lambda, Mat2, OperatorString};

/// Registers at least this long are updated with rayon.
const PAR_MIN_LEN: usize = 1 << 15;

pub const NORM_TOLERANCE: f64 = 1e-10;
pub const IMAG_TOLERANCE: f64 = 1e-10;

/// Gate type of an agent: which operator its QCNOT applies to the site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AgentType {
    /// Applies `λ1` to the site.
    #[serde(rename = "0")]
    Zero,
    /// Applies `iλ2` to the site.
    #[serde(rename = "pi")]
    Pi,
}

impl AgentType {
    pub fn target_matrix(self) -> Mat2 {
        match self {
            AgentType::Zero => Lambda::L1.matrix(),
            AgentType::Pi => lambda::mat2_scale(&Lambda::L2.matrix(), Complex64::new(0.0, 1.0)),
        }
    }
}

impl fmt::Display for AgentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentType::Zero => write!(f, "0"),
            AgentType::Pi => write!(f, "pi"),
        }
    }
}

impl std::str::FromStr for AgentType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(AgentType::Zero),
            "pi" | "π" => Ok(AgentType::Pi),
            other => Err(Error::InvalidConfig(format!(
                "unknown agent type {other:?}"
            ))),
        }
    }
}

/// Eigenvalue sign of a tape site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' | '−' => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Which single-site eigenbasis a sign tape is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum TapeBasis {
    /// `|±> = (|0> ± |1>)/√2`, eigenstates of `λ1`.
    #[default]
    Lambda1,
    /// `(|0> ∓ i|1>)/√2`, eigenstates of `λ2` with eigenvalue ±1.
    Lambda2,
}

impl TapeBasis {
    pub fn site_state(self, sign: Sign) -> [Complex64; 2] {
        let h = FRAC_1_SQRT_2;
        match self {
            TapeBasis::Lambda1 => [
                Complex64::new(h, 0.0),
                Complex64::new(sign.value() * h, 0.0),
            ],
            TapeBasis::Lambda2 => [
                Complex64::new(h, 0.0),
                Complex64::new(0.0, -sign.value() * h),
            ],
        }
    }

    /// The basis in which an agent of this type acts diagonally on the tape.
    pub fn for_agent(kind: AgentType) -> TapeBasis {
        match kind {
            AgentType::Zero => TapeBasis::Lambda1,
            AgentType::Pi => TapeBasis::Lambda2,
        }
    }
}

/// Head state `cos(φ0/2)|0> - i sin(φ0/2)|1>`, Bloch vector `(0, sin φ0, -cos φ0)`.
pub fn head_state(phi0: f64) -> [Complex64; 2] {
    [
        Complex64::new((phi0 / 2.0).cos(), 0.0),
        Complex64::new(0.0, -(phi0 / 2.0).sin()),
    ]
}

#[inline]
fn qubit_mask(n_qubits: usize, qubit: usize) -> usize {
    1 << (n_qubits - 1 - qubit)
}

/// Pure state of `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn new(n_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    pub fn basis(n_qubits: usize, bits: &[u8]) -> Result<Self> {
        if bits.len() != n_qubits {
            return Err(Error::DimensionMismatch {
                expected: n_qubits,
                actual: bits.len(),
            });
        }
        let mut index = 0usize;
        for (q, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => index |= qubit_mask(n_qubits, q),
                _ => return Err(Error::InvalidConfig(format!("bit value {b} is not 0 or 1"))),
            }
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Wraps amplitudes after checking the length is a power of two and the
    /// norm is one within [`NORM_TOLERANCE`].
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidConfig(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let s = Self {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        };
        let n2 = s.norm_sqr();
        if (n2 - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(n2));
        }
        Ok(s)
    }

    /// Tensor product of single-qubit states, qubit 0 first.
    pub fn product(factors: &[[Complex64; 2]]) -> Result<Self> {
        for f in factors {
            let n2 = f[0].norm_sqr() + f[1].norm_sqr();
            if (n2 - 1.0).abs() > NORM_TOLERANCE {
                return Err(Error::NotNormalized(n2));
            }
        }
        let mut amplitudes = vec![Complex64::new(1.0, 0.0)];
        for f in factors {
            amplitudes = amplitudes
                .iter()
                .flat_map(|a| [a * f[0], a * f[1]])
                .collect();
        }
        Ok(Self {
            n_qubits: factors.len(),
            amplitudes,
        })
    }

    /// `head ⊗ |s_1> ⊗ ... ⊗ |s_M>` with `|±> = (|0> ± |1>)/√2`.
    pub fn sign_tape(head: [Complex64; 2], signs: &[Sign]) -> Result<Self> {
        Self::sign_tape_in(&[head], signs, TapeBasis::Lambda1)
    }

    /// Agents' heads followed by a sign tape written in `basis`.
    pub fn sign_tape_in(
        heads: &[[Complex64; 2]],
        signs: &[Sign],
        basis: TapeBasis,
    ) -> Result<Self> {
        let factors: Vec<_> = heads
            .iter()
            .copied()
            .chain(signs.iter().map(|s| basis.site_state(*s)))
            .collect();
        Self::product(&factors)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Euclidean distance between amplitude vectors (phase sensitive).
    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&mut self, factor: Complex64) {
        self.amplitudes.iter_mut().for_each(|a| *a *= factor);
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::IndexOutOfRange {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// Applies `m` to `qubit`.
    pub fn apply_single(&mut self, qubit: usize, m: &Mat2) -> Result<()> {
        self.check_qubit(qubit)?;
        let mask = qubit_mask(self.n_qubits, qubit);
        let m = *m;
        pair_kernel(&mut self.amplitudes, mask, |_, a0, a1| {
            let (x0, x1) = (*a0, *a1);
            *a0 = m[0][0] * x0 + m[0][1] * x1;
            *a1 = m[1][0] * x0 + m[1][1] * x1;
        });
        Ok(())
    }

    /// Applies `m` to `target` on the branch where `control` is `|0>`.
    pub fn apply_controlled_on_zero(
        &mut self,
        control: usize,
        target: usize,
        m: &Mat2,
    ) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::SameQubit(control));
        }
        let cmask = qubit_mask(self.n_qubits, control);
        let tmask = qubit_mask(self.n_qubits, target);
        let m = *m;
        let apply = |_: usize, a0: &mut Complex64, a1: &mut Complex64| {
            let (x0, x1) = (*a0, *a1);
            *a0 = m[0][0] * x0 + m[0][1] * x1;
            *a1 = m[1][0] * x0 + m[1][1] * x1;
        };
        if cmask > tmask {
            // Only the control-|0> half of each block is touched.
            for block in self.amplitudes.chunks_mut(2 * cmask) {
                pair_kernel(&mut block[..cmask], tmask, apply);
            }
        } else {
            pair_kernel(&mut self.amplitudes, tmask, |index, a0, a1| {
                if index & cmask == 0 {
                    apply(index, a0, a1);
                }
            });
        }
        Ok(())
    }

    /// `U_α = 1 cos(α/2) - λ1 i sin(α/2)` on `qubit`.
    pub fn apply_local_rotation(&mut self, qubit: usize, alpha: f64) -> Result<()> {
        self.apply_single(qubit, &rotation_mat2(alpha))
    }

    /// QCNOT with `agent` as control (active on its `|0>` component) and
    /// `env` as target.
    pub fn apply_qcnot(&mut self, agent: usize, env: usize, kind: AgentType) -> Result<()> {
        self.apply_controlled_on_zero(agent, env, &kind.target_matrix())
    }

    /// `<ψ|Q|ψ>` for a Hermitian operator string.
    pub fn expectation(&self, string: &OperatorString) -> Result<f64> {
        let z = self.expectation_complex(string)?;
        if z.im.abs() > IMAG_TOLERANCE {
            return Err(Error::NonHermitian(z.im));
        }
        Ok(z.re)
    }

    /// Raw `<ψ|Q|ψ>` before the Hermiticity check.
    ///
    /// A λ string maps `|i>` to `phase(i) |i ^ flip>`, where `flip` marks the
    /// λ1/λ2 qubits. Per qubit, λ2 contributes `-i(-1)^b` and λ3 contributes
    /// `-(-1)^b`.
    pub fn expectation_complex(&self, string: &OperatorString) -> Result<Complex64> {
        if string.len() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                actual: string.len(),
            });
        }
        let mut flip = 0usize;
        let mut sign_mask = 0usize;
        let mut n2 = 0u32;
        let mut n3 = 0u32;
        for (q, l) in string.factors().iter().enumerate() {
            let mask = qubit_mask(self.n_qubits, q);
            match l {
                Lambda::Identity => {}
                Lambda::L1 => flip |= mask,
                Lambda::L2 => {
                    flip |= mask;
                    sign_mask |= mask;
                    n2 += 1;
                }
                Lambda::L3 => {
                    sign_mask |= mask;
                    n3 += 1;
                }
            }
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (i, a) in self.amplitudes.iter().enumerate() {
            let b = self.amplitudes[i ^ flip];
            let term = b.conj() * a;
            if (i & sign_mask).count_ones().is_multiple_of(2) {
                sum += term;
            } else {
                sum -= term;
            }
        }
        // (-i)^n2 (-1)^n3
        let prefactor = match (n2 % 4, n3 % 2) {
            (0, 0) => Complex64::new(1.0, 0.0),
            (1, 0) => Complex64::new(0.0, -1.0),
            (2, 0) => Complex64::new(-1.0, 0.0),
            (3, 0) => Complex64::new(0.0, 1.0),
            (0, _) => Complex64::new(-1.0, 0.0),
            (1, _) => Complex64::new(0.0, 1.0),
            (2, _) => Complex64::new(1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        Ok(prefactor * sum)
    }

    /// Dense matrix-vector product; verification path only.
    pub fn apply_full_unitary(&mut self, matrix: &DenseMatrix) -> Result<()> {
        dense::guard(self.n_qubits, DENSE_QUBIT_LIMIT)?;
        if matrix.dim() != self.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amplitudes.len(),
                actual: matrix.dim(),
            });
        }
        self.amplitudes = matrix.apply(&self.amplitudes);
        Ok(())
    }

    /// Little-endian `(re, im)` doubles in basis-index order.
    pub fn write_le<W: Write>(&self, mut out: W) -> Result<()> {
        let mut buf = Vec::with_capacity(self.amplitudes.len() * 16);
        for a in &self.amplitudes {
            buf.extend_from_slice(&a.re.to_le_bytes());
            buf.extend_from_slice(&a.im.to_le_bytes());
        }
        out.write_all(&buf)?;
        Ok(())
    }

    pub fn read_le<R: Read>(mut input: R) -> Result<Self> {
        let mut buf = Vec::new();
        input.read_to_end(&mut buf)?;
        if buf.len() % 16 != 0 {
            return Err(Error::InvalidConfig(format!(
                "amplitude dump length {} is not a multiple of 16",
                buf.len()
            )));
        }
        let amplitudes = buf
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().unwrap());
                let im = f64::from_le_bytes(c[8..].try_into().unwrap());
                Complex64::new(re, im)
            })
            .collect();
        Self::from_amplitudes(amplitudes)
    }
}

/// Normalized state with amplitudes drawn uniformly from the unit square,
/// then normalized. Deterministic for a seeded `rng`.
pub fn random_state<R: rand::Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> StateVector {
    let mut amplitudes: Vec<Complex64> = (0..1usize << n_qubits)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amplitudes.iter_mut().for_each(|a| *a /= norm);
    StateVector {
        n_qubits,
        amplitudes,
    }
}

pub fn rotation_mat2(alpha: f64) -> Mat2 {
    let c = (alpha / 2.0).cos();
    let s = (alpha / 2.0).sin();
    [
        [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
        [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
    ]
}

/// Calls `f(i, &mut a[i], &mut a[i | mask])` for every index `i` with the
/// `mask` bit clear. Pairs are disjoint, so any partition gives the same result.
fn pair_kernel<F>(amps: &mut [Complex64], mask: usize, f: F)
where
    F: Fn(usize, &mut Complex64, &mut Complex64) + Sync,
{
    let chunk = 2 * mask;
    if amps.len() < PAR_MIN_LEN {
        for (c, block) in amps.chunks_mut(chunk).enumerate() {
            let (lo, hi) = block.split_at_mut(mask);
            let base = c * chunk;
            for (j, (a0, a1)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                f(base + j, a0, a1);
            }
        }
    } else if amps.len() / chunk >= rayon::current_num_threads() * 4 {
        amps.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(c, block)| {
                let (lo, hi) = block.split_at_mut(mask);
                let base = c * chunk;
                for (j, (a0, a1)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    f(base + j, a0, a1);
                }
            });
    } else {
        for (c, block) in amps.chunks_mut(chunk).enumerate() {
            let (lo, hi) = block.split_at_mut(mask);
            let base = c * chunk;
            lo.par_iter_mut()
                .zip(hi.par_iter_mut())
                .enumerate()
                .for_each(|(j, (a0, a1))| f(base + j, a0, a1));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_6, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bloch(s: &StateVector, q: usize) -> [f64; 3] {
        let n = s.n_qubits();
        [Lambda::L1, Lambda::L2, Lambda::L3].map(|l| {
            s.expectation(&OperatorString::single(n, q, l).unwrap())
                .unwrap()
        })
    }

    #[test]
    fn basis_states() {
        assert_eq!(
            StateVector::basis(1, &[0]).unwrap().amplitudes(),
            &[c(1.0, 0.0), c(0.0, 0.0)]
        );
        let s = StateVector::basis(2, &[0, 0]).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        // |011> sits at index 0*4 + 1*2 + 1*1.
        let s = StateVector::basis(3, &[0, 1, 1]).unwrap();
        assert_eq!(s.amplitudes()[3], c(1.0, 0.0));
        assert!(matches!(
            StateVector::basis(3, &[0, 1]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sign_tape_amplitudes() {
        let h = FRAC_1_SQRT_2;
        let zero = [c(1.0, 0.0), c(0.0, 0.0)];
        let plus = StateVector::sign_tape(zero, &[Sign::Plus]).unwrap();
        let expected = [c(h, 0.0), c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        for (a, b) in plus.amplitudes().iter().zip(expected) {
            assert!((a - b).norm() < 1e-15);
        }
        let minus = StateVector::sign_tape(zero, &[Sign::Minus]).unwrap();
        assert!((minus.amplitudes()[1] - c(-h, 0.0)).norm() < 1e-15);

        let bad = [c(1.0, 0.0), c(0.1, 0.0)];
        assert!(matches!(
            StateVector::sign_tape(bad, &[Sign::Plus]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn sign_tape_head_bloch() {
        let s = StateVector::sign_tape(head_state(FRAC_PI_6), &[Sign::Plus, Sign::Plus]).unwrap();
        let b = bloch(&s, 0);
        assert!(b[0].abs() < 1e-14);
        assert!((b[1] - FRAC_PI_6.sin()).abs() < 1e-14);
        assert!((b[2] + FRAC_PI_6.cos()).abs() < 1e-14);
    }

    #[test]
    fn lambda2_tape_sites_are_eigenstates() {
        for sign in [Sign::Plus, Sign::Minus] {
            let s = StateVector::sign_tape_in(&[], &[sign], TapeBasis::Lambda2).unwrap();
            let b = bloch(&s, 0);
            assert!((b[1] - sign.value()).abs() < 1e-15);
        }
    }

    #[test]
    fn rotation_examples() {
        let mut s = StateVector::new(1);
        s.apply_local_rotation(0, 0.0).unwrap();
        assert_eq!(s, StateVector::new(1));

        for alpha in [0.3, 1.0, PI / 3f64.sqrt(), 2.5] {
            let mut s = StateVector::new(1);
            s.apply_local_rotation(0, alpha).unwrap();
            let b = bloch(&s, 0);
            assert!(b[0].abs() < 1e-15);
            assert!((b[1] - alpha.sin()).abs() < 1e-15);
            assert!((b[2] + alpha.cos()).abs() < 1e-15);
            s.apply_local_rotation(0, -alpha).unwrap();
            assert!(s.distance(&StateVector::new(1)) < 1e-15);
        }
        assert!(matches!(
            StateVector::new(2).apply_local_rotation(2, 0.1),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn qcnot_examples() {
        // U0 leaves |1>|0> alone.
        let mut s = StateVector::basis(2, &[1, 0]).unwrap();
        s.apply_qcnot(0, 1, AgentType::Zero).unwrap();
        assert_eq!(s, StateVector::basis(2, &[1, 0]).unwrap());

        let mut s = StateVector::basis(2, &[0, 0]).unwrap();
        s.apply_qcnot(0, 1, AgentType::Zero).unwrap();
        assert_eq!(s, StateVector::basis(2, &[0, 1]).unwrap());

        // iλ2|1> = -|0>.
        let mut s = StateVector::basis(2, &[0, 1]).unwrap();
        s.apply_qcnot(0, 1, AgentType::Pi).unwrap();
        let mut expected = StateVector::basis(2, &[0, 0]).unwrap();
        expected.scale(c(-1.0, 0.0));
        assert_eq!(s, expected);

        assert!(matches!(
            StateVector::new(2).apply_qcnot(1, 1, AgentType::Zero),
            Err(Error::SameQubit(1))
        ));
        assert!(matches!(
            StateVector::new(2).apply_qcnot(0, 5, AgentType::Zero),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn expectation_examples() {
        let s = StateVector::new(1);
        assert_eq!(s.expectation(&OperatorString::identity(1)).unwrap(), 1.0);
        assert_eq!(
            s.expectation(&OperatorString::parse("3").unwrap()).unwrap(),
            -1.0
        );

        let h = FRAC_1_SQRT_2;
        let bell =
            StateVector::from_amplitudes(vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)])
                .unwrap();
        assert!(
            (bell
                .expectation(&OperatorString::parse("11").unwrap())
                .unwrap()
                - 1.0)
                .abs()
                < 1e-15
        );
        assert!(matches!(
            bell.expectation(&OperatorString::parse("1").unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn binary_dump_is_little_endian_interleaved() {
        let s = StateVector::sign_tape(head_state(0.7), &[Sign::Minus]).unwrap();
        let mut buf = Vec::new();
        s.write_le(&mut buf).unwrap();
        assert_eq!(buf.len(), 4 * 16);
        let re1 = f64::from_le_bytes(buf[16..24].try_into().unwrap());
        let im2 = f64::from_le_bytes(buf[40..48].try_into().unwrap());
        assert_eq!(re1, s.amplitudes()[1].re);
        assert_eq!(im2, s.amplitudes()[2].im);
        assert_eq!(StateVector::read_le(&buf[..]).unwrap(), s);
    }

    #[test]
    fn from_amplitudes_rejects_bad_input() {
        assert!(StateVector::from_amplitudes(vec![c(1.0, 0.0); 3]).is_err());
        assert!(matches!(
            StateVector::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn parallel_kernel_matches_sequential() {
        // 16 qubits crosses the rayon threshold; compare against the dense-free
        // sequential result computed on a reordered register.
        let n = 16;
        let mut a = StateVector::new(n);
        for q in 0..n {
            a.apply_local_rotation(q, 0.1 + q as f64 * 0.37).unwrap();
        }
        let mut b = a.clone();
        for q in 1..n {
            a.apply_qcnot(0, q, AgentType::Pi).unwrap();
            a.apply_qcnot(q, 0, AgentType::Zero).unwrap();
        }
        for q in 1..n {
            let m = AgentType::Pi.target_matrix();
            seq_controlled(&mut b, 0, q, &m);
            let m = AgentType::Zero.target_matrix();
            seq_controlled(&mut b, q, 0, &m);
        }
        assert!(a.distance(&b) < 1e-13);
    }

    fn seq_controlled(s: &mut StateVector, control: usize, target: usize, m: &Mat2) {
        let n = s.n_qubits;
        let cm = qubit_mask(n, control);
        let tm = qubit_mask(n, target);
        for i in 0..s.amplitudes.len() {
            if i & cm == 0 && i & tm == 0 {
                let (x0, x1) = (s.amplitudes[i], s.amplitudes[i | tm]);
                s.amplitudes[i] = m[0][0] * x0 + m[0][1] * x1;
                s.amplitudes[i | tm] = m[1][0] * x0 + m[1][1] * x1;
            }
        }
    }
}
