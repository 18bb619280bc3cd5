//! Reduced observables: Bloch vectors, cluster sums and their bounds, the
//! pure-state sum rule, the pairwise entanglement flag, and periodicity of
//! sampled orbits.
//!
//! Every correlation value is read directly off the full state vector.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{Lambda, OperatorString, StateVector};

/// Sum-rule enumeration touches `4^N` operator strings; capped here.
pub const SUM_RULE_QUBIT_LIMIT: usize = 8;
/// Defect below which a sampled orbit counts as having returned.
pub const PERIODICITY_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_HORIZON: usize = 64;
/// Margin used when comparing `Y2` against `Y1 Y1`.
pub const SURPLUS_MARGIN: f64 = 1e-10;

/// `(<λ1>, <λ2>, <λ3>)` of one qubit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
}

impl BlochVector {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Self {
        Self { l1, l2, l3 }
    }

    pub fn components(&self) -> [f64; 3] {
        [self.l1, self.l2, self.l3]
    }

    /// Squared length; this is the single-qubit cluster sum `Y1`.
    pub fn length_sqr(&self) -> f64 {
        self.l1 * self.l1 + self.l2 * self.l2 + self.l3 * self.l3
    }

    pub fn length(&self) -> f64 {
        self.length_sqr().sqrt()
    }

    /// Largest componentwise difference.
    pub fn max_diff(&self, other: &BlochVector) -> f64 {
        (self.l1 - other.l1)
            .abs()
            .max((self.l2 - other.l2).abs())
            .max((self.l3 - other.l3).abs())
    }

    pub fn scaled(&self, w: f64) -> BlochVector {
        BlochVector::new(self.l1 * w, self.l2 * w, self.l3 * w)
    }

    pub fn add(&self, other: &BlochVector) -> BlochVector {
        BlochVector::new(self.l1 + other.l1, self.l2 + other.l2, self.l3 + other.l3)
    }
}

pub fn reduced_bloch(state: &StateVector, qubit: usize) -> Result<BlochVector> {
    let n = state.n_qubits();
    let e = |l| state.expectation(&OperatorString::single(n, qubit, l)?);
    Ok(BlochVector::new(
        e(Lambda::L1)?,
        e(Lambda::L2)?,
        e(Lambda::L3)?,
    ))
}

/// Upper bound on a c-cluster sum: `2^(c-1)` for odd c, `2^(c-1) + 2` for even c.
pub fn cluster_bound(c: usize) -> f64 {
    assert!(c >= 1);
    let base = (1u64 << (c - 1)) as f64;
    if c.is_multiple_of(2) {
        base + 2.0
    } else {
        base
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterSum {
    pub subset: Vec<usize>,
    pub c: usize,
    #[serde(rename = "Y")]
    pub y: f64,
    #[serde(rename = "Z")]
    pub z: f64,
}

impl ClusterSum {
    pub fn within_bound(&self, tol: f64) -> bool {
        self.y <= self.z + tol && self.y >= -tol
    }
}

fn normalize_subset(n_qubits: usize, subset: &[usize]) -> Result<Vec<usize>> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&q) = s.iter().find(|&&q| q >= n_qubits) {
        return Err(Error::IndexOutOfRange { index: q, n_qubits });
    }
    Ok(s)
}

/// Sum of `Q^2` over every operator string that is non-identity exactly on
/// `subset`.
pub fn cluster_sum(state: &StateVector, subset: &[usize]) -> Result<ClusterSum> {
    let n = state.n_qubits();
    let subset = normalize_subset(n, subset)?;
    let c = subset.len();
    let mut string = OperatorString::identity(n);
    let mut y = 0.0;
    for code in 0..3usize.pow(c as u32) {
        let mut rest = code;
        for &q in &subset {
            string.set(q, Lambda::NON_IDENTITY[rest % 3]);
            rest /= 3;
        }
        let q = state.expectation(&string)?;
        y += q * q;
    }
    Ok(ClusterSum {
        subset,
        c,
        y,
        z: cluster_bound(c),
    })
}

/// Every cluster sum of the state, ordered by size and then lexicographically.
pub fn all_cluster_sums(state: &StateVector) -> Result<Vec<ClusterSum>> {
    let n = state.n_qubits();
    if n > SUM_RULE_QUBIT_LIMIT {
        return Err(Error::EnumerationGuard {
            limit: SUM_RULE_QUBIT_LIMIT,
            requested: n,
        });
    }
    // Walk all 4^N strings once and bucket Q^2 by support.
    let mut by_support = vec![0.0f64; 1 << n];
    let mut string = OperatorString::identity(n);
    for code in 1..4usize.pow(n as u32) {
        let mut rest = code;
        let mut support = 0usize;
        for q in 0..n {
            let l = Lambda::ALL[rest % 4];
            rest /= 4;
            string.set(q, l);
            if l != Lambda::Identity {
                support |= 1 << q;
            }
        }
        let v = state.expectation(&string)?;
        by_support[support] += v * v;
    }
    let mut out: Vec<ClusterSum> = (1..1usize << n)
        .map(|support| {
            let subset: Vec<usize> = (0..n).filter(|q| support & (1 << q) != 0).collect();
            let c = subset.len();
            ClusterSum {
                subset,
                c,
                y: by_support[support],
                z: cluster_bound(c),
            }
        })
        .collect();
    out.sort_by(|a, b| a.c.cmp(&b.c).then_with(|| a.subset.cmp(&b.subset)));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumRuleReport {
    pub total: f64,
    pub defect: f64,
}

/// Total of all `2^N - 1` cluster sums and its distance from `2^N - 1`.
pub fn sum_rule_check(state: &StateVector) -> Result<SumRuleReport> {
    let sums = all_cluster_sums(state)?;
    let total: f64 = sums.iter().map(|s| s.y).sum();
    let target = ((1u64 << state.n_qubits()) - 1) as f64;
    Ok(SumRuleReport {
        total,
        defect: (total - target).abs(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurplusCorrelation {
    /// Two-qubit cluster sum.
    pub y2: f64,
    /// Product of the two single-qubit cluster sums.
    pub product: f64,
    pub entangled: bool,
}

pub fn surplus_correlation(
    state: &StateVector,
    pair: (usize, usize),
) -> Result<SurplusCorrelation> {
    let (a, b) = pair;
    if a == b {
        return Err(Error::SameQubit(a));
    }
    let y2 = cluster_sum(state, &[a, b])?.y;
    let product = cluster_sum(state, &[a])?.y * cluster_sum(state, &[b])?.y;
    Ok(SurplusCorrelation {
        y2,
        product,
        entangled: y2 > product + SURPLUS_MARGIN,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Periodicity {
    /// Returns to the initial state, up to a global phase, after `period` cycles.
    Periodic { period: usize },
    /// No return found within the horizon. Says nothing beyond it.
    AperiodicWithinHorizon,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicityReport {
    pub classification: Periodicity,
    pub horizon: usize,
    /// Defect at the reported period, or the smallest defect seen when aperiodic.
    pub fidelity_defect: f64,
}

impl PeriodicityReport {
    pub fn is_periodic(&self) -> bool {
        matches!(self.classification, Periodicity::Periodic { .. })
    }
}

/// `1 - |<a|b>| / (|a| |b|)`; zero iff equal up to a global phase.
pub fn phase_invariant_defect(a: &[Complex64], b: &[Complex64]) -> f64 {
    let overlap: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let na: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    (1.0 - overlap.norm() / (na * nb)).max(0.0)
}

/// Classifies an orbit sampled every step.
///
/// Compares `orbit[0]` with `orbit[P * cycle_length]` for `P = 1..=horizon`
/// (as far as the orbit reaches) and reports the first `P` whose defect is
/// below [`PERIODICITY_TOLERANCE`].
pub fn classify_periodicity<S: AsRef<[Complex64]>>(
    orbit: &[S],
    cycle_length: usize,
    horizon: usize,
) -> Result<PeriodicityReport> {
    let first = orbit.first().ok_or(Error::EmptyOrbit)?.as_ref();
    if cycle_length == 0 || horizon == 0 {
        return Err(Error::InvalidConfig(
            "cycle length and horizon must be positive".into(),
        ));
    }
    let mut best = f64::INFINITY;
    for period in 1..=horizon {
        let Some(sample) = orbit.get(period * cycle_length) else {
            break;
        };
        let defect = phase_invariant_defect(first, sample.as_ref());
        if defect < PERIODICITY_TOLERANCE {
            return Ok(PeriodicityReport {
                classification: Periodicity::Periodic { period },
                horizon,
                fidelity_defect: defect,
            });
        }
        best = best.min(defect);
    }
    Ok(PeriodicityReport {
        classification: Periodicity::AperiodicWithinHorizon,
        horizon,
        fidelity_defect: best,
    })
}

/// First `P <= horizon` at which a per-step Bloch trajectory comes back to
/// its starting point within `tol` at a cycle boundary.
pub fn bloch_return_period(
    trajectory: &[BlochVector],
    cycle_length: usize,
    horizon: usize,
    tol: f64,
) -> Option<usize> {
    let first = trajectory.first()?;
    (1..=horizon)
        .take_while(|p| p * cycle_length < trajectory.len())
        .find(|p| trajectory[p * cycle_length].max_diff(first) < tol)
}

/// Largest componentwise difference between two trajectories over their common length.
pub fn max_trajectory_defect(a: &[BlochVector], b: &[BlochVector]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.max_diff(y))
        .fold(0.0, f64::max)
}
