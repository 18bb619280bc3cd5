//! Reduced head dynamics without the full register.
//!
//! When every tape site starts in an eigenstate of the operator an agent's
//! QCNOT applies to it, the tape never changes and the QCNOT acts on the
//! head alone as `diag(e, 1)`, where `e` is the site's eigenvalue. For a
//! type-0 agent the sites are `λ1` eigenstates and `e = ±1`, so a `-` site
//! applies `λ3` and a `+` site does nothing. For a type-π agent the sites are
//! `λ2` eigenstates and `iλ2` has eigenvalue `±i`, so the factor is
//! `diag(±i, 1)`. The head then stays pure along a 2-dimensional orbit, a
//! *primitive*. Any tape state is a superposition of sign patterns, and the
//! head Bloch vector is the weight-averaged primitive Bloch vectors.

pub mod recursion;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analysis::{classify_periodicity, BlochVector, PeriodicityReport};
use crate::error::{Error, Result};
use crate::statevec::lambda::{mat2_apply, Mat2};
use crate::statevec::{head_state, rotation_mat2, AgentType, Sign, StateVector, TapeBasis};

pub use recursion::{recursion_series, recursion_step, RecursionRow, RecursionState};

/// Largest ring for which all sign patterns are enumerated.
pub const PATTERN_SITE_LIMIT: usize = 20;
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

/// Eigenvalue pattern of a tape, one sign per site.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignPattern {
    signs: Vec<Sign>,
}

impl SignPattern {
    pub fn new(signs: Vec<Sign>) -> Self {
        Self { signs }
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    /// Position in [`enumerate_patterns`] order.
    pub fn index(&self) -> usize {
        self.signs
            .iter()
            .fold(0, |acc, s| (acc << 1) | usize::from(*s == Sign::Minus))
    }

    fn from_index(sites: usize, index: usize) -> Self {
        let signs = (0..sites)
            .map(|mu| {
                if index & (1 << (sites - 1 - mu)) != 0 {
                    Sign::Minus
                } else {
                    Sign::Plus
                }
            })
            .collect();
        Self { signs }
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.signs {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for SignPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let signs = crate::network::config::parse_signs(s)?;
        if signs.is_empty() {
            return Err(Error::InvalidPattern(s.to_string()));
        }
        Ok(Self { signs })
    }
}

/// All `2^M` patterns, lexicographic with `+` before `-`.
pub fn enumerate_patterns(sites: usize) -> Result<Vec<SignPattern>> {
    if sites > PATTERN_SITE_LIMIT {
        return Err(Error::EnumerationGuard {
            limit: PATTERN_SITE_LIMIT,
            requested: sites,
        });
    }
    Ok((0..1usize << sites)
        .map(|j| SignPattern::from_index(sites, j))
        .collect())
}

/// Head operator of a QCNOT acting on a tape site in the eigenstate `sign`.
pub fn head_conditional(kind: AgentType, sign: Sign) -> Mat2 {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let eigen = match kind {
        AgentType::Zero => Complex64::new(sign.value(), 0.0),
        AgentType::Pi => Complex64::new(0.0, sign.value()),
    };
    [[eigen, zero], [zero, one]]
}

/// Bloch vector of a single-qubit pure state.
pub fn head_bloch(v: &[Complex64; 2]) -> BlochVector {
    let cross = v[0].conj() * v[1];
    BlochVector::new(
        2.0 * cross.re,
        -2.0 * cross.im,
        v[1].norm_sqr() - v[0].norm_sqr(),
    )
}

fn expand_alphas(alphas: &[f64], sites: usize) -> Result<Vec<f64>> {
    match alphas.len() {
        1 => Ok(vec![alphas[0]; sites]),
        n if n == sites => Ok(alphas.to_vec()),
        n => Err(Error::InvalidConfig(format!(
            "{n} rotation angles for {sites} sites"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveTrajectory {
    pub pattern: SignPattern,
    pub kind: AgentType,
    /// Head state after step `m`, starting with `m = 0`.
    pub head_states: Vec<[Complex64; 2]>,
    pub bloch_samples: Vec<BlochVector>,
}

impl PrimitiveTrajectory {
    pub fn sites(&self) -> usize {
        self.pattern.len()
    }

    pub fn steps(&self) -> usize {
        self.head_states.len() - 1
    }

    pub fn periodicity(&self, horizon: usize) -> Result<PeriodicityReport> {
        classify_periodicity(&self.head_states, 2 * self.sites(), horizon)
    }
}

/// Evolves the head alone for a tape fixed in `pattern`, starting from
/// `cos(φ0/2)|0> - i sin(φ0/2)|1>`.
///
/// `alphas` holds one angle for all sites or one per site.
pub fn evolve_primitive(
    pattern: &SignPattern,
    phi0: f64,
    alphas: &[f64],
    kind: AgentType,
    steps: usize,
) -> Result<PrimitiveTrajectory> {
    evolve_primitive_from(pattern, head_state(phi0), alphas, kind, steps)
}

pub fn evolve_primitive_from(
    pattern: &SignPattern,
    head: [Complex64; 2],
    alphas: &[f64],
    kind: AgentType,
    steps: usize,
) -> Result<PrimitiveTrajectory> {
    let sites = pattern.len();
    if sites == 0 {
        return Err(Error::InvalidPattern(String::new()));
    }
    let n2 = head[0].norm_sqr() + head[1].norm_sqr();
    if (n2 - 1.0).abs() > crate::statevec::NORM_TOLERANCE {
        return Err(Error::NotNormalized(n2));
    }
    let alphas = expand_alphas(alphas, sites)?;
    // One cycle of head operators.
    let cycle: Vec<Mat2> = (1..=2 * sites)
        .map(|n| {
            let mu = n.div_ceil(2);
            if n % 2 == 1 {
                rotation_mat2(alphas[mu - 1])
            } else {
                head_conditional(kind, pattern.signs()[mu - 1])
            }
        })
        .collect();
    let mut head_states = Vec::with_capacity(steps + 1);
    head_states.push(head);
    let mut v = head;
    for m in 1..=steps {
        v = mat2_apply(&cycle[(m - 1) % cycle.len()], &v);
        head_states.push(v);
    }
    let bloch_samples = head_states.iter().map(head_bloch).collect();
    Ok(PrimitiveTrajectory {
        pattern: pattern.clone(),
        kind,
        head_states,
        bloch_samples,
    })
}

/// Uniform weights over every pattern: the decomposition of `|0...0>`,
/// since `|0>` is an equal superposition of the two eigenstates on each site.
pub fn ground_tape_weights(sites: usize) -> Result<Vec<(SignPattern, f64)>> {
    let patterns = enumerate_patterns(sites)?;
    Ok(uniform_weights(&patterns))
}

pub fn uniform_weights(patterns: &[SignPattern]) -> Vec<(SignPattern, f64)> {
    let w = 1.0 / patterns.len() as f64;
    patterns.iter().map(|p| (p.clone(), w)).collect()
}

/// `Σ_j a_j |head> ⊗ |P_j>` with the tape sites in the eigenbasis of `kind`.
pub fn superposed_initial_state(
    head: [Complex64; 2],
    amplitudes: &[(SignPattern, Complex64)],
    kind: AgentType,
) -> Result<StateVector> {
    let sites = amplitudes
        .first()
        .map(|(p, _)| p.len())
        .ok_or_else(|| Error::InvalidWeights("no patterns".into()))?;
    let basis = TapeBasis::for_agent(kind);
    let mut total = vec![Complex64::new(0.0, 0.0); 1 << (sites + 1)];
    for (pattern, a) in amplitudes {
        if pattern.len() != sites {
            return Err(Error::DimensionMismatch {
                expected: sites,
                actual: pattern.len(),
            });
        }
        let term = StateVector::sign_tape_in(&[head], pattern.signs(), basis)?;
        for (t, x) in total.iter_mut().zip(term.amplitudes()) {
            *t += a * x;
        }
    }
    StateVector::from_amplitudes(total)
}

/// Primitive trajectories with fixed weights `|a_j|^2`.
#[derive(Clone, Debug)]
pub struct PrimitiveEnsemble {
    weights: Vec<(SignPattern, f64)>,
    trajectories: HashMap<SignPattern, PrimitiveTrajectory>,
}

impl PrimitiveEnsemble {
    /// Checks that weights are non-negative and sum to one.
    pub fn new(weights: Vec<(SignPattern, f64)>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("no patterns".into()));
        }
        if let Some((p, w)) = weights.iter().find(|(_, w)| *w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidWeights(format!("weight {w} for {p}")));
        }
        let total: f64 = weights.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        Ok(Self {
            weights,
            trajectories: HashMap::new(),
        })
    }

    /// Weights `|a_j|^2` of the given tape amplitudes.
    pub fn from_amplitudes(amplitudes: &[(SignPattern, Complex64)]) -> Result<Self> {
        Self::new(
            amplitudes
                .iter()
                .map(|(p, a)| (p.clone(), a.norm_sqr()))
                .collect(),
        )
    }

    pub fn weights(&self) -> &[(SignPattern, f64)] {
        &self.weights
    }

    pub fn trajectory(&self, pattern: &SignPattern) -> Option<&PrimitiveTrajectory> {
        self.trajectories.get(pattern)
    }

    pub fn insert(&mut self, trajectory: PrimitiveTrajectory) {
        self.trajectories
            .insert(trajectory.pattern.clone(), trajectory);
    }

    /// Evolves every weighted pattern, in parallel.
    pub fn evolve(
        &mut self,
        head: [Complex64; 2],
        alphas: &[f64],
        kind: AgentType,
        steps: usize,
    ) -> Result<()> {
        let computed: Vec<PrimitiveTrajectory> = self
            .weights
            .par_iter()
            .map(|(p, _)| evolve_primitive_from(p, head, alphas, kind, steps))
            .collect::<Result<_>>()?;
        for t in computed {
            self.insert(t);
        }
        Ok(())
    }

    /// `Σ_j |a_j|^2 λ(m | P_j)`.
    pub fn reconstruct(&self, m: usize) -> Result<BlochVector> {
        let mut acc = BlochVector::default();
        for (pattern, w) in &self.weights {
            let t = self
                .trajectories
                .get(pattern)
                .ok_or_else(|| Error::MissingTrajectory(pattern.to_string()))?;
            let sample = t
                .bloch_samples
                .get(m)
                .ok_or_else(|| Error::TrajectoryTooShort {
                    pattern: pattern.to_string(),
                    len: t.bloch_samples.len(),
                    step: m,
                })?;
            acc = acc.add(&sample.scaled(*w));
        }
        Ok(acc)
    }

    pub fn reconstruct_series(&self, steps: usize) -> Result<Vec<BlochVector>> {
        (0..=steps).map(|m| self.reconstruct(m)).collect()
    }
}

pub fn reconstruct_reduced(ensemble: &PrimitiveEnsemble, m: usize) -> Result<BlochVector> {
    ensemble.reconstruct(m)
}
