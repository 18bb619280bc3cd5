use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{head_state, AgentType, Sign, StateVector, TapeBasis};

/// `π/√3`, the rotation angle used by every reference experiment.
pub fn default_alpha() -> f64 {
    PI / 3f64.sqrt()
}

/// Order in which the per-agent gate streams are merged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    /// Every step of S1, then every step of S2, and so on.
    Grouped,
    /// Rotation and QCNOT of S1 at a site, then those of S2, then the next site.
    #[default]
    Interleaved,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    /// `|0...0>` on agents and tape.
    Ground,
    /// Computational basis state, one bit per qubit in layout order.
    Basis(Vec<u8>),
    /// Every agent in `cos(φ0/2)|0> - i sin(φ0/2)|1>`, tape in `|±>` sites.
    SignTape {
        signs: Vec<Sign>,
        phi0: f64,
    },
    /// Equal-amplitude superposition of sign tapes, heads as in `SignTape`.
    PatternSuperposition {
        patterns: Vec<Vec<Sign>>,
        phi0: f64,
    },
    Amplitudes(Vec<Complex64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkConfig {
    pub agents: usize,
    pub sites: usize,
    pub agent_types: Vec<AgentType>,
    /// Rotation angle per ring site, radians.
    pub alphas: Vec<f64>,
    /// 1-based site each agent starts at.
    pub offsets: Vec<usize>,
    pub schedule: Schedule,
    pub initial: InitialState,
}

impl NetworkConfig {
    /// One agent of type `kind` on `sites` sites, ground state, single angle.
    pub fn single(sites: usize, kind: AgentType, alpha: f64) -> Self {
        Self::uniform(&[kind], sites, alpha)
    }

    pub fn uniform(kinds: &[AgentType], sites: usize, alpha: f64) -> Self {
        Self {
            agents: kinds.len(),
            sites,
            agent_types: kinds.to_vec(),
            alphas: vec![alpha; sites],
            offsets: vec![1; kinds.len()],
            schedule: Schedule::default(),
            initial: InitialState::Ground,
        }
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn with_initial(mut self, initial: InitialState) -> Self {
        self.initial = initial;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.agents + self.sites
    }

    /// Qubit index of 1-based ring site `site`.
    pub fn site_qubit(&self, site: usize) -> usize {
        self.agents + site - 1
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.agents == 0 {
            return bad("K must be at least 1".into());
        }
        if self.sites == 0 {
            return bad("M must be at least 1".into());
        }
        if self.agent_types.len() != self.agents {
            return bad(format!(
                "{} agent types given for K = {}",
                self.agent_types.len(),
                self.agents
            ));
        }
        if self.offsets.len() != self.agents {
            return bad(format!(
                "{} offsets given for K = {}",
                self.offsets.len(),
                self.agents
            ));
        }
        if let Some(o) = self.offsets.iter().find(|o| **o < 1 || **o > self.sites) {
            return bad(format!("offset {o} outside 1..={}", self.sites));
        }
        if self.alphas.len() != self.sites {
            return bad(format!(
                "{} angles given for M = {}",
                self.alphas.len(),
                self.sites
            ));
        }
        if self.alphas.iter().any(|a| !a.is_finite()) {
            return bad("non-finite rotation angle".into());
        }
        Ok(())
    }

    pub fn initial_state(&self) -> Result<StateVector> {
        self.validate()?;
        let n = self.n_qubits();
        let state = match &self.initial {
            InitialState::Ground => StateVector::new(n),
            InitialState::Basis(bits) => StateVector::basis(n, bits)?,
            InitialState::SignTape { signs, phi0 } => {
                if signs.len() != self.sites {
                    return Err(Error::DimensionMismatch {
                        expected: self.sites,
                        actual: signs.len(),
                    });
                }
                let heads = vec![head_state(*phi0); self.agents];
                StateVector::sign_tape_in(&heads, signs, TapeBasis::Lambda1)?
            }
            InitialState::PatternSuperposition { patterns, phi0 } => {
                if patterns.is_empty() {
                    return Err(Error::InvalidConfig("empty pattern list".into()));
                }
                let heads = vec![head_state(*phi0); self.agents];
                let weight = Complex64::new(1.0 / (patterns.len() as f64).sqrt(), 0.0);
                let mut total = vec![Complex64::new(0.0, 0.0); 1 << n];
                for signs in patterns {
                    if signs.len() != self.sites {
                        return Err(Error::DimensionMismatch {
                            expected: self.sites,
                            actual: signs.len(),
                        });
                    }
                    let term = StateVector::sign_tape_in(&heads, signs, TapeBasis::Lambda1)?;
                    for (t, x) in total.iter_mut().zip(term.amplitudes()) {
                        *t += weight * x;
                    }
                }
                StateVector::from_amplitudes(total)?
            }
            InitialState::Amplitudes(a) => {
                if a.len() != 1 << n {
                    return Err(Error::DimensionMismatch {
                        expected: 1 << n,
                        actual: a.len(),
                    });
                }
                StateVector::from_amplitudes(a.clone())?
            }
        };
        Ok(state)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: NetworkConfigFile = serde_json::from_str(text)?;
        file.into_config()
    }
}

/// `alpha`: one number for every site, or one per site.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Single(f64),
    PerSite(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialSpec {
    /// Only `"ground"` is accepted.
    Named(String),
    Bits {
        bits: Vec<u8>,
    },
    Signs {
        signs: String,
        #[serde(default)]
        phi0: f64,
    },
    Patterns {
        patterns: Vec<String>,
        #[serde(default)]
        phi0: f64,
    },
    Amplitudes {
        amplitudes: Vec<[f64; 2]>,
    },
}

/// On-disk form of [`NetworkConfig`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfigFile {
    #[serde(rename = "K", default = "one")]
    pub agents: usize,
    #[serde(rename = "M")]
    pub sites: usize,
    #[serde(default)]
    pub theta: Option<Vec<AgentType>>,
    #[serde(default)]
    pub alpha: Option<AlphaSpec>,
    #[serde(default)]
    pub offsets: Option<Vec<usize>>,
    #[serde(default)]
    pub schedule: Option<Schedule>,
    #[serde(default)]
    pub initial: Option<InitialSpec>,
    #[serde(default)]
    pub steps: Option<usize>,
}

fn one() -> usize {
    1
}

pub fn parse_signs(text: &str) -> Result<Vec<Sign>> {
    text.chars()
        .map(|c| Sign::from_char(c).ok_or_else(|| Error::InvalidPattern(text.to_string())))
        .collect()
}

impl NetworkConfigFile {
    pub fn into_config(self) -> Result<NetworkConfig> {
        let k = self.agents;
        let m = self.sites;
        let alphas = match self.alpha {
            None => vec![default_alpha(); m],
            Some(AlphaSpec::Single(a)) => vec![a; m],
            Some(AlphaSpec::PerSite(v)) => v,
        };
        let initial = match self.initial {
            None => InitialState::Ground,
            Some(InitialSpec::Named(name)) if name == "ground" => InitialState::Ground,
            Some(InitialSpec::Named(name)) => {
                return Err(Error::InvalidConfig(format!(
                    "unknown initial state {name:?}"
                )))
            }
            Some(InitialSpec::Bits { bits }) => InitialState::Basis(bits),
            Some(InitialSpec::Signs { signs, phi0 }) => InitialState::SignTape {
                signs: parse_signs(&signs)?,
                phi0,
            },
            Some(InitialSpec::Patterns { patterns, phi0 }) => InitialState::PatternSuperposition {
                patterns: patterns
                    .iter()
                    .map(|p| parse_signs(p))
                    .collect::<Result<_>>()?,
                phi0,
            },
            Some(InitialSpec::Amplitudes { amplitudes }) => InitialState::Amplitudes(
                amplitudes
                    .into_iter()
                    .map(|[re, im]| Complex64::new(re, im))
                    .collect(),
            ),
        };
        let config = NetworkConfig {
            agents: k,
            sites: m,
            agent_types: self.theta.unwrap_or_else(|| vec![AgentType::Zero; k]),
            alphas,
            offsets: self.offsets.unwrap_or_else(|| vec![1; k]),
            schedule: self.schedule.unwrap_or_default(),
            initial,
        };
        config.validate()?;
        Ok(config)
    }
}
