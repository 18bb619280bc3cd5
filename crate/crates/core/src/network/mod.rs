//! Agents walking a ring of environment qubits.
//!
//! Each agent cycles through `2M` steps: odd step `2μ-1` rotates the agent,
//! even step `2μ` couples it to its current site with a QCNOT of the agent's
//! type. An agent with offset `o` meets site `((μ - 1 + o - 1) mod M) + 1` at
//! its `μ`-th pair of steps.

pub mod config;

use crate::analysis::{reduced_bloch, BlochVector};
use crate::error::{Error, Result};
use crate::statevec::dense::{self, DenseMatrix};
use crate::statevec::{AgentType, StateVector};

pub use config::{
    default_alpha, AlphaSpec, InitialSpec, InitialState, NetworkConfig, NetworkConfigFile, Schedule,
};

/// Largest register [`commutator_dense`] accepts.
pub const COMMUTATOR_QUBIT_LIMIT: usize = 6;

/// Position of one agent in its own step sequence.
///
/// `m` is the total step number, `n` the step within the current cycle
/// (`1..=2M`) and `p` the cycle number, so `m = n + 2M(p - 1)`. Before the
/// first step `m = n = 0` and `p = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StepCounter {
    pub m: usize,
    pub n: usize,
    pub p: usize,
}

impl StepCounter {
    pub fn from_step(m: usize, sites: usize) -> Self {
        if m == 0 {
            return Self { m: 0, n: 0, p: 1 };
        }
        let cycle = 2 * sites;
        let p = (m - 1) / cycle + 1;
        Self {
            m,
            n: m - cycle * (p - 1),
            p,
        }
    }

    /// True before the first step and after the last step of every cycle.
    pub fn is_cycle_boundary(&self, sites: usize) -> bool {
        self.m.is_multiple_of(2 * sites)
    }
}

/// A gate with its register indices resolved.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Rotation {
        qubit: usize,
        alpha: f64,
    },
    Qcnot {
        agent: usize,
        env: usize,
        kind: AgentType,
    },
}

impl Gate {
    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        match *self {
            Gate::Rotation { qubit, alpha } => state.apply_local_rotation(qubit, alpha),
            Gate::Qcnot { agent, env, kind } => state.apply_qcnot(agent, env, kind),
        }
    }

    /// Dense matrix built from Kronecker products, independent of the kernels.
    pub fn dense(&self, n_qubits: usize) -> Result<DenseMatrix> {
        match *self {
            Gate::Rotation { qubit, alpha } => dense::rotation_matrix(n_qubits, qubit, alpha),
            Gate::Qcnot { agent, env, kind } => dense::qcnot_matrix(n_qubits, agent, env, kind),
        }
    }
}

/// What one agent does at one step of its cycle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateStep {
    /// 0-based agent index (qubit index of the agent).
    pub agent: usize,
    /// Step within the cycle, `1..=2M`.
    pub n: usize,
    /// 1-based ring site the agent is at.
    pub site: usize,
    pub gate: Gate,
}

/// Gate applied by `agent` at in-cycle step `n`.
///
/// The rotation angle is the one attached to the site the agent currently
/// occupies.
pub fn step_unitary(config: &NetworkConfig, agent: usize, n: usize) -> Result<GateStep> {
    let m_sites = config.sites;
    if n == 0 || n > 2 * m_sites {
        return Err(Error::StepOutOfRange {
            n,
            max: 2 * m_sites,
        });
    }
    if agent >= config.agents {
        return Err(Error::IndexOutOfRange {
            index: agent,
            n_qubits: config.agents,
        });
    }
    let mu = n.div_ceil(2);
    let site = (mu - 1 + config.offsets[agent] - 1) % m_sites + 1;
    let gate = if n % 2 == 1 {
        Gate::Rotation {
            qubit: agent,
            alpha: config.alphas[site - 1],
        }
    } else {
        Gate::Qcnot {
            agent,
            env: config.site_qubit(site),
            kind: config.agent_types[agent],
        }
    };
    Ok(GateStep {
        agent,
        n,
        site,
        gate,
    })
}

/// Passed to the observer after every gate.
pub struct StepEvent<'a> {
    pub agent: usize,
    pub counter: StepCounter,
    pub step: GateStep,
    pub state: &'a StateVector,
}

/// Order in which `(agent, m)` steps are executed for `steps` steps per agent.
pub fn schedule_order(config: &NetworkConfig, steps: usize) -> Vec<(usize, usize)> {
    let mut order = Vec::with_capacity(steps * config.agents);
    match config.schedule {
        Schedule::Grouped => {
            for agent in 0..config.agents {
                order.extend((1..=steps).map(|m| (agent, m)));
            }
        }
        Schedule::Interleaved => {
            for pair in 0..steps.div_ceil(2) {
                for agent in 0..config.agents {
                    for m in [2 * pair + 1, 2 * pair + 2] {
                        if m <= steps {
                            order.push((agent, m));
                        }
                    }
                }
            }
        }
    }
    order
}

/// Runs `steps` steps per agent from the configured initial state.
pub fn run<F>(config: &NetworkConfig, steps: usize, observer: F) -> Result<StateVector>
where
    F: FnMut(&StepEvent<'_>),
{
    let state = config.initial_state()?;
    run_from(config, state, steps, observer)
}

/// Runs `steps` steps per agent starting from `state`.
pub fn run_from<F>(
    config: &NetworkConfig,
    state: StateVector,
    steps: usize,
    observer: F,
) -> Result<StateVector>
where
    F: FnMut(&StepEvent<'_>),
{
    run_from_step(config, state, 0, steps, observer)
}

/// Runs steps `done + 1 ..= done + steps` of every agent starting from `state`.
///
/// The schedule is built for this call alone. With two or more agents,
/// splitting a run at an odd step count can reorder gates of different
/// agents relative to one uninterrupted run.
pub fn run_from_step<F>(
    config: &NetworkConfig,
    mut state: StateVector,
    done: usize,
    steps: usize,
    mut observer: F,
) -> Result<StateVector>
where
    F: FnMut(&StepEvent<'_>),
{
    config.validate()?;
    if state.n_qubits() != config.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: config.n_qubits(),
            actual: state.n_qubits(),
        });
    }
    // The gate sequence of one cycle, per agent.
    let cycles: Vec<Vec<GateStep>> = (0..config.agents)
        .map(|a| {
            (1..=2 * config.sites)
                .map(|n| step_unitary(config, a, n))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    for (agent, m) in schedule_order(config, steps) {
        let counter = StepCounter::from_step(done + m, config.sites);
        let step = cycles[agent][counter.n - 1];
        step.gate.apply(&mut state)?;
        observer(&StepEvent {
            agent,
            counter,
            step,
            state: &state,
        });
    }
    Ok(state)
}

/// Reduced Bloch vector of every agent after each of its own steps.
///
/// `result[k][m]` is agent `k` right after its step `m`; `m = 0` is the
/// initial state.
pub fn bloch_trajectories(
    config: &NetworkConfig,
    steps: usize,
) -> Result<(Vec<Vec<BlochVector>>, StateVector)> {
    let state = config.initial_state()?;
    let mut out: Vec<Vec<BlochVector>> = (0..config.agents)
        .map(|k| {
            let mut v = Vec::with_capacity(steps + 1);
            v.push(reduced_bloch(&state, k)?);
            Ok(v)
        })
        .collect::<Result<_>>()?;
    let mut failure = None;
    let state = run_from(config, state, steps, |e| {
        match reduced_bloch(e.state, e.agent) {
            Ok(b) => out[e.agent].push(b),
            Err(err) => failure = Some(err),
        }
    })?;
    match failure {
        Some(err) => Err(err),
        None => Ok((out, state)),
    }
}

/// `AB - BA` as a dense matrix on `n_qubits` qubits.
pub fn commutator_dense(a: &Gate, b: &Gate, n_qubits: usize) -> Result<DenseMatrix> {
    dense::guard(n_qubits, COMMUTATOR_QUBIT_LIMIT)?;
    let da = a.dense(n_qubits)?;
    let db = b.dense(n_qubits)?;
    Ok(da.matmul(&db).sub(&db.matmul(&da)))
}
