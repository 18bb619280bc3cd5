//! Built-in invariant checks behind `spinring verify`.
//!
//! Each check reports one measured value against a tolerance. Most values are
//! defects that must stay below their tolerance; a few (divergence of
//! mixed-type agents) must exceed it. `quick` runs reduced sizes in a few
//! seconds, `full` runs the reference sizes.

use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{
    all_cluster_sums, bloch_return_period, max_trajectory_defect, sum_rule_check, BlochVector,
    DEFAULT_HORIZON,
};
use crate::error::{Error, Result};
use crate::network::{
    bloch_trajectories, commutator_dense, default_alpha, run, Gate, NetworkConfig, Schedule,
};
use crate::primitives::{
    enumerate_patterns, evolve_primitive, ground_tape_weights, recursion_series, PrimitiveEnsemble,
    SignPattern,
};
use crate::statevec::dense::embed;
use crate::statevec::lambda::{transition, Lambda};
use crate::statevec::{head_state, random_state, AgentType, StateVector};

const SEED: u64 = 0x5eed_0001;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => Err(Error::InvalidConfig(format!("unknown level {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Below,
    Above,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub passed: bool,
}

impl Check {
    fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            relation: Relation::Below,
            passed: value < tolerance,
        }
    }

    fn above(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            relation: Relation::Above,
            passed: value > tolerance,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub level: Level,
    pub passed: bool,
    pub checks: Vec<Check>,
}

struct Sizes {
    random_states: usize,
    triple_sites: usize,
    triple_steps: usize,
    recursion_sites: usize,
    evolved_sites: usize,
    evolved_steps: &'static [usize],
    independence_steps: usize,
    mixed_steps: usize,
}

impl Sizes {
    fn for_level(level: Level) -> Self {
        match level {
            Level::Quick => Sizes {
                random_states: 50,
                triple_sites: 4,
                triple_steps: 200,
                recursion_sites: 6,
                evolved_sites: 5,
                evolved_steps: &[100],
                independence_steps: 200,
                mixed_steps: 1000,
            },
            Level::Full => Sizes {
                random_states: 1000,
                triple_sites: 6,
                triple_steps: 1000,
                recursion_sites: 10,
                evolved_sites: 7,
                evolved_steps: &[100, 1000],
                independence_steps: 2000,
                mixed_steps: 4500,
            },
        }
    }
}

pub fn run_verify(level: Level) -> Result<VerifyReport> {
    let sizes = Sizes::for_level(level);
    let mut checks = Vec::new();
    checks.extend(gate_identities(&sizes)?);
    checks.extend(commutators()?);
    checks.extend(triple_agreement(&sizes)?);
    checks.extend(primitive_structure()?);
    checks.extend(sum_rule(&sizes)?);
    checks.extend(independence(&sizes)?);
    checks.extend(mixed_divergence(&sizes)?);
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        level,
        passed,
        checks,
    })
}

fn gate_identities(sizes: &Sizes) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut d0, mut dpi) = (0f64, 0f64);
    for _ in 0..sizes.random_states {
        let psi = random_state(2, &mut rng);
        let mut a = psi.clone();
        for _ in 0..2 {
            a.apply_qcnot(0, 1, AgentType::Zero)?;
        }
        d0 = d0.max(a.distance(&psi));
        let mut b = psi.clone();
        for _ in 0..4 {
            b.apply_qcnot(0, 1, AgentType::Pi)?;
        }
        dpi = dpi.max(b.distance(&psi));
    }
    Ok(vec![
        Check::below("gate.u0_squared_is_identity", d0, 1e-12),
        Check::below("gate.upi_fourth_is_identity", dpi, 1e-12),
    ])
}

fn commutators() -> Result<Vec<Check>> {
    let u0 = Gate::Qcnot {
        agent: 0,
        env: 2,
        kind: AgentType::Zero,
    };
    let u0b = Gate::Qcnot {
        agent: 1,
        env: 2,
        kind: AgentType::Zero,
    };
    let upi = Gate::Qcnot {
        agent: 1,
        env: 2,
        kind: AgentType::Pi,
    };
    let upi_far = Gate::Qcnot {
        agent: 1,
        env: 3,
        kind: AgentType::Pi,
    };
    let same = commutator_dense(&u0, &u0b, 3)?.max_abs();
    let expected = embed(
        3,
        &[
            (0, transition(0, 0)),
            (1, transition(0, 0)),
            (2, Lambda::L3.matrix()),
        ],
    )?
    .scale((-2.0).into());
    let mixed = commutator_dense(&u0, &upi, 3)?.max_abs_diff(&expected);
    let far = commutator_dense(&u0, &upi_far, 4)?.max_abs();
    Ok(vec![
        Check::below("commutator.same_type", same, 1e-12),
        Check::below("commutator.mixed_type_same_site", mixed, 1e-12),
        Check::below("commutator.different_sites", far, 1e-12),
    ])
}

fn l23_defect(a: &[BlochVector], b: &[(f64, f64)]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, (y, z))| (x.l2 - y).abs().max((x.l3 - z).abs()))
        .fold(0.0, f64::max)
}

fn triple_agreement(sizes: &Sizes) -> Result<Vec<Check>> {
    let alpha = default_alpha();
    let steps = sizes.triple_steps;
    let (mut sim_rec, mut sim_dec, mut rec_dec) = (0f64, 0f64, 0f64);
    for sites in 1..=sizes.recursion_sites {
        let sim = bloch_trajectories(&NetworkConfig::single(sites, AgentType::Zero, alpha), steps)?
            .0
            .remove(0);
        let rec: Vec<(f64, f64)> = std::iter::once((0.0, -1.0))
            .chain(
                recursion_series(sites, alpha, steps)?
                    .iter()
                    .map(|r| (r.y, r.z)),
            )
            .collect();
        sim_rec = sim_rec.max(l23_defect(&sim, &rec));
        if sites <= sizes.triple_sites {
            let mut ens = PrimitiveEnsemble::new(ground_tape_weights(sites)?)?;
            ens.evolve(head_state(0.0), &[alpha], AgentType::Zero, steps)?;
            let dec = ens.reconstruct_series(steps)?;
            sim_dec = sim_dec.max(max_trajectory_defect(&sim, &dec));
            rec_dec = rec_dec.max(l23_defect(&dec, &rec));
        }
    }
    Ok(vec![
        Check::below("triple.simulation_vs_recursion", sim_rec, 1e-10),
        Check::below("triple.simulation_vs_primitives", sim_dec, 1e-10),
        Check::below("triple.recursion_vs_primitives", rec_dec, 1e-10),
    ])
}

fn primitive_structure() -> Result<Vec<Check>> {
    let alpha = default_alpha();
    let phi0 = std::f64::consts::FRAC_PI_6;
    let steps = DEFAULT_HORIZON * 4;
    let mut misclassified = 0usize;
    let mut off_sphere = 0f64;
    for p in enumerate_patterns(2)? {
        let t = evolve_primitive(&p, phi0, &[alpha], AgentType::Zero, steps)?;
        let expect_periodic = p != "++".parse::<SignPattern>()?;
        if t.periodicity(DEFAULT_HORIZON)?.is_periodic() != expect_periodic {
            misclassified += 1;
        }
        for b in &t.bloch_samples {
            off_sphere = off_sphere.max(b.l1.abs()).max((b.length() - 1.0).abs());
        }
    }
    Ok(vec![
        Check::below(
            "primitives.misclassified_patterns",
            misclassified as f64,
            0.5,
        ),
        Check::below("primitives.pure_planar_orbits", off_sphere, 1e-10),
    ])
}

fn sum_rule(sizes: &Sizes) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut defect = 0f64;
    let mut bound = f64::NEG_INFINITY;
    let mut record = |state: &StateVector| -> Result<()> {
        defect = defect.max(sum_rule_check(state)?.defect);
        for c in all_cluster_sums(state)? {
            bound = bound.max(c.y - c.z);
        }
        Ok(())
    };
    for i in 0..sizes.random_states.min(100) {
        record(&random_state(1 + i % 6, &mut rng))?;
    }
    for sites in 3..=sizes.evolved_sites {
        let config = NetworkConfig::single(sites, AgentType::Zero, default_alpha());
        for &steps in sizes.evolved_steps {
            record(&run(&config, steps, |_| {})?)?;
        }
    }
    Ok(vec![
        Check::below("clusters.sum_rule", defect, 1e-9),
        Check::below("clusters.bound_excess", bound, 1e-9),
    ])
}

fn independence(sizes: &Sizes) -> Result<Vec<Check>> {
    let alpha = default_alpha();
    let steps = sizes.independence_steps;
    let (mut solo_duo, mut schedules) = (0f64, 0f64);
    for sites in 1..=2 {
        let solo =
            bloch_trajectories(&NetworkConfig::single(sites, AgentType::Zero, alpha), steps)?
                .0
                .remove(0);
        let duo_cfg = NetworkConfig::uniform(&[AgentType::Zero; 2], sites, alpha);
        let (duo, interleaved) = bloch_trajectories(&duo_cfg, steps)?;
        for traj in &duo {
            solo_duo = solo_duo.max(max_trajectory_defect(&solo, traj));
        }
        let grouped = run(&duo_cfg.with_schedule(Schedule::Grouped), steps, |_| {})?;
        schedules = schedules.max(grouped.distance(&interleaved));
    }
    Ok(vec![
        Check::below("independence.solo_vs_pair", solo_duo, 1e-10),
        Check::below("independence.schedule_order", schedules, 1e-10),
    ])
}

fn mixed_divergence(sizes: &Sizes) -> Result<Vec<Check>> {
    let alpha = default_alpha();
    let steps = sizes.mixed_steps;
    let solo = bloch_trajectories(&NetworkConfig::single(2, AgentType::Zero, alpha), steps)?
        .0
        .remove(0);
    let mixed = bloch_trajectories(
        &NetworkConfig::uniform(&[AgentType::Zero, AgentType::Pi], 2, alpha),
        steps,
    )?
    .0
    .remove(0);
    // Any return to the starting point inside the horizon would mean regular motion.
    let returns = bloch_return_period(&mixed, 4, DEFAULT_HORIZON, 1e-6).map_or(0.0, |p| p as f64);
    Ok(vec![
        Check::above(
            "interference.mixed_type_divergence",
            max_trajectory_defect(&solo, &mixed),
            1e-6,
        ),
        Check::below("interference.return_period_within_horizon", returns, 0.5),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suite_passes() {
        let report = run_verify(Level::Quick).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{c:?}");
        }
        assert!(report.passed);
    }

    #[test]
    fn relations() {
        assert!(Check::below("a", 1e-13, 1e-12).passed);
        assert!(!Check::below("a", 1e-12, 1e-12).passed);
        assert!(Check::above("a", 1e-3, 1e-6).passed);
        assert!(!Check::above("a", 1e-7, 1e-6).passed);
        assert_eq!("full".parse::<Level>().unwrap(), Level::Full);
        assert!("slow".parse::<Level>().is_err());
    }
}
