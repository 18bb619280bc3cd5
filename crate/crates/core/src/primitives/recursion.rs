//! Closed recursion for the head Bloch vector of one type-0 agent started
//! in `|0> ⊗ |0...0>`.
//!
//! With `λ1 = 0`, `λ2 = Y_m` and `λ3 = Z_m`:
//!
//! | rule                                   | condition            |
//! |----------------------------------------|----------------------|
//! | `Y_m = -Y_1 Z_{m-1} - Z_1 Y_{m-1}`     | n odd                |
//! | `Y_m = Y_{m-1} + Y_1 Z_{m',M-2}`       | n even, n != 2M      |
//! | `Y_m = Y_{m-1} - Y_1 (-Z_1)^(M-1)`     | n = 2M, p odd        |
//! | `Y_m = Y_{m-1}`                        | n = 2M, p even       |
//! | `Z_m = -Z_1 Z_{m-1} + Y_1 Y_{m-1}`     | n odd                |
//! | `Z_m = -Z_1 Z_{m-2} + Y_1 Y_{m-2}`     | n even               |
//!
//! with `m' = m - 4p + 2`, `Z_{m,0} = -1`, seeds `Y_0 = 0`, `Z_0 = -1`,
//! `Y_1 = sin α`, `Z_1 = -cos α`. The `n != 2M` rule pulls `Z` from the ring
//! two sites shorter, so a state for `M` owns a chain of states for
//! `M - 2, M - 4, ...` that are advanced lazily.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::StepCounter;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RecursionRow {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    #[serde(rename = "Y")]
    pub y: f64,
    #[serde(rename = "Z")]
    pub z: f64,
}

#[derive(Clone, Debug)]
pub struct RecursionState {
    sites: usize,
    y1: f64,
    z1: f64,
    /// `(Y_m, Z_m)` for every `m` computed so far, starting at `m = 0`.
    history: Vec<(f64, f64)>,
    shorter: Option<Box<RecursionState>>,
}

impl RecursionState {
    pub fn new(sites: usize, alpha: f64) -> Result<Self> {
        if sites == 0 {
            return Err(Error::InvalidConfig("recursion needs M >= 1".into()));
        }
        Ok(Self::with_seeds(sites, alpha.sin(), -alpha.cos()))
    }

    fn with_seeds(sites: usize, y1: f64, z1: f64) -> Self {
        let shorter = (sites > 2).then(|| Box::new(Self::with_seeds(sites - 2, y1, z1)));
        Self {
            sites,
            y1,
            z1,
            history: vec![(0.0, -1.0)],
            shorter,
        }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    /// Last step computed.
    pub fn step_index(&self) -> usize {
        self.history.len() - 1
    }

    pub fn counter(&self) -> StepCounter {
        StepCounter::from_step(self.step_index(), self.sites)
    }

    pub fn current(&self) -> (f64, f64) {
        *self.history.last().unwrap()
    }

    pub fn history(&self) -> &[(f64, f64)] {
        &self.history
    }

    pub fn get(&self, m: usize) -> Option<(f64, f64)> {
        self.history.get(m).copied()
    }

    /// `Z_{m,M}` for this ring, advancing it as needed.
    fn z_at(&mut self, m: usize) -> Result<f64> {
        while self.step_index() < m {
            self.advance()?;
        }
        self.get(m).map(|(_, z)| z).ok_or(Error::MissingHistory {
            sites: self.sites,
            step: m,
        })
    }

    /// `Z_{m', M-2}`, with `Z_{m,0} = -1`.
    fn z_shorter(&mut self, m_prime: usize) -> Result<f64> {
        match self.shorter.as_mut() {
            Some(s) => s.z_at(m_prime),
            None if self.sites == 2 => Ok(-1.0),
            None => Err(Error::MissingHistory {
                sites: self.sites.saturating_sub(2),
                step: m_prime,
            }),
        }
    }

    /// Applies the one rule selected by `(n, p)` for the next step.
    pub fn advance(&mut self) -> Result<(f64, f64)> {
        let m = self.step_index() + 1;
        let StepCounter { n, p, .. } = StepCounter::from_step(m, self.sites);
        let (y1, z1) = (self.y1, self.z1);
        let sites = self.sites;
        let missing = |step| Error::MissingHistory { sites, step };
        let (y_prev, z_prev) = self.get(m - 1).ok_or_else(|| missing(m - 1))?;
        let next = if n % 2 == 1 {
            (-y1 * z_prev - z1 * y_prev, -z1 * z_prev + y1 * y_prev)
        } else {
            let y = if n != 2 * sites {
                let m_prime = (m + 2).checked_sub(4 * p).ok_or_else(|| missing(m))?;
                y_prev + y1 * self.z_shorter(m_prime)?
            } else if p % 2 == 1 {
                y_prev - y1 * (-z1).powi(sites as i32 - 1)
            } else {
                y_prev
            };
            let (y_back, z_back) = self.get(m - 2).ok_or_else(|| missing(m - 2))?;
            (y, -z1 * z_back + y1 * y_back)
        };
        self.history.push(next);
        Ok(next)
    }
}

/// Advances `state` by one step and returns the row just produced.
pub fn recursion_step(state: &mut RecursionState) -> Result<RecursionRow> {
    let (y, z) = state.advance()?;
    let c = state.counter();
    Ok(RecursionRow {
        m: c.m,
        n: c.n,
        p: c.p,
        y,
        z,
    })
}

/// Rows for `m = 1..=steps`.
pub fn recursion_series(sites: usize, alpha: f64, steps: usize) -> Result<Vec<RecursionRow>> {
    let mut state = RecursionState::new(sites, alpha)?;
    (0..steps).map(|_| recursion_step(&mut state)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn first_step_is_the_seed() {
        let alpha = PI / 3f64.sqrt();
        for sites in 1..6 {
            let rows = recursion_series(sites, alpha, 1).unwrap();
            assert_eq!(rows.len(), 1);
            assert_eq!((rows[0].m, rows[0].n, rows[0].p), (1, 1, 1));
            assert!((rows[0].y - alpha.sin()).abs() < 1e-15);
            assert!((rows[0].z + alpha.cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn single_site_second_step() {
        let alpha = PI / 3f64.sqrt();
        let rows = recursion_series(1, alpha, 2).unwrap();
        assert_eq!((rows[1].n, rows[1].p), (2, 1));
        assert!(rows[1].y.abs() < 1e-15);
        assert!((rows[1].z + alpha.cos()).abs() < 1e-15);
    }

    #[test]
    fn shorter_chain_depth() {
        let s = RecursionState::new(7, 0.3).unwrap();
        let mut depth = 0;
        let mut cur = Some(&s);
        while let Some(c) = cur {
            depth += 1;
            cur = c.shorter.as_deref();
        }
        assert_eq!(depth, 4); // 7, 5, 3, 1
        assert!(RecursionState::new(0, 0.3).is_err());
    }

    #[test]
    fn stays_inside_bloch_disc() {
        for sites in 1..8 {
            for (y, z) in recursion_series(sites, 1.3, 500)
                .unwrap()
                .iter()
                .map(|r| (r.y, r.z))
            {
                assert!(y * y + z * z <= 1.0 + 1e-9);
            }
        }
    }
}
