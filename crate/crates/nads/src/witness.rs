//! Witness objects: concrete (points, time, separation) evidence for the
//! existential clauses of the sensitivity definitions, with replay checks.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::point::Point;
use crate::sequence::MapSequence;

/// Evidence that some y within eps of x separates beyond delta at time n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityWitness {
    pub x: Point,
    pub y: Point,
    pub n: u64,
    pub separation: f64,
    pub eps_used: f64,
}

impl SensitivityWitness {
    /// Recompute both orbits and confirm the witness invariants:
    /// d(x, y) < eps_used and the stored separation is reproduced > delta.
    pub fn revalidate(&self, seq: &MapSequence, delta: f64) -> Result<bool> {
        let space = &seq.space;
        if !(space.distance(&self.x, &self.y)? < self.eps_used) {
            return Ok(false);
        }
        let sx = seq.trajectory_scan(&self.x, self.n)?;
        let sy = seq.trajectory_scan(&self.y, self.n)?;
        if (sx.points.len() as u64) <= self.n || (sy.points.len() as u64) <= self.n {
            return Ok(false);
        }
        let sep = space.distance(&sx.points[self.n as usize], &sy.points[self.n as usize])?;
        Ok(sep > delta && (sep - self.separation).abs() <= 1e-12)
    }
}

/// Which clause of the n-point separation condition fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessMode {
    /// d(f_1^k(x_i), f_1^k(y_{i0})) >= delta for every i.
    XAgainstAnchorY,
    /// d(f_1^k(y_i), f_1^k(x_{i0})) >= delta for every i.
    YAgainstAnchorX,
    /// d(f_1^k(x_i), f_1^k(y_i)) >= delta for every i at the common k.
    Synchronous,
}

/// n-point witness for collective or synchronous sensitivity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollectiveWitness {
    pub xs: Vec<Point>,
    pub ys: Vec<Point>,
    pub k: u64,
    /// Anchor index for the two collective modes; unused for synchronous.
    pub i0: Option<usize>,
    pub mode: WitnessMode,
    pub separations: Vec<f64>,
}

impl CollectiveWitness {
    /// Recompute all orbits and confirm d(x_i, y_i) < eps plus the mode's
    /// separation condition at delta.
    pub fn revalidate(&self, seq: &MapSequence, delta: f64, eps: f64) -> Result<bool> {
        let space = &seq.space;
        let n = self.xs.len();
        if n == 0 || self.ys.len() != n || self.separations.len() != n {
            return Ok(false);
        }
        for (x, y) in self.xs.iter().zip(&self.ys) {
            if !(space.distance(x, y)? < eps) {
                return Ok(false);
            }
        }
        let mut fx = Vec::with_capacity(n);
        let mut fy = Vec::with_capacity(n);
        for i in 0..n {
            fx.push(seq.apply_window(1, self.k, &self.xs[i])?);
            fy.push(seq.apply_window(1, self.k, &self.ys[i])?);
        }
        let seps: Vec<f64> = match self.mode {
            WitnessMode::XAgainstAnchorY => {
                let Some(i0) = self.i0 else { return Ok(false) };
                (0..n)
                    .map(|i| space.distance(&fx[i], &fy[i0]))
                    .collect::<Result<_>>()?
            }
            WitnessMode::YAgainstAnchorX => {
                let Some(i0) = self.i0 else { return Ok(false) };
                (0..n)
                    .map(|i| space.distance(&fy[i], &fx[i0]))
                    .collect::<Result<_>>()?
            }
            WitnessMode::Synchronous => (0..n)
                .map(|i| space.distance(&fx[i], &fy[i]))
                .collect::<Result<_>>()?,
        };
        Ok(seps.iter().all(|&d| d >= delta)
            && seps
                .iter()
                .zip(&self.separations)
                .all(|(a, b)| (a - b).abs() <= 1e-12))
    }

    /// A synchronous witness restates as one plain witness per index.
    pub fn per_index_witnesses(&self, eps: f64) -> Vec<SensitivityWitness> {
        self.xs
            .iter()
            .zip(&self.ys)
            .zip(&self.separations)
            .map(|((x, y), &sep)| SensitivityWitness {
                x: x.clone(),
                y: y.clone(),
                n: self.k,
                separation: sep,
                eps_used: eps,
            })
            .collect()
    }
}

/// Two points near the origin of a linear system separating at time k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroWitness {
    pub z1: Point,
    pub z2: Point,
    pub k: u64,
    pub separation: f64,
}

impl ZeroWitness {
    pub fn revalidate(&self, seq: &MapSequence, eps: f64, eta: f64) -> Result<bool> {
        let space = &seq.space;
        let zero = space.zero();
        if !(space.distance(&self.z1, &zero)? < eps) || !(space.distance(&self.z2, &zero)? < eps) {
            return Ok(false);
        }
        let a = seq.apply_window(1, self.k, &self.z1)?;
        let b = seq.apply_window(1, self.k, &self.z2)?;
        let sep = space.distance(&a, &b)?;
        Ok(sep > eta && (sep - self.separation).abs() <= 1e-9)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SensitivityVerdict {
    EvidenceSensitive,
    NoWitnessFound,
}

/// Outcome of a sensitivity-constant estimation run. A verdict of
/// `NoWitnessFound` means "not found under this budget", never
/// "not sensitive": finite search cannot refute the definition.
#[derive(Debug, Clone, Serialize)]
pub struct SensitivityReport {
    pub delta_estimate: f64,
    pub horizon: u64,
    pub base_points_tested: usize,
    pub eps_ladder: Vec<f64>,
    /// Fraction of (base point, eps) pairs with a witness at the reported delta.
    pub witness_coverage: f64,
    /// Sample witnesses at the reported delta (capped).
    pub witnesses: Vec<SensitivityWitness>,
    pub verdict: SensitivityVerdict,
    /// Number of candidate trajectories that escaped an analysis window.
    pub escapes: u64,
}
