//! State spaces and their metrics.
//!
//! Four kinds are supported: the unit interval, the circle R/Z with the arc
//! metric, the real line with a declared bounded analysis window, and a
//! finite-dimensional vector space with a norm-induced metric. Real-line
//! orbits that leave the window are reported as escape events, never clamped.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Norm {
    Sup,
    Euclidean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StateSpace {
    UnitInterval,
    Circle,
    RealLine {
        window: [f64; 2],
    },
    VectorSpace {
        dimension: usize,
        norm: Norm,
        /// Radius of the ball around the origin used for grids and delta
        /// ladders; vector spaces are otherwise unbounded.
        #[serde(default = "default_ball_radius")]
        ball_radius: f64,
    },
}

fn default_ball_radius() -> f64 {
    1.0
}

/// Snap tolerance for interval self-maps whose floating-point image lands an
/// ulp outside [0, 1].
const INTERVAL_SNAP: f64 = 1e-12;

impl StateSpace {
    pub fn validate(&self) -> Result<()> {
        match self {
            StateSpace::RealLine { window: [lo, hi] } => {
                if !(lo < hi) {
                    return Err(Error::InvalidSystem(format!(
                        "real-line window must satisfy lo < hi, got [{lo}, {hi}]"
                    )));
                }
            }
            StateSpace::VectorSpace {
                dimension,
                ball_radius,
                ..
            } => {
                if *dimension == 0 {
                    return Err(Error::InvalidSystem(
                        "vector-space dimension must be positive".into(),
                    ));
                }
                if !(*ball_radius > 0.0) {
                    return Err(Error::InvalidSystem(
                        "vector-space ball_radius must be positive".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn is_one_dimensional(&self) -> bool {
        !matches!(self, StateSpace::VectorSpace { .. })
    }

    pub fn dimension(&self) -> usize {
        match self {
            StateSpace::VectorSpace { dimension, .. } => *dimension,
            _ => 1,
        }
    }

    /// The analysis window of a real-line space.
    pub fn window(&self) -> Option<(f64, f64)> {
        match self {
            StateSpace::RealLine { window: [lo, hi] } => Some((*lo, *hi)),
            _ => None,
        }
    }

    pub fn distance(&self, a: &Point, b: &Point) -> Result<f64> {
        match self {
            StateSpace::Circle => {
                let (x, y) = (a.as_scalar()?, b.as_scalar()?);
                Ok(circle_distance(x, y))
            }
            StateSpace::UnitInterval | StateSpace::RealLine { .. } => {
                let (x, y) = (a.as_scalar()?, b.as_scalar()?);
                Ok((x - y).abs())
            }
            StateSpace::VectorSpace {
                dimension, norm, ..
            } => {
                let (x, y) = (a.as_vector()?, b.as_vector()?);
                if x.len() != *dimension || y.len() != *dimension {
                    return Err(Error::DimensionMismatch {
                        expected: *dimension,
                        got: x.len().max(y.len()),
                    });
                }
                Ok(match norm {
                    Norm::Sup => x
                        .iter()
                        .zip(y)
                        .map(|(u, v)| (u - v).abs())
                        .fold(0.0, f64::max),
                    Norm::Euclidean => x
                        .iter()
                        .zip(y)
                        .map(|(u, v)| (u - v) * (u - v))
                        .sum::<f64>()
                        .sqrt(),
                })
            }
        }
    }

    /// Norm of a point, i.e. distance to the origin of the space.
    pub fn norm_of(&self, p: &Point) -> Result<f64> {
        self.distance(p, &self.zero())
    }

    pub fn zero(&self) -> Point {
        match self {
            StateSpace::VectorSpace { dimension, .. } => Point::zero_vector(*dimension),
            _ => Point::scalar(0.0),
        }
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        match self {
            StateSpace::UnitInterval => {
                let x = p.as_scalar()?;
                Ok((0.0..=1.0).contains(&x))
            }
            StateSpace::Circle => {
                p.as_scalar()?;
                Ok(true)
            }
            StateSpace::RealLine { window: [lo, hi] } => {
                let x = p.as_scalar()?;
                Ok(x >= *lo && x <= *hi)
            }
            StateSpace::VectorSpace { dimension, .. } => Ok(p.dim() == *dimension),
        }
    }

    /// Canonical representative: circle points are reduced into [0, 1);
    /// interval images an ulp outside [0, 1] are snapped onto the boundary.
    pub fn normalize_scalar(&self, x: f64) -> f64 {
        match self {
            StateSpace::Circle => wrap_unit(x),
            StateSpace::UnitInterval => {
                if (-INTERVAL_SNAP..0.0).contains(&x) {
                    0.0
                } else if x > 1.0 && x <= 1.0 + INTERVAL_SNAP {
                    1.0
                } else {
                    x
                }
            }
            _ => x,
        }
    }

    /// `p` displaced by `h`, or `None` when the displaced point leaves the
    /// space (interval and window kinds). The circle wraps.
    pub fn translate(&self, p: &Point, h: &Point) -> Result<Option<Point>> {
        let moved = p.add(h)?;
        match self {
            StateSpace::Circle => Ok(Some(Point::scalar(wrap_unit(moved.as_scalar()?)))),
            StateSpace::UnitInterval => {
                let x = moved.as_scalar()?;
                Ok(((0.0..=1.0).contains(&x)).then_some(moved))
            }
            StateSpace::RealLine { window: [lo, hi] } => {
                let x = moved.as_scalar()?;
                Ok((x >= *lo && x <= *hi).then_some(moved))
            }
            StateSpace::VectorSpace { .. } => Ok(Some(moved)),
        }
    }

    /// Diameter used to scale delta ladders. The circle's arc metric tops out
    /// at 1/2; vector spaces use the declared analysis ball.
    pub fn diameter(&self) -> f64 {
        match self {
            StateSpace::UnitInterval => 1.0,
            StateSpace::Circle => 0.5,
            StateSpace::RealLine { window: [lo, hi] } => hi - lo,
            StateSpace::VectorSpace { ball_radius, .. } => 2.0 * ball_radius,
        }
    }

    /// `n` points spread across a one-dimensional space, offset from cell
    /// boundaries. Errors on vector spaces.
    pub fn grid(&self, n: usize) -> Result<Vec<Point>> {
        let (lo, hi) = match self {
            StateSpace::UnitInterval => (0.0, 1.0),
            StateSpace::Circle => (0.0, 1.0),
            StateSpace::RealLine { window: [lo, hi] } => (*lo, *hi),
            StateSpace::VectorSpace { .. } => {
                return Err(Error::invalid_param(
                    "grid",
                    "grids are defined for one-dimensional spaces only",
                ))
            }
        };
        let span = hi - lo;
        Ok((0..n)
            .map(|i| Point::scalar(lo + span * (i as f64 + 0.5) / n as f64))
            .collect())
    }
}

pub fn circle_distance(x: f64, y: f64) -> f64 {
    let d = (wrap_unit(x) - wrap_unit(y)).abs();
    d.min(1.0 - d)
}

/// Reduce into [0, 1).
pub fn wrap_unit(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r == 1.0 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp_circle() -> StateSpace {
        StateSpace::Circle
    }

    #[test]
    fn circle_arc_metric_values() {
        let s = sp_circle();
        let d = |a: f64, b: f64| s.distance(&Point::scalar(a), &Point::scalar(b)).unwrap();
        assert_eq!(d(0.0, 0.25), 0.25);
        assert!((d(0.1, 0.9) - 0.2).abs() < 1e-15);
        assert_eq!(d(0.0, 0.5), 0.5);
        // representatives wrap
        assert_eq!(d(1.25, 0.25), 0.0);
    }

    #[test]
    fn metric_axioms_on_sampled_triples() {
        let spaces = [
            StateSpace::UnitInterval,
            StateSpace::Circle,
            StateSpace::RealLine { window: [-4.0, 4.0] },
        ];
        for s in &spaces {
            let pts = s.grid(17).unwrap();
            for a in &pts {
                for b in &pts {
                    let dab = s.distance(a, b).unwrap();
                    let dba = s.distance(b, a).unwrap();
                    assert_eq!(dab, dba, "symmetry on {s:?}");
                    assert!(dab >= 0.0);
                    if a == b {
                        assert_eq!(dab, 0.0);
                    }
                    for c in &pts {
                        let dac = s.distance(a, c).unwrap();
                        let dcb = s.distance(c, b).unwrap();
                        assert!(
                            dab <= dac + dcb + 1e-15,
                            "triangle inequality on {s:?}: d({a:?},{b:?})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn vector_metrics_are_translation_invariant() {
        for norm in [Norm::Sup, Norm::Euclidean] {
            let s = StateSpace::VectorSpace {
                dimension: 3,
                norm,
                ball_radius: 1.0,
            };
            let x = Point::vector(vec![0.3, -0.2, 0.9]);
            let y = Point::vector(vec![-1.0, 0.4, 0.25]);
            let z = Point::vector(vec![5.0, -3.0, 0.125]);
            let d0 = s.distance(&x, &y).unwrap();
            let d1 = s
                .distance(&x.add(&z).unwrap(), &y.add(&z).unwrap())
                .unwrap();
            assert!((d0 - d1).abs() <= 1e-12, "{norm:?}: {d0} vs {d1}");
        }
    }

    #[test]
    fn translate_respects_boundaries() {
        let ui = StateSpace::UnitInterval;
        assert!(ui
            .translate(&Point::scalar(0.95), &Point::scalar(0.1))
            .unwrap()
            .is_none());
        let c = StateSpace::Circle;
        let p = c
            .translate(&Point::scalar(0.95), &Point::scalar(0.1))
            .unwrap()
            .unwrap();
        assert!((p.as_scalar().unwrap() - 0.05).abs() < 1e-12);
    }

    #[test]
    fn validation_rejects_bad_declarations() {
        assert!(StateSpace::RealLine { window: [1.0, 1.0] }.validate().is_err());
        assert!(StateSpace::VectorSpace {
            dimension: 0,
            norm: Norm::Sup,
            ball_radius: 1.0
        }
        .validate()
        .is_err());
    }

    #[test]
    fn spec_json_round_trips() {
        let s: StateSpace =
            serde_json::from_str(r#"{"kind":"real-line","window":[-4.0,4.0]}"#).unwrap();
        assert_eq!(s, StateSpace::RealLine { window: [-4.0, 4.0] });
        let v: StateSpace =
            serde_json::from_str(r#"{"kind":"vector-space","dimension":8,"norm":"euclidean"}"#)
                .unwrap();
        assert_eq!(v.dimension(), 8);
        assert_eq!(v.diameter(), 2.0);
    }
}
