//! Map expressions: a closed constructor set of continuous self-maps.
//!
//! Keeping the set closed (no opaque user functions) lets Lipschitz bounds
//! and moduli of continuity be computed structurally where possible, with
//! grid estimation as the fallback.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::space::{Norm, StateSpace};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "constructor", rename_all = "kebab-case")]
pub enum MapExpr {
    /// x -> a*x + b
    Affine { a: f64, b: f64 },
    /// The tent map x -> 1 - |2x - 1| on [0, 1].
    Tent,
    /// x -> 2x (mod 1) on the circle.
    Doubling,
    /// x -> r*x*(1 - x)
    Logistic { r: f64 },
    /// x -> -x (componentwise on vectors)
    Negation,
    /// x -> x^2 (componentwise on vectors)
    Square,
    /// x -> x + c (a rotation on the circle)
    Translation { c: f64 },
    /// x -> M x for a d x d matrix given as rows.
    LinearOperator { matrix: Vec<Vec<f64>> },
    /// Truncated backward shift: `y_i = scale * weights[i] * x_{i+1}`, `y_d = 0`.
    /// The first coordinates are absorbed; nothing wraps around.
    WeightedShift { weights: Vec<f64>, scale: f64 },
    /// x -> s * f(x)
    Scaled { map: Box<MapExpr>, s: f64 },
    /// x -> outer(inner(x))
    Compose {
        outer: Box<MapExpr>,
        inner: Box<MapExpr>,
    },
}

impl MapExpr {
    pub fn identity() -> Self {
        MapExpr::Affine { a: 1.0, b: 0.0 }
    }

    /// Evaluate the map at `x` in the context of `space`. Pure and
    /// deterministic; circle images are reduced into [0, 1).
    pub fn eval(&self, space: &StateSpace, x: &Point) -> Result<Point> {
        match self {
            MapExpr::Affine { a, b } => scalar_map(space, x, |s| a * s + b),
            MapExpr::Tent => scalar_map(space, x, |s| 1.0 - (2.0 * s - 1.0).abs()),
            MapExpr::Doubling => scalar_map(space, x, |s| (2.0 * s).rem_euclid(1.0)),
            MapExpr::Logistic { r } => scalar_map(space, x, |s| r * s * (1.0 - s)),
            MapExpr::Translation { c } => scalar_map(space, x, |s| s + c),
            MapExpr::Negation => match x {
                Point::Scalar(_) => scalar_map(space, x, |s| -s),
                Point::Vector(v) => Ok(Point::Vector(v.iter().map(|u| -u).collect())),
            },
            MapExpr::Square => match x {
                Point::Scalar(_) => scalar_map(space, x, |s| s * s),
                Point::Vector(v) => Ok(Point::Vector(v.iter().map(|u| u * u).collect())),
            },
            MapExpr::LinearOperator { matrix } => {
                let v = x.as_vector()?;
                if matrix.len() != v.len() {
                    return Err(Error::DimensionMismatch {
                        expected: matrix.len(),
                        got: v.len(),
                    });
                }
                Ok(Point::Vector(
                    matrix
                        .iter()
                        .map(|row| row.iter().zip(v).map(|(m, u)| m * u).sum())
                        .collect(),
                ))
            }
            MapExpr::WeightedShift { weights, scale } => {
                let v = x.as_vector()?;
                if weights.len() + 1 != v.len() {
                    return Err(Error::DimensionMismatch {
                        expected: weights.len() + 1,
                        got: v.len(),
                    });
                }
                let mut out = vec![0.0; v.len()];
                for (i, w) in weights.iter().enumerate() {
                    out[i] = scale * w * v[i + 1];
                }
                Ok(Point::Vector(out))
            }
            MapExpr::Scaled { map, s } => match map.eval(space, x)? {
                Point::Scalar(v) => scalar_post(space, s * v),
                Point::Vector(v) => Ok(Point::Vector(v.iter().map(|u| s * u).collect())),
            },
            MapExpr::Compose { outer, inner } => outer.eval(space, &inner.eval(space, x)?),
        }
    }

    /// Structural checks that the constructor is a continuous self-map of
    /// `space`. Rejects combinations that cannot be (negation on `[0,1]`,
    /// doubling off the circle, non-integer-degree affine circle maps, ...).
    pub fn validate_on(&self, space: &StateSpace) -> Result<()> {
        let reject = |why: &str| Err(Error::InvalidSystem(format!("{self:?} on {space:?}: {why}")));
        match self {
            MapExpr::Affine { a, b } => match space {
                StateSpace::UnitInterval => {
                    let (lo, hi) = (b.min(a + b), b.max(a + b));
                    if lo < -1e-9 || hi > 1.0 + 1e-9 {
                        return reject("affine image leaves [0, 1]");
                    }
                    Ok(())
                }
                StateSpace::Circle => {
                    if (a - a.round()).abs() > 1e-9 {
                        return reject("circle affine maps need an integer slope");
                    }
                    Ok(())
                }
                StateSpace::RealLine { .. } => Ok(()),
                StateSpace::VectorSpace { .. } => reject("scalar map on a vector space"),
            },
            MapExpr::Tent => match space {
                StateSpace::UnitInterval | StateSpace::Circle | StateSpace::RealLine { .. } => {
                    Ok(())
                }
                _ => reject("scalar map on a vector space"),
            },
            MapExpr::Doubling => match space {
                StateSpace::Circle => Ok(()),
                _ => reject("doubling (mod 1) is continuous on the circle only"),
            },
            MapExpr::Logistic { r } => match space {
                StateSpace::UnitInterval | StateSpace::Circle => {
                    if !(0.0..=4.0).contains(r) {
                        return reject("logistic parameter must lie in [0, 4]");
                    }
                    Ok(())
                }
                StateSpace::RealLine { .. } => Ok(()),
                _ => reject("scalar map on a vector space"),
            },
            MapExpr::Negation => match space {
                StateSpace::UnitInterval => reject("negation is not a self-map of [0, 1]"),
                _ => Ok(()),
            },
            MapExpr::Square => Ok(()),
            MapExpr::Translation { .. } => match space {
                StateSpace::Circle | StateSpace::RealLine { .. } => Ok(()),
                StateSpace::UnitInterval => reject("translation is not a self-map of [0, 1]"),
                StateSpace::VectorSpace { .. } => reject("scalar map on a vector space"),
            },
            MapExpr::LinearOperator { matrix } => match space {
                StateSpace::VectorSpace { dimension, .. } => {
                    if matrix.len() != *dimension
                        || matrix.iter().any(|row| row.len() != *dimension)
                    {
                        return reject("matrix must be dimension x dimension, given as rows");
                    }
                    Ok(())
                }
                _ => reject("linear operators act on vector spaces"),
            },
            MapExpr::WeightedShift { weights, scale: _ } => match space {
                StateSpace::VectorSpace { dimension, .. } => {
                    if *dimension < 2 {
                        return reject("weighted shifts need dimension >= 2");
                    }
                    if weights.len() != dimension - 1 {
                        return reject("weighted shift needs dimension - 1 weights");
                    }
                    Ok(())
                }
                _ => reject("weighted shifts act on vector spaces"),
            },
            MapExpr::Scaled { map, s } => {
                map.validate_on(space)?;
                match space {
                    StateSpace::UnitInterval => {
                        if !(0.0..=1.0).contains(s) {
                            return reject("scaling an interval map needs s in [0, 1]");
                        }
                        Ok(())
                    }
                    StateSpace::Circle => reject("scaled maps are not circle-continuous"),
                    _ => Ok(()),
                }
            }
            MapExpr::Compose { outer, inner } => {
                inner.validate_on(space)?;
                outer.validate_on(space)
            }
        }
    }

    /// A structural Lipschitz bound for the map on `space`, when one is
    /// available from the constructor; `None` means "estimate on a grid".
    pub fn lipschitz_bound(&self, space: &StateSpace) -> Option<f64> {
        match self {
            MapExpr::Affine { a, .. } => Some(a.abs()),
            MapExpr::Tent | MapExpr::Doubling => Some(2.0),
            MapExpr::Logistic { r } => match space {
                // sup |r(1-2x)| over [0,1] is r
                StateSpace::UnitInterval | StateSpace::Circle => Some(r.abs()),
                StateSpace::RealLine { window: [lo, hi] } => {
                    let m = (1.0 - 2.0 * lo).abs().max((1.0 - 2.0 * hi).abs());
                    Some(r.abs() * m)
                }
                _ => None,
            },
            MapExpr::Negation | MapExpr::Translation { .. } => Some(1.0),
            MapExpr::Square => match space {
                StateSpace::UnitInterval => Some(2.0),
                StateSpace::RealLine { window: [lo, hi] } => Some(2.0 * lo.abs().max(hi.abs())),
                _ => None,
            },
            MapExpr::LinearOperator { matrix } => {
                let row_sum = matrix
                    .iter()
                    .map(|row| row.iter().map(|m| m.abs()).sum::<f64>())
                    .fold(0.0, f64::max);
                match space {
                    StateSpace::VectorSpace { norm: Norm::Sup, .. } => Some(row_sum),
                    StateSpace::VectorSpace {
                        norm: Norm::Euclidean,
                        ..
                    } => {
                        // ||A||_2 <= sqrt(||A||_1 * ||A||_inf)
                        let d = matrix.len();
                        let col_sum = (0..d)
                            .map(|j| matrix.iter().map(|row| row[j].abs()).sum::<f64>())
                            .fold(0.0, f64::max);
                        Some((row_sum * col_sum).sqrt())
                    }
                    _ => None,
                }
            }
            MapExpr::WeightedShift { weights, scale } => {
                let w = weights.iter().map(|w| w.abs()).fold(0.0, f64::max);
                Some(scale.abs() * w)
            }
            MapExpr::Scaled { map, s } => Some(s.abs() * map.lipschitz_bound(space)?),
            MapExpr::Compose { outer, inner } => {
                Some(outer.lipschitz_bound(space)? * inner.lipschitz_bound(space)?)
            }
        }
    }
}

fn scalar_map(space: &StateSpace, x: &Point, f: impl Fn(f64) -> f64) -> Result<Point> {
    scalar_post(space, f(x.as_scalar()?))
}

fn scalar_post(space: &StateSpace, v: f64) -> Result<Point> {
    Ok(Point::Scalar(space.normalize_scalar(v)))
}

/// One row of a sampled continuity probe: the largest image distance over
/// grid pairs at a given input separation.
#[derive(Debug, Clone, Serialize)]
pub struct ProbeRow {
    pub input_separation: f64,
    pub max_image_distance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuityProbe {
    pub rows: Vec<ProbeRow>,
    /// True when image distances shrink toward zero with the input scale.
    pub looks_continuous: bool,
}

/// Probe continuity on nested grids: pair points at separations eps, eps/2,
/// ... and watch the worst image distance go to zero. Evidence, not a proof.
pub fn continuity_probe(
    expr: &MapExpr,
    space: &StateSpace,
    grid_points: usize,
    scales: usize,
) -> Result<ContinuityProbe> {
    let grid = space.grid(grid_points)?;
    let mut rows = Vec::new();
    let mut eps = 1e-2 * space.diameter().min(1.0);
    for _ in 0..scales {
        let mut worst: f64 = 0.0;
        for x in &grid {
            for sign in [1.0, -1.0] {
                let Some(y) = space.translate(x, &Point::scalar(sign * eps))? else {
                    continue;
                };
                let fx = expr.eval(space, x)?;
                let fy = expr.eval(space, &y)?;
                worst = worst.max(space.distance(&fx, &fy)?);
            }
        }
        rows.push(ProbeRow {
            input_separation: eps,
            max_image_distance: worst,
        });
        eps /= 4.0;
    }
    let first = rows.first().map(|r| r.max_image_distance).unwrap_or(0.0);
    let last = rows.last().map(|r| r.max_image_distance).unwrap_or(0.0);
    let looks_continuous = last <= 1e-4_f64.max(first * 1e-3);
    Ok(ContinuityProbe {
        rows,
        looks_continuous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ui() -> StateSpace {
        StateSpace::UnitInterval
    }

    fn s(v: f64) -> Point {
        Point::scalar(v)
    }

    #[test]
    fn constructor_values() {
        let c = StateSpace::Circle;
        assert_eq!(MapExpr::Tent.eval(&ui(), &s(0.25)).unwrap(), s(0.5));
        assert_eq!(MapExpr::Tent.eval(&ui(), &s(0.75)).unwrap(), s(0.5));
        assert_eq!(MapExpr::Doubling.eval(&c, &s(0.4)).unwrap(), s(0.8));
        let wrapped = MapExpr::Doubling.eval(&c, &s(0.6)).unwrap();
        assert!((wrapped.as_scalar().unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(
            MapExpr::Logistic { r: 4.0 }.eval(&ui(), &s(0.5)).unwrap(),
            s(1.0)
        );
        let rl = StateSpace::RealLine { window: [-4.0, 4.0] };
        assert_eq!(MapExpr::Square.eval(&rl, &s(-2.0)).unwrap(), s(4.0));
        assert_eq!(MapExpr::Negation.eval(&rl, &s(1.5)).unwrap(), s(-1.5));
        assert_eq!(
            MapExpr::Translation { c: 1.0 }.eval(&rl, &s(3.0)).unwrap(),
            s(4.0)
        );
    }

    #[test]
    fn circle_translation_wraps() {
        let c = StateSpace::Circle;
        let rot = MapExpr::Translation { c: 0.75 };
        assert_eq!(rot.eval(&c, &s(0.5)).unwrap(), s(0.25));
    }

    #[test]
    fn compose_applies_inner_first() {
        let rl = StateSpace::RealLine { window: [-100.0, 100.0] };
        // outer = negation, inner = square: x -> -(x^2)
        let m = MapExpr::Compose {
            outer: Box::new(MapExpr::Negation),
            inner: Box::new(MapExpr::Square),
        };
        assert_eq!(m.eval(&rl, &s(3.0)).unwrap(), s(-9.0));
    }

    #[test]
    fn linear_operator_and_shift() {
        let vs = StateSpace::VectorSpace {
            dimension: 3,
            norm: Norm::Euclidean,
            ball_radius: 1.0,
        };
        let rot = MapExpr::LinearOperator {
            matrix: vec![
                vec![0.0, -1.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 0.0, 1.0],
            ],
        };
        let y = rot.eval(&vs, &Point::vector(vec![1.0, 2.0, 3.0])).unwrap();
        assert_eq!(y, Point::vector(vec![-2.0, 1.0, 3.0]));

        let shift = MapExpr::WeightedShift {
            weights: vec![1.0, 1.0],
            scale: 2.0,
        };
        let y = shift
            .eval(&vs, &Point::vector(vec![0.0, 0.0, 1.0]))
            .unwrap();
        assert_eq!(y, Point::vector(vec![0.0, 2.0, 0.0]));
        // the head coordinate is absorbed
        let y = shift
            .eval(&vs, &Point::vector(vec![1.0, 0.0, 0.0]))
            .unwrap();
        assert_eq!(y, Point::vector(vec![0.0, 0.0, 0.0]));
    }

    #[test]
    fn validation_table() {
        let c = StateSpace::Circle;
        let rl = StateSpace::RealLine { window: [-4.0, 4.0] };
        assert!(MapExpr::Doubling.validate_on(&c).is_ok());
        assert!(MapExpr::Doubling.validate_on(&ui()).is_err());
        assert!(MapExpr::Negation.validate_on(&ui()).is_err());
        assert!(MapExpr::Negation.validate_on(&rl).is_ok());
        assert!(MapExpr::Affine { a: 0.5, b: 0.25 }.validate_on(&ui()).is_ok());
        assert!(MapExpr::Affine { a: 2.0, b: 0.0 }.validate_on(&ui()).is_err());
        assert!(MapExpr::Affine { a: 1.5, b: 0.0 }.validate_on(&c).is_err());
        assert!(MapExpr::identity().validate_on(&ui()).is_ok());
        let vs = StateSpace::VectorSpace {
            dimension: 8,
            norm: Norm::Euclidean,
            ball_radius: 1.0,
        };
        assert!(MapExpr::WeightedShift {
            weights: vec![1.0; 7],
            scale: 2.0
        }
        .validate_on(&vs)
        .is_ok());
        assert!(MapExpr::WeightedShift {
            weights: vec![1.0; 3],
            scale: 2.0
        }
        .validate_on(&vs)
        .is_err());
    }

    #[test]
    fn lipschitz_bounds_structural() {
        let c = StateSpace::Circle;
        assert_eq!(MapExpr::Tent.lipschitz_bound(&ui()), Some(2.0));
        assert_eq!(MapExpr::Doubling.lipschitz_bound(&c), Some(2.0));
        assert_eq!(MapExpr::identity().lipschitz_bound(&ui()), Some(1.0));
        assert_eq!(
            MapExpr::Scaled {
                map: Box::new(MapExpr::Tent),
                s: 0.5
            }
            .lipschitz_bound(&ui()),
            Some(1.0)
        );
        let vs = StateSpace::VectorSpace {
            dimension: 4,
            norm: Norm::Euclidean,
            ball_radius: 1.0,
        };
        assert_eq!(
            MapExpr::WeightedShift {
                weights: vec![1.0; 3],
                scale: 2.0
            }
            .lipschitz_bound(&vs),
            Some(2.0)
        );
    }

    #[test]
    fn doubling_lipschitz_matches_grid_ratio() {
        // grid oracle for the structural constant 2
        let c = StateSpace::Circle;
        let mut worst: f64 = 0.0;
        for i in 0..512 {
            let x = i as f64 / 512.0;
            let y = x + 1.0 / 4096.0;
            let dx = crate::space::circle_distance(x, y);
            let fx = MapExpr::Doubling.eval(&c, &s(x)).unwrap();
            let fy = MapExpr::Doubling.eval(&c, &s(y)).unwrap();
            let dfx = c.distance(&fx, &fy).unwrap();
            worst = worst.max(dfx / dx);
        }
        assert!((worst - 2.0).abs() < 1e-9, "grid ratio {worst}");
    }

    #[test]
    fn continuity_probe_flags_a_jump() {
        // doubling as a raw interval map is discontinuous at 1/2; the probe
        // sees a non-vanishing image distance
        let probe = continuity_probe(&MapExpr::Doubling, &ui(), 257, 6).unwrap();
        assert!(!probe.looks_continuous);
        // on the circle it is fine
        let probe = continuity_probe(&MapExpr::Doubling, &StateSpace::Circle, 257, 6).unwrap();
        assert!(probe.looks_continuous);
        let probe = continuity_probe(&MapExpr::Tent, &ui(), 257, 6).unwrap();
        assert!(probe.looks_continuous);
    }

    #[test]
    fn constructor_json_names_are_kebab_case() {
        let m: MapExpr =
            serde_json::from_str(r#"{"constructor":"affine","a":1.0,"b":1.0}"#).unwrap();
        assert_eq!(m, MapExpr::Affine { a: 1.0, b: 1.0 });
        let m: MapExpr = serde_json::from_str(
            r#"{"constructor":"weighted-shift","weights":[1,1,1,1,1,1,1],"scale":2.0}"#,
        )
        .unwrap();
        assert!(matches!(m, MapExpr::WeightedShift { .. }));
        let m: MapExpr = serde_json::from_str(r#"{"constructor":"tent"}"#).unwrap();
        assert_eq!(m, MapExpr::Tent);
    }
}
