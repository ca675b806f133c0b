//! Points of a state space: scalars for the one-dimensional spaces,
//! coordinate vectors for vector spaces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl Point {
    pub fn scalar(v: f64) -> Self {
        Point::Scalar(v)
    }

    pub fn vector(v: Vec<f64>) -> Self {
        Point::Vector(v)
    }

    /// Standard basis vector scaled by `c` in dimension `dim`.
    pub fn basis(dim: usize, axis: usize, c: f64) -> Self {
        let mut v = vec![0.0; dim];
        v[axis] = c;
        Point::Vector(v)
    }

    pub fn zero_vector(dim: usize) -> Self {
        Point::Vector(vec![0.0; dim])
    }

    pub fn as_scalar(&self) -> Result<f64> {
        match self {
            Point::Scalar(v) => Ok(*v),
            Point::Vector(v) => Err(Error::ScalarExpected { got: v.len() }),
        }
    }

    pub fn as_vector(&self) -> Result<&[f64]> {
        match self {
            Point::Vector(v) => Ok(v),
            Point::Scalar(_) => Err(Error::DimensionMismatch {
                expected: 0,
                got: 1,
            }),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Point::Scalar(_) => 1,
            Point::Vector(v) => v.len(),
        }
    }

    /// Componentwise sum; shapes must match.
    pub fn add(&self, other: &Point) -> Result<Point> {
        match (self, other) {
            (Point::Scalar(a), Point::Scalar(b)) => Ok(Point::Scalar(a + b)),
            (Point::Vector(a), Point::Vector(b)) if a.len() == b.len() => {
                Ok(Point::Vector(a.iter().zip(b).map(|(x, y)| x + y).collect()))
            }
            _ => Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            }),
        }
    }

    pub fn sub(&self, other: &Point) -> Result<Point> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Point {
        match self {
            Point::Scalar(a) => Point::Scalar(a * c),
            Point::Vector(a) => Point::Vector(a.iter().map(|x| x * c).collect()),
        }
    }

    /// One CSV cell: plain number for scalars, `;`-joined coordinates for vectors.
    pub fn csv_cell(&self) -> String {
        match self {
            Point::Scalar(v) => format!("{v}"),
            Point::Vector(v) => v
                .iter()
                .map(|x| format!("{x}"))
                .collect::<Vec<_>>()
                .join(";"),
        }
    }
}

impl From<f64> for Point {
    fn from(v: f64) -> Self {
        Point::Scalar(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_and_scale_respect_shape() {
        let a = Point::vector(vec![1.0, 2.0]);
        let b = Point::vector(vec![0.5, -2.0]);
        assert_eq!(a.add(&b).unwrap(), Point::vector(vec![1.5, 0.0]));
        assert_eq!(a.scale(2.0), Point::vector(vec![2.0, 4.0]));
        assert!(a.add(&Point::scalar(1.0)).is_err());
    }

    #[test]
    fn json_forms_are_untagged() {
        let s: Point = serde_json::from_str("0.25").unwrap();
        assert_eq!(s, Point::scalar(0.25));
        let v: Point = serde_json::from_str("[1.0, 0.0]").unwrap();
        assert_eq!(v, Point::vector(vec![1.0, 0.0]));
        assert_eq!(serde_json::to_string(&s).unwrap(), "0.25");
    }

    #[test]
    fn csv_cell_joins_vector_coordinates() {
        assert_eq!(Point::scalar(1.5).csv_cell(), "1.5");
        assert_eq!(Point::vector(vec![1.0, -2.0]).csv_cell(), "1;-2");
    }
}
