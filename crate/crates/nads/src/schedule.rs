//! Schedules assign a generator index to every sequence position.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum Schedule {
    /// Every position uses the same generator.
    Constant { index: usize },
    /// Positions cycle through `pattern`.
    Periodic { pattern: Vec<usize> },
    /// `head` positions first, then `tail` repeats. An empty tail makes
    /// positions past the head unresolvable.
    Explicit { head: Vec<usize>, tail: Vec<usize> },
}

impl Schedule {
    pub fn constant(index: usize) -> Self {
        Schedule::Constant { index }
    }

    pub fn periodic(pattern: Vec<usize>) -> Self {
        Schedule::Periodic { pattern }
    }

    pub fn validate(&self, generator_count: usize) -> Result<()> {
        let check = |idx: &usize| {
            if *idx >= generator_count {
                Err(Error::InvalidSystem(format!(
                    "schedule index {idx} out of bounds for {generator_count} generators"
                )))
            } else {
                Ok(())
            }
        };
        match self {
            Schedule::Constant { index } => check(index),
            Schedule::Periodic { pattern } => {
                if pattern.is_empty() {
                    return Err(Error::InvalidSystem(
                        "periodic schedule pattern must be non-empty".into(),
                    ));
                }
                pattern.iter().try_for_each(check)
            }
            Schedule::Explicit { head, tail } => {
                if head.is_empty() && tail.is_empty() {
                    return Err(Error::InvalidSystem(
                        "explicit schedule needs a head or a tail".into(),
                    ));
                }
                head.iter().chain(tail).try_for_each(check)
            }
        }
    }

    /// Generator index for 1-based sequence position `i`. O(1).
    pub fn resolve(&self, i: u64) -> Result<usize> {
        debug_assert!(i >= 1);
        match self {
            Schedule::Constant { index } => Ok(*index),
            Schedule::Periodic { pattern } => {
                Ok(pattern[((i - 1) % pattern.len() as u64) as usize])
            }
            Schedule::Explicit { head, tail } => {
                if i <= head.len() as u64 {
                    Ok(head[(i - 1) as usize])
                } else if tail.is_empty() {
                    Err(Error::IndexUnresolvable {
                        index: i,
                        reason: "explicit schedule has no periodic tail".into(),
                    })
                } else {
                    Ok(tail[((i - 1 - head.len() as u64) % tail.len() as u64) as usize])
                }
            }
        }
    }

    /// (prefix length, eventual period); `None` when the schedule has no
    /// periodic tail.
    pub fn shape(&self) -> Option<(u64, u64)> {
        match self {
            Schedule::Constant { .. } => Some((0, 1)),
            Schedule::Periodic { pattern } => Some((0, minimal_period(pattern))),
            Schedule::Explicit { head, tail } => {
                if tail.is_empty() {
                    None
                } else {
                    Some((head.len() as u64, minimal_period(tail)))
                }
            }
        }
    }
}

/// Minimal period of the infinite repetition of `pattern`; always divides
/// its length.
fn minimal_period(pattern: &[usize]) -> u64 {
    let n = pattern.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (0..n).all(|i| pattern[i] == pattern[i % d]) {
            return d as u64;
        }
    }
    n as u64
}
