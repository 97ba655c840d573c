//! Crate-wide error type.

use crate::euler::Cons;
use std::fmt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Which admissibility condition a state violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admissibility {
    NonpositiveDensity,
    NonpositivePressure,
    NonpositiveInternalEnergy,
}

impl fmt::Display for Admissibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Admissibility::NonpositiveDensity => "rho <= 0",
            Admissibility::NonpositivePressure => "p <= 0",
            Admissibility::NonpositiveInternalEnergy => "e <= 0",
        })
    }
}

/// Optional element/node location attached to errors raised inside residual
/// evaluation; prints as ` at element K, node I` when present.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Location {
    pub element: Option<usize>,
    pub node: Option<usize>,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(e) = self.element {
            write!(f, " at element {e}")?;
            if let Some(n) = self.node {
                write!(f, ", node {n}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(
        "inadmissible state ({condition}){location}: rho={:.6e} mom=({:.6e}, {:.6e}) E={:.6e}",
        state.rho, state.mom[0], state.mom[1], state.energy
    )]
    Inadmissible {
        condition: Admissibility,
        state: Cons,
        location: Location,
    },

    /// A formula became degenerate (`c = 0` in the auxiliary flux, `d = 0` in
    /// the auxiliary state); the caller must treat the term as its limit.
    #[error("degenerate coefficient: {what} = 0 in {formula}")]
    DegenerateCoefficient {
        what: &'static str,
        formula: &'static str,
    },

    #[error("{what}: expected length {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("polynomial order {p} unsupported (max {max}): operator conditioning degrades")]
    UnsupportedOrder { p: usize, max: usize },

    #[error("Riemann problem generates vacuum: pressure function has no positive root")]
    Vacuum,

    #[error(
        "time step underflow: {halvings} halvings from dt={dt_initial:.6e} still violate \
         admissibility{location}"
    )]
    StabilityFailure {
        dt_initial: f64,
        halvings: u32,
        location: Location,
    },

    #[error("mesh spacing {h} does not conform to the domain segments")]
    NonConformingSpacing { h: f64 },

    #[error("degenerate domain: {what}")]
    DegenerateDomain { what: &'static str },

    #[error("no reference solution available for case `{case}`")]
    MissingReference { case: String },

    #[error("case `{case}` does not support {what}")]
    UnsupportedCase { case: String, what: &'static str },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Attach an element/node location to an admissibility error as it
    /// propagates out of a residual kernel. Other variants pass through.
    pub fn at(self, element: usize, node: Option<usize>) -> Error {
        match self {
            Error::Inadmissible {
                condition,
                state,
                location:
                    Location {
                        element: None,
                        node: old_node,
                    },
            } => Error::Inadmissible {
                condition,
                state,
                location: Location {
                    element: Some(element),
                    node: node.or(old_node),
                },
            },
            other => other,
        }
    }

    /// Attach only a node index, leaving the element slot for the assembly
    /// loop that knows it.
    pub fn at_node(self, node: usize) -> Error {
        match self {
            Error::Inadmissible {
                condition,
                state,
                location: Location { element, node: None },
            } => Error::Inadmissible {
                condition,
                state,
                location: Location {
                    element,
                    node: Some(node),
                },
            },
            other => other,
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Error {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
