//! Modal smoothness sensing on density and the per-element choice between
//! the staggered first-order scheme and flux reconstruction.
//!
//! The indicator compares the energy in the highest Legendre mode(s) of the
//! element's density against the total modal energy; elements above the
//! order-dependent threshold ε·p⁻⁴ are marked rough and integrate with the
//! dissipative staggered scheme, everything else runs flux reconstruction.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::operators::{modal_transform, ElementOperators};

/// Which nodal field feeds the indicator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[non_exhaustive]
pub enum SensedVariable {
    #[default]
    Density,
}

/// Sensor tuning.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SensorConfig {
    /// Threshold coefficient in S* = epsilon / p^4.
    pub epsilon: f64,
    pub variable: SensedVariable,
}

impl Default for SensorConfig {
    fn default() -> Self {
        SensorConfig {
            epsilon: 0.01,
            variable: SensedVariable::Density,
        }
    }
}

/// Spatial operator assigned to an element for one time step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Rd,
    Fr,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Rd => "rd",
            Scheme::Fr => "fr",
        })
    }
}

/// Global override for the per-element choice, exposed on the command line
/// for ablation runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SchemePolicy {
    /// Sensor-driven per-element selection.
    #[default]
    Blend,
    /// Every element uses the staggered scheme.
    ForceRd,
    /// Every element uses flux reconstruction.
    ForceFr,
}

impl FromStr for SchemePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blend" => Ok(SchemePolicy::Blend),
            "rd" => Ok(SchemePolicy::ForceRd),
            "fr" => Ok(SchemePolicy::ForceFr),
            other => Err(Error::InvalidConfig(format!(
                "unknown scheme policy '{other}' (expected rd, fr, or blend)"
            ))),
        }
    }
}

/// Modal energy of Legendre coefficient n: c_n² · ‖L_n‖² with
/// ‖L_n‖² = 2/(2n+1), exact by orthogonality.
fn mode_energy(c: f64, n: usize) -> f64 {
    c * c * 2.0 / (2 * n + 1) as f64
}

/// 1D smoothness indicator: the fraction of modal energy carried by the
/// highest mode. Returns a value in [0, 1]; an identically zero field (not
/// reachable from admissible states) yields the smooth sentinel 0.
pub fn smoothness_indicator(nodal_density: &[f64], ops: &ElementOperators) -> Result<f64> {
    let p = ops.p;
    let modal = modal_transform(ops, nodal_density, false)?;
    let total: f64 = modal
        .iter()
        .enumerate()
        .map(|(n, &c)| mode_energy(c, n))
        .sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    Ok(mode_energy(modal[p], p) / total)
}

/// 2D tensor-product indicator on a (p+1)×(p+1) nodal block, row-major with
/// the x index outermost. Truncation removes every mode with i = p or j = p.
pub fn smoothness_indicator_2d(nodal_density: &[f64], ops: &ElementOperators) -> Result<f64> {
    let n = ops.p + 1;
    if nodal_density.len() != n * n {
        return Err(Error::DimensionMismatch {
            what: "nodal density values per element",
            expected: n * n,
            got: nodal_density.len(),
        });
    }
    // Transform rows (x direction), then columns (y direction).
    let mut half = vec![0.0; n * n];
    for j in 0..n {
        let line: Vec<f64> = (0..n).map(|i| nodal_density[i * n + j]).collect();
        let modal = modal_transform(ops, &line, false)?;
        for i in 0..n {
            half[i * n + j] = modal[i];
        }
    }
    let mut total = 0.0;
    let mut truncated = 0.0;
    for i in 0..n {
        let modal = modal_transform(ops, &half[i * n..(i + 1) * n], false)?;
        for (j, &c) in modal.iter().enumerate() {
            let e = c * c * (2.0 / (2 * i + 1) as f64) * (2.0 / (2 * j + 1) as f64);
            total += e;
            if i == ops.p || j == ops.p {
                truncated += e;
            }
        }
    }
    if total == 0.0 {
        return Ok(0.0);
    }
    Ok(truncated / total)
}

/// Threshold S* = epsilon / p⁴ below which an element is considered smooth.
pub fn threshold(p: usize, cfg: &SensorConfig) -> f64 {
    cfg.epsilon / (p as f64).powi(4)
}

/// Picks the element's scheme from its indicator value. p = 0 always runs
/// the staggered scheme (there is no meaningful correction polynomial).
pub fn select_scheme(s_e: f64, p: usize, cfg: &SensorConfig) -> Scheme {
    if p == 0 || s_e >= threshold(p, cfg) {
        Scheme::Rd
    } else {
        Scheme::Fr
    }
}
