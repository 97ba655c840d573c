//! Density error norms by Gauss quadrature at the solution points, and
//! least-squares convergence rates across refinement sweeps.

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::operators::ElementOperators;
use crate::solver::{node_positions, SolutionField};

/// L1/L2/L∞ norms of the density error against a reference profile.
#[derive(Clone, Copy, Debug)]
pub struct ErrorReport {
    /// ∫|ρ − ρ_exact| dx
    pub l1: f64,
    /// sqrt(∫(ρ − ρ_exact)² dx)
    pub l2: f64,
    /// max over solution points of |ρ − ρ_exact|
    pub linf: f64,
}

/// Evaluates the error norms with the same quadrature the solver uses: Gauss
/// weights at the solution points, scaled by each element's metric.
pub fn density_error_norms<F>(
    mesh: &Mesh,
    ops: &ElementOperators,
    field: &SolutionField,
    exact_density: F,
) -> ErrorReport
where
    F: Fn([f64; 2]) -> f64,
{
    let p = ops.p;
    let mut l1 = 0.0;
    let mut l2 = 0.0;
    let mut linf = 0.0f64;
    for (k, el) in mesh.elements.iter().enumerate() {
        let nodes = field.element(k);
        let coords = node_positions(el, ops, mesh.dim);
        for (node, (&u, &x)) in nodes.iter().zip(&coords).enumerate() {
            let diff = (u.rho - exact_density(x)).abs();
            let w = if mesh.dim == 1 {
                ops.mass_weights[node] * el.half_width[0]
            } else {
                ops.mass_weights[node / (p + 1)]
                    * ops.mass_weights[node % (p + 1)]
                    * el.half_width[0]
                    * el.half_width[1]
            };
            l1 += w * diff;
            l2 += w * diff * diff;
            linf = linf.max(diff);
        }
    }
    ErrorReport {
        l1,
        l2: l2.sqrt(),
        linf,
    }
}

/// Slope of the least-squares line through (xs, ys).
pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            what: "regression samples",
            expected: xs.len(),
            got: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::InvalidConfig(
            "a slope needs at least two samples".into(),
        ));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if den == 0.0 {
        return Err(Error::InvalidConfig(
            "regression abscissae are all equal".into(),
        ));
    }
    Ok(num / den)
}

/// Rate of convergence: least-squares slope of log(error) against
/// log(resolution), where the resolution is DoF⁻¹ in 1D or h̄ = 1/√N_DOF in
/// 2D. A refinement study needs at least three resolutions to be meaningful.
pub fn rate_of_convergence(resolution: &[f64], errors: &[f64]) -> Result<f64> {
    if resolution.len() < 3 {
        return Err(Error::InvalidConfig(format!(
            "convergence study needs >= 3 resolutions, got {}",
            resolution.len()
        )));
    }
    let xs: Vec<f64> = resolution.iter().map(|&h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|&e| e.ln()).collect();
    least_squares_slope(&xs, &ys)
}

/// Convergence rates of all three norms over a sweep of (resolution, report)
/// pairs.
pub fn convergence_rates(study: &[(f64, ErrorReport)]) -> Result<[f64; 3]> {
    let h: Vec<f64> = study.iter().map(|(h, _)| *h).collect();
    Ok([
        rate_of_convergence(&h, &study.iter().map(|(_, r)| r.l1).collect::<Vec<_>>())?,
        rate_of_convergence(&h, &study.iter().map(|(_, r)| r.l2).collect::<Vec<_>>())?,
        rate_of_convergence(&h, &study.iter().map(|(_, r)| r.linf).collect::<Vec<_>>())?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{Gas, Prim};
    use crate::mesh::{build_uniform_1d, build_uniform_quad, BoundaryCondition, QuadBcs};
    use crate::operators::build_operators;
    use approx::assert_relative_eq;

    const GAS: Gas = Gas { gamma: 1.4 };

    #[test]
    fn exact_field_has_zero_error_and_offset_matches_measure() {
        let ops = build_operators(2).unwrap();
        let mesh = build_uniform_1d(
            [0.0, 1.0],
            8,
            BoundaryCondition::Extrapolate,
            BoundaryCondition::Extrapolate,
        )
        .unwrap();
        let field =
            SolutionField::from_prim_fn(GAS, &mesh, &ops, |_| Prim::new_1d(1.0, 0.0, 1.0))
                .unwrap();
        let zero = density_error_norms(&mesh, &ops, &field, |_| 1.0);
        assert_eq!((zero.l1, zero.l2, zero.linf), (0.0, 0.0, 0.0));

        let delta = 3e-3;
        let off = density_error_norms(&mesh, &ops, &field, |_| 1.0 + delta);
        assert_relative_eq!(off.l1, delta, max_relative = 1e-13);
        assert_relative_eq!(off.l2, delta, max_relative = 1e-13);
        assert_relative_eq!(off.linf, delta, max_relative = 1e-13);

        // On a domain of area 2 the L1 doubles and the L2 picks up √2.
        let quad = build_uniform_quad(
            [0.0, 1.0],
            [0.0, 2.0],
            4,
            5,
            QuadBcs::all(BoundaryCondition::Extrapolate),
        )
        .unwrap();
        let field2 =
            SolutionField::from_prim_fn(GAS, &quad, &ops, |_| Prim::new_1d(1.0, 0.0, 1.0))
                .unwrap();
        let off2 = density_error_norms(&quad, &ops, &field2, |_| 1.0 + delta);
        assert_relative_eq!(off2.l1, 2.0 * delta, max_relative = 1e-13);
        assert_relative_eq!(off2.l2, delta * 2f64.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(off2.linf, delta, max_relative = 1e-13);
    }

    #[test]
    fn sine_error_integrals_match_calculus() {
        use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
        let ops = build_operators(6).unwrap();
        let mesh = build_uniform_1d(
            [0.0, 1.0],
            10,
            BoundaryCondition::Extrapolate,
            BoundaryCondition::Extrapolate,
        )
        .unwrap();
        let field = SolutionField::from_prim_fn(GAS, &mesh, &ops, |x| {
            Prim::new_1d(2.0 + (TAU * x[0]).sin(), 0.0, 1.0)
        })
        .unwrap();
        let r = density_error_norms(&mesh, &ops, &field, |_| 2.0);
        // ∫₀¹|sin 2πx| = 2/π and ∫ sin² = ½; the max at a Gauss point falls
        // slightly below 1.
        assert_relative_eq!(r.l1, 2.0 / PI, max_relative = 1e-9);
        assert_relative_eq!(r.l2, FRAC_1_SQRT_2, max_relative = 1e-9);
        assert!(r.linf <= 1.0 && r.linf > 0.99);
    }

    #[test]
    fn rates_recover_synthetic_slopes() {
        let hs = [0.1f64, 0.05, 0.025, 0.0125];
        let errs: Vec<f64> = hs.iter().map(|h| 3.7 * h.powf(2.5)).collect();
        let rate = rate_of_convergence(&hs, &errs).unwrap();
        assert_relative_eq!(rate, 2.5, max_relative = 1e-12);

        assert!(rate_of_convergence(&hs[..2], &errs[..2]).is_err());
        assert!(least_squares_slope(&[1.0], &[1.0]).is_err());
        assert!(least_squares_slope(&[1.0, 1.0], &[1.0, 2.0]).is_err());

        let reports: Vec<(f64, ErrorReport)> = hs
            .iter()
            .map(|&h| {
                (
                    h,
                    ErrorReport {
                        l1: 2.0 * h,
                        l2: h.sqrt(),
                        linf: 0.09,
                    },
                )
            })
            .collect();
        let [r1, r2, rinf] = convergence_rates(&reports).unwrap();
        assert_relative_eq!(r1, 1.0, max_relative = 1e-12);
        assert_relative_eq!(r2, 0.5, max_relative = 1e-12);
        assert!(rinf.abs() < 1e-12);
    }
}
