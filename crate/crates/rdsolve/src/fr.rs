//! Flux-reconstruction spatial operator for smooth regions: the collocation
//! derivative of the nodal flux plus boundary corrections that impose a
//! common interface flux, computed here with a Rusanov solver.

use crate::error::{Error, Result};
use crate::euler::{Cons, Gas};
use crate::operators::{weighted_sum, ElementOperators};

/// One element's inputs for a flux-reconstruction residual along one line.
#[derive(Clone, Copy, Debug)]
pub struct FrElementView<'a> {
    /// The p+1 conserved states at the element's solution points.
    pub interior_states: &'a [Cons],
    /// Exterior state at the left interface: the neighbor's right trace, or
    /// a boundary ghost.
    pub left_trace_ext: Cons,
    /// Exterior state at the right interface.
    pub right_trace_ext: Cons,
    /// Affine map scale dT/dx̂ of this line direction.
    pub jacobian: f64,
    /// Unit vector of the line direction.
    pub normal: [f64; 2],
}

/// Which element boundary a trace interpolation targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Lagrange interpolation of nodal states to an element boundary (x̂ = ∓1).
pub fn interpolate_trace(states: &[Cons], ops: &ElementOperators, side: Side) -> Result<Cons> {
    if states.len() != ops.p + 1 {
        return Err(Error::DimensionMismatch {
            what: "nodal states per line in trace interpolation",
            expected: ops.p + 1,
            got: states.len(),
        });
    }
    let weights = match side {
        Side::Left => &ops.interp_l,
        Side::Right => &ops.interp_r,
    };
    Ok(weighted_sum(weights, states))
}

/// Rusanov (local Lax–Friedrichs) interface flux with the Davis wavespeed:
/// ½(F(uL) + F(uR))·n − (λ_max/2)(uR − uL).
pub fn rusanov_flux(gas: Gas, u_l: Cons, u_r: Cons, normal: [f64; 2]) -> Result<Cons> {
    let q_l = gas.cons_to_prim(u_l)?;
    let q_r = gas.cons_to_prim(u_r)?;
    let lambda = gas.davis_of_prim(q_l, q_r, normal);
    let f_l = gas.flux_of_prim(q_l, normal);
    let f_r = gas.flux_of_prim(q_r, normal);
    Ok((f_l + f_r) * 0.5 - (u_r - u_l) * (0.5 * lambda))
}

/// Semi-discrete right-hand side at the solution points:
/// du_i/dt = −(1/J)[(D f)_i + (f_l^I − I_l f)·h_l'(x̂_i) + (f_r^I − I_r f)·h_r'(x̂_i)].
///
/// The interface fluxes f^I come from Rusanov problems between the element's
/// own interpolated traces and the exterior trace states; I_l f and I_r f are
/// boundary traces of the interpolated nodal flux.
pub fn fr_residual(gas: Gas, view: &FrElementView, ops: &ElementOperators) -> Result<Vec<Cons>> {
    let p = ops.p;
    if view.interior_states.len() != p + 1 {
        return Err(Error::DimensionMismatch {
            what: "interior states per line",
            expected: p + 1,
            got: view.interior_states.len(),
        });
    }
    if view.jacobian <= 0.0 {
        return Err(Error::DegenerateDomain {
            what: "element jacobian must be positive",
        });
    }
    let n = view.normal;

    let mut fluxes = Vec::with_capacity(p + 1);
    for (i, &u) in view.interior_states.iter().enumerate() {
        let q = gas.cons_to_prim(u).map_err(|e| e.at_node(i))?;
        fluxes.push(gas.flux_of_prim(q, n));
    }

    let trace_l = weighted_sum(&ops.interp_l, view.interior_states);
    let trace_r = weighted_sum(&ops.interp_r, view.interior_states);
    let f_int_l = rusanov_flux(gas, view.left_trace_ext, trace_l, n)?;
    let f_int_r = rusanov_flux(gas, trace_r, view.right_trace_ext, n)?;
    let jump_l = f_int_l - weighted_sum(&ops.interp_l, &fluxes);
    let jump_r = f_int_r - weighted_sum(&ops.interp_r, &fluxes);

    let scale = -1.0 / view.jacobian;
    Ok((0..=p)
        .map(|i| {
            (weighted_sum(ops.dmatrix_fr.row(i), &fluxes)
                + jump_l * ops.corr_deriv_l[i]
                + jump_r * ops.corr_deriv_r[i])
                * scale
        })
        .collect())
}
