//! Global spatial assembly and the time-marching driver.
//!
//! The semi-discrete operator is assembled element by element from mesh
//! connectivity. In 2D every element is processed line by line in each
//! coordinate direction, so the 1D kernels apply unchanged with the
//! direction's own metric and normal.
//!
//! At an interface, each element *exports* the value its own scheme is built
//! on — the nearest solution point for a staggered-grid element, the
//! interpolated boundary trace for a flux-reconstruction element — and each
//! side consumes the neighbor's export. Both kernels then evaluate the same
//! dissipative two-point flux on the same pair, so the interface value is
//! common even where the sensor switches schemes, and the total over a
//! periodic mesh telescopes to zero exactly.

use crate::error::{Error, Result};
use crate::euler::{Cons, Gas, Prim};
use crate::fr::{self, FrElementView, Side};
use crate::mesh::{ghost_state, Element, FaceLink, Mesh};
use crate::operators::{self, ElementOperators};
use crate::rd::{self, RdElementView};
use crate::sensor::{self, Scheme, SchemePolicy, SensedVariable, SensorConfig};
use crate::timestepping::{
    compute_dt, guarded_advance, ssp_rk3_step, LinearState, StepController,
};
use rayon::prelude::*;

/// Nodal conserved states for every element of a mesh.
///
/// Storage is element-major. Within an element the node order is the tensor
/// order of the solution points: in 1D node `i` is the i-th Gauss point; in
/// 2D node `i·(p+1) + j` is at (x̂_i, ŷ_j), i.e. the x index varies slowest.
#[derive(Clone, Debug)]
pub struct SolutionField {
    pub p: usize,
    pub dim: usize,
    pub data: Vec<Cons>,
}

impl SolutionField {
    pub fn nodes_per_element(&self) -> usize {
        (self.p + 1).pow(self.dim as u32)
    }

    pub fn n_elements(&self) -> usize {
        self.data.len() / self.nodes_per_element()
    }

    pub fn zeros(mesh: &Mesh, ops: &ElementOperators) -> Self {
        let nn = (ops.p + 1).pow(mesh.dim as u32);
        SolutionField {
            p: ops.p,
            dim: mesh.dim,
            data: vec![Cons::ZERO; nn * mesh.n_elements()],
        }
    }

    pub fn constant(mesh: &Mesh, ops: &ElementOperators, u: Cons) -> Self {
        let mut field = Self::zeros(mesh, ops);
        field.data.fill(u);
        field
    }

    /// Pointwise nodal initialization: evaluates a primitive-variable field
    /// at every solution point and converts to conserved variables.
    pub fn from_prim_fn<F>(
        gas: Gas,
        mesh: &Mesh,
        ops: &ElementOperators,
        f: F,
    ) -> Result<SolutionField>
    where
        F: Fn([f64; 2]) -> Prim,
    {
        let mut field = Self::zeros(mesh, ops);
        let nn = field.nodes_per_element();
        for (k, el) in mesh.elements.iter().enumerate() {
            let coords = node_positions(el, ops, mesh.dim);
            for (node, &x) in coords.iter().enumerate() {
                field.data[k * nn + node] = gas
                    .prim_to_cons(f(x))
                    .map_err(|e| e.at(k, Some(node)))?;
            }
        }
        Ok(field)
    }

    pub fn element(&self, k: usize) -> &[Cons] {
        let nn = self.nodes_per_element();
        &self.data[k * nn..(k + 1) * nn]
    }

    pub fn element_mut(&mut self, k: usize) -> &mut [Cons] {
        let nn = self.nodes_per_element();
        &mut self.data[k * nn..(k + 1) * nn]
    }
}

impl LinearState for SolutionField {
    fn scaled_add(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        debug_assert_eq!(x.data.len(), y.data.len());
        SolutionField {
            p: x.p,
            dim: x.dim,
            data: x
                .data
                .iter()
                .zip(&y.data)
                .map(|(&u, &v)| u * a + v * b)
                .collect(),
        }
    }
}

/// Physical coordinates of an element's solution points in storage order.
pub fn node_positions(el: &Element, ops: &ElementOperators, dim: usize) -> Vec<[f64; 2]> {
    if dim == 1 {
        ops.sol_nodes.iter().map(|&x| el.map([x, 0.0])).collect()
    } else {
        let mut out = Vec::with_capacity((ops.p + 1) * (ops.p + 1));
        for &xi in &ops.sol_nodes {
            for &yj in &ops.sol_nodes {
                out.push(el.map([xi, yj]));
            }
        }
        out
    }
}

/// Index of the i-th node of a grid line: `line` is the transverse node
/// index (ignored in 1D), `d` the direction the line runs along.
fn line_node(p: usize, dim: usize, d: usize, line: usize, i: usize) -> usize {
    if dim == 1 {
        i
    } else if d == 0 {
        i * (p + 1) + line
    } else {
        line * (p + 1) + i
    }
}

/// The value element `k` contributes to an interface on its `side`, per its
/// own scheme: nearest solution point (RD) or interpolated trace (FR).
fn interface_export(
    field: &SolutionField,
    ops: &ElementOperators,
    scheme: Scheme,
    k: usize,
    d: usize,
    line: usize,
    side: Side,
) -> Cons {
    let p = field.p;
    let nodes = field.element(k);
    match scheme {
        Scheme::Rd => {
            let i = match side {
                Side::Left => 0,
                Side::Right => p,
            };
            nodes[line_node(p, field.dim, d, line, i)]
        }
        Scheme::Fr => {
            let weights = match side {
                Side::Left => &ops.interp_l,
                Side::Right => &ops.interp_r,
            };
            let mut trace = Cons::ZERO;
            for (i, &w) in weights.iter().enumerate() {
                trace += nodes[line_node(p, field.dim, d, line, i)] * w;
            }
            trace
        }
    }
}

/// Exterior states seen by element `k` along one line: the neighbor's export
/// at interior faces, a boundary-condition ghost of the element's own export
/// at physical faces.
#[allow(clippy::too_many_arguments)]
fn exterior_pair(
    gas: Gas,
    mesh: &Mesh,
    ops: &ElementOperators,
    schemes: &[Scheme],
    field: &SolutionField,
    k: usize,
    d: usize,
    line: usize,
) -> Result<(Cons, Cons)> {
    let el = &mesh.elements[k];
    let mut pair = [Cons::ZERO; 2];
    for (slot, &(face, near_side, far_side)) in pair.iter_mut().zip(&[
        (2 * d, Side::Left, Side::Right),
        (2 * d + 1, Side::Right, Side::Left),
    ]) {
        *slot = match el.faces[face] {
            FaceLink::Interior(m) => {
                interface_export(field, ops, schemes[m], m, d, line, far_side)
            }
            FaceLink::Boundary(b) => {
                let own = interface_export(field, ops, schemes[k], k, d, line, near_side);
                let mut n = [0.0; 2];
                n[d] = if face % 2 == 0 { -1.0 } else { 1.0 };
                ghost_state(gas, &mesh.bcs[b], own, n)?
            }
        };
    }
    Ok((pair[0], pair[1]))
}

fn element_residual(
    gas: Gas,
    mesh: &Mesh,
    ops: &ElementOperators,
    schemes: &[Scheme],
    field: &SolutionField,
    k: usize,
    out: &mut [Cons],
) -> Result<()> {
    let p = field.p;
    let dim = field.dim;
    let el = &mesh.elements[k];
    let n_lines = if dim == 1 { 1 } else { p + 1 };
    out.fill(Cons::ZERO);
    let mut own = vec![Cons::ZERO; p + 1];
    for d in 0..dim {
        let mut normal = [0.0; 2];
        normal[d] = 1.0;
        let jacobian = el.half_width[d];
        for line in 0..n_lines {
            for (i, slot) in own.iter_mut().enumerate() {
                *slot = field.element(k)[line_node(p, dim, d, line, i)];
            }
            let (ext_l, ext_r) = exterior_pair(gas, mesh, ops, schemes, field, k, d, line)?;
            let contrib = match schemes[k] {
                Scheme::Rd => rd::rd_residual(
                    gas,
                    &RdElementView {
                        interior_states: &own,
                        left_ghost: ext_l,
                        right_ghost: ext_r,
                        jacobian,
                        normal,
                    },
                    ops,
                ),
                Scheme::Fr => fr::fr_residual(
                    gas,
                    &FrElementView {
                        interior_states: &own,
                        left_trace_ext: ext_l,
                        right_trace_ext: ext_r,
                        jacobian,
                        normal,
                    },
                    ops,
                ),
            }
            .map_err(|e| e.at(k, None))?;
            for (i, &r) in contrib.iter().enumerate() {
                out[line_node(p, dim, d, line, i)] += r;
            }
        }
    }
    Ok(())
}

/// Semi-discrete right-hand side du/dt for the whole mesh, with the scheme
/// chosen per element. Elements are assembled in parallel; each writes only
/// its own chunk, so results are bit-identical across worker counts.
pub fn global_residual(
    gas: Gas,
    mesh: &Mesh,
    ops: &ElementOperators,
    schemes: &[Scheme],
    field: &SolutionField,
) -> Result<SolutionField> {
    let nn = field.nodes_per_element();
    if field.data.len() != nn * mesh.n_elements() {
        return Err(Error::DimensionMismatch {
            what: "solution nodes for mesh",
            expected: nn * mesh.n_elements(),
            got: field.data.len(),
        });
    }
    if schemes.len() != mesh.n_elements() {
        return Err(Error::DimensionMismatch {
            what: "scheme flags for mesh",
            expected: mesh.n_elements(),
            got: schemes.len(),
        });
    }
    let mut out = SolutionField {
        p: field.p,
        dim: field.dim,
        data: vec![Cons::ZERO; field.data.len()],
    };
    out.data
        .par_chunks_mut(nn)
        .enumerate()
        .try_for_each(|(k, chunk)| element_residual(gas, mesh, ops, schemes, field, k, chunk))?;
    Ok(out)
}

/// Applies the scheme policy: fixed flags, or the modal smoothness sensor
/// evaluated once per element on the sensed variable.
pub fn select_schemes(
    field: &SolutionField,
    ops: &ElementOperators,
    cfg: &SensorConfig,
    policy: SchemePolicy,
) -> Result<Vec<Scheme>> {
    let n_el = field.n_elements();
    match policy {
        SchemePolicy::ForceRd => Ok(vec![Scheme::Rd; n_el]),
        SchemePolicy::ForceFr => Ok(vec![Scheme::Fr; n_el]),
        SchemePolicy::Blend => (0..n_el)
            .into_par_iter()
            .map(|k| {
                let sensed: Vec<f64> = field
                    .element(k)
                    .iter()
                    .map(|u| match cfg.variable {
                        SensedVariable::Density => u.rho,
                    })
                    .collect();
                let s = if field.dim == 1 {
                    sensor::smoothness_indicator(&sensed, ops)?
                } else {
                    sensor::smoothness_indicator_2d(&sensed, ops)?
                };
                Ok(sensor::select_scheme(s, ops.p, cfg))
            })
            .collect(),
    }
}

/// Checks every node of every element for admissibility, reporting the first
/// offender's location.
pub fn check_admissible_field(gas: Gas, field: &SolutionField) -> Result<()> {
    let nn = field.nodes_per_element();
    for (idx, &u) in field.data.iter().enumerate() {
        gas.check_admissible(u)
            .map_err(|e| e.at(idx / nn, Some(idx % nn)))?;
    }
    Ok(())
}

/// Totals of the conserved variables over the mesh, by Gauss quadrature.
pub fn integrate_field(mesh: &Mesh, ops: &ElementOperators, field: &SolutionField) -> Cons {
    let mut total = Cons::ZERO;
    let p = ops.p;
    for (k, el) in mesh.elements.iter().enumerate() {
        let nodes = field.element(k);
        if field.dim == 1 {
            let mut acc = Cons::ZERO;
            for (i, &u) in nodes.iter().enumerate() {
                acc += u * ops.mass_weights[i];
            }
            total += acc * el.half_width[0];
        } else {
            let mut acc = Cons::ZERO;
            for i in 0..=p {
                for j in 0..=p {
                    acc += nodes[i * (p + 1) + j]
                        * (ops.mass_weights[i] * ops.mass_weights[j]);
                }
            }
            total += acc * (el.half_width[0] * el.half_width[1]);
        }
    }
    total
}

/// Everything the driver needs beyond the mesh and initial data.
#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub gas: Gas,
    pub order: usize,
    pub controller: StepController,
    pub sensor: SensorConfig,
    pub policy: SchemePolicy,
}

/// Per-step diagnostics recorded by [`solve`].
#[derive(Clone, Copy, Debug)]
pub struct StepRecord {
    /// Time reached after this step.
    pub t: f64,
    /// Step actually taken (after any guard halvings).
    pub dt: f64,
    /// Elements the sensor flagged for the staggered-grid scheme.
    pub rd_elements: usize,
    pub halvings: usize,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub field: SolutionField,
    pub t: f64,
    pub steps: usize,
    pub records: Vec<StepRecord>,
}

impl RunResult {
    /// Mean over steps of the fraction of elements running the staggered
    /// scheme.
    pub fn mean_rd_fraction(&self, n_elements: usize) -> f64 {
        if self.records.is_empty() || n_elements == 0 {
            return 0.0;
        }
        let sum: usize = self.records.iter().map(|r| r.rd_elements).sum();
        sum as f64 / (self.records.len() * n_elements) as f64
    }
}

/// Marches the field to `t_end` with SSP-RK3, re-evaluating the sensor once
/// per step and (optionally) guarding each step against inadmissible stages.
pub fn solve(cfg: &SolverConfig, mesh: &Mesh, initial: SolutionField) -> Result<RunResult> {
    let ops = operators::cached(cfg.order)?;
    let gas = cfg.gas;
    let ctrl = cfg.controller;
    let mut field = initial;
    let mut t = 0.0;
    let mut records = Vec::new();
    let tiny = 1e-12 * ctrl.t_end.max(1.0);
    while ctrl.t_end - t > tiny {
        let mut schemes = select_schemes(&field, ops, &cfg.sensor, cfg.policy)?;
        let dt = ctrl.clip(compute_dt(gas, &field, mesh, ops, ctrl.cfl)?, t);
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::DegenerateDomain {
                what: "computed time step is not positive",
            });
        }
        // The sensor is a heuristic and the high-order scheme carries no
        // admissibility guarantee: a smooth-looking element can still
        // extrapolate an inadmissible face state (freshly forming shocks sit
        // exactly between elements, where a modal indicator is blind). Such a
        // failure names an element and is independent of dt, so the remedy is
        // to drop that element to the guarded low-order scheme for this step
        // and try again; halving is left to genuinely dt-dependent overshoot
        // inside `guarded_advance`.
        let (next, taken, halvings) = loop {
            let mut rhs = |u: &SolutionField| global_residual(gas, mesh, ops, &schemes, u);
            let attempt = if ctrl.guard {
                guarded_advance(&field, &mut rhs, &|u| check_admissible_field(gas, u), dt)
            } else {
                ssp_rk3_step(&field, &mut rhs, dt).map(|f| (f, dt, 0))
            };
            match attempt {
                Ok(step) => break step,
                Err(e) => {
                    let blamed = match &e {
                        Error::Inadmissible { location, .. }
                        | Error::StabilityFailure { location, .. } => location.element,
                        _ => None,
                    };
                    let flipped = match blamed {
                        Some(k) if matches!(cfg.policy, SchemePolicy::Blend) => {
                            if schemes[k] == Scheme::Fr {
                                schemes[k] = Scheme::Rd;
                                true
                            } else {
                                // The element was already low-order, so the
                                // offending state came in through a face: an
                                // element's ghost is its neighbor's exported
                                // trace, and a high-order neighbor can export
                                // an inadmissible extrapolation. Drop the
                                // high-order face-neighbors too.
                                let mut any = false;
                                for face in &mesh.elements[k].faces {
                                    if let FaceLink::Interior(m) = *face {
                                        if schemes[m] == Scheme::Fr {
                                            schemes[m] = Scheme::Rd;
                                            any = true;
                                        }
                                    }
                                }
                                any
                            }
                        }
                        _ => false,
                    };
                    if !flipped {
                        return Err(e);
                    }
                }
            }
        };
        let rd_elements = schemes.iter().filter(|s| **s == Scheme::Rd).count();
        field = next;
        t += taken;
        records.push(StepRecord {
            t,
            dt: taken,
            rd_elements,
            halvings,
        });
    }
    let steps = records.len();
    Ok(RunResult {
        field,
        t,
        steps,
        records,
    })
}
