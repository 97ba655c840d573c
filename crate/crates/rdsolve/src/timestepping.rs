//! Explicit time integration: forward Euler and the three-stage
//! strong-stability-preserving Runge–Kutta scheme, CFL step sizing, and a
//! positivity guard that backtracks the step when a stage leaves the
//! admissible set.

use crate::error::{Error, Location, Result};
use crate::euler::Gas;
use crate::mesh::Mesh;
use crate::operators::ElementOperators;
use crate::solver::SolutionField;

/// Linear-combination support needed by the explicit steppers.
pub trait LinearState: Clone {
    /// a·x + b·y, elementwise.
    fn scaled_add(a: f64, x: &Self, b: f64, y: &Self) -> Self;
}

impl LinearState for f64 {
    fn scaled_add(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        a * x + b * y
    }
}

/// Step-size policy and stopping time.
#[derive(Clone, Copy, Debug)]
pub struct StepController {
    /// Courant number for [`compute_dt`].
    pub cfl: f64,
    pub t_end: f64,
    /// Enables the halving guard in [`guarded_advance`].
    pub guard: bool,
}

impl StepController {
    pub fn new(t_end: f64) -> Self {
        StepController {
            cfl: 0.1,
            t_end,
            guard: true,
        }
    }

    /// Clips a proposed step so the run lands exactly on t_end.
    pub fn clip(&self, dt: f64, t: f64) -> f64 {
        dt.min(self.t_end - t)
    }
}

/// SSP-RK3 stage coefficients (a·uⁿ + b·u_stage + c·Δt·L(u_stage)): each row
/// is a convex combination of forward-Euler results, which is what lets the
/// positivity argument of the underlying scheme carry through the stages.
pub const SSP_RK3_STAGES: [[f64; 3]; 3] = [
    [0.0, 1.0, 1.0],
    [3.0 / 4.0, 1.0 / 4.0, 1.0 / 4.0],
    [1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0],
];

/// uⁿ⁺¹ = uⁿ + Δt·L(uⁿ).
pub fn forward_euler_step<T, F>(u: &T, rhs: &mut F, dt: f64) -> Result<T>
where
    T: LinearState,
    F: FnMut(&T) -> Result<T>,
{
    let k = rhs(u)?;
    Ok(T::scaled_add(1.0, u, dt, &k))
}

/// Three-stage, third-order strong-stability-preserving Runge–Kutta step:
/// u¹ = uⁿ + Δt L(uⁿ); u² = ¾uⁿ + ¼(u¹ + Δt L(u¹));
/// uⁿ⁺¹ = ⅓uⁿ + ⅔(u² + Δt L(u²)).
pub fn ssp_rk3_step<T, F>(u: &T, rhs: &mut F, dt: f64) -> Result<T>
where
    T: LinearState,
    F: FnMut(&T) -> Result<T>,
{
    let u1 = forward_euler_step(u, rhs, dt)?;
    let e1 = forward_euler_step(&u1, rhs, dt)?;
    let u2 = T::scaled_add(3.0 / 4.0, u, 1.0 / 4.0, &e1);
    let e2 = forward_euler_step(&u2, rhs, dt)?;
    Ok(T::scaled_add(1.0 / 3.0, u, 2.0 / 3.0, &e2))
}

/// CFL-limited step: Δt = cfl · min over elements and directions of
/// width_d / ((2p+1) · max over the element's nodes of (|v_d| + c)).
pub fn compute_dt(
    gas: Gas,
    field: &SolutionField,
    mesh: &Mesh,
    ops: &ElementOperators,
    cfl: f64,
) -> Result<f64> {
    let scale = (2 * ops.p + 1) as f64;
    let mut tightest = f64::INFINITY;
    for (k, el) in mesh.elements.iter().enumerate() {
        let mut lam = [0.0f64; 2];
        for (node, &u) in field.element(k).iter().enumerate() {
            let q = gas.cons_to_prim(u).map_err(|e| e.at(k, Some(node)))?;
            let c = gas.sound_speed(q);
            for d in 0..mesh.dim {
                lam[d] = lam[d].max(q.vel[d].abs() + c);
            }
        }
        for d in 0..mesh.dim {
            tightest = tightest.min(2.0 * el.half_width[d] / (scale * lam[d]));
        }
    }
    Ok(cfl * tightest)
}

/// Advances one guarded step: each stage's result must pass `check`
/// (admissibility), otherwise the step size is halved and the whole step
/// retried, up to 20 times. Returns the accepted state, the step actually
/// taken, and the number of halvings.
///
/// An admissibility failure raised inside `rhs` is returned immediately
/// instead of halved away: every stage state is checked before it is fed
/// back to `rhs`, so a residual that still cannot be evaluated is rejecting
/// a *derived* quantity (an extrapolated face trace, a ghost) whose health
/// does not improve with Δt. The caller owns that failure — typically by
/// demoting the offending element to the robust scheme and retrying the
/// step. Any error that is not an admissibility report is fatal.
pub fn guarded_advance<T, F, C>(
    u: &T,
    rhs: &mut F,
    check: &C,
    dt_initial: f64,
) -> Result<(T, f64, usize)>
where
    T: LinearState,
    F: FnMut(&T) -> Result<T>,
    C: Fn(&T) -> Result<()>,
{
    const MAX_HALVINGS: usize = 20;
    let mut dt = dt_initial;
    let mut last_location = Location {
        element: None,
        node: None,
    };
    for halvings in 0..=MAX_HALVINGS {
        match try_rk3_checked(u, rhs, check, dt) {
            Ok(next) => return Ok((next, dt, halvings)),
            Err(StageFailure::Overshoot(location)) => {
                last_location = location;
                dt /= 2.0;
            }
            Err(StageFailure::Fatal(other)) => return Err(other),
        }
    }
    Err(Error::StabilityFailure {
        dt_initial,
        halvings: MAX_HALVINGS as u32,
        location: last_location,
    })
}

enum StageFailure {
    /// A stage state failed the admissibility check: halving Δt helps.
    Overshoot(Location),
    /// Everything else, including residual-evaluation failures: halving
    /// cannot help, hand the error back.
    Fatal(Error),
}

fn try_rk3_checked<T, F, C>(u: &T, rhs: &mut F, check: &C, dt: f64) -> std::result::Result<T, StageFailure>
where
    T: LinearState,
    F: FnMut(&T) -> Result<T>,
    C: Fn(&T) -> Result<()>,
{
    let classify = |e: Error| match e {
        Error::Inadmissible { location, .. } => StageFailure::Overshoot(location),
        other => StageFailure::Fatal(other),
    };
    let u1 = forward_euler_step(u, rhs, dt).map_err(StageFailure::Fatal)?;
    check(&u1).map_err(&classify)?;
    let e1 = forward_euler_step(&u1, rhs, dt).map_err(StageFailure::Fatal)?;
    let u2 = T::scaled_add(3.0 / 4.0, u, 1.0 / 4.0, &e1);
    check(&u2).map_err(&classify)?;
    let e2 = forward_euler_step(&u2, rhs, dt).map_err(StageFailure::Fatal)?;
    let u3 = T::scaled_add(1.0 / 3.0, u, 2.0 / 3.0, &e2);
    check(&u3).map_err(&classify)?;
    Ok(u3)
}
