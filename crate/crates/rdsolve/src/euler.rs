//! Euler-equation physics: state conversions, directional fluxes, the Davis
//! wavespeed estimate, and invariant-set membership.

use crate::error::{Admissibility, Error, Location, Result};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Conserved variables: density, momentum, total energy density.
///
/// One layout serves both 1D and 2D: 1D states keep `mom[1] == 0` and use
/// normals with zero y-component. Flux vectors have the same shape (mass
/// flux, momentum flux, energy flux) and reuse this type.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cons {
    pub rho: f64,
    pub mom: [f64; 2],
    pub energy: f64,
}

impl Cons {
    pub const ZERO: Cons = Cons {
        rho: 0.0,
        mom: [0.0, 0.0],
        energy: 0.0,
    };

    pub fn new(rho: f64, mom: [f64; 2], energy: f64) -> Cons {
        Cons { rho, mom, energy }
    }

    /// Largest absolute component; used for drift/consistency checks.
    pub fn max_abs(&self) -> f64 {
        self.rho
            .abs()
            .max(self.mom[0].abs())
            .max(self.mom[1].abs())
            .max(self.energy.abs())
    }
}

impl Add for Cons {
    type Output = Cons;
    fn add(self, o: Cons) -> Cons {
        Cons::new(
            self.rho + o.rho,
            [self.mom[0] + o.mom[0], self.mom[1] + o.mom[1]],
            self.energy + o.energy,
        )
    }
}

impl Sub for Cons {
    type Output = Cons;
    fn sub(self, o: Cons) -> Cons {
        Cons::new(
            self.rho - o.rho,
            [self.mom[0] - o.mom[0], self.mom[1] - o.mom[1]],
            self.energy - o.energy,
        )
    }
}

impl Mul<f64> for Cons {
    type Output = Cons;
    fn mul(self, s: f64) -> Cons {
        Cons::new(
            self.rho * s,
            [self.mom[0] * s, self.mom[1] * s],
            self.energy * s,
        )
    }
}

impl Mul<Cons> for f64 {
    type Output = Cons;
    fn mul(self, u: Cons) -> Cons {
        u * self
    }
}

impl Neg for Cons {
    type Output = Cons;
    fn neg(self) -> Cons {
        self * -1.0
    }
}

impl AddAssign for Cons {
    fn add_assign(&mut self, o: Cons) {
        *self = *self + o;
    }
}

/// Primitive variables: density, velocity, pressure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prim {
    pub rho: f64,
    pub vel: [f64; 2],
    pub p: f64,
}

impl Prim {
    pub fn new(rho: f64, vel: [f64; 2], p: f64) -> Prim {
        Prim { rho, vel, p }
    }

    /// 1D shorthand: zero transverse velocity.
    pub fn new_1d(rho: f64, v: f64, p: f64) -> Prim {
        Prim::new(rho, [v, 0.0], p)
    }
}

/// Parameters of the invariant set `{rho >= 0, e(u) >= 0, s(u) >= s0}`.
#[derive(Debug, Clone, Copy)]
pub struct InvariantSetSpec {
    /// Entropy floor for the diagnostic `s(u) = p * rho^(-gamma)` bound.
    pub s0: f64,
}

/// Per-condition verdict of [`Gas::invariant_membership`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Membership {
    pub rho_ok: bool,
    pub e_ok: bool,
    pub s_ok: bool,
}

impl Membership {
    pub fn all(&self) -> bool {
        self.rho_ok && self.e_ok && self.s_ok
    }
}

/// Ideal-gas model. `gamma` is a per-case constant rather than a global so
/// case setups (e.g. the Atwood-number configuration) stay auditable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gas {
    pub gamma: f64,
}

impl Default for Gas {
    fn default() -> Gas {
        Gas { gamma: 1.4 }
    }
}

#[inline]
fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

impl Gas {
    pub fn new(gamma: f64) -> Gas {
        Gas { gamma }
    }

    /// E = p/(gamma-1) + rho*|v|^2/2. Errors on nonpositive density.
    pub fn prim_to_cons(&self, q: Prim) -> Result<Cons> {
        if q.rho <= 0.0 {
            return Err(inadmissible(
                Admissibility::NonpositiveDensity,
                Cons::new(q.rho, [q.rho * q.vel[0], q.rho * q.vel[1]], 0.0),
            ));
        }
        let ke = 0.5 * q.rho * dot(q.vel, q.vel);
        Ok(Cons::new(
            q.rho,
            [q.rho * q.vel[0], q.rho * q.vel[1]],
            q.p / (self.gamma - 1.0) + ke,
        ))
    }

    /// Exact inverse of [`Gas::prim_to_cons`]; errors on rho <= 0 or p <= 0.
    pub fn cons_to_prim(&self, u: Cons) -> Result<Prim> {
        if u.rho <= 0.0 {
            return Err(inadmissible(Admissibility::NonpositiveDensity, u));
        }
        let vel = [u.mom[0] / u.rho, u.mom[1] / u.rho];
        let p = (self.gamma - 1.0) * (u.energy - 0.5 * u.rho * dot(vel, vel));
        if p <= 0.0 {
            return Err(inadmissible(Admissibility::NonpositivePressure, u));
        }
        Ok(Prim { rho: u.rho, vel, p })
    }

    /// p = (gamma-1)(E - rho*|v|^2/2); no admissibility check.
    pub fn pressure(&self, u: Cons) -> f64 {
        let vel = [u.mom[0] / u.rho, u.mom[1] / u.rho];
        (self.gamma - 1.0) * (u.energy - 0.5 * u.rho * dot(vel, vel))
    }

    /// Specific internal energy e(u) = E/rho - |v|^2/2; no check.
    pub fn internal_energy(&self, u: Cons) -> f64 {
        let vel = [u.mom[0] / u.rho, u.mom[1] / u.rho];
        u.energy / u.rho - 0.5 * dot(vel, vel)
    }

    /// Specific physical entropy s(u) = p * rho^(-gamma); no check.
    pub fn entropy(&self, u: Cons) -> f64 {
        self.pressure(u) * u.rho.powf(-self.gamma)
    }

    pub fn sound_speed(&self, q: Prim) -> f64 {
        (self.gamma * q.p / q.rho).sqrt()
    }

    pub fn is_admissible(&self, u: Cons) -> bool {
        u.rho > 0.0 && self.pressure(u) > 0.0
    }

    pub fn check_admissible(&self, u: Cons) -> Result<()> {
        if u.rho <= 0.0 {
            return Err(inadmissible(Admissibility::NonpositiveDensity, u));
        }
        if self.pressure(u) <= 0.0 {
            return Err(inadmissible(Admissibility::NonpositiveInternalEnergy, u));
        }
        Ok(())
    }

    /// Directional flux F(u)·n for a unit normal n.
    pub fn euler_flux(&self, u: Cons, n: [f64; 2]) -> Result<Cons> {
        let q = self.cons_to_prim(u)?;
        Ok(self.flux_of_prim(q, n))
    }

    /// Flux from primitive variables (total energy recomputed internally).
    /// Hot-path variant of [`Gas::euler_flux`] for states already converted.
    pub fn flux_of_prim(&self, q: Prim, n: [f64; 2]) -> Cons {
        let vn = dot(q.vel, n);
        let energy = q.p / (self.gamma - 1.0) + 0.5 * q.rho * dot(q.vel, q.vel);
        Cons::new(
            q.rho * vn,
            [
                q.rho * q.vel[0] * vn + q.p * n[0],
                q.rho * q.vel[1] * vn + q.p * n[1],
            ],
            (energy + q.p) * vn,
        )
    }

    /// Davis estimate of the maximum wavespeed of the Riemann problem
    /// (uL, uR) along n: max(|vL·n| + cL, |vR·n| + cR).
    pub fn davis_max_wavespeed(&self, ul: Cons, ur: Cons, n: [f64; 2]) -> Result<f64> {
        let ql = self.cons_to_prim(ul)?;
        let qr = self.cons_to_prim(ur)?;
        Ok(self.davis_of_prim(ql, qr, n))
    }

    pub fn davis_of_prim(&self, ql: Prim, qr: Prim, n: [f64; 2]) -> f64 {
        let sl = dot(ql.vel, n).abs() + self.sound_speed(ql);
        let sr = dot(qr.vel, n).abs() + self.sound_speed(qr);
        sl.max(sr)
    }

    /// Reports which of the invariant-set conditions u satisfies. Total
    /// function: inadmissible states yield `false` entries, never errors.
    pub fn invariant_membership(&self, u: Cons, set: InvariantSetSpec) -> Membership {
        let rho_ok = u.rho >= 0.0;
        // e(u) and s(u) are only evaluable at positive density.
        let (e_ok, s_ok) = if u.rho > 0.0 {
            let e = self.internal_energy(u);
            (e >= 0.0, self.entropy(u) >= set.s0)
        } else {
            (false, false)
        };
        Membership { rho_ok, e_ok, s_ok }
    }
}

fn inadmissible(condition: Admissibility, state: Cons) -> Error {
    Error::Inadmissible {
        condition,
        state,
        location: Location::default(),
    }
}
