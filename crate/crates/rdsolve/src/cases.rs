//! Benchmark case registry: initial conditions, meshes, per-case defaults,
//! reference solutions, and a one-call driver that wires them into the
//! solver.
//!
//! Resolutions are case-shaped: the 1D shock problems count degrees of
//! freedom (so sweeps at different orders compare equal DoF), the vortex
//! counts elements per side, and the wind-tunnel/instability cases count
//! cells per unit length (resolution r means h = 1/r).

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::euler::{Gas, Prim};
use crate::mesh::{
    build_ffs_mesh, build_uniform_1d, build_uniform_quad, BoundaryCondition, Mesh, QuadBcs,
};
use crate::norms::{density_error_norms, ErrorReport};
use crate::operators;
use crate::riemann;
use crate::sensor::{SchemePolicy, SensedVariable, SensorConfig};
use crate::solver::{solve, RunResult, SolutionField, SolverConfig};
use crate::timestepping::StepController;

/// Ratio of specific heats shared by all bundled cases.
pub const GAMMA: f64 = 1.4;

pub fn case_gas() -> Gas {
    Gas { gamma: GAMMA }
}

/// Number of cells in the Godunov reference for cases without closed-form
/// solutions; chosen so the reference error sits far below scheme error at
/// the resolutions being judged.
pub const GODUNOV_REFERENCE_CELLS: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseId {
    /// Shock tube on [0,1], jump at 0.5, t = 0.2.
    Sod,
    /// Shock/sine-wave interaction on [−5,5], t = 0.18.
    ShuOsher,
    /// Isentropic vortex advected through the periodic box [−10,10]².
    Vortex,
    /// Mach-3 wind tunnel with a step, t = 4.
    Ffs,
    /// Shock-driven light-to-heavy interface on [0,10]×[0,π], t = 10.
    Rmi,
    /// Piecewise-constant 1D initial data supplied by the user.
    Custom,
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<CaseId> {
        match s {
            "sod" => Ok(CaseId::Sod),
            "shu_osher" | "shu-osher" => Ok(CaseId::ShuOsher),
            "vortex" => Ok(CaseId::Vortex),
            "ffs" => Ok(CaseId::Ffs),
            "rmi" => Ok(CaseId::Rmi),
            "custom" => Ok(CaseId::Custom),
            other => Err(Error::InvalidConfig(format!(
                "unknown case `{other}` (expected sod, shu_osher, vortex, ffs, rmi, custom)"
            ))),
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseId::Sod => "sod",
            CaseId::ShuOsher => "shu_osher",
            CaseId::Vortex => "vortex",
            CaseId::Ffs => "ffs",
            CaseId::Rmi => "rmi",
            CaseId::Custom => "custom",
        })
    }
}

/// Isentropic vortex parameters; defaults are the benchmark values
/// (strength 13.5, radius 1.5, Mach 0.4, advection (0,1), centered).
#[derive(Clone, Copy, Debug)]
pub struct VortexParams {
    pub strength: f64,
    pub radius: f64,
    pub mach: f64,
    pub vel: [f64; 2],
    pub center: [f64; 2],
}

impl Default for VortexParams {
    fn default() -> Self {
        VortexParams {
            strength: 13.5,
            radius: 1.5,
            mach: 0.4,
            vel: [0.0, 1.0],
            center: [0.0, 0.0],
        }
    }
}

impl VortexParams {
    /// φ(r) = exp((1 − r²)/(2R²)).
    pub fn phi(&self, r: f64) -> f64 {
        ((1.0 - r * r) / (2.0 * self.radius * self.radius)).exp()
    }

    /// Primitive state at a point: the closed-form pressure deficit, the
    /// matching isentropic density ρ = (γM²p)^(1/γ) (unit freestream
    /// density, so the advection speed is Mach M), and a solid-swirl
    /// velocity scaled by φ. This is the radial-equilibrium form — the
    /// vortex is an exact solution that advects unchanged.
    pub fn state(&self, x: [f64; 2]) -> Prim {
        let dx = x[0] - self.center[0];
        let dy = x[1] - self.center[1];
        let r = (dx * dx + dy * dy).sqrt();
        let phi = self.phi(r);
        let swirl = self.strength / (TAU * self.radius);
        let m2 = self.mach * self.mach;
        let p = 1.0 / (GAMMA * m2)
            * (1.0 - self.strength * self.strength * m2 * (GAMMA - 1.0) / (8.0 * PI * PI)
                * phi
                * phi)
                .powf(GAMMA / (GAMMA - 1.0));
        Prim::new(
            (GAMMA * m2 * p).powf(1.0 / GAMMA),
            [self.vel[0] + swirl * dy * phi, self.vel[1] - swirl * dx * phi],
            p,
        )
    }

    /// Time for the advected vortex to cross the periodic box once.
    pub fn convective_period(&self, box_len: f64) -> f64 {
        let speed = (self.vel[0] * self.vel[0] + self.vel[1] * self.vel[1]).sqrt();
        box_len / speed
    }
}

/// User-supplied piecewise-constant 1D case.
#[derive(Clone, Debug)]
pub struct CustomCase {
    pub domain: [f64; 2],
    /// `(right_edge, state)`; x belongs to the first segment whose right
    /// edge is ≥ x, and the last state extends to the end of the domain.
    pub segments: Vec<(f64, Prim)>,
    pub periodic: bool,
}

impl CustomCase {
    pub fn state_at(&self, x: f64) -> Prim {
        for &(edge, q) in &self.segments {
            if x <= edge {
                return q;
            }
        }
        self.segments.last().expect("validated nonempty").1
    }
}

#[derive(Clone, Debug)]
pub struct CaseConfig {
    pub case: CaseId,
    /// Polynomial order p of the solution space.
    pub order: usize,
    /// DoF (1D cases), elements per side (vortex), or cells per unit length
    /// (ffs/rmi).
    pub resolution: usize,
    pub policy: SchemePolicy,
    pub cfl: f64,
    /// `None` takes the case's published end time.
    pub t_end: Option<f64>,
    /// Modal sensor threshold scale.
    pub epsilon: f64,
    /// `None` keeps the admissibility guard on for the shock cases and off
    /// for the smooth vortex.
    pub guard: Option<bool>,
    pub custom: Option<CustomCase>,
    pub vortex: VortexParams,
}

impl CaseConfig {
    pub fn new(case: CaseId) -> Self {
        let resolution = match case {
            CaseId::Sod | CaseId::Custom => 512,
            CaseId::ShuOsher => 1024,
            CaseId::Vortex => 16,
            CaseId::Ffs => 200,
            CaseId::Rmi => 100,
        };
        CaseConfig {
            case,
            order: 3,
            resolution,
            policy: SchemePolicy::Blend,
            cfl: 0.1,
            t_end: None,
            epsilon: 0.01,
            guard: None,
            custom: None,
            vortex: VortexParams::default(),
        }
    }

    pub fn t_end_resolved(&self) -> f64 {
        self.t_end.unwrap_or(match self.case {
            CaseId::Sod => 0.2,
            CaseId::ShuOsher => 0.18,
            CaseId::Vortex => self.vortex.convective_period(20.0),
            CaseId::Ffs => 4.0,
            CaseId::Rmi => 10.0,
            CaseId::Custom => 0.2,
        })
    }

    pub fn guard_resolved(&self) -> bool {
        self.guard.unwrap_or(self.case != CaseId::Vortex)
    }

    /// Elements along the 1D line for the DoF-counted cases.
    pub fn elements_1d(&self) -> Result<usize> {
        let per = self.order + 1;
        if self.resolution % per != 0 || self.resolution == 0 {
            return Err(Error::InvalidConfig(format!(
                "{} DoF not divisible by p+1 = {per}",
                self.resolution
            )));
        }
        Ok(self.resolution / per)
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution == 0 {
            return Err(Error::InvalidConfig("resolution must be positive".into()));
        }
        if !(self.t_end_resolved() > 0.0) {
            return Err(Error::InvalidConfig("t_end must be positive".into()));
        }
        if !(self.cfl > 0.0) {
            return Err(Error::InvalidConfig("cfl must be positive".into()));
        }
        match self.case {
            CaseId::Sod | CaseId::ShuOsher | CaseId::Custom => {
                self.elements_1d()?;
            }
            _ => {}
        }
        match (self.case, &self.custom) {
            (CaseId::Custom, None) => {
                return Err(Error::InvalidConfig(
                    "custom case needs a piecewise specification".into(),
                ))
            }
            (CaseId::Custom, Some(c)) => {
                if c.segments.is_empty() {
                    return Err(Error::InvalidConfig(
                        "custom case needs at least one segment".into(),
                    ));
                }
                if !(c.domain[1] > c.domain[0]) {
                    return Err(Error::InvalidConfig("custom domain is empty".into()));
                }
                if c.segments.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return Err(Error::InvalidConfig(
                        "custom segment edges must increase".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Sod shock tube data.
pub fn sod_states() -> (Prim, Prim) {
    (Prim::new_1d(1.0, 0.0, 1.0), Prim::new_1d(0.125, 0.0, 0.1))
}

/// Shu–Osher data: shocked state for x ≤ −4, sinusoidal density field ahead.
pub fn shu_osher_states() -> (Prim, impl Fn(f64) -> Prim) {
    (
        Prim::new_1d(3.857143, 2.629369, 10.333333),
        |x: f64| Prim::new_1d(1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0),
    )
}

/// Richtmyer–Meshkov data: (driver, light center, heavy right), with the
/// interface at x = 3 + sin(4y)/4.
pub fn rmi_states() -> (Prim, Prim, Prim) {
    (
        Prim::new(1.0, [0.0, 0.0], 1.35),
        Prim::new(1.0, [0.0, 0.0], 0.1),
        Prim::new(35.0, [0.0, 0.0], 0.1),
    )
}

pub const RMI_PERTURBATION_AMPLITUDE: f64 = 0.25;
pub const RMI_PERTURBATION_WAVENUMBER: f64 = 4.0;

/// Mach-3 wind tunnel inflow.
pub fn ffs_state() -> Prim {
    Prim::new(1.4, [3.0, 0.0], 1.0)
}

/// The case's primitive initial condition as a point function.
pub fn initial_condition(cfg: &CaseConfig) -> Result<Box<dyn Fn([f64; 2]) -> Prim + Sync + Send>> {
    match cfg.case {
        CaseId::Sod => {
            let (l, r) = sod_states();
            Ok(Box::new(move |x| if x[0] < 0.5 { l } else { r }))
        }
        CaseId::ShuOsher => {
            let (l, right) = shu_osher_states();
            Ok(Box::new(move |x| if x[0] <= -4.0 { l } else { right(x[0]) }))
        }
        CaseId::Vortex => {
            let params = cfg.vortex;
            Ok(Box::new(move |x| params.state(x)))
        }
        CaseId::Ffs => {
            let q = ffs_state();
            Ok(Box::new(move |_| q))
        }
        CaseId::Rmi => {
            let (l, c, r) = rmi_states();
            Ok(Box::new(move |x| {
                if x[0] <= 1.0 {
                    l
                } else if x[0]
                    <= 3.0
                        + RMI_PERTURBATION_AMPLITUDE
                            * (RMI_PERTURBATION_WAVENUMBER * x[1]).sin()
                {
                    c
                } else {
                    r
                }
            }))
        }
        CaseId::Custom => {
            let spec = cfg
                .custom
                .clone()
                .ok_or_else(|| Error::InvalidConfig("custom case without spec".into()))?;
            Ok(Box::new(move |x| spec.state_at(x[0])))
        }
    }
}

pub fn build_case_mesh(cfg: &CaseConfig) -> Result<Mesh> {
    match cfg.case {
        CaseId::Sod => build_uniform_1d(
            [0.0, 1.0],
            cfg.elements_1d()?,
            BoundaryCondition::Extrapolate,
            BoundaryCondition::Extrapolate,
        ),
        CaseId::ShuOsher => build_uniform_1d(
            [-5.0, 5.0],
            cfg.elements_1d()?,
            BoundaryCondition::Extrapolate,
            BoundaryCondition::Extrapolate,
        ),
        CaseId::Vortex => build_uniform_quad(
            [-10.0, 10.0],
            [-10.0, 10.0],
            cfg.resolution,
            cfg.resolution,
            QuadBcs::all(BoundaryCondition::Periodic),
        ),
        CaseId::Ffs => build_ffs_mesh(1.0 / cfg.resolution as f64),
        CaseId::Rmi => {
            let r = cfg.resolution as f64;
            build_uniform_quad(
                [0.0, 10.0],
                [0.0, PI],
                10 * cfg.resolution,
                (PI * r).round() as usize,
                QuadBcs {
                    left: BoundaryCondition::FixedState(rmi_states().0),
                    right: BoundaryCondition::Extrapolate,
                    bottom: BoundaryCondition::Periodic,
                    top: BoundaryCondition::Periodic,
                },
            )
        }
        CaseId::Custom => {
            let spec = cfg
                .custom
                .as_ref()
                .ok_or_else(|| Error::InvalidConfig("custom case without spec".into()))?;
            let bc = if spec.periodic {
                BoundaryCondition::Periodic
            } else {
                BoundaryCondition::Extrapolate
            };
            build_uniform_1d(spec.domain, cfg.elements_1d()?, bc, bc)
        }
    }
}

/// Mesh plus pointwise nodal initialization of the case's primitive data.
pub fn init_case(cfg: &CaseConfig) -> Result<(Mesh, SolutionField)> {
    cfg.validate()?;
    let mesh = build_case_mesh(cfg)?;
    let ops = operators::cached(cfg.order)?;
    let init = initial_condition(cfg)?;
    let field = SolutionField::from_prim_fn(case_gas(), &mesh, ops, |x| init(x))?;
    Ok((mesh, field))
}

pub fn solver_config(cfg: &CaseConfig) -> SolverConfig {
    SolverConfig {
        gas: case_gas(),
        order: cfg.order,
        controller: StepController {
            cfl: cfg.cfl,
            t_end: cfg.t_end_resolved(),
            guard: cfg.guard_resolved(),
        },
        sensor: SensorConfig {
            epsilon: cfg.epsilon,
            variable: SensedVariable::Density,
        },
        policy: cfg.policy,
    }
}

/// A finished run: the mesh it ran on, the solver trace, and error norms
/// whenever the case has a usable reference at the end time.
#[derive(Clone, Debug)]
pub struct RunArtifacts {
    pub mesh: Mesh,
    pub run: RunResult,
    pub report: Option<ErrorReport>,
}

/// Density reference as a point function at the resolved end time, for the
/// cases that have one: Sod (exact solution) and the vortex after whole
/// convective periods (the initial condition).
pub fn reference_density(
    cfg: &CaseConfig,
) -> Result<Option<Box<dyn Fn([f64; 2]) -> f64 + Sync + Send>>> {
    let t = cfg.t_end_resolved();
    match cfg.case {
        CaseId::Sod => {
            let (l, r) = sod_states();
            let star = riemann::solve_star(case_gas(), l, r)?;
            Ok(Some(Box::new(move |x| {
                riemann::sample(case_gas(), l, r, &star, (x[0] - 0.5) / t).rho
            })))
        }
        CaseId::Vortex => {
            let period = cfg.vortex.convective_period(20.0);
            let cycles = t / period;
            if (cycles - cycles.round()).abs() > 1e-9 || cycles < 0.5 {
                return Ok(None);
            }
            let params = cfg.vortex;
            Ok(Some(Box::new(move |x| params.state(x).rho)))
        }
        _ => Ok(None),
    }
}

/// Reference primitive profile at time `t` sampled at `xs`, for the 1D cases:
/// exact for Riemann-type data, a fine-grid Godunov computation (flagged by
/// [`GODUNOV_REFERENCE_CELLS`]) for Shu–Osher.
pub fn reference_profile(cfg: &CaseConfig, t: f64, xs: &[f64]) -> Result<Vec<Prim>> {
    let gas = case_gas();
    match cfg.case {
        CaseId::Sod => {
            let (l, r) = sod_states();
            riemann::riemann_profile(gas, l, r, 0.5, t, xs)
        }
        CaseId::ShuOsher => {
            let (l, right) = shu_osher_states();
            let cells = riemann::godunov_profile(
                gas,
                |x| if x <= -4.0 { l } else { right(x) },
                [-5.0, 5.0],
                GODUNOV_REFERENCE_CELLS,
                t,
            )?;
            let h = 10.0 / GODUNOV_REFERENCE_CELLS as f64;
            Ok(xs
                .iter()
                .map(|&x| {
                    let idx = ((x + 5.0) / h - 0.5).round().max(0.0) as usize;
                    cells[idx.min(cells.len() - 1)].1
                })
                .collect())
        }
        CaseId::Custom => {
            let spec = cfg
                .custom
                .as_ref()
                .ok_or_else(|| Error::InvalidConfig("custom case without spec".into()))?;
            if spec.periodic || spec.segments.len() != 2 {
                return Err(Error::MissingReference {
                    case: cfg.case.to_string(),
                });
            }
            let x0 = spec.segments[0].0;
            riemann::riemann_profile(gas, spec.segments[0].1, spec.segments[1].1, x0, t, xs)
        }
        _ => Err(Error::MissingReference {
            case: cfg.case.to_string(),
        }),
    }
}

/// Initializes, marches to the end time, and attaches error norms when a
/// reference exists. Deterministic for a fixed config.
pub fn run_case(cfg: &CaseConfig) -> Result<RunArtifacts> {
    let (mesh, field) = init_case(cfg)?;
    let run = solve(&solver_config(cfg), &mesh, field)?;
    let ops = operators::cached(cfg.order)?;
    let report = reference_density(cfg)?
        .map(|exact| density_error_norms(&mesh, ops, &run.field, |x| exact(x)));
    Ok(RunArtifacts { mesh, run, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::check_admissible_field;
    use approx::assert_relative_eq;

    #[test]
    fn case_names_round_trip_and_defaults_resolve() {
        for case in [
            CaseId::Sod,
            CaseId::ShuOsher,
            CaseId::Vortex,
            CaseId::Ffs,
            CaseId::Rmi,
            CaseId::Custom,
        ] {
            assert_eq!(case.to_string().parse::<CaseId>().unwrap(), case);
        }
        assert!("sodd".parse::<CaseId>().is_err());

        assert_relative_eq!(CaseConfig::new(CaseId::Sod).t_end_resolved(), 0.2);
        assert_relative_eq!(CaseConfig::new(CaseId::ShuOsher).t_end_resolved(), 0.18);
        assert_relative_eq!(CaseConfig::new(CaseId::Vortex).t_end_resolved(), 20.0);
        assert_relative_eq!(CaseConfig::new(CaseId::Ffs).t_end_resolved(), 4.0);
        assert_relative_eq!(CaseConfig::new(CaseId::Rmi).t_end_resolved(), 10.0);
        assert!(!CaseConfig::new(CaseId::Vortex).guard_resolved());
        assert!(CaseConfig::new(CaseId::Sod).guard_resolved());

        let mut bad = CaseConfig::new(CaseId::Sod);
        bad.resolution = 513;
        assert!(bad.validate().is_err());
        assert!(CaseConfig::new(CaseId::Custom).validate().is_err());
    }

    #[test]
    fn vortex_center_matches_closed_forms() {
        let v = VortexParams::default();
        assert_relative_eq!(v.phi(0.0), 1.2488488690016821, max_relative = 1e-14);
        let q = v.state([0.0, 0.0]);
        assert_relative_eq!(q.p, 1.7851916639920216, max_relative = 1e-12);
        assert_relative_eq!(
            q.rho,
            (GAMMA * 0.16 * q.p).powf(1.0 / GAMMA),
            max_relative = 1e-14
        );
        assert_relative_eq!(q.vel[0], 0.0);
        assert_relative_eq!(q.vel[1], 1.0);

        // Far field: φ ≈ 0 leaves unit density and the freestream at Mach 0.4.
        let far = v.state([10.0, 10.0]);
        let p_inf = 1.0 / (GAMMA * 0.16);
        assert_relative_eq!(far.p, p_inf, max_relative = 1e-12);
        assert_relative_eq!(far.rho, 1.0, max_relative = 1e-12);
        let a = (GAMMA * far.p / far.rho).sqrt();
        assert_relative_eq!(1.0 / a, 0.4, max_relative = 1e-12);
    }

    #[test]
    fn rmi_interface_follows_the_sine() {
        let cfg = CaseConfig::new(CaseId::Rmi);
        let init = initial_condition(&cfg).unwrap();
        for y in [0.1f64, 1.0, 2.5] {
            let edge = 3.0 + 0.25 * (4.0 * y).sin();
            assert_eq!(init([edge - 1e-9, y]).rho, 1.0);
            assert_eq!(init([edge + 1e-9, y]).rho, 35.0);
        }
        assert_relative_eq!(init([0.5, 2.0]).p, 1.35);

        // Atwood number of the interface.
        let (_, c, r) = rmi_states();
        assert_relative_eq!((r.rho - c.rho) / (r.rho + c.rho), 17.0 / 18.0);
    }

    #[test]
    fn meshes_have_case_shapes_and_admissible_initial_data() {
        for (case, res, order) in [
            (CaseId::Sod, 64, 1),
            (CaseId::ShuOsher, 64, 3),
            (CaseId::Vortex, 4, 2),
            (CaseId::Ffs, 10, 1),
            (CaseId::Rmi, 5, 1),
        ] {
            let mut cfg = CaseConfig::new(case);
            cfg.resolution = res;
            cfg.order = order;
            let (mesh, field) = init_case(&cfg).unwrap();
            check_admissible_field(case_gas(), &field).unwrap();
            assert_eq!(
                field.data.len(),
                mesh.n_elements() * field.nodes_per_element()
            );
        }
        // RMI y-extent follows round(π·resolution).
        let mut cfg = CaseConfig::new(CaseId::Rmi);
        cfg.resolution = 25;
        cfg.order = 1;
        let mesh = build_case_mesh(&cfg).unwrap();
        assert_eq!(mesh.n_elements(), 250 * 79);
    }

    #[test]
    fn sod_runs_deterministically_with_error_report() {
        let mut cfg = CaseConfig::new(CaseId::Sod);
        cfg.order = 1;
        cfg.resolution = 128;
        cfg.t_end = Some(0.05);
        let a = run_case(&cfg).unwrap();
        let b = run_case(&cfg).unwrap();
        let ra = a.report.unwrap();
        let rb = b.report.unwrap();
        assert_eq!(ra.l1.to_bits(), rb.l1.to_bits(), "run is not deterministic");
        assert_eq!(a.run.steps, b.run.steps);
        assert!(ra.l1 > 0.0 && ra.l1 < 0.05, "early Sod L1 {:?}", ra.l1);
        assert!(ra.linf < 0.9);
    }

    #[test]
    fn reference_dispatch_matches_case_type() {
        let cfg = CaseConfig::new(CaseId::Sod);
        let xs = [0.3, 0.5, 0.7];
        let prof = reference_profile(&cfg, 0.2, &xs).unwrap();
        // At t = 0.2 the rarefaction has reached ≈ 0.26, the contact ≈ 0.685,
        // the shock ≈ 0.85: x = 0.5 sits in the left star region.
        assert_relative_eq!(prof[1].p, 0.3031301780506468, max_relative = 1e-10);

        assert!(matches!(
            reference_profile(&CaseConfig::new(CaseId::Vortex), 1.0, &xs),
            Err(Error::MissingReference { .. })
        ));

        let mut custom = CaseConfig::new(CaseId::Custom);
        custom.custom = Some(CustomCase {
            domain: [0.0, 1.0],
            segments: vec![
                (0.4, Prim::new_1d(1.0, 0.0, 1.0)),
                (1.0, Prim::new_1d(0.125, 0.0, 0.1)),
            ],
            periodic: false,
        });
        let prof = reference_profile(&custom, 0.1, &[0.4]).unwrap();
        assert_relative_eq!(prof[0].p, 0.3031301780506468, max_relative = 1e-10);

        custom.custom.as_mut().unwrap().periodic = true;
        assert!(reference_profile(&custom, 0.1, &[0.4]).is_err());
    }
}
