//! Acceptance battery: one numbered check per release criterion, each
//! printing a single `ACCEPTANCE n: PASS|FAIL` line directly to stdout (so
//! the verdicts survive libtest's output capture). Details go through the
//! normal print macros and show up with `--nocapture` or on failure.
//!
//! The reference error tables baked in below are external targets for the
//! staggered-grid scheme on the Sod tube; where a measured property
//! deviates from a target, the assertion is kept honest and the deviation
//! is reported rather than the tolerance widened.
//!
//! Expect a runtime of tens of minutes: the invariant-domain checks run the
//! full wind-tunnel and shocked-interface cases at reduced resolution.

use std::io::Write as IoWrite;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rdsolve::cases::{
    case_gas, init_case, run_case, CaseConfig, CaseId, CustomCase,
};
use rdsolve::euler::{Gas, Prim};
use rdsolve::mesh::{build_uniform_1d, BoundaryCondition, Mesh};
use rdsolve::norms::{least_squares_slope, ErrorReport};
use rdsolve::operators::{cached, sbp_residual, ElementOperators};
use rdsolve::rd::{aux_flux, aux_state, d_coefficient, line_aux_fluxes, AuxPair, RdElementView};
use rdsolve::riemann::{fan_average, sample, solve_star, wave_speeds};
use rdsolve::sensor::{Scheme, SchemePolicy, SensorConfig};
use rdsolve::solver::{
    check_admissible_field, global_residual, integrate_field, select_schemes, SolutionField,
};
use rdsolve::timestepping::{compute_dt, forward_euler_step, ssp_rk3_step};

const X1: [f64; 2] = [1.0, 0.0];

/// Writes one verdict line to the real stdout, bypassing libtest capture.
fn announce(line: &str) {
    let mut out = std::io::stdout();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

fn verdict(n: usize, pass: bool, detail: &str) -> bool {
    let word = if pass { "PASS" } else { "FAIL" };
    announce(&format!("ACCEPTANCE {n}: {word} ({detail})"));
    pass
}

// ---------------------------------------------------------------------------
// Criteria 1 & 2: Sod error tables and the L-infinity plateau
// ---------------------------------------------------------------------------

/// Reference L1 / L2 density errors for the Sod tube, staggered-grid scheme
/// only, indexed by [order in {0,1,3,7}][DoF in {256,512,1024,2048,4096}].
const REF_L1: [[f64; 5]; 4] = [
    [1.57e-2, 1.03e-2, 6.54e-3, 4.15e-3, 2.64e-3],
    [3.18e-2, 2.06e-2, 1.31e-2, 8.35e-3, 5.28e-3],
    [1.88e-2, 1.24e-2, 7.91e-3, 4.98e-3, 3.17e-3],
    [8.71e-3, 5.77e-3, 3.78e-3, 2.40e-3, 1.51e-3],
];
const REF_L2: [[f64; 5]; 4] = [
    [2.49e-2, 1.89e-2, 1.42e-2, 1.09e-2, 8.72e-3],
    [3.61e-2, 2.68e-2, 2.00e-2, 1.56e-2, 1.23e-2],
    [2.78e-2, 2.10e-2, 1.59e-2, 1.20e-2, 9.54e-3],
    [1.86e-2, 1.41e-2, 1.10e-2, 8.42e-3, 6.51e-3],
];
const REF_ROC_L1: [f64; 4] = [0.6456, 0.6484, 0.6452, 0.6322];
const SWEEP_ORDERS: [usize; 4] = [0, 1, 3, 7];
const SWEEP_DOFS: [usize; 5] = [256, 512, 1024, 2048, 4096];

fn sod_rd_report(order: usize, dof: usize) -> ErrorReport {
    let mut cfg = CaseConfig::new(CaseId::Sod);
    cfg.order = order;
    cfg.resolution = dof;
    cfg.policy = SchemePolicy::ForceRd;
    run_case(&cfg)
        .unwrap_or_else(|e| panic!("sod p{order}/{dof} failed: {e}"))
        .report
        .expect("sod has an exact reference")
}

fn sod_sweep() -> &'static Vec<Vec<ErrorReport>> {
    static SWEEP: OnceLock<Vec<Vec<ErrorReport>>> = OnceLock::new();
    SWEEP.get_or_init(|| {
        SWEEP_ORDERS
            .iter()
            .map(|&p| {
                SWEEP_DOFS
                    .iter()
                    .map(|&dof| {
                        eprintln!("  [sweep] sod p={p} dof={dof}");
                        sod_rd_report(p, dof)
                    })
                    .collect()
            })
            .collect()
    })
}

#[test]
fn a01_sod_error_tables() {
    let sweep = sod_sweep();
    let mut pass = true;
    let mut worst: (f64, String) = (0.0, String::new());

    println!("L1/L2 vs reference, tolerance 10% (DoF 256..1024):");
    for (pi, &p) in SWEEP_ORDERS.iter().enumerate() {
        for di in 0..3 {
            let dof = SWEEP_DOFS[di];
            let rep = &sweep[pi][di];
            for (name, got, want) in [
                ("L1", rep.l1, REF_L1[pi][di]),
                ("L2", rep.l2, REF_L2[pi][di]),
            ] {
                let rel = (got - want) / want;
                let ok = rel.abs() <= 0.10;
                pass &= ok;
                if rel.abs() > worst.0 {
                    worst = (rel.abs(), format!("p{p}/{dof} {name}"));
                }
                println!(
                    "  p{p} dof {dof:>4} {name}: {got:.4e} vs {want:.2e}  ({:+.1}%) {}",
                    100.0 * rel,
                    if ok { "ok" } else { "OUT OF BAND" }
                );
            }
        }
    }

    println!("rate of convergence (L1, least squares over 256..4096), tolerance ±0.03:");
    let mut roc_p0 = f64::NAN;
    let mut roc_p3 = f64::NAN;
    for (pi, &p) in SWEEP_ORDERS.iter().enumerate() {
        let hs: Vec<f64> = SWEEP_DOFS.iter().map(|&d| (1.0 / d as f64).ln()).collect();
        let es: Vec<f64> = sweep[pi].iter().map(|r| r.l1.ln()).collect();
        let slope = least_squares_slope(&hs, &es).unwrap();
        println!("  p{p}: {slope:.4} (reference {:.4})", REF_ROC_L1[pi]);
        if p == 0 {
            roc_p0 = slope;
        }
        if p == 3 {
            roc_p3 = slope;
        }
    }
    let roc_ok = (roc_p0 - 0.6456).abs() <= 0.03 && (roc_p3 - 0.6452).abs() <= 0.03;
    pass &= roc_ok;

    let detail = format!(
        "worst table deviation {:.1}% at {}; RoC p0 {roc_p0:.4}, p3 {roc_p3:.4}",
        100.0 * worst.0,
        worst.1
    );
    assert!(verdict(1, pass, &detail), "{detail}");
}

#[test]
fn a02_sod_linf_plateau() {
    let sweep = sod_sweep();
    let mut pass = true;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (pi, &p) in SWEEP_ORDERS.iter().enumerate() {
        let linfs: Vec<f64> = sweep[pi].iter().map(|r| r.linf).collect();
        for (&dof, &v) in SWEEP_DOFS.iter().zip(&linfs) {
            let ok = (0.080..=0.105).contains(&v);
            pass &= ok;
            if !ok {
                println!("  p{p} dof {dof}: Linf {v:.4e} outside [0.080, 0.105]");
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
        // No systematic decrease under refinement: the log-log trend over a
        // 16x refinement must not look like a convergence rate. (With the
        // axes below, a positive slope is decay under refinement.)
        let hs: Vec<f64> = SWEEP_DOFS.iter().map(|&d| (1.0 / d as f64).ln()).collect();
        let es: Vec<f64> = linfs.iter().map(|v| v.ln()).collect();
        let slope = least_squares_slope(&hs, &es).unwrap();
        println!("  p{p}: Linf log-log slope {slope:+.4}");
        pass &= slope <= 0.05;
    }
    let detail = format!("all Linf in [{lo:.4}, {hi:.4}], target band [0.080, 0.105]");
    assert!(verdict(2, pass, &detail), "{detail}");
}

// ---------------------------------------------------------------------------
// Criterion 3: vortex convergence and matched-DoF comparison
// ---------------------------------------------------------------------------

fn vortex_error(policy: SchemePolicy, order: usize, elements_per_side: usize) -> ErrorReport {
    let mut cfg = CaseConfig::new(CaseId::Vortex);
    cfg.order = order;
    cfg.resolution = elements_per_side;
    cfg.policy = policy;
    run_case(&cfg)
        .unwrap_or_else(|e| panic!("vortex p{order}/{elements_per_side} failed: {e}"))
        .report
        .expect("one period has a reference")
}

#[test]
fn a03_vortex_convergence() {
    let mut pass = true;

    // Slopes for p = 1, 2, 3 over four refinements each (CFL 0.1 default),
    // L2 density error after one full period.
    let mesh_sets: [(usize, [usize; 4]); 3] =
        [(1, [8, 12, 16, 24]), (2, [6, 8, 12, 16]), (3, [4, 6, 8, 12])];
    let mut slopes = Vec::new();
    for (p, meshes) in mesh_sets {
        let mut hs = Vec::new();
        let mut es = Vec::new();
        for m in meshes {
            eprintln!("  [vortex] p={p} mesh {m}x{m}");
            let rep = vortex_error(SchemePolicy::ForceRd, p, m);
            hs.push((1.0 / (m * (p + 1)) as f64).ln());
            es.push(rep.l2.ln());
            println!("  p{p} {m:>2}x{m:<2}: L1 {:.4e}  L2 {:.4e}", rep.l1, rep.l2);
        }
        let slope = least_squares_slope(&hs, &es).unwrap();
        println!("  p{p} L2 slope: {slope:.3}");
        pass &= (0.9..=1.4).contains(&slope);
        slopes.push(slope);
    }

    // First-order baseline at matched degrees of freedom for p1.
    let mut reductions = Vec::new();
    for m in [8usize, 12, 16, 24] {
        eprintln!("  [vortex] matched p0 {}x{}", 2 * m, 2 * m);
        let e1 = vortex_error(SchemePolicy::ForceRd, 1, m).l2;
        let e0 = vortex_error(SchemePolicy::ForceRd, 0, 2 * m).l2;
        let red = 1.0 - e1 / e0;
        println!(
            "  matched h: p1 {m}x{m} L2 {e1:.4e} vs p0 {}x{} L2 {e0:.4e} -> reduction {:.1}%",
            2 * m,
            2 * m,
            100.0 * red
        );
        pass &= e1 < e0 && (0.15..=0.40).contains(&red);
        reductions.push(red);
    }

    // Control: the high-order scheme on the identical mesh/reference/norm
    // infrastructure. Rapid convergence here isolates any failure above to
    // the low-order scheme itself rather than to the harness.
    let c12 = vortex_error(SchemePolicy::ForceFr, 3, 12);
    let c16 = vortex_error(SchemePolicy::ForceFr, 3, 16);
    let control_rate = (c12.l2 / c16.l2).ln() / (16.0f64 / 12.0).ln();
    println!(
        "  control, high-order p3: L2 {:.3e} (12x12) -> {:.3e} (16x16), observed order {control_rate:.1}",
        c12.l2, c16.l2
    );

    let detail = format!(
        "L2 slopes p1/p2/p3 = {:.2}/{:.2}/{:.2} (band [0.9,1.4]); p1-vs-p0 reductions {:.1}%..{:.1}% (band [15%,40%]); control high-order p3 converges at order {control_rate:.1} on the same harness",
        slopes[0],
        slopes[1],
        slopes[2],
        100.0 * reductions.iter().cloned().fold(f64::INFINITY, f64::min),
        100.0 * reductions.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    assert!(verdict(3, pass, &detail), "{detail}");
}

// ---------------------------------------------------------------------------
// Criterion 4: discrete conservation on a periodic shock tube
// ---------------------------------------------------------------------------

/// Periodic square wave with Sod-like states and a uniform drift velocity,
/// so all three conserved totals are nonzero.
fn periodic_tube(order: usize) -> (Mesh, SolutionField, CaseConfig) {
    let mut cfg = CaseConfig::new(CaseId::Custom);
    cfg.order = order;
    cfg.resolution = 96;
    cfg.policy = SchemePolicy::ForceRd;
    cfg.custom = Some(CustomCase {
        domain: [0.0, 1.0],
        segments: vec![
            (0.25, Prim::new_1d(1.0, 0.75, 1.0)),
            (0.75, Prim::new_1d(0.125, 0.75, 0.1)),
            (1.0, Prim::new_1d(1.0, 0.75, 1.0)),
        ],
        periodic: true,
    });
    let (mesh, field) = init_case(&cfg).unwrap();
    (mesh, field, cfg)
}

fn totals(mesh: &Mesh, ops: &ElementOperators, f: &SolutionField) -> [f64; 3] {
    let q = integrate_field(mesh, ops, f);
    [q.rho, q.mom[0], q.energy]
}

#[test]
fn a04_periodic_conservation() {
    let gas = case_gas();
    let mut pass = true;
    let mut worst_step: f64 = 0.0;
    let mut worst_total: f64 = 0.0;

    for order in [1usize, 3, 7] {
        let ops = cached(order).unwrap();
        for integrator in ["forward-euler", "ssp-rk3"] {
            let (mesh, mut field, _) = periodic_tube(order);
            let schemes = vec![Scheme::Rd; mesh.n_elements()];
            let mut rhs =
                |f: &SolutionField| global_residual(gas, &mesh, ops, &schemes, f);
            let dt = 0.5 * compute_dt(gas, &field, &mesh, ops, 0.1).unwrap();

            let q0 = totals(&mesh, ops, &field);
            let denom: Vec<f64> = q0.iter().map(|v| v.abs().max(1.0)).collect();
            let mut prev = q0;
            let mut max_step = 0.0f64;
            for _ in 0..1000 {
                field = match integrator {
                    "forward-euler" => forward_euler_step(&field, &mut rhs, dt).unwrap(),
                    _ => ssp_rk3_step(&field, &mut rhs, dt).unwrap(),
                };
                let q = totals(&mesh, ops, &field);
                for c in 0..3 {
                    max_step = max_step.max((q[c] - prev[c]).abs() / denom[c]);
                }
                prev = q;
            }
            let total: f64 = (0..3)
                .map(|c| (prev[c] - q0[c]).abs() / denom[c])
                .fold(0.0, f64::max);
            println!(
                "  p{order} {integrator}: max per-step drift {max_step:.2e}, total over 1000 steps {total:.2e}"
            );
            pass &= max_step <= 1e-12 && total <= 1e-10;
            worst_step = worst_step.max(max_step);
            worst_total = worst_total.max(total);
        }
    }
    let detail = format!(
        "worst per-step drift {worst_step:.2e} (tol 1e-12), worst 1000-step drift {worst_total:.2e} (tol 1e-10)"
    );
    assert!(verdict(4, pass, &detail), "{detail}");
}

// ---------------------------------------------------------------------------
// Criterion 5: summation-by-parts and difference-matrix identities
// ---------------------------------------------------------------------------

#[test]
fn a05_operator_identities() {
    let mut pass = true;
    let mut worst_sbp: f64 = 0.0;
    let mut worst_row: f64 = 0.0;
    for p in 0..=12 {
        let ops = cached(p).unwrap();
        let sbp = sbp_residual(ops);
        worst_sbp = worst_sbp.max(sbp);
        pass &= sbp <= 1e-11;
        for i in 0..=p {
            let row_sum: f64 = (0..p + 2).map(|j| ops.c_matrix[(i, j)]).sum();
            worst_row = worst_row.max(row_sum.abs());
            pass &= row_sum.abs() <= 1e-12;
        }
        println!("  p{p}: sbp residual {sbp:.2e}");
    }
    let detail = format!(
        "max sbp residual {worst_sbp:.2e} (tol 1e-11), max row sum {worst_row:.2e} (tol 1e-12), p <= 12"
    );
    assert!(verdict(5, pass, &detail), "{detail}");
}

// ---------------------------------------------------------------------------
// Criterion 6: invariant domain on the shock cases
// ---------------------------------------------------------------------------

fn admissibility_extremes(gas: Gas, field: &SolutionField) -> (f64, f64) {
    let mut min_rho = f64::INFINITY;
    let mut min_e = f64::INFINITY;
    for &u in &field.data {
        min_rho = min_rho.min(u.rho);
        let kinetic = 0.5 * (u.mom[0] * u.mom[0] + u.mom[1] * u.mom[1]) / u.rho;
        min_e = min_e.min(u.energy - kinetic);
        let _ = gas;
    }
    (min_rho, min_e)
}

#[test]
fn a06_invariant_domain_shock_cases() {
    let gas = case_gas();
    let mut pass = true;
    let mut lines = Vec::new();

    let runs: [(CaseId, usize, usize); 4] = [
        (CaseId::Sod, 3, 512),
        (CaseId::ShuOsher, 3, 1024),
        (CaseId::Ffs, 1, 50),
        (CaseId::Rmi, 1, 25),
    ];
    for (case, order, resolution) in runs {
        let mut cfg = CaseConfig::new(case);
        cfg.order = order;
        cfg.resolution = resolution;
        cfg.guard = Some(true);
        eprintln!("  [invariant-domain] {case} p{order} res {resolution} ...");
        let t0 = std::time::Instant::now();
        match run_case(&cfg) {
            Ok(art) => {
                let halvings: usize = art.run.records.iter().map(|r| r.halvings).sum();
                let admissible = check_admissible_field(gas, &art.run.field).is_ok();
                let (min_rho, min_e) = admissibility_extremes(gas, &art.run.field);
                pass &= admissible && min_rho > 0.0 && min_e > 0.0;
                let msg = format!(
                    "{case}: complete in {} steps ({halvings} halvings, {:.0}s), min rho {min_rho:.3e}, min e {min_e:.3e}",
                    art.run.steps,
                    t0.elapsed().as_secs_f64()
                );
                println!("  {msg}");
                lines.push(format!("{case} ok"));
            }
            Err(e) => {
                println!("  {case}: FAILED to complete: {e}");
                lines.push(format!("{case} FAILED ({e})"));
                pass = false;
            }
        }
    }
    let detail = lines.join("; ");
    assert!(verdict(6, pass, &detail), "{detail}");
}

// ---------------------------------------------------------------------------
// Criterion 7: equivalence oracles for the staggered-grid scheme
// ---------------------------------------------------------------------------

/// Hand-coded first-order Lax-Friedrichs finite-volume update, written out
/// term by term with no calls into the scheme under test.
struct HandFv {
    h: f64,
    gamma: f64,
}

impl HandFv {
    fn flux(&self, rho: f64, m: f64, en: f64) -> [f64; 3] {
        let u = m / rho;
        let p = (self.gamma - 1.0) * (en - 0.5 * m * u);
        [m, m * u + p, (en + p) * u]
    }

    fn wavespeed(&self, rho: f64, m: f64, en: f64) -> f64 {
        let u = m / rho;
        let p = (self.gamma - 1.0) * (en - 0.5 * m * u);
        u.abs() + (self.gamma * p / rho).sqrt()
    }

    fn step(&self, cells: &[[f64; 3]], dt: f64) -> Vec<[f64; 3]> {
        let n = cells.len();
        let mut interface = vec![[0.0; 3]; n]; // flux at the left face of cell i
        for i in 0..n {
            let l = cells[(i + n - 1) % n];
            let r = cells[i];
            let fl = self.flux(l[0], l[1], l[2]);
            let fr = self.flux(r[0], r[1], r[2]);
            let lambda = self
                .wavespeed(l[0], l[1], l[2])
                .max(self.wavespeed(r[0], r[1], r[2]));
            for c in 0..3 {
                interface[i][c] = 0.5 * (fl[c] + fr[c]) - 0.5 * lambda * (r[c] - l[c]);
            }
        }
        (0..n)
            .map(|i| {
                let fl = interface[i];
                let fr = interface[(i + 1) % n];
                let mut out = cells[i];
                for c in 0..3 {
                    out[c] -= dt / self.h * (fr[c] - fl[c]);
                }
                out
            })
            .collect()
    }
}

fn random_admissible(rng: &mut ChaCha8Rng) -> Prim {
    Prim::new_1d(
        rng.gen_range(0.2..2.0),
        rng.gen_range(-0.8..0.8),
        rng.gen_range(0.2..2.0),
    )
}

#[test]
fn a07_scheme_equivalence_oracles() {
    let gas = case_gas();
    let mut pass = true;

    // (a) p = 0 run against the hand-coded finite-volume loop, 100 steps.
    let n = 64;
    let mesh = build_uniform_1d(
        [0.0, 1.0],
        n,
        BoundaryCondition::Periodic,
        BoundaryCondition::Periodic,
    )
    .unwrap();
    let ops = cached(0).unwrap();
    let wave = |x: [f64; 2]| {
        Prim::new_1d(
            1.0 + 0.4 * (2.0 * std::f64::consts::PI * x[0]).sin(),
            0.3 + 0.2 * (2.0 * std::f64::consts::PI * x[0]).cos(),
            1.0 + 0.3 * (4.0 * std::f64::consts::PI * x[0]).sin(),
        )
    };
    let mut field = SolutionField::from_prim_fn(gas, &mesh, ops, wave).unwrap();
    let mut cells: Vec<[f64; 3]> = field
        .data
        .iter()
        .map(|u| [u.rho, u.mom[0], u.energy])
        .collect();
    let hand = HandFv { h: 1.0 / n as f64, gamma: 1.4 };
    let schemes = vec![Scheme::Rd; n];
    let mut rhs = |f: &SolutionField| global_residual(gas, &mesh, ops, &schemes, f);
    let dt = 0.25 * compute_dt(gas, &field, &mesh, ops, 0.1).unwrap();
    for _ in 0..100 {
        field = forward_euler_step(&field, &mut rhs, dt).unwrap();
        cells = hand.step(&cells, dt);
    }
    let mut max_dev: f64 = 0.0;
    for (u, c) in field.data.iter().zip(&cells) {
        max_dev = max_dev.max((u.rho - c[0]).abs());
        max_dev = max_dev.max((u.mom[0] - c[1]).abs());
        max_dev = max_dev.max((u.energy - c[2]).abs());
    }
    println!("  p0 vs hand-coded FV after 100 steps: max deviation {max_dev:.2e}");
    pass &= max_dev <= 1e-12;

    // (b) boundary auxiliary flux against the interface Riemann flux on 10^3
    // random pairs.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let ops1 = cached(1).unwrap();
    let mut max_flux_dev: f64 = 0.0;
    for _ in 0..1000 {
        let ql = random_admissible(&mut rng);
        let qr = random_admissible(&mut rng);
        let ul = gas.prim_to_cons(ql).unwrap();
        let ur = gas.prim_to_cons(qr).unwrap();
        // Element whose first solution point holds u_r, with u_l ghosted on
        // the left: flux point 0 sees the pair (u_l, u_r).
        let interior = [ur, ur];
        let view = RdElementView {
            interior_states: &interior,
            left_ghost: ul,
            right_ghost: ur,
            jacobian: 0.5,
            normal: X1,
        };
        let fbar = line_aux_fluxes(gas, &view, ops1).unwrap();
        let rus = rdsolve::fr::rusanov_flux(gas, ul, ur, X1).unwrap();
        max_flux_dev = max_flux_dev.max((fbar[0] - rus).max_abs());
    }
    println!("  boundary auxiliary flux vs interface Riemann flux: max deviation {max_flux_dev:.2e}");
    pass &= max_flux_dev <= 1e-13;

    // (c) auxiliary flux/state identity c·f̄ = -d·ū + d·u_j + c·f_j on random
    // pairs and coefficients.
    let mut max_identity: f64 = 0.0;
    for _ in 0..1000 {
        let ql = random_admissible(&mut rng);
        let qr = random_admissible(&mut rng);
        let ul = gas.prim_to_cons(ql).unwrap();
        let ur = gas.prim_to_cons(qr).unwrap();
        let c: f64 = {
            let v: f64 = rng.gen_range(-3.0..3.0);
            if v.abs() < 1e-3 { 1.0 } else { v }
        };
        let pair = AuxPair::assemble(gas, ul, ur, c, X1).unwrap();
        let f_l = gas.euler_flux(ul, X1).unwrap();
        max_identity = max_identity.max(pair.identity_residual(ul, f_l));

        // The same identity from the free functions, which is how the guard
        // assembles it.
        let d = d_coefficient(gas, ul, ur, c, X1).unwrap();
        let f_r = gas.euler_flux(ur, X1).unwrap();
        let fb = aux_flux(ul, ur, f_l, f_r, c, d).unwrap();
        let ub = aux_state(ul, ur, f_l, f_r, c, d).unwrap();
        let resid = (fb * c + ub * d - ul * d - f_l * c).max_abs();
        max_identity = max_identity.max(resid);
    }
    println!("  auxiliary flux/state identity residual: max {max_identity:.2e}");
    pass &= max_identity <= 1e-12;

    let detail = format!(
        "p0-vs-FV max dev {max_dev:.2e} (tol 1e-12); boundary flux max dev {max_flux_dev:.2e} (tol 1e-13); identity max {max_identity:.2e} (tol 1e-12)"
    );
    assert!(verdict(7, pass, &detail), "{detail}");
}

// ---------------------------------------------------------------------------
// Criterion 8: exact Riemann solver oracles
// ---------------------------------------------------------------------------

/// Star pressure by plain bisection on an independently written pressure
/// function (shock branch via the jump relation, rarefaction branch via the
/// isentrope), deliberately sharing no code with the library solver.
fn bisection_star(gamma: f64, ql: Prim, qr: Prim) -> (f64, f64) {
    let side = |q: Prim, p: f64| -> f64 {
        if p > q.p {
            let a = 2.0 / ((gamma + 1.0) * q.rho);
            let b = (gamma - 1.0) / (gamma + 1.0) * q.p;
            (p - q.p) * (a / (p + b)).sqrt()
        } else {
            let c = (gamma * q.p / q.rho).sqrt();
            2.0 * c / (gamma - 1.0) * ((p / q.p).powf((gamma - 1.0) / (2.0 * gamma)) - 1.0)
        }
    };
    let f = |p: f64| side(ql, p) + side(qr, p) + (qr.vel[0] - ql.vel[0]);
    let (mut lo, mut hi) = (1e-12, 100.0 * ql.p.max(qr.p));
    assert!(f(lo) < 0.0 && f(hi) > 0.0, "bisection bracket must straddle");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let p_star = 0.5 * (lo + hi);
    let u_star = 0.5 * (ql.vel[0] + qr.vel[0]) + 0.5 * (side(qr, p_star) - side(ql, p_star));
    (p_star, u_star)
}

#[test]
fn a08_exact_riemann_oracles() {
    let gas = case_gas();
    let mut pass = true;

    let ql = Prim::new_1d(1.0, 0.0, 1.0);
    let qr = Prim::new_1d(0.125, 0.0, 0.1);
    let star = solve_star(gas, ql, qr).unwrap();
    let (p_bis, u_bis) = bisection_star(1.4, ql, qr);
    let dp = (star.p_star - p_bis).abs();
    let du = (star.u_star - u_bis).abs();
    println!("  Sod star vs bisection oracle: |dp*| {dp:.2e}, |du*| {du:.2e}");
    pass &= dp <= 1e-10 && du <= 1e-10;

    // Fan-average identity: the integral of the exact solution over a unit
    // interval centred on the initial jump equals the flux-difference form
    // 0.5(U_l + U_r) - t (F(U_r) - F(U_l)) while the fan stays inside.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut max_fan_dev: f64 = 0.0;
    for _ in 0..100 {
        let ql = random_admissible(&mut rng);
        let qr = random_admissible(&mut rng);
        let star = solve_star(gas, ql, qr).unwrap();
        let speeds = wave_speeds(gas, ql, qr, &star);
        let ceiling = speeds.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        let t = 0.4 / ceiling.max(1e-12);

        let ul = gas.prim_to_cons(ql).unwrap();
        let ur = gas.prim_to_cons(qr).unwrap();
        let fl = gas.euler_flux(ul, X1).unwrap();
        let fr = gas.euler_flux(ur, X1).unwrap();
        let formula = (ul + ur) * 0.5 - (fr - fl) * t;
        let integral = fan_average(gas, ql, qr, t).unwrap();
        max_fan_dev = max_fan_dev.max((integral - formula).max_abs());
    }
    println!("  fan-average identity on 100 random pairs: max deviation {max_fan_dev:.2e}");
    pass &= max_fan_dev <= 1e-6;

    let detail = format!(
        "star solve vs bisection dp {dp:.1e}, du {du:.1e} (tol 1e-10); fan identity max {max_fan_dev:.1e} (tol 1e-6)"
    );
    assert!(verdict(8, pass, &detail), "{detail}");
}

// ---------------------------------------------------------------------------
// Criterion 9: sensor discrimination on the Sod tube at t = 0.1
// ---------------------------------------------------------------------------

#[test]
fn a09_sensor_discrimination() {
    let gas = case_gas();
    let order = 3;
    let dof = 512;

    let mut cfg = CaseConfig::new(CaseId::Sod);
    cfg.order = order;
    cfg.resolution = dof;
    cfg.t_end = Some(0.1);
    let art = run_case(&cfg).unwrap();
    let ops = cached(order).unwrap();
    let sensor_cfg = SensorConfig { epsilon: cfg.epsilon, ..SensorConfig::default() };
    let schemes = select_schemes(&art.run.field, ops, &sensor_cfg, SchemePolicy::Blend).unwrap();

    // Exact feature locations at t = 0.1.
    let (l, r) = rdsolve::cases::sod_states();
    let star = solve_star(gas, l, r).unwrap();
    let speeds = wave_speeds(gas, l, r, &star);
    let x_contact = 0.5 + speeds[2] * 0.1;
    let x_shock = 0.5 + speeds[4] * 0.1;
    let n_el = art.mesh.n_elements();
    let el_of = |x: f64| ((x * n_el as f64) as usize).min(n_el - 1);

    let shock_flagged = schemes[el_of(x_shock)] == Scheme::Rd;
    let contact_flagged = schemes[el_of(x_contact)] == Scheme::Rd;
    let far_field_fr = schemes.iter().enumerate().all(|(k, s)| {
        let x = art.mesh.elements[k].center[0];
        !(x < 0.2 || x > 0.9) || *s == Scheme::Fr
    });
    let fraction = schemes.iter().filter(|s| **s == Scheme::Rd).count() as f64 / n_el as f64;

    println!("  evolved field at t=0.1 (p{order}, {dof} DoF, epsilon {}):", cfg.epsilon);
    println!("    shock element ({:.3}) flagged: {shock_flagged}", x_shock);
    println!("    contact element ({:.3}) flagged: {contact_flagged}", x_contact);
    println!("    far field all high-order: {far_field_fr}; flagged fraction {:.1}%", 100.0 * fraction);

    // Context: the same selection on the exact solution sampled at t = 0.1,
    // where both discontinuities are sharp. Shows the discrimination property
    // of the indicator itself, separate from how the evolved field has
    // smeared the contact.
    let exact_field = SolutionField::from_prim_fn(gas, &art.mesh, ops, |x| {
        sample(gas, l, r, &star, (x[0] - 0.5) / 0.1)
    })
    .unwrap();
    let exact_schemes =
        select_schemes(&exact_field, ops, &sensor_cfg, SchemePolicy::Blend).unwrap();
    let ex_shock = exact_schemes[el_of(x_shock)] == Scheme::Rd;
    let ex_contact = exact_schemes[el_of(x_contact)] == Scheme::Rd;
    let ex_far = exact_schemes.iter().enumerate().all(|(k, s)| {
        let x = art.mesh.elements[k].center[0];
        !(x < 0.2 || x > 0.9) || *s == Scheme::Fr
    });
    let ex_fraction =
        exact_schemes.iter().filter(|s| **s == Scheme::Rd).count() as f64 / n_el as f64;
    println!(
        "  sharp-data control (exact solution projected at t=0.1): shock {ex_shock}, contact {ex_contact}, far field clean {ex_far}, fraction {:.1}%",
        100.0 * ex_fraction
    );

    let pass = shock_flagged && contact_flagged && far_field_fr && fraction < 0.25;
    let detail = format!(
        "shock flagged {shock_flagged}, contact flagged {contact_flagged}, far field clean {far_field_fr}, fraction {:.1}% (<25%); sharp-data control: shock {ex_shock}, contact {ex_contact}",
        100.0 * fraction
    );
    assert!(verdict(9, pass, &detail), "{detail}");
}

// ---------------------------------------------------------------------------
// Criterion 10: qualitative high-resolution cases (documented, not asserted)
// ---------------------------------------------------------------------------

#[test]
fn a10_qualitative_documentation() {
    println!("  Full-resolution wind-tunnel (ffs, 200 cells/unit) and shocked-interface");
    println!("  (rmi, 100 cells/unit) fields are qualitative deliverables: reproduce with");
    println!("    rdsolve run --case ffs --order 1 --dof 200 --out out_ffs");
    println!("    rdsolve run --case rmi --order 1 --dof 100 --out out_rmi");
    println!("  and inspect the VTK output for the triple-point shear layer (ffs) and the");
    println!("  interface mushroom rollup (rmi). The reduced-resolution stability runs are");
    println!("  asserted by acceptance 6.");
    let pass = verdict(
        10,
        true,
        "qualitative criterion: reproduction commands documented, fields not auto-asserted",
    );
    assert!(pass);
}
