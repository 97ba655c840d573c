//! Isentropic vortex advected once around a periodic box — the standard
//! smooth accuracy test. After a whole convective period the exact solution
//! is the initial condition, so the density error is directly measurable.
//!
//! Usage: cargo run --release --example isentropic_vortex [ELEMENTS_PER_SIDE] [ORDER]

use rdsolve::cases::{run_case, CaseConfig, CaseId};
use rdsolve::operators::cached;
use rdsolve::sensor::SchemePolicy;
use rdsolve::solver::integrate_field;
use rdsolve::Result;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse().unwrap()).unwrap_or(8);
    let order: usize = args.next().map(|s| s.parse().unwrap()).unwrap_or(3);

    let mut cfg = CaseConfig::new(CaseId::Vortex);
    cfg.resolution = n;
    cfg.order = order;
    // The solution is smooth everywhere; run the staggered-grid scheme alone
    // to measure its dissipation without the sensor handing elements over.
    cfg.policy = SchemePolicy::ForceRd;

    let period = cfg.vortex.convective_period(20.0);
    println!(
        "isentropic vortex: {n}x{n} elements, p = {order}, one period (t = {period})"
    );

    let (mesh, initial) = rdsolve::cases::init_case(&cfg)?;
    let ops = cached(order)?;
    let before = integrate_field(&mesh, ops, &initial);

    let art = run_case(&cfg)?;
    let after = integrate_field(&art.mesh, ops, &art.run.field);
    let report = art.report.expect("whole periods have a reference");

    println!("density error:  L1 {:.4e}   L2 {:.4e}   Linf {:.4e}", report.l1, report.l2, report.linf);
    println!(
        "conservation drift over {} steps: mass {:.3e}, energy {:.3e}",
        art.run.steps,
        ((after.rho - before.rho) / before.rho).abs(),
        ((after.energy - before.energy) / before.energy).abs(),
    );
    Ok(())
}
