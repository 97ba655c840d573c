//! Shows the modal smoothness sensor at work on the Sod tube: which elements
//! it hands to the shock-capturing scheme, and how the per-element indicator
//! compares with the order-dependent threshold.
//!
//! Usage: cargo run --release --example sensor_demo [DOF] [ORDER] [EPSILON]

use rdsolve::cases::{run_case, CaseConfig, CaseId};
use rdsolve::operators::cached;
use rdsolve::sensor::{self, Scheme, SensorConfig};
use rdsolve::solver::select_schemes;
use rdsolve::Result;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let dof: usize = args.next().map(|s| s.parse().unwrap()).unwrap_or(512);
    let order: usize = args.next().map(|s| s.parse().unwrap()).unwrap_or(3);
    let epsilon: f64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(0.01);

    let mut cfg = CaseConfig::new(CaseId::Sod);
    cfg.resolution = dof;
    cfg.order = order;
    cfg.epsilon = epsilon;
    cfg.t_end = Some(0.1);

    println!("Sod to t = 0.1 at p = {order}, {dof} DoF, epsilon = {epsilon}");
    let art = run_case(&cfg)?;
    let ops = cached(order)?;

    let sensor_cfg = SensorConfig { epsilon, ..SensorConfig::default() };
    let schemes = select_schemes(&art.run.field, ops, &sensor_cfg, Default::default())?;

    // One character per element across the tube: '#' where the sensor keeps
    // the dissipative scheme, '.' where the high-order scheme runs.
    let map: String = schemes
        .iter()
        .map(|s| if *s == Scheme::Rd { '#' } else { '.' })
        .collect();
    for chunk in map.as_bytes().chunks(64) {
        println!("{}", std::str::from_utf8(chunk).unwrap());
    }

    let flagged = schemes.iter().filter(|s| **s == Scheme::Rd).count();
    println!(
        "{} of {} elements flagged ({:.1}%), threshold S* = {:.3e}",
        flagged,
        schemes.len(),
        100.0 * flagged as f64 / schemes.len() as f64,
        sensor::threshold(order, &sensor_cfg),
    );

    // The most oscillatory elements, wherever they sit relative to the cut.
    let n_el = art.run.field.n_elements();
    let mut ranked: Vec<(usize, f64)> = (0..n_el)
        .map(|k| {
            let dens: Vec<f64> = art.run.field.element(k).iter().map(|u| u.rho).collect();
            Ok((k, sensor::smoothness_indicator(&dens, ops)?))
        })
        .collect::<Result<_>>()?;
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    println!("largest indicators:");
    for &(k, s) in ranked.iter().take(5) {
        println!(
            "  element {k} (center x = {:.3}): S = {s:.3e} -> {}",
            art.mesh.elements[k].center[0],
            schemes[k]
        );
    }
    Ok(())
}
