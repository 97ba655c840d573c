//! Grid-convergence study on the isentropic vortex, comparing a higher-order
//! staggered-grid run against a first-order finite-volume run with the same
//! number of degrees of freedom. The interesting question is not the rate
//! (a first-order flux keeps every order at first-order convergence) but the
//! constant: how much error the higher-order stencil removes at matched cost.
//!
//! Usage: cargo run --release --example vortex_convergence [ORDER]

use rdsolve::cases::{run_case, CaseConfig, CaseId};
use rdsolve::norms::least_squares_slope;
use rdsolve::sensor::SchemePolicy;
use rdsolve::Result;

fn vortex_l1(order: usize, elements_per_side: usize) -> Result<f64> {
    let mut cfg = CaseConfig::new(CaseId::Vortex);
    cfg.order = order;
    cfg.resolution = elements_per_side;
    cfg.policy = SchemePolicy::ForceRd;
    let art = run_case(&cfg)?;
    Ok(art.report.expect("whole periods have a reference").l1)
}

fn main() -> Result<()> {
    let order: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse().unwrap())
        .unwrap_or(1);
    assert!(order >= 1, "compare an order >= 1 against the p0 baseline");

    // Matched degrees of freedom: m elements of p+1 nodes per side vs
    // m*(p+1) first-order cells per side.
    let meshes: &[usize] = match order {
        1 => &[8, 12, 16, 24],
        2 => &[6, 8, 12, 16],
        _ => &[4, 6, 8, 12],
    };

    println!("vortex convergence, p{order} vs p0 at matched DoF");
    println!("{:>10} {:>14} {:>14} {:>12}", "h_mean", "p0 L1", format!("p{order} L1"), "reduction");

    let mut hs = Vec::new();
    let mut high = Vec::new();
    let mut base = Vec::new();
    for &m in meshes {
        let dof_side = m * (order + 1);
        let h_mean = 20.0 / dof_side as f64;
        let e_high = vortex_l1(order, m)?;
        let e_base = vortex_l1(0, dof_side)?;
        println!(
            "{:>10.4} {:>14.6e} {:>14.6e} {:>11.1}%",
            h_mean,
            e_base,
            e_high,
            100.0 * (1.0 - e_high / e_base)
        );
        hs.push(h_mean.ln());
        high.push(e_high.ln());
        base.push(e_base.ln());
    }

    let s_high = least_squares_slope(&hs, &high)?;
    let s_base = least_squares_slope(&hs, &base)?;
    println!("observed L1 convergence rates: p0 {s_base:.3}, p{order} {s_high:.3}");
    Ok(())
}
