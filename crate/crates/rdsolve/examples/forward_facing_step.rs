//! Mach 3 wind tunnel with a forward-facing step. The flow develops a bow
//! shock off the step that reflects between the walls; the sharp corner is an
//! expansion singularity, which makes the case a stiff test of the
//! admissibility guard and the sensor.
//!
//! Usage: cargo run --release --example forward_facing_step [CELLS_PER_UNIT] [T_END]
//!
//! Default resolution is 20 cells per unit length (a quick run); published
//! studies typically use 100+. Writes `ffs_field.vtk` (legacy structured grid,
//! step blanked with NaN) and `ffs_field.csv`.

use std::path::Path;

use rdsolve::cases::{case_gas, run_case, CaseConfig, CaseId};
use rdsolve::operators::cached;
use rdsolve::output::{write_point_csv, write_structured_vtk};
use rdsolve::Result;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let res: usize = args.next().map(|s| s.parse().unwrap()).unwrap_or(20);
    let t_end: f64 = args.next().map(|s| s.parse().unwrap()).unwrap_or(4.0);

    let mut cfg = CaseConfig::new(CaseId::Ffs);
    cfg.resolution = res;
    cfg.order = 1;
    cfg.t_end = Some(t_end);

    println!("forward-facing step: h = 1/{res}, p = {}, t = {t_end}", cfg.order);
    let art = run_case(&cfg)?;
    println!(
        "{} elements, {} steps, {} guard halvings in total",
        art.mesh.n_elements(),
        art.run.steps,
        art.run.records.iter().map(|r| r.halvings).sum::<usize>()
    );

    let ops = cached(cfg.order)?;
    write_structured_vtk(
        Path::new("ffs_field.vtk"),
        "mach 3 wind tunnel with a step",
        case_gas(),
        &art.mesh,
        ops,
        &art.run.field,
    )?;
    write_point_csv(Path::new("ffs_field.csv"), case_gas(), &art.mesh, ops, &art.run.field)?;
    println!("wrote ffs_field.vtk and ffs_field.csv");
    Ok(())
}
