//! The exact Riemann solver on three classic tube problems: Sod, the 123
//! (double rarefaction, near-vacuum) problem, and the left Woodward–Colella
//! blast. Prints the star region and wave structure for each, and writes the
//! sampled Sod solution at t = 0.2 to `riemann_profile.csv`.
//!
//! Usage: cargo run --release --example exact_riemann

use rdsolve::euler::{Gas, Prim};
use rdsolve::output::fmt_float;
use rdsolve::riemann::{riemann_profile, solve_star, wave_speeds};
use rdsolve::Result;

fn describe(gas: Gas, name: &str, ql: Prim, qr: Prim) -> Result<()> {
    let star = solve_star(gas, ql, qr)?;
    let s = wave_speeds(gas, ql, qr, &star);
    let left = if star.left_is_shock(ql) { "shock" } else { "rarefaction" };
    let right = if star.right_is_shock(qr) { "shock" } else { "rarefaction" };
    println!("{name}:");
    println!("  p* = {:.12}   u* = {:.12}", star.p_star, star.u_star);
    println!("  rho*_l = {:.12}   rho*_r = {:.12}", star.rho_star_l, star.rho_star_r);
    println!("  left {left} ({:.4} .. {:.4}), contact {:.4}, right {right} ({:.4} .. {:.4})", s[0], s[1], s[2], s[3], s[4]);
    Ok(())
}

fn main() -> Result<()> {
    let gas = Gas::new(1.4);

    let sod_l = Prim::new_1d(1.0, 0.0, 1.0);
    let sod_r = Prim::new_1d(0.125, 0.0, 0.1);
    describe(gas, "Sod", sod_l, sod_r)?;
    describe(
        gas,
        "123 problem",
        Prim::new_1d(1.0, -2.0, 0.4),
        Prim::new_1d(1.0, 2.0, 0.4),
    )?;
    describe(
        gas,
        "left blast",
        Prim::new_1d(1.0, 0.0, 1000.0),
        Prim::new_1d(1.0, 0.0, 0.01),
    )?;

    let xs: Vec<f64> = (0..1001).map(|i| i as f64 / 1000.0).collect();
    let profile = riemann_profile(gas, sod_l, sod_r, 0.5, 0.2, &xs)?;
    let mut lines = vec!["x,rho,u,p".to_string()];
    for (x, q) in xs.iter().zip(&profile) {
        lines.push(format!(
            "{},{},{},{}",
            fmt_float(*x),
            fmt_float(q.rho),
            fmt_float(q.vel[0]),
            fmt_float(q.p)
        ));
    }
    let path = std::path::Path::new("riemann_profile.csv");
    std::fs::write(path, lines.join("\n") + "\n").map_err(|e| rdsolve::Error::io(path, e))?;
    println!("wrote riemann_profile.csv (Sod at t = 0.2)");
    Ok(())
}
