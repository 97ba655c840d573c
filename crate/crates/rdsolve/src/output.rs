//! Plot-ready artifact writers: line CSV for 1D runs, point-table CSV and
//! legacy-ASCII structured-grid files for 2D runs, and flat key-value
//! metadata. Floats are written in roundtrip-exact scientific notation so
//! downstream tooling recovers the bit-exact values.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::euler::Gas;
use crate::mesh::Mesh;
use crate::operators::ElementOperators;
use crate::solver::{node_positions, SolutionField};

/// Scientific notation with enough digits to reparse to the identical f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:e}")
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(path, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Flat `key = value` metadata file, one entry per line.
pub fn write_key_values(path: &Path, entries: &[(String, String)]) -> Result<()> {
    let mut text = String::new();
    for (k, v) in entries {
        let _ = writeln!(text, "{k} = {v}");
    }
    write_text(path, &text)
}

/// 1D solution profile `x,rho,u,p` at the solution points, in grid order.
pub fn write_profile_csv(
    path: &Path,
    gas: Gas,
    mesh: &Mesh,
    ops: &ElementOperators,
    field: &SolutionField,
) -> Result<()> {
    if mesh.dim != 1 {
        return Err(Error::DimensionMismatch {
            what: "line profile output",
            expected: 1,
            got: mesh.dim,
        });
    }
    let mut text = String::from("x,rho,u,p\n");
    for (k, el) in mesh.elements.iter().enumerate() {
        let coords = node_positions(el, ops, 1);
        for (u, x) in field.element(k).iter().zip(&coords) {
            let q = gas.cons_to_prim(*u).map_err(|e| e.at(k, None))?;
            let _ = writeln!(
                text,
                "{},{},{},{}",
                fmt_float(x[0]),
                fmt_float(q.rho),
                fmt_float(q.vel[0]),
                fmt_float(q.p)
            );
        }
    }
    write_text(path, &text)
}

/// 2D point table `x,y,rho,u,v,p`, one row per solution point.
pub fn write_point_csv(
    path: &Path,
    gas: Gas,
    mesh: &Mesh,
    ops: &ElementOperators,
    field: &SolutionField,
) -> Result<()> {
    if mesh.dim != 2 {
        return Err(Error::DimensionMismatch {
            what: "point table output",
            expected: 2,
            got: mesh.dim,
        });
    }
    let mut text = String::from("x,y,rho,u,v,p\n");
    for (k, el) in mesh.elements.iter().enumerate() {
        let coords = node_positions(el, ops, 2);
        for (u, x) in field.element(k).iter().zip(&coords) {
            let q = gas.cons_to_prim(*u).map_err(|e| e.at(k, None))?;
            let _ = writeln!(
                text,
                "{},{},{},{},{},{}",
                fmt_float(x[0]),
                fmt_float(x[1]),
                fmt_float(q.rho),
                fmt_float(q.vel[0]),
                fmt_float(q.vel[1]),
                fmt_float(q.p)
            );
        }
    }
    write_text(path, &text)
}

/// Logically-rectangular view of a 2D mesh: sorted unique element-center
/// coordinates per axis plus the element occupying each lattice cell (`None`
/// inside cut-outs such as the wind-tunnel step).
struct Lattice {
    xs: Vec<f64>,
    ys: Vec<f64>,
    cells: Vec<Option<usize>>,
    half_width: [f64; 2],
}

fn unique_sorted(values: &mut Vec<f64>, tol: f64) {
    values.sort_by(|a, b| a.total_cmp(b));
    values.dedup_by(|a, b| (*a - *b).abs() <= tol);
}

fn lattice_index(axis: &[f64], value: f64, tol: f64) -> Option<usize> {
    let i = axis.partition_point(|&c| c < value - tol);
    (i < axis.len() && (axis[i] - value).abs() <= tol).then_some(i)
}

fn infer_lattice(mesh: &Mesh) -> Result<Lattice> {
    let hw = mesh.elements[0].half_width;
    let tol = [hw[0] * 1e-9, hw[1] * 1e-9];
    let mut xs: Vec<f64> = mesh.elements.iter().map(|e| e.center[0]).collect();
    let mut ys: Vec<f64> = mesh.elements.iter().map(|e| e.center[1]).collect();
    unique_sorted(&mut xs, tol[0]);
    unique_sorted(&mut ys, tol[1]);
    let mut cells = vec![None; xs.len() * ys.len()];
    for (k, el) in mesh.elements.iter().enumerate() {
        let (ix, iy) = lattice_index(&xs, el.center[0], tol[0])
            .zip(lattice_index(&ys, el.center[1], tol[1]))
            .ok_or(Error::DegenerateDomain {
                what: "mesh element centers do not form a rectangular lattice",
            })?;
        if (el.half_width[0] - hw[0]).abs() > tol[0]
            || (el.half_width[1] - hw[1]).abs() > tol[1]
        {
            return Err(Error::DegenerateDomain {
                what: "structured output needs uniform element sizes",
            });
        }
        cells[iy * xs.len() + ix] = Some(k);
    }
    Ok(Lattice {
        xs,
        ys,
        cells,
        half_width: hw,
    })
}

/// 2D field as a legacy-ASCII structured grid over all solution points
/// (x fastest, VTK point order). Lattice cells without an element — the
/// step cut-out — carry NaN point data, the conventional blanking marker.
pub fn write_structured_vtk(
    path: &Path,
    title: &str,
    gas: Gas,
    mesh: &Mesh,
    ops: &ElementOperators,
    field: &SolutionField,
) -> Result<()> {
    if mesh.dim != 2 {
        return Err(Error::DimensionMismatch {
            what: "structured grid output",
            expected: 2,
            got: mesh.dim,
        });
    }
    let lat = infer_lattice(mesh)?;
    let per = ops.p + 1;
    let (npx, npy) = (lat.xs.len() * per, lat.ys.len() * per);

    // rho, u, v, p at global point (gx, gy); NaN in blanked cells.
    let mut values = vec![[f64::NAN; 4]; npx * npy];
    for iy in 0..lat.ys.len() {
        for ix in 0..lat.xs.len() {
            let Some(k) = lat.cells[iy * lat.xs.len() + ix] else {
                continue;
            };
            for (node, &u) in field.element(k).iter().enumerate() {
                // Element-local node (i, j) = (x index, y index).
                let (i, j) = (node / per, node % per);
                let q = gas.cons_to_prim(u).map_err(|e| e.at(k, None))?;
                values[(iy * per + j) * npx + (ix * per + i)] =
                    [q.rho, q.vel[0], q.vel[1], q.p];
            }
        }
    }

    let point_x = |gx: usize| {
        let (ix, i) = (gx / per, gx % per);
        lat.xs[ix] + lat.half_width[0] * ops.sol_nodes[i]
    };
    let point_y = |gy: usize| {
        let (iy, j) = (gy / per, gy % per);
        lat.ys[iy] + lat.half_width[1] * ops.sol_nodes[j]
    };

    let mut text = String::new();
    let _ = writeln!(text, "# vtk DataFile Version 3.0");
    let _ = writeln!(text, "{title}");
    let _ = writeln!(text, "ASCII");
    let _ = writeln!(text, "DATASET STRUCTURED_GRID");
    let _ = writeln!(text, "DIMENSIONS {npx} {npy} 1");
    let _ = writeln!(text, "POINTS {} double", npx * npy);
    for gy in 0..npy {
        for gx in 0..npx {
            let _ = writeln!(
                text,
                "{} {} 0",
                fmt_float(point_x(gx)),
                fmt_float(point_y(gy))
            );
        }
    }
    let _ = writeln!(text, "POINT_DATA {}", npx * npy);
    for (name, idx) in [("rho", 0usize), ("p", 3)] {
        let _ = writeln!(text, "SCALARS {name} double");
        let _ = writeln!(text, "LOOKUP_TABLE default");
        for v in &values {
            let _ = writeln!(text, "{}", fmt_float(v[idx]));
        }
    }
    let _ = writeln!(text, "VECTORS velocity double");
    for v in &values {
        let _ = writeln!(text, "{} {} 0", fmt_float(v[1]), fmt_float(v[2]));
    }
    write_text(path, &text)
}
