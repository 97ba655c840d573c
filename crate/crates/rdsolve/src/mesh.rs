//! Cartesian meshes of axis-aligned elements: 1D partitions, tensor-product
//! quad meshes, and the forward-facing-step cut-out, together with face
//! connectivity and boundary-condition ghost states.

use crate::error::{Error, Result};
use crate::euler::{Cons, Gas, Prim};

/// Physical boundary treatment for one tagged face group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryCondition {
    /// Wraps to the opposite side; resolved through connectivity at build
    /// time, so ghost synthesis never sees it.
    Periodic,
    /// Dirichlet state held outside the boundary (inflow).
    FixedState(Prim),
    /// Adiabatic slip wall: normal velocity reflected, n·v = 0 at the face.
    SlipWall,
    /// Zero-gradient copy of the interior state (outflow).
    Extrapolate,
}

/// What lies on the other side of an element face.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceLink {
    /// Interior face: index of the neighboring element.
    Interior(usize),
    /// Physical boundary: index into [`Mesh::bcs`].
    Boundary(usize),
}

/// Axis-aligned element with its affine reference map
/// x = center + half_width ⊙ x̂.
#[derive(Clone, Copy, Debug)]
pub struct Element {
    pub center: [f64; 2],
    /// Per-direction affine scale dT/dx̂; equals half the element width and
    /// serves as the direction's jacobian.
    pub half_width: [f64; 2],
    /// Face links in the order −x, +x, −y, +y.
    pub faces: [FaceLink; 4],
}

impl Element {
    /// Maps a reference point in [−1,1]^dim to physical coordinates.
    pub fn map(&self, xhat: [f64; 2]) -> [f64; 2] {
        [
            self.center[0] + self.half_width[0] * xhat[0],
            self.center[1] + self.half_width[1] * xhat[1],
        ]
    }
}

/// Index of the face opposite to `face` on the neighboring element.
pub fn opposite_face(face: usize) -> usize {
    face ^ 1
}

/// An immutable collection of conforming axis-aligned elements.
///
/// `bcs` is deliberately public data: boundary tags are identities shared by
/// face groups, and experiments (e.g. free-stream checks on a wind-tunnel
/// mesh) retag them without rebuilding connectivity.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub dim: usize,
    pub elements: Vec<Element>,
    pub bcs: Vec<BoundaryCondition>,
    /// Characteristic element length per direction.
    pub h: [f64; 2],
}

/// Boundary-tag indices used by [`build_ffs_mesh`].
pub const FFS_INLET_BC: usize = 0;
pub const FFS_OUTLET_BC: usize = 1;
pub const FFS_WALL_BC: usize = 2;

impl Mesh {
    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    /// Human-readable one-paragraph description for run metadata.
    pub fn summary(&self) -> String {
        let bc_text: Vec<String> = self
            .bcs
            .iter()
            .map(|bc| match bc {
                BoundaryCondition::Periodic => "periodic".to_string(),
                BoundaryCondition::FixedState(q) => format!(
                    "fixed(rho={}, v=({}, {}), p={})",
                    q.rho, q.vel[0], q.vel[1], q.p
                ),
                BoundaryCondition::SlipWall => "slip-wall".to_string(),
                BoundaryCondition::Extrapolate => "extrapolate".to_string(),
            })
            .collect();
        format!(
            "{}D mesh: {} elements, h = ({:.6}, {:.6}), boundary tags [{}]",
            self.dim,
            self.elements.len(),
            self.h[0],
            self.h[1],
            bc_text.join(", ")
        )
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(Error::DegenerateDomain {
            what: "interval must have positive finite length",
        });
    }
    Ok(())
}

/// Uniform partition of an interval. Periodic boundaries must be requested
/// on both ends and wrap the connectivity; other variants become boundary
/// tags [left, right].
pub fn build_uniform_1d(
    domain: [f64; 2],
    n: usize,
    left: BoundaryCondition,
    right: BoundaryCondition,
) -> Result<Mesh> {
    check_interval(domain[0], domain[1])?;
    if n == 0 {
        return Err(Error::DegenerateDomain {
            what: "1D mesh needs at least one element",
        });
    }
    let periodic = matches!(left, BoundaryCondition::Periodic);
    if periodic != matches!(right, BoundaryCondition::Periodic) {
        return Err(Error::InvalidConfig(
            "periodic pairing requires both ends of the axis".into(),
        ));
    }
    let h = (domain[1] - domain[0]) / n as f64;
    let bcs = vec![left, right];
    let elements = (0..n)
        .map(|i| {
            let minus = if i > 0 {
                FaceLink::Interior(i - 1)
            } else if periodic {
                FaceLink::Interior(n - 1)
            } else {
                FaceLink::Boundary(0)
            };
            let plus = if i + 1 < n {
                FaceLink::Interior(i + 1)
            } else if periodic {
                FaceLink::Interior(0)
            } else {
                FaceLink::Boundary(1)
            };
            Element {
                center: [domain[0] + (i as f64 + 0.5) * h, 0.0],
                half_width: [h / 2.0, 0.5],
                faces: [minus, plus, FaceLink::Boundary(0), FaceLink::Boundary(1)],
            }
        })
        .collect();
    Ok(Mesh {
        dim: 1,
        elements,
        bcs,
        h: [h, 0.0],
    })
}

/// Per-side boundary conditions of a rectangular domain.
#[derive(Clone, Copy, Debug)]
pub struct QuadBcs {
    pub left: BoundaryCondition,
    pub right: BoundaryCondition,
    pub bottom: BoundaryCondition,
    pub top: BoundaryCondition,
}

impl QuadBcs {
    pub fn all(bc: BoundaryCondition) -> Self {
        QuadBcs {
            left: bc,
            right: bc,
            bottom: bc,
            top: bc,
        }
    }
}

/// Uniform tensor-product quad mesh of a rectangle. Element (i, j) has index
/// j·nx + i; boundary tags are [left, right, bottom, top].
pub fn build_uniform_quad(
    xdomain: [f64; 2],
    ydomain: [f64; 2],
    nx: usize,
    ny: usize,
    bcs: QuadBcs,
) -> Result<Mesh> {
    check_interval(xdomain[0], xdomain[1])?;
    check_interval(ydomain[0], ydomain[1])?;
    if nx == 0 || ny == 0 {
        return Err(Error::DegenerateDomain {
            what: "quad mesh needs at least one element per direction",
        });
    }
    let periodic_x = matches!(bcs.left, BoundaryCondition::Periodic);
    if periodic_x != matches!(bcs.right, BoundaryCondition::Periodic) {
        return Err(Error::InvalidConfig(
            "periodic pairing requires both ends of the x axis".into(),
        ));
    }
    let periodic_y = matches!(bcs.bottom, BoundaryCondition::Periodic);
    if periodic_y != matches!(bcs.top, BoundaryCondition::Periodic) {
        return Err(Error::InvalidConfig(
            "periodic pairing requires both ends of the y axis".into(),
        ));
    }

    let hx = (xdomain[1] - xdomain[0]) / nx as f64;
    let hy = (ydomain[1] - ydomain[0]) / ny as f64;
    let idx = |i: usize, j: usize| j * nx + i;
    let mut elements = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let xm = if i > 0 {
                FaceLink::Interior(idx(i - 1, j))
            } else if periodic_x {
                FaceLink::Interior(idx(nx - 1, j))
            } else {
                FaceLink::Boundary(0)
            };
            let xp = if i + 1 < nx {
                FaceLink::Interior(idx(i + 1, j))
            } else if periodic_x {
                FaceLink::Interior(idx(0, j))
            } else {
                FaceLink::Boundary(1)
            };
            let ym = if j > 0 {
                FaceLink::Interior(idx(i, j - 1))
            } else if periodic_y {
                FaceLink::Interior(idx(i, ny - 1))
            } else {
                FaceLink::Boundary(2)
            };
            let yp = if j + 1 < ny {
                FaceLink::Interior(idx(i, j + 1))
            } else if periodic_y {
                FaceLink::Interior(idx(i, 0))
            } else {
                FaceLink::Boundary(3)
            };
            elements.push(Element {
                center: [
                    xdomain[0] + (i as f64 + 0.5) * hx,
                    ydomain[0] + (j as f64 + 0.5) * hy,
                ],
                half_width: [hx / 2.0, hy / 2.0],
                faces: [xm, xp, ym, yp],
            });
        }
    }
    Ok(Mesh {
        dim: 2,
        elements,
        bcs: vec![bcs.left, bcs.right, bcs.bottom, bcs.top],
        h: [hx, hy],
    })
}

/// Wind-tunnel-with-a-step mesh: x ∈ [0,3], y ∈ [0,1], with the block
/// x ≥ 0.6, y ≤ 0.2 removed and a sharp re-entrant corner.
///
/// Boundary tags: inlet (x = 0) holds the Mach-3 inflow state, the outlet
/// (x = 3) extrapolates, and every other boundary face — floor, ceiling, and
/// both step faces — is a slip wall. `h` must divide the 0.2/0.6 step
/// geometry so the cut-out is grid-aligned.
pub fn build_ffs_mesh(h: f64) -> Result<Mesh> {
    if !(h > 0.0) {
        return Err(Error::NonConformingSpacing { h });
    }
    let divides = |len: f64| {
        let ratio = len / h;
        (ratio - ratio.round()).abs() <= 1e-9 * ratio.max(1.0) && ratio.round() >= 1.0
    };
    if !divides(0.6) || !divides(0.2) || !divides(3.0) || !divides(1.0) {
        return Err(Error::NonConformingSpacing { h });
    }
    let nx = (3.0 / h).round() as usize;
    let ny = (1.0 / h).round() as usize;
    let i_step = (0.6 / h).round() as usize;
    let j_step = (0.2 / h).round() as usize;

    let keep = |i: usize, j: usize| i < i_step || j >= j_step;
    // Dense (i, j) -> compact element index for the kept cells.
    let mut index = vec![usize::MAX; nx * ny];
    let mut count = 0;
    for j in 0..ny {
        for i in 0..nx {
            if keep(i, j) {
                index[j * nx + i] = count;
                count += 1;
            }
        }
    }

    let bcs = vec![
        BoundaryCondition::FixedState(Prim::new(1.4, [3.0, 0.0], 1.0)),
        BoundaryCondition::Extrapolate,
        BoundaryCondition::SlipWall,
    ];
    let mut elements = Vec::with_capacity(count);
    for j in 0..ny {
        for i in 0..nx {
            if !keep(i, j) {
                continue;
            }
            let link = |ni: isize, nj: isize, bc: usize| -> FaceLink {
                if ni < 0 || nj < 0 || ni >= nx as isize || nj >= ny as isize {
                    return FaceLink::Boundary(bc);
                }
                let (ni, nj) = (ni as usize, nj as usize);
                if keep(ni, nj) {
                    FaceLink::Interior(index[nj * nx + ni])
                } else {
                    // The missing neighbor is inside the step: a wall face.
                    FaceLink::Boundary(FFS_WALL_BC)
                }
            };
            elements.push(Element {
                center: [(i as f64 + 0.5) * h, (j as f64 + 0.5) * h],
                half_width: [h / 2.0, h / 2.0],
                faces: [
                    link(i as isize - 1, j as isize, FFS_INLET_BC),
                    link(i as isize + 1, j as isize, FFS_OUTLET_BC),
                    link(i as isize, j as isize - 1, FFS_WALL_BC),
                    link(i as isize, j as isize + 1, FFS_WALL_BC),
                ],
            });
        }
    }
    Ok(Mesh {
        dim: 2,
        elements,
        bcs,
        h: [h, h],
    })
}

/// Synthesizes the exterior ghost state for a physical boundary face.
///
/// Periodic faces never reach here (connectivity resolves them); if one does,
/// the ghost falls back to the interior copy, which is the identity the
/// wrapped neighbor would provide on a constant field.
pub fn ghost_state(
    gas: Gas,
    bc: &BoundaryCondition,
    interior: Cons,
    outward_normal: [f64; 2],
) -> Result<Cons> {
    match bc {
        BoundaryCondition::Periodic | BoundaryCondition::Extrapolate => Ok(interior),
        BoundaryCondition::FixedState(q) => gas.prim_to_cons(*q),
        BoundaryCondition::SlipWall => {
            let n = outward_normal;
            let mn = interior.mom[0] * n[0] + interior.mom[1] * n[1];
            Ok(Cons {
                rho: interior.rho,
                mom: [
                    interior.mom[0] - 2.0 * mn * n[0],
                    interior.mom[1] - 2.0 * mn * n[1],
                ],
                energy: interior.energy,
            })
        }
    }
}
