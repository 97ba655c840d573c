//! Reference-element operators: node sets, differentiation coefficients,
//! boundary interpolation, Legendre modal transforms, and flux-reconstruction
//! correction derivatives.
//!
//! Everything here lives on the reference interval [-1, 1]. Solution values
//! sit at the `p + 1` Gauss-Legendre points; the staggered flux grid adds the
//! two element boundaries plus the midpoints between adjacent solution points,
//! `p + 2` points in total. All operators are dense but tiny, so each order is
//! built once and cached for the life of the process.

use std::ops::{Add, Index, Mul};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest supported polynomial order.
///
/// Lagrange differentiation on the staggered flux grid loses accuracy slowly
/// with order; past this point the 1e-12 operator identities can no longer be
/// guaranteed, so higher orders are rejected outright.
pub const MAX_ORDER: usize = 12;

/// Dense row-major matrix sized for per-element operator work.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

/// Linear combination `sum_k coeffs[k] * values[k]` — the workhorse behind
/// every operator application, over scalars and conserved states alike.
pub(crate) fn weighted_sum<T>(coeffs: &[f64], values: &[T]) -> T
where
    T: Copy + Mul<f64, Output = T> + Add<Output = T>,
{
    debug_assert_eq!(coeffs.len(), values.len());
    let mut acc = values[0] * coeffs[0];
    for k in 1..coeffs.len() {
        acc = acc + values[k] * coeffs[k];
    }
    acc
}

/// Family of flux-reconstruction correction functions.
///
/// Only the Radau pair (the nodal-DG-equivalent choice) is implemented; the
/// enum exists so a different family can be plugged in without touching call
/// sites.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[non_exhaustive]
pub enum CorrectionFamily {
    /// Left/right Radau polynomials: recovers nodal discontinuous Galerkin.
    #[default]
    DgRadau,
}

/// Precomputed operators for one polynomial order on the reference element.
#[derive(Clone, Debug)]
pub struct ElementOperators {
    pub p: usize,
    pub family: CorrectionFamily,
    /// Gauss-Legendre solution points, ascending in [-1, 1].
    pub sol_nodes: Vec<f64>,
    /// Staggered flux points: -1, the p midpoints of adjacent solution
    /// points, +1.
    pub flux_nodes: Vec<f64>,
    /// (p+1) x (p+2) differentiation coefficients: row i holds the derivative
    /// of each flux-point Lagrange basis function at solution point i. Rows
    /// sum to zero.
    pub c_matrix: Matrix,
    /// Gauss quadrature weights at the solution points (the diagonal mass
    /// matrix).
    pub mass_weights: Vec<f64>,
    /// (p+1) x (p+1) nodal differentiation matrix on the solution points.
    pub dmatrix_fr: Matrix,
    /// Derivative of the left correction function at each solution point.
    pub corr_deriv_l: Vec<f64>,
    /// Derivative of the right correction function at each solution point.
    pub corr_deriv_r: Vec<f64>,
    /// Interpolation weights from solution points to x = -1.
    pub interp_l: Vec<f64>,
    /// Interpolation weights from solution points to x = +1.
    pub interp_r: Vec<f64>,
    /// V[i][n] = L_n(sol_nodes[i]); maps modal coefficients to nodal values.
    pub legendre_vandermonde: Matrix,
    /// Exact inverse of the Vandermonde via Gauss orthogonality,
    /// (2n+1)/2 * w_i * L_n(x_i); maps nodal values to modal coefficients.
    pub modal_matrix: Matrix,
}

/// Legendre polynomial L_n(x) by the three-term recurrence.
pub(crate) fn legendre_value(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, x);
    for k in 1..n {
        let next = ((2 * k + 1) as f64 * x * cur - k as f64 * prev) / (k + 1) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// Derivative of L_n(x).
///
/// Interior points use (x^2 - 1) L_n' = n (x L_n - L_{n-1}); at the endpoints
/// that form is 0/0, so the closed form L_n'(±1) = (±1)^{n-1} n(n+1)/2 takes
/// over.
pub(crate) fn legendre_deriv(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if (x.abs() - 1.0).abs() < 1e-14 {
        let mag = (n * (n + 1)) as f64 / 2.0;
        return if x > 0.0 || n % 2 == 1 { mag } else { -mag };
    }
    let ln = legendre_value(n, x);
    let lnm1 = legendre_value(n - 1, x);
    n as f64 * (x * ln - lnm1) / (x * x - 1.0)
}

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
///
/// Newton iteration from the Chebyshev-flavored initial guess
/// cos(pi (i + 3/4) / (n + 1/2)) converges to machine precision in a handful
/// of steps for every order used here; node/weight pairs are then reflected
/// so the symmetry x_i = -x_{n-1-i} holds exactly.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one quadrature node");
    let mut nodes = vec![0.0; n];
    for (i, node) in nodes.iter_mut().enumerate() {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let dx = legendre_value(n, x) / legendre_deriv(n, x);
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        *node = x;
    }
    nodes.sort_by(f64::total_cmp);
    for i in 0..n / 2 {
        let s = 0.5 * (nodes[n - 1 - i] - nodes[i]);
        nodes[i] = -s;
        nodes[n - 1 - i] = s;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let mut weights = vec![0.0; n];
    for i in 0..=(n - 1) / 2 {
        let d = legendre_deriv(n, nodes[i]);
        let w = 2.0 / ((1.0 - nodes[i] * nodes[i]) * d * d);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Folds each row's rounding-level sum defect into its largest entry, so
/// differentiation matrices annihilate constants exactly (uniform flow then
/// produces an exactly zero derivative term instead of amplified rounding).
fn zero_row_sums(m: &mut Matrix) {
    for i in 0..m.rows() {
        let sum: f64 = m.row(i).iter().sum();
        let j_max = (0..m.cols())
            .max_by(|&a, &b| m[(i, a)].abs().total_cmp(&m[(i, b)].abs()))
            .unwrap();
        let v = m[(i, j_max)];
        m.set(i, j_max, v - sum);
    }
}

/// l_j(x) for the Lagrange basis on `nodes`.
fn lagrange_value(nodes: &[f64], j: usize, x: f64) -> f64 {
    let mut v = 1.0;
    for (k, &xk) in nodes.iter().enumerate() {
        if k != j {
            v *= (x - xk) / (nodes[j] - xk);
        }
    }
    v
}

/// l_j'(x) via the product-rule sum. O(n^2) per evaluation, but exact even
/// when x coincides with a basis node, which the faster barycentric form is
/// not.
fn lagrange_deriv(nodes: &[f64], j: usize, x: f64) -> f64 {
    let mut denom = 1.0;
    for (k, &xk) in nodes.iter().enumerate() {
        if k != j {
            denom *= nodes[j] - xk;
        }
    }
    let mut sum = 0.0;
    for m in 0..nodes.len() {
        if m == j {
            continue;
        }
        let mut prod = 1.0;
        for (k, &xk) in nodes.iter().enumerate() {
            if k != j && k != m {
                prod *= x - xk;
            }
        }
        sum += prod;
    }
    sum / denom
}

/// Builds all operators for order `p` with the default correction family.
pub fn build_operators(p: usize) -> Result<ElementOperators> {
    build_operators_with(p, CorrectionFamily::default())
}

/// Builds all operators for order `p` with an explicit correction family.
pub fn build_operators_with(p: usize, family: CorrectionFamily) -> Result<ElementOperators> {
    if p > MAX_ORDER {
        return Err(Error::UnsupportedOrder { p, max: MAX_ORDER });
    }
    let n = p + 1;
    let (sol_nodes, mass_weights) = gauss_legendre(n);

    let mut flux_nodes = Vec::with_capacity(p + 2);
    flux_nodes.push(-1.0);
    for pair in sol_nodes.windows(2) {
        flux_nodes.push(0.5 * (pair[0] + pair[1]));
    }
    flux_nodes.push(1.0);

    let mut c_matrix = Matrix::zeros(n, p + 2);
    for i in 0..n {
        for j in 0..p + 2 {
            c_matrix.set(i, j, lagrange_deriv(&flux_nodes, j, sol_nodes[i]));
        }
    }
    zero_row_sums(&mut c_matrix);

    let mut dmatrix_fr = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            dmatrix_fr.set(i, j, lagrange_deriv(&sol_nodes, j, sol_nodes[i]));
        }
    }
    zero_row_sums(&mut dmatrix_fr);

    let interp_l: Vec<f64> = (0..n).map(|j| lagrange_value(&sol_nodes, j, -1.0)).collect();
    let interp_r: Vec<f64> = (0..n).map(|j| lagrange_value(&sol_nodes, j, 1.0)).collect();

    let (corr_deriv_l, corr_deriv_r) = match family {
        CorrectionFamily::DgRadau => {
            // h_l = (-1)^{p+1}/2 (L_{p+1} - L_p) and h_r = 1/2 (L_{p+1} + L_p):
            // h_l(-1) = h_r(1) = 1 and h_l(1) = h_r(-1) = 0.
            let sign = if (p + 1) % 2 == 0 { 1.0 } else { -1.0 };
            let dl: Vec<f64> = sol_nodes
                .iter()
                .map(|&x| 0.5 * sign * (legendre_deriv(p + 1, x) - legendre_deriv(p, x)))
                .collect();
            let dr: Vec<f64> = sol_nodes
                .iter()
                .map(|&x| 0.5 * (legendre_deriv(p + 1, x) + legendre_deriv(p, x)))
                .collect();
            (dl, dr)
        }
    };

    let mut legendre_vandermonde = Matrix::zeros(n, n);
    let mut modal_matrix = Matrix::zeros(n, n);
    for i in 0..n {
        for m in 0..n {
            let lm = legendre_value(m, sol_nodes[i]);
            legendre_vandermonde.set(i, m, lm);
            // Gauss quadrature integrates L_m L_k exactly for m, k <= p, so
            // this row is the exact inverse, not a numerically solved one.
            modal_matrix.set(m, i, (2 * m + 1) as f64 / 2.0 * mass_weights[i] * lm);
        }
    }

    Ok(ElementOperators {
        p,
        family,
        sol_nodes,
        flux_nodes,
        c_matrix,
        mass_weights,
        dmatrix_fr,
        corr_deriv_l,
        corr_deriv_r,
        interp_l,
        interp_r,
        legendre_vandermonde,
        modal_matrix,
    })
}

static CACHE: [OnceLock<ElementOperators>; MAX_ORDER + 1] =
    [const { OnceLock::new() }; MAX_ORDER + 1];

/// Shared, lazily built operators for order `p`; the usual entry point.
pub fn cached(p: usize) -> Result<&'static ElementOperators> {
    if p > MAX_ORDER {
        return Err(Error::UnsupportedOrder { p, max: MAX_ORDER });
    }
    Ok(CACHE[p].get_or_init(|| build_operators(p).expect("order already validated")))
}

/// Applies the staggered differentiation coefficients to values at the flux
/// points, yielding the flux derivative at each solution point. Exact for
/// polynomials of degree ≤ p+1.
pub fn rd_derivative<T>(ops: &ElementOperators, flux_values: &[T]) -> Result<Vec<T>>
where
    T: Copy + Mul<f64, Output = T> + Add<Output = T>,
{
    if flux_values.len() != ops.p + 2 {
        return Err(Error::DimensionMismatch {
            what: "flux-point values per line",
            expected: ops.p + 2,
            got: flux_values.len(),
        });
    }
    Ok((0..=ops.p)
        .map(|i| weighted_sum(ops.c_matrix.row(i), flux_values))
        .collect())
}

/// Max-norm of MD + DᵀM − PᵀBP for the nodal operators.
///
/// M is the diagonal mass matrix, D the nodal differentiation matrix, P the
/// two boundary-interpolation rows and B = diag(-1, 1). The residual should
/// sit at rounding level for every supported order; it is exposed as an
/// operation so the summation-by-parts structure is checkable from tests and
/// diagnostics.
pub fn sbp_residual(ops: &ElementOperators) -> f64 {
    let n = ops.p + 1;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let md = ops.mass_weights[i] * ops.dmatrix_fr[(i, j)];
            let dtm = ops.dmatrix_fr[(j, i)] * ops.mass_weights[j];
            let pbp = ops.interp_r[i] * ops.interp_r[j] - ops.interp_l[i] * ops.interp_l[j];
            worst = worst.max((md + dtm - pbp).abs());
        }
    }
    worst
}

/// Converts between nodal values and Legendre modal coefficients.
///
/// `inverse = false` maps nodal → modal; `inverse = true` maps modal → nodal.
/// The two directions compose to the identity at rounding level because the
/// modal matrix is the analytically exact inverse of the Vandermonde.
pub fn modal_transform(ops: &ElementOperators, values: &[f64], inverse: bool) -> Result<Vec<f64>> {
    if values.len() != ops.p + 1 {
        return Err(Error::DimensionMismatch {
            what: "coefficients per line in the modal transform",
            expected: ops.p + 1,
            got: values.len(),
        });
    }
    let m = if inverse {
        &ops.legendre_vandermonde
    } else {
        &ops.modal_matrix
    };
    Ok((0..=ops.p).map(|i| weighted_sum(m.row(i), values)).collect())
}
