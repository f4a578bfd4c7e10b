//! Detection of infinitesimal rigid displacements `w = a x x + b` that are
//! tangential on a surface (optionally also orthogonal to the gradients of
//! given scalar fields), axis extraction, and the eigenstructure check
//! `W w = lambda w`, `a x n = -lambda w`.

use nalgebra::{DMatrix, SMatrix, SVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::RigidField;
use crate::scalar::QuadPoly;
use crate::surface::{SurfaceFrame, SurfaceQuadrature};
use crate::thin_domain::ThinDomain;
use crate::Vec3;

const RANK_TOL: f64 = 1e-8;
const MIN_GAP: f64 = 1e4;
const MIN_SAMPLES: usize = 100;

/// Rotation axis of a rigid field with `a != 0`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Axis {
    pub direction: [f64; 3],
    pub point: [f64; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct RigidBasisReport {
    /// Singular values of the weighted constraint matrix, descending.
    pub singular_values: Vec<f64>,
    pub dimension: usize,
    /// Null-space basis `(a, b)`, orthonormal in `R^6`.
    pub basis: Vec<[f64; 6]>,
    pub axes: Vec<Option<Axis>>,
    /// Smallest retained over largest discarded singular value.
    pub gap: f64,
    /// Set when the gap is below `1e4`; the dimension is then only indicative.
    pub ambiguous: bool,
    pub samples: usize,
}

impl RigidBasisReport {
    pub fn fields(&self) -> Vec<RigidField> {
        self.basis
            .iter()
            .map(|c| RigidField::new(Vec3::new(c[0], c[1], c[2]), Vec3::new(c[3], c[4], c[5])))
            .collect()
    }
}

fn axis_of(a: Vec3, b: Vec3) -> Option<Axis> {
    let na = a.norm();
    if na < 1e-10 {
        return None;
    }
    let dir = a / na;
    let point = a.cross(&b) / (na * na);
    Some(Axis { direction: [dir.x, dir.y, dir.z], point: [point.x, point.y, point.z] })
}

/// Row `[y x v, v]`: `(a x y + b) . v = a . (y x v) + b . v`.
fn row(y: &Vec3, v: &Vec3, scale: f64) -> [f64; 6] {
    let c = y.cross(v);
    [c.x * scale, c.y * scale, c.z * scale, v.x * scale, v.y * scale, v.z * scale]
}

/// Null space of a stacked constraint system, via QR then SVD of the
/// `6 x 6` triangular factor.
pub fn null_space(rows: &[[f64; 6]]) -> Result<RigidBasisReport> {
    if rows.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples { got: rows.len(), need: MIN_SAMPLES });
    }
    let m = DMatrix::from_fn(rows.len(), 6, |i, j| rows[i][j]);
    let r = m.qr().r();
    let r6: SMatrix<f64, 6, 6> = SMatrix::from_fn(|i, j| r[(i, j)]);
    let svd = r6.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].partial_cmp(&svd.singular_values[a]).unwrap());
    let sv: Vec<f64> = order.iter().map(|&k| svd.singular_values[k]).collect();
    let smax = sv[0];
    let thresh = RANK_TOL * smax;
    let dimension = sv.iter().filter(|&&s| s < thresh).count();
    let retained_min = if dimension < 6 { sv[5 - dimension] } else { 0.0 };
    let discarded_max = if dimension > 0 { sv[6 - dimension] } else { 0.0 };
    let gap = retained_min / discarded_max.max(thresh).max(f64::MIN_POSITIVE);
    let mut basis = Vec::new();
    let mut axes = Vec::new();
    for &k in order.iter().skip(6 - dimension) {
        let row: SVector<f64, 6> = v_t.row(k).transpose();
        // deterministic sign: largest component positive
        let big = (0..6).max_by(|&i, &j| row[i].abs().partial_cmp(&row[j].abs()).unwrap()).unwrap();
        let s = if row[big] < 0.0 { -1.0 } else { 1.0 };
        let c: [f64; 6] = std::array::from_fn(|i| s * row[i]);
        axes.push(axis_of(Vec3::new(c[0], c[1], c[2]), Vec3::new(c[3], c[4], c[5])));
        basis.push(c);
    }
    Ok(RigidBasisReport { singular_values: sv, dimension, basis, axes, gap, ambiguous: gap < MIN_GAP, samples: rows.len() })
}

/// Rigid displacements tangential on the surface and orthogonal to
/// `grad_Gamma c_k` for each extra constraint, sampled at quadrature nodes
/// weighted by `sqrt(weight)`.
pub fn fit_rigid_tangential(quad: &SurfaceQuadrature, extra_constraints: &[QuadPoly]) -> Result<RigidBasisReport> {
    let mut rows = Vec::with_capacity(quad.len() * (1 + extra_constraints.len()));
    for node in &quad.nodes {
        let f = &node.frame;
        let s = node.weight.sqrt();
        rows.push(row(&f.y, &f.normal, s));
        for c in extra_constraints {
            rows.push(row(&f.y, &(f.p * c.grad(&f.y)), s));
        }
    }
    null_space(&rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct ThinDomainSymmetryReport {
    /// Detected from both boundary sheets jointly.
    pub boundary: RigidBasisReport,
    /// `R_0 cap R_1` detected on the surface.
    pub surface: RigidBasisReport,
    pub consistent: bool,
}

/// Rigid displacements tangential on both boundary sheets, compared with
/// the rigid displacements in `R_0 cap R_1` on the surface.
pub fn thin_domain_symmetry(dom: &ThinDomain) -> Result<ThinDomainSymmetryReport> {
    let mut rows = Vec::new();
    for i in 0..2 {
        for node in dom.boundary_nodes(i) {
            rows.push(row(&node.frame.x, &node.frame.normal, node.weight.sqrt()));
        }
    }
    let boundary = null_space(&rows)?;
    let p = dom.profiles();
    let surface = fit_rigid_tangential(dom.surface_quadrature(), &[p.g0.clone(), p.g1.clone()])?;
    let consistent = boundary.dimension == surface.dimension;
    Ok(ThinDomainSymmetryReport { boundary, surface, consistent })
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenReport {
    pub samples: usize,
    /// Points with `|w| <= 1e-8` (any `lambda` works there).
    pub degenerate: usize,
    /// Max of `|W w - lambda w| / (|W| |w| + |a|)`.
    pub max_eigen_residual: f64,
    /// Max of `|a x n + lambda w| / (|W| |w| + |a|)`.
    pub max_cross_residual: f64,
    pub lambdas: Vec<f64>,
}

impl EigenReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_eigen_residual < tol && self.max_cross_residual < tol
    }
}

/// Checks `W w = lambda w` and `a x n = -lambda w` at the given frames.
pub fn eigenstructure_check(w: &RigidField, frames: &[SurfaceFrame]) -> Result<EigenReport> {
    let scale = w.a.norm() + w.b.norm();
    let mut rep = EigenReport { samples: 0, degenerate: 0, max_eigen_residual: 0.0, max_cross_residual: 0.0, lambdas: Vec::new() };
    for f in frames {
        let val = w.value(&f.y);
        let tangency = val.dot(&f.normal).abs();
        if tangency > 1e-8 * scale.max(1e-300) * (1.0 + f.y.norm()) {
            return Err(Error::NotInR(tangency));
        }
        rep.samples += 1;
        if val.norm() <= 1e-8 {
            rep.degenerate += 1;
            continue;
        }
        let ww = f.weingarten * val;
        let lambda = val.dot(&ww) / val.norm_squared();
        let denom = f.weingarten.norm() * val.norm() + w.a.norm();
        rep.max_eigen_residual = rep.max_eigen_residual.max((ww - lambda * val).norm() / denom);
        rep.max_cross_residual = rep.max_cross_residual.max((w.a.cross(&f.normal) + lambda * val).norm() / denom);
        rep.lambdas.push(lambda);
    }
    Ok(rep)
}
