//! Curved thin domains `Omega_eps = { y + r n(y) : eps g0(y) < r < eps g1(y) }`:
//! boundary geometry, Jacobian, fiberwise volume quadrature, boundary
//! quadrature and constant extensions.

use std::sync::Arc;

use rayon::prelude::*;

use crate::closest_point::ClosestPointMap;
use crate::error::{check_finite, Error, Result};
use crate::quadrature::gauss_legendre_on;
use crate::scalar::QuadPoly;
use crate::surface::{Surface, SurfaceFrame, SurfaceQuadrature, SurfaceResolution};
use crate::{Mat3, Vec3};

/// Inner and outer profiles `g0 < g1` over the surface.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfilePair {
    pub name: String,
    pub g0: QuadPoly,
    pub g1: QuadPoly,
}

impl ProfilePair {
    pub fn new(name: impl Into<String>, g0: QuadPoly, g1: QuadPoly) -> Self {
        ProfilePair { name: name.into(), g0, g1 }
    }

    /// `g0 = 0`, `g1 = 1`.
    pub fn shell() -> Self {
        Self::new("shell", QuadPoly::zero(), QuadPoly::constant(1.0))
    }

    /// `g0 = y3^2`, `g1 = y3^2 + 1`.
    pub fn as_example() -> Self {
        let g0 = QuadPoly::zero().plus_quadratic(2, 2, 1.0);
        Self::new("as_example", g0.clone(), g0.plus_constant(1.0))
    }

    /// `g0 = y3`, `g1 = y2 + 2`.
    pub fn nas_example() -> Self {
        Self::new(
            "nas_example",
            QuadPoly::zero().plus_linear(2, 1.0),
            QuadPoly::constant(2.0).plus_linear(1, 1.0),
        )
    }

    pub fn profile(&self, i: usize) -> &QuadPoly {
        if i == 0 {
            &self.g0
        } else {
            &self.g1
        }
    }

    /// `g = g1 - g0`.
    pub fn thickness(&self) -> QuadPoly {
        self.g1.sub(&self.g0)
    }
}

/// Quadrature resolution of a thin domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct DomainResolution {
    pub surface: SurfaceResolution,
    pub radial: usize,
}

impl Default for DomainResolution {
    fn default() -> Self {
        DomainResolution { surface: SurfaceResolution::default(), radial: 8 }
    }
}

impl DomainResolution {
    pub fn new(n1: usize, n2: usize, radial: usize) -> Self {
        DomainResolution { surface: SurfaceResolution { n1, n2 }, radial }
    }
}

/// Boundary geometry of `Gamma_eps^i` over one base point.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryFrame {
    pub i: usize,
    pub base: SurfaceFrame,
    /// `x = y + eps g_i(y) n(y)`.
    pub x: Vec3,
    pub g: f64,
    /// `grad_Gamma g_i(y)`.
    pub grad_g: Vec3,
    /// `tau_eps^i = (I - eps g_i W)^{-1} grad_Gamma g_i`.
    pub tau: Vec3,
    /// Unit outward normal of the domain at `x`.
    pub normal: Vec3,
    /// `J(y, eps g_i) sqrt(1 + eps^2 |tau|^2)`.
    pub area_factor: f64,
}

impl BoundaryFrame {
    pub fn p(&self) -> Mat3 {
        Mat3::identity() - self.normal * self.normal.transpose()
    }

    pub fn q(&self) -> Mat3 {
        self.normal * self.normal.transpose()
    }
}

/// One node of the fiberwise volume rule.
#[derive(Debug, Clone, Copy)]
pub struct VolumeNode {
    pub x: Vec3,
    pub weight: f64,
    /// Index of the base node in the surface quadrature.
    pub base: usize,
    /// Signed normal coordinate `r = d(x)`.
    pub r: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct BoundaryNode {
    pub frame: BoundaryFrame,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct ThinDomain {
    surface: Surface,
    profiles: ProfilePair,
    eps: f64,
    gamma: [f64; 2],
    nu: f64,
    resolution: DomainResolution,
    quad: Arc<SurfaceQuadrature>,
    volume: Arc<Vec<VolumeNode>>,
    boundary: Arc<[Vec<BoundaryNode>; 2]>,
    min_thickness: f64,
}

impl ThinDomain {
    pub fn new(surface: &Surface, profiles: ProfilePair, eps: f64) -> Result<Self> {
        Self::with_resolution(surface, profiles, eps, DomainResolution::default())
    }

    pub fn with_resolution(surface: &Surface, profiles: ProfilePair, eps: f64, res: DomainResolution) -> Result<Self> {
        let quad = Arc::new(surface.quadrature(res.surface));
        Self::with_quadrature(surface, profiles, eps, quad, res.radial)
    }

    /// Reuses an existing surface rule (it must belong to `surface`).
    pub fn with_quadrature(
        surface: &Surface,
        profiles: ProfilePair,
        eps: f64,
        quad: Arc<SurfaceQuadrature>,
        radial: usize,
    ) -> Result<Self> {
        check_finite("eps", eps)?;
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::InvalidDomain(format!("eps = {eps} is not in (0, 1]")));
        }
        if radial == 0 {
            return Err(Error::InvalidDomain("radial node count must be positive".into()));
        }
        let thickness = profiles.thickness();
        let mut min_g = f64::INFINITY;
        let mut max_abs = 0.0f64;
        for node in &quad.nodes {
            let y = node.frame.y;
            min_g = min_g.min(thickness.value(&y));
            max_abs = max_abs.max(profiles.g0.value(&y).abs()).max(profiles.g1.value(&y).abs());
        }
        if !(min_g > 1e-6) {
            return Err(Error::InvalidDomain(format!("g1 - g0 has minimum {min_g} at the nodes; need > 1e-6")));
        }
        if !(eps * max_abs < surface.reach()) {
            return Err(Error::InvalidDomain(format!(
                "eps * max|g_i| = {} is not below the reach {}",
                eps * max_abs,
                surface.reach()
            )));
        }
        let mut dom = ThinDomain {
            surface: surface.clone(),
            profiles,
            eps,
            gamma: [0.0; 2],
            nu: 1.0,
            resolution: DomainResolution { surface: quad.resolution, radial },
            quad,
            volume: Arc::new(Vec::new()),
            boundary: Arc::new([Vec::new(), Vec::new()]),
            min_thickness: min_g,
        };
        dom.volume = Arc::new(dom.build_volume_nodes());
        let b0 = dom.build_boundary_nodes(0)?;
        let b1 = dom.build_boundary_nodes(1)?;
        dom.boundary = Arc::new([b0, b1]);
        Ok(dom)
    }

    /// Sets the friction coefficients on the inner and outer boundaries.
    pub fn with_friction(mut self, gamma0: f64, gamma1: f64) -> Result<Self> {
        if !(gamma0 >= 0.0 && gamma1 >= 0.0) {
            return Err(Error::InvalidDomain("friction coefficients must be nonnegative".into()));
        }
        self.gamma = [gamma0, gamma1];
        Ok(self)
    }

    pub fn with_viscosity(mut self, nu: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidDomain("viscosity must be positive".into()));
        }
        self.nu = nu;
        Ok(self)
    }

    /// Same surface, profiles and resolution at a different thickness.
    pub fn at_eps(&self, eps: f64) -> Result<Self> {
        let d = Self::with_quadrature(&self.surface, self.profiles.clone(), eps, self.quad.clone(), self.resolution.radial)?;
        d.with_friction(self.gamma[0], self.gamma[1])?.with_viscosity(self.nu)
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn profiles(&self) -> &ProfilePair {
        &self.profiles
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn gamma(&self) -> [f64; 2] {
        self.gamma
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn resolution(&self) -> DomainResolution {
        self.resolution
    }

    pub fn surface_quadrature(&self) -> &SurfaceQuadrature {
        &self.quad
    }

    /// Minimum of `g1 - g0` over the surface nodes.
    pub fn min_thickness(&self) -> f64 {
        self.min_thickness
    }

    pub fn volume_nodes(&self) -> &[VolumeNode] {
        &self.volume
    }

    pub fn boundary_nodes(&self, i: usize) -> &[BoundaryNode] {
        &self.boundary[i]
    }

    pub fn closest_point_map(&self) -> ClosestPointMap {
        ClosestPointMap::new(&self.surface)
    }

    /// `J(y, r) = (1 - r kappa_1)(1 - r kappa_2)`.
    pub fn jacobian(&self, frame: &SurfaceFrame, r: f64) -> Result<f64> {
        check_finite("r", r)?;
        if !(r.abs() < self.surface.reach()) {
            return Err(Error::OutOfTube { dist: r, reach: self.surface.reach() });
        }
        Ok(frame.jacobian(r))
    }

    pub fn boundary_frame(&self, i: usize, frame: &SurfaceFrame) -> Result<BoundaryFrame> {
        boundary_frame(frame, self.profiles.profile(i), self.eps, i)
    }

    /// Tangents `d_{s_j} mu_h` of the boundary sheet parametrized over the
    /// chart of `frame`, with `h = eps g_i`.
    pub fn sheet_tangents(&self, i: usize, frame: &SurfaceFrame) -> [Vec3; 2] {
        sheet_tangents(frame, self.profiles.profile(i), self.eps)
    }

    /// Weingarten map and mean curvature of `Gamma_eps^i` at the boundary
    /// point over `frame`, by central differences of the boundary normal in
    /// the chart parameters. Returns `(W_eps, H_eps, symmetry defect)`.
    pub fn boundary_weingarten(&self, i: usize, frame: &SurfaceFrame) -> Result<(Mat3, f64, f64)> {
        let g = self.profiles.profile(i);
        let bf = boundary_frame(frame, g, self.eps, i)?;
        let tangents = sheet_tangents(frame, g, self.eps);
        let h = 1e-5;
        let mut dn = [Vec3::zeros(); 2];
        for (k, dnk) in dn.iter_mut().enumerate() {
            let mut sp = frame.s;
            let mut sm = frame.s;
            sp[k] += h;
            sm[k] -= h;
            let fp = self.surface.frame_at(frame.chart, sp)?;
            let fm = self.surface.frame_at(frame.chart, sm)?;
            let np = boundary_frame(&fp, g, self.eps, i)?.normal;
            let nm = boundary_frame(&fm, g, self.eps, i)?.normal;
            *dnk = (np - nm) / (2.0 * h);
        }
        let metric = nalgebra::Matrix2::new(
            tangents[0].dot(&tangents[0]),
            tangents[0].dot(&tangents[1]),
            tangents[1].dot(&tangents[0]),
            tangents[1].dot(&tangents[1]),
        );
        let inv = metric
            .try_inverse()
            .ok_or(Error::SingularResolvent(metric.determinant()))?;
        let mut grad = Mat3::zeros();
        for k in 0..2 {
            for l in 0..2 {
                grad += inv[(k, l)] * tangents[k] * dn[l].transpose();
            }
        }
        let w_raw = -(bf.p() * grad);
        let defect = 0.5 * (w_raw - w_raw.transpose()).norm();
        let w = 0.5 * (w_raw + w_raw.transpose());
        Ok((w, w.trace(), defect))
    }

    /// `grad_Gamma n_eps^i` at the base point, by central differences of
    /// the boundary normal in the chart parameters.
    pub fn boundary_normal_gradient(&self, i: usize, frame: &SurfaceFrame) -> Result<Mat3> {
        let g = self.profiles.profile(i);
        let h = 1e-5;
        let mut dn = [Vec3::zeros(); 2];
        for (k, dnk) in dn.iter_mut().enumerate() {
            let mut sp = frame.s;
            let mut sm = frame.s;
            sp[k] += h;
            sm[k] -= h;
            let fp = self.surface.frame_at(frame.chart, sp)?;
            let fm = self.surface.frame_at(frame.chart, sm)?;
            let np = boundary_frame(&fp, g, self.eps, i)?.normal;
            let nm = boundary_frame(&fm, g, self.eps, i)?.normal;
            *dnk = (np - nm) / (2.0 * h);
        }
        Ok(frame.tangential_gradient_matrix(dn))
    }

    /// `W_eps^i(x) = -(I - n_eps n_eps) grad(n_eps^i o pi)(x)` at the point
    /// with base `frame` and normal coordinate `d`, using
    /// `grad(f o pi) = (I - d W)^{-1} grad_Gamma f`.
    pub fn extended_weingarten(&self, i: usize, frame: &SurfaceFrame, d: f64) -> Result<Mat3> {
        let n = self.boundary_frame(i, frame)?.normal;
        let res = frame
            .resolvent(d)
            .ok_or(Error::SingularResolvent(frame.jacobian(d)))?;
        let grad = res * self.boundary_normal_gradient(i, frame)?;
        Ok(-((Mat3::identity() - n * n.transpose()) * grad))
    }

    /// `int_{Omega_eps} phi dx` by the fiberwise rule.
    pub fn integrate_volume<F>(&self, phi: F) -> Result<f64>
    where
        F: Fn(&Vec3) -> f64 + Sync,
    {
        let values: Vec<f64> = self.volume.par_iter().map(|n| n.weight * phi(&n.x)).collect();
        sum_finite("volume integrand", &values)
    }

    /// Integrates a function of the full volume node (point, base index,
    /// normal coordinate).
    pub fn integrate_volume_nodes<F>(&self, phi: F) -> Result<f64>
    where
        F: Fn(&VolumeNode) -> f64 + Sync,
    {
        let values: Vec<f64> = self.volume.par_iter().map(|n| n.weight * phi(n)).collect();
        sum_finite("volume integrand", &values)
    }

    /// `int_{Gamma_eps^i} phi dH^2`.
    pub fn integrate_boundary<F>(&self, i: usize, phi: F) -> Result<f64>
    where
        F: Fn(&BoundaryFrame) -> f64 + Sync,
    {
        let values: Vec<f64> = self.boundary[i].par_iter().map(|n| n.weight * phi(&n.frame)).collect();
        sum_finite("boundary integrand", &values)
    }

    fn build_volume_nodes(&self) -> Vec<VolumeNode> {
        let (t, w) = crate::quadrature::gauss_legendre(self.resolution.radial);
        let mut out = Vec::with_capacity(self.quad.len() * t.len());
        for (idx, node) in self.quad.nodes.iter().enumerate() {
            let f = &node.frame;
            let a = self.eps * self.profiles.g0.value(&f.y);
            let b = self.eps * self.profiles.g1.value(&f.y);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (tk, wk) in t.iter().zip(&w) {
                let r = mid + half * tk;
                out.push(VolumeNode {
                    x: f.y + r * f.normal,
                    weight: node.weight * half * wk * f.jacobian(r),
                    base: idx,
                    r,
                });
            }
        }
        out
    }

    fn build_boundary_nodes(&self, i: usize) -> Result<Vec<BoundaryNode>> {
        self.quad
            .nodes
            .iter()
            .map(|node| {
                let frame = self.boundary_frame(i, &node.frame)?;
                Ok(BoundaryNode { weight: node.weight * frame.area_factor, frame })
            })
            .collect()
    }

    /// Gauss-Legendre nodes of one fiber, `(r, weight * J)`.
    pub fn fiber_rule(&self, frame: &SurfaceFrame) -> Vec<(f64, f64)> {
        let a = self.eps * self.profiles.g0.value(&frame.y);
        let b = self.eps * self.profiles.g1.value(&frame.y);
        gauss_legendre_on(self.resolution.radial, a, b)
            .into_iter()
            .map(|(r, w)| (r, w * frame.jacobian(r)))
            .collect()
    }
}

fn sum_finite(label: &str, values: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for v in values {
        check_finite(label, *v)?;
        acc += v;
    }
    Ok(acc)
}

/// Boundary frame of the sheet `r = eps g(y)` with orientation `(-1)^{i+1}`.
pub fn boundary_frame(frame: &SurfaceFrame, g: &QuadPoly, eps: f64, i: usize) -> Result<BoundaryFrame> {
    let gv = g.value(&frame.y);
    let grad_g = frame.p * g.grad(&frame.y);
    let r = eps * gv;
    let res = frame
        .resolvent(r)
        .ok_or_else(|| Error::SingularResolvent((Mat3::identity() - r * frame.weingarten).determinant()))?;
    let tau = res * grad_g;
    let root = (1.0 + eps * eps * tau.norm_squared()).sqrt();
    let sign = if i == 0 { -1.0 } else { 1.0 };
    let normal = sign * (frame.normal - eps * tau) / root;
    Ok(BoundaryFrame {
        i,
        base: *frame,
        x: frame.y + r * frame.normal,
        g: gv,
        grad_g,
        tau,
        normal,
        area_factor: frame.jacobian(r) * root,
    })
}

/// `d_{s_j} mu_h = (I - h W) t_j + (d_{s_j} h) n` for `h = eps g`.
pub fn sheet_tangents(frame: &SurfaceFrame, g: &QuadPoly, eps: f64) -> [Vec3; 2] {
    let r = eps * g.value(&frame.y);
    let dg = g.grad(&frame.y);
    let m = Mat3::identity() - r * frame.weingarten;
    let mk = |t: Vec3| m * t + eps * dg.dot(&t) * frame.normal;
    [mk(frame.tangents[0]), mk(frame.tangents[1])]
}

/// Value and ambient gradient of the constant extension `eta o pi` at `x`,
/// given `eta` and its tangential gradient on the surface:
/// `grad = (I - d W(pi x))^{-1} grad_Gamma eta`.
pub fn constant_extension<F>(cp: &ClosestPointMap, x: &Vec3, eta: F) -> Result<(f64, Vec3)>
where
    F: Fn(&SurfaceFrame) -> (f64, Vec3),
{
    let p = cp.project(x)?;
    let (value, tgrad) = eta(&p.frame);
    let res = p
        .frame
        .resolvent(p.dist)
        .ok_or(Error::SingularResolvent(p.frame.jacobian(p.dist)))?;
    Ok((value, res * tgrad))
}

/// Restriction of a polynomial to the surface: value and tangential gradient.
pub fn restrict(poly: &QuadPoly, frame: &SurfaceFrame) -> (f64, Vec3) {
    (poly.value(&frame.y), frame.p * poly.grad(&frame.y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sphere_domain(profiles: ProfilePair, eps: f64) -> ThinDomain {
        ThinDomain::with_resolution(&Surface::unit_sphere(), profiles, eps, DomainResolution::new(32, 64, 8)).unwrap()
    }

    #[test]
    fn constant_profile_boundary_frames() {
        let dom = sphere_domain(ProfilePair::shell(), 0.1);
        for i in 0..2 {
            for node in dom.boundary_nodes(i).iter().take(50) {
                let b = node.frame;
                assert_eq!(b.tau, Vec3::zeros());
                let sign = if i == 0 { -1.0 } else { 1.0 };
                assert!((b.normal - sign * b.base.normal).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn pole_frame_of_as_example() {
        let dom = sphere_domain(ProfilePair::as_example(), 0.1);
        let pole = dom.surface().frame_at(1, [PI / 2.0, PI / 2.0]).unwrap();
        let b = dom.boundary_frame(0, &pole).unwrap();
        assert!(b.tau.norm() < 1e-14);
        assert!((b.normal + pole.normal).norm() < 1e-14);
    }

    #[test]
    fn tau_matches_direct_solve() {
        let g0 = QuadPoly::zero().plus_linear(2, 1.0);
        let profiles = ProfilePair::new("t", g0.clone(), QuadPoly::constant(2.0));
        let dom = sphere_domain(profiles, 0.1);
        let f = dom.surface().frame_at(0, [PI / 2.0, 0.0]).unwrap();
        let b = dom.boundary_frame(0, &f).unwrap();
        // (I - eps g0 W) tau = grad g0 with W = -P, solved by LU
        let a = Mat3::identity() + 0.1 * g0.value(&f.y) * f.p;
        let rhs = f.p * Vec3::z();
        let oracle = a.lu().solve(&rhs).unwrap();
        assert!((b.tau - oracle).norm() < 1e-10);
    }

    #[test]
    fn boundary_normal_matches_parametric_normal() {
        for surf in [Surface::unit_sphere(), Surface::torus(2.0, 0.5)] {
            let profiles = ProfilePair::new(
                "q",
                QuadPoly::zero().plus_quadratic(0, 1, 0.3),
                QuadPoly::constant(1.0).plus_linear(2, 0.2),
            );
            let dom = ThinDomain::with_resolution(&surf, profiles, 0.1, DomainResolution::new(12, 16, 4)).unwrap();
            for i in 0..2 {
                for node in dom.boundary_nodes(i) {
                    let t = dom.sheet_tangents(i, &node.frame.base);
                    let sign = if i == 0 { -1.0 } else { 1.0 };
                    let np = sign * t[0].cross(&t[1]).normalize();
                    assert!((np - node.frame.normal).norm() < 1e-12);
                    let area = t[0].cross(&t[1]).norm() / node.frame.base.det_metric.sqrt();
                    assert!((area - node.frame.area_factor).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn jacobian_values() {
        let dom = sphere_domain(ProfilePair::shell(), 0.1);
        let f = dom.surface().frame_at(0, [1.0, 1.0]).unwrap();
        assert_eq!(dom.jacobian(&f, 0.0).unwrap(), 1.0);
        assert!((dom.jacobian(&f, 0.1).unwrap() - 1.21).abs() < 1e-14);
        assert!((dom.jacobian(&f, -0.5).unwrap() - 0.25).abs() < 1e-14);
        assert!(matches!(dom.jacobian(&f, 1.0), Err(Error::OutOfTube { .. })));
    }

    #[test]
    fn shell_volume_and_area() {
        let dom = sphere_domain(ProfilePair::shell(), 0.1);
        let vol = dom.integrate_volume(|_| 1.0).unwrap();
        let exact = 4.0 * PI * (1.1f64.powi(3) - 1.0) / 3.0;
        assert!((vol - exact).abs() < 1e-10 * exact);
        assert!((vol - 1.386490).abs() < 1e-6);
        assert_eq!(dom.integrate_volume(|_| 0.0).unwrap(), 0.0);
        let area = dom.integrate_boundary(1, |_| 1.0).unwrap();
        assert!((area - 4.0 * PI * 1.21).abs() < 1e-10);
        assert!(dom.integrate_volume(|_| f64::INFINITY).is_err());
    }

    #[test]
    fn validation_rejects_bad_domains() {
        let s = Surface::unit_sphere();
        assert!(ThinDomain::new(&s, ProfilePair::shell(), 0.0).is_err());
        assert!(ThinDomain::new(&s, ProfilePair::shell(), 1.5).is_err());
        let flipped = ProfilePair::new("f", QuadPoly::constant(1.0), QuadPoly::zero());
        assert!(ThinDomain::new(&s, flipped, 0.1).is_err());
        let thick = ProfilePair::new("t", QuadPoly::zero(), QuadPoly::constant(5.0));
        assert!(ThinDomain::new(&s, thick, 0.5).is_err());
        let d = ThinDomain::new(&s, ProfilePair::shell(), 0.1).unwrap();
        assert!(d.clone().with_friction(-1.0, 0.0).is_err());
        assert!(d.with_viscosity(0.0).is_err());
    }

    #[test]
    fn outer_sphere_weingarten_is_rescaled() {
        let dom = sphere_domain(ProfilePair::shell(), 0.1);
        let f = dom.surface().frame_at(0, [0.9, 2.0]).unwrap();
        let (w, h, defect) = dom.boundary_weingarten(1, &f).unwrap();
        assert!((w + f.p / 1.1).norm() < 1e-8, "{}", (w + f.p / 1.1).norm());
        assert!((h + 2.0 / 1.1).abs() < 1e-8);
        assert!(defect < 1e-7);
        let (w0, _, _) = dom.boundary_weingarten(0, &f).unwrap();
        assert!((w0 - f.p).norm() < 1e-8);
    }

    #[test]
    fn extended_weingarten_agrees_on_the_sheets() {
        let surf = Surface::torus(2.0, 0.5);
        let dom = ThinDomain::with_resolution(&surf, ProfilePair::as_example(), 0.1, DomainResolution::new(6, 6, 2)).unwrap();
        for i in 0..2 {
            for node in dom.boundary_nodes(i) {
                let b = node.frame;
                let (w, _, _) = dom.boundary_weingarten(i, &b.base).unwrap();
                let we = dom.extended_weingarten(i, &b.base, 0.1 * b.g).unwrap();
                assert!((w - we).norm() < 1e-7, "{}", (w - we).norm());
            }
        }
    }

    #[test]
    fn boundary_weingarten_matches_ambient_fd_route() {
        // Oracle: extend n_eps constantly along normals via the closest-point
        // map, differentiate in R^3, project with I - n_eps n_eps.
        let surf = Surface::torus(2.0, 0.5);
        let profiles = ProfilePair::new(
            "q",
            QuadPoly::zero().plus_quadratic(2, 2, 0.5),
            QuadPoly::constant(1.0).plus_linear(0, 0.1),
        );
        let dom = ThinDomain::with_resolution(&surf, profiles, 0.1, DomainResolution::new(8, 8, 4)).unwrap();
        let cp = dom.closest_point_map();
        for i in 0..2 {
            for node in dom.boundary_nodes(i).iter().step_by(7) {
                let b = node.frame;
                let (w, _, _) = dom.boundary_weingarten(i, &b.base).unwrap();
                let ext = |x: &Vec3| {
                    let p = cp.project(x).unwrap();
                    dom.boundary_frame(i, &p.frame).unwrap().normal
                };
                let h = 1e-5 * (1.0 + b.x.norm());
                let mut grad = Mat3::zeros();
                for k in 0..3 {
                    let mut e = Vec3::zeros();
                    e[k] = h;
                    let d = (ext(&(b.x + e)) - ext(&(b.x - e))) / (2.0 * h);
                    grad.set_row(k, &d.transpose());
                }
                let oracle = -(b.p() * grad);
                assert!((w - oracle).norm() < 1e-6, "{}", (w - oracle).norm());
                assert!((w * b.normal).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn constant_extension_examples() {
        let cp = ClosestPointMap::new(&Surface::unit_sphere());
        let one = |_: &SurfaceFrame| (1.0, Vec3::zeros());
        let (v, g) = constant_extension(&cp, &Vec3::new(0.3, 0.2, 0.9), one).unwrap();
        assert_eq!((v, g), (1.0, Vec3::zeros()));
        let y3 = QuadPoly::zero().plus_linear(2, 1.0);
        let (v, g) = constant_extension(&cp, &Vec3::new(0.0, 0.0, 1.1), |f| restrict(&y3, f)).unwrap();
        assert!((v - 1.0).abs() < 1e-15 && g.norm() < 1e-15);
        let y1 = QuadPoly::zero().plus_linear(0, 1.0);
        let x = 1.2 * Vec3::new(0.3f64.cos(), 0.3f64.sin(), 0.0);
        let (_, g) = constant_extension(&cp, &x, |f| restrict(&y1, f)).unwrap();
        let h = 1e-6;
        for k in 0..3 {
            let mut e = Vec3::zeros();
            e[k] = h;
            let fd = ((x + e).normalize().x - (x - e).normalize().x) / (2.0 * h);
            assert!((fd - g[k]).abs() < 1e-6);
        }
        // normal derivative vanishes
        assert!(g.dot(&x.normalize()).abs() < 1e-10);
    }
}
