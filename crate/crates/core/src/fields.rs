//! Ambient vector fields with Jacobians, strain tensors and the explicit
//! field families: rigid displacements, constant extensions of surface
//! fields, the thin-domain counterexample field and the curl correction
//! `G(u)`.
//!
//! Jacobian layout: `(grad u)_{ij} = d_i u_j`, so `(phi . grad) u = (grad u)^T phi`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::closest_point::ClosestPointMap;
use crate::error::{check_finite_vec, Error, Result};
use crate::scalar::QuadPoly;
use crate::surface::{Preset, SurfaceFrame};
use crate::thin_domain::ThinDomain;
use crate::{Mat3, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    FiniteDifference,
}

/// A vector field on a neighborhood of the surface.
pub trait VectorField: Send + Sync {
    fn eval(&self, x: &Vec3) -> Result<Vec3>;
    /// Spatial Jacobian, row `i` holding `d_i u`.
    fn jac(&self, x: &Vec3) -> Result<Mat3>;
    fn provenance(&self) -> Provenance {
        Provenance::Analytic
    }
}

impl<T: VectorField + ?Sized> VectorField for Arc<T> {
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        (**self).eval(x)
    }
    fn jac(&self, x: &Vec3) -> Result<Mat3> {
        (**self).jac(x)
    }
    fn provenance(&self) -> Provenance {
        (**self).provenance()
    }
}

impl<T: VectorField + ?Sized> VectorField for &T {
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        (**self).eval(x)
    }
    fn jac(&self, x: &Vec3) -> Result<Mat3> {
        (**self).jac(x)
    }
    fn provenance(&self) -> Provenance {
        (**self).provenance()
    }
}

/// Default central-difference step at `x`.
pub fn fd_step(x: &Vec3) -> f64 {
    1e-5 * (1.0 + x.norm())
}

/// Central-difference Jacobian of a value-only field.
pub fn fd_jacobian<F>(f: F, x: &Vec3, h: f64) -> Result<Mat3>
where
    F: Fn(&Vec3) -> Result<Vec3>,
{
    let mut out = Mat3::zeros();
    for i in 0..3 {
        let mut e = Vec3::zeros();
        e[i] = h;
        let d = (f(&(x + e))? - f(&(x - e))?) / (2.0 * h);
        out.set_row(i, &d.transpose());
    }
    Ok(out)
}

/// `D(u) = (grad u + grad u^T) / 2`.
pub fn strain_rate<F: VectorField + ?Sized>(field: &F, x: &Vec3) -> Result<Mat3> {
    check_finite_vec("x", x)?;
    let j = field.jac(x)?;
    Ok(0.5 * (j + j.transpose()))
}

pub fn divergence<F: VectorField + ?Sized>(field: &F, x: &Vec3) -> Result<f64> {
    Ok(field.jac(x)?.trace())
}

/// `curl u`, from the Jacobian in the `d_i u_j` layout.
pub fn curl_from_jac(j: &Mat3) -> Vec3 {
    Vec3::new(j[(1, 2)] - j[(2, 1)], j[(2, 0)] - j[(0, 2)], j[(0, 1)] - j[(1, 0)])
}

/// `D_Gamma(v) = P (grad_Gamma v)_S P` from the tangential gradient of `v`.
pub fn surface_strain(frame: &SurfaceFrame, grad_gamma_v: &Mat3) -> Mat3 {
    let s = 0.5 * (grad_gamma_v + grad_gamma_v.transpose());
    frame.p * s * frame.p
}

/// `w(x) = a x x + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidField {
    pub a: Vec3,
    pub b: Vec3,
}

impl RigidField {
    pub fn new(a: Vec3, b: Vec3) -> Self {
        RigidField { a, b }
    }

    pub fn rotation(a: Vec3) -> Self {
        RigidField { a, b: Vec3::zeros() }
    }

    pub fn value(&self, x: &Vec3) -> Vec3 {
        self.a.cross(x) + self.b
    }

    pub fn gradient(&self) -> Mat3 {
        -self.a.cross_matrix()
    }
}

impl VectorField for RigidField {
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        Ok(self.value(x))
    }
    fn jac(&self, _x: &Vec3) -> Result<Mat3> {
        Ok(self.gradient())
    }
}

/// `u(x) = A x + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearField {
    pub a: Mat3,
    pub b: Vec3,
}

impl LinearField {
    pub fn identity() -> Self {
        LinearField { a: Mat3::identity(), b: Vec3::zeros() }
    }
}

impl VectorField for LinearField {
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        Ok(self.a * x + self.b)
    }
    fn jac(&self, _x: &Vec3) -> Result<Mat3> {
        Ok(self.a.transpose())
    }
}

/// Vector polynomial `sum_k c_k x^{alpha_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyVectorField {
    pub terms: Vec<(Vec3, [u32; 3])>,
}

fn powi(x: f64, k: u32) -> f64 {
    x.powi(k as i32)
}

impl PolyVectorField {
    /// Multi-indices of total degree at most `degree`, graded then lexicographic.
    pub fn exponents(degree: u32) -> Vec<[u32; 3]> {
        let mut out = Vec::new();
        for total in 0..=degree {
            for i in (0..=total).rev() {
                for j in (0..=total - i).rev() {
                    out.push([i, j, total - i - j]);
                }
            }
        }
        out
    }

    /// The vector monomials `e_k x^alpha`, `|alpha| <= degree`.
    pub fn monomial_basis(degree: u32) -> Vec<PolyVectorField> {
        let mut out = Vec::new();
        for alpha in Self::exponents(degree) {
            for k in 0..3 {
                let mut c = Vec3::zeros();
                c[k] = 1.0;
                out.push(PolyVectorField { terms: vec![(c, alpha)] });
            }
        }
        out
    }

    /// Coefficients drawn uniformly from `[-1, 1]`.
    pub fn random<R: Rng>(degree: u32, rng: &mut R) -> Self {
        let terms = Self::exponents(degree)
            .into_iter()
            .map(|alpha| {
                let c = Vec3::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
                (c, alpha)
            })
            .collect();
        PolyVectorField { terms }
    }

    pub fn coefficient_norm(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.norm_squared()).sum::<f64>().sqrt()
    }

    pub fn value(&self, x: &Vec3) -> Vec3 {
        self.terms
            .iter()
            .map(|(c, a)| c * (powi(x.x, a[0]) * powi(x.y, a[1]) * powi(x.z, a[2])))
            .sum()
    }

    pub fn gradient(&self, x: &Vec3) -> Mat3 {
        let mut out = Mat3::zeros();
        for (c, a) in &self.terms {
            for i in 0..3 {
                if a[i] == 0 {
                    continue;
                }
                let mut m = a[i] as f64;
                for k in 0..3 {
                    let e = if k == i { a[k] - 1 } else { a[k] };
                    m *= powi(x[k], e);
                }
                for j in 0..3 {
                    out[(i, j)] += m * c[j];
                }
            }
        }
        out
    }
}

impl VectorField for PolyVectorField {
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        Ok(self.value(x))
    }
    fn jac(&self, x: &Vec3) -> Result<Mat3> {
        Ok(self.gradient(x))
    }
}

/// Value-only closure field; its Jacobian is a central difference.
pub struct FnField<F> {
    f: F,
}

impl<F> FnField<F>
where
    F: Fn(&Vec3) -> Result<Vec3> + Send + Sync,
{
    pub fn new(f: F) -> Self {
        FnField { f }
    }
}

impl<F> fmt::Debug for FnField<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FnField")
    }
}

impl<F> VectorField for FnField<F>
where
    F: Fn(&Vec3) -> Result<Vec3> + Send + Sync,
{
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        (self.f)(x)
    }
    fn jac(&self, x: &Vec3) -> Result<Mat3> {
        fd_jacobian(&self.f, x, fd_step(x))
    }
    fn provenance(&self) -> Provenance {
        Provenance::FiniteDifference
    }
}

/// Scalar multiple of a field.
#[derive(Debug, Clone)]
pub struct Scaled<F> {
    pub factor: f64,
    pub field: F,
}

impl<F: VectorField> VectorField for Scaled<F> {
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        Ok(self.factor * self.field.eval(x)?)
    }
    fn jac(&self, x: &Vec3) -> Result<Mat3> {
        Ok(self.factor * self.field.jac(x)?)
    }
    fn provenance(&self) -> Provenance {
        self.field.provenance()
    }
}

/// Constant extension `v o pi` of the tangential restriction of a rigid
/// field to the surface: value `v(pi x)` and gradient
/// `(I - d W)^{-1} P grad v`.
#[derive(Debug, Clone)]
pub struct ExtendedRigidField {
    pub v: RigidField,
    cp: ClosestPointMap,
}

impl ExtendedRigidField {
    pub fn new(cp: &ClosestPointMap, v: RigidField) -> Self {
        ExtendedRigidField { v, cp: cp.clone() }
    }
}

impl VectorField for ExtendedRigidField {
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        let p = self.cp.project(x)?;
        Ok(self.v.value(&p.frame.y))
    }
    fn jac(&self, x: &Vec3) -> Result<Mat3> {
        let p = self.cp.project(x)?;
        let res = p.frame.resolvent(p.dist).ok_or(Error::SingularResolvent(p.frame.jacobian(p.dist)))?;
        Ok(res * p.frame.p * self.v.gradient())
    }
}

/// Checks that `v` restricts to a Killing field of the surface that is
/// orthogonal to `grad_Gamma g`; returns `(tangency residual, strain
/// residual ratio, max |v . grad_Gamma g|)`.
pub fn killing_check(dom: &ThinDomain, v: &RigidField) -> Result<(f64, f64, f64)> {
    let quad = dom.surface_quadrature();
    let g = dom.profiles().thickness();
    let mut tangency = 0.0f64;
    let mut kg = 0.0f64;
    let mut strain = 0.0;
    let mut mass = 0.0;
    for node in &quad.nodes {
        let f = &node.frame;
        let val = v.value(&f.y);
        tangency = tangency.max(val.dot(&f.normal).abs());
        kg = kg.max(val.dot(&(f.p * g.grad(&f.y))).abs());
        let gg = crate::surface::tangential_projection_gradient(f, &val, &v.gradient());
        strain += node.weight * surface_strain(f, &gg).norm_squared();
        mass += node.weight * val.norm_squared();
    }
    let ratio = if mass > 0.0 { (strain / mass).sqrt() } else { 0.0 };
    Ok((tangency, ratio, kg))
}

/// The counterexample field built from `v` in `K_g`:
/// `v^eps(x) = (I - d W) v(pi x) + eps (v . grad_Gamma g0)(pi x) n(pi x)`.
#[derive(Debug, Clone)]
pub struct CounterexampleField {
    pub v: RigidField,
    pub g0: QuadPoly,
    pub eps: f64,
    cp: ClosestPointMap,
    /// Sphere radius when the closed form applies.
    sphere: Option<f64>,
    closed_form: bool,
}

impl CounterexampleField {
    /// Validates `v in K_g` on the domain's surface nodes.
    pub fn new(dom: &ThinDomain, v: RigidField) -> Result<Self> {
        let (tangency, ratio, kg) = killing_check(dom, &v)?;
        let scale = v.a.norm() + v.b.norm();
        if tangency > 1e-8 * scale.max(1e-300) || ratio > 1e-6 {
            return Err(Error::NotKilling(tangency.max(ratio)));
        }
        if kg > 1e-8 * scale.max(1e-300) {
            return Err(Error::NotInKg(kg));
        }
        let sphere = match dom.surface().preset() {
            Preset::Sphere { radius } => Some(*radius),
            _ => None,
        };
        Ok(CounterexampleField {
            v,
            g0: dom.profiles().g0.clone(),
            eps: dom.eps(),
            cp: dom.closest_point_map(),
            sphere,
            closed_form: sphere.is_some(),
        })
    }

    /// Forces the general closest-point evaluator even on the sphere.
    pub fn general(mut self) -> Self {
        self.closed_form = false;
        self
    }

    pub fn uses_closed_form(&self) -> bool {
        self.closed_form
    }

    fn eval_general(&self, x: &Vec3) -> Result<Vec3> {
        let p = self.cp.project(x)?;
        let f = &p.frame;
        let v = self.v.value(&f.y);
        let tg = f.p * self.g0.grad(&f.y);
        Ok(v - p.dist * (f.weingarten * v) + self.eps * v.dot(&tg) * f.normal)
    }

    /// `q(y) = (a x y + b) . grad g0(y)` with its ambient gradient.
    fn q(&self, y: &Vec3) -> (f64, Vec3) {
        let vy = self.v.value(y);
        let gg = self.g0.grad(y);
        (vy.dot(&gg), gg.cross(&self.v.a) + self.g0.hess() * vy)
    }

    fn eval_sphere(&self, radius: f64, x: &Vec3) -> Result<Vec3> {
        let r = x.norm();
        let reach = radius;
        if !((r - radius).abs() < reach) {
            return Err(Error::OutOfTube { dist: r - radius, reach });
        }
        let xh = x / r;
        let (q, _) = self.q(&(radius * xh));
        Ok(self.v.a.cross(x) * 1.0 + self.v.b * (r / radius) + self.eps * q * xh)
    }

    fn jac_sphere(&self, radius: f64, x: &Vec3) -> Result<Mat3> {
        let r = x.norm();
        if !((r - radius).abs() < radius) {
            return Err(Error::OutOfTube { dist: r - radius, reach: radius });
        }
        let xh = x / r;
        let dxh = (Mat3::identity() - xh * xh.transpose()) / r;
        let (q, dq_y) = self.q(&(radius * xh));
        let dq = radius * dxh * dq_y;
        Ok(self.v.gradient() + (xh / radius) * self.v.b.transpose() + self.eps * (dq * xh.transpose() + q * dxh))
    }
}

impl VectorField for CounterexampleField {
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        check_finite_vec("x", x)?;
        match (self.closed_form, self.sphere) {
            (true, Some(r)) => self.eval_sphere(r, x),
            _ => self.eval_general(x),
        }
    }
    fn jac(&self, x: &Vec3) -> Result<Mat3> {
        match (self.closed_form, self.sphere) {
            (true, Some(r)) => self.jac_sphere(r, x),
            _ => fd_jacobian(|z| self.eval_general(z), x, fd_step(x)),
        }
    }
    fn provenance(&self) -> Provenance {
        if self.closed_form {
            Provenance::Analytic
        } else {
            Provenance::FiniteDifference
        }
    }
}

/// Interpolated boundary data at a point: `(n1~, n2~, W~)`.
pub fn tilde_fields(dom: &ThinDomain, cp: &ClosestPointMap, x: &Vec3) -> Result<(Vec3, Vec3, Mat3)> {
    let p = cp.project(x)?;
    let f = &p.frame;
    let eps = dom.eps();
    let g0 = eps * dom.profiles().g0.value(&f.y);
    let g1 = eps * dom.profiles().g1.value(&f.y);
    let a = (p.dist - g0) / (g1 - g0);
    let b = (g1 - p.dist) / (g1 - g0);
    let n0 = dom.boundary_frame(0, f)?.normal;
    let n1 = dom.boundary_frame(1, f)?.normal;
    let w0 = dom.extended_weingarten(0, f, p.dist)?;
    let w1 = dom.extended_weingarten(1, f, p.dist)?;
    let [gam0, gam1] = dom.gamma();
    let nu = dom.nu();
    let nt1 = a * n1 - b * n0;
    let nt2 = (a * gam1 / nu) * n1 + (b * gam0 / nu) * n0;
    let wt = a * w1 - b * w0;
    Ok((nt1, nt2, wt))
}

/// The curl-correction field `G(u) = 2 n1~ x W~ u + n2~ x u`.
pub struct GField<U> {
    dom: ThinDomain,
    cp: ClosestPointMap,
    u: U,
}

impl<U: VectorField> GField<U> {
    pub fn new(dom: &ThinDomain, u: U) -> Self {
        GField { dom: dom.clone(), cp: dom.closest_point_map(), u }
    }
}

impl<U: VectorField> VectorField for GField<U> {
    fn eval(&self, x: &Vec3) -> Result<Vec3> {
        let (n1, n2, w) = tilde_fields(&self.dom, &self.cp, x)?;
        let u = self.u.eval(x)?;
        Ok(2.0 * n1.cross(&(w * u)) + n2.cross(&u))
    }
    fn jac(&self, x: &Vec3) -> Result<Mat3> {
        fd_jacobian(|z| self.eval(z), x, fd_step(x))
    }
    fn provenance(&self) -> Provenance {
        Provenance::FiniteDifference
    }
}

/// `g_field` entry point: the curl correction of `u` on `dom`.
pub fn g_field<U: VectorField>(dom: &ThinDomain, u: U) -> GField<U> {
    GField::new(dom, u)
}
