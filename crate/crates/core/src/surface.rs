//! Closed parametrized surfaces: chart jets, the pointwise frame (metric,
//! normal, Weingarten map, curvatures), tangential calculus and tensor
//! quadrature over charts.
//!
//! Sign convention: `n` is the unit outward normal and `W = -grad_Gamma n`,
//! so the unit sphere has `W = -P`, `kappa_1 = kappa_2 = -1`, `H = -2`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::Matrix2;

use crate::error::{check_finite, Error, Result};
use crate::quadrature::{gauss_legendre_on, periodic_trapezoid};
use crate::{Mat3, Vec3};

/// Position and first/second partial derivatives of a chart at one point.
#[derive(Debug, Clone, Copy)]
pub struct ChartJet {
    pub pos: Vec3,
    pub d: [Vec3; 2],
    pub dd: [[Vec3; 2]; 2],
}

/// Generating curve `t -> (phi(t), psi(t))` of a surface of revolution about
/// the x3-axis. `phi` must vanish at both ends of `[0, length]` and be
/// positive in between.
pub trait Profile: Send + Sync + fmt::Debug {
    /// `[[phi, phi', phi''], [psi, psi', psi'']]` at `t`.
    fn jet(&self, t: f64) -> [[f64; 3]; 2];
    fn length(&self) -> f64;
    fn name(&self) -> String;
}

/// Spheroid profile `phi = a sin t`, `psi = c cos t`.
#[derive(Debug, Clone, Copy)]
pub struct SpheroidProfile {
    pub equatorial: f64,
    pub polar: f64,
}

impl Profile for SpheroidProfile {
    fn jet(&self, t: f64) -> [[f64; 3]; 2] {
        let (s, c) = t.sin_cos();
        let (a, p) = (self.equatorial, self.polar);
        [[a * s, a * c, -a * s], [p * c, -p * s, -p * c]]
    }
    fn length(&self) -> f64 {
        PI
    }
    fn name(&self) -> String {
        format!("spheroid({},{})", self.equatorial, self.polar)
    }
}

/// Peanut profile: radius `1 + bulge cos 2t` in the meridian plane.
#[derive(Debug, Clone, Copy)]
pub struct PeanutProfile {
    pub bulge: f64,
}

impl Profile for PeanutProfile {
    fn jet(&self, t: f64) -> [[f64; 3]; 2] {
        let (s, c) = t.sin_cos();
        let (s2, c2) = (2.0 * t).sin_cos();
        let r = 1.0 + self.bulge * c2;
        let r1 = -2.0 * self.bulge * s2;
        let r2 = -4.0 * self.bulge * c2;
        [
            [r * s, r1 * s + r * c, r2 * s + 2.0 * r1 * c - r * s],
            [r * c, r1 * c - r * s, r2 * c - 2.0 * r1 * s - r * c],
        ]
    }
    fn length(&self) -> f64 {
        PI
    }
    fn name(&self) -> String {
        format!("peanut({})", self.bulge)
    }
}

#[derive(Debug, Clone)]
enum ChartKind {
    /// Spherical coordinates on an ellipsoid; `polar_axis` is 2 (poles on
    /// x3) or 0 (poles on x1, obtained by a cyclic relabeling).
    Ellipsoid { axes: [f64; 3], polar_axis: usize },
    /// `s = (toroidal angle, poloidal angle)`, ordered so that t1 x t2 is outward.
    Torus { major: f64, minor: f64 },
    Revolution { profile: Arc<dyn Profile> },
}

/// One parametrization `mu: U -> R^3` of (part of) the surface.
#[derive(Debug, Clone)]
pub struct Chart {
    kind: ChartKind,
    bounds: [(f64, f64); 2],
    periodic: [bool; 2],
}

impl Chart {
    pub fn bounds(&self) -> [(f64, f64); 2] {
        self.bounds
    }

    pub fn periodic(&self) -> [bool; 2] {
        self.periodic
    }

    pub fn jet(&self, s: [f64; 2]) -> ChartJet {
        match &self.kind {
            ChartKind::Ellipsoid { axes, polar_axis } => ellipsoid_jet(*axes, *polar_axis, s),
            ChartKind::Torus { major, minor } => torus_jet(*major, *minor, s),
            ChartKind::Revolution { profile } => revolution_jet(profile.as_ref(), s),
        }
    }

    pub fn position(&self, s: [f64; 2]) -> Vec3 {
        self.jet(s).pos
    }

    /// Wraps periodic parameters into their fundamental interval.
    pub fn wrap(&self, s: [f64; 2]) -> [f64; 2] {
        let mut out = s;
        for k in 0..2 {
            if self.periodic[k] {
                let (a, b) = self.bounds[k];
                let len = b - a;
                out[k] = a + (s[k] - a).rem_euclid(len);
            }
        }
        out
    }
}

fn ellipsoid_jet(axes: [f64; 3], polar_axis: usize, s: [f64; 2]) -> ChartJet {
    let (st, ct) = s[0].sin_cos();
    let (sp, cp) = s[1].sin_cos();
    // Unit-sphere jets with poles on x3.
    let p = [st * cp, st * sp, ct];
    let pt = [ct * cp, ct * sp, -st];
    let pp = [-st * sp, st * cp, 0.0];
    let ptt = [-st * cp, -st * sp, -ct];
    let ptp = [-ct * sp, ct * cp, 0.0];
    let ppp = [-st * cp, -st * sp, 0.0];
    let map = |v: [f64; 3]| -> Vec3 {
        let w = if polar_axis == 0 { [v[2], v[0], v[1]] } else { v };
        Vec3::new(axes[0] * w[0], axes[1] * w[1], axes[2] * w[2])
    };
    ChartJet {
        pos: map(p),
        d: [map(pt), map(pp)],
        dd: [[map(ptt), map(ptp)], [map(ptp), map(ppp)]],
    }
}

fn torus_jet(major: f64, minor: f64, s: [f64; 2]) -> ChartJet {
    let (sv, cv) = s[0].sin_cos();
    let (su, cu) = s[1].sin_cos();
    let rho = major + minor * cu;
    let pos = Vec3::new(rho * cv, rho * sv, minor * su);
    let dv = Vec3::new(-rho * sv, rho * cv, 0.0);
    let du = Vec3::new(-minor * su * cv, -minor * su * sv, minor * cu);
    let dvv = Vec3::new(-rho * cv, -rho * sv, 0.0);
    let dvu = Vec3::new(minor * su * sv, -minor * su * cv, 0.0);
    let duu = Vec3::new(-minor * cu * cv, -minor * cu * sv, -minor * su);
    ChartJet { pos, d: [dv, du], dd: [[dvv, dvu], [dvu, duu]] }
}

fn revolution_jet(profile: &dyn Profile, s: [f64; 2]) -> ChartJet {
    let [[f, f1, f2], [g, g1, g2]] = profile.jet(s[0]);
    let (sv, cv) = s[1].sin_cos();
    ChartJet {
        pos: Vec3::new(f * cv, f * sv, g),
        d: [Vec3::new(f1 * cv, f1 * sv, g1), Vec3::new(-f * sv, f * cv, 0.0)],
        dd: [
            [Vec3::new(f2 * cv, f2 * sv, g2), Vec3::new(-f1 * sv, f1 * cv, 0.0)],
            [Vec3::new(-f1 * sv, f1 * cv, 0.0), Vec3::new(-f * cv, -f * sv, 0.0)],
        ],
    }
}

/// Named surface presets.
#[derive(Debug, Clone)]
pub enum Preset {
    Sphere { radius: f64 },
    Torus { major: f64, minor: f64 },
    Revolution { profile: Arc<dyn Profile> },
    Ellipsoid { axes: [f64; 3] },
}

impl Preset {
    pub fn tag(&self) -> &'static str {
        match self {
            Preset::Sphere { .. } => "sphere",
            Preset::Torus { .. } => "torus_of_revolution",
            Preset::Revolution { .. } => "revolution_profile",
            Preset::Ellipsoid { .. } => "triaxial_ellipsoid",
        }
    }
}

/// Full pointwise geometric state at a chart point.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceFrame {
    pub chart: usize,
    pub s: [f64; 2],
    pub y: Vec3,
    pub tangents: [Vec3; 2],
    pub normal: Vec3,
    pub metric: Matrix2<f64>,
    pub metric_inv: Matrix2<f64>,
    pub det_metric: f64,
    pub second_form: Matrix2<f64>,
    pub weingarten: Mat3,
    pub kappa: [f64; 2],
    pub mean_curvature: f64,
    pub p: Mat3,
    pub q: Mat3,
    /// `|W - W^T| / 2` before symmetrization.
    pub symmetry_defect: f64,
}

impl SurfaceFrame {
    /// Orthonormal tangent pair `(tau_1, tau_2)` with `tau_1 x tau_2 = n`.
    pub fn local_frame(&self) -> (Vec3, Vec3) {
        let t1 = self.tangents[0].normalize();
        let t2 = self.normal.cross(&t1);
        (t1, t2)
    }

    /// `grad_Gamma eta = sum theta^{ij} d_i eta_flat d_j mu` from the chart
    /// partials of `eta_flat = eta o mu`.
    pub fn tangential_gradient(&self, dflat: [f64; 2]) -> Vec3 {
        let mut out = Vec3::zeros();
        for i in 0..2 {
            for j in 0..2 {
                out += self.metric_inv[(i, j)] * dflat[i] * self.tangents[j];
            }
        }
        out
    }

    /// Tangential gradient matrix `(grad_Gamma f)_{ab} = D_a f_b` of a
    /// vector quantity from its chart partials.
    pub fn tangential_gradient_matrix(&self, dflat: [Vec3; 2]) -> Mat3 {
        let mut out = Mat3::zeros();
        for k in 0..2 {
            for l in 0..2 {
                out += self.metric_inv[(k, l)] * self.tangents[k] * dflat[l].transpose();
            }
        }
        out
    }

    /// `(I - r W)^{-1}`; `None` when singular.
    pub fn resolvent(&self, r: f64) -> Option<Mat3> {
        (Mat3::identity() - r * self.weingarten).try_inverse()
    }

    /// `J(y, r) = (1 - r kappa_1)(1 - r kappa_2)`.
    pub fn jacobian(&self, r: f64) -> f64 {
        (1.0 - r * self.kappa[0]) * (1.0 - r * self.kappa[1])
    }
}

/// Sampling resolution of the tensor surface rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct SurfaceResolution {
    pub n1: usize,
    pub n2: usize,
}

impl Default for SurfaceResolution {
    fn default() -> Self {
        SurfaceResolution { n1: 64, n2: 128 }
    }
}

/// One node of the surface rule. `weight` already includes `sqrt(det theta)`.
#[derive(Debug, Clone, Copy)]
pub struct SurfaceNode {
    pub param_weight: f64,
    pub weight: f64,
    pub frame: SurfaceFrame,
}

#[derive(Debug, Clone)]
pub struct SurfaceQuadrature {
    pub nodes: Vec<SurfaceNode>,
    pub resolution: SurfaceResolution,
}

impl SurfaceQuadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `int_Gamma f dH^2`.
    pub fn integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&SurfaceFrame) -> f64,
    {
        let mut acc = 0.0;
        for node in &self.nodes {
            let v = f(&node.frame);
            check_finite("surface integrand", v)?;
            acc += node.weight * v;
        }
        Ok(acc)
    }
}

/// A closed surface covered by one or more charts. Chart 0 covers the
/// surface up to a null set and carries the quadrature; further charts are
/// only used to evaluate frames near the coordinate singularities of chart 0.
#[derive(Debug, Clone)]
pub struct Surface {
    preset: Preset,
    charts: Vec<Chart>,
    reach: f64,
    max_curvature: f64,
}

impl Surface {
    pub fn unit_sphere() -> Self {
        Self::sphere(1.0)
    }

    /// Sphere of the given radius. Its reach is set to the exact value
    /// (the radius) rather than the default conservative estimate.
    pub fn sphere(radius: f64) -> Self {
        let axes = [radius; 3];
        let charts = vec![ellipsoid_chart(axes, 2), ellipsoid_chart(axes, 0)];
        let mut s = Self::build(Preset::Sphere { radius }, charts, None);
        s.reach = radius;
        s
    }

    pub fn ellipsoid(a: f64, b: f64, c: f64) -> Self {
        let axes = [a, b, c];
        let charts = vec![ellipsoid_chart(axes, 2), ellipsoid_chart(axes, 0)];
        Self::build(Preset::Ellipsoid { axes }, charts, None)
    }

    pub fn torus(major: f64, minor: f64) -> Self {
        assert!(major > minor && minor > 0.0, "torus needs major > minor > 0");
        let chart = Chart {
            kind: ChartKind::Torus { major, minor },
            bounds: [(0.0, 2.0 * PI), (0.0, 2.0 * PI)],
            periodic: [true, true],
        };
        Self::build(Preset::Torus { major, minor }, vec![chart], None)
    }

    pub fn revolution(profile: Arc<dyn Profile>) -> Self {
        let chart = Chart {
            kind: ChartKind::Revolution { profile: profile.clone() },
            bounds: [(0.0, profile.length()), (0.0, 2.0 * PI)],
            periodic: [false, true],
        };
        Self::build(Preset::Revolution { profile }, vec![chart], None)
    }

    /// Overrides the reach estimate.
    pub fn with_reach(mut self, reach: f64) -> Self {
        assert!(reach > 0.0);
        self.reach = reach;
        self
    }

    fn build(preset: Preset, charts: Vec<Chart>, reach: Option<f64>) -> Self {
        let mut s = Surface { preset, charts, reach: 1.0, max_curvature: 0.0 };
        let probe = s.quadrature(SurfaceResolution { n1: 48, n2: 96 });
        let kmax = probe
            .nodes
            .iter()
            .map(|n| n.frame.kappa[0].abs().max(n.frame.kappa[1].abs()))
            .fold(0.0, f64::max);
        s.max_curvature = kmax;
        s.reach = reach.unwrap_or(0.5 / kmax);
        s
    }

    pub fn preset(&self) -> &Preset {
        &self.preset
    }

    pub fn tag(&self) -> &'static str {
        self.preset.tag()
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    /// Lower bound on the tubular-neighborhood radius.
    pub fn reach(&self) -> f64 {
        self.reach
    }

    /// Largest principal curvature magnitude seen on the probe grid.
    pub fn max_curvature(&self) -> f64 {
        self.max_curvature
    }

    pub fn frame_at(&self, chart_id: usize, s: [f64; 2]) -> Result<SurfaceFrame> {
        check_finite("s[0]", s[0])?;
        check_finite("s[1]", s[1])?;
        let chart = &self.charts[chart_id];
        frame_from_jet(chart_id, s, &chart.jet(s))
    }

    /// Tensor rule on chart 0: Gauss-Legendre in non-periodic parameters,
    /// trapezoidal in periodic ones.
    pub fn quadrature(&self, res: SurfaceResolution) -> SurfaceQuadrature {
        let chart = &self.charts[0];
        let counts = [res.n1, res.n2];
        let rules: Vec<Vec<(f64, f64)>> = (0..2)
            .map(|k| {
                let (a, b) = chart.bounds[k];
                if chart.periodic[k] {
                    periodic_trapezoid(counts[k], a, b)
                } else {
                    gauss_legendre_on(counts[k], a, b)
                }
            })
            .collect();
        let mut nodes = Vec::with_capacity(res.n1 * res.n2);
        for &(s0, w0) in &rules[0] {
            for &(s1, w1) in &rules[1] {
                let frame = self
                    .frame_at(0, [s0, s1])
                    .expect("quadrature nodes avoid chart singularities");
                let pw = w0 * w1;
                nodes.push(SurfaceNode { param_weight: pw, weight: pw * frame.det_metric.sqrt(), frame });
            }
        }
        SurfaceQuadrature { nodes, resolution: res }
    }

    pub fn integrate_surface<F>(&self, quad: &SurfaceQuadrature, f: F) -> Result<f64>
    where
        F: Fn(&SurfaceFrame) -> f64,
    {
        quad.integrate(f)
    }
}

fn ellipsoid_chart(axes: [f64; 3], polar_axis: usize) -> Chart {
    Chart {
        kind: ChartKind::Ellipsoid { axes, polar_axis },
        bounds: [(0.0, PI), (0.0, 2.0 * PI)],
        periodic: [false, true],
    }
}

/// Builds the frame from a chart jet. The Weingarten map is assembled in
/// the moving frame `{t1, t2, n}` from `W t_j = -d_j(n o mu)`, `W n = 0`.
pub fn frame_from_jet(chart: usize, s: [f64; 2], jet: &ChartJet) -> Result<SurfaceFrame> {
    let [t1, t2] = jet.d;
    let metric = Matrix2::new(t1.dot(&t1), t1.dot(&t2), t2.dot(&t1), t2.dot(&t2));
    let det = metric.determinant();
    if !(det > 1e-12) {
        return Err(Error::DegenerateChart { s0: s[0], s1: s[1], det });
    }
    let cross = t1.cross(&t2);
    let norm = cross.norm();
    let n = cross / norm;
    let p = Mat3::identity() - n * n.transpose();
    let mut dn = [Vec3::zeros(); 2];
    for (j, dnj) in dn.iter_mut().enumerate() {
        let dcross = jet.dd[0][j].cross(&t2) + t1.cross(&jet.dd[1][j]);
        *dnj = p * dcross / norm;
    }
    let frame_mat = Mat3::from_columns(&[t1, t2, n]);
    let rhs = Mat3::from_columns(&[-dn[0], -dn[1], Vec3::zeros()]);
    let inv = frame_mat
        .try_inverse()
        .ok_or(Error::DegenerateChart { s0: s[0], s1: s[1], det })?;
    let w_raw = rhs * inv;
    let symmetry_defect = 0.5 * (w_raw - w_raw.transpose()).norm();
    let w = 0.5 * (w_raw + w_raw.transpose());

    let second_form = Matrix2::new(
        jet.dd[0][0].dot(&n),
        jet.dd[0][1].dot(&n),
        jet.dd[1][0].dot(&n),
        jet.dd[1][1].dot(&n),
    );
    let tau1 = t1.normalize();
    let tau2 = n.cross(&tau1);
    let b00 = tau1.dot(&(w * tau1));
    let b11 = tau2.dot(&(w * tau2));
    let b01 = 0.5 * (tau1.dot(&(w * tau2)) + tau2.dot(&(w * tau1)));
    let mid = 0.5 * (b00 + b11);
    let rad = (0.25 * (b00 - b11).powi(2) + b01 * b01).sqrt();
    Ok(SurfaceFrame {
        chart,
        s,
        y: jet.pos,
        tangents: [t1, t2],
        normal: n,
        metric,
        metric_inv: metric.try_inverse().expect("metric is positive definite"),
        det_metric: det,
        second_form,
        weingarten: w,
        kappa: [mid - rad, mid + rad],
        mean_curvature: w.trace(),
        p,
        q: n * n.transpose(),
        symmetry_defect,
    })
}

/// `div_Gamma X = tr(P grad X~)` for a tangential field given through the
/// value and ambient gradient (paper layout `(grad X)_{ij} = d_i X_j`) of
/// any extension.
pub fn surface_divergence(frame: &SurfaceFrame, value: &Vec3, grad: &Mat3) -> Result<f64> {
    let normal_part = value.dot(&frame.normal).abs();
    if normal_part > 1e-10 * (1.0 + value.norm()) {
        return Err(Error::NotTangential(normal_part));
    }
    Ok((frame.p * grad).trace())
}

/// Surface divergence from the local-coordinate formula
/// `(1/sqrt g) d_i (sqrt g X^i)`, differentiating the contravariant
/// components by central differences with parameter step `h`.
pub fn surface_divergence_chart<F>(surface: &Surface, chart: usize, s: [f64; 2], field: F, h: f64) -> Result<f64>
where
    F: Fn(&Vec3) -> Vec3,
{
    let contravariant = |sp: [f64; 2]| -> Result<(f64, [f64; 2])> {
        let fr = surface.frame_at(chart, sp)?;
        let x = field(&fr.y);
        let cov = nalgebra::Vector2::new(x.dot(&fr.tangents[0]), x.dot(&fr.tangents[1]));
        let con = fr.metric_inv * cov;
        Ok((fr.det_metric.sqrt(), [con[0], con[1]]))
    };
    let (sq, _) = contravariant(s)?;
    let mut div = 0.0;
    for i in 0..2 {
        let mut sp = s;
        let mut sm = s;
        sp[i] += h;
        sm[i] -= h;
        let (gp, cp) = contravariant(sp)?;
        let (gm, cm) = contravariant(sm)?;
        div += (gp * cp[i] - gm * cm[i]) / (2.0 * h);
    }
    Ok(div / sq)
}

/// Gradient on `Gamma` of the tangential projection `P w` of an ambient
/// field, from `w`, its ambient gradient and the frame:
/// `grad_Gamma(Pw) = P grad w - (P (grad w) n - W w) (x) n + (n.w) W`.
pub fn tangential_projection_gradient(frame: &SurfaceFrame, w: &Vec3, grad_w: &Mat3) -> Mat3 {
    let n = frame.normal;
    let wm = frame.weingarten;
    let a = frame.p * grad_w;
    let b = frame.p * (grad_w * n) - wm * w;
    a - b * n.transpose() + n.dot(w) * wm
}

/// Full ambient gradient, at a point of `Gamma`, of the extension `P(pi(x)) w(x)`.
pub fn projected_extension_gradient(frame: &SurfaceFrame, w: &Vec3, grad_w: &Mat3) -> Mat3 {
    let n = frame.normal;
    let wm = frame.weingarten;
    grad_w + (wm * w - grad_w * n) * n.transpose() + n.dot(w) * wm
}
