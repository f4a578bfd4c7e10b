//! Closest-point map `x -> (pi(x), d(x))` on the tubular neighborhood.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};

use crate::error::{check_finite_vec, Error, Result};
use crate::surface::{Preset, Surface, SurfaceFrame};
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpMethod {
    ClosedForm,
    Newton,
}

impl CpMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            CpMethod::ClosedForm => "closed_form",
            CpMethod::Newton => "newton",
        }
    }
}

/// Result of projecting an ambient point onto the surface.
#[derive(Debug, Clone, Copy)]
pub struct Projection {
    pub frame: SurfaceFrame,
    /// Signed distance along the outward normal.
    pub dist: f64,
}

const MAX_ITERS: usize = 30;
const TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct ClosestPointMap {
    surface: Surface,
    method: CpMethod,
    seeds: Vec<(usize, [f64; 2], Vec3)>,
}

impl ClosestPointMap {
    pub fn new(surface: &Surface) -> Self {
        let method = match surface.preset() {
            Preset::Sphere { .. } | Preset::Torus { .. } => CpMethod::ClosedForm,
            _ => CpMethod::Newton,
        };
        let mut seeds = Vec::new();
        if method == CpMethod::Newton {
            for (c, chart) in surface.charts().iter().enumerate() {
                let [(a0, b0), (a1, b1)] = chart.bounds();
                let (m0, m1) = (24, 48);
                for i in 0..m0 {
                    for j in 0..m1 {
                        let s = [
                            a0 + (b0 - a0) * (i as f64 + 0.5) / m0 as f64,
                            a1 + (b1 - a1) * (j as f64 + 0.5) / m1 as f64,
                        ];
                        seeds.push((c, s, chart.position(s)));
                    }
                }
            }
        }
        ClosestPointMap { surface: surface.clone(), method, seeds }
    }

    pub fn method(&self) -> CpMethod {
        self.method
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    /// Projects `x`; fails with `OutOfTube` when `|d(x)|` reaches the reach.
    pub fn project(&self, x: &Vec3) -> Result<Projection> {
        check_finite_vec("x", x)?;
        let proj = match (self.method, self.surface.preset()) {
            (CpMethod::ClosedForm, Preset::Sphere { radius }) => self.project_sphere(*radius, x)?,
            (CpMethod::ClosedForm, Preset::Torus { major, minor }) => self.project_torus(*major, *minor, x)?,
            _ => self.project_newton(x)?,
        };
        let reach = self.surface.reach();
        if !(proj.dist.abs() < reach) {
            return Err(Error::OutOfTube { dist: proj.dist, reach });
        }
        Ok(proj)
    }

    /// Closest point and signed distance only, skipping the frame where a
    /// closed form exists.
    pub fn locate(&self, x: &Vec3) -> Result<(Vec3, f64)> {
        match self.surface.preset() {
            Preset::Sphere { radius } => {
                let r = x.norm();
                if !((r - radius).abs() < self.surface.reach()) {
                    return Err(Error::OutOfTube { dist: r - radius, reach: self.surface.reach() });
                }
                Ok((x * (radius / r), r - radius))
            }
            Preset::Torus { major, minor } => {
                let rho = (x.x * x.x + x.y * x.y).sqrt();
                let dist = ((rho - major).powi(2) + x.z * x.z).sqrt() - minor;
                if !(dist.abs() < self.surface.reach()) {
                    return Err(Error::OutOfTube { dist, reach: self.surface.reach() });
                }
                let c = Vec3::new(x.x * major / rho, x.y * major / rho, 0.0);
                let y = c + (x - c).normalize() * *minor;
                Ok((y, dist))
            }
            _ => {
                let p = self.project(x)?;
                Ok((p.frame.y, p.dist))
            }
        }
    }

    fn project_sphere(&self, radius: f64, x: &Vec3) -> Result<Projection> {
        let r = x.norm();
        if r < 1e-300 {
            return Err(Error::OutOfTube { dist: -radius, reach: self.surface.reach() });
        }
        let u = x / r;
        let (chart, s) = if u.z.abs() < 0.9 {
            (0, [u.z.clamp(-1.0, 1.0).acos(), u.y.atan2(u.x).rem_euclid(2.0 * PI)])
        } else {
            // rotated chart: p = (cos t, sin t cos f, sin t sin f)
            (1, [u.x.clamp(-1.0, 1.0).acos(), u.z.atan2(u.y).rem_euclid(2.0 * PI)])
        };
        let mut frame = self.surface.frame_at(chart, s)?;
        // Use the exact projected point to avoid trigonometric round-off.
        frame.y = radius * u;
        frame.normal = u;
        Ok(Projection { frame, dist: r - radius })
    }

    fn project_torus(&self, major: f64, minor: f64, x: &Vec3) -> Result<Projection> {
        let rho = (x.x * x.x + x.y * x.y).sqrt();
        let v = x.y.atan2(x.x).rem_euclid(2.0 * PI);
        let u = x.z.atan2(rho - major).rem_euclid(2.0 * PI);
        let dist = ((rho - major).powi(2) + x.z * x.z).sqrt() - minor;
        let frame = self.surface.frame_at(0, [v, u])?;
        Ok(Projection { frame, dist })
    }

    fn project_newton(&self, x: &Vec3) -> Result<Projection> {
        let (mut chart, mut s, _) = *self
            .seeds
            .iter()
            .min_by(|a, b| (a.2 - x).norm_squared().partial_cmp(&(b.2 - x).norm_squared()).unwrap())
            .expect("seed grid is not empty");
        // Prefer the chart in which the seed is farthest from a coordinate pole.
        if self.surface.charts().len() > 1 {
            let pole_dist = |c: usize, s: [f64; 2]| {
                let [(a, b), _] = self.surface.charts()[c].bounds();
                (s[0] - a).min(b - s[0])
            };
            for (c, sc, _) in self.seeds_near(x) {
                if pole_dist(c, sc) > pole_dist(chart, s) + 1e-9 {
                    chart = c;
                    s = sc;
                }
            }
        }
        self.newton_from(x, chart, s)
    }

    /// Best seed of each chart.
    fn seeds_near(&self, x: &Vec3) -> Vec<(usize, [f64; 2], Vec3)> {
        let mut best: Vec<Option<(usize, [f64; 2], Vec3)>> = vec![None; self.surface.charts().len()];
        for seed in &self.seeds {
            let d = (seed.2 - x).norm_squared();
            match best[seed.0] {
                Some(b) if (b.2 - x).norm_squared() <= d => {}
                _ => best[seed.0] = Some(*seed),
            }
        }
        best.into_iter().flatten().collect()
    }

    /// Newton iteration on `|x - mu(s)|^2 / 2` started at `(chart, s)`.
    pub fn newton_from(&self, x: &Vec3, chart: usize, s0: [f64; 2]) -> Result<Projection> {
        let c = &self.surface.charts()[chart];
        let mut s = s0;
        for _ in 0..MAX_ITERS {
            let jet = c.jet(s);
            let r = x - jet.pos;
            let grad = Vector2::new(-r.dot(&jet.d[0]), -r.dot(&jet.d[1]));
            let scale = jet.d[0].norm().max(jet.d[1].norm()) * (1.0 + x.norm());
            if grad.norm() < TOL * scale {
                break;
            }
            let g = Matrix2::new(
                jet.d[0].dot(&jet.d[0]),
                jet.d[0].dot(&jet.d[1]),
                jet.d[1].dot(&jet.d[0]),
                jet.d[1].dot(&jet.d[1]),
            );
            let mut hess = g;
            for k in 0..2 {
                for l in 0..2 {
                    hess[(k, l)] -= r.dot(&jet.dd[k][l]);
                }
            }
            let reg = 1e-14 * g.trace();
            let step = match (hess + Matrix2::identity() * reg).cholesky() {
                Some(ch) => ch.solve(&(-grad)),
                None => (g + Matrix2::identity() * reg)
                    .try_inverse()
                    .map(|gi| gi * (-grad))
                    .unwrap_or_else(Vector2::zeros),
            };
            s = [s[0] + step[0], s[1] + step[1]];
            s = c.wrap(s);
        }
        let frame = self.surface.frame_at(chart, s)?;
        let dist = (x - frame.y).dot(&frame.normal);
        Ok(Projection { frame, dist })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::surface::{PeanutProfile, SurfaceResolution};

    fn check_identity(cp: &ClosestPointMap, fracs: &[f64]) {
        let quad = cp.surface().quadrature(SurfaceResolution { n1: 10, n2: 14 });
        let reach = cp.surface().reach();
        for node in &quad.nodes {
            for &f in fracs {
                let x = node.frame.y + f * reach * node.frame.normal;
                let p = cp.project(&x).unwrap();
                let back = p.frame.y + p.dist * p.frame.normal;
                assert!((back - x).norm() < 1e-10, "{} {:?}", cp.surface().tag(), (back - x).norm());
                assert!((p.dist - f * reach).abs() < 1e-9);
                let (y, d) = cp.locate(&x).unwrap();
                assert!((y - p.frame.y).norm() < 1e-10 && (d - p.dist).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn normal_coordinates_identity_on_presets() {
        let fr = [-0.8, -0.3, 0.0, 0.4, 0.9];
        check_identity(&ClosestPointMap::new(&Surface::unit_sphere()), &fr);
        check_identity(&ClosestPointMap::new(&Surface::torus(2.0, 0.5)), &fr);
        check_identity(&ClosestPointMap::new(&Surface::ellipsoid(1.0, 1.3, 1.7)), &fr);
        check_identity(&ClosestPointMap::new(&Surface::revolution(Arc::new(PeanutProfile { bulge: 0.3 }))), &fr);
    }

    #[test]
    fn sphere_closed_form_values() {
        let cp = ClosestPointMap::new(&Surface::unit_sphere());
        assert_eq!(cp.method(), CpMethod::ClosedForm);
        let p = cp.project(&Vec3::new(0.0, 0.0, 1.1)).unwrap();
        assert!((p.dist - 0.1).abs() < 1e-15);
        assert!((p.frame.y - Vec3::z()).norm() < 1e-15);
        assert!(matches!(cp.project(&Vec3::new(2.5, 0.0, 0.0)), Err(Error::OutOfTube { .. })));
    }

    #[test]
    fn ellipsoid_near_chart_poles() {
        let cp = ClosestPointMap::new(&Surface::ellipsoid(1.0, 1.3, 1.7));
        for x in [Vec3::new(0.0, 0.0, 1.8), Vec3::new(1.1, 0.0, 0.0), Vec3::new(0.01, -0.02, -1.65)] {
            let p = cp.project(&x).unwrap();
            assert!((p.frame.y + p.dist * p.frame.normal - x).norm() < 1e-10);
        }
    }
}
