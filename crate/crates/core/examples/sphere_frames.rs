//! Frames, curvatures and surface quadrature on the preset surfaces.

use thin_korn::surface::{Surface, SurfaceResolution};

fn main() -> thin_korn::Result<()> {
    let s = Surface::unit_sphere();
    let f = s.frame_at(0, [std::f64::consts::FRAC_PI_2, 0.0])?;
    println!("unit sphere at the equator: y = {:?}, n = {:?}", f.y.as_slice(), f.normal.as_slice());
    println!("  kappa = {:?}, H = {}, det(metric) = {}", f.kappa, f.mean_curvature, f.det_metric);

    let surfaces = [
        ("sphere", Surface::unit_sphere()),
        ("torus(2, 0.5)", Surface::torus(2.0, 0.5)),
        ("ellipsoid(1, 0.8, 0.6)", Surface::ellipsoid(1.0, 0.8, 0.6)),
    ];
    for (name, s) in surfaces {
        let quad = s.quadrature(SurfaceResolution { n1: 64, n2: 128 });
        let area = quad.integrate(|_| 1.0)?;
        let total_h = quad.integrate(|f| f.mean_curvature)?;
        let kmax = quad.nodes.iter().map(|n| n.frame.kappa[0].abs().max(n.frame.kappa[1].abs())).fold(0.0, f64::max);
        println!("{name:<24} area {area:.10}  integral of H {total_h:.6}  max|kappa| {kmax:.4}  reach {:.4}", s.reach());
    }
    Ok(())
}
