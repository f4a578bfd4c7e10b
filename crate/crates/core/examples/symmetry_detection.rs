//! Dimension of the rigid displacements tangential to surfaces and thin domains.

use thin_korn::surface::{Surface, SurfaceResolution};
use thin_korn::symmetry::{fit_rigid_tangential, thin_domain_symmetry};
use thin_korn::thin_domain::{DomainResolution, ProfilePair, ThinDomain};

fn main() -> thin_korn::Result<()> {
    let res = SurfaceResolution { n1: 32, n2: 64 };
    for (name, s) in [
        ("sphere", Surface::unit_sphere()),
        ("torus", Surface::torus(2.0, 0.5)),
        ("ellipsoid", Surface::ellipsoid(1.0, 0.8, 0.6)),
    ] {
        let rep = fit_rigid_tangential(&s.quadrature(res), &[])?;
        println!("{name:<10} dim R = {}  gap {:.2e}  axes {:?}", rep.dimension, rep.gap, rep.axes);
    }
    let sphere = Surface::unit_sphere();
    for profiles in [ProfilePair::shell(), ProfilePair::as_example(), ProfilePair::nas_example()] {
        for eps in [0.2, 0.1, 0.05] {
            let dom = ThinDomain::with_resolution(&sphere, profiles.clone(), eps, DomainResolution::new(32, 64, 4))?;
            let rep = thin_domain_symmetry(&dom)?;
            println!(
                "{:<12} eps = {eps:<5} dim R_eps = {}  gap {:.2e}  matches surface detection: {}",
                profiles.name, rep.boundary.dimension, rep.boundary.gap, rep.consistent
            );
        }
    }
    Ok(())
}
