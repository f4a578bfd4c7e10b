//! Norms of the counterexample field and the resulting Korn blow-up.

use thin_korn::fields::{CounterexampleField, RigidField};
use thin_korn::korn::{fit_scaling, norms};
use thin_korn::surface::Surface;
use thin_korn::thin_domain::{DomainResolution, ProfilePair, ThinDomain};
use thin_korn::Vec3;

fn main() -> thin_korn::Result<()> {
    let sphere = Surface::unit_sphere();
    let cases = [
        (ProfilePair::as_example(), RigidField::rotation(Vec3::x())),
        (ProfilePair::nas_example(), RigidField::rotation(Vec3::new(0.0, 1.0, -1.0))),
    ];
    for (profiles, v) in cases {
        println!("{}: v = a x y with a = {:?}", profiles.name, v.a.as_slice());
        let mut h1 = Vec::new();
        let mut strain = Vec::new();
        let mut ray = Vec::new();
        for eps in [0.2, 0.1, 0.05, 0.025] {
            let dom = ThinDomain::with_resolution(&sphere, profiles.clone(), eps, DomainResolution::new(32, 64, 8))?;
            let u = CounterexampleField::new(&dom, v)?;
            let n = norms(&dom, &u)?;
            println!("  eps {eps:<6} |v|_H1 {:.6}  |D(v)| {:.6}  Rayleigh {:.3}", n.h1().sqrt(), n.strain.sqrt(), n.h1() / n.strain);
            h1.push((eps, n.h1().sqrt()));
            strain.push((eps, n.strain.sqrt()));
            ray.push((eps, n.h1() / n.strain));
        }
        println!(
            "  slopes: H1 {:.3}, strain {:.3}, Rayleigh {:.3}",
            fit_scaling(&h1)?.slope,
            fit_scaling(&strain)?.slope,
            fit_scaling(&ray)?.slope
        );
    }
    Ok(())
}
