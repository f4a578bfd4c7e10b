//! Decay rates of boundary quantities against their surface counterparts.

use thin_korn::scalar::QuadPoly;
use thin_korn::surface::Surface;
use thin_korn::thin_domain::{DomainResolution, ProfilePair, ThinDomain};
use thin_korn::verify::comparison_suite;

fn main() -> thin_korn::Result<()> {
    let res = DomainResolution::new(32, 64, 4);
    let cases = [
        ("sphere", Surface::unit_sphere(), ProfilePair::as_example(), [0.2, 0.1, 0.05, 0.025]),
        ("sphere", Surface::unit_sphere(), ProfilePair::as_example(), [0.1, 0.05, 0.025, 0.0125]),
        ("torus", Surface::torus(2.0, 0.5), ProfilePair::new("torus_quadratic", QuadPoly::zero(), QuadPoly::constant(1.0).plus_quadratic(2, 2, 0.2)), [0.1, 0.05, 0.025, 0.0125]),
    ];
    for (name, surface, profiles, eps) in cases {
        let domains = eps
            .iter()
            .map(|&e| ThinDomain::with_resolution(&surface, profiles.clone(), e, res))
            .collect::<thin_korn::Result<Vec<_>>>()?;
        let report = comparison_suite(&domains, 1, 7)?;
        println!("{name} ({})", profiles.name);
        for c in &report.checks {
            let slope = c.slope.map_or("-".to_string(), |s| format!("{s:.3}"));
            println!("  {:<10} slope {:>6}  max {:.3e}  {}", c.name, slope, c.max_residual, if c.passed { "pass" } else { "FAIL" });
        }
    }
    Ok(())
}
