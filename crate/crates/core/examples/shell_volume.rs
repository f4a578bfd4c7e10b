//! Co-area volume quadrature against closed forms and a Monte-Carlo oracle.

use std::f64::consts::PI;

use thin_korn::surface::Surface;
use thin_korn::thin_domain::{DomainResolution, ProfilePair, ThinDomain};
use thin_korn::verify::{boundary_area_oracle, monte_carlo_volume};

fn main() -> thin_korn::Result<()> {
    let sphere = Surface::unit_sphere();
    for eps in [0.4, 0.1, 0.01] {
        let dom = ThinDomain::with_resolution(&sphere, ProfilePair::shell(), eps, DomainResolution::new(32, 64, 8))?;
        let vol = dom.integrate_volume(|_| 1.0)?;
        let exact = 4.0 * PI * ((1.0 + eps).powi(3) - 1.0) / 3.0;
        println!("shell eps = {eps:<5} volume {vol:.12}  exact {exact:.12}  rel err {:.1e}", ((vol - exact) / exact).abs());
    }

    let dom = ThinDomain::new(&sphere, ProfilePair::nas_example(), 0.05)?;
    let vol = dom.integrate_volume(|_| 1.0)?;
    let (mc, se) = monte_carlo_volume(&dom, 2_000_000, 3)?;
    println!("nas_example eps = 0.05: quadrature {vol:.6}, Monte-Carlo {mc:.6} +- {se:.1e}");
    for i in 0..2 {
        let area = dom.integrate_boundary(i, |_| 1.0)?;
        let oracle = boundary_area_oracle(&dom, i)?;
        println!("  sheet {i}: area {area:.10}, first-fundamental-form oracle {oracle:.10}");
    }
    Ok(())
}
