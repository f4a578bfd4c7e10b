//! Pointwise surface identities with analytic and finite-difference Jacobians.

use thin_korn::surface::Surface;
use thin_korn::verify::{identity_suite, JacobianMode};

fn main() -> thin_korn::Result<()> {
    for (name, s) in [("sphere", Surface::unit_sphere()), ("torus", Surface::torus(2.0, 0.5)), ("ellipsoid", Surface::ellipsoid(1.0, 0.8, 0.6))] {
        for mode in [JacobianMode::Analytic, JacobianMode::FiniteDifference] {
            let rep = identity_suite(&s, 100, 1, mode)?;
            println!("{name} {mode:?}");
            for c in &rep.checks {
                println!("  {:<14} max {:.2e}  mean {:.2e}  {}", c.name, c.max_residual, c.mean_residual, if c.passed { "pass" } else { "FAIL" });
            }
        }
    }
    Ok(())
}
