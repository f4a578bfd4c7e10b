//! Polynomial Rayleigh-quotient estimate of the Korn constant on the shell.

use thin_korn::korn::{korn_eigen_estimate, KornConfig, OrthMode};
use thin_korn::surface::Surface;
use thin_korn::thin_domain::{DomainResolution, ProfilePair, ThinDomain};

fn main() -> thin_korn::Result<()> {
    let sphere = Surface::unit_sphere();
    let deflated = KornConfig { mode: OrthMode::AgainstRg, degree: 2, ..KornConfig::default() };
    let bare = KornConfig { mode: OrthMode::None, ..deflated };
    for eps in [0.2, 0.1, 0.05] {
        let dom = ThinDomain::with_resolution(&sphere, ProfilePair::shell(), eps, DomainResolution::new(24, 48, 4))?;
        let est = korn_eigen_estimate(&dom, &deflated)?;
        print!("eps {eps:<5} lambda_max {:.4} (basis {}, reduced {}, deflated {})", est.lambda_max, est.basis_size, est.reduced_size, est.deflated);
        match korn_eigen_estimate(&dom, &bare) {
            Ok(b) => println!("  undeflated {:.3e}", b.lambda_max),
            Err(e) => println!("  undeflated: {e}"),
        }
    }
    Ok(())
}
