//! Acceptance suite: one pass/fail line per criterion. Runs as a plain
//! program (no libtest harness) so the lines are always printed.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use thin_korn::fields::{CounterexampleField, RigidField};
use thin_korn::korn::{fit_scaling, inner_l2, korn_eigen_estimate, norms, KornConfig, OrthMode};
use thin_korn::quadrature::gauss_legendre_on;
use thin_korn::surface::{Surface, SurfaceResolution};
use thin_korn::symmetry::{eigenstructure_check, fit_rigid_tangential, thin_domain_symmetry};
use thin_korn::thin_domain::{DomainResolution, ProfilePair, ThinDomain};
use thin_korn::verify::{comparison_suite, identity_suite, inequality_suite, JacobianMode};
use thin_korn::{Error, Vec3};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn within(x: f64, lo: f64, hi: f64) -> bool {
    x >= lo && x <= hi
}

fn sphere_conventions() -> thin_korn::Result<Outcome> {
    let t = Instant::now();
    let s = Surface::unit_sphere();
    let quad = s.quadrature(SurfaceResolution { n1: 25, n2: 40 });
    let mut err = 0.0f64;
    for n in &quad.nodes {
        let f = &n.frame;
        err = err.max((f.kappa[0] + 1.0).abs()).max((f.kappa[1] + 1.0).abs()).max((f.mean_curvature + 2.0).abs());
    }
    let secs = t.elapsed().as_secs_f64();
    Ok(outcome(
        quad.len() == 1000 && err < 1e-10 && secs < 1.0,
        format!("{} nodes, max error {err:.1e}, {secs:.2} s", quad.len()),
    ))
}

fn coarea_volume() -> thin_korn::Result<Outcome> {
    let t = Instant::now();
    let s = Surface::unit_sphere();
    let mut worst = 0.0f64;
    for eps in [0.4, 0.1, 0.01] {
        let dom = ThinDomain::new(&s, ProfilePair::shell(), eps)?;
        let exact = 4.0 * PI * ((1.0 + eps).powi(3) - 1.0) / 3.0;
        worst = worst.max(((dom.integrate_volume(|_| 1.0)? - exact) / exact).abs());
    }
    let secs = t.elapsed().as_secs_f64();
    Ok(outcome(worst < 1e-8 && secs < 2.0, format!("max relative error {worst:.1e}, {secs:.2} s")))
}

/// Area of `y -> (1 + eps g(y)) y` over the unit sphere from the first
/// fundamental form, with central differences in spherical coordinates.
fn sphere_graph_area(g: &dyn Fn(&Vec3) -> f64, eps: f64, n_theta: usize, n_phi: usize) -> f64 {
    let mu = |th: f64, ph: f64| {
        let y = Vec3::new(th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos());
        (1.0 + eps * g(&y)) * y
    };
    let h = 1e-6;
    let mut area = 0.0;
    for (th, wt) in gauss_legendre_on(n_theta, 0.0, PI) {
        for k in 0..n_phi {
            let ph = 2.0 * PI * k as f64 / n_phi as f64;
            let d_th = (mu(th + h, ph) - mu(th - h, ph)) / (2.0 * h);
            let d_ph = (mu(th, ph + h) - mu(th, ph - h)) / (2.0 * h);
            let (e, f, gg) = (d_th.dot(&d_th), d_th.dot(&d_ph), d_ph.dot(&d_ph));
            area += wt * (2.0 * PI / n_phi as f64) * (e * gg - f * f).sqrt();
        }
    }
    area
}

fn boundary_cov() -> thin_korn::Result<Outcome> {
    let dom = ThinDomain::new(&Surface::unit_sphere(), ProfilePair::nas_example(), 0.05)?;
    let area = dom.integrate_boundary(1, |_| 1.0)?;
    let oracle = sphere_graph_area(&|y| y.y + 2.0, 0.05, 64, 128);
    let rel = ((area - oracle) / oracle).abs();
    Ok(outcome(rel < 1e-6, format!("area {area:.10}, oracle {oracle:.10}, relative error {rel:.1e}")))
}

fn identities() -> thin_korn::Result<Outcome> {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for s in [Surface::unit_sphere(), Surface::torus(2.0, 0.5)] {
        for mode in [JacobianMode::Analytic, JacobianMode::FiniteDifference] {
            let rep = identity_suite(&s, 100, 2024, mode)?;
            worst = rep.checks.iter().map(|c| c.max_residual).fold(worst, f64::max);
        }
    }
    let secs = t.elapsed().as_secs_f64();
    Ok(outcome(worst < 1e-6 && secs < 10.0, format!("max residual {worst:.1e} over 4 checks, {secs:.2} s")))
}

fn comparisons() -> thin_korn::Result<Outcome> {
    let s = Surface::unit_sphere();
    let domains = [0.2, 0.1, 0.05, 0.025]
        .iter()
        .map(|&e| ThinDomain::with_resolution(&s, ProfilePair::as_example(), e, DomainResolution::new(32, 64, 4)))
        .collect::<thin_korn::Result<Vec<_>>>()?;
    let rep = comparison_suite(&domains, 1, 5)?;
    let slope = |n: &str| rep.check(n).and_then(|c| c.slope).unwrap_or(f64::NAN);
    let mut bad = Vec::new();
    let mut report = |name: &str, ok: bool| {
        if !ok {
            bad.push(format!("{name} {:.3}", slope(name)));
        }
    };
    report("comp_n", slope("comp_n") >= 1.8);
    for n in ["comp_p", "comp_w", "diff_w_io", "diff_h_io"] {
        report(n, within(slope(n), 0.9, 1.3));
    }
    // inner/outer P and Q cancel to first order here; only the upper bound is meaningful
    for n in ["diff_p_io", "diff_q_io"] {
        report(n, slope(n) >= 0.9);
    }
    let detail = format!(
        "slopes N {:.3}, P {:.3}, W {:.3}, P_io {:.3}, W_io {:.3}, H_io {:.3}",
        slope("comp_n"),
        slope("comp_p"),
        slope("comp_w"),
        slope("diff_p_io"),
        slope("diff_w_io"),
        slope("diff_h_io")
    );
    let detail = if bad.is_empty() { detail } else { format!("{detail}; out of band: {}", bad.join(", ")) };
    Ok(outcome(bad.is_empty(), detail))
}

struct Scaling {
    h1: f64,
    strain: f64,
    rayleigh: f64,
    orth: Vec<f64>,
    beta: Vec<(f64, f64)>,
}

/// Norm scalings of the counterexample and its pairings with `w_orth` and `w_beta`.
fn counterexample(profiles: ProfilePair, v: RigidField, w_orth: RigidField, w_beta: RigidField, eps: &[f64]) -> thin_korn::Result<Scaling> {
    let s = Surface::unit_sphere();
    let (mut h1, mut strain, mut ray, mut orth, mut beta) = (vec![], vec![], vec![], vec![], vec![]);
    for &e in eps {
        let dom = ThinDomain::with_resolution(&s, profiles.clone(), e, DomainResolution::new(32, 64, 8))?;
        let u = CounterexampleField::new(&dom, v)?;
        let n = norms(&dom, &u)?;
        h1.push((e, n.h1().sqrt()));
        strain.push((e, n.strain.sqrt()));
        ray.push((e, n.h1() / n.strain));
        let un = n.l2.sqrt();
        orth.push(inner_l2(&dom, &u, &w_orth)?.abs() / (un * inner_l2(&dom, &w_orth, &w_orth)?.sqrt()));
        beta.push((e, inner_l2(&dom, &u, &w_beta)? / (un * inner_l2(&dom, &w_beta, &w_beta)?.sqrt())));
    }
    Ok(Scaling {
        h1: fit_scaling(&h1)?.slope,
        strain: fit_scaling(&strain)?.slope,
        rayleigh: fit_scaling(&ray)?.slope,
        orth,
        beta,
    })
}

fn counterexample_scaling() -> thin_korn::Result<Outcome> {
    let t = Instant::now();
    let w1 = RigidField::rotation(Vec3::x());
    let w3 = RigidField::rotation(Vec3::z());
    let sc = counterexample(ProfilePair::as_example(), w1, w3, w1, &[0.2, 0.1, 0.05, 0.025])?;
    let orth = sc.orth.iter().cloned().fold(0.0, f64::max);
    let secs = t.elapsed().as_secs_f64();
    let ok = within(sc.h1, 0.4, 0.6) && within(sc.strain, 1.4, 1.6) && sc.rayleigh <= -0.8 && orth < 1e-8 && secs < 30.0;
    Ok(outcome(
        ok,
        format!(
            "slopes H1 {:.3}, strain {:.3}, Rayleigh {:.3} (Korn bound {:.3}); max |(v,w3)| ratio {orth:.1e}; {secs:.2} s",
            sc.h1,
            sc.strain,
            sc.rayleigh,
            sc.rayleigh / 2.0
        ),
    ))
}

fn nas_example() -> thin_korn::Result<Outcome> {
    let s = Surface::unit_sphere();
    let mut dims = Vec::new();
    let mut min_gap = f64::INFINITY;
    for eps in [0.2, 0.1, 0.05] {
        let dom = ThinDomain::with_resolution(&s, ProfilePair::nas_example(), eps, DomainResolution::new(32, 64, 4))?;
        let rep = thin_domain_symmetry(&dom)?;
        dims.push(rep.boundary.dimension);
        min_gap = min_gap.min(rep.boundary.gap);
    }
    let v0 = RigidField::rotation(Vec3::new(0.0, 1.0, -1.0));
    let sc = counterexample(ProfilePair::nas_example(), v0, v0, v0, &[0.2, 0.1, 0.05, 0.025])?;
    let ok = dims.iter().all(|&d| d == 0) && min_gap >= 1e4 && sc.rayleigh <= -0.8;
    Ok(outcome(ok, format!("dims {dims:?}, min gap {min_gap:.2e}, Rayleigh slope {:.3}", sc.rayleigh)))
}

fn condition_violation() -> thin_korn::Result<Outcome> {
    let w1 = RigidField::rotation(Vec3::x());
    let sc = counterexample(ProfilePair::as_example(), w1, w1, w1, &[0.2, 0.1, 0.05])?;
    let increasing = sc.beta.windows(2).all(|w| w[1].1 > w[0].1);
    let at_005 = sc.beta.iter().find(|b| b.0 == 0.05).map(|b| b.1).unwrap_or(f64::NAN);
    Ok(outcome(increasing && at_005 >= 0.99, format!("beta* {:?}", sc.beta.iter().map(|b| b.1).collect::<Vec<_>>())))
}

fn symmetry_dimensions() -> thin_korn::Result<Outcome> {
    let res = SurfaceResolution { n1: 32, n2: 64 };
    let sphere = Surface::unit_sphere();
    let torus = Surface::torus(2.0, 0.5);
    let ds = fit_rigid_tangential(&sphere.quadrature(res), &[])?;
    let dt = fit_rigid_tangential(&torus.quadrature(res), &[])?;
    let de = fit_rigid_tangential(&Surface::ellipsoid(1.0, 0.8, 0.6).quadrature(res), &[])?;
    let x3_axis = |axes: &[Option<thin_korn::symmetry::Axis>]| {
        axes.len() == 1 && axes[0].is_some_and(|a| (a.direction[2].abs() - 1.0).abs() < 1e-8 && Vec3::from(a.point).norm() < 1e-8)
    };
    let dom = ThinDomain::with_resolution(&sphere, ProfilePair::as_example(), 0.1, DomainResolution::new(32, 64, 4))?;
    let das = thin_domain_symmetry(&dom)?.boundary;
    let mut eig = 0.0f64;
    for (s, rep) in [(&sphere, &ds), (&torus, &dt)] {
        let quad = s.quadrature(SurfaceResolution { n1: 10, n2: 10 });
        let frames: Vec<_> = quad.nodes.iter().map(|n| n.frame.clone()).collect();
        for w in rep.fields() {
            let r = eigenstructure_check(&w, &frames)?;
            eig = eig.max(r.max_eigen_residual).max(r.max_cross_residual);
        }
    }
    let ok = ds.dimension == 3 && dt.dimension == 1 && x3_axis(&dt.axes) && de.dimension == 0 && das.dimension == 1 && x3_axis(&das.axes) && eig < 1e-7;
    Ok(outcome(
        ok,
        format!(
            "sphere {}, torus {}, ellipsoid {}, as_example {}; x3 axes {} / {}; eigen residual {eig:.1e}",
            ds.dimension,
            dt.dimension,
            de.dimension,
            das.dimension,
            x3_axis(&dt.axes),
            x3_axis(&das.axes)
        ),
    ))
}

fn uniformity() -> thin_korn::Result<Outcome> {
    let t = Instant::now();
    let s = Surface::unit_sphere();
    let domains = [0.2, 0.1, 0.05]
        .iter()
        .map(|&e| ThinDomain::with_resolution(&s, ProfilePair::shell(), e, DomainResolution::new(24, 48, 6)))
        .collect::<thin_korn::Result<Vec<_>>>()?;
    let rep = inequality_suite(&domains, 9, 200)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["poincare_dom", "trace_l2", "korn_grad", "g_bound", "g_bound_grad"] {
        let c = rep.check(name).expect("check present");
        ok &= c.passed;
        parts.push(format!("{name} {:.2}", c.max_residual));
    }
    let cfg = KornConfig { mode: OrthMode::AgainstRg, degree: 2, ..KornConfig::default() };
    let bare = KornConfig { mode: OrthMode::None, ..cfg };
    let mut lambdas = Vec::new();
    for dom in &domains {
        let d = korn_eigen_estimate(dom, &cfg)?;
        lambdas.push(d.lambda_max);
        match korn_eigen_estimate(dom, &bare) {
            Err(Error::SingularA { .. }) => {}
            Ok(b) => ok &= b.lambda_max >= 100.0 * d.lambda_max,
            Err(e) => return Err(e),
        }
    }
    let spread = lambdas.iter().cloned().fold(0.0, f64::max) / lambdas.iter().cloned().fold(f64::INFINITY, f64::min);
    ok &= spread < 3.0;
    let secs = t.elapsed().as_secs_f64();
    ok &= secs < 120.0;
    Ok(outcome(ok, format!("max/min ratios: {}, eigen {spread:.2}; {secs:.1} s", parts.join(", "))))
}

fn end_to_end() -> thin_korn::Result<Outcome> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut configs: Vec<PathBuf> = std::fs::read_dir(&dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "conf"))
        .collect();
    configs.sort();
    let tmp = std::env::temp_dir().join(format!("thin-korn-acceptance-{}", std::process::id()));
    let mut bad = Vec::new();
    for cfg in &configs {
        let name = cfg.file_stem().unwrap().to_string_lossy().to_string();
        let mut csvs = Vec::new();
        for run in 0..2 {
            let out = tmp.join(format!("{name}-{run}"));
            let status = Command::new(env!("CARGO_BIN_EXE_thin-korn")).arg("run").arg(cfg).arg("--out").arg(&out).output()?;
            if !status.status.success() {
                bad.push(format!("{name} exited {:?}", status.status.code()));
            }
            csvs.push(std::fs::read(out.join("results.csv"))?);
        }
        if csvs[0] != csvs[1] {
            bad.push(format!("{name} CSV differs between runs"));
        }
    }
    let _ = std::fs::remove_dir_all(&tmp);
    let detail = format!("{} configs", configs.len());
    let detail = if bad.is_empty() { detail } else { format!("{detail}; {}", bad.join(", ")) };
    Ok(outcome(bad.is_empty() && !configs.is_empty(), detail))
}

fn main() {
    let criteria: [(&str, fn() -> thin_korn::Result<Outcome>); 11] = [
        ("sphere sign conventions", sphere_conventions),
        ("co-area shell volume", coarea_volume),
        ("boundary change of variables", boundary_cov),
        ("surface identity suite", identities),
        ("comparison decay rates", comparisons),
        ("counterexample scaling", counterexample_scaling),
        ("non-axisymmetric example", nas_example),
        ("orthogonality condition violation", condition_violation),
        ("symmetry dimensions", symmetry_dimensions),
        ("uniformity of empirical constants", uniformity),
        ("end-to-end CLI runs", end_to_end),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let o = f().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        if !o.passed {
            failed += 1;
        }
        println!("criterion {:>2} {} {name}: {}", k + 1, if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
