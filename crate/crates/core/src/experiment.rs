//! Config-driven experiment runner producing a CSV table and a JSON summary.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::config::{Experiment, ExperimentConfig, SurfaceSpec};
use crate::error::{Error, Result};
use crate::fields::{CounterexampleField, RigidField, VectorField};
use crate::korn::{
    constraint_fields, inner_l2, korn_eigen_estimate, korn_lower_bound_sweep, norms, orthogonality_ratio, Family, KornConfig,
    OrthMode,
};
use crate::surface::Surface;
use crate::symmetry::{eigenstructure_check, thin_domain_symmetry};
use crate::thin_domain::{DomainResolution, ThinDomain};
use crate::verify::{
    comparison_suite, cov_suite, identity_suite, inequality_suite, Check, JacobianMode, ResidualReport,
};
use crate::Vec3;

pub const CSV_HEADER: &str = "experiment,surface,profile,eps,quantity,value";

/// One CSV row; `eps` is empty for eps-independent quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub experiment: String,
    pub surface: String,
    pub profile: String,
    pub eps: Option<f64>,
    pub quantity: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub experiment: Experiment,
    pub surface: SurfaceSpec,
    pub profile: String,
    pub seed: u64,
    pub resolution: DomainResolution,
    pub eps: Vec<f64>,
    pub slopes: BTreeMap<String, f64>,
    pub suites: Vec<ResidualReport>,
    pub passed: bool,
    pub failures: Vec<String>,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub rows: Vec<Row>,
    pub summary: Summary,
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:?}")
    }
}

pub fn render_csv(rows: &[Row]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(',')).map_err(|e| Error::Io(e.to_string()))?;
    for r in rows {
        let eps = r.eps.map(format_value).unwrap_or_default();
        w.write_record([&r.experiment, &r.surface, &r.profile, &eps, &r.quantity, &format_value(r.value)])
            .map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    surface: Surface,
    rows: Vec<Row>,
    slopes: BTreeMap<String, f64>,
    suites: Vec<ResidualReport>,
}

impl Ctx<'_> {
    fn row(&mut self, eps: Option<f64>, quantity: impl Into<String>, value: f64) {
        self.rows.push(Row {
            experiment: self.cfg.experiment.tag().into(),
            surface: self.cfg.surface.name().into(),
            profile: self.cfg.profile_name.clone(),
            eps,
            quantity: quantity.into(),
            value,
        });
    }

    fn domains(&self) -> Result<Vec<ThinDomain>> {
        let quad = Arc::new(self.surface.quadrature(self.cfg.resolution.surface));
        self.cfg
            .eps
            .iter()
            .map(|&e| {
                ThinDomain::with_quadrature(&self.surface, self.cfg.profile.clone(), e, quad.clone(), self.cfg.resolution.radial)?
                    .with_friction(self.cfg.gamma[0], self.cfg.gamma[1])?
                    .with_viscosity(self.cfg.nu)
            })
            .collect()
    }

    fn suite(&mut self, name: &str, checks: Vec<Check>) {
        for c in &checks {
            if let Some(s) = c.slope {
                self.slopes.insert(c.name.clone(), s);
            }
        }
        self.suites.push(ResidualReport { suite: name.into(), seed: Some(self.cfg.seed), checks });
    }

    fn rigid(&self) -> RigidField {
        RigidField::rotation(Vec3::from(self.cfg.rotation))
    }
}

fn failed(name: &str, e: &Error) -> Check {
    let mut c = Check::residual(name, &[f64::INFINITY], 0.0);
    c.passed = false;
    c.tolerance = None;
    c.note = Some(e.to_string());
    c
}

fn flag(name: &str, passed: bool, note: String) -> Check {
    let mut c = Check::residual(name, &[if passed { 0.0 } else { 1.0 }], 0.5);
    c.note = Some(note);
    c
}

fn run_identities(ctx: &mut Ctx) -> Result<()> {
    for (mode, tag) in [(JacobianMode::Analytic, "analytic"), (JacobianMode::FiniteDifference, "fd")] {
        let rep = identity_suite(&ctx.surface, ctx.cfg.samples, ctx.cfg.seed, mode)?;
        for c in &rep.checks {
            ctx.row(None, format!("{}_max_residual_{tag}", c.name), c.max_residual);
            ctx.row(None, format!("{}_mean_residual_{tag}", c.name), c.mean_residual);
        }
        let checks = rep.checks.into_iter().map(|mut c| {
            c.name = format!("{}_{tag}", c.name);
            c
        });
        ctx.suite(&format!("identities_{tag}"), checks.collect());
    }
    Ok(())
}

fn run_cov(ctx: &mut Ctx) -> Result<()> {
    let mut checks = Vec::new();
    for dom in ctx.domains()? {
        let e = dom.eps();
        let vol = dom.integrate_volume(|_| 1.0)?;
        ctx.row(Some(e), "volume", vol);
        for i in 0..2 {
            ctx.row(Some(e), format!("boundary_area_{i}"), dom.integrate_boundary(i, |_| 1.0)?);
        }
        let rep = cov_suite(&dom, ctx.cfg.mc_samples, ctx.cfg.seed)?;
        for mut c in rep.checks {
            ctx.row(Some(e), format!("{}_residual", c.name), c.max_residual);
            c.name = format!("{}@{e}", c.name);
            checks.push(c);
        }
    }
    ctx.suite("cov", checks);
    Ok(())
}

fn run_comparisons(ctx: &mut Ctx) -> Result<()> {
    let rep = comparison_suite(&ctx.domains()?, ctx.cfg.stride, ctx.cfg.seed)?;
    for c in &rep.checks {
        for &(e, v) in &c.values {
            ctx.row(Some(e), c.name.clone(), v);
        }
        if let Some(s) = c.slope {
            ctx.row(None, format!("{}_slope", c.name), s);
        }
    }
    ctx.suite("comparisons", rep.checks);
    Ok(())
}

fn run_inequalities(ctx: &mut Ctx) -> Result<()> {
    let domains = ctx.domains()?;
    let rep = inequality_suite(&domains, ctx.cfg.seed, 200)?;
    for c in &rep.checks {
        for &(e, v) in &c.values {
            ctx.row(Some(e), format!("{}_constant", c.name), v);
        }
    }
    // the counterexample is the designed failure of coercivity: its ratio decays
    let mut ratios = Vec::new();
    for dom in &domains {
        if let Ok(v) = CounterexampleField::new(dom, ctx.rigid()) {
            let n = norms(dom, &v)?;
            let r = crate::korn::bilinear_form(dom, &v, &v)? / n.h1();
            ctx.row(Some(dom.eps()), "counterexample_coercivity", r);
            ratios.push((dom.eps(), r));
        }
    }
    if let Ok(fit) = crate::korn::fit_scaling(&ratios) {
        ctx.row(None, "counterexample_coercivity_slope", fit.slope);
        ctx.slopes.insert("counterexample_coercivity".into(), fit.slope);
    }
    ctx.suite("inequalities", rep.checks);
    Ok(())
}

fn run_symmetry(ctx: &mut Ctx) -> Result<()> {
    let mut checks = Vec::new();
    let quad = ctx.surface.quadrature(ctx.cfg.resolution.surface);
    let surf_rep = crate::symmetry::fit_rigid_tangential(&quad, &[])?;
    ctx.row(None, "dim_R_surface", surf_rep.dimension as f64);
    let frames: Vec<_> = quad.nodes.iter().step_by((quad.len() / 100).max(1)).map(|n| n.frame.clone()).collect();
    let mut eig = 0.0f64;
    for w in surf_rep.fields() {
        let rep = eigenstructure_check(&w, &frames)?;
        eig = eig.max(rep.max_eigen_residual.max(rep.max_cross_residual));
    }
    ctx.row(None, "eigenstructure_residual", eig);
    checks.push(Check::residual("eigenstructure", &[eig], 1e-7));
    for dom in ctx.domains()? {
        let e = dom.eps();
        let rep = thin_domain_symmetry(&dom)?;
        ctx.row(Some(e), "dim_R_eps", rep.boundary.dimension as f64);
        ctx.row(Some(e), "dim_R_surface_profiles", rep.surface.dimension as f64);
        ctx.row(Some(e), "svd_gap", rep.boundary.gap);
        for (k, axis) in rep.boundary.axes.iter().enumerate() {
            if let Some(a) = axis {
                for (c, v) in a.direction.iter().enumerate() {
                    ctx.row(Some(e), format!("axis{k}_direction_{c}"), *v);
                }
            }
        }
        checks.push(flag(
            &format!("gap@{e}"),
            !rep.boundary.ambiguous,
            format!("smallest retained over largest discarded singular value {}", rep.boundary.gap),
        ));
        checks.push(flag(
            &format!("consistent@{e}"),
            rep.consistent,
            format!("boundary dimension {}, surface dimension {}", rep.boundary.dimension, rep.surface.dimension),
        ));
        if let Some(d) = ctx.cfg.expected_dimension {
            checks.push(flag(
                &format!("dimension@{e}"),
                rep.boundary.dimension == d,
                format!("detected {}, expected {d}", rep.boundary.dimension),
            ));
        }
    }
    ctx.suite("symmetry", checks);
    Ok(())
}

fn run_korn_sweep(ctx: &mut Ctx) -> Result<()> {
    let domains = ctx.domains()?;
    let v = ctx.rigid();
    let family = |dom: &ThinDomain| -> Result<Family> {
        let u = CounterexampleField::new(dom, v)?;
        Ok(vec![("counterexample".to_string(), Box::new(u) as Box<dyn VectorField>)])
    };
    let cfg = KornConfig { nu: ctx.cfg.nu, ..ctx.cfg.korn };
    match korn_lower_bound_sweep(&domains, family, &cfg) {
        Ok(rep) => {
            for (e, cands) in &rep.candidates {
                for c in cands {
                    ctx.row(Some(*e), format!("{}_orthogonality_ratio", c.name), c.orthogonality_ratio);
                    ctx.row(Some(*e), format!("{}_impermeability_ratio", c.name), c.impermeability_ratio);
                    ctx.row(Some(*e), format!("{}_admissible", c.name), if c.admissible { 1.0 } else { 0.0 });
                }
            }
            for &(e, r) in &rep.scaling.pairs {
                ctx.row(Some(e), "rayleigh_max", r);
                ctx.row(Some(e), "korn_constant_bound", r.sqrt());
            }
            ctx.row(None, "rayleigh_max_slope", rep.scaling.slope);
            let checks = vec![
                Check::decay("rayleigh_max", rep.scaling.pairs.clone(), None, Some(-0.8)),
                Check::decay("korn_constant_bound", rep.scaling.pairs.iter().map(|&(e, r)| (e, r.sqrt())).collect(), Some(-1.2), Some(-0.8)),
            ];
            ctx.suite(&format!("korn_sweep_{}", cfg.mode.tag()), checks);
        }
        Err(e) => ctx.suite(&format!("korn_sweep_{}", cfg.mode.tag()), vec![failed("admissible_family", &e)]),
    }
    Ok(())
}

fn run_korn_eigen(ctx: &mut Ctx) -> Result<()> {
    let cfg = KornConfig { nu: ctx.cfg.nu, ..ctx.cfg.korn };
    let bare = KornConfig { mode: OrthMode::None, ..cfg };
    let mut deflated = Vec::new();
    let mut checks = Vec::new();
    for dom in ctx.domains()? {
        let e = dom.eps();
        let est = korn_eigen_estimate(&dom, &cfg)?;
        ctx.row(Some(e), "lambda_max", est.lambda_max);
        ctx.row(Some(e), "deflated_dimension", est.deflated as f64);
        ctx.row(Some(e), "reduced_size", est.reduced_size as f64);
        deflated.push((e, est.lambda_max));
        match korn_eigen_estimate(&dom, &bare) {
            Err(Error::SingularA { min, mean }) => {
                ctx.row(Some(e), "undeflated_singular", 1.0);
                checks.push(flag(&format!("undeflated@{e}"), true, format!("SingularA: min {min:e}, mean {mean:e}")));
            }
            Ok(b) => {
                ctx.row(Some(e), "undeflated_singular", 0.0);
                ctx.row(Some(e), "lambda_max_undeflated", b.lambda_max);
                let ratio = b.lambda_max / est.lambda_max;
                checks.push(flag(&format!("undeflated@{e}"), ratio >= 100.0, format!("undeflated / deflated = {ratio}")));
            }
            Err(err) => return Err(err),
        }
    }
    let degree = cfg.degree as f64;
    ctx.row(None, "trial_degree", degree);
    checks.insert(0, Check::uniform("lambda_max_uniform", deflated, 3.0));
    ctx.suite(&format!("korn_eigen_{}", cfg.mode.tag()), checks);
    Ok(())
}

/// Norm scalings of the counterexample field built from the configured
/// Killing field, with its orthogonality diagnostics.
fn run_counterexample(ctx: &mut Ctx) -> Result<()> {
    let v = ctx.rigid();
    let (mut h1, mut strain, mut ray, mut bound, mut orth, mut beta) = (vec![], vec![], vec![], vec![], vec![], vec![]);
    for dom in ctx.domains()? {
        let e = dom.eps();
        let u = match CounterexampleField::new(&dom, v) {
            Ok(u) => u,
            Err(err) => {
                ctx.suite("counterexample_scaling", vec![failed("killing_field", &err)]);
                return Ok(());
            }
        };
        let n = norms(&dom, &u)?;
        let imp = (n.impermeability / n.boundary_total()).sqrt();
        let r = n.h1() / n.strain;
        let reps = constraint_fields(&dom, OrthMode::AgainstReps)?;
        let o = orthogonality_ratio(&dom, &u, &reps)?;
        let b = inner_l2(&dom, &u, &v)? / (n.l2.sqrt() * inner_l2(&dom, &v, &v)?.sqrt());
        ctx.row(Some(e), "h1_norm", n.h1().sqrt());
        ctx.row(Some(e), "strain_norm", n.strain.sqrt());
        ctx.row(Some(e), "rayleigh", r);
        ctx.row(Some(e), "korn_constant_bound", r.sqrt());
        ctx.row(Some(e), "impermeability_ratio", imp);
        ctx.row(Some(e), "orthogonality_R_eps", o);
        ctx.row(Some(e), "beta_star", b);
        h1.push((e, n.h1().sqrt()));
        strain.push((e, n.strain.sqrt()));
        ray.push((e, r));
        bound.push((e, r.sqrt()));
        orth.push(o);
        beta.push((e, b));
    }
    let monotone = beta.windows(2).all(|w| w[1].1 > w[0].1);
    let mut checks = vec![
        Check::decay("h1_norm", h1, Some(0.4), Some(0.6)),
        Check::decay("strain_norm", strain, Some(1.4), Some(1.6)),
        Check::decay("rayleigh", ray, None, Some(-0.8)),
        Check::decay("korn_constant_bound", bound, Some(-1.2), Some(-0.8)),
        Check::residual("orthogonality_R_eps", &orth, 1e-8),
    ];
    let mut bc = flag("beta_star_increasing", monotone, format!("{beta:?}"));
    bc.values = beta;
    checks.push(bc);
    for c in &checks {
        if let Some(s) = c.slope {
            ctx.row(None, format!("{}_slope", c.name), s);
        }
    }
    ctx.suite("counterexample_scaling", checks);
    Ok(())
}

/// Runs the configured experiment. Numerical errors become suite failures
/// in the summary rather than aborting the run.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let start = Instant::now();
    let mut ctx = Ctx { cfg, surface: cfg.surface.build(), rows: Vec::new(), slopes: BTreeMap::new(), suites: Vec::new() };
    let res = match cfg.experiment {
        Experiment::Identities => run_identities(&mut ctx),
        Experiment::Cov => run_cov(&mut ctx),
        Experiment::Comparisons => run_comparisons(&mut ctx),
        Experiment::Inequalities => run_inequalities(&mut ctx),
        Experiment::Symmetry => run_symmetry(&mut ctx),
        Experiment::KornSweep => run_korn_sweep(&mut ctx),
        Experiment::KornEigen => run_korn_eigen(&mut ctx),
        Experiment::CounterexampleScaling => run_counterexample(&mut ctx),
    };
    if let Err(e) = res {
        ctx.suite(cfg.experiment.tag(), vec![failed("run", &e)]);
    }
    let mut failures = Vec::new();
    for s in &ctx.suites {
        for c in s.checks.iter().filter(|c| !c.passed) {
            let note = c.note.clone().unwrap_or_default();
            let what = match (c.slope, c.band, c.tolerance) {
                (Some(sl), Some((lo, hi)), _) => format!("slope {sl} outside [{}, {}]", bound_str(lo), bound_str(hi)),
                (_, _, Some(tol)) => format!("max residual {} vs tolerance {}", c.max_residual, format_value(tol)),
                _ => note.clone(),
            };
            let why = if note.is_empty() || what == note { String::new() } else { format!(" ({note})") };
            failures.push(format!("{}/{}: {what}{why}", s.suite, c.name));
        }
    }
    let passed = failures.is_empty();
    let summary = Summary {
        experiment: cfg.experiment,
        surface: cfg.surface.clone(),
        profile: cfg.profile_name.clone(),
        seed: cfg.seed,
        resolution: cfg.resolution,
        eps: cfg.eps.clone(),
        slopes: ctx.slopes,
        suites: ctx.suites,
        passed,
        failures,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    Ok(RunOutcome { rows: ctx.rows, summary })
}

fn bound_str(b: Option<f64>) -> String {
    b.map_or_else(|| "unbounded".into(), format_value)
}

/// Writes `results.csv` and `summary.json` into `dir`.
pub fn write_outputs(outcome: &RunOutcome, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("results.csv"), render_csv(&outcome.rows)?)?;
    let json = serde_json::to_string_pretty(&outcome.summary).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(dir.join("summary.json"), json + "\n")?;
    Ok(())
}
