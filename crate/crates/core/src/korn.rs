//! Norms over thin domains, the bilinear form `a_eps`, Korn-type Rayleigh
//! quotients, scaling sweeps over explicit field families and a penalized
//! Galerkin estimate of the Korn constant.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{ExtendedRigidField, PolyVectorField, RigidField, VectorField};
use crate::symmetry::{fit_rigid_tangential, thin_domain_symmetry};
use crate::thin_domain::ThinDomain;
use crate::{Mat3, Vec3};

/// Squared norms of a field over the domain and its boundary sheets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct NormReport {
    pub l2: f64,
    pub grad: f64,
    pub strain: f64,
    pub boundary: [f64; 2],
    /// `||u . n_eps||^2` summed over both sheets.
    pub impermeability: f64,
}

impl NormReport {
    /// `||u||_{H^1}^2`.
    pub fn h1(&self) -> f64 {
        self.l2 + self.grad
    }

    pub fn boundary_total(&self) -> f64 {
        self.boundary[0] + self.boundary[1]
    }
}

fn ordered_sum<T: Copy>(items: &[T], f: impl Fn(T) -> f64) -> f64 {
    items.iter().fold(0.0, |acc, &x| acc + f(x))
}

/// Squared `L^2`, gradient, strain and boundary norms of `u`.
pub fn norms<U: VectorField + ?Sized>(dom: &ThinDomain, u: &U) -> Result<NormReport> {
    let vol: Vec<Result<(f64, f64, f64)>> = dom
        .volume_nodes()
        .par_iter()
        .map(|n| {
            let v = u.eval(&n.x)?;
            let j = u.jac(&n.x)?;
            let d = 0.5 * (j + j.transpose());
            Ok((n.weight * v.norm_squared(), n.weight * j.norm_squared(), n.weight * d.norm_squared()))
        })
        .collect();
    let vol: Vec<(f64, f64, f64)> = vol.into_iter().collect::<Result<_>>()?;
    let mut rep = NormReport {
        l2: ordered_sum(&vol, |t| t.0),
        grad: ordered_sum(&vol, |t| t.1),
        strain: ordered_sum(&vol, |t| t.2),
        ..Default::default()
    };
    for i in 0..2 {
        let bd: Vec<Result<(f64, f64)>> = dom
            .boundary_nodes(i)
            .par_iter()
            .map(|n| {
                let v = u.eval(&n.frame.x)?;
                Ok((n.weight * v.norm_squared(), n.weight * v.dot(&n.frame.normal).powi(2)))
            })
            .collect();
        let bd: Vec<(f64, f64)> = bd.into_iter().collect::<Result<_>>()?;
        rep.boundary[i] = ordered_sum(&bd, |t| t.0);
        rep.impermeability += ordered_sum(&bd, |t| t.1);
    }
    for v in [rep.l2, rep.grad, rep.strain, rep.boundary[0], rep.boundary[1], rep.impermeability] {
        crate::error::check_finite("norm", v)?;
    }
    Ok(rep)
}

/// `(u, w)_{L^2(Omega_eps)}`.
pub fn inner_l2<U: VectorField + ?Sized, W: VectorField + ?Sized>(dom: &ThinDomain, u: &U, w: &W) -> Result<f64> {
    let vals: Vec<Result<f64>> = dom
        .volume_nodes()
        .par_iter()
        .map(|n| Ok(n.weight * u.eval(&n.x)?.dot(&w.eval(&n.x)?)))
        .collect();
    let vals: Vec<f64> = vals.into_iter().collect::<Result<_>>()?;
    let s = ordered_sum(&vals, |v| v);
    crate::error::check_finite("inner product", s)?;
    Ok(s)
}

/// `a_eps(u1, u2) = 2 nu (D(u1), D(u2)) + sum_i gamma_i (u1, u2)_{Gamma_eps^i}`.
pub fn bilinear_form<U: VectorField + ?Sized, V: VectorField + ?Sized>(dom: &ThinDomain, u1: &U, u2: &V) -> Result<f64> {
    let vals: Vec<Result<f64>> = dom
        .volume_nodes()
        .par_iter()
        .map(|n| {
            let j1 = u1.jac(&n.x)?;
            let j2 = u2.jac(&n.x)?;
            let d1 = 0.5 * (j1 + j1.transpose());
            let d2 = 0.5 * (j2 + j2.transpose());
            Ok(n.weight * d1.dot(&d2))
        })
        .collect();
    let vals: Vec<f64> = vals.into_iter().collect::<Result<_>>()?;
    let mut total = 2.0 * dom.nu() * ordered_sum(&vals, |v| v);
    for i in 0..2 {
        let gamma = dom.gamma()[i];
        if gamma == 0.0 {
            continue;
        }
        let bd: Vec<Result<f64>> = dom
            .boundary_nodes(i)
            .par_iter()
            .map(|n| Ok(n.weight * u1.eval(&n.frame.x)?.dot(&u2.eval(&n.frame.x)?)))
            .collect();
        let bd: Vec<f64> = bd.into_iter().collect::<Result<_>>()?;
        total += gamma * ordered_sum(&bd, |v| v);
    }
    crate::error::check_finite("bilinear form", total)?;
    Ok(total)
}

/// `||u||_{H^1}^2 / ||D(u)||^2` from a norm report.
pub fn rayleigh_from(rep: &NormReport) -> Result<f64> {
    if !(rep.strain > 1e-14 * rep.h1()) {
        return Err(Error::RigidDegenerate);
    }
    Ok(rep.h1() / rep.strain)
}

pub fn rayleigh<U: VectorField + ?Sized>(dom: &ThinDomain, u: &U) -> Result<f64> {
    rayleigh_from(&norms(dom, u)?)
}

/// Which orthogonality condition admissible fields must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrthMode {
    None,
    /// Rigid displacements tangential on both boundary sheets.
    AgainstReps,
    /// Rigid displacements tangential on the surface and orthogonal to `grad_Gamma g`.
    AgainstRg,
    /// Constant extensions of the Killing fields in `K_g`.
    AgainstKgExtension,
}

impl OrthMode {
    pub fn tag(&self) -> &'static str {
        match self {
            OrthMode::None => "none",
            OrthMode::AgainstReps => "against_R_eps",
            OrthMode::AgainstRg => "against_R_g",
            OrthMode::AgainstKgExtension => "against_Kg_extension",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "none" => Some(OrthMode::None),
            "against_R_eps" => Some(OrthMode::AgainstReps),
            "against_R_g" => Some(OrthMode::AgainstRg),
            "against_Kg_extension" => Some(OrthMode::AgainstKgExtension),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KornConfig {
    /// Orthogonality slack in `[0, 1)`.
    pub beta: f64,
    pub mode: OrthMode,
    /// Impermeability penalty; `None` means `1e-4 eps`.
    pub eta: Option<f64>,
    /// Total degree of the polynomial trial space (at most 4).
    pub degree: u32,
    pub nu: f64,
}

impl Default for KornConfig {
    fn default() -> Self {
        KornConfig { beta: 0.5, mode: OrthMode::AgainstReps, eta: None, degree: 2, nu: 1.0 }
    }
}

impl KornConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0 && self.beta < 1.0) {
            return Err(Error::ValidationError { key: "beta".into(), reason: "must lie in [0, 1)".into() });
        }
        if let Some(eta) = self.eta {
            if !(eta > 0.0) {
                return Err(Error::ValidationError { key: "eta".into(), reason: "must be positive".into() });
            }
        }
        if self.degree == 0 || self.degree > 4 {
            return Err(Error::ValidationError { key: "degree".into(), reason: "must be 1..=4".into() });
        }
        if !(self.nu > 0.0) {
            return Err(Error::ValidationError { key: "nu".into(), reason: "must be positive".into() });
        }
        Ok(())
    }
}

/// The constraint fields selected by `mode` on `dom`.
pub fn constraint_fields(dom: &ThinDomain, mode: OrthMode) -> Result<Vec<Box<dyn VectorField>>> {
    let rigid_to_boxes = |fields: Vec<RigidField>| -> Vec<Box<dyn VectorField>> {
        fields.into_iter().map(|w| Box::new(w) as Box<dyn VectorField>).collect()
    };
    Ok(match mode {
        OrthMode::None => Vec::new(),
        OrthMode::AgainstReps => rigid_to_boxes(thin_domain_symmetry(dom)?.boundary.fields()),
        OrthMode::AgainstRg => {
            let g = dom.profiles().thickness();
            rigid_to_boxes(fit_rigid_tangential(dom.surface_quadrature(), &[g])?.fields())
        }
        OrthMode::AgainstKgExtension => {
            let g = dom.profiles().thickness();
            let cp = dom.closest_point_map();
            fit_rigid_tangential(dom.surface_quadrature(), &[g])?
                .fields()
                .into_iter()
                .map(|w| Box::new(ExtendedRigidField::new(&cp, w)) as Box<dyn VectorField>)
                .collect()
        }
    })
}

/// `||proj u|| / ||u||` with `proj` the `L^2` projection onto the span of `ws`.
pub fn orthogonality_ratio<U: VectorField + ?Sized>(dom: &ThinDomain, u: &U, ws: &[Box<dyn VectorField>]) -> Result<f64> {
    if ws.is_empty() {
        return Ok(0.0);
    }
    let k = ws.len();
    let mut gram = DMatrix::zeros(k, k);
    let mut rhs = DVector::zeros(k);
    for a in 0..k {
        for b in 0..=a {
            let v = inner_l2(dom, ws[a].as_ref(), ws[b].as_ref())?;
            gram[(a, b)] = v;
            gram[(b, a)] = v;
        }
        rhs[a] = inner_l2(dom, u, ws[a].as_ref())?;
    }
    let uu = inner_l2(dom, u, u)?;
    let coef = gram.clone().pseudo_inverse(1e-12 * gram.norm()).map_err(|e| Error::InvalidDomain(e.to_string()))? * &rhs;
    let proj_sq = rhs.dot(&coef).max(0.0);
    Ok((proj_sq / uu).sqrt())
}

/// Admissibility verdict for one candidate field.
#[derive(Debug, Clone, Serialize)]
pub struct Candidate {
    pub name: String,
    pub impermeability_ratio: f64,
    pub orthogonality_ratio: f64,
    pub admissible: bool,
    pub failure: Option<String>,
    pub rayleigh: Option<f64>,
    pub norms: NormReport,
}

/// Checks impermeability and the configured orthogonality condition.
pub fn assess<U: VectorField + ?Sized>(
    dom: &ThinDomain,
    name: &str,
    u: &U,
    constraints: &[Box<dyn VectorField>],
    config: &KornConfig,
) -> Result<Candidate> {
    let rep = norms(dom, u)?;
    let imp = (rep.impermeability / rep.boundary_total().max(f64::MIN_POSITIVE)).sqrt();
    let orth = orthogonality_ratio(dom, u, constraints)?;
    let mut failure = None;
    if !(imp < 1e-6) {
        failure = Some(format!("impermeability residual {imp:e} >= 1e-6"));
    } else if !(orth <= config.beta + 1e-10) {
        failure = Some(format!("orthogonality ratio {orth} > beta = {}", config.beta));
    }
    let rayleigh = rayleigh_from(&rep).ok();
    Ok(Candidate {
        name: name.into(),
        impermeability_ratio: imp,
        orthogonality_ratio: orth,
        admissible: failure.is_none(),
        failure,
        rayleigh,
        norms: rep,
    })
}

/// A log-log power-law fit.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub pairs: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
}

/// Least-squares fit of `log value = slope log eps + intercept`.
pub fn fit_scaling(pairs: &[(f64, f64)]) -> Result<ScalingReport> {
    if pairs.len() < 3 {
        return Err(Error::InsufficientSamples { got: pairs.len(), need: 3 });
    }
    for &(e, v) in pairs {
        if !(e > 0.0) {
            return Err(Error::NonPositiveValue(e));
        }
        if !(v > 0.0) {
            return Err(Error::NonPositiveValue(v));
        }
    }
    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidDomain("eps values must be distinct".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    Ok(ScalingReport { pairs: pairs.to_vec(), slope, intercept, residual_rms: (rss / n).sqrt() })
}

/// Field family evaluated on one domain: `(name, field)` pairs.
pub type Family = Vec<(String, Box<dyn VectorField>)>;

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub scaling: ScalingReport,
    /// Per eps, all candidates with their verdicts.
    pub candidates: Vec<(f64, Vec<Candidate>)>,
}

/// For each domain, the largest Rayleigh quotient over admissible members
/// of the family; fitted against eps.
pub fn korn_lower_bound_sweep<F>(domains: &[ThinDomain], family: F, config: &KornConfig) -> Result<SweepReport>
where
    F: Fn(&ThinDomain) -> Result<Family>,
{
    config.validate()?;
    let mut pairs = Vec::new();
    let mut all = Vec::new();
    for dom in domains {
        let constraints = constraint_fields(dom, config.mode)?;
        let mut best: Option<f64> = None;
        let mut cands = Vec::new();
        for (name, u) in family(dom)? {
            let c = assess(dom, &name, u.as_ref(), &constraints, config)?;
            if c.admissible {
                if let Some(r) = c.rayleigh {
                    best = Some(best.map_or(r, |b: f64| b.max(r)));
                }
            }
            cands.push(c);
        }
        match best {
            Some(b) => pairs.push((dom.eps(), b)),
            None => {
                let why: Vec<String> = cands
                    .iter()
                    .map(|c| format!("{}: {}", c.name, c.failure.clone().unwrap_or_else(|| "strain vanishes".into())))
                    .collect();
                return Err(Error::NoAdmissibleField(format!("eps = {}: {}", dom.eps(), why.join("; "))));
            }
        }
        all.push((dom.eps(), cands));
    }
    Ok(SweepReport { scaling: fit_scaling(&pairs)?, candidates: all })
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenEstimate {
    pub lambda_max: f64,
    pub degree: u32,
    pub basis_size: usize,
    /// Dimension after deflation and removal of `M`-null directions.
    pub reduced_size: usize,
    pub deflated: usize,
    pub eta: f64,
}

/// Per-node tabulation of the trial basis: values and Jacobians.
fn tabulate(basis: &[PolyVectorField], x: &Vec3) -> (Vec<Vec3>, Vec<Mat3>) {
    (basis.iter().map(|b| b.value(x)).collect(), basis.iter().map(|b| b.gradient(x)).collect())
}

/// Largest generalized eigenvalue of `M x = lambda A x` over vector
/// polynomials of total degree `<= config.degree`, with `M` the `H^1` Gram
/// matrix and `A` the strain Gram matrix plus `1/eta` times the boundary
/// normal-trace Gram matrix. Constraint fields of `config.mode` are removed
/// exactly (`L^2` orthogonality). This is an empirical envelope, not a
/// certified constant.
pub fn korn_eigen_estimate(dom: &ThinDomain, config: &KornConfig) -> Result<EigenEstimate> {
    config.validate()?;
    let basis = PolyVectorField::monomial_basis(config.degree);
    let nb = basis.len();
    let eta = config.eta.unwrap_or(1e-4 * dom.eps());
    let vol = dom.volume_nodes();
    // rows: 3 value components, 9 gradient entries, 6 strain entries
    let rows: Vec<(Vec<f64>, Vec<f64>, Vec<f64>)> = vol
        .par_iter()
        .map(|n| {
            let (vals, jacs) = tabulate(&basis, &n.x);
            let sw = n.weight.sqrt();
            let mut m = vec![0.0; 12 * nb];
            let mut s = vec![0.0; 6 * nb];
            let mut v = vec![0.0; 3 * nb];
            for b in 0..nb {
                for c in 0..3 {
                    m[c * nb + b] = sw * vals[b][c];
                    v[c * nb + b] = sw * vals[b][c];
                }
                for r in 0..3 {
                    for c in 0..3 {
                        m[(3 + 3 * r + c) * nb + b] = sw * jacs[b][(r, c)];
                    }
                }
                let d = 0.5 * (jacs[b] + jacs[b].transpose());
                let comps = [
                    d[(0, 0)],
                    d[(1, 1)],
                    d[(2, 2)],
                    std::f64::consts::SQRT_2 * d[(0, 1)],
                    std::f64::consts::SQRT_2 * d[(0, 2)],
                    std::f64::consts::SQRT_2 * d[(1, 2)],
                ];
                for (k, val) in comps.iter().enumerate() {
                    s[k * nb + b] = sw * val;
                }
            }
            (m, s, v)
        })
        .collect();
    let mrows = DMatrix::from_row_iterator(12 * vol.len(), nb, rows.iter().flat_map(|r| r.0.iter().copied()));
    let srows = DMatrix::from_row_iterator(6 * vol.len(), nb, rows.iter().flat_map(|r| r.1.iter().copied()));
    let vrows = DMatrix::from_row_iterator(3 * vol.len(), nb, rows.iter().flat_map(|r| r.2.iter().copied()));
    let m = mrows.transpose() * &mrows;
    let mut a = srows.transpose() * &srows;
    for i in 0..2 {
        let bn = dom.boundary_nodes(i);
        let brows: Vec<f64> = bn
            .iter()
            .flat_map(|n| {
                let sw = n.weight.sqrt();
                basis.iter().map(move |b| sw * b.value(&n.frame.x).dot(&n.frame.normal)).collect::<Vec<_>>()
            })
            .collect();
        let bm = DMatrix::from_row_slice(bn.len(), nb, &brows);
        a += (bm.transpose() * &bm) / eta;
    }
    // deflation: null space of the L2 functionals u -> (u, w_k)
    let constraints = constraint_fields(dom, config.mode)?;
    let mut z = DMatrix::identity(nb, nb);
    if !constraints.is_empty() {
        let k = constraints.len();
        let wrows: Vec<f64> = vol
            .par_iter()
            .map(|n| -> Result<Vec<f64>> {
                let sw = n.weight.sqrt();
                let mut out = Vec::with_capacity(3 * k);
                for c in 0..3 {
                    for w in &constraints {
                        out.push(sw * w.eval(&n.x)?[c]);
                    }
                }
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let wm = DMatrix::from_row_slice(3 * vol.len(), k, &wrows);
        let cmat = wm.transpose() * &vrows; // k x nb
        let svd = cmat.svd(false, true);
        let vt = svd.v_t.expect("requested V^T");
        let smax = svd.singular_values.max();
        let rank = svd.singular_values.iter().filter(|&&s| s > 1e-12 * smax).count();
        // complete V: null space = orthogonal complement of the row space
        let row_space = vt.rows(0, rank).transpose(); // nb x rank
        let proj = DMatrix::identity(nb, nb) - &row_space * row_space.transpose();
        let eig = nalgebra::SymmetricEigen::new(proj);
        let keep: Vec<usize> = (0..nb).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
        z = DMatrix::from_fn(nb, keep.len(), |r, c| eig.eigenvectors[(r, keep[c])]);
    }
    let deflated = nb - z.ncols();
    let mz = z.transpose() * &m * &z;
    let az = z.transpose() * &a * &z;
    let me = nalgebra::SymmetricEigen::new(mz);
    let mmax = me.eigenvalues.max();
    let keep: Vec<usize> = (0..me.eigenvalues.len()).filter(|&i| me.eigenvalues[i] > 1e-13 * mmax).collect();
    let t = DMatrix::from_fn(z.ncols(), keep.len(), |r, c| me.eigenvectors[(r, keep[c])] / me.eigenvalues[keep[c]].sqrt());
    let at = t.transpose() * az * &t;
    let at = 0.5 * (&at + at.transpose());
    let ae = nalgebra::SymmetricEigen::new(at.clone());
    let dim = keep.len();
    let amin = ae.eigenvalues.min();
    let mean = at.trace() / dim as f64;
    if !(amin >= 1e-12 * mean) {
        return Err(Error::SingularA { min: amin, mean });
    }
    Ok(EigenEstimate { lambda_max: 1.0 / amin, degree: config.degree, basis_size: nb, reduced_size: dim, deflated, eta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{CounterexampleField, LinearField, Scaled};
    use crate::surface::Surface;
    use crate::thin_domain::{DomainResolution, ProfilePair};
    use std::f64::consts::PI;

    fn shell(eps: f64) -> ThinDomain {
        ThinDomain::with_resolution(&Surface::unit_sphere(), ProfilePair::shell(), eps, DomainResolution::new(32, 64, 8)).unwrap()
    }

    #[test]
    fn zero_field_norms() {
        let zero = LinearField { a: Mat3::zeros(), b: Vec3::zeros() };
        assert_eq!(norms(&shell(0.1), &zero).unwrap(), NormReport::default());
    }

    #[test]
    fn rotation_l2_norm_matches_radial_reduction() {
        let w1 = RigidField::rotation(Vec3::x());
        let rep = norms(&shell(0.1), &w1).unwrap();
        let exact = (8.0 * PI / 3.0) * (1.1f64.powi(5) - 1.0) / 5.0;
        assert!((rep.l2 - exact).abs() < 1e-8 * exact);
        assert!(rep.strain < 1e-28);
        assert!(rep.impermeability < 1e-28);
        assert!(matches!(rayleigh(&shell(0.1), &w1), Err(Error::RigidDegenerate)));
        assert_eq!(bilinear_form(&shell(0.1), &w1, &w1).unwrap(), 0.0);
    }

    #[test]
    fn extension_of_killing_field_is_strained() {
        let dom = shell(0.1);
        let ext = ExtendedRigidField::new(&dom.closest_point_map(), RigidField::rotation(Vec3::z()));
        let rep = norms(&dom, &ext).unwrap();
        assert!(rep.strain > 1e-6 && rep.strain <= rep.grad);
    }

    #[test]
    fn identity_field_quotient() {
        let dom = shell(0.1);
        let id = LinearField::identity();
        let vol = dom.integrate_volume(|_| 1.0).unwrap();
        let xsq = dom.integrate_volume(|x| x.norm_squared()).unwrap();
        let q = rayleigh(&dom, &id).unwrap();
        assert!((q - (xsq + 3.0 * vol) / (3.0 * vol)).abs() < 1e-12 * q);
        let a = bilinear_form(&dom, &id, &id).unwrap();
        let rep = norms(&dom, &id).unwrap();
        assert!((a - 2.0 * rep.strain).abs() < 1e-12 * a);
        let scaled = Scaled { factor: -3.5, field: id };
        assert!((rayleigh(&dom, &scaled).unwrap() - q).abs() < 1e-12 * q);
    }

    #[test]
    fn bilinear_form_is_symmetric_with_friction() {
        let dom = shell(0.1).with_friction(0.3, 0.7).unwrap().with_viscosity(2.0).unwrap();
        let u = LinearField { a: Mat3::new(1.0, 2.0, 0.0, 0.0, -1.0, 0.5, 0.3, 0.0, 0.2), b: Vec3::x() };
        let v = PolyVectorField { terms: vec![(Vec3::new(1.0, 0.0, 2.0), [1, 1, 0])] };
        let a = bilinear_form(&dom, &u, &v).unwrap();
        let b = bilinear_form(&dom, &v, &u).unwrap();
        assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn fit_scaling_examples() {
        let r = fit_scaling(&[(0.1, 0.01), (0.2, 0.04), (0.4, 0.16)]).unwrap();
        assert!((r.slope - 2.0).abs() < 1e-12 && r.residual_rms < 1e-12);
        let r = fit_scaling(&[(0.1, 5.0), (0.2, 5.0), (0.4, 5.0)]).unwrap();
        assert!(r.slope.abs() < 1e-12);
        assert!(matches!(fit_scaling(&[(0.1, 1.0), (0.2, 0.0), (0.3, 1.0)]), Err(Error::NonPositiveValue(_))));
        assert!(fit_scaling(&[(0.1, 1.0), (0.2, 1.0)]).is_err());
    }

    #[test]
    fn counterexample_quotient_is_large() {
        let dom = ThinDomain::with_resolution(&Surface::unit_sphere(), ProfilePair::as_example(), 0.05, DomainResolution::new(32, 64, 8))
            .unwrap();
        let ve = CounterexampleField::new(&dom, RigidField::rotation(Vec3::x())).unwrap();
        assert!(rayleigh(&dom, &ve).unwrap() >= 10.0);
    }

    #[test]
    fn eigen_estimate_deflation() {
        let res = DomainResolution::new(12, 24, 3);
        let dom = ThinDomain::with_resolution(&Surface::unit_sphere(), ProfilePair::shell(), 0.1, res).unwrap();
        let cfg = KornConfig { mode: OrthMode::AgainstRg, degree: 1, ..Default::default() };
        // Degree 1 has no impermeable non-rigid mode, so every remaining
        // direction is penalty-dominated: finite and positive only.
        let d1 = korn_eigen_estimate(&dom, &cfg).unwrap();
        assert!(d1.lambda_max > 0.0 && d1.lambda_max.is_finite());
        assert_eq!(d1.deflated, 3);
        // Degree 2 contains the tangential fields (b . x)(a x x) with zero
        // penalty, for which the quotient is at least 1.
        let cfg = KornConfig { degree: 2, ..cfg };
        let est = korn_eigen_estimate(&dom, &cfg).unwrap();
        assert!(est.lambda_max >= 1.0 && est.lambda_max.is_finite());
        let none = KornConfig { mode: OrthMode::None, ..cfg };
        match korn_eigen_estimate(&dom, &none) {
            Err(Error::SingularA { .. }) => {}
            Ok(e) => assert!(e.lambda_max >= 100.0 * est.lambda_max),
            Err(e) => panic!("{e}"),
        }
    }
}
