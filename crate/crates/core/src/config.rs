//! Line-based experiment configuration.
//!
//! ```text
//! # comment
//! experiment = counterexample_scaling
//! surface = sphere
//! profile = as_example
//! eps = 0.2, 0.1, 0.05, 0.025
//! resolution = 32x64x8
//! seed = 1
//! ```
//!
//! Profiles are either a preset name (`shell`, `as_example`,
//! `nas_example`) or polynomials of total degree at most two:
//! `profile = poly: g0 = 1*y3; g1 = 2 + 1*y2`, or the separate keys
//! `g0 = poly: ...` and `g1 = poly: ...`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::korn::{KornConfig, OrthMode};
use crate::scalar::QuadPoly;
use crate::surface::{PeanutProfile, SpheroidProfile, Surface};
use crate::thin_domain::{DomainResolution, ProfilePair};
use crate::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Identities,
    Cov,
    Comparisons,
    Inequalities,
    Symmetry,
    KornSweep,
    KornEigen,
    CounterexampleScaling,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Identities,
        Experiment::Cov,
        Experiment::Comparisons,
        Experiment::Inequalities,
        Experiment::Symmetry,
        Experiment::KornSweep,
        Experiment::KornEigen,
        Experiment::CounterexampleScaling,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Experiment::Identities => "identities",
            Experiment::Cov => "cov",
            Experiment::Comparisons => "comparisons",
            Experiment::Inequalities => "inequalities",
            Experiment::Symmetry => "symmetry",
            Experiment::KornSweep => "korn_sweep",
            Experiment::KornEigen => "korn_eigen",
            Experiment::CounterexampleScaling => "counterexample_scaling",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.tag() == s)
    }

    /// Minimum number of eps values the experiment needs.
    fn min_eps(&self) -> usize {
        match self {
            Experiment::Identities => 0,
            Experiment::Cov | Experiment::Symmetry => 1,
            _ => 3,
        }
    }
}

/// Surface preset with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceSpec {
    Sphere { radius: f64 },
    Torus { major: f64, minor: f64 },
    Ellipsoid { axes: [f64; 3] },
    Spheroid { equatorial: f64, polar: f64 },
    Peanut { bulge: f64 },
}

impl SurfaceSpec {
    pub fn build(&self) -> Surface {
        match *self {
            SurfaceSpec::Sphere { radius } => Surface::sphere(radius),
            SurfaceSpec::Torus { major, minor } => Surface::torus(major, minor),
            SurfaceSpec::Ellipsoid { axes } => Surface::ellipsoid(axes[0], axes[1], axes[2]),
            SurfaceSpec::Spheroid { equatorial, polar } => Surface::revolution(Arc::new(SpheroidProfile { equatorial, polar })),
            SurfaceSpec::Peanut { bulge } => Surface::revolution(Arc::new(PeanutProfile { bulge })),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SurfaceSpec::Sphere { .. } => "sphere",
            SurfaceSpec::Torus { .. } => "torus",
            SurfaceSpec::Ellipsoid { .. } => "ellipsoid",
            SurfaceSpec::Spheroid { .. } => "spheroid",
            SurfaceSpec::Peanut { .. } => "peanut",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub surface: SurfaceSpec,
    #[serde(skip)]
    pub profile: ProfilePair,
    pub profile_name: String,
    pub eps: Vec<f64>,
    pub gamma: [f64; 2],
    pub nu: f64,
    pub resolution: DomainResolution,
    pub seed: u64,
    pub output: Option<PathBuf>,
    /// Random sample count for the identity suite.
    pub samples: usize,
    /// Monte-Carlo samples for the volume oracle; 0 disables it.
    pub mc_samples: usize,
    /// Node stride in the comparison suite.
    pub stride: usize,
    /// Rotation axis of the Killing field behind the counterexample.
    pub rotation: [f64; 3],
    pub korn: KornConfig,
    pub expected_dimension: Option<usize>,
    /// Smallest `g1 - g0` over the surface quadrature nodes.
    pub min_thickness: f64,
}

const KEYS: [&str; 24] = [
    "experiment",
    "surface",
    "radius",
    "major",
    "minor",
    "axes",
    "equatorial",
    "polar",
    "bulge",
    "profile",
    "g0",
    "g1",
    "eps",
    "gamma0",
    "gamma1",
    "nu",
    "resolution",
    "seed",
    "output",
    "samples",
    "mc_samples",
    "stride",
    "rotation",
    "orthogonality",
];

const KORN_KEYS: [&str; 4] = ["beta", "degree", "eta", "expected_dimension"];

/// Parses a polynomial such as `2 + 1*y2 - 0.5*y1*y3 + y3^2`; terms may
/// also be separated by commas.
pub fn parse_poly(text: &str) -> std::result::Result<QuadPoly, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    let chars: Vec<char> = s.chars().collect();
    for (k, &c) in chars.iter().enumerate() {
        let prev = if k > 0 { Some(chars[k - 1]) } else { None };
        let exponent_sign = matches!(prev, Some('e') | Some('E')) && k >= 2 && chars[k - 2].is_ascii_digit();
        match c {
            ',' => terms.push(std::mem::take(&mut cur)),
            '+' | '-' if !exponent_sign && !matches!(prev, None | Some('*') | Some(',') | Some('+') | Some('-')) => {
                terms.push(std::mem::take(&mut cur));
                if c == '-' {
                    cur.push('-');
                }
            }
            _ => cur.push(c),
        }
    }
    terms.push(cur);
    let mut p = QuadPoly::zero();
    for t in terms {
        let t = t.trim_start_matches('+');
        if t.is_empty() {
            return Err("empty term".into());
        }
        let (sign, body) = match t.strip_prefix('-') {
            Some(rest) => (-1.0, rest),
            None => (1.0, t),
        };
        let mut coef = sign;
        let mut vars: Vec<usize> = Vec::new();
        for factor in body.split('*') {
            if let Some(v) = factor.strip_prefix('y') {
                let (idx, pow) = match v.split_once('^') {
                    Some((i, e)) => (i, e.parse::<usize>().map_err(|_| format!("bad exponent in `{factor}`"))?),
                    None => (v, 1),
                };
                let i = match idx {
                    "1" => 0,
                    "2" => 1,
                    "3" => 2,
                    _ => return Err(format!("unknown variable `{factor}` (expected y1, y2 or y3)")),
                };
                vars.extend(std::iter::repeat(i).take(pow));
            } else {
                coef *= factor.parse::<f64>().map_err(|_| format!("bad factor `{factor}`"))?;
            }
        }
        if !coef.is_finite() {
            return Err(format!("non-finite coefficient in `{t}`"));
        }
        p = match vars.as_slice() {
            [] => p.plus_constant(coef),
            [i] => p.plus_linear(*i, coef),
            [i, j] => p.plus_quadratic(*i, *j, coef),
            _ => return Err(format!("term `{t}` has degree above 2")),
        };
    }
    Ok(p)
}

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::ParseError { line, reason: reason.into() }
}

fn invalid(key: &str, reason: impl Into<String>) -> Error {
    Error::ValidationError { key: key.into(), reason: reason.into() }
}

/// `N1xN2xNr`.
pub fn parse_resolution(s: &str) -> std::result::Result<DomainResolution, String> {
    let parts: Vec<&str> = s.trim().split(['x', 'X']).collect();
    if parts.len() != 3 {
        return Err(format!("expected N1xN2xNr, got `{s}`"));
    }
    let mut n = [0usize; 3];
    for (k, p) in parts.iter().enumerate() {
        n[k] = p.trim().parse().map_err(|_| format!("bad resolution component `{p}`"))?;
        if n[k] == 0 {
            return Err("resolution components must be positive".into());
        }
    }
    Ok(DomainResolution::new(n[0], n[1], n[2]))
}

struct Entry {
    line: usize,
    value: String,
}

struct Entries(BTreeMap<String, Entry>);

impl Entries {
    fn get(&self, key: &str) -> Option<&Entry> {
        self.0.get(key)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(e) => e.value.parse::<T>().map(Some).map_err(|_| parse_err(e.line, format!("`{key}`: cannot parse `{}`", e.value))),
        }
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.get(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>().map_err(|_| parse_err(e.line, format!("`{key}`: cannot parse `{t}`"))))
                .collect::<Result<Vec<_>>>()
                .map(Some),
        }
    }

    fn vec3(&self, key: &str) -> Result<Option<[f64; 3]>> {
        match self.list(key)? {
            None => Ok(None),
            Some(v) if v.len() == 3 => Ok(Some([v[0], v[1], v[2]])),
            Some(_) => Err(parse_err(self.get(key).unwrap().line, format!("`{key}` needs three numbers"))),
        }
    }
}

fn poly_value(e: &Entry, key: &str) -> Result<QuadPoly> {
    let body = e.value.trim();
    let body = body.strip_prefix("poly:").ok_or_else(|| parse_err(e.line, format!("`{key}` must start with `poly:`")))?;
    parse_poly(body).map_err(|r| parse_err(e.line, format!("`{key}`: {r}")))
}

fn parse_profile(entries: &Entries) -> Result<ProfilePair> {
    let separate = (entries.get("g0"), entries.get("g1"));
    match (entries.get("profile"), separate) {
        (Some(_), (Some(_), _)) | (Some(_), (_, Some(_))) => Err(invalid("profile", "give either `profile` or `g0`/`g1`, not both")),
        (None, (Some(a), Some(b))) => Ok(ProfilePair::new("custom", poly_value(a, "g0")?, poly_value(b, "g1")?)),
        (None, (Some(_), None)) => Err(invalid("g1", "missing")),
        (None, (None, Some(_))) => Err(invalid("g0", "missing")),
        (None, (None, None)) => Ok(ProfilePair::shell()),
        (Some(e), _) => {
            let v = e.value.trim();
            match v {
                "shell" => Ok(ProfilePair::shell()),
                "as_example" => Ok(ProfilePair::as_example()),
                "nas_example" => Ok(ProfilePair::nas_example()),
                _ => {
                    let body = v
                        .strip_prefix("poly:")
                        .ok_or_else(|| invalid("profile", format!("unknown profile `{v}`")))?;
                    let mut g = [None, None];
                    for part in body.split(';') {
                        let (k, p) = part.split_once('=').ok_or_else(|| parse_err(e.line, "expected `g0 = ...; g1 = ...`"))?;
                        let idx = match k.trim() {
                            "g0" => 0,
                            "g1" => 1,
                            other => return Err(parse_err(e.line, format!("unknown profile component `{other}`"))),
                        };
                        g[idx] = Some(parse_poly(p).map_err(|r| parse_err(e.line, format!("`{}`: {r}", k.trim())))?);
                    }
                    match g {
                        [Some(g0), Some(g1)] => Ok(ProfilePair::new("custom", g0, g1)),
                        _ => Err(invalid("profile", "both g0 and g1 are required")),
                    }
                }
            }
        }
    }
}

fn parse_surface(entries: &Entries) -> Result<SurfaceSpec> {
    let name = entries.get("surface").map(|e| e.value.trim().to_string()).unwrap_or_else(|| "sphere".into());
    let num = |k: &str, d: f64| -> Result<f64> {
        let v = entries.parsed::<f64>(k)?.unwrap_or(d);
        if !(v.is_finite() && v > 0.0) {
            return Err(invalid(k, "must be positive"));
        }
        Ok(v)
    };
    let spec = match name.as_str() {
        "sphere" => SurfaceSpec::Sphere { radius: num("radius", 1.0)? },
        "torus" | "torus_of_revolution" => {
            let (major, minor) = (num("major", 2.0)?, num("minor", 0.5)?);
            if major <= minor {
                return Err(invalid("minor", "torus needs major > minor"));
            }
            SurfaceSpec::Torus { major, minor }
        }
        "ellipsoid" | "triaxial_ellipsoid" => {
            let axes = entries.vec3("axes")?.unwrap_or([1.0, 0.8, 0.6]);
            if axes.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
                return Err(invalid("axes", "must be positive"));
            }
            SurfaceSpec::Ellipsoid { axes }
        }
        "spheroid" | "revolution_profile" => SurfaceSpec::Spheroid { equatorial: num("equatorial", 1.0)?, polar: num("polar", 0.7)? },
        "peanut" => {
            let bulge = entries.parsed::<f64>("bulge")?.unwrap_or(0.2);
            if !(bulge.abs() < 0.3) {
                return Err(invalid("bulge", "must satisfy |bulge| < 0.3"));
            }
            SurfaceSpec::Peanut { bulge }
        }
        other => return Err(invalid("surface", format!("unknown surface `{other}`"))),
    };
    Ok(spec)
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut map = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| parse_err(line, "expected `key = value`"))?;
        let key = key.trim();
        if !KEYS.contains(&key) && !KORN_KEYS.contains(&key) {
            return Err(parse_err(line, format!("unknown key `{key}`")));
        }
        if map.contains_key(key) {
            return Err(parse_err(line, format!("duplicate key `{key}`")));
        }
        map.insert(key.to_string(), Entry { line, value: value.trim().to_string() });
    }
    let entries = Entries(map);

    let experiment = match entries.get("experiment") {
        None => return Err(invalid("experiment", "missing")),
        Some(e) => Experiment::parse(e.value.trim()).ok_or_else(|| invalid("experiment", format!("unknown experiment `{}`", e.value)))?,
    };
    let surface = parse_surface(&entries)?;
    let profile = parse_profile(&entries)?;

    let eps = entries.list("eps")?;
    if eps.as_ref().is_some_and(|v| v.is_empty()) {
        return Err(invalid("eps", "empty list"));
    }
    let eps = eps.unwrap_or_default();
    if eps.len() < experiment.min_eps() {
        return Err(invalid("eps", format!("{} needs at least {} values", experiment.tag(), experiment.min_eps())));
    }
    if eps.iter().any(|e| !(*e > 0.0 && *e <= 1.0)) {
        return Err(invalid("eps", "values must lie in (0, 1]"));
    }
    if eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("eps", "must be strictly decreasing"));
    }

    let gamma0 = entries.parsed::<f64>("gamma0")?.unwrap_or(0.0);
    let gamma1 = entries.parsed::<f64>("gamma1")?.unwrap_or(0.0);
    if !(gamma0 >= 0.0 && gamma1 >= 0.0) {
        return Err(invalid("gamma0", "friction coefficients must be non-negative"));
    }
    let nu = entries.parsed::<f64>("nu")?.unwrap_or(1.0);
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(invalid("nu", "must be positive"));
    }
    let resolution = match entries.get("resolution") {
        None => DomainResolution::default(),
        Some(e) => parse_resolution(&e.value).map_err(|r| parse_err(e.line, r))?,
    };
    let seed = entries.parsed::<u64>("seed")?.unwrap_or(0);
    let output = entries.get("output").map(|e| PathBuf::from(e.value.trim()));
    let samples = entries.parsed::<usize>("samples")?.unwrap_or(100);
    if experiment == Experiment::Identities && samples < 50 {
        return Err(invalid("samples", "at least 50 samples are required"));
    }
    let mc_samples = entries.parsed::<usize>("mc_samples")?.unwrap_or(0);
    let stride = entries.parsed::<usize>("stride")?.unwrap_or(1).max(1);
    let rotation = entries.vec3("rotation")?.unwrap_or([1.0, 0.0, 0.0]);
    if Vec3::from(rotation).norm() == 0.0 {
        return Err(invalid("rotation", "axis must be nonzero"));
    }
    let mut korn = KornConfig { nu, ..KornConfig::default() };
    if let Some(e) = entries.get("orthogonality") {
        korn.mode = OrthMode::parse(e.value.trim()).ok_or_else(|| invalid("orthogonality", format!("unknown mode `{}`", e.value)))?;
    }
    if let Some(b) = entries.parsed::<f64>("beta")? {
        korn.beta = b;
    }
    if let Some(d) = entries.parsed::<u32>("degree")? {
        korn.degree = d;
    }
    korn.eta = entries.parsed::<f64>("eta")?;
    korn.validate()?;
    let expected_dimension = entries.parsed::<usize>("expected_dimension")?;

    let profile_name = profile.name.clone();
    ExperimentConfig {
        experiment,
        surface,
        profile,
        profile_name,
        eps,
        gamma: [gamma0, gamma1],
        nu,
        resolution,
        seed,
        output,
        samples,
        mc_samples,
        stride,
        rotation,
        korn,
        expected_dimension,
        min_thickness: f64::NAN,
    }
    .checked()
}

impl ExperimentConfig {
    /// Geometric checks: positive thickness at the quadrature nodes and
    /// containment of the largest domain in the tube. Re-run after
    /// changing the resolution.
    pub fn checked(mut self) -> Result<Self> {
        let surf = self.surface.build();
        let quad = surf.quadrature(self.resolution.surface);
        let g = self.profile.thickness();
        let min_thickness = quad.nodes.iter().map(|n| g.value(&n.frame.y)).fold(f64::INFINITY, f64::min);
        if !(min_thickness > 1e-6) {
            return Err(invalid("profile", format!("g1 - g0 must exceed 1e-6 at all nodes (min {min_thickness:e})")));
        }
        if let Some(&e0) = self.eps.first() {
            let p = &self.profile;
            let gmax = quad
                .nodes
                .iter()
                .map(|n| p.g0.value(&n.frame.y).abs().max(p.g1.value(&n.frame.y).abs()))
                .fold(0.0, f64::max);
            if !(e0 * gmax < surf.reach()) {
                return Err(invalid("eps", format!("eps * max|g| = {} reaches the tube radius {}", e0 * gmax, surf.reach())));
            }
        }
        self.min_thickness = min_thickness;
        Ok(self)
    }
}

pub fn load_config(path: &std::path::Path) -> Result<ExperimentConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(extra: &str) -> String {
        format!("experiment = comparisons\nsurface = sphere\nresolution = 16x32x4\n{extra}")
    }

    #[test]
    fn as_example_profile() {
        let c = parse_config(&base("profile = as_example\neps = 0.2,0.1,0.05")).unwrap();
        assert_eq!(c.profile.g0, QuadPoly::zero().plus_quadratic(2, 2, 1.0));
        assert_eq!(c.profile.g1, QuadPoly::constant(1.0).plus_quadratic(2, 2, 1.0));
        assert_eq!(c.eps, vec![0.2, 0.1, 0.05]);
        assert_eq!(c.experiment, Experiment::Comparisons);
    }

    #[test]
    fn empty_eps_is_rejected() {
        match parse_config(&base("eps =")) {
            Err(Error::ValidationError { key, .. }) => assert_eq!(key, "eps"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_config(&base("eps = 0.1, 0.2, 0.05")), Err(Error::ValidationError { .. })));
        assert!(matches!(parse_config(&base("eps = 1.5, 0.2, 0.05")), Err(Error::ValidationError { .. })));
    }

    #[test]
    fn poly_profile_matches_nas_example() {
        let c = parse_config(&base("profile = poly: g0 = 1*y3; g1 = 2 + 1*y2\neps = 0.2,0.1,0.05")).unwrap();
        let nas = ProfilePair::nas_example();
        assert_eq!(c.profile.g0, nas.g0);
        assert_eq!(c.profile.g1, nas.g1);
        // the minimum of y2 - y3 + 2 on the sphere is 2 - sqrt(2), attained
        // between nodes
        let exact = 2.0 - 2f64.sqrt();
        assert!(c.min_thickness >= exact - 1e-12 && c.min_thickness < exact + 0.01, "{}", c.min_thickness);
    }

    #[test]
    fn separate_poly_keys() {
        let c = parse_config(&base("g0 = poly: 0.1, 0.2*y3^2\ng1 = poly: 1.5 - 0.25*y1*y2\neps = 0.1,0.05,0.02")).unwrap();
        assert_eq!(c.profile.g0, QuadPoly::constant(0.1).plus_quadratic(2, 2, 0.2));
        assert_eq!(c.profile.g1, QuadPoly::constant(1.5).plus_quadratic(0, 1, -0.25));
    }

    #[test]
    fn polynomial_grammar() {
        let p = parse_poly("2 + y1 - 3*y2*y3 + 1e-1*y3^2").unwrap();
        let y = Vec3::new(0.3, -0.4, 0.5);
        let want = 2.0 + 0.3 - 3.0 * (-0.4) * 0.5 + 0.1 * 0.25;
        assert!((p.value(&y) - want).abs() < 1e-15);
        assert!(parse_poly("y1*y2*y3").is_err());
        assert!(parse_poly("y4").is_err());
        assert!(parse_poly("").is_err());
        assert_eq!(parse_poly("-y1").unwrap(), QuadPoly::zero().plus_linear(0, -1.0));
    }

    #[test]
    fn diagnostics_name_line_and_key() {
        match parse_config("experiment = cov\n\nbogus = 1\n") {
            Err(Error::ParseError { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_config("experiment = cov\neps 0.1\n") {
            Err(Error::ParseError { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_config("experiment = cov\neps = 0.1\neps = 0.2\n") {
            Err(Error::ParseError { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_config("experiment = flying\n") {
            Err(Error::ValidationError { key, .. }) => assert_eq!(key, "experiment"),
            other => panic!("{other:?}"),
        }
        match parse_config("experiment = cov\neps = 0.1\nprofile = poly: g0 = 0; g1 = y3\n") {
            Err(Error::ValidationError { key, .. }) => assert_eq!(key, "profile"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn comments_and_defaults() {
        let c = parse_config("# header\nexperiment = identities # trailing\n\nsurface = torus\n").unwrap();
        assert_eq!(c.surface, SurfaceSpec::Torus { major: 2.0, minor: 0.5 });
        assert!(c.eps.is_empty());
        assert_eq!(c.samples, 100);
        assert_eq!(c.resolution, DomainResolution::default());
    }

    #[test]
    fn tube_containment_checked_at_load() {
        let r = parse_config("experiment = cov\nsurface = torus\nprofile = shell\neps = 0.5\n");
        assert!(matches!(r, Err(Error::ValidationError { key, .. }) if key == "eps"));
    }

    #[test]
    fn resolution_grammar() {
        assert_eq!(parse_resolution("8x16x2").unwrap(), DomainResolution::new(8, 16, 2));
        assert!(parse_resolution("8x16").is_err());
        assert!(parse_resolution("0x16x2").is_err());
    }
}
