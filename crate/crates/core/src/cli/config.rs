//! Experiment configuration read from TOML.
//!
//! Numeric values are strings holding exact literals (`"3"`, `"-2/7"`,
//! `"0.125"`, `"1e-6"`) so that the same file feeds both the exact algebra
//! and the floating-point experiments. Angles are given in units of `π`.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{Curve, GermCurve, Polynomial, Profile, SupportCurve, TrigSeries};
use crate::liecirc::{CoeffFn, Mode, Ring};
use crate::phase::{PhaseGrid, PhasePoint};
use crate::rational::{parse_rational, to_f64, Q};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

fn num(field: &str, text: &str) -> Result<f64, ConfigError> {
    exact(field, text).map(|x| to_f64(&x))
}

fn exact(field: &str, text: &str) -> Result<Q, ConfigError> {
    parse_rational(text).map_err(|e| invalid(format!("{field}: {e}")))
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    Support,
    Germ,
}

/// `support`: coefficients `a0, a1, b1, a2, b2, …` of
/// `h(φ) = a0 + Σ a_k cos kφ + b_k sin kφ`.
/// `germ`: coefficients `c0, c1, c2, …` of the graph `y = Σ c_i x^i` over
/// `|x| < half_width`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    #[serde(default)]
    pub file: Option<PathBuf>,
    #[serde(default = "default_kind")]
    pub kind: CurveKind,
    #[serde(default = "default_curve_coefficients")]
    pub coefficients: Vec<String>,
    #[serde(default)]
    pub half_width: Option<String>,
}

fn default_kind() -> CurveKind {
    CurveKind::Support
}

fn default_curve_coefficients() -> Vec<String> {
    strings(&["1"])
}

impl Default for CurveSpec {
    fn default() -> Self {
        Self {
            file: None,
            kind: default_kind(),
            coefficients: default_curve_coefficients(),
            half_width: None,
        }
    }
}

fn trig_series(field: &str, coeffs: &[String]) -> Result<TrigSeries, ConfigError> {
    let v = coeffs
        .iter()
        .map(|c| num(field, c))
        .collect::<Result<Vec<_>, _>>()?;
    let mut terms = Vec::new();
    if let Some(&a0) = v.first() {
        terms.push((0, a0, 0.0));
    }
    for (i, pair) in v[v.len().min(1)..].chunks(2).enumerate() {
        terms.push((i as u32 + 1, pair[0], pair.get(1).copied().unwrap_or(0.0)));
    }
    Ok(TrigSeries::new(terms))
}

/// The same layout read exactly, for the algebra.
pub fn trig_coeff(field: &str, coeffs: &[String]) -> Result<CoeffFn, ConfigError> {
    let mut terms = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        let x = exact(field, c)?;
        let mode = match i {
            0 => Mode::Cos(0),
            i if i % 2 == 1 => Mode::Cos((i as u32 + 1) / 2),
            i => Mode::Sin(i as u32 / 2),
        };
        terms.push((mode, x));
    }
    CoeffFn::from_terms(Ring::CircleTrig, terms).map_err(|e| invalid(format!("{field}: {e}")))
}

impl CurveSpec {
    /// Follows `file` once; the referenced file holds the same keys at top level.
    pub fn resolve(&self, base: &Path) -> Result<CurveSpec, ConfigError> {
        let Some(file) = &self.file else {
            return Ok(self.clone());
        };
        let path = base.join(file);
        let text = std::fs::read_to_string(&path).map_err(|source| ConfigError::Read {
            path: path.clone(),
            source,
        })?;
        let mut inner: CurveSpec = toml::from_str(&text).map_err(|e| ConfigError::Parse {
            path: path.clone(),
            message: e.to_string(),
        })?;
        if inner.file.is_some() {
            return Err(invalid("curve files cannot reference further curve files"));
        }
        inner.file = Some(path);
        Ok(inner)
    }

    pub fn build(&self) -> Result<Curve, ConfigError> {
        match self.kind {
            CurveKind::Support => {
                if self.half_width.is_some() {
                    return Err(invalid("curve.half_width applies to germs only"));
                }
                let h = trig_series("curve.coefficients", &self.coefficients)?;
                Ok(Curve::Support(
                    SupportCurve::new(h).map_err(|e| invalid(format!("curve: {e}")))?,
                ))
            }
            CurveKind::Germ => {
                let coeffs = self
                    .coefficients
                    .iter()
                    .map(|c| num("curve.coefficients", c))
                    .collect::<Result<Vec<_>, _>>()?;
                let half = self
                    .half_width
                    .as_deref()
                    .ok_or_else(|| invalid("germ curves need curve.half_width"))?;
                let g = GermCurve::new(Polynomial::new(coeffs), num("curve.half_width", half)?)
                    .map_err(|e| invalid(format!("curve: {e}")))?;
                Ok(Curve::Germ(g))
            }
        }
    }

    /// Profiles follow the layout of the curve kind.
    pub fn profile(&self, coeffs: &[String]) -> Result<Profile, ConfigError> {
        match self.kind {
            CurveKind::Support => Ok(Profile::Trig(trig_series("profile.coefficients", coeffs)?)),
            CurveKind::Germ => Ok(Profile::Poly(Polynomial::new(
                coeffs
                    .iter()
                    .map(|c| num("profile.coefficients", c))
                    .collect::<Result<Vec<_>, _>>()?,
            ))),
        }
    }
}

/// Counts and ranges of the phase grid. Unset fields take command defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub s_count: Option<usize>,
    pub theta_count: Option<usize>,
    /// Bounds in units of `π`.
    pub theta_min: Option<String>,
    pub theta_max: Option<String>,
    /// Arclength range; closed curves default to the full period, germs to
    /// the middle half of the domain.
    pub s_min: Option<String>,
    pub s_max: Option<String>,
    /// Extra uniformly random points inside the same ranges.
    pub random_points: Option<usize>,
}

impl GridSpec {
    pub fn with_defaults(&self, counts: (usize, usize), theta: (&str, &str)) -> GridSpec {
        GridSpec {
            s_count: Some(self.s_count.unwrap_or(counts.0)),
            theta_count: Some(self.theta_count.unwrap_or(counts.1)),
            theta_min: Some(self.theta_min.clone().unwrap_or_else(|| theta.0.into())),
            theta_max: Some(self.theta_max.clone().unwrap_or_else(|| theta.1.into())),
            s_min: self.s_min.clone(),
            s_max: self.s_max.clone(),
            random_points: Some(self.random_points.unwrap_or(0)),
        }
    }

    /// Expects `with_defaults` to have run.
    pub fn points(&self, curve: &Curve, seed: u64) -> Result<Vec<PhasePoint>, ConfigError> {
        use rand::{Rng, SeedableRng};

        let s_count = self.s_count.unwrap_or(0);
        let theta_count = self.theta_count.unwrap_or(0);
        if s_count == 0 || theta_count == 0 {
            return Err(invalid("grid counts must be positive"));
        }
        let pi_units = |f: &str, v: &Option<String>| -> Result<f64, ConfigError> {
            num(f, v.as_deref().unwrap_or("0")).map(|x| x * PI)
        };
        let th = (
            pi_units("grid.theta_min", &self.theta_min)?,
            pi_units("grid.theta_max", &self.theta_max)?,
        );
        if !(0.0 < th.0 && th.0 <= th.1 && th.1 < PI) {
            return Err(invalid("grid theta range must satisfy 0 < min ≤ max < 1 (units of π)"));
        }
        let closed_len = curve.length();
        let explicit = |f: &str, v: &Option<String>| v.as_deref().map(|t| num(f, t)).transpose();
        let (lo, hi) = (explicit("grid.s_min", &self.s_min)?, explicit("grid.s_max", &self.s_max)?);
        let mut grid = match (closed_len, lo, hi) {
            (Some(len), None, None) => PhaseGrid::closed(len, s_count, th, theta_count),
            (_, lo, hi) => {
                let default_half = match curve {
                    Curve::Germ(g) => 0.5 * g.arclength(g.half_width()),
                    Curve::Support(_) => PI,
                };
                let lo = lo.unwrap_or(-default_half);
                let hi = hi.unwrap_or(default_half);
                if !(lo <= hi) {
                    return Err(invalid("grid s range is empty"));
                }
                PhaseGrid {
                    s_min: lo,
                    s_max: hi,
                    s_count,
                    theta_min: th.0,
                    theta_max: th.1,
                    theta_count,
                }
            }
        };
        let mut pts = grid.points();
        let extra = self.random_points.unwrap_or(0);
        if extra > 0 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            if grid.s_max <= grid.s_min {
                grid.s_max = grid.s_min + f64::EPSILON;
            }
            for _ in 0..extra {
                let s = rng.gen_range(grid.s_min..=grid.s_max);
                let t = if th.1 > th.0 { rng.gen_range(th.0..=th.1) } else { th.0 };
                pts.push(PhasePoint::new(s, t));
            }
        }
        Ok(pts)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub perline: String,
    pub symplectic: String,
    /// Points with `|cos θ| > 1 − margin` are flagged and skipped.
    pub margin: String,
    /// Relative and absolute tolerance of reference flows.
    pub flow: String,
    pub slope_min: String,
    pub slope_max: String,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            perline: "1e-6".into(),
            symplectic: "1e-6".into(),
            margin: "1e-6".into(),
            flow: "1e-12".into(),
            slope_min: "0.9".into(),
            slope_max: "1.1".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PerlineSpec {
    pub eps_schedule: Vec<String>,
}

impl Default for PerlineSpec {
    fn default() -> Self {
        Self {
            eps_schedule: strings(&["1e-2", "5e-3", "2.5e-3"]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    Reflect,
    Inverse,
    Delta,
    Identity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SymplecticSpec {
    pub map: MapKind,
    /// Deformation size for `map = "delta"`.
    pub eps: String,
}

impl Default for SymplecticSpec {
    fn default() -> Self {
        Self {
            map: MapKind::Reflect,
            eps: "1/20".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingName {
    Circle,
    Interval,
}

impl RingName {
    pub fn ring(&self) -> Ring {
        match self {
            RingName::Circle => Ring::CircleTrig,
            RingName::Interval => Ring::IntervalPoly,
        }
    }
}

/// Elements are JSON strings in the element format, or inline tables with
/// the same shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LieSpec {
    pub ring: RingName,
    /// Defaults to `Λ₀` from `{1, cos s, sin s, cos 2s, sin 2s}` on the circle
    /// and `{1, s, s²}` on the interval.
    pub generators: Option<Vec<toml::Value>>,
    pub depth: u32,
    /// `[max_degree, max_order]`.
    pub window: [u32; 2],
    /// Defaults to twice the window.
    pub cap: Option<[u32; 2]>,
    /// Two elements to bracket.
    pub bracket: Option<Vec<toml::Value>>,
    /// Elements to test against the odd-degree constraint.
    pub membership: Vec<toml::Value>,
}

impl Default for LieSpec {
    fn default() -> Self {
        Self {
            ring: RingName::Circle,
            generators: None,
            depth: 5,
            window: [5, 6],
            cap: None,
            bracket: None,
            membership: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PolykerSpec {
    pub n: Vec<usize>,
    pub k: Vec<u32>,
}

impl Default for PolykerSpec {
    fn default() -> Self {
        Self {
            n: vec![2, 3, 4],
            k: vec![1, 2, 3, 4, 5],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeName {
    Power,
    Sum,
    Commutator,
}

/// `v` and `w` are profiles `f` in the trigonometric layout, used through
/// `H_{0,−2f}` on a closed curve of length `2π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ApproxSpec {
    pub scheme: SchemeName,
    pub t: String,
    pub eps_ladder: Vec<String>,
    /// Defaults to `[8, 16, 32]` for the sum scheme and `[4, 8, 16, 32]` for
    /// the commutator scheme.
    pub n_ladder: Option<Vec<usize>>,
    pub v: Option<Vec<String>>,
    pub w: Option<Vec<String>>,
}

impl Default for ApproxSpec {
    fn default() -> Self {
        Self {
            scheme: SchemeName::Power,
            t: "1/2".into(),
            eps_ladder: strings(&["1e-2", "5e-3", "2.5e-3"]),
            n_ladder: None,
            v: None,
            w: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub curve: CurveSpec,
    /// Deformation profile `f`; defaults to `f ≡ 1`.
    #[serde(default = "default_profile")]
    pub profile: Vec<String>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub tolerance: Tolerances,
    #[serde(default)]
    pub perline: PerlineSpec,
    #[serde(default)]
    pub symplectic: SymplecticSpec,
    #[serde(default)]
    pub lie: LieSpec,
    #[serde(default)]
    pub polyker: PolykerSpec,
    #[serde(default)]
    pub approximate: ApproxSpec,
}

fn default_profile() -> Vec<String> {
    strings(&["1"])
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config is valid")
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// Reads `path` and inlines a referenced curve file.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::from_toml(&text, path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.curve = cfg.curve.resolve(base)?;
        Ok(cfg)
    }

    pub fn tol(&self, field: &str, text: &str) -> Result<f64, ConfigError> {
        let x = num(&format!("tolerance.{field}"), text)?;
        if !(x > 0.0) {
            return Err(invalid(format!("tolerance.{field} must be positive")));
        }
        Ok(x)
    }

    pub fn profile(&self) -> Result<Profile, ConfigError> {
        self.curve.profile(&self.profile)
    }
}

pub fn parse_values(field: &str, xs: &[String]) -> Result<Vec<f64>, ConfigError> {
    xs.iter().map(|x| num(field, x)).collect()
}

pub fn parse_value(field: &str, x: &str) -> Result<f64, ConfigError> {
    num(field, x)
}
