//! Scenario configuration: a JSON document plus `--set key=value` overrides,
//! with flags winning over the file.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    CurvatureCheck,
    ConnectionCheck,
    BundleIdentities,
    LinearAccel,
    RotatingFrame,
    EquivalencePrinciple,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::CurvatureCheck,
        Scenario::ConnectionCheck,
        Scenario::BundleIdentities,
        Scenario::LinearAccel,
        Scenario::RotatingFrame,
        Scenario::EquivalencePrinciple,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::CurvatureCheck => "curvature-check",
            Scenario::ConnectionCheck => "connection-check",
            Scenario::BundleIdentities => "bundle-identities",
            Scenario::LinearAccel => "linear-accel",
            Scenario::RotatingFrame => "rotating-frame",
            Scenario::EquivalencePrinciple => "equivalence-principle",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Scenario::CurvatureCheck => {
                "curvature residuals of the frame connection on states, with h refinement"
            }
            Scenario::ConnectionCheck => {
                "numeric U dU⁻¹ against the closed-form connection components"
            }
            Scenario::BundleIdentities => {
                "gauge covariance, pure-gauge flatness, and Bianchi residuals on matrix fibers"
            }
            Scenario::LinearAccel => {
                "uniformly accelerated frame: pseudo-force Hamiltonian and chart trajectory"
            }
            Scenario::RotatingFrame => {
                "rotating frame: Coriolis/centrifugal Hamiltonian checks and packet trace"
            }
            Scenario::EquivalencePrinciple => {
                "free evolution plus the accelerated-chart phase map against uniform-field evolution"
            }
        }
    }
}

impl FromStr for Scenario {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Scenario::ALL
            .iter()
            .copied()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| ConfigError::new("scenario", format!("unknown scenario '{s}'")))
    }
}

#[derive(Debug)]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

impl ConfigError {
    pub fn new(field: &str, reason: impl Into<String>) -> Self {
        ConfigError {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config field '{}': {}", self.field, self.reason)
    }
}

impl std::error::Error for ConfigError {}

/// Raw scenario parameters; unset fields take per-scenario defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: Option<Scenario>,
    /// Grid dimensionality (each scenario has a required value).
    pub dims: Option<usize>,
    /// Points per axis N.
    pub points: Option<usize>,
    /// Extent per axis L.
    pub extent: Option<f64>,
    pub mass: Option<f64>,
    /// Linear acceleration g.
    pub accel: Option<f64>,
    /// Angular velocity of the rotating frame.
    pub omega: Option<f64>,
    /// Radius of the rotating frame's circular curve.
    pub radius: Option<f64>,
    /// Propagation step.
    pub dt: Option<f64>,
    /// Total propagation time.
    pub total_time: Option<f64>,
    /// Coordinate step h for numeric derivatives.
    pub coord_step: Option<f64>,
    /// Multiplier applied to every check tolerance of the scenario.
    pub tolerance_scale: Option<f64>,
    /// Seed for randomized matrix fields.
    pub seed: Option<u64>,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("cannot read config {}: {e}", path.display()))?;
        let cfg: ScenarioConfig = serde_json::from_str(&text)
            .map_err(|e| anyhow::anyhow!("cannot parse config {}: {e}", path.display()))?;
        Ok(cfg)
    }

    /// Apply one `key=value` override; flags win over the config file.
    pub fn apply_override(&mut self, entry: &str) -> Result<(), ConfigError> {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| ConfigError::new(entry, "override must look like key=value"))?;
        fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
        where
            T::Err: fmt::Display,
        {
            value
                .parse()
                .map_err(|e| ConfigError::new(key, format!("cannot parse '{value}': {e}")))
        }
        match key {
            "scenario" => self.scenario = Some(value.parse()?),
            "dims" => self.dims = Some(parse(key, value)?),
            "points" => self.points = Some(parse(key, value)?),
            "extent" => self.extent = Some(parse(key, value)?),
            "mass" => self.mass = Some(parse(key, value)?),
            "accel" => self.accel = Some(parse(key, value)?),
            "omega" => self.omega = Some(parse(key, value)?),
            "radius" => self.radius = Some(parse(key, value)?),
            "dt" => self.dt = Some(parse(key, value)?),
            "total_time" => self.total_time = Some(parse(key, value)?),
            "coord_step" => self.coord_step = Some(parse(key, value)?),
            "tolerance_scale" => self.tolerance_scale = Some(parse(key, value)?),
            "seed" => self.seed = Some(parse(key, value)?),
            other => {
                return Err(ConfigError::new(
                    other,
                    "unknown key (expected one of scenario, dims, points, extent, mass, accel, \
                     omega, radius, dt, total_time, coord_step, tolerance_scale, seed)",
                ))
            }
        }
        Ok(())
    }
}

/// Fully resolved parameters for one run.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub scenario: Scenario,
    pub dims: usize,
    pub points: usize,
    pub extent: f64,
    pub mass: f64,
    pub accel: f64,
    pub omega: f64,
    pub radius: f64,
    pub dt: f64,
    pub total_time: f64,
    pub coord_step: f64,
    pub tolerance_scale: f64,
    pub seed: u64,
}

pub fn resolve(raw: &ScenarioConfig) -> Result<ResolvedConfig, ConfigError> {
    let scenario = raw
        .scenario
        .ok_or_else(|| ConfigError::new("scenario", "no scenario selected"))?;
    let required_dims = match scenario {
        Scenario::RotatingFrame => 2,
        Scenario::BundleIdentities => 3, // base-manifold coordinates, not a grid
        _ => 1,
    };
    let dims = raw.dims.unwrap_or(required_dims);
    if dims != required_dims {
        return Err(ConfigError::new(
            "dims",
            format!(
                "{} requires dims={required_dims}, got {dims}",
                scenario.name()
            ),
        ));
    }
    let (default_points, default_extent) = match scenario {
        Scenario::RotatingFrame => (128, 20.0),
        _ => (256, 40.0),
    };
    let cfg = ResolvedConfig {
        scenario,
        dims,
        points: raw.points.unwrap_or(default_points),
        extent: raw.extent.unwrap_or(default_extent),
        mass: raw.mass.unwrap_or(1.0),
        accel: raw.accel.unwrap_or(match scenario {
            Scenario::EquivalencePrinciple => 0.5,
            _ => 1.0,
        }),
        omega: raw.omega.unwrap_or(0.5),
        radius: raw.radius.unwrap_or(2.0),
        dt: raw.dt.unwrap_or(1e-3),
        total_time: raw.total_time.unwrap_or(1.0),
        coord_step: raw.coord_step.unwrap_or(1e-3),
        tolerance_scale: raw.tolerance_scale.unwrap_or(1.0),
        seed: raw.seed.unwrap_or(2024),
    };
    for (field, value) in [
        ("extent", cfg.extent),
        ("mass", cfg.mass),
        ("dt", cfg.dt),
        ("total_time", cfg.total_time),
        ("coord_step", cfg.coord_step),
        ("tolerance_scale", cfg.tolerance_scale),
    ] {
        if value.is_nan() || value <= 0.0 || value.is_infinite() {
            return Err(ConfigError::new(
                field,
                format!("must be positive, got {value}"),
            ));
        }
    }
    if cfg.points < 8 {
        return Err(ConfigError::new(
            "points",
            format!("need at least 8 points per axis, got {}", cfg.points),
        ));
    }
    if cfg.radius < 0.0 {
        return Err(ConfigError::new("radius", "must be non-negative"));
    }
    Ok(cfg)
}
