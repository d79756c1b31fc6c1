use std::path::{Path, PathBuf};

use serde::Deserialize;
use walker_core::construction::ConstructionInput;
use walker_core::curve_geometry::CurveSpec;
use walker_core::field_expr::ScalarField1;
use walker_core::surface_geometry::{CylinderCase, SurfacePatch};
use walker_core::{Sign, WalkerMetric};

use crate::CliError;

pub const DEFAULT_OUTPUT_DIR: &str = "walker-out";
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_FRENET_SAMPLES: usize = 201;
pub const DEFAULT_SURFACE_GRID: usize = 10;
pub const DEFAULT_CONSTRUCTION_SAMPLES: usize = 2000;
/// Threshold below which a torsion or a second fundamental form counts as zero.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_epsilon")]
    pub epsilon: i64,
    #[serde(default = "default_f")]
    pub f: String,
    pub curve: Option<CurveConfig>,
    pub surface: Option<SurfaceConfig>,
    pub construction: Option<ConstructionConfig>,
    pub output_dir: Option<PathBuf>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
}

fn default_epsilon() -> i64 {
    1
}

fn default_f() -> String {
    "0".into()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub x: String,
    pub y: String,
    pub z: String,
    pub t_range: [f64; 2],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub case: i64,
    pub phi: String,
    /// `[[x0, x1], [p0, p1]]`: the ruling coordinate and the profile variable.
    #[serde(default = "default_ranges")]
    pub ranges: [[f64; 2]; 2],
}

fn default_ranges() -> [[f64; 2]; 2] {
    [[-1.0, 1.0], [-1.0, 1.0]]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionConfig {
    /// Falls back to the top-level `f`.
    pub f: Option<String>,
    #[serde(default)]
    pub y0: f64,
    pub r0: f64,
    #[serde(default)]
    pub x0: f64,
    pub range: [f64; 2],
    pub samples: Option<usize>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        RunConfig::from_json(&text)
    }

    pub fn apply(mut self, o: &Overrides) -> Result<RunConfig, CliError> {
        if o.samples.is_some() {
            self.samples = o.samples;
        }
        if o.tol.is_some() {
            self.tol = o.tol;
        }
        if o.out.is_some() {
            self.output_dir = o.out.clone();
        }
        if matches!(self.samples, Some(n) if n < 2) {
            return Err(CliError::Config("samples must be at least 2".into()));
        }
        if matches!(self.tol, Some(t) if !(t > 0.0)) {
            return Err(CliError::Config("tol must be positive".into()));
        }
        self.eps()?;
        Ok(self)
    }

    pub fn eps(&self) -> Result<Sign, CliError> {
        Sign::from_int(self.epsilon).ok_or_else(|| CliError::Config(format!("epsilon must be 1 or -1, got {}", self.epsilon)))
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
    }

    pub fn metric(&self) -> Result<WalkerMetric, CliError> {
        WalkerMetric::parse(self.eps()?, &self.f).map_err(|e| CliError::Config(format!("f: {e}")))
    }

    pub fn curve(&self) -> Result<(CurveSpec, usize), CliError> {
        let c = self.curve.as_ref().ok_or_else(|| CliError::Config("missing \"curve\" section".into()))?;
        let [a, b] = c.t_range;
        if !(a < b) {
            return Err(CliError::Config(format!("curve.t_range must be increasing, got [{a}, {b}]")));
        }
        let spec = CurveSpec::parse(&c.x, &c.y, &c.z, (a, b)).map_err(|e| CliError::from_geometry("curve", e))?;
        Ok((spec, self.samples.unwrap_or(DEFAULT_FRENET_SAMPLES)))
    }

    pub fn surface(&self) -> Result<(SurfacePatch, usize), CliError> {
        let s = self.surface.as_ref().ok_or_else(|| CliError::Config("missing \"surface\" section".into()))?;
        let case = CylinderCase::from_int(s.case)
            .ok_or_else(|| CliError::Config(format!("surface.case must be 1 or 2, got {}", s.case)))?;
        let phi = ScalarField1::parse(&s.phi, case.profile_variable()).map_err(|e| CliError::Config(format!("phi: {e}")))?;
        let [[x0, x1], [p0, p1]] = s.ranges;
        if !(x0 < x1 && p0 < p1) {
            return Err(CliError::Config("surface.ranges must be increasing".into()));
        }
        let patch = SurfacePatch::cylinder(case, phi).with_ranges((x0, x1), (p0, p1));
        Ok((patch, self.samples.unwrap_or(DEFAULT_SURFACE_GRID)))
    }

    pub fn construction(&self) -> Result<ConstructionInput, CliError> {
        let c = self
            .construction
            .as_ref()
            .ok_or_else(|| CliError::Config("missing \"construction\" section".into()))?;
        Ok(ConstructionInput {
            f: c.f.clone().unwrap_or_else(|| self.f.clone()),
            eps: self.eps()?,
            y0: c.y0,
            r0: c.r0,
            x0: c.x0,
            range: (c.range[0], c.range[1]),
            samples: self.samples.or(c.samples).unwrap_or(DEFAULT_CONSTRUCTION_SAMPLES),
        })
    }
}
