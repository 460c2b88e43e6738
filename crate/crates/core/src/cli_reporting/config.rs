use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::graph_library::{ChartSpec, FamilySpec};
use crate::intrinsic_oracle::FdConfig;
use crate::mass_engine::QuadratureSpec;
use crate::model_space::check_dim;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Pointwise extrinsic data.
    Inspect,
    /// Identity residuals over sampled points.
    Verify,
    /// Mass vector, balanced mass and the bulk cross-check.
    Mass,
    /// Penrose-type inequalities and their hypotheses.
    Penrose,
    /// Decay rate and admissibility.
    Decay,
    /// Graph points in the upper half-space model.
    Map,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Inspect => "inspect",
            Command::Verify => "verify",
            Command::Mass => "mass",
            Command::Penrose => "penrose",
            Command::Decay => "decay",
            Command::Map => "map",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Random sample points `r ∈ [r_min, r_max]` with uniform directions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingSpec {
    pub points: usize,
    /// Defaults to half a unit outside the inner boundary, or 0.1.
    pub r_min: Option<f64>,
    pub r_max: f64,
}

impl Default for SamplingSpec {
    fn default() -> Self {
        SamplingSpec { points: 100, r_min: None, r_max: 50.0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InspectSpec {
    /// Disk coordinates; sampled points are used when empty.
    pub points: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MapSpec {
    pub samples: usize,
    pub r_max: f64,
}

impl Default for MapSpec {
    fn default() -> Self {
        MapSpec { samples: 200, r_max: 5.0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<String>,
    pub format: Format,
}

/// Contents of a TOML config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub family: FamilySpec,
    #[serde(default)]
    pub chart: ChartSpec,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub fd: FdConfig,
    #[serde(default)]
    pub sampling: SamplingSpec,
    #[serde(default)]
    pub inspect: InspectSpec,
    #[serde(default)]
    pub map: MapSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.family.dim();
        check_dim(n)?;
        self.quadrature.validate()?;
        self.fd.validate()?;
        self.chart.isometry(n)?;
        let s = &self.sampling;
        if s.points == 0 || !(s.r_max > s.r_min.unwrap_or(0.0)) {
            return Err(Error::Config(format!("sampling: need points > 0 and r_max > r_min, got {s:?}")));
        }
        if self.map.samples == 0 || !(self.map.r_max > 0.0) {
            return Err(Error::Config("map: need samples > 0 and r_max > 0".into()));
        }
        for x in &self.inspect.points {
            if x.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: x.len() });
            }
        }
        Ok(())
    }
}

/// A config file plus the command and overrides given on the command line.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub file: ConfigFile,
    pub timings: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let cfg = ConfigFile::parse("[family]\nkind = \"zero\"\nn = 3\n").unwrap();
        assert_eq!(cfg.quadrature, QuadratureSpec::default());
        assert_eq!(cfg.fd, FdConfig::default());
        assert_eq!(cfg.seed, 0);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        for text in [
            "[family]\nkind = \"zero\"\nn = 3\nbogus = 1\n",
            "bogus = 1\n[family]\nkind = \"zero\"\nn = 3\n",
            "[family]\nkind = \"zero\"\nn = 3\n[quadrature]\nsphere_ordr = 4\n",
            "[family]\nkind = \"zero\"\nn = 3\n[fd]\nscheme = \"central-6\"\n",
        ] {
            assert!(matches!(ConfigFile::parse(text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn invalid_values_are_rejected() {
        assert!(ConfigFile::parse("[family]\nkind = \"zero\"\nn = 7\n").is_err());
        assert!(ConfigFile::parse("[family]\nkind = \"zero\"\nn = 3\n[fd]\nstep = 1.0\n").is_err());
        let text = "[family]\nkind = \"zero\"\nn = 2\n[inspect]\npoints = [[0.1, 0.2, 0.3]]\n";
        assert!(ConfigFile::parse(text).is_err());
    }
}
