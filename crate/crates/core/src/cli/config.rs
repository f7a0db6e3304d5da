//! Parameter resolution: flags, then the config file, then zero.
//! A spin-specific value beats the shared one from the same source.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use super::args::{CommonArgs, Format};
use super::CliError;
use crate::linalg::SpinParams;

#[derive(Deserialize, Debug, Default, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub omega0: Option<f64>,
    pub omega_a0: Option<f64>,
    pub omega_b0: Option<f64>,
    pub gamma: Option<f64>,
    pub gamma_a: Option<f64>,
    pub gamma_b: Option<f64>,
    #[serde(rename = "J", alias = "j")]
    pub j: Option<f64>,
    pub omega1: Option<f64>,
    pub steps: Option<usize>,
    pub format: Option<Format>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }
}

/// Fully resolved settings shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub params: SpinParams,
    pub steps: Option<usize>,
    pub format: Format,
}

pub fn resolve(args: &CommonArgs) -> Result<Settings, CliError> {
    let config = match &args.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    Ok(merge(args, &config))
}

pub fn merge(args: &CommonArgs, config: &ConfigFile) -> Settings {
    let pick = |specific: Option<f64>, shared: Option<f64>, cfg_specific: Option<f64>, cfg_shared: Option<f64>| {
        specific.or(shared).or(cfg_specific).or(cfg_shared).unwrap_or(0.0)
    };
    let params = SpinParams {
        omega_a0: pick(args.omega_a0, args.omega0, config.omega_a0, config.omega0),
        omega_b0: pick(args.omega_b0, args.omega0, config.omega_b0, config.omega0),
        gamma_a: pick(args.gamma_a, args.gamma, config.gamma_a, config.gamma),
        gamma_b: pick(args.gamma_b, args.gamma, config.gamma_b, config.gamma),
        j: args.j.or(config.j).unwrap_or(0.0),
        omega1: args.omega1.or(config.omega1).unwrap_or(0.0),
    };
    Settings {
        params,
        steps: args.steps.or(config.steps),
        format: args.format.or(config.format).unwrap_or_default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let config = ConfigFile::parse("omega0 = 2.0\nomega_b0 = 3.0\nJ = 0.5\ngamma = 1.0\nformat = \"json\"\n").unwrap();
        let args = CommonArgs {
            omega0: Some(1.0),
            gamma_b: Some(-4.0),
            ..Default::default()
        };
        let s = merge(&args, &config);
        assert_eq!(s.params.omega_a0, 1.0);
        assert_eq!(s.params.omega_b0, 1.0);
        assert_eq!(s.params.gamma_a, 1.0);
        assert_eq!(s.params.gamma_b, -4.0);
        assert_eq!(s.params.j, 0.5);
        assert_eq!(s.params.omega1, 0.0);
        assert_eq!(s.format, Format::Json);

        let s = merge(&CommonArgs::default(), &config);
        assert_eq!((s.params.omega_a0, s.params.omega_b0), (2.0, 3.0));
        assert_eq!(merge(&CommonArgs::default(), &ConfigFile::default()).params, SpinParams::equal(0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ConfigFile::parse("omega2 = 1.0").is_err());
        assert!(ConfigFile::parse("[section]\nomega0 = 1.0").is_err());
        assert_eq!(ConfigFile::parse("j = 2.0").unwrap().j, Some(2.0));
    }
}
