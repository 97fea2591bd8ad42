//! Configuration file handling: TOML with one section per subsystem,
//! paper-style defaults, and `--set section.key=value` overrides.

use serde::{Deserialize, Serialize};
use starsec::analytics::{ProtocolKind, ProtocolMode};
use starsec::fading::FadingParams;
use starsec::geometry::{db_to_linear, NetworkConfig};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FadingSection {
    pub kappa1: f64,
    pub mu1: f64,
    pub kappa2: f64,
    pub mu2: f64,
}

impl Default for FadingSection {
    fn default() -> Self {
        FadingSection {
            kappa1: 3.0,
            mu1: 1.0,
            kappa2: 3.0,
            mu2: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometrySection {
    pub l_br_m: f64,
    pub r_u_m: f64,
    pub lambda_e_per_m2: f64,
    pub alpha: f64,
    pub c_r: f64,
    pub eve_trunc_radius_m: f64,
}

impl Default for GeometrySection {
    fn default() -> Self {
        GeometrySection {
            l_br_m: 50.0,
            r_u_m: 50.0,
            lambda_e_per_m2: 1e-4,
            alpha: 3.0,
            c_r: 1.0,
            eve_trunc_radius_m: 500.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PowerSection {
    pub rho_b_db: f64,
    pub rho_e_db: f64,
    pub a_s: f64,
    pub a_w: f64,
}

impl Default for PowerSection {
    fn default() -> Self {
        PowerSection {
            rho_b_db: 80.0,
            rho_e_db: 50.0,
            a_s: 0.3,
            a_w: 0.7,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RatesSection {
    pub r_s: f64,
    pub r_w: f64,
}

impl Default for RatesSection {
    fn default() -> Self {
        RatesSection { r_s: 0.1, r_w: 0.1 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StarRisSection {
    pub n_elements: usize,
    pub protocol: ProtocolKind,
    pub param_s: f64,
}

impl Default for StarRisSection {
    fn default() -> Self {
        StarRisSection {
            n_elements: 25,
            protocol: ProtocolKind::Ts,
            param_s: 0.7,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsSection {
    pub quadrature_order: usize,
}

impl Default for NumericsSection {
    fn default() -> Self {
        NumericsSection {
            quadrature_order: 30,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationSection {
    pub trials: usize,
    pub shared_first_hop: bool,
}

impl Default for SimulationSection {
    fn default() -> Self {
        SimulationSection {
            trials: 100_000,
            shared_first_hop: false,
        }
    }
}

/// The full configuration file. Every field has the default experimental
/// value, so an empty file (or none at all) reproduces the baseline setup.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub fading: FadingSection,
    pub geometry: GeometrySection,
    pub power: PowerSection,
    pub rates: RatesSection,
    pub star_ris: StarRisSection,
    pub numerics: NumericsSection,
    pub simulation: SimulationSection,
}

impl FileConfig {
    pub fn load(path: Option<&std::path::Path>, overrides: &[String]) -> Result<Self, CliError> {
        let mut doc: toml::Table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::Config(format!("cannot read config {}: {e}", p.display()))
                })?;
                text.parse()
                    .map_err(|e| CliError::Config(format!("config parse error: {e}")))?
            }
            None => toml::Table::new(),
        };
        for ov in overrides {
            apply_override(&mut doc, ov)?;
        }
        doc.try_into()
            .map_err(|e| CliError::Config(format!("invalid configuration: {e}")))
    }

    /// Validated network configuration with SNRs converted to linear scale.
    pub fn network(&self) -> Result<NetworkConfig, CliError> {
        let fading = FadingParams::new(
            self.fading.kappa1,
            self.fading.mu1,
            self.fading.kappa2,
            self.fading.mu2,
        )
        .map_err(|e| CliError::Config(e.to_string()))?;
        NetworkConfig {
            l_br: self.geometry.l_br_m,
            r_u: self.geometry.r_u_m,
            lambda_e: self.geometry.lambda_e_per_m2,
            alpha: self.geometry.alpha,
            c_r: self.geometry.c_r,
            rho_b: db_to_linear(self.power.rho_b_db),
            rho_e: db_to_linear(self.power.rho_e_db),
            a_s: self.power.a_s,
            a_w: self.power.a_w,
            r_s: self.rates.r_s,
            r_w: self.rates.r_w,
            n_elements: self.star_ris.n_elements,
            fading,
            eve_trunc_radius: self.geometry.eve_trunc_radius_m,
        }
        .validated()
        .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn protocol(&self) -> Result<ProtocolMode, CliError> {
        ProtocolMode::new(self.star_ris.protocol, self.star_ris.param_s)
            .map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Applies one `section.key=value` override to the raw TOML document.
fn apply_override(doc: &mut toml::Table, spec: &str) -> Result<(), CliError> {
    let (path, value) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override '{spec}' is not key=value")))?;
    let (section, key) = path
        .trim()
        .split_once('.')
        .ok_or_else(|| CliError::Config(format!("override key '{path}' is not section.key")))?;
    let parsed: toml::Value = if let Ok(b) = value.trim().parse::<bool>() {
        toml::Value::Boolean(b)
    } else if let Ok(i) = value.trim().parse::<i64>() {
        toml::Value::Integer(i)
    } else if let Ok(f) = value.trim().parse::<f64>() {
        toml::Value::Float(f)
    } else {
        toml::Value::String(value.trim().to_string())
    };
    doc.entry(section.trim())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()))
        .as_table_mut()
        .ok_or_else(|| CliError::Config(format!("'{section}' is not a table")))?
        .insert(key.trim().to_string(), parsed);
    Ok(())
}
