//! TOML run configuration.
//!
//! ```toml
//! [constants]            # optional; v defaults to 2 pi hbar
//! hbar = 1.0
//!
//! [[packet]]             # one table per degree of freedom
//! q = 0.0
//! p = 0.0
//! dq = 1.0
//! dp = 1.0
//!
//! [potential]            # V(q) = sum V_k q^k / k!
//! mu = 1.0
//! coeffs = [0.0, 0.0, 1.0]
//!
//! [evolve]
//! t_max = 6.0
//! n_out = 61
//! method = "taylor"      # closed | taylor | mc | matrix
//! taylor_order = 40      # taylor: highest series order
//!
//! [output]
//! path = "trajectory.csv"
//! ```

use serde::Deserialize;

use super::CliError;

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub constants: Option<ConstantsConfig>,
    pub packet: Option<Vec<DofConfig>>,
    pub potential: Option<PotentialConfig>,
    pub evolve: Option<EvolveConfig>,
    pub scan: Option<ScanConfig>,
    pub chain: Option<ChainConfig>,
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    pub hbar: f64,
    pub v: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DofConfig {
    pub q: f64,
    pub p: f64,
    pub dq: f64,
    pub dp: f64,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub mu: f64,
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum MethodName {
    Closed,
    Taylor,
    Mc,
    Matrix,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum EngineName {
    Quantum,
    Classical,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub t_max: f64,
    pub n_out: usize,
    pub method: MethodName,
    pub engine: Option<EngineName>,
    pub taylor_order: Option<usize>,
    pub tol: Option<f64>,
    pub mc_samples: Option<usize>,
    pub mc_steps: Option<usize>,
    pub seed: Option<u64>,
    pub trunc_dim: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub s_min: f64,
    pub s_max: f64,
    pub n_points: usize,
    pub t_probe: f64,
    pub taylor_order: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub n_particles: usize,
    pub mu: f64,
    pub kappa: f64,
    pub xi: f64,
    #[serde(rename = "E")]
    pub energy: Option<f64>,
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<String>,
    pub format: Option<String>,
}

/// Sections a subcommand accepts, and which of them are required.
pub struct Sections {
    pub required: &'static [&'static str],
    pub optional: &'static [&'static str],
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    fn present(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.constants.is_some() {
            out.push("constants");
        }
        if self.packet.is_some() {
            out.push("packet");
        }
        if self.potential.is_some() {
            out.push("potential");
        }
        if self.evolve.is_some() {
            out.push("evolve");
        }
        if self.scan.is_some() {
            out.push("scan");
        }
        if self.chain.is_some() {
            out.push("chain");
        }
        if self.output.is_some() {
            out.push("output");
        }
        out
    }

    /// Missing required sections and stray ones are both parse failures.
    pub fn check_sections(&self, command: &str, sections: &Sections) -> Result<(), CliError> {
        for r in sections.required {
            if !self.present().contains(r) {
                return Err(CliError::Parse(format!("`{command}` needs a [{r}] section")));
            }
        }
        for p in self.present() {
            if !sections.required.contains(&p) && !sections.optional.contains(&p) {
                return Err(CliError::Parse(format!("section [{p}] is not used by `{command}`")));
            }
        }
        if let Some(fmt) = self.output.as_ref().and_then(|o| o.format.as_deref()) {
            if fmt != "csv" {
                return Err(CliError::Validation(format!("output.format: only \"csv\" is supported, got {fmt:?}")));
            }
        }
        Ok(())
    }
}

pub(crate) fn positive(field: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Validation(format!("{field}: must be finite and > 0, got {v}")))
    }
}

pub(crate) fn finite(field: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Validation(format!("{field}: must be finite, got {v}")))
    }
}

pub(crate) fn require<T: Copy>(field: &str, v: Option<T>) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Parse(format!("{field}: required for this method")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doc_example_parses() {
        let text = r#"
            [[packet]]
            q = 0.0
            p = 0.0
            dq = 1.0
            dp = 1.0
            [potential]
            mu = 1.0
            coeffs = [0.0, 0.0, 1.0]
            [evolve]
            t_max = 6.0
            n_out = 61
            method = "taylor"
            taylor_order = 40
        "#;
        let c = RunConfig::parse(text).unwrap();
        assert_eq!(c.evolve.unwrap().method, MethodName::Taylor);
    }

    #[test]
    fn unknown_key_is_named() {
        let err = RunConfig::parse("[potential]\nmu = 1.0\ncoeffs = []\nmass = 2.0\n").unwrap_err();
        assert!(err.to_string().contains("mass"));
    }
}
