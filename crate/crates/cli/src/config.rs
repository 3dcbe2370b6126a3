//! Optional TOML configuration. Every key is optional; command-line flags
//! take precedence over anything set here.
//!
//! ```toml
//! seed = 7
//! parallel = true
//!
//! [caps]
//! l1_linf_dim = 12
//! general_dim = 8
//! max_subsets = 4000000
//!
//! [budgets]
//! grid = 19683
//! search = 1000
//! r3_instances = 1000
//! functional_instances = 500
//! operator_instances = 200
//! embedding_vectors = 1000
//! ```

use std::path::Path;

use serde::Deserialize;

use selfext_core::Caps;

use crate::CliError;

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub seed: Option<u64>,
    pub parallel: Option<bool>,
    #[serde(default)]
    pub caps: CapsConfig,
    #[serde(default)]
    pub budgets: Budgets,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CapsConfig {
    pub l1_linf_dim: Option<usize>,
    pub general_dim: Option<usize>,
    pub max_subsets: Option<u64>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Budgets {
    /// Grid candidates for the `l1:4` search check.
    pub grid: Option<usize>,
    /// Default budget of `se-search`.
    pub search: Option<usize>,
    pub r3_instances: Option<usize>,
    pub functional_instances: Option<usize>,
    pub operator_instances: Option<usize>,
    pub embedding_vectors: Option<usize>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Input(format!("bad config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn caps(&self) -> Caps {
        let mut caps = Caps::default();
        if let Some(v) = self.caps.l1_linf_dim {
            caps.l1_linf_dim = v;
        }
        if let Some(v) = self.caps.general_dim {
            caps.general_dim = v;
        }
        if let Some(v) = self.caps.max_subsets {
            caps.max_subsets = v;
        }
        caps
    }
}
