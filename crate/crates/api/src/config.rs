use std::path::{Path, PathBuf};

use serde::Deserialize;

pub const DEFAULT_RATE_LIMIT: u32 = 10;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {reason}")]
    Unreadable { path: String, reason: String },
    #[error("bad value for {name}: {reason}")]
    BadValue { name: String, reason: String },
}

/// Optional TOML file named by `CONFIG_PATH`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub validator: ValidatorSection,
    #[serde(default)]
    pub oracle: OracleSection,
    #[serde(default)]
    pub server: ServerSection,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidatorSection {
    /// Compile-check command fed the source on stdin, e.g.
    /// `python3 -c "import ast,sys; ast.parse(sys.stdin.read())"`.
    pub external_cmd: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    /// Interpreter command with a `{source}` placeholder, e.g. `python3 {source}`.
    pub python_cmd: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServerSection {
    pub rate_limit_per_minute: Option<u32>,
}

impl ConfigFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let unreadable = |reason: String| ConfigError::Unreadable {
            path: path.display().to_string(),
            reason,
        };
        let text = std::fs::read_to_string(path).map_err(|e| unreadable(e.to_string()))?;
        toml::from_str(&text).map_err(|e| unreadable(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServerConfig {
    pub bank_path: PathBuf,
    /// `initial` or `improved`.
    pub default_profile: String,
    pub port: u16,
    /// `None` allows any origin.
    pub cors_origin: Option<String>,
    pub rate_limit_per_minute: u32,
    pub external_validator: Option<String>,
    pub oracle_cmd: Option<String>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            bank_path: PathBuf::from("fixtures/bank.json"),
            default_profile: "improved".to_string(),
            port: 8080,
            cors_origin: None,
            rate_limit_per_minute: DEFAULT_RATE_LIMIT,
            external_validator: None,
            oracle_cmd: None,
        }
    }
}

impl ServerConfig {
    /// Reads `BANK_PATH`, `PROFILE_DEFAULT`, `PORT`, `CORS_ORIGIN`,
    /// `RATE_LIMIT_PER_MIN` and `CONFIG_PATH`.
    pub fn from_env() -> Result<Self, ConfigError> {
        Self::from_lookup(|name| std::env::var(name).ok().filter(|v| !v.is_empty()))
    }

    pub fn from_lookup(var: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        if let Some(path) = var("CONFIG_PATH") {
            let file = ConfigFile::load(path)?;
            cfg.external_validator = file.validator.external_cmd;
            cfg.oracle_cmd = file.oracle.python_cmd;
            if let Some(limit) = file.server.rate_limit_per_minute {
                cfg.rate_limit_per_minute = limit;
            }
        }
        if let Some(path) = var("BANK_PATH") {
            cfg.bank_path = PathBuf::from(path);
        }
        if let Some(profile) = var("PROFILE_DEFAULT") {
            if !matches!(profile.as_str(), "initial" | "improved") {
                return Err(ConfigError::BadValue {
                    name: "PROFILE_DEFAULT".into(),
                    reason: format!("`{profile}` is not `initial` or `improved`"),
                });
            }
            cfg.default_profile = profile;
        }
        if let Some(port) = var("PORT") {
            cfg.port = port
                .parse()
                .map_err(|e: std::num::ParseIntError| ConfigError::BadValue {
                    name: "PORT".into(),
                    reason: e.to_string(),
                })?;
        }
        if let Some(limit) = var("RATE_LIMIT_PER_MIN") {
            cfg.rate_limit_per_minute = limit
                .parse()
                .map_err(|e: std::num::ParseIntError| ConfigError::BadValue {
                    name: "RATE_LIMIT_PER_MIN".into(),
                    reason: e.to_string(),
                })?;
        }
        cfg.cors_origin = var("CORS_ORIGIN").filter(|o| o != "*");
        Ok(cfg)
    }
}
