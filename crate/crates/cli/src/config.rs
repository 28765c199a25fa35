use std::path::{Path, PathBuf};

use kfree_core::pointsets::DEFAULT_WINDOW_CAP;
use kfree_core::FreenessSpec;
use serde::Deserialize;

pub const CONFIG_VERSION: u32 = 1;
pub const DEFAULT_REL_ERR: f64 = 1e-8;
/// Seed for the randomized checks when none is given.
pub const DEFAULT_SEED: u64 = 20240101;

/// Settings shared by all commands. Flags override the config file, which
/// overrides the defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub spec: FreenessSpec,
    pub window: Option<String>,
    pub rel_err: f64,
    pub cap: u64,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            spec: FreenessSpec::visible(),
            window: None,
            rel_err: DEFAULT_REL_ERR,
            cap: DEFAULT_WINDOW_CAP,
            out: None,
            format: None,
            seed: DEFAULT_SEED,
        }
    }
}

/// The text config file: TOML with a mandatory `version = 1`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub version: u32,
    pub spec: Option<String>,
    pub window: Option<String>,
    pub rel_err: Option<f64>,
    pub cap: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub spec: Option<String>,
    pub window: Option<String>,
    pub rel_err: Option<f64>,
    pub cap: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub seed: Option<u64>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| format!("malformed config: {e}"))?;
        if file.version != CONFIG_VERSION {
            return Err(format!("unsupported config version {} (expected {CONFIG_VERSION})", file.version));
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        ConfigFile::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    fn into_overrides(self) -> Overrides {
        Overrides {
            spec: self.spec,
            window: self.window,
            rel_err: self.rel_err,
            cap: self.cap,
            out: self.out,
            format: self.format,
            seed: self.seed,
        }
    }
}

impl RunConfig {
    pub fn resolve(file: Option<ConfigFile>, flags: Overrides) -> Result<Self, String> {
        let mut cfg = RunConfig::default();
        for layer in file.map(ConfigFile::into_overrides).into_iter().chain(std::iter::once(flags)) {
            if let Some(s) = layer.spec {
                cfg.spec = s.parse().map_err(|e| format!("--spec: {e}"))?;
            }
            if layer.window.is_some() {
                cfg.window = layer.window;
            }
            if let Some(r) = layer.rel_err {
                if !(r > 0.0 && r < 1.0) {
                    return Err(format!("--rel-err must lie in (0, 1), got {r}"));
                }
                cfg.rel_err = r;
            }
            if let Some(c) = layer.cap {
                cfg.cap = c;
            }
            if layer.out.is_some() {
                cfg.out = layer.out;
            }
            if layer.format.is_some() {
                cfg.format = layer.format;
            }
            if let Some(s) = layer.seed {
                cfg.seed = s;
            }
        }
        Ok(cfg)
    }

    /// Provenance lines for output headers.
    pub fn header(&self, command: &str) -> Vec<String> {
        let mut lines = vec![
            format!("kfree {} {command}", env!("CARGO_PKG_VERSION")),
            format!("spec: {}", self.spec),
        ];
        if let Some(w) = &self.window {
            lines.push(format!("window: {w}"));
        }
        lines.push(format!("rel_err: {:e}", self.rel_err));
        lines.push(format!("cap: {}", self.cap));
        lines.push(format!("seed: {}", self.seed));
        lines
    }
}
