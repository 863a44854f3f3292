//! Run configuration: a JSON file whose fields are all optional, merged
//! under the command-line flags.

use std::fs;
use std::path::PathBuf;

use serde::Deserialize;
use twzeta_core::spectrum_io::CACHE_DIR_ENV;
use twzeta_core::{EnumOptions, ZetaOptions};

use crate::{Cli, CliError, Format, ZetaCommon};

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub threads: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub format: Option<Format>,
    pub rank_tol: Option<f64>,
    pub max_depth: Option<usize>,
    pub conj_radius: Option<usize>,
    pub node_budget: Option<usize>,
    pub j_max: Option<usize>,
    pub k_max: Option<usize>,
    pub k_tail_target: Option<f64>,
    pub required_margin: Option<f64>,
}

fn positive(field: &str, v: Option<f64>) -> Result<(), CliError> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => Err(CliError::input(format!("{field} must be positive, got {x}"))),
        _ => Ok(()),
    }
}

fn nonzero(field: &str, v: Option<usize>) -> Result<(), CliError> {
    match v {
        Some(0) => Err(CliError::input(format!("{field} must be at least 1"))),
        _ => Ok(()),
    }
}

impl RunConfig {
    pub fn from_file(path: &std::path::Path) -> Result<RunConfig, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("--config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("--config {}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        nonzero("threads", self.threads)?;
        nonzero("j_max", self.j_max)?;
        nonzero("max_depth", self.max_depth)?;
        nonzero("node_budget", self.node_budget)?;
        positive("rank_tol", self.rank_tol)?;
        positive("k_tail_target", self.k_tail_target)?;
        positive("required_margin", self.required_margin)
    }

    pub fn enum_options(&self, max_depth: Option<usize>, conj_radius: Option<usize>, node_budget: Option<usize>) -> EnumOptions {
        let d = EnumOptions::default();
        EnumOptions {
            max_depth: max_depth.or(self.max_depth).unwrap_or(d.max_depth),
            conj_radius: conj_radius.or(self.conj_radius).unwrap_or(d.conj_radius),
            node_budget: node_budget.or(self.node_budget).unwrap_or(d.node_budget),
        }
    }

    pub fn zeta_options(&self, c: &ZetaCommon) -> Result<ZetaOptions, CliError> {
        let d = ZetaOptions::default();
        let o = ZetaOptions {
            j_max: c.j_max.or(self.j_max).unwrap_or(d.j_max),
            k_max: c.k_max.or(self.k_max).or(d.k_max),
            k_tail_target: c.k_tail_target.or(self.k_tail_target).unwrap_or(d.k_tail_target),
            required_margin: c.required_margin.or(self.required_margin).unwrap_or(d.required_margin),
        };
        nonzero("--j-max", Some(o.j_max))?;
        positive("--k-tail-target", Some(o.k_tail_target))?;
        positive("--required-margin", Some(o.required_margin))?;
        Ok(o)
    }
}

/// The configuration file with the global flags applied on top; the cache
/// directory falls back to the environment.
pub fn merged(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    cfg.threads = cli.threads.or(cfg.threads);
    cfg.cache_dir = cli
        .cache_dir
        .clone()
        .or(cfg.cache_dir)
        .or_else(|| std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from));
    cfg.validate()?;
    Ok(cfg)
}

/// Sizes the global rayon pool. Only the first call in a process takes
/// effect, which is all the binary needs.
pub fn install_threads(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = merged(cli)?.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}
