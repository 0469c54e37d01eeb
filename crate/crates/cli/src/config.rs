use std::path::PathBuf;
use std::sync::Arc;

use lacuna_core::bessel::{BesselConfig, MAX_ORDER};
use lacuna_core::integrals::{DiagonalSource, MIN_R_MAX};
use lacuna_core::{DirectQuadrature, Integrals};
use serde::Serialize;

use crate::args::{Diagonal, Format, GlobalArgs};
use crate::cache::TableCache;
use crate::error::{CliError, CliResult};

/// Everything that influences a report, apart from the subcommand itself.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub r_max: f64,
    pub tol: f64,
    pub order_cap: u32,
    pub diagonal: DiagonalSource,
    pub bessel: BesselConfig,
    #[serde(skip)]
    pub threads: usize,
    #[serde(skip)]
    pub format: Format,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub use_cache: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let direct = DirectQuadrature::default();
        Self {
            r_max: direct.r_max,
            tol: direct.tol,
            order_cap: 532,
            diagonal: DiagonalSource::default(),
            bessel: BesselConfig::default(),
            threads: 0,
            format: Format::Text,
            output: None,
            use_cache: true,
        }
    }
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> CliResult<Self> {
        let cfg = Self {
            r_max: g.r_max,
            tol: g.tol,
            order_cap: g.order_cap,
            diagonal: match g.diagonal {
                Diagonal::Direct => DiagonalSource::Direct,
                Diagonal::Centered => DiagonalSource::Lemma8Centered,
            },
            threads: g.threads,
            format: g.format,
            output: g.output.clone(),
            use_cache: !g.no_cache,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        if !(self.r_max.is_finite() && self.r_max >= MIN_R_MAX) {
            return Err(CliError::Usage(format!("--r-max must be finite and >= {MIN_R_MAX}, got {}", self.r_max)));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CliError::Usage(format!("--tol must be positive, got {}", self.tol)));
        }
        if self.order_cap == 0 || self.order_cap > MAX_ORDER {
            return Err(CliError::Usage(format!("--order-cap must be in 1..={MAX_ORDER}, got {}", self.order_cap)));
        }
        Ok(())
    }

    pub fn direct(&self) -> DirectQuadrature {
        DirectQuadrature { r_max: self.r_max, tol: self.tol, bessel: self.bessel, ..DirectQuadrature::default() }
    }

    /// Engine without a table; the table is only needed by a few commands.
    pub fn engine(&self) -> CliResult<Integrals> {
        match self.diagonal {
            DiagonalSource::Direct => Ok(Integrals::new(self.direct())),
            DiagonalSource::Lemma8Centered => self.engine_with_table(),
        }
    }

    pub fn engine_with_table(&self) -> CliResult<Integrals> {
        let table = TableCache::from_env(self.use_cache).load_or_build(&self.bessel, self.order_cap)?;
        Ok(Integrals::new(self.direct()).with_source(self.diagonal).with_table(Arc::new(table)))
    }
}
