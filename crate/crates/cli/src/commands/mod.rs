pub mod bessel;
pub mod certify;
pub mod integrals;
pub mod spectrum;

use lacuna_core::SpectrumSet;

use crate::args::{Command, SpectrumSpec};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::Report;

pub fn build_spectrum(spec: &SpectrumSpec) -> CliResult<SpectrumSet> {
    match (&spec.lambdas, spec.base, spec.depth) {
        (Some(l), _, _) => Ok(SpectrumSet::new(l.clone())?),
        (None, Some(base), Some(depth)) => Ok(SpectrumSet::geometric(base, depth, spec.scale)?),
        _ => Err(CliError::Usage("give either --lambdas or --base with --depth".into())),
    }
}

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> CliResult<Report> {
    match cmd {
        Command::Bessel(c) => bessel::run(c, cfg),
        Command::Integrals(c) => integrals::run(c, cfg),
        Command::Spectrum(c) => spectrum::run(c, cfg),
        Command::Certify(a) => certify::run(a, cfg),
    }
}
