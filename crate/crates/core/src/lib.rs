//! Verification toolkit for the sharp L2 -> L6 Fourier extension inequality
//! on the circle when the spectrum is lacunary with ratio above 3.

pub mod bessel;
pub mod certificate;
pub mod error;
pub mod integrals;
pub mod numeric;
pub mod spectrum;

pub use certificate::{CertificateParams, CoefficientVector, SpectrumContext, Verdict};
pub use error::{Error, Result};
pub use integrals::{DirectQuadrature, FValue, IntegralValue, Integrals, Method, SextetIndex};
pub use numeric::Interval;
pub use spectrum::{ClassifiedPoint, PointClass, SpectrumSet, Subtype, TripleRep};
