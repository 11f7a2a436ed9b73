//! Certified bounds from exact linear programs, sum-of-squares certificates
//! and magic-function quadrature.

pub mod codes;
pub mod exactfield;
pub mod functional;
pub mod magic;
pub mod qseries;
pub mod sdp;

pub use exactfield::{BigFloat, Precision, QSqrt2, Rat};
pub use functional::{Flavor, FunctionalSpec, VacuumConvention};
pub use magic::{MagicCharge, MagicReport, QuadratureConfig};
pub use qseries::PuiseuxSeries;
pub use sdp::{BoundResult, SOSCertificate, SearchOptions};
