//! Reproductions of the counterexamples: the blow-up of the standard
//! enumeration scale (`b1`), the paired Banach algebra (`b2`), the power-series
//! homomorphism `θ_χ` (`theta`), non-minimal enumerations (`b7`) and the
//! Cantor scale (`cantor`).

pub mod b1;
pub mod b2;
pub mod b7;
pub mod cantor;
pub mod theta;

pub use b1::{b1_blowup, faulhaber, BlowupReport, PowerSumMethod};
pub use b2::{b2_pair_algebra, PairAlgebraReport};
pub use b7::{b7_enumerations, B7Report};
pub use cantor::{cantor_scale, CantorReport, DyadicPoint};
pub use theta::{b5_not_in_schwartz, convolve, theta_chi, theta_homomorphism_check, B5Report, HomomorphismReport};
