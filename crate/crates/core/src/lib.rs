//! Optimized gradient methods, their schedules, and numerical convergence
//! certificates.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the common double-precision case.

pub mod certificates;
pub mod methods;
pub mod numkit;
pub mod problems;
pub mod schedules;
mod scalar;

pub use scalar::Scalar;

pub type Vector64 = numkit::Vector<f64>;
pub type Matrix64 = numkit::Matrix<f64>;
pub type Norm64 = numkit::QuadraticNorm<f64>;
pub type Oracle64 = problems::ObjectiveOracle<f64>;
pub type Config64 = methods::MethodConfig<f64>;
pub type Trace64 = methods::Trace<f64>;
pub type Report64 = certificates::CertificateReport<f64>;
pub type Theta64 = schedules::ThetaSchedule<f64>;
pub type Phi64 = schedules::PhiSchedule<f64>;
