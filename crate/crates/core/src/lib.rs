//! Weak simulation of quantum circuits that admit a noncontextual
//! ontological model.
//!
//! * [`circuit`]: circuit IR, file format and time-step scheduling.
//! * [`ncom`]: generic finite ontological models, validation, the
//!   trajectory sampler and the exact enumerator.
//! * [`wigner`]: the discrete Wigner model of odd-prime stabilizer circuits.
//! * [`oracle`]: dense statevector ground truth and phase-space tools.
//! * [`stats`]: outcome distributions and total variation distance.

pub mod circuit;
pub mod cli;
pub mod modular;
pub mod ncom;
pub mod oracle;
pub mod rng;
pub mod stats;
pub mod wigner;
