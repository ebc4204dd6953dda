//! Frequency-domain model of a thin circular plate of finite radius bonded to an
//! elastic half-space.
//!
//! The plate deflection is expanded in free-edge eigenmodes, the half-space is
//! represented by the Lamb surface admittance restricted to the contact disk, and
//! the coupled modal system is solved per frequency. Time signals come from direct
//! Fourier synthesis on the frequency grid.

pub mod coupled_solver;
pub mod error;
pub mod halfspace;
pub mod hankel;
pub mod numkernel;
pub mod plate_modes;
pub mod response;
pub mod smatrix;

pub use error::{Error, Result};
pub use num_complex::Complex64 as Complex;
