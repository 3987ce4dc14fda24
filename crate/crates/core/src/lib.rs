//! Derivatives of one-parameter group orbits from finitely many group
//! translates, with the supporting kernels, convergence tools and models on
//! the line, circle, sphere and Heisenberg group.

pub mod circle;
pub mod convergence;
pub mod error;
pub mod heisenberg;
pub mod line;
pub mod operators;
pub mod quadrature;
pub mod sinc_kernel;
pub mod sphere;

pub use error::{BoasError, Result};
pub use operators::{
    boas_apply, boas_power, modulus, q_apply, smooth, trajectory_derivative, Auxiliary,
    BernsteinCertificate, BoasOutput, OneParameterGroup, OrbitSum, ShiftLattice,
    SmoothingKernelSpec,
};
pub use sinc_kernel::{build_table, coeff_a, coeff_b, sinc, sinc_derivative, CoefficientTable};

pub use num_complex::Complex64;
