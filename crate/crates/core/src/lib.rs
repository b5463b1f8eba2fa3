//! Exact numerology for Fourier restriction exponents.
//!
//! * [`exact`]: rationals, polynomials and rational functions.
//! * [`broad`]: k-broad exponents and their product bounds.
//! * [`linear`]: the broad-to-linear optimisation and the exponent table.
//! * [`params`]: the multiscale parameter system and its identities.
//! * [`asymptotics`]: the cubic, the constant λ and the large-n fit.
//! * [`wolff`]: a floating-point incidence lab for nested affine flags.

pub mod asymptotics;
pub mod broad;
pub mod error;
pub mod exact;
pub mod exec;
pub mod interval;
pub mod linear;
pub mod params;
mod primes;
pub mod wolff;

pub use error::{Error, Result};
pub use exact::{Polynomial, Rational, RationalFunction};
pub use exec::Exec;
