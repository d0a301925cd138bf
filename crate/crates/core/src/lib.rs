//! One-dimensional effective QED of a relativistic hydrogen-like atom.
//!
//! The nucleus is a delta potential `-Z δ(x)` acting on the 2-component
//! Dirac operator. Everything here is an exact closed form or a
//! one/two-dimensional integral of one:
//!
//! * [`model`]: bound and continuum states, the jump matrix, electronic
//!   densities;
//! * [`spin`]: 2x2/4x4 complex matrices, tensor products, partial traces;
//! * [`quadrature`]: the integration engine;
//! * [`vacuum`]: vacuum-polarization density from the spectral sum;
//! * [`green`]: the same density from the resolvent, the Uehling density
//!   and the vacuum electron/positron numbers;
//! * [`energy`]: first-order QED corrections to the bound-state energy.
//!
//! Hartree atomic units throughout.

pub mod energy;
pub mod error;
pub mod green;
pub mod model;
pub mod quadrature;
pub mod spin;
pub mod vacuum;

pub use error::{Error, Result};
pub use model::{DerivedParams, Dispersion, ModelParams, Spinor, StateLabel};
pub use quadrature::{QuadResult, QuadratureSpec};
pub use spin::{CMat2, CMat4};

/// Turns a non-converged integral into an error naming the quantity.
pub(crate) fn require(r: QuadResult, quantity: &'static str) -> Result<QuadResult> {
    if r.converged {
        Ok(r)
    } else {
        Err(Error::NotConverged {
            quantity,
            value: r.value,
            error_estimate: r.error_estimate,
        })
    }
}
