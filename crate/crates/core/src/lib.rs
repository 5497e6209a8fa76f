//! Exact spectral computations on lens spaces and lens orbifolds.
//!
//! * [`exactmath`]: integer polynomials, rational functions, truncated
//!   series and cyclotomic fields.
//! * [`lens`]: parameters, isometry classes, isotropy and covers.
//! * [`lattice`]: one-norm counts of the congruence lattice.
//! * [`spectra`]: Hodge-Laplace generating functions and multiplicities.
//! * [`isospec`]: isospectrality decisions, family classification and checks.
//! * [`cache`]: on-disk memo of lattice counts.
//! * [`cli`]: the command-line driver.

pub mod cache;
pub mod cli;
pub mod exactmath;
pub mod isospec;
pub mod lattice;
pub mod lens;
pub mod spectra;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] exactmath::ArithError),
    #[error(transparent)]
    Lens(#[from] lens::LensError),
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
    #[error(transparent)]
    Spectra(#[from] spectra::SpectraError),
    #[error(transparent)]
    Isospec(#[from] isospec::IsospecError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
