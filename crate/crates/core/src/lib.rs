//! Quadratic-phase Wigner distributions and ambiguity functions.
//!
//! The crate provides discrete engines for six bilinear time-frequency
//! distributions (classical WD/AF, QWD/QAF, and the advanced AQWD/AQAF built
//! from chirp-modulated copies of the signal), closed forms for LFM chirps,
//! numerical verifiers for the distributions' structural identities, and a
//! chirp detector that reads LFM parameters off distribution ridges.

pub mod closedform;
pub mod detect;
pub mod error;
pub mod properties;
pub mod qpft;
pub mod signal;
pub mod tfd;

pub use closedform::LineModel;
pub use error::{Error, Result};
pub use qpft::{ParamMap, ParamSet};
pub use signal::{LfmComponent, Signal};
pub use tfd::{compute_tfd, TfKind, TfMap};
