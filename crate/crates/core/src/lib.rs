//! Coherence and imaginarity toolkit.
//!
//! Finite-dimensional states live in [`qstate`], measures in [`measures`],
//! Gaussian states and channels in [`gaussian`], and the randomized
//! verification suites in [`harness`].

pub mod error;
pub mod figures;
pub mod gaussian;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod par;
pub mod qstate;
pub mod seed;

pub use error::{Error, Result};
pub use gaussian::{GaussianChannel, GaussianState};
pub use par::Execution;
pub use qstate::{ChannelKind, DensityMatrix, KrausChannel, PureState};
