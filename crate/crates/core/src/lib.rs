//! Remote points for subgroups of `G^n`: group arithmetic, Schreier-Sims,
//! small-bias spaces, Cayley spectra and the remote-point solvers.

pub mod cayley;
pub mod error;
pub mod group;
pub mod perm;
pub mod smallbias;
pub mod solver;

pub use error::{Error, Result};
pub use group::{GroupSpec, Subgroup, Tuple};
