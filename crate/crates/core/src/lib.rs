//! Exact arithmetic on the Vilenkin dual group `G*`.

// Failed checks travel as full verdicts with witnesses; boxing them buys
// nothing at these sizes.
#![allow(clippy::result_large_err)]

pub mod cylinder;
pub mod error;
pub mod format;
pub mod group;
pub mod mask;
pub mod scaling;
pub mod set;
pub mod stepfn;
pub mod stream;
pub mod verdict;
pub mod wavelet;

pub use cylinder::Cylinder;
pub use error::{Error, Result};
pub use group::{Point, Prime};
pub use set::CylinderSet;
pub use stream::{PieceStream, TailFamily};
pub use verdict::{Status, Verdict, Witness};
