//! Coxeter systems, their Stallings splittings over finite special
//! subgroups, finite permutation groups and torsion-rigidity certificates.

pub mod bass_serre;
pub mod casework;
pub mod classification;
pub mod fingroup;
pub mod geometric;
pub mod matrix;
pub mod rigidity;
pub mod serde_order;
pub mod splitting;
pub mod words;

pub use classification::{AffineType, ComponentClass, FiniteType};
pub use matrix::{CoxeterMatrix, GenSubset, Label, MatrixError};
pub use matrix::parse_system;
pub use rigidity::{rigidity_report, Overall, RigidityReport};
pub use splitting::{stallings_splitting, SplitTree};
