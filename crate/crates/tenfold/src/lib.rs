//! Tenfold-way classification and topological invariants for tight-binding
//! Bloch Hamiltonians: Altland-Zirnbauer class assignment from supplied
//! symmetry representations, the periodic table and its Bott-clock
//! identities, Clifford complex-structure ladders with their minimal
//! geodesics, Chern / winding / Pfaffian / Wilson-loop invariants, and
//! gapped symmetric interpolations realizing the suspension step.

// Links the BLAS/LAPACK provider for ndarray-linalg.
use openblas_src as _;

pub mod builtin;
pub mod clifford;
pub mod error;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod model;
pub mod selfcheck;
pub mod suspension;
pub mod symmetry;
pub mod table;

pub use error::{Error, Result};
pub use invariants::{InvariantKind, InvariantOutcome, InvariantResult};
pub use model::{BlochModel, FlattenedSample, KGrid};
pub use symmetry::{AZClass, AZLabel, Classification, Family, SymmetrySpec};
pub use table::{InvariantGroup, TableIndex};
