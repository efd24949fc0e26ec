//! Invariant connections, curvature, G-structures and characteristic-class
//! arithmetic on five-dimensional reductive homogeneous spaces with an
//! irreducible SO(3) structure.

pub mod algebra;
pub mod catalog;
pub mod connection;
pub mod error;
pub mod forms;
pub mod gstructure;
pub mod linalg;
pub mod riemannian;
pub mod spacefile;
pub mod topology;

pub use algebra::{invariant_forms, LieAlgebra, ReductiveSpace, Representation, DEFAULT_TOL};
pub use error::{Error, Result};
pub use forms::{AltForm, FrameTensor, SymTensor3};
pub use gstructure::{standard_upsilon, AlmostContact, Upsilon};
pub use spacefile::SpaceDefinition;
