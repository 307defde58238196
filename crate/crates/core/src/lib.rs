//! Exact computations with polynomial subalgebras of the Virasoro algebra,
//! their one-dimensional characters, and the modules induced from them.

pub mod error;
pub mod binduced;
pub mod character;
pub mod config;
pub mod faulhaber;
pub mod induced;
pub mod laurent;
pub mod linalg;
pub mod module;
pub mod poly;
pub mod scalar;
pub mod tensor;
pub mod verify;
pub mod vir;

pub use error::{Error, Result};
pub use induced::{InducedModule, ModuleElement, MultiIndex};
pub use laurent::LaurentPoly;
pub use module::{SparseVec, VirModule};
pub use poly::Poly;
pub use scalar::{Field, Scalar};
pub use tensor::{TensorElement, TensorIndex, TensorModule, TensorSpec};
pub use vir::{SubalgebraSpec, VirElement};
