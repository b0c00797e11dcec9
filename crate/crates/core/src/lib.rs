//! Exact computations around Beck modules, abelianization and the comparison
//! of Quillen and abelian (co)homology in concrete algebraic categories:
//! finite groups, finitely generated abelian groups, finite-dimensional
//! associative algebras and finitely presented commutative rings.
//!
//! Module map:
//!
//! * [`linalg`]: Smith normal form, integer chain complexes, field linear algebra.
//! * [`simplicial`]: simplicial abelian groups, Moore and unnormalized complexes.
//! * [`groups`]: finite groups, integral representations, bar-complex (co)homology.
//! * [`algebras`]: algebras by structure constants, bimodules, Hochschild
//!   homology, Kähler differentials, square-zero extensions.
//! * [`comparison`]: the comparison checks and the default battery.

pub mod algebras;
pub mod builtins;
pub mod comparison;
pub mod error;
pub mod exec;
pub mod groups;
pub mod linalg;
pub mod simplicial;

pub use error::{QkError, Result};
pub use exec::Exec;
pub use linalg::{FGAbelianGroup, Limits};
