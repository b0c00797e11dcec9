//! Exact integer and prime-field linear algebra: Smith normal form,
//! kernels, cokernels and homology of integer chain complexes.

mod abelian;
mod chain;
mod field;
mod int_matrix;
mod smith;

pub use abelian::FGAbelianGroup;
pub use chain::{chain_homology, homology_from_invariants, ChainComplexZ};
pub use field::{field_kernel_cokernel, is_canonical, Field, FieldMatrix, Rref, MAX_PRIME};
pub use int_matrix::IntMatrix;
pub use smith::{invariant_factors, smith_normal_form, InvariantFactors, SmithForm};

use serde::{Deserialize, Serialize};

use crate::error::{QkError, Result};

pub const DEFAULT_ENTRY_CAP: usize = 4_000_000;
pub const DEFAULT_MAX_GROUP_ORDER: usize = 24;
pub const DEFAULT_MAX_DEGREE: usize = 4;

/// Size guards applied before any large matrix is materialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Hard cap on the entry count of a single dense matrix.
    pub entry_cap: usize,
    /// `None` lifts the group-order guard (the entry cap still applies).
    pub max_group_order: Option<usize>,
    pub max_degree: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            entry_cap: DEFAULT_ENTRY_CAP,
            max_group_order: Some(DEFAULT_MAX_GROUP_ORDER),
            max_degree: Some(DEFAULT_MAX_DEGREE),
        }
    }
}

impl Limits {
    pub fn with_entry_cap(entry_cap: usize) -> Self {
        Limits {
            entry_cap,
            ..Self::default()
        }
    }

    /// Drops the order/degree guards, keeping the entry cap.
    pub fn unguarded(self) -> Self {
        Limits {
            max_group_order: None,
            max_degree: None,
            ..self
        }
    }

    pub fn check_entries(&self, what: &str, rows: u128, cols: u128) -> Result<()> {
        let requested = rows.saturating_mul(cols);
        if requested > self.entry_cap as u128 {
            return Err(QkError::SizeCap {
                what: what.to_string(),
                requested,
                cap: self.entry_cap,
            });
        }
        Ok(())
    }

    pub fn check_degree(&self, degree: usize) -> Result<()> {
        match self.max_degree {
            Some(max) if degree > max => Err(QkError::Guard(format!(
                "degree {degree} exceeds the default bound {max}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn check_group_order(&self, order: usize) -> Result<()> {
        match self.max_group_order {
            Some(max) if order > max => Err(QkError::Guard(format!(
                "group order {order} exceeds the default bound {max}"
            ))),
            _ => Ok(()),
        }
    }
}
