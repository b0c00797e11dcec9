//! Finite groups, integral representations and their (co)homology.

mod closed_form;
mod extension;
mod group;
mod homology;
mod rep;

pub use closed_form::*;
pub use extension::*;
pub use group::*;
pub use homology::*;
pub use rep::*;
