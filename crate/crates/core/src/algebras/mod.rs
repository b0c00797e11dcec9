mod algebra;
mod bimodule;
mod commring;
mod hochschild;
mod poly;
mod space;

pub use algebra::*;
pub use bimodule::*;
pub use commring::*;
pub use hochschild::*;
pub use poly::*;
pub use space::*;
