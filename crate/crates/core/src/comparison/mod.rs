mod adjunction;
mod algebra_checks;
mod battery;
mod factor;
mod group_checks;
mod quillen;
mod report;

pub use adjunction::*;
pub use algebra_checks::*;
pub use battery::*;
pub use factor::*;
pub use group_checks::*;
pub use quillen::*;
pub use report::*;
