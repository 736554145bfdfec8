//! Pick functions represented by measures, their logarithmic and primitive
//! subclasses, half-plane transforms, Hardy norms on horizontal lines, and
//! checks of universal starlikeness.

pub mod error;
pub mod hardy;
pub mod kernel;
pub mod measure;
pub mod pick;
pub mod plog;
pub mod quad;
pub mod starlike;
pub mod transforms;

pub use error::{Error, Result};
