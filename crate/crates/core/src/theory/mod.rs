//! Information-theoretic quantities: entropies, the noisy-overlap rate `I*`,
//! coverage counts and algorithm rate bounds.

pub mod bounds;
pub mod entropy;
pub mod noisy;

pub use bounds::*;
pub use entropy::*;
pub use noisy::*;
