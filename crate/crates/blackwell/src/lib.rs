#![forbid(unsafe_code)]

//! Comparison of noisy channels by what can be decoded from them.
//!
//! The toolkit decides whether one channel can be obtained from another by
//! memoryless post-processing, and backs each verdict with a checkable
//! artifact: an explicit degrading channel when the answer is yes, or an
//! ensemble whose guessing probability provably increases when it is no.
//! The same machinery powers min-entropy bookkeeping for processing
//! pipelines, where a certified decrease of conditional min-entropy flags a
//! hidden memory.

pub mod error;
pub mod classical;
pub mod convex;
pub mod pipeline;
pub mod probability;
pub mod quantum;

pub use error::{Error, Result};
