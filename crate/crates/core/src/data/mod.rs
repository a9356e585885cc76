//! Data sources: the seeded synthetic group-lasso generator, LIBSVM text
//! I/O, and shuffled-epoch mini-batch schedules.

mod batch;
mod libsvm;
pub mod rng;
mod synthetic;

pub use batch::{BatchCursor, BatchSchedule};
pub use libsvm::{parse_libsvm, read_libsvm_file, write_libsvm, LibsvmOptions};
pub use synthetic::{gen_binary_logistic, gen_synthetic, read_dump, write_dump, SyntheticInstance};
