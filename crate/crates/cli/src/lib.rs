//! Front end for the ndnsec library: scheme benchmarks, simulation runs and
//! key files.

pub mod bench;
pub mod keys;
pub mod sim;
