//! Command line, JSON group specs, reports, lattice diagrams and the
//! subgroup-lattice cache.

pub mod cache;
pub mod commands;
pub mod fixtures;
pub mod lattice;
pub mod spec;
pub mod verify;

pub use cache::{Cache, CacheEntry, CACHE_DIR_ENV, CACHE_SCHEMA_VERSION};
pub use commands::{run_command, SCHEMA_VERSION};
pub use lattice::{subgroup_lattice, Lattice};
pub use spec::{Built, GroupSpec};
