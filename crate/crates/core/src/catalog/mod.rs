//! The limb-variant table, random realizations of its rows, and the
//! verification harness.

pub mod descriptor;
pub mod instantiate;
pub mod robot;
pub mod table;
pub mod verify;

pub use descriptor::{parse_pattern, JointSymbol, Marker, VariantDescriptor};
pub use instantiate::instantiate_geometry;
pub use robot::build_robot;
pub use table::{catalog, catalog_counts, count_robots, expand_permutations, CatalogCounts};
pub use verify::{verify_all, verify_variant, VerificationReport};
