//! Partitions, compositions, Dyck paths with area, standard Young tableaux,
//! and the counting functions the germ formulas consume.

mod counting;
mod dyck;
mod partition;
mod tableau;

#[cfg(test)]
pub(crate) use partition::factorial;

pub use counting::{contingency_count, slope_steps, twist_exponent, young_cycle_count, SlopeMode};
pub use dyck::{dyck_paths, DyckPath};
pub use partition::{compositions, partitions, Composition, Partition};
pub use tableau::{composition_tableau, content_exponents, content_vector_t1, syt, Tableau};
