//! Decision procedures for the columns condition and its ring-theoretic
//! generalisation, together with the product and module criteria.

mod columns;
mod gcc;
mod product;
mod rado;
mod verdict;
mod witness;

pub use columns::{
    columns_condition, columns_condition_bruteforce, embed_in_fraction_field, witness_masks, MAX_BRUTEFORCE_COLUMNS,
    MAX_COLUMNS,
};
pub use gcc::{gcc, powers_stay_infinite};
pub use product::{component, pr_product, product_matrix, ProductEvidence, ProductRule};
pub use rado::{build_b2, build_b3, pr_module_mod_n, rado_ring_check, ModuleEvidence};
pub use verdict::{decide, verdict_summary, Evidence, Status, Verdict};
pub use witness::PartitionWitness;
pub(crate) use witness::mask_indices;
