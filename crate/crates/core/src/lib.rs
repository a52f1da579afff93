//! Hadamard full propelinear codes with associated group `C_2t x C_2`.
//!
//! Binary vectors and permutations, the propelinear `*` product, the four
//! code families and their assembly from a single generator, exhaustive
//! search with rank/kernel profiling, and conversion to and from circulant
//! complex Hadamard matrices.

pub mod cchm;
pub mod cli;
pub mod error;
pub mod families;
pub mod gf2;
pub mod hadamard;
pub mod perm;
pub mod propelinear;
pub mod search;

pub use error::{Error, Result};
pub use families::{assemble, derive_a_from_d, derive_b_from_a, derive_b_from_a_quaternion, family_perms, quaternion_candidate, Candidate, Family, Reject};
pub use gf2::{rank_gf2, row_space_basis, BitMatrix, BitVector};
pub use hadamard::{check_bounds, is_hadamard_code, is_hadamard_matrix, kernel, min_distance, profile, rank, CodeProfile};
pub use perm::Permutation;
pub use propelinear::{
    associated_group_order, element_power, generate_group, inverse, is_full_propelinear, is_propelinear, star, star_elem,
    Label, PropelinearCode, PropelinearElement,
};
pub use cchm::{cchm_equivalent, cchm_to_code, code_to_cchm, is_cchm, sylvester_double, QuaternaryRow};
pub use search::{
    candidate_stream, count_candidates, dedup, reproduce_table, run_search, Cell, CellStatus, FoundCode, Mode, SearchOptions,
    SearchResult, SearchTask, Table, TableOptions,
};
