//! Arithmetic in the ordered abelian group Z[t]: polynomials, lattices,
//! cosets and lexicographic regions.

mod lattice;
mod poly;
mod region;

use thiserror::Error;

pub use lattice::{coset_intersect, lattice_index, transversal, Coset, Lattice, LatticeIndex};
pub use poly::{poly_cmp, Poly};
pub use region::{
    brute_force_meets, coset_meets_region, coset_region_subset, region_member, DegreeKind, Region,
    Rel, Sign,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZtError {
    #[error("bad polynomial {text:?} at byte {pos}: {msg}")]
    PolySyntax {
        text: String,
        pos: usize,
        msg: String,
    },
    #[error("{poly} exceeds the degree bound {bound}")]
    DegreeOverflow { poly: String, bound: usize },
    #[error("{sub} is not a sublattice of {sup}")]
    NotSublattice { sub: String, sup: String },
    #[error("infinite index has no finite transversal")]
    InfiniteIndex,
}
