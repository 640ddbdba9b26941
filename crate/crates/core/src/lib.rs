//! Finite-index decisions for subgroups of groups built from a free group by
//! adjoining Z[t]-powers of roots.

pub mod cli;
pub mod graph;
pub mod index;
pub mod types;
pub mod words;
pub mod zt_poly;
