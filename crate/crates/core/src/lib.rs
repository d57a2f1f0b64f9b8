//! Exact computation of singularity invariants: the asymptotic Samuel
//! function, the Samuel slope of a local ring, Hironaka's order of Rees
//! algebras, and the slope and H-ord of p-presentations of hypersurfaces.

pub mod arith;
pub mod corpus;
pub mod elimpres;
pub mod groebner;
pub mod newton;
pub mod poly;
pub mod samuel;
