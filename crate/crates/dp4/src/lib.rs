//! Exact combinatorics of degree-4 del Pezzo surfaces.
//!
//! The crate models, with integer arithmetic only:
//!
//! - the Weyl group W(D5) of signed permutations and its subgroups
//!   ([`weyl`]);
//! - the Picard lattices of del Pezzo surfaces of degree 1..=4, their lines,
//!   and the conic fibration on the cubic lattice ([`lattice`]);
//! - markings and the lattice actions they induce ([`marking`]);
//! - the quadric, Geiser and Bertini involutions ([`involutions`]);
//! - marking-compatible isometries, section transport, and chains of
//!   elementary transformations ([`transform`]);
//! - Galois-descent bookkeeping: orbits, minimality, first cohomology with
//!   coefficients in the sign subgroup, torsor twisting and classification,
//!   and the table of applicable links ([`galois`]).

pub mod galois;
pub mod involutions;
pub mod lattice;
mod linalg;
pub mod marking;
pub mod transform;
pub mod weyl;

pub use lattice::{LatticeTag, PicClass};
pub use marking::{CbMarking, Dp4Marking};
pub use weyl::{Subgroup, WeylElement};
