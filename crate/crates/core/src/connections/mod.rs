//! Torsion-free linear connections, projective changes and the
//! projective and Grassmannian invariants.

mod connection;
mod invariants;
mod spec;

pub use connection::{Christoffel, Connection};
pub use invariants::{
    grass_invariants, grass_relation_residual, grass_shift, literal_third_relation_residual, projective_shift,
    thomas_pi, GrassInvariants, GrassPerturbation, IndexedFamily, ProjInvariants,
};
pub use spec::{ChristoffelEntry, ConnectionSpec};
