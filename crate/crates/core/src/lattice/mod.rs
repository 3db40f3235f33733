//! Integer lattice algebra for the symmetry torus and the toric data of the model.

mod cochar;
mod cone;
mod hilbert;
mod intmatrix;
mod snf;

pub use cochar::{
    cochar_lattice, pm_cocharacter, split_by_reference, torus_dimension, CocharLattice, Loop,
    Splitting, LOOP_CLASSES,
};
pub use cone::{cone_over_polygon, dual_cone, primitive, Cone3, DualCone};
pub use hilbert::{hilbert_basis, HilbertBasis, HILBERT_LIMIT};
pub use intmatrix::IntMatrix;
pub use snf::{smith_normal_form, Snf};
