//! Homology computations for the moduli-space quotients `M(0,n+1)/S_n`.
//!
//! The spaces are modelled by cacti complexes: `C_n` (based cacti, homotopy
//! equivalent to the ordered configuration space `F_n(C)`), `C_n/S^1`
//! (unbased cacti, equivalent to `M(0,n+1)`) and the full quotient
//! `C_n/(S^1 x S_n)`, equivalent to `M(0,n+1)/S_n`.

pub mod cells;
pub mod chain;
pub mod cohen;
pub mod embedding;
pub mod equivariant;
pub mod error;
pub mod lens;
pub mod modp;
pub mod pipeline;
pub mod snf;
pub mod verify;

pub use cells::{
    enumerate_cells, is_admissible, CactusCell, CellEnumeration, LabeledPermutationStabilizer, Permutation, Shape,
};
pub use chain::{assemble, cacti_complex, homology, ChainComplex, Coefficients, HomologyResult, SparseMatrix};
pub use cohen::{
    basis, coker_delta_dims, cstar_homology, delta, equivariant_series, fixed_points, FixedPoints, Monomial,
};
pub use embedding::{embed, weighted_equal, Configuration, WeightedPoint};
pub use equivariant::{
    barycentric_subdivision, full_quotient_complex, full_quotient_homology, quotient_complex, regularity_check,
    subdivide_until_regular, GroupAction, SimplicialComplexWithAction,
};
pub use error::{Error, Result};
pub use lens::{is_homology_sphere, lens_chain_complex, manifold_obstruction, LensSpec};
pub use pipeline::{
    acyclicity_check, e2_grid, mayer_vietoris_audit, strict_equals_homotopy_audit, torsion_bound_check, E2Grid,
    GridSpace,
};
