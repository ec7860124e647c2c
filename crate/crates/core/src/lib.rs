//! Exact linear-algebra toolkit for free (noncommutative) loci: monic linear
//! pencils, noncommutative polynomials and their realizations, factorization
//! into atoms, and numeric spectra.

pub mod algebra;
pub mod cpoly;
pub mod decompose;
pub mod error;
pub mod factor;
pub mod flip;
pub mod higman;
pub mod matrix;
pub mod ncpoly;
pub mod perturb;
pub mod rational;
pub mod realization;
pub mod spectra;
pub mod subspace;
pub mod tuple;
pub mod upoly;

pub use algebra::{
    find_invariant_subspace, irreducible_invariant_subspace, is_irreducible_pencil, is_jointly_nilpotent,
    InvariantSearch,
};
pub use cpoly::{det_cpoly, CPoly};
pub use decompose::{
    block_triangularize, degree_growth, det_generic, fl_minimal_blocks, pencil_similar, BlockKind, DegreeGrowth,
    PencilDecomposition,
};
pub use error::{Error, Result};
pub use factor::{
    conv_thresholds, factor, is_atom, locus_equal, locus_subset, locus_witness, minimal_pencil,
    stably_associated_atoms, Factorization, LocusComparison, SplitCertificate,
};
pub use flip::{flip_poly_construct, flip_poly_obstruction, FlipObstruction};
pub use higman::{det_generic_poly, higman_linearize};
pub use matrix::QMatrix;
pub use ncpoly::{NCPoly, Word};
pub use perturb::{check_nondegenerate, complementary_invariant, PerturbationData};
pub use rational::{QVector, Rational};
pub use realization::{
    invert_realization, is_minimal, minimize, realization_to_poly, realize_inverse_of_poly, realize_poly,
    realize_product, realize_sum, similarity_between, Realization, RealizationReport,
};
pub use spectra::{
    boundary_sample, classify_point, jacobi_gradient, smooth_density_experiment, HPencil, PointClass, TOLERANCES,
};
pub use subspace::Subspace;
pub use tuple::{MatrixTuple, MonicPencil};
pub use upoly::UPoly;
