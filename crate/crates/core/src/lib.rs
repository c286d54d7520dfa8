//! Recovery of planar shapes from their complex area moments through
//! Bergman orthonormal polynomials.
//!
//! The pipeline: [`moments`] builds the Hermitian matrix `μ_kj = ∫ z^k z̄^j dA`,
//! [`arnoldi`] orthonormalizes `1, z, z², …` in that inner product and records
//! the upper Hessenberg matrix of multiplication by `z`, whose scaled
//! diagonals approximate the coefficients of the exterior conformal map
//! ([`faber`]). [`reconstruction`] assembles these into a boundary curve and
//! convergence tables; [`spectra`] computes eigenvalues of the Hessenberg
//! sections.

pub mod arnoldi;
pub mod domain;
pub mod error;
pub mod faber;
pub mod io;
pub mod moments;
pub mod poly;
pub mod precision;
pub mod reconstruction;
pub mod scalar;
pub mod spectra;
pub mod svg;
pub mod tables;

pub use arnoldi::{
    arnoldi_orthonormalize, arnoldi_orthonormalize_with, scaled_capacity, scaled_coefficient, scaled_diagonals,
    scaled_diagonals_indexed,
    ArnoldiOptions, DiagonalIndexing, HessenbergMatrix, OrthonormalBasis, ScaledDiagonals,
};
pub use domain::{DomainSpec, NamedDomain};
pub use error::{Error, Result};
pub use faber::{faber_second_kind, laurent_eval, toeplitz_matrix, triangle_coefficients, LaurentMap};
pub use moments::{
    complex_to_real, contour_moments, parametric_moments, polygon_moments, real_to_complex, MomentMatrix,
    RealMomentArray,
};
pub use poly::{weighted_inner_product, ComplexPolynomial};
pub use precision::PrecisionContext;
pub use reconstruction::{
    curve_points, rate_table, rate_table_from_hessenberg, rate_table_from_moments, reconstruct,
    reconstruct_from_hessenberg, reconstruct_with, sup_distance, RateRow,
    ReconstructionReport,
};
pub use scalar::{Complex, Real};
pub use spectra::{hessenberg_eigenvalues, matched_distance, polynomial_zeros_oracle, recurrence_polynomial, Spectrum};
