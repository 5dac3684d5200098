//! Functions on `G`, convolution, and the twisted Hecke algebra `L¹_Φ(G, K)`.

mod function;
mod ops;
mod space;

pub use function::{convolve, GroupFunction, ZERO_TOL};
pub use ops::{
    biequivariance_residual, central_idempotent, epsilon_idempotent, fourier_hs_norm_sq, isotypic_project,
    project_p_phi, HeckeFunction, BIEQUIVARIANCE_TOL,
};
pub use space::{HeckeSpace, MAX_DRAWS};
