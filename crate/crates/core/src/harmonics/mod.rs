//! Decomposition of `Ind_K^G Φ`, twisted spherical functions, and the
//! closed formulas checked against them.

mod center;
mod decomposition;
mod katz;
mod spherical;

pub use center::{center_epimorphism_check, complex_rank, multiplicativity_defect, CenterReport};
pub use decomposition::{
    decompose, frobenius_sum, multiplicity, multiplicity_with_residual, symmetrized_sum, table1_predicted,
    verify_table1, virtual_multiplicity, Decomposition, RemarkCheck, Table1Mismatch, Table1Report, Table1Row,
    ROUNDING_TOL, SYMMETRIZATION_TOL,
};
pub use katz::{katz_candidate, katz_scan, KatzCase, KatzInterpretation, KatzSummary};
pub use spherical::{
    functional_equation_residual, gamma_set, projected_character, representative_pairs, sampled_pairs,
    gamma_set_scaled, spherical_explicit, spherical_explicit_scaled, spherical_functions, spherical_via_averaging,
    zeta_cases_for, zeta_cases_for_label, zeta_comparison, SphericalFunction, TraceScaling, ZetaCase,
};
