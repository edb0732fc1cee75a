//! Multidimensional sieve weights for systems of linear forms.
//!
//! [`forms`] holds systems and root counts, [`series`] the singular series,
//! [`cutoff`] the profile `F`, [`table`] the `lambda` lattice and `w_n`,
//! [`integrals`] the functionals `I_g`, `J_g`, and [`checks`] the restricted
//! weights and main-term comparisons.

pub mod checks;
pub mod cutoff;
pub mod forms;
pub mod integrals;
pub mod series;
pub mod table;

pub use checks::{
    character_restricted_sum_check, concentration_moment_check, gate_check, theorem77_check,
    theorem78_check, w_final, w_star, w_star_all, CharacterReport, GateReport, MomentReport,
    Theorem77Report, Theorem78Report,
};
pub use cutoff::{f_eval, profile_params, psi, PSI_VARIANT};
pub use forms::{find_admissible_tuple, is_admissible, omega_table, Form, LinearSystem, OmegaEntry, OmegaTable};
pub use integrals::{i_g, i_g_mc, i_g_with, j_g, j_g_mc, j_g_with, Integral};
pub use series::{singular_series, singular_series_wb, SingularSeries};
pub use table::{weight_table, LambdaEntry, Lattice, LatticeConfig, WeightTable};
