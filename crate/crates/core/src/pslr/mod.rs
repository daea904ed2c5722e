//! Power-series Schur inverse with low-rank correction.
//!
//! With `K = AᵀA` the Schur complement is `S = C + B K⁻¹ Bᵀ = C (I - M)` for
//! `M = -C⁻¹ B K⁻¹ Bᵀ`. Truncating `(I - M)⁻¹` after `m` powers leaves the
//! remainder `E(m) = C M^{m+1} C⁻¹`, i.e.
//! `S⁻¹ = (Σ_{i=0}^{m} Mⁱ C⁻¹)(I - E(m))⁻¹`. Arnoldi gives `E(m) ≈ V H Vᵀ`
//! and the Woodbury identity inverts `I - V H Vᵀ` as `I + V G Vᵀ`.

mod diagnostics;
mod lowrank;
mod pinv;
mod precond;
mod series;

pub use diagnostics::{error_diagnostics, spectral_radius, ErrorDiagnostics};
pub use lowrank::{woodbury_g, LowRankCorrection, CORRECTION_PIVOT_TOL};
pub use pinv::{pinv_solve, IdentitySplitting, PinvOperator};
pub use precond::{
    apply_pslr, build_pslr, factor_ata, factor_c, AtaSolver, PreconditionedSchur, PslrConfig, PslrPreconditioner,
    SchurInverse,
};
pub use series::{
    build_errop, power_series_apply, schur_m_operator, ErrOperator, PowerOperator, SchurComplement, SchurM,
};
