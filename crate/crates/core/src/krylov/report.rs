#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    Breakdown,
}

/// Outcome of an iterative solve.
///
/// `residual_history[0]` is the initial residual norm; later entries are the
/// per-iteration residual norms the method tracks (Givens estimates for
/// GMRES, recurrence residuals for CG). `final_residual` is the true
/// `‖b - A x‖₂` recomputed at exit.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub iterations: usize,
    /// `‖b‖₂` of the system solved.
    pub rhs_norm: f64,
    pub residual_history: Vec<f64>,
    pub status: SolveStatus,
    pub final_residual: f64,
    /// Reordering time in seconds.
    pub time_order: f64,
    /// Preconditioner construction time in seconds.
    pub time_precond: f64,
    /// Iteration wall time in seconds.
    pub time_iterate: f64,
    pub time_total: f64,
}

impl SolveReport {
    pub(crate) fn new(
        history: Vec<f64>,
        status: SolveStatus,
        rhs_norm: f64,
        final_residual: f64,
        elapsed: f64,
    ) -> Self {
        debug_assert!(!history.is_empty());
        Self {
            iterations: history.len() - 1,
            rhs_norm,
            residual_history: history,
            status,
            final_residual,
            time_order: 0.0,
            time_precond: 0.0,
            time_iterate: elapsed,
            time_total: elapsed,
        }
    }

    pub fn initial_residual(&self) -> f64 {
        self.residual_history[0]
    }

    /// True final residual relative to `‖b‖`. For a converged solve this is
    /// at most `tol`; see [`stop_scale`].
    pub fn relative_residual(&self) -> f64 {
        if self.rhs_norm == 0.0 {
            self.final_residual
        } else {
            self.final_residual / self.rhs_norm
        }
    }

    /// True final residual relative to the initial residual.
    pub fn reduction(&self) -> f64 {
        let r0 = self.initial_residual();
        if r0 == 0.0 {
            0.0
        } else {
            self.final_residual / r0
        }
    }

    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    /// Sets order/precond times and recomputes the total.
    pub fn with_setup_times(mut self, time_order: f64, time_precond: f64) -> Self {
        self.time_order = time_order;
        self.time_precond = time_precond;
        self.time_total = time_order + time_precond + self.time_iterate;
        self
    }
}

/// Residual scale for the stopping test. A warm start only tightens the
/// target, so a converged solve always has relative residual `<= tol`.
pub(crate) fn stop_scale(r0: f64, b_norm: f64) -> f64 {
    if b_norm > 0.0 {
        r0.min(b_norm)
    } else {
        r0
    }
}
