use crate::error::Result;
use crate::fem::{FlowForm, OperatorSet};
use crate::sparse::{smallest_generalized_eigenvalue, CsrMatrix};

/// Discrete Korn constant: half the smallest eigenvalue of
/// `(M_u + K_form) x = λ (M_u + K_grad) x`.
pub fn estimate_kappa(ops: &OperatorSet, form: FlowForm, tolerance: f64) -> Result<f64> {
    let a = CsrMatrix::linear_combination(&[(1.0, &ops.m_u), (1.0, &ops.form_stiffness(form))])?;
    let b = CsrMatrix::linear_combination(&[(1.0, &ops.m_u), (1.0, &ops.k_grad)])?;
    Ok(0.5 * smallest_generalized_eigenvalue(&a, &b, tolerance)?)
}
