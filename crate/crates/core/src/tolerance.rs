//! Numerical tolerances shared by every check in the crate.

use std::sync::OnceLock;

/// Default threshold for orthogonality, norm and zero-pruning checks.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Magnitude below which a stored coefficient is treated as rounding noise
/// and pruned. Far below [`DEFAULT_EPSILON`], so renormalizing a small
/// residual does not amplify the pruning error.
pub const ENTRY_DROP: f64 = 1e-15;

/// Residual norm below which Gram-Schmidt drops a vector as dependent.
pub const GRAM_SCHMIDT_DROP: f64 = 1e-7;

/// Environment variable that overrides [`DEFAULT_EPSILON`].
pub const TOLERANCE_ENV: &str = "WOLDLAB_TOLERANCE";

static EPSILON: OnceLock<f64> = OnceLock::new();

/// Global tolerance. Read once from `WOLDLAB_TOLERANCE`, falling back to
/// [`DEFAULT_EPSILON`] when the variable is unset or not a positive number.
pub fn epsilon() -> f64 {
    *EPSILON.get_or_init(|| {
        std::env::var(TOLERANCE_ENV)
            .ok()
            .and_then(|raw| raw.trim().parse::<f64>().ok())
            .filter(|eps| eps.is_finite() && *eps > 0.0)
            .unwrap_or(DEFAULT_EPSILON)
    })
}
