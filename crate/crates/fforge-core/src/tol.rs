//! Scale-aware residual helpers.
//!
//! Identities are checked as `|Σ termᵢ| / max(maxᵢ |termᵢ|, floor)`: the sum
//! is normalised by the magnitude of the largest participating term, so a
//! residual of `1e-12` means twelve digits cancelled regardless of whether
//! the terms are of order `1e3` or `1e-5`.

/// Floor below which a term's magnitude no longer contributes to the scale,
/// preventing division by values that are themselves pure rounding noise.
pub const SCALE_FLOOR: f64 = 1e-30;

/// Normalised residual of a sum that should vanish: `|Σ| / max(|termᵢ|, floor)`.
pub fn normalized_residual(terms: &[f64]) -> f64 {
    let sum: f64 = terms.iter().sum();
    let scale = terms.iter().fold(SCALE_FLOOR, |m, t| m.max(t.abs()));
    sum.abs() / scale
}

/// Normalised defect of an equality `a = b`: `|a - b| / max(|a|, |b|, floor)`.
pub fn relative_defect(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(SCALE_FLOOR)
}

/// Largest normalised defect over paired values.
pub fn max_relative_defect(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| relative_defect(*x, *y))
        .fold(0.0, f64::max)
}

/// Residual of a value that should vanish, normalised by an external scale.
pub fn scaled_residual(value: f64, scale: f64) -> f64 {
    value.abs() / scale.abs().max(SCALE_FLOOR)
}

/// Residual of a sum whose terms carry their own scales (each scale is at
/// least the term's magnitude, and survives even when the term itself
/// cancelled to rounding noise upstream): `|Σ valueᵢ| / max scaleᵢ`.
pub fn residual_with_scales(terms: &[(f64, f64)]) -> f64 {
    let sum: f64 = terms.iter().map(|(v, _)| v).sum();
    let scale = terms.iter().fold(SCALE_FLOOR, |m, (_, s)| m.max(s.abs()));
    sum.abs() / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_is_scale_invariant() {
        let small = normalized_residual(&[1e-10, -1e-10]);
        let large = normalized_residual(&[1e10, -1e10]);
        assert_eq!(small, 0.0);
        assert_eq!(large, 0.0);
        let off = normalized_residual(&[1.0, -1.0 + 1e-9]);
        assert!(off > 0.9e-9 && off < 1.1e-9);
    }

    #[test]
    fn defect_of_equal_values_is_zero() {
        assert_eq!(relative_defect(3.0, 3.0), 0.0);
        assert!(relative_defect(1.0, 1.0 + 1e-8) < 1.1e-8);
    }

    #[test]
    fn all_zero_terms_give_zero_residual() {
        assert_eq!(normalized_residual(&[0.0, 0.0]), 0.0);
    }
}
