//! Small dense linear algebra at two levels: plain `f64` 4×4 systems and
//! systems whose entries are Taylor jets.
//!
//! The jet-level solver is what turns the velocity Hessian and the spray
//! right-hand side — both jets — into spray coefficients that are themselves
//! jets, so the nonlinear connection and curvature can be read off by formal
//! differentiation. Pivoting decisions are made on the constant terms (the
//! actual matrix values at the sample point); the jet arithmetic then carries
//! every admissible derivative of the solution along for free.

use crate::jet::Jet;

use super::GeometryError;

/// Solves `a · x = b` for a 4-vector by Gaussian elimination with partial
/// pivoting. Fails with [`GeometryError::DegenerateMetric`] when the best
/// available pivot is below `PIVOT_RTOL` relative to the largest entry.
pub fn solve4(a: &[[f64; 4]; 4], b: &[f64; 4]) -> Result<[f64; 4], GeometryError> {
    let mut m = *a;
    let mut rhs = *b;
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |acc, v| acc.max(v.abs()))
        .max(1.0);
    for col in 0..4 {
        let pivot_row = (col..4)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        let pivot = m[pivot_row][col];
        if pivot.abs() <= super::PIVOT_RTOL * scale {
            return Err(GeometryError::DegenerateMetric { pivot });
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        for row in col + 1..4 {
            let f = m[row][col] / pivot;
            if f == 0.0 {
                continue;
            }
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = [0.0; 4];
    for col in (0..4).rev() {
        let mut acc = rhs[col];
        for k in col + 1..4 {
            acc -= m[col][k] * x[k];
        }
        x[col] = acc / m[col][col];
    }
    Ok(x)
}

/// Inverse of a 4×4 matrix, column by column through [`solve4`].
pub fn invert4(a: &[[f64; 4]; 4]) -> Result<[[f64; 4]; 4], GeometryError> {
    let mut inv = [[0.0; 4]; 4];
    for col in 0..4 {
        let mut e = [0.0; 4];
        e[col] = 1.0;
        let x = solve4(a, &e)?;
        for row in 0..4 {
            inv[row][col] = x[row];
        }
    }
    Ok(inv)
}

/// Solves the jet-valued system `a · x = b` where each entry is a jet.
///
/// Elimination order and pivoting are decided on the constant terms, then the
/// row operations are carried out in jet arithmetic, so the result jets hold
/// the solution *and* its derivatives up to the meet of the input budgets.
pub fn solve4_jets(a: &[[Jet; 4]; 4], b: &[Jet; 4]) -> Result<[Jet; 4], GeometryError> {
    let mut m: Vec<Vec<Jet>> = a.iter().map(|row| row.to_vec()).collect();
    let mut rhs: Vec<Jet> = b.to_vec();
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |acc, j| acc.max(j.value().abs()))
        .max(1.0);
    for col in 0..4 {
        let pivot_row = (col..4)
            .max_by(|&i, &j| m[i][col].value().abs().total_cmp(&m[j][col].value().abs()))
            .unwrap();
        let pivot_value = m[pivot_row][col].value();
        if pivot_value.abs() <= super::PIVOT_RTOL * scale {
            return Err(GeometryError::DegenerateMetric { pivot: pivot_value });
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        let pivot_inv = m[col][col].recip()?;
        for row in col + 1..4 {
            if m[row][col].is_empty() {
                continue;
            }
            let f = m[row][col].mul(&pivot_inv);
            for k in col..4 {
                let delta = f.mul(&m[col][k]);
                m[row][k] = m[row][k].sub(&delta);
            }
            let delta = f.mul(&rhs[col]);
            rhs[row] = rhs[row].sub(&delta);
        }
    }
    let mut x: Vec<Jet> = rhs.clone();
    for col in (0..4).rev() {
        let mut acc = rhs[col].clone();
        for k in col + 1..4 {
            let delta = m[col][k].mul(&x[k]);
            acc = acc.sub(&delta);
        }
        x[col] = acc.div(&m[col][col])?;
    }
    Ok(x.try_into().expect("length 4"))
}
