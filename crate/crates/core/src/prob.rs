//! Validation helpers for classical distributions and stochastic matrices.

use crate::error::{Error, Result};

pub const SUM_TOLERANCE: f64 = 1e-12;

/// Letters with probability at or below this are treated as impossible.
pub const ZERO_PROBABILITY: f64 = 1e-15;

pub fn check_distribution(p: &[f64], what: &str) -> Result<()> {
    if p.is_empty() {
        return Err(Error::validation("non-empty distribution", format!("{what} is empty")));
    }
    if let Some((i, &v)) = p.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
        return Err(Error::validation(
            "nonnegative probabilities",
            format!("{what}[{i}] = {v}"),
        ));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::validation(
            "probabilities sum to one",
            format!("{what} sums to {total:.15}"),
        ));
    }
    Ok(())
}

/// Checks a row-stochastic matrix with `rows` rows of length `cols`.
pub fn check_stochastic(m: &[Vec<f64>], rows: usize, cols: usize, what: &str) -> Result<()> {
    if m.len() != rows {
        return Err(Error::Dimension(format!("{what} has {} rows, expected {rows}", m.len())));
    }
    for (i, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Dimension(format!(
                "{what} row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        check_distribution(row, &format!("{what} row {i}"))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_and_rejects() {
        assert!(check_distribution(&[0.25, 0.75], "p").is_ok());
        assert!(check_distribution(&[0.5, 0.4], "p").is_err());
        assert!(check_distribution(&[1.5, -0.5], "p").is_err());
        assert!(check_stochastic(&[vec![1.0, 0.0], vec![0.5, 0.5]], 2, 2, "t").is_ok());
        assert!(check_stochastic(&[vec![1.0]], 2, 1, "t").is_err());
    }
}
