use crate::error::{Error, Result};

/// Default number of rank bins.
pub const DEFAULT_RANK_BINS: usize = 20;

/// Bin of a value in `[0, 1]`: `floor(value * bins)`, with 1.0 in the top bin.
pub fn rank(value: f64, bins: usize) -> usize {
    let r = (value * bins as f64) as usize;
    r.min(bins - 1)
}

/// Mean absolute rank difference between two landscapes, divided by `bins`.
///
/// The result lies in `[0, (bins - 1) / bins]`.
pub fn ranking_error(pred: &[f64], label: &[f64], bins: usize) -> Result<f64> {
    if pred.len() != label.len() {
        return Err(Error::arg("prediction and label differ in length"));
    }
    if pred.is_empty() {
        return Err(Error::arg("ranking error needs at least one point"));
    }
    if bins == 0 {
        return Err(Error::arg("bin count must be positive"));
    }
    if pred.iter().chain(label).any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::arg("values must lie in [0, 1]"));
    }
    let total: u64 = pred.iter().zip(label).map(|(p, l)| rank(*p, bins).abs_diff(rank(*l, bins)) as u64).sum();
    Ok(total as f64 / (pred.len() as f64 * bins as f64))
}

/// Fraction of values strictly above `threshold`.
pub fn graspable_fraction(values: &[f64], threshold: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::arg("graspable fraction of an empty landscape"));
    }
    Ok(values.iter().filter(|&&v| v > threshold).count() as f64 / values.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(rank(0.14, 20), 2);
        assert_eq!(rank(0.26, 20), 5);
        assert_eq!(rank(1.0, 20), 19);
        assert_eq!(rank(0.0, 20), 0);
        assert_eq!(ranking_error(&[0.14], &[0.26], 20).unwrap(), 0.15);
        assert_eq!(ranking_error(&[0.3, 0.7], &[0.3, 0.7], 20).unwrap(), 0.0);
        assert_eq!(ranking_error(&[0.0], &[1.0], 20).unwrap(), 19.0 / 20.0);
        assert_eq!(graspable_fraction(&[0.5, 0.2, 0.35, 0.05], 0.3).unwrap(), 0.5);
        assert_eq!(graspable_fraction(&[0.0; 4], 0.3).unwrap(), 0.0);
    }

    #[test]
    fn errors() {
        assert!(ranking_error(&[0.1], &[0.1, 0.2], 20).is_err());
        assert!(ranking_error(&[], &[], 20).is_err());
        assert!(ranking_error(&[1.5], &[0.2], 20).is_err());
        assert!(graspable_fraction(&[], 0.3).is_err());
    }
}
