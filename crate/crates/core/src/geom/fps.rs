use alloc::vec;
use alloc::vec::Vec;

use super::{dist2, Vec3};
use crate::error::{Error, Result};

/// Greedy farthest point sampling.
///
/// Each step adds the point whose distance to the already selected set is
/// largest; ties go to the lowest index.
pub fn farthest_point_sampling(positions: &[Vec3], count: usize, start: usize) -> Result<Vec<usize>> {
    if count == 0 || count > positions.len() {
        return Err(Error::arg(alloc::format!(
            "cannot sample {count} of {} points",
            positions.len()
        )));
    }
    if start >= positions.len() {
        return Err(Error::arg("start index out of range"));
    }
    let mut min_d = vec![f64::INFINITY; positions.len()];
    let mut taken = vec![false; positions.len()];
    let mut out = Vec::with_capacity(count);
    let mut current = start;
    loop {
        out.push(current);
        taken[current] = true;
        if out.len() == count {
            break;
        }
        let p = positions[current];
        let mut best = usize::MAX;
        let mut best_d = f64::NEG_INFINITY;
        for (i, q) in positions.iter().enumerate() {
            if taken[i] {
                continue;
            }
            let d = dist2(&p, q);
            if d < min_d[i] {
                min_d[i] = d;
            }
            if min_d[i] > best_d {
                best_d = min_d[i];
                best = i;
            }
        }
        current = best;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> Vec<Vec3> {
        (0..10).map(|i| Vec3::new(i as f64, 0.0, 0.0)).collect()
    }

    #[test]
    fn line_examples() {
        assert_eq!(farthest_point_sampling(&line(), 2, 0).unwrap(), vec![0, 9]);
        assert_eq!(farthest_point_sampling(&line(), 3, 0).unwrap(), vec![0, 9, 4]);
    }

    #[test]
    fn exhaustion_is_permutation() {
        let mut all = farthest_point_sampling(&line(), 10, 3).unwrap();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn duplicates_never_reselected() {
        let pts = vec![Vec3::zeros(); 4];
        let mut s = farthest_point_sampling(&pts, 4, 0).unwrap();
        s.sort_unstable();
        assert_eq!(s, vec![0, 1, 2, 3]);
    }

    #[test]
    fn bad_arguments() {
        assert!(farthest_point_sampling(&line(), 11, 0).is_err());
        assert!(farthest_point_sampling(&line(), 0, 0).is_err());
        assert!(farthest_point_sampling(&line(), 2, 10).is_err());
    }
}
