//! Exact rank of integer matrices by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Rank over the rationals using checked 64-bit arithmetic.
///
/// Every intermediate entry is a minor of the input, so the divisions are
/// exact; [`Error::Overflow`] is returned as soon as one stops fitting.
pub fn rank_exact(m: &[Vec<i64>]) -> Result<usize> {
    let mut a: Vec<Vec<i64>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = 1i64;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c];
        for i in (r + 1)..rows {
            let lead = a[i][c];
            for j in (c + 1)..cols {
                let x = pivot
                    .checked_mul(a[i][j])
                    .and_then(|x| lead.checked_mul(a[r][j]).and_then(|y| x.checked_sub(y)))
                    .ok_or(Error::Overflow)?;
                a[i][j] = x / prev;
            }
            a[i][c] = 0;
        }
        prev = pivot;
        r += 1;
    }
    Ok(r)
}

/// Same elimination in arbitrary precision; never overflows.
pub fn rank_bigint(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in (r + 1)..rows {
            let lead = a[i][c].clone();
            for j in (c + 1)..cols {
                let x = &pivot * &a[i][j] - &lead * &a[r][j];
                a[i][j] = x / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// Exact rank, falling back to arbitrary precision on overflow.
pub fn rank(m: &[Vec<i64>]) -> usize {
    rank_exact(m).unwrap_or_else(|_| rank_bigint(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    /// Plain Gaussian elimination over exact rationals.
    fn rank_rational(m: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<BigRational>> = m
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| BigRational::from_integer(x.into()))
                    .collect()
            })
            .collect();
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            for i in 0..rows {
                if i != r && !a[i][c].is_zero() {
                    let f = &a[i][c] / &a[r][c];
                    for j in c..cols {
                        let t = &f * &a[r][j];
                        a[i][j] -= t;
                    }
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn small_cases() {
        assert_eq!(rank_exact(&[vec![-1], vec![1], vec![0]]).unwrap(), 1);
        assert_eq!(rank_exact(&[vec![0, 0], vec![0, 0]]).unwrap(), 0);
        assert_eq!(rank_exact(&[]).unwrap(), 0);
        assert_eq!(rank_exact(&[vec![], vec![]]).unwrap(), 0);
        assert_eq!(rank_exact(&[vec![1, 2], vec![2, 4]]).unwrap(), 1);
        assert_eq!(rank_exact(&[vec![0, 1], vec![1, 0]]).unwrap(), 2);
    }

    #[test]
    fn six_point_boundary_has_rank_five() {
        let m = vec![
            vec![1, 0, 0, -1, 1, 0, 0],
            vec![-1, 1, 0, 0, 0, 0, -1],
            vec![0, -1, 1, 0, 0, 0, 0],
            vec![0, 0, -1, 1, 0, 0, 0],
            vec![0, 0, 0, 0, -1, 1, 0],
            vec![0, 0, 0, 0, 0, -1, 1],
        ];
        assert_eq!(rank_exact(&m).unwrap(), 5);
        assert_eq!(rank_bigint(&m), 5);
    }

    #[test]
    fn overflow_is_reported_and_recovered() {
        let big = 1i64 << 40;
        let m = vec![vec![big, 1, 0], vec![1, big, 1], vec![0, 1, big]];
        assert_eq!(rank_exact(&m), Err(Error::Overflow));
        assert_eq!(rank(&m), 3);
        assert_eq!(rank_bigint(&m), rank_rational(&m));
    }

    proptest! {
        #[test]
        fn matches_rational_elimination(
            rows in 0usize..7,
            cols in 0usize..7,
            seed in proptest::collection::vec(-2i64..=2, 49),
        ) {
            let m: Vec<Vec<i64>> = (0..rows)
                .map(|i| (0..cols).map(|j| seed[i * 7 + j]).collect())
                .collect();
            let expected = rank_rational(&m);
            prop_assert_eq!(rank_exact(&m).unwrap(), expected);
            prop_assert_eq!(rank_bigint(&m), expected);
        }
    }
}
