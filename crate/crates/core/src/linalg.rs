//! Exact rank over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Rank of a dense integer matrix, by fraction-free row reduction with
/// each row divided through by its content after every update.
pub fn rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    rows.retain(|r| r.iter().any(|c| !c.is_zero()));
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(pivot) = (rank..rows.len())
            .filter(|&r| !rows[r][col].is_zero())
            .min_by_key(|&r| rows[r][col].abs())
        else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let prow = &head[rank];
        let pv = &prow[col];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for c in col..cols {
                row[c] = pv * &row[c] - &factor * &prow[c];
            }
            reduce_content(row);
        }
        rank += 1;
    }
    rank
}

fn reduce_content(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for c in row.iter() {
        if !c.is_zero() {
            g = g.gcd(c);
            if g.is_one() {
                return;
            }
        }
    }
    if !g.is_zero() && !g.is_one() {
        for c in row.iter_mut() {
            *c /= &g;
        }
    }
}

/// Rank of sparse rows restricted to a set of columns.
pub fn restricted_rank(rows: &[Vec<(usize, i64)>], columns: &[usize]) -> usize {
    let mut index = std::collections::HashMap::with_capacity(columns.len());
    for (j, &c) in columns.iter().enumerate() {
        index.insert(c, j);
    }
    let dense: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let mut d = vec![BigInt::zero(); columns.len()];
            for &(c, v) in r {
                if let Some(&j) = index.get(&c) {
                    d[j] += v;
                }
            }
            d
        })
        .collect();
    rank(dense)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(m(&[])), 0);
        assert_eq!(rank(m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), 2);
        assert_eq!(rank(m(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]])), 3);
        assert_eq!(rank(m(&[&[2, 4, 6], &[3, 6, 10]])), 2);
    }

    #[test]
    fn restriction_drops_columns() {
        let rows = vec![vec![(0, 1), (1, -1)], vec![(1, 1), (2, -1)]];
        assert_eq!(restricted_rank(&rows, &[0, 1, 2]), 2);
        assert_eq!(restricted_rank(&rows, &[0, 1]), 2);
        assert_eq!(restricted_rank(&rows, &[0]), 1);
        assert_eq!(restricted_rank(&rows, &[]), 0);
    }
}
