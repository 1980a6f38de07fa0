//! Exact rank computations over the rationals.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

/// A sparse row: column index to nonzero value.
pub type SparseRow = BTreeMap<usize, BigRational>;

/// Rank of a sparse matrix. Rows are inserted in order into a row-echelon
/// basis kept normalized to leading coefficient one; a row reduced to zero
/// is dependent. Stops early once the rank reaches `ncols`.
pub fn sparse_rank(rows: Vec<SparseRow>, ncols: usize) -> usize {
    let mut basis: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for mut row in rows {
        if basis.len() == ncols {
            break;
        }
        while let Some((&lead, v)) = row.iter().next() {
            match basis.get(&lead) {
                Some(pivot) => {
                    let factor = v.clone();
                    for (c, pv) in pivot {
                        let entry = row.entry(*c).or_insert_with(BigRational::zero);
                        *entry -= &factor * pv;
                        if entry.is_zero() {
                            row.remove(c);
                        }
                    }
                }
                None => {
                    let inv = v.recip();
                    for value in row.values_mut() {
                        *value *= &inv;
                    }
                    basis.insert(lead, row);
                    break;
                }
            }
        }
    }
    basis.len()
}

/// Rank of a dense matrix given by rows.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let sparse = rows
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c, v.clone()))
                .collect()
        })
        .collect();
    sparse_rank(sparse, ncols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&mat(&[&[1, 2], &[3, 4]])), 2);
        assert_eq!(rank(&mat(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&mat(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, -1]])), 2);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn fractional_entries() {
        let half = BigRational::new(1.into(), 2.into());
        let rows = vec![vec![half.clone(), q(1)], vec![q(1), q(2)], vec![q(3), half]];
        assert_eq!(rank(&rows), 2);
    }

    #[test]
    fn hilbert_is_full_rank() {
        let rows: Vec<Vec<BigRational>> = (1..=6)
            .map(|i| (1..=6).map(|j| BigRational::new(1.into(), (i + j - 1).into())).collect())
            .collect();
        assert_eq!(rank(&rows), 6);
    }
}
