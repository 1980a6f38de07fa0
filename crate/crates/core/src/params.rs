//! Basic numeric invariants of compression spaces.
//!
//! For a minor size `r` and an `m x n` matrix, an `s`-compression space is the
//! space of matrices sending a fixed `(s+1+n-r)`-dimensional subspace into a
//! fixed `s`-dimensional one. [`kappa`] is its projective dimension and
//! [`delta`] the dimension of the Grassmannian product parametrizing it.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// The quadruple `(m, n, r, k)` indexing a Fano scheme of `k`-planes on the
/// locus of `r x r` minors (or permanents) of an `m x n` matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FanoParams {
    m: i64,
    n: i64,
    r: i64,
    k: i64,
}

impl FanoParams {
    /// Validates `1 < r <= m <= n` and `k >= 0`.
    pub fn new(m: i64, n: i64, r: i64, k: i64) -> Result<Self> {
        if !(1 < r && r <= m && m <= n) {
            return domain(format!(
                "need 1 < r <= m <= n, got (m, n, r) = ({m}, {n}, {r})"
            ));
        }
        if k < 0 {
            return domain(format!("plane dimension k must be >= 0, got {k}"));
        }
        Ok(FanoParams { m, n, r, k })
    }

    pub fn m(&self) -> i64 {
        self.m
    }
    pub fn n(&self) -> i64 {
        self.n
    }
    pub fn r(&self) -> i64 {
        self.r
    }
    pub fn k(&self) -> i64 {
        self.k
    }

    /// Same matrix shape, different plane dimension.
    pub fn with_k(&self, k: i64) -> Result<Self> {
        FanoParams::new(self.m, self.n, self.r, k)
    }

    /// All valid compression indices `0..r`.
    pub fn compression_indices(&self) -> impl Iterator<Item = CompressionIndex> + '_ {
        (0..self.r).map(|s| CompressionIndex { s })
    }

    pub fn index(&self, s: i64) -> Result<CompressionIndex> {
        CompressionIndex::new(self, s)
    }

    pub fn kappa_at(&self, s: i64) -> Result<i64> {
        Ok(kappa(self, self.index(s)?))
    }

    pub fn delta_at(&self, s: i64) -> Result<i64> {
        Ok(delta(self, self.index(s)?))
    }
}

/// Compression index `s` with `0 <= s <= r - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CompressionIndex {
    s: i64,
}

impl CompressionIndex {
    pub fn new(p: &FanoParams, s: i64) -> Result<Self> {
        if s < 0 || s >= p.r {
            return domain(format!(
                "compression index s = {s} outside 0..={}",
                p.r - 1
            ));
        }
        Ok(CompressionIndex { s })
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    /// Width `t = s + 1 + n - r` of the zero block.
    pub fn t(&self, p: &FanoParams) -> i64 {
        self.s + 1 + p.n - p.r
    }
}

/// `mn - (m - s)(s + n - r + 1) - 1`.
pub fn kappa(p: &FanoParams, s: CompressionIndex) -> i64 {
    let s = s.s;
    p.m * p.n - (p.m - s) * (s + p.n - p.r + 1) - 1
}

/// `(s + 1 + n - r)(r - s - 1) + s(m - s)`.
pub fn delta(p: &FanoParams, s: CompressionIndex) -> i64 {
    let s = s.s;
    (s + 1 + p.n - p.r) * (p.r - s - 1) + s * (p.m - s)
}

/// Nonempty exactly when `k < (r - 1) n`; the same for determinants and permanents.
pub fn is_nonempty(p: &FanoParams) -> bool {
    p.k < (p.r - 1) * p.n
}

/// Dimension `delta(s) + (k+1)(kappa(s) - k)` of the `s`-compression component.
pub fn compression_component_dim(p: &FanoParams, s: CompressionIndex) -> Result<i64> {
    let kap = kappa(p, s);
    if p.k > kap {
        return domain(format!(
            "component absent: k = {} exceeds kappa({}) = {kap}",
            p.k, s.s
        ));
    }
    Ok(delta(p, s) + (p.k + 1) * (kap - p.k))
}

/// Dimensions of the `r` components of the Fano scheme of lines, indexed by `s`.
pub fn lines_component_dims(m: i64, n: i64, r: i64) -> Result<Vec<i64>> {
    let p = FanoParams::new(m, n, r, 1)?;
    Ok(p.compression_indices()
        .map(|s| delta(&p, s) + 2 * (kappa(&p, s) - 1))
        .collect())
}

/// Common component dimension `(n - r)(r - 2) + 2nr - n - 5` of lines on a square matrix.
pub fn square_lines_dim(n: i64, r: i64) -> i64 {
    (n - r) * (r - 2) + 2 * n * r - n - 5
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: i64, n: i64, r: i64, k: i64) -> FanoParams {
        FanoParams::new(m, n, r, k).unwrap()
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(p(3, 3, 3, 0).kappa_at(0).unwrap(), 5);
        assert_eq!(p(3, 3, 3, 0).kappa_at(1).unwrap(), 4);
        assert_eq!(p(5, 6, 5, 0).kappa_at(2).unwrap(), 17);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(p(3, 3, 3, 0).delta_at(1).unwrap(), 4);
        assert_eq!(p(5, 6, 5, 0).delta_at(2).unwrap(), 14);
        assert_eq!(p(3, 3, 3, 0).delta_at(0).unwrap(), 2);
    }

    #[test]
    fn out_of_range_index() {
        let q = p(3, 3, 3, 1);
        assert!(matches!(q.kappa_at(3), Err(crate::FanoError::Domain(_))));
        assert!(matches!(q.delta_at(-1), Err(crate::FanoError::Domain(_))));
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(FanoParams::new(3, 3, 1, 1).is_err());
        assert!(FanoParams::new(3, 2, 2, 1).is_err());
        assert!(FanoParams::new(2, 3, 3, 1).is_err());
        assert!(FanoParams::new(3, 3, 3, -1).is_err());
        assert!(FanoParams::new(1, 1, 1, 0).is_err());
    }

    #[test]
    fn nonempty_examples() {
        assert!(is_nonempty(&p(3, 3, 3, 5)));
        assert!(!is_nonempty(&p(3, 3, 3, 6)));
        assert!(is_nonempty(&p(4, 4, 4, 11)));
    }

    #[test]
    fn component_dim_examples() {
        let d = |k, s| {
            let q = p(3, 3, 3, k);
            compression_component_dim(&q, q.index(s).unwrap()).unwrap()
        };
        assert_eq!(d(2, 0), 11);
        assert_eq!(d(3, 1), 8);
        assert_eq!(d(4, 1), 4);
        let q = p(3, 3, 3, 5);
        assert!(compression_component_dim(&q, q.index(1).unwrap()).is_err());
    }

    #[test]
    fn lines_dims() {
        assert_eq!(lines_component_dims(3, 3, 3).unwrap(), vec![10, 10, 10]);
        let four = lines_component_dims(4, 4, 4).unwrap();
        assert_eq!(four, vec![square_lines_dim(4, 4); 4]);
        assert_eq!(four[0], 23);
        // m != n: formula evaluated entrywise, equality not required
        assert_eq!(lines_component_dims(3, 4, 3).unwrap(), vec![12, 13, 14]);
    }

    #[test]
    fn kappa_endpoints_and_convexity() {
        for m in 2..=8 {
            for n in m..=9 {
                for r in 2..=m {
                    let q = p(m, n, r, 0);
                    assert_eq!(q.kappa_at(0).unwrap(), (r - 1) * m - 1);
                    assert_eq!(q.kappa_at(r - 1).unwrap(), (r - 1) * n - 1);
                    for s in 1..r - 1 {
                        let k = |s| q.kappa_at(s).unwrap();
                        assert!(k(s - 1) + k(s + 1) >= 2 * k(s));
                    }
                    for s in q.compression_indices() {
                        let t = s.t(&q);
                        let s0 = s.s();
                        assert_eq!(delta(&q, s), t * (n - t) + s0 * (m - s0));
                        if m == n {
                            let dual = q.index(r - 1 - s0).unwrap();
                            assert_eq!(kappa(&q, s), kappa(&q, dual));
                            assert_eq!(delta(&q, s), delta(&q, dual));
                        }
                    }
                }
            }
        }
    }
}
