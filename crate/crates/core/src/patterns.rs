//! Torus-fixed points of Fano schemes: coordinate `k`-planes, written as
//! patterns of stars (free entries) and zeros in an `m x n` matrix.
//!
//! A coordinate plane lies on the determinantal or permanental locus exactly
//! when its star graph has no matching of size `r`, equivalently when the
//! stars avoid an `(m-s) x (s+1+n-r)` block of zeros for some `s`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{domain, FanoError, Result};
use crate::params::{kappa, FanoParams};

/// Default bound on `m * n` for exhaustive censuses.
pub const DEFAULT_MAX_CELLS: usize = 25;
/// Bound on `m` and `n` for brute-force orbit canonicalization.
pub const MAX_ORBIT_SIDE: usize = 6;

/// A coordinate subspace of `m x n` matrices: bit `i * n + j` is set when
/// entry `(i, j)` is free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StarPattern {
    m: usize,
    n: usize,
    mask: u64,
}

impl StarPattern {
    pub fn new(m: usize, n: usize, mask: u64) -> Result<Self> {
        if m == 0 || n == 0 || m * n > 64 {
            return domain(format!("pattern size {m}x{n} must be nonempty with at most 64 cells"));
        }
        if m * n < 64 && mask >> (m * n) != 0 {
            return domain("mask has bits outside the matrix");
        }
        Ok(StarPattern { m, n, mask })
    }

    pub fn from_cells(m: usize, n: usize, cells: &[(usize, usize)]) -> Result<Self> {
        let mut mask = 0u64;
        for &(i, j) in cells {
            if i >= m || j >= n {
                return domain(format!("cell ({i}, {j}) outside {m}x{n}"));
            }
            mask |= 1 << (i * n + j);
        }
        StarPattern::new(m, n, mask)
    }

    pub fn full(m: usize, n: usize) -> Result<Self> {
        let cells = m * n;
        let mask = if cells >= 64 { u64::MAX } else { (1u64 << cells) - 1 };
        StarPattern::new(m, n, mask)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn star_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_star(&self, i: usize, j: usize) -> bool {
        self.mask >> (i * self.n + j) & 1 == 1
    }

    /// Stars in row-major order.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        (0..self.m)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.is_star(i, j))
            .collect()
    }

    /// Bitmask of star columns in row `i`.
    pub fn row_bits(&self, i: usize) -> u64 {
        (self.mask >> (i * self.n)) & ((1u64 << self.n) - 1)
    }

    pub fn transpose(&self) -> StarPattern {
        let mut mask = 0u64;
        for (i, j) in self.cells() {
            mask |= 1 << (j * self.m + i);
        }
        StarPattern {
            m: self.n,
            n: self.m,
            mask,
        }
    }

    /// Image under `(i, j) -> (rows[i], cols[j])`.
    pub fn permute(&self, rows: &[usize], cols: &[usize]) -> StarPattern {
        let mut mask = 0u64;
        for (i, j) in self.cells() {
            mask |= 1 << (rows[i] * self.n + cols[j]);
        }
        StarPattern { mask, ..*self }
    }

    pub fn without(&self, i: usize, j: usize) -> StarPattern {
        StarPattern {
            mask: self.mask & !(1 << (i * self.n + j)),
            ..*self
        }
    }
}

impl fmt::Display for StarPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m {
            if i > 0 {
                f.write_str("/")?;
            }
            for j in 0..self.n {
                f.write_str(if self.is_star(i, j) { "*" } else { "0" })?;
            }
        }
        Ok(())
    }
}

impl FromStr for StarPattern {
    type Err = FanoError;

    fn from_str(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s.trim().split('/').collect();
        let n = rows[0].len();
        let mut cells = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(FanoError::Parse(format!("ragged pattern {s:?}")));
            }
            for (j, c) in row.chars().enumerate() {
                match c {
                    '*' => cells.push((i, j)),
                    '0' => {}
                    other => {
                        return Err(FanoError::Parse(format!(
                            "unexpected {other:?} in pattern, use '*' and '0'"
                        )))
                    }
                }
            }
        }
        if n == 0 {
            return Err(FanoError::Parse("empty pattern".into()));
        }
        StarPattern::from_cells(rows.len(), n, &cells).map_err(|e| FanoError::Parse(e.to_string()))
    }
}

impl Serialize for StarPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for StarPattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Matrices sending the coordinate space on columns `sigma` into the
/// coordinate space on rows `tau`. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardCompression {
    pub m: usize,
    pub n: usize,
    pub sigma: Vec<usize>,
    pub tau: Vec<usize>,
}

impl StandardCompression {
    pub fn new(m: usize, n: usize, r: usize, sigma: Vec<usize>, tau: Vec<usize>) -> Result<Self> {
        if sigma.len() != tau.len() + n + 1 - r {
            return domain(format!(
                "|sigma| - |tau| must be n - r + 1 = {}, got {} - {}",
                n + 1 - r,
                sigma.len(),
                tau.len()
            ));
        }
        if sigma.iter().any(|&j| j >= n) || tau.iter().any(|&i| i >= m) {
            return domain("index out of range");
        }
        Ok(StandardCompression { m, n, sigma, tau })
    }

    pub fn s(&self) -> usize {
        self.tau.len()
    }

    /// Rows forced to vanish on the `sigma` columns.
    pub fn zero_rows(&self) -> Vec<usize> {
        (0..self.m).filter(|i| !self.tau.contains(i)).collect()
    }

    /// The largest coordinate subspace inside this compression space.
    pub fn free_pattern(&self) -> StarPattern {
        let mut zero = 0u64;
        for i in self.zero_rows() {
            for &j in &self.sigma {
                zero |= 1 << (i * self.n + j);
            }
        }
        let full = StarPattern::full(self.m, self.n).expect("valid size");
        StarPattern {
            mask: full.mask & !zero,
            ..full
        }
    }

    pub fn contains(&self, p: &StarPattern) -> bool {
        p.mask & !self.free_pattern().mask == 0
    }
}

/// A zero block witnessing membership in a standard compression space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroBlock {
    pub s: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl ZeroBlock {
    pub fn compression(&self, m: usize, n: usize, r: usize) -> StandardCompression {
        let tau = (0..m).filter(|i| !self.rows.contains(i)).collect();
        StandardCompression::new(m, n, r, self.cols.clone(), tau).expect("block has compression shape")
    }
}

/// Maximum matching in the bipartite row/column graph with one edge per star.
pub fn max_matching_size(p: &StarPattern) -> usize {
    fn augment(p: &StarPattern, i: usize, seen: &mut u64, match_col: &mut [Option<usize>]) -> bool {
        let mut free = p.row_bits(i) & !*seen;
        while free != 0 {
            let j = free.trailing_zeros() as usize;
            free &= free - 1;
            *seen |= 1 << j;
            let ok = match match_col[j] {
                None => true,
                Some(i2) => augment(p, i2, seen, match_col),
            };
            if ok {
                match_col[j] = Some(i);
                return true;
            }
        }
        false
    }
    let mut match_col = vec![None; p.n];
    (0..p.m)
        .filter(|&i| {
            let mut seen = 0u64;
            augment(p, i, &mut seen, &mut match_col)
        })
        .count()
}

/// Iterates `k`-subsets of `0..n` as bitmasks in colex order.
pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit: u128 = 1u128 << n;
    let mut cur: Option<u64> = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(u64::MAX >> (64 - k))
    };
    std::iter::from_fn(move || {
        let out = cur?;
        cur = if out == 0 {
            None
        } else {
            let c = out & out.wrapping_neg();
            let r = out as u128 + c as u128;
            if r >= limit {
                None
            } else {
                let r = r as u64;
                Some((((r ^ out) >> 2) / c) | r)
            }
        };
        Some(out)
    })
}

fn bits(mut x: u64) -> Vec<usize> {
    let mut out = Vec::new();
    while x != 0 {
        out.push(x.trailing_zeros() as usize);
        x &= x - 1;
    }
    out
}

/// Searches for a zero block of shape `(m-s) x (s+1+n-r)`, smallest `s` first.
pub fn lies_in_standard_compression(p: &StarPattern, r: usize) -> Option<ZeroBlock> {
    let (m, n) = (p.m, p.n);
    if r == 0 || r > m.min(n) + 1 {
        return None;
    }
    let all_cols = (1u64 << n) - 1;
    for s in 0..r.min(m + 1) {
        let t = s + 1 + n - r;
        if t > n {
            continue;
        }
        for rows in combinations(m, m - s) {
            let used = bits(rows).iter().fold(0u64, |acc, &i| acc | p.row_bits(i));
            let free = all_cols & !used;
            if free.count_ones() as usize >= t {
                return Some(ZeroBlock {
                    s,
                    rows: bits(rows),
                    cols: bits(free).into_iter().take(t).collect(),
                });
            }
        }
    }
    None
}

/// True when the coordinate plane lies on the locus of `r x r` minors (or
/// permanents); the two loci have the same coordinate planes.
pub fn is_fano_fixed_point(p: &StarPattern, r: usize) -> bool {
    max_matching_size(p) < r
}

fn check_cells(p: &FanoParams, max_cells: usize) -> Result<(usize, usize, usize, usize)> {
    let (m, n) = (p.m() as usize, p.n() as usize);
    if m * n > max_cells {
        return Err(FanoError::Resource(format!(
            "census over {m}x{n} exceeds the cap of {max_cells} cells"
        )));
    }
    Ok((m, n, p.r() as usize, p.k() as usize + 1))
}

fn fixed_points(m: usize, n: usize, r: usize, stars: usize) -> impl Iterator<Item = StarPattern> {
    combinations(m * n, stars)
        .map(move |mask| StarPattern { m, n, mask })
        .filter(move |q| is_fano_fixed_point(q, r))
}

/// Number of coordinate `k`-planes on the locus, with the default cap.
pub fn count_fixed_points(p: &FanoParams) -> Result<BigUint> {
    count_fixed_points_capped(p, DEFAULT_MAX_CELLS)
}

pub fn count_fixed_points_capped(p: &FanoParams, max_cells: usize) -> Result<BigUint> {
    let (m, n, r, stars) = check_cells(p, max_cells)?;
    Ok(BigUint::from(fixed_points(m, n, r, stars).count()))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn heap(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(perm.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, out);
            let j = if k % 2 == 0 { i } else { 0 };
            perm.swap(j, k - 1);
        }
    }
    heap(n, &mut perm, &mut out);
    out
}

/// Minimal mask over all column permutations, rows held fixed: columns are
/// sorted so that the last row's stars come first, ties broken upward.
fn best_column_order(p: &StarPattern) -> u64 {
    let mut keys: Vec<u64> = (0..p.n)
        .map(|j| (0..p.m).fold(0u64, |acc, i| acc | (p.is_star(i, j) as u64) << i))
        .collect();
    keys.sort_unstable_by(|a, b| b.cmp(a));
    let mut mask = 0u64;
    for (pos, key) in keys.iter().enumerate() {
        for i in bits(*key) {
            mask |= 1 << (i * p.n + pos);
        }
    }
    mask
}

/// Orbit representative under independent row and column permutations: the
/// image with the smallest row-major bitmask.
pub fn orbit_canonical_form(p: &StarPattern) -> Result<StarPattern> {
    if p.m > MAX_ORBIT_SIDE || p.n > MAX_ORBIT_SIDE {
        return Err(FanoError::Resource(format!(
            "orbit canonicalization is capped at {MAX_ORBIT_SIDE}x{MAX_ORBIT_SIDE}"
        )));
    }
    let ident: Vec<usize> = (0..p.n).collect();
    let mask = permutations(p.m)
        .iter()
        .map(|rows| best_column_order(&p.permute(rows, &ident)))
        .min()
        .expect("at least one permutation");
    Ok(StarPattern { mask, ..*p })
}

/// One orbit of fixed points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedOrbit {
    pub representative: StarPattern,
    pub size: u64,
}

/// Orbits of coordinate `k`-planes on the locus, ordered by representative.
pub fn fixed_orbits(p: &FanoParams) -> Result<Vec<FixedOrbit>> {
    fixed_orbits_capped(p, DEFAULT_MAX_CELLS)
}

pub fn fixed_orbits_capped(p: &FanoParams, max_cells: usize) -> Result<Vec<FixedOrbit>> {
    let (m, n, r, stars) = check_cells(p, max_cells)?;
    if m > MAX_ORBIT_SIDE || n > MAX_ORBIT_SIDE {
        return Err(FanoError::Resource(format!(
            "orbit canonicalization is capped at {MAX_ORBIT_SIDE}x{MAX_ORBIT_SIDE}"
        )));
    }
    let mut orbits: BTreeMap<u64, u64> = BTreeMap::new();
    for q in fixed_points(m, n, r, stars) {
        *orbits.entry(orbit_canonical_form(&q)?.mask).or_default() += 1;
    }
    Ok(orbits
        .into_iter()
        .map(|(mask, size)| FixedOrbit {
            representative: StarPattern { m, n, mask },
            size,
        })
        .collect())
}

pub fn count_fixed_orbits(p: &FanoParams) -> Result<usize> {
    Ok(fixed_orbits(p)?.len())
}

/// Whether the `s`- and `s2`-compression components share a point. Both
/// components and their intersection are torus-stable, so this reduces to a
/// coordinate plane fitting inside a standard compression space of each type.
pub fn compression_components_meet(p: &FanoParams, s: i64, s2: i64) -> Result<bool> {
    let (a, b) = (p.index(s)?, p.index(s2)?);
    let k = p.k();
    if k > kappa(p, a) || k > kappa(p, b) {
        return Ok(false);
    }
    if s == s2 {
        return Ok(true);
    }
    let (m, n) = (p.m(), p.n());
    let (rows1, cols1) = (m - s, a.t(p));
    let (rows2, cols2) = (m - s2, b.t(p));
    let overlap = rows1.min(rows2) * cols1.min(cols2);
    let zeros = rows1 * cols1 + rows2 * cols2 - overlap;
    Ok(m * n - zeros > k)
}

/// Compression components present for `p` and which pairs meet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressionGraph {
    pub present: Vec<i64>,
    pub edges: Vec<(i64, i64)>,
    pub connected_components: usize,
}

pub fn compression_graph(p: &FanoParams) -> Result<CompressionGraph> {
    let present: Vec<i64> = p
        .compression_indices()
        .filter(|&c| p.k() <= kappa(p, c))
        .map(|c| c.s())
        .collect();
    let mut edges = Vec::new();
    let mut parent: Vec<usize> = (0..present.len()).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, &s) in present.iter().enumerate() {
        for (j, &s2) in present.iter().enumerate().skip(i + 1) {
            if compression_components_meet(p, s, s2)? {
                edges.push((s, s2));
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let connected_components = (0..present.len())
        .filter(|&i| root(&mut parent, i) == i)
        .count();
    Ok(CompressionGraph {
        present,
        edges,
        connected_components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> StarPattern {
        s.parse().unwrap()
    }

    fn fp(m: i64, n: i64, r: i64, k: i64) -> FanoParams {
        FanoParams::new(m, n, r, k).unwrap()
    }

    #[test]
    fn parse_and_format() {
        let p = pat("00*/00*/***");
        assert_eq!(p.to_string(), "00*/00*/***");
        assert_eq!(p.cells(), vec![(0, 2), (1, 2), (2, 0), (2, 1), (2, 2)]);
        assert!("0*/x0".parse::<StarPattern>().is_err());
        assert!("0*/000".parse::<StarPattern>().is_err());
    }

    #[test]
    fn matching_examples() {
        assert_eq!(max_matching_size(&pat("***/***/***")), 3);
        assert_eq!(max_matching_size(&pat("***/000/000")), 1);
        assert_eq!(max_matching_size(&pat("00*/00*/***")), 2);
        assert_eq!(max_matching_size(&pat("*00/0*0/00*")), 3);
        assert_eq!(max_matching_size(&pat("000/000")), 0);
    }

    #[test]
    fn zero_block_examples() {
        let z = lies_in_standard_compression(&pat("00*/00*/***"), 3).unwrap();
        assert_eq!(z, ZeroBlock { s: 1, rows: vec![0, 1], cols: vec![0, 1] });
        assert!(z.compression(3, 3, 3).contains(&pat("00*/00*/***")));
        assert!(lies_in_standard_compression(&pat("***/***/***"), 3).is_none());
        for mask in combinations(9, 2) {
            let q = StarPattern::new(3, 3, mask).unwrap();
            assert!(lies_in_standard_compression(&q, 3).is_some());
            assert!(is_fano_fixed_point(&q, 3));
        }
        assert!(!is_fano_fixed_point(&pat("*00/0*0/00*"), 3));
        assert!(is_fano_fixed_point(&pat("000/000"), 1));
        assert!(!is_fano_fixed_point(&pat("000/0*0"), 1));
    }

    #[test]
    fn combinations_colex() {
        let all: Vec<u64> = combinations(4, 2).collect();
        assert_eq!(all, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(combinations(5, 0).count(), 1);
        assert_eq!(combinations(3, 4).count(), 0);
        assert_eq!(combinations(64, 64).count(), 1);
        assert_eq!(combinations(10, 10).count(), 1);
    }

    #[test]
    fn census_3x3() {
        assert_eq!(count_fixed_points(&fp(3, 3, 3, 4)).unwrap(), BigUint::from(45u32));
        assert_eq!(count_fixed_points(&fp(3, 3, 3, 5)).unwrap(), BigUint::from(6u32));
        assert_eq!(count_fixed_points(&fp(3, 3, 3, 1)).unwrap(), BigUint::from(36u32));
        let orbits = fixed_orbits(&fp(3, 3, 3, 4)).unwrap();
        let mut sizes: Vec<u64> = orbits.iter().map(|o| o.size).collect();
        sizes.sort();
        assert_eq!(sizes, vec![9, 18, 18]);
        assert_eq!(count_fixed_orbits(&fp(3, 3, 3, 5)).unwrap(), 2);
        // two stars: same row, same column, or neither
        assert_eq!(count_fixed_orbits(&fp(3, 3, 3, 1)).unwrap(), 3);
    }

    #[test]
    fn census_cap() {
        let big = fp(5, 6, 3, 2);
        assert!(matches!(count_fixed_points(&big), Err(FanoError::Resource(_))));
        assert!(count_fixed_points_capped(&fp(2, 2, 2, 0), 4).is_ok());
        let wide = StarPattern::new(7, 2, 0).unwrap();
        assert!(matches!(orbit_canonical_form(&wide), Err(FanoError::Resource(_))));
    }

    fn brute_canonical(p: &StarPattern) -> u64 {
        let mut best = u64::MAX;
        for rows in permutations(p.m) {
            for cols in permutations(p.n) {
                best = best.min(p.permute(&rows, &cols).mask);
            }
        }
        best
    }

    #[test]
    fn canonical_matches_brute_force() {
        for (m, n) in [(2, 3), (3, 3), (3, 2), (2, 4)] {
            for mask in 0..1u64 << (m * n) {
                let q = StarPattern::new(m, n, mask).unwrap();
                assert_eq!(orbit_canonical_form(&q).unwrap().mask, brute_canonical(&q));
            }
        }
    }

    #[test]
    fn orbit_of_p_has_nine_images() {
        let p = pat("00*/00*/***");
        let mut images = std::collections::BTreeSet::new();
        for rows in permutations(3) {
            for cols in permutations(3) {
                images.insert(p.permute(&rows, &cols).mask);
            }
        }
        assert_eq!(images.len(), 9);
        let canon: std::collections::BTreeSet<u64> = images
            .iter()
            .map(|&mask| orbit_canonical_form(&StarPattern::new(3, 3, mask).unwrap()).unwrap().mask)
            .collect();
        assert_eq!(canon.len(), 1);
    }

    #[test]
    fn meeting_matches_brute_force() {
        // compare against a search over all pairs of standard compressions
        for (m, n, r) in [(3, 3, 3), (3, 4, 3), (4, 4, 3), (4, 4, 4), (3, 5, 2)] {
            for k in 0..(r - 1) * n {
                let p = fp(m, n, r, k);
                for s in 0..r {
                    for s2 in 0..r {
                        let fast = compression_components_meet(&p, s, s2).unwrap();
                        let slow = brute_meet(&p, s as usize, s2 as usize);
                        assert_eq!(fast, slow, "{p:?} s={s} s2={s2}");
                    }
                }
            }
        }
    }

    fn standard(p: &FanoParams, s: usize) -> Vec<StandardCompression> {
        let (m, n, r) = (p.m() as usize, p.n() as usize, p.r() as usize);
        let mut out = Vec::new();
        for sig in combinations(n, s + 1 + n - r) {
            for tau in combinations(m, s) {
                out.push(StandardCompression::new(m, n, r, bits(sig), bits(tau)).unwrap());
            }
        }
        out
    }

    fn brute_meet(p: &FanoParams, s: usize, s2: usize) -> bool {
        let k = p.k() as u32;
        standard(p, s).iter().any(|a| {
            standard(p, s2)
                .iter()
                .any(|b| (a.free_pattern().mask & b.free_pattern().mask).count_ones() >= k + 1)
        })
    }

    #[test]
    fn compression_graph_square() {
        let g = compression_graph(&fp(3, 3, 3, 4)).unwrap();
        assert_eq!(g.present, vec![0, 1, 2]);
        assert!(g.edges.is_empty());
        assert_eq!(g.connected_components, 3);
        let g = compression_graph(&fp(3, 3, 3, 2)).unwrap();
        assert_eq!(g.present, vec![0, 1, 2]);
        assert_eq!(g.connected_components, 1);
    }
}
