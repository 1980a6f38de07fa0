//! Exact polynomial arithmetic for matrices of linear forms in `z_0..z_k`:
//! minors, permanents and membership of a `k`-plane in the locus.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::classify::Family;
use crate::error::{domain, Result};
use crate::linalg;
use crate::patterns::combinations;

/// A linear form `sum_i coeffs[i] * z_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinForm {
    coeffs: Vec<BigRational>,
}

impl LinForm {
    pub fn zero(nvars: usize) -> Self {
        LinForm {
            coeffs: vec![BigRational::zero(); nvars],
        }
    }

    /// The variable `z_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut f = LinForm::zero(nvars);
        f.coeffs[i] = BigRational::one();
        f
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        LinForm { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        LinForm {
            coeffs: coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &LinForm) -> LinForm {
        LinForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> LinForm {
        LinForm {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Same form viewed in a larger variable set.
    pub fn extend(&self, nvars: usize) -> LinForm {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(nvars, BigRational::zero());
        LinForm { coeffs }
    }
}

/// An `m x n` matrix of linear forms sharing one variable set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinMatrix {
    m: usize,
    n: usize,
    nvars: usize,
    entries: Vec<LinForm>,
}

impl LinMatrix {
    pub fn zeros(m: usize, n: usize, nvars: usize) -> Self {
        LinMatrix {
            m,
            n,
            nvars,
            entries: vec![LinForm::zero(nvars); m * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<LinForm>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        let nvars = rows.first().and_then(|r| r.first()).map_or(0, LinForm::nvars);
        if rows.iter().any(|r| r.len() != n) {
            return domain("ragged matrix rows");
        }
        let entries: Vec<LinForm> = rows.into_iter().flatten().collect();
        if entries.iter().any(|f| f.nvars() != nvars) {
            return domain("entries use different numbers of variables");
        }
        Ok(LinMatrix { m, n, nvars, entries })
    }

    /// Builds a matrix from integer coefficient vectors.
    pub fn from_int_rows(rows: &[Vec<Vec<i64>>]) -> Result<Self> {
        LinMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|c| LinForm::from_ints(c)).collect())
                .collect(),
        )
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &LinForm {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: LinForm) {
        assert_eq!(f.nvars(), self.nvars, "form has the wrong number of variables");
        self.entries[i * self.n + j] = f;
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> LinMatrix {
        let mut out = LinMatrix::zeros(rows.len(), cols.len(), self.nvars);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Image under `(i, j) -> (rows[i], cols[j])`.
    pub fn permute(&self, rows: &[usize], cols: &[usize]) -> LinMatrix {
        let mut out = LinMatrix::zeros(self.m, self.n, self.nvars);
        for (i, &ri) in rows.iter().enumerate().take(self.m) {
            for (j, &cj) in cols.iter().enumerate().take(self.n) {
                out.set(ri, cj, self.get(i, j).clone());
            }
        }
        out
    }

    /// Applies the substitution `z_i -> sum_j sub[i][j] z_j` to every entry.
    pub fn substitute(&self, sub: &[Vec<BigRational>]) -> LinMatrix {
        let mut out = LinMatrix::zeros(self.m, self.n, self.nvars);
        for i in 0..self.m {
            for j in 0..self.n {
                let f = self.get(i, j);
                let mut g = LinForm::zero(self.nvars);
                for (v, c) in f.coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        g = g.add(&LinForm::from_coeffs(sub[v].clone()).scale(c));
                    }
                }
                out.set(i, j, g);
            }
        }
        out
    }

    pub fn transpose(&self) -> LinMatrix {
        let mut out = LinMatrix::zeros(self.n, self.m, self.nvars);
        for i in 0..self.m {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Same matrix viewed in a larger variable set.
    pub fn extend_vars(&self, nvars: usize) -> LinMatrix {
        LinMatrix {
            nvars,
            entries: self.entries.iter().map(|f| f.extend(nvars)).collect(),
            ..*self
        }
    }
}

impl fmt::Display for LinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m {
            let row: Vec<String> = (0..self.n)
                .map(|j| MultiPoly::from_form(self.get(i, j)).to_string())
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Exponent vector of a monomial.
pub type Monomial = Vec<u16>;

/// A sparse polynomial with rational coefficients; terms are kept in
/// lexicographic order of exponent vectors and zero terms are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.terms.insert(vec![0; nvars], BigRational::one());
        p
    }

    pub fn from_form(f: &LinForm) -> Self {
        let mut p = MultiPoly::zero(f.nvars());
        for (i, c) in f.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; f.nvars()];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u16]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, e: Monomial, c: BigRational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &MultiPoly) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &MultiPoly) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Product with a linear form, skipping the intermediate polynomial.
    pub fn mul_form(&self, f: &LinForm) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (v, c2) in f.coeffs().iter().enumerate() {
            if c2.is_zero() {
                continue;
            }
            for (e1, c1) in &self.terms {
                let mut e = e1.clone();
                e[v] += 1;
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as u32).sum())
            .max()
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // highest monomial first reads more naturally
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(v, &x)| if x == 1 { format!("z{v}") } else { format!("z{v}^{x}") })
                .collect();
            let negative = c < &BigRational::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => f.write_str(&mono.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

fn check_square(mat: &LinMatrix) -> Result<()> {
    if mat.m != mat.n {
        return domain(format!("matrix must be square, got {}x{}", mat.m, mat.n));
    }
    Ok(())
}

/// Sign of a permutation given as a vector.
fn sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut s = 1;
    for i in 0..perm.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            s = -s;
        }
    }
    s
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                prefix.push(j);
                go(prefix, used, out);
                prefix.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn permutation_expansion(mat: &LinMatrix, signed: bool) -> MultiPoly {
    let mut out = MultiPoly::zero(mat.nvars);
    'perm: for perm in all_permutations(mat.n) {
        let mut term = MultiPoly::one(mat.nvars);
        for (i, &j) in perm.iter().enumerate() {
            let f = mat.get(i, j);
            if f.is_zero() {
                continue 'perm;
            }
            term = term.mul_form(f);
        }
        if signed && sign(&perm) < 0 {
            out.sub_assign(&term);
        } else {
            out.add_assign(&term);
        }
    }
    out
}

/// Expansion along rows top to bottom; each sub-result is keyed by the set
/// of columns still available, so it is computed once.
fn laplace_expansion(mat: &LinMatrix, signed: bool) -> MultiPoly {
    let n = mat.n;
    let mut memo: HashMap<u64, MultiPoly> = HashMap::new();
    memo.insert(0, MultiPoly::one(mat.nvars));
    // rows n-1 down to 0: a sub-result for row i uses a set of n - i columns
    for i in (0..n).rev() {
        for cols in combinations(n, n - i) {
            let mut acc = MultiPoly::zero(mat.nvars);
            let mut pos = 0;
            let mut rest = cols;
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let f = mat.get(i, j);
                if !f.is_zero() {
                    let minor = &memo[&(cols & !(1u64 << j))];
                    if !minor.is_zero() {
                        let term = minor.mul_form(f);
                        if signed && pos % 2 == 1 {
                            acc.sub_assign(&term);
                        } else {
                            acc.add_assign(&term);
                        }
                    }
                }
                pos += 1;
            }
            memo.insert(cols, acc);
        }
    }
    memo.remove(&((1u64 << n) - 1)).expect("full column set computed")
}

const PERMUTATION_SUM_MAX: usize = 5;

pub fn det_poly(mat: &LinMatrix) -> Result<MultiPoly> {
    check_square(mat)?;
    Ok(if mat.n <= PERMUTATION_SUM_MAX {
        permutation_expansion(mat, true)
    } else {
        laplace_expansion(mat, true)
    })
}

pub fn perm_poly(mat: &LinMatrix) -> Result<MultiPoly> {
    check_square(mat)?;
    Ok(if mat.n <= PERMUTATION_SUM_MAX {
        permutation_expansion(mat, false)
    } else {
        laplace_expansion(mat, false)
    })
}

/// Determinant or permanent, by family.
pub fn family_poly(mat: &LinMatrix, family: Family) -> Result<MultiPoly> {
    match family {
        Family::Det => det_poly(mat),
        Family::Perm => perm_poly(mat),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    combinations(n, k)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// True when every `r x r` minor (or permanent) vanishes identically.
pub fn plane_in_scheme(mat: &LinMatrix, r: usize, family: Family) -> Result<bool> {
    if r == 0 || r > mat.m.min(mat.n) {
        return domain(format!(
            "need 1 <= r <= min(m, n) = {}, got r = {r}",
            mat.m.min(mat.n)
        ));
    }
    let row_sets = subsets(mat.m, r);
    let col_sets = subsets(mat.n, r);
    for rows in &row_sets {
        for cols in &col_sets {
            if !family_poly(&mat.submatrix(rows, cols), family)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Dimension of the span of all entries.
pub fn span_dim(mat: &LinMatrix) -> usize {
    let rows: Vec<Vec<BigRational>> = mat.entries.iter().map(|f| f.coeffs.clone()).collect();
    linalg::rank(&rows)
}

/// A row set and a column set, 0-based and increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSets {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// All `r x r` index sets containing the last `s` rows and the last
/// `r - s - 1` columns.
pub fn anchored_index_sets(m: usize, n: usize, r: usize, s: usize) -> Result<Vec<IndexSets>> {
    if r == 0 || s >= r || r > m || r > n {
        return domain(format!("need 0 <= s < r <= min(m, n), got m={m} n={n} r={r} s={s}"));
    }
    let fixed_cols = r - s - 1;
    let row_sets = subsets(m - s, r - s);
    let col_sets = subsets(n - fixed_cols, s + 1);
    let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
    for rs in &row_sets {
        for cs in &col_sets {
            let rows = rs.iter().copied().chain(m - s..m).collect();
            let cols = cs.iter().copied().chain(n - fixed_cols..n).collect();
            out.push(IndexSets { rows, cols });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(nvars: usize, i: usize) -> LinForm {
        LinForm::var(nvars, i)
    }

    fn poly(nvars: usize, terms: &[(&[u16], i64)]) -> MultiPoly {
        let mut p = MultiPoly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e.to_vec(), BigRational::from_integer((*c).into()));
        }
        p
    }

    fn antisymmetric3() -> LinMatrix {
        let z = |i: usize, s: i64| LinForm::var(3, i).scale(&BigRational::from_integer(s.into()));
        let o = LinForm::zero(3);
        LinMatrix::from_rows(vec![
            vec![o.clone(), z(0, 1), z(1, 1)],
            vec![z(0, -1), o.clone(), z(2, 1)],
            vec![z(1, -1), z(2, -1), o],
        ])
        .unwrap()
    }

    #[test]
    fn det_examples() {
        let m = LinMatrix::from_rows(vec![vec![var(1, 0)]]).unwrap();
        assert_eq!(det_poly(&m).unwrap(), poly(1, &[(&[1], 1)]));
        let m = LinMatrix::from_rows(vec![vec![var(2, 0), var(2, 1)], vec![var(2, 1), var(2, 0)]]).unwrap();
        assert_eq!(det_poly(&m).unwrap(), poly(2, &[(&[2, 0], 1), (&[0, 2], -1)]));
        assert_eq!(perm_poly(&m).unwrap(), poly(2, &[(&[2, 0], 1), (&[0, 2], 1)]));
        assert!(det_poly(&antisymmetric3()).unwrap().is_zero());
        assert!(perm_poly(&antisymmetric3()).unwrap().is_zero());
    }

    #[test]
    fn perm_tridiagonal_two_by_two() {
        // [[v, w], [u, v]] with (u, v, w) = (z0, z1, z2)
        let m = LinMatrix::from_rows(vec![vec![var(3, 1), var(3, 2)], vec![var(3, 0), var(3, 1)]]).unwrap();
        assert_eq!(perm_poly(&m).unwrap(), poly(3, &[(&[0, 2, 0], 1), (&[1, 0, 1], 1)]));
    }

    #[test]
    fn non_square_is_error() {
        let m = LinMatrix::zeros(2, 3, 1);
        assert!(det_poly(&m).is_err());
        assert!(perm_poly(&m).is_err());
    }

    #[test]
    fn laplace_agrees_with_permutation_sum() {
        // a dense 5x5 with assorted integer forms in three variables
        let rows: Vec<Vec<Vec<i64>>> = (0..5)
            .map(|i| {
                (0..5)
                    .map(|j| vec![(i * 3 + j) % 4 - 1, (i + 2 * j) % 3, (i * j) % 5 - 2])
                    .collect()
            })
            .collect();
        let m = LinMatrix::from_int_rows(&rows).unwrap();
        for signed in [true, false] {
            assert_eq!(permutation_expansion(&m, signed), laplace_expansion(&m, signed));
        }
    }

    #[test]
    fn membership_examples() {
        assert!(plane_in_scheme(&antisymmetric3(), 3, Family::Det).unwrap());
        assert!(!plane_in_scheme(&antisymmetric3(), 2, Family::Det).unwrap());
        let row = LinMatrix::from_rows(vec![
            vec![var(2, 0), var(2, 1)],
            vec![LinForm::zero(2), LinForm::zero(2)],
        ])
        .unwrap();
        assert!(plane_in_scheme(&row, 2, Family::Det).unwrap());
        let off = LinMatrix::from_rows(vec![
            vec![LinForm::zero(1), var(1, 0)],
            vec![var(1, 0), LinForm::zero(1)],
        ])
        .unwrap();
        assert!(!plane_in_scheme(&off, 2, Family::Perm).unwrap());
        assert!(plane_in_scheme(&off, 3, Family::Det).is_err());
    }

    #[test]
    fn span_examples() {
        assert_eq!(span_dim(&LinMatrix::zeros(2, 2, 3)), 0);
        let m = LinMatrix::from_int_rows(&[
            vec![vec![1, 0], vec![0, 1]],
            vec![vec![1, 1], vec![0, 0]],
        ])
        .unwrap();
        assert_eq!(span_dim(&m), 2);
    }

    #[test]
    fn anchored_counts() {
        let sets = anchored_index_sets(3, 3, 3, 1).unwrap();
        assert_eq!(sets, vec![IndexSets { rows: vec![0, 1, 2], cols: vec![0, 1, 2] }]);
        assert_eq!(anchored_index_sets(6, 6, 5, 2).unwrap().len(), 4 * 4);
        assert_eq!(anchored_index_sets(5, 6, 5, 2).unwrap().len(), 4);
        assert_eq!(anchored_index_sets(4, 4, 3, 0).unwrap().len(), 8);
        for set in anchored_index_sets(5, 6, 5, 2).unwrap() {
            assert!(set.rows.ends_with(&[3, 4]));
            assert!(set.cols.ends_with(&[4, 5]));
        }
        assert!(anchored_index_sets(3, 3, 3, 3).is_err());
    }

    #[test]
    fn display() {
        let p = poly(2, &[(&[2, 0], 1), (&[0, 2], -3), (&[1, 1], 2)]);
        assert_eq!(p.to_string(), "z0^2 + 2*z0*z1 - 3*z1^2");
        assert_eq!(MultiPoly::zero(2).to_string(), "0");
    }
}
