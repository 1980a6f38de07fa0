//! Tangent spaces of Fano schemes at planes inside a compression space.
//!
//! A plane in an `s`-compression space is written with its zero block in
//! the upper left:
//!
//! ```text
//!     [ 0  B ]     (m - s) rows
//!     [ C  D ]     s rows
//! ```
//!
//! with the zero block `(m - s) x (s + 1 + n - r)`. Tangent vectors
//! decompose into a part moving the compression space and a part `A`
//! filling the zero block; `A` must make every anchored minor (those using
//! the last `s` rows and last `r - s - 1` columns) of `[[A, B], [C, 0]]`
//! vanish identically.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::classify::{perm_tangent_hypotheses, Family};
use crate::error::{domain, FanoError, Result};
use crate::linalg::{sparse_rank, SparseRow};
use crate::params::{compression_component_dim, kappa, CompressionIndex, FanoParams};
use crate::symalg::{anchored_index_sets, family_poly, span_dim, LinForm, LinMatrix, Monomial};

/// A `k`-plane whose matrix has the zero block of an `s`-compression space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedPlane {
    params: FanoParams,
    s: CompressionIndex,
    matrix: LinMatrix,
}

fn invariant<T>(msg: impl Into<String>) -> Result<T> {
    Err(FanoError::Invariant(msg.into()))
}

impl CompressedPlane {
    /// Checks the shape, the zero block and that the entries span `k + 1`
    /// dimensions.
    pub fn new(m: i64, n: i64, r: i64, s: i64, matrix: LinMatrix) -> Result<Self> {
        let k = matrix.nvars() as i64 - 1;
        if k < 0 {
            return domain("plane needs at least one variable");
        }
        let params = FanoParams::new(m, n, r, k)?;
        let s = params.index(s)?;
        if matrix.m() as i64 != m || matrix.n() as i64 != n {
            return invariant(format!(
                "matrix is {}x{}, expected {m}x{n}",
                matrix.m(),
                matrix.n()
            ));
        }
        let (zr, zc) = ((m - s.s()) as usize, s.t(&params) as usize);
        for i in 0..zr {
            for j in 0..zc {
                if !matrix.get(i, j).is_zero() {
                    return invariant(format!(
                        "zero block: entry ({i}, {j}) must vanish in the upper-left {zr}x{zc} block"
                    ));
                }
            }
        }
        let span = span_dim(&matrix);
        if span as i64 != k + 1 {
            return invariant(format!("span: entries span {span} dimensions, expected k + 1 = {}", k + 1));
        }
        Ok(CompressedPlane { params, s, matrix })
    }

    pub fn params(&self) -> &FanoParams {
        &self.params
    }

    pub fn s(&self) -> CompressionIndex {
        self.s
    }

    pub fn matrix(&self) -> &LinMatrix {
        &self.matrix
    }

    /// Size of the zero block.
    fn block(&self) -> (usize, usize) {
        (
            (self.params.m() - self.s.s()) as usize,
            self.s.t(&self.params) as usize,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentReport {
    pub a_dim: usize,
    pub tangent_dim: i64,
    /// `(equations, unknowns)` of the linear system for `A`.
    pub system_size: (usize, usize),
}

/// The linear system on the coefficients of `A`: returns `(rows, unknowns)`.
fn a_system(p: &CompressedPlane, family: Family) -> Result<(Vec<SparseRow>, usize)> {
    let (m, n, r) = (p.params.m() as usize, p.params.n() as usize, p.params.r() as usize);
    let s = p.s.s() as usize;
    let nz = p.matrix.nvars();
    let (zr, zc) = p.block();
    let na = zr * zc;
    let nvars = nz + na;

    let mut q = p.matrix.extend_vars(nvars);
    for i in 0..zr {
        for j in 0..zc {
            q.set(i, j, LinForm::var(nvars, nz + i * zc + j));
        }
    }
    for i in zr..m {
        for j in zc..n {
            q.set(i, j, LinForm::zero(nvars));
        }
    }

    let unknowns = na * nz;
    let mut equations: BTreeMap<(usize, Monomial), SparseRow> = BTreeMap::new();
    for (idx, set) in anchored_index_sets(m, n, r, s)?.iter().enumerate() {
        let minor = family_poly(&q.submatrix(&set.rows, &set.cols), family)?;
        for (expo, coeff) in minor.terms() {
            let (z_part, w_part) = expo.split_at(nz);
            let w_deg: u32 = w_part.iter().map(|&x| x as u32).sum();
            if w_deg != 1 {
                return invariant(format!(
                    "anchored minor term has degree {w_deg} in the block unknowns, expected 1"
                ));
            }
            let cell = w_part.iter().position(|&x| x == 1).expect("degree one");
            for l in 0..nz {
                let mut alpha = z_part.to_vec();
                alpha[l] += 1;
                let row = equations.entry((idx, alpha)).or_default();
                let entry = row.entry(cell * nz + l).or_insert_with(BigRational::zero);
                *entry += coeff;
                if entry.is_zero() {
                    row.remove(&(cell * nz + l));
                }
            }
        }
    }
    Ok((equations.into_values().collect(), unknowns))
}

/// Dimension of the space of fillings `A` of the zero block, by linear
/// forms, killing every anchored minor (or permanent).
pub fn a_dimension(p: &CompressedPlane, family: Family) -> Result<usize> {
    Ok(tangent_dim(p, family)?.a_dim)
}

pub fn tangent_dim(p: &CompressedPlane, family: Family) -> Result<TangentReport> {
    let (rows, unknowns) = a_system(p, family)?;
    let equations = rows.len();
    let a_dim = unknowns - sparse_rank(rows, unknowns);
    let k = p.params.k();
    let tangent_dim = a_dim as i64 + (k + 1) * (kappa(&p.params, p.s) - k);
    Ok(TangentReport {
        a_dim,
        tangent_dim,
        system_size: (equations, unknowns),
    })
}

/// Whether the tangent space has the dimension of the compression component,
/// so the plane is a smooth point of the determinantal Fano scheme.
pub fn is_smooth_compression_point(p: &CompressedPlane, family: Family) -> Result<bool> {
    if family != Family::Det {
        return domain("smoothness from compression data is only available for det");
    }
    let report = tangent_dim(p, family)?;
    Ok(report.tangent_dim == compression_component_dim(&p.params, p.s)?)
}

/// Writes plane entries block by block, then adds fresh variables one cell
/// at a time (B row-major, then C, then D), skipping cells where a fresh
/// variable would not enlarge the span, until `k + 1` are used.
struct Builder {
    mat: LinMatrix,
    zr: usize,
    zc: usize,
    next: usize,
}

impl Builder {
    fn new(m: usize, n: usize, zr: usize, zc: usize, nvars: usize) -> Self {
        Builder {
            mat: LinMatrix::zeros(m, n, nvars),
            zr,
            zc,
            next: 0,
        }
    }

    fn put(&mut self, i: usize, j: usize, var: usize) {
        let f = self.mat.get(i, j).add(&LinForm::var(self.mat.nvars(), var));
        self.mat.set(i, j, f);
    }

    fn b_cells(&self) -> Vec<(usize, usize)> {
        (0..self.zr)
            .flat_map(|i| (self.zc..self.mat.n()).map(move |j| (i, j)))
            .collect()
    }

    fn c_cells(&self) -> Vec<(usize, usize)> {
        (self.zr..self.mat.m())
            .flat_map(|i| (0..self.zc).map(move |j| (i, j)))
            .collect()
    }

    fn d_cells(&self) -> Vec<(usize, usize)> {
        (self.zr..self.mat.m())
            .flat_map(|i| (self.zc..self.mat.n()).map(move |j| (i, j)))
            .collect()
    }

    fn fill(&mut self, first_fresh: usize, regions: &[Vec<(usize, usize)>]) -> Result<()> {
        self.next = first_fresh;
        let nvars = self.mat.nvars();
        let mut span = span_dim(&self.mat);
        for &(i, j) in regions.iter().flatten() {
            if self.next >= nvars {
                break;
            }
            let before = self.mat.get(i, j).clone();
            let v = self.next;
            self.put(i, j, v);
            let grown = span_dim(&self.mat);
            if grown > span {
                span = grown;
                self.next += 1;
            } else {
                self.mat.set(i, j, before);
            }
        }
        if self.next < nvars {
            return domain("not enough cells to place every variable");
        }
        Ok(())
    }
}

fn check_k(p: &FanoParams, s: i64) -> Result<CompressionIndex> {
    let idx = p.index(s)?;
    let kp = kappa(p, idx);
    if p.k() < 1 || p.k() > kp {
        return domain(format!("need 1 <= k <= kappa({s}) = {kp}, got k = {}", p.k()));
    }
    Ok(idx)
}

/// The plane used to show the tangent bound is attained on the `s`-component
/// of the determinantal Fano scheme.
pub fn witness_det(m: i64, n: i64, r: i64, k: i64, s: i64) -> Result<CompressedPlane> {
    let p = FanoParams::new(m, n, r, k)?;
    let idx = check_k(&p, s)?;
    let (zr, zc) = ((m - s) as usize, idx.t(&p) as usize);
    let cols = (r - s - 1) as usize;
    let mut b = Builder::new(m as usize, n as usize, zr, zc, (k + 1) as usize);
    // B(z_i, z_j): column c holds z_i in row c and z_j in row c + 1
    let put_b = |b: &mut Builder, zi: usize, zj: usize| {
        for c in 0..cols {
            b.put(c, zc + c, zi);
            b.put(c + 1, zc + c, zj);
        }
    };
    // C(z_i, z_j): row c holds z_i in column c and z_j in column c + 1
    let put_c = |b: &mut Builder, zi: usize, zj: usize| {
        for c in 0..s as usize {
            b.put(zr + c, c, zi);
            b.put(zr + c, c + 1, zj);
        }
    };
    let regions = [b.b_cells(), b.c_cells(), b.d_cells()];
    if s == 0 {
        put_b(&mut b, 0, 1);
        b.fill(2, &regions)?;
    } else if s == r - 1 {
        put_c(&mut b, 0, 1);
        b.fill(2, &regions)?;
    } else if k == 1 {
        put_b(&mut b, 0, 1);
        put_c(&mut b, 0, 1);
    } else {
        put_b(&mut b, 0, 1);
        put_c(&mut b, 1, 2);
        b.fill(3, &regions)?;
    }
    CompressedPlane::new(m, n, r, s, b.mat)
}

/// The plane used to show the permanental tangent space has no extra
/// directions along the `s`-component.
pub fn witness_perm(m: i64, n: i64, r: i64, k: i64, s: i64) -> Result<CompressedPlane> {
    let p = FanoParams::new(m, n, r, k)?;
    let idx = p.index(s)?;
    perm_tangent_hypotheses(&p, s)?;
    let (zr, zc) = ((m - s) as usize, idx.t(&p) as usize);
    let cols = (r - s - 1) as usize;
    let rows = s as usize;
    let mut b = Builder::new(m as usize, n as usize, zr, zc, (k + 1) as usize);
    // B(z_i, z_j, z_k): cyclic band of width three on max(cols + 1, 3) rows
    let put_b = |b: &mut Builder, z: [usize; 3]| {
        let len = (cols + 1).max(3);
        for c in 0..cols {
            for (off, &v) in z.iter().enumerate() {
                b.put((c + off) % len, zc + c, v);
            }
        }
    };
    let put_c = |b: &mut Builder, z: [usize; 3]| {
        let len = (rows + 1).max(3);
        for c in 0..rows {
            for (off, &v) in z.iter().enumerate() {
                b.put(zr + c, (c + off) % len, v);
            }
        }
    };
    let regions = [b.b_cells(), b.c_cells(), b.d_cells()];
    if s == 0 {
        put_b(&mut b, [0, 1, 2]);
        b.fill(3, &regions)?;
    } else if s == r - 1 {
        put_c(&mut b, [0, 1, 2]);
        b.fill(3, &regions)?;
    } else {
        put_b(&mut b, [0, 1, 2]);
        put_c(&mut b, [3, 4, 5]);
        b.fill(6, &regions)?;
    }
    CompressedPlane::new(m, n, r, s, b.mat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows_of(p: &CompressedPlane) -> Vec<Vec<Vec<i64>>> {
        let mat = p.matrix();
        (0..mat.m())
            .map(|i| {
                (0..mat.n())
                    .map(|j| {
                        mat.get(i, j)
                            .coeffs()
                            .iter()
                            .map(|c| c.to_integer().try_into().unwrap())
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn det_witness_small() {
        let w = witness_det(3, 3, 3, 1, 1).unwrap();
        let z0 = vec![1, 0];
        let z1 = vec![0, 1];
        let o = vec![0, 0];
        assert_eq!(
            rows_of(&w),
            vec![
                vec![o.clone(), o.clone(), z0.clone()],
                vec![o.clone(), o.clone(), z1.clone()],
                vec![z0, z1, o],
            ]
        );
        let rep = tangent_dim(&w, Family::Det).unwrap();
        assert_eq!(rep.a_dim, 4);
        assert_eq!(rep.tangent_dim, 10);
    }

    #[test]
    fn det_witness_five_by_six() {
        let w = witness_det(5, 6, 5, 4, 2).unwrap();
        assert_eq!(span_dim(w.matrix()), 5);
        let rep = tangent_dim(&w, Family::Det).unwrap();
        assert_eq!((rep.a_dim, rep.tangent_dim), (14, 79));
        assert!(is_smooth_compression_point(&w, Family::Det).unwrap());
        assert!(is_smooth_compression_point(&witness_det(3, 3, 3, 1, 0).unwrap(), Family::Det).unwrap());
    }

    #[test]
    fn perm_witness_small() {
        let w = witness_perm(3, 3, 3, 2, 0).unwrap();
        let z = |i: usize| {
            let mut v = vec![0; 3];
            v[i] = 1;
            v
        };
        let o = vec![0; 3];
        assert_eq!(
            rows_of(&w),
            vec![
                vec![o.clone(), z(0), z(2)],
                vec![o.clone(), z(1), z(0)],
                vec![o.clone(), z(2), z(1)],
            ]
        );
        let rep = tangent_dim(&w, Family::Perm).unwrap();
        assert_eq!((rep.a_dim, rep.tangent_dim), (0, 9));

        let w = witness_perm(3, 3, 3, 2, 2).unwrap();
        assert_eq!(rows_of(&w)[0], vec![o.clone(), o.clone(), o.clone()]);
        assert_eq!(rows_of(&w)[1], vec![z(0), z(1), z(2)]);
        assert_eq!(rows_of(&w)[2], vec![z(2), z(0), z(1)]);
        assert_eq!(a_dimension(&w, Family::Perm).unwrap(), 0);

        let w = witness_perm(5, 5, 5, 5, 2).unwrap();
        assert_eq!(a_dimension(&w, Family::Perm).unwrap(), 0);
    }

    #[test]
    fn perm_hypotheses_enforced() {
        assert!(witness_perm(3, 3, 3, 1, 0).is_err());
        assert!(witness_perm(3, 3, 3, 5, 1).is_err());
        // s + 1 + n - r = 2 < 3
        assert!(witness_perm(4, 4, 4, 5, 1).is_err());
        // m - s = 2 < 3
        assert!(witness_perm(4, 4, 4, 5, 2).is_err());
    }

    #[test]
    fn witness_k_range() {
        assert!(witness_det(3, 3, 3, 0, 0).is_err());
        assert!(witness_det(3, 3, 3, 6, 0).is_err());
        assert!(witness_det(3, 3, 3, 5, 0).is_ok());
    }

    #[test]
    fn shared_point_is_singular() {
        // zero first row, one entry in the second: in both the s = 2 and
        // s = 1 components
        let mut mat = LinMatrix::zeros(3, 3, 4);
        mat.set(1, 2, LinForm::var(4, 0));
        mat.set(2, 0, LinForm::var(4, 1));
        mat.set(2, 1, LinForm::var(4, 2));
        mat.set(2, 2, LinForm::var(4, 3));
        let p = CompressedPlane::new(3, 3, 3, 2, mat).unwrap();
        assert!(!is_smooth_compression_point(&p, Family::Det).unwrap());
    }

    #[test]
    fn invariant_violations() {
        let mut mat = LinMatrix::zeros(3, 3, 2);
        mat.set(0, 0, LinForm::var(2, 0));
        mat.set(2, 2, LinForm::var(2, 1));
        assert!(matches!(
            CompressedPlane::new(3, 3, 3, 1, mat),
            Err(FanoError::Invariant(_))
        ));
        let mut mat = LinMatrix::zeros(3, 3, 2);
        mat.set(2, 2, LinForm::var(2, 1));
        assert!(matches!(
            CompressedPlane::new(3, 3, 3, 1, mat),
            Err(FanoError::Invariant(_))
        ));
    }
}
