//! Intersection numbers on `Gr(2, N)` and closed-form degrees.
//!
//! Classes are integer combinations of Schubert classes `sigma_{a,b}` with
//! `N - 2 >= a >= b >= 0`. Only multiplication by `sigma_1` (Pieri) and by
//! `sigma_{1,1}` is needed, since `c(S^*)` has Chern classes `sigma_1`,
//! `sigma_{1,1}` and every symmetric function of the two Chern roots is a
//! polynomial in them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::params::FanoParams;

/// Index of a Schubert class in the `2 x (N - 2)` box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition2 {
    pub a: u32,
    pub b: u32,
}

impl Partition2 {
    pub fn new(a: u32, b: u32, big_n: u32) -> Result<Self> {
        if !(a >= b && a + 2 <= big_n.max(2)) || big_n < 2 {
            return domain(format!("({a}, {b}) does not fit the 2 x {} box", big_n.saturating_sub(2)));
        }
        Ok(Partition2 { a, b })
    }

    pub fn codim(&self) -> u32 {
        self.a + self.b
    }
}

/// A cycle class on `Gr(2, N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowClass {
    big_n: u32,
    coeffs: BTreeMap<Partition2, BigInt>,
}

impl ChowClass {
    pub fn zero(big_n: u32) -> Self {
        ChowClass {
            big_n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn schubert(big_n: u32, a: u32, b: u32) -> Result<Self> {
        let mut c = ChowClass::zero(big_n);
        c.coeffs.insert(Partition2::new(a, b, big_n)?, BigInt::one());
        Ok(c)
    }

    /// The fundamental class `sigma_{0,0}`.
    pub fn unit(big_n: u32) -> Self {
        ChowClass::schubert(big_n, 0, 0).expect("N >= 2")
    }

    pub fn point(big_n: u32) -> Self {
        ChowClass::schubert(big_n, big_n - 2, big_n - 2).expect("N >= 2")
    }

    pub fn ambient(&self) -> u32 {
        self.big_n
    }

    pub fn coeff(&self, a: u32, b: u32) -> BigInt {
        self.coeffs
            .get(&Partition2 { a, b })
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition2, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, a: u32, b: u32, c: &BigInt) {
        if a > b.max(a) || a + 2 > self.big_n || b > a {
            return;
        }
        let e = self.coeffs.entry(Partition2 { a, b }).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&Partition2 { a, b });
        }
    }

    pub fn add(&self, other: &ChowClass) -> ChowClass {
        let mut out = self.clone();
        for (p, c) in &other.coeffs {
            out.add_term(p.a, p.b, c);
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> ChowClass {
        let mut out = ChowClass::zero(self.big_n);
        for (p, c) in &self.coeffs {
            out.add_term(p.a, p.b, &(c * k));
        }
        out
    }

    /// Degree of the zero-dimensional part.
    pub fn integrate(&self) -> BigInt {
        self.coeff(self.big_n - 2, self.big_n - 2)
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(p, c)| format!("{c}*s[{},{}]", p.a, p.b))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Multiplication by `sigma_1`.
pub fn pieri_sigma1(c: &ChowClass) -> ChowClass {
    let mut out = ChowClass::zero(c.big_n);
    for (p, k) in &c.coeffs {
        out.add_term(p.a + 1, p.b, k);
        out.add_term(p.a, p.b + 1, k);
    }
    out
}

/// Multiplication by `sigma_{1,1}`.
pub fn mul_sigma11(c: &ChowClass) -> ChowClass {
    let mut out = ChowClass::zero(c.big_n);
    for (p, k) in &c.coeffs {
        out.add_term(p.a + 1, p.b + 1, k);
    }
    out
}

/// `sigma_{a,b}` as a polynomial in `sigma_1` and `sigma_{1,1}`:
/// `sigma_{1,1}^b * h_{a-b}` with `h_j = sigma_1 h_{j-1} - sigma_{1,1} h_{j-2}`.
pub fn schubert_poly(a: u32, b: u32) -> Result<SymPoly2> {
    if b > a {
        return domain(format!("need a >= b, got ({a}, {b})"));
    }
    let mut prev = SymPoly2::default();
    let mut cur = SymPoly2::default();
    cur.add_term((0, 0), BigInt::one());
    for _ in 0..a - b {
        let mut next = cur.shifted(1, 0, &BigInt::one());
        next.add(&prev.shifted(0, 1, &-BigInt::one()));
        prev = cur;
        cur = next;
    }
    Ok(cur.shifted(0, b, &BigInt::one()))
}

impl ChowClass {
    /// Product of two classes on the same Grassmannian.
    pub fn mul(&self, other: &ChowClass) -> ChowClass {
        assert_eq!(self.big_n, other.big_n, "classes on different Grassmannians");
        let mut out = ChowClass::zero(self.big_n);
        for (p, c) in &other.coeffs {
            let poly = schubert_poly(p.a, p.b).expect("partition");
            out = out.add(&poly.act(self).scale(c));
        }
        out
    }
}

pub fn integrate(c: &ChowClass) -> BigInt {
    c.integrate()
}

/// An integer polynomial in `e1 = x1 + x2` and `e2 = x1 x2`; the key
/// `(i, j)` stands for `e1^i e2^j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymPoly2 {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl SymPoly2 {
    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, key: (u32, u32), c: BigInt) {
        let e = self.terms.entry(key).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn add(&mut self, other: &SymPoly2) {
        for (k, c) in &other.terms {
            self.add_term(*k, c.clone());
        }
    }

    fn shifted(&self, di: u32, dj: u32, scale: &BigInt) -> SymPoly2 {
        let mut out = SymPoly2::default();
        if scale.is_zero() {
            return out;
        }
        for ((i, j), c) in &self.terms {
            out.add_term((i + di, j + dj), c * scale);
        }
        out
    }

    /// Value at numeric `e1`, `e2`.
    pub fn eval(&self, e1: &BigInt, e2: &BigInt) -> BigInt {
        self.terms
            .iter()
            .map(|((i, j), c)| c * Pow::pow(e1, *i) * Pow::pow(e2, *j))
            .sum()
    }

    /// Applies the polynomial to a class, reading `e1` as `sigma_1` and `e2`
    /// as `sigma_{1,1}`.
    pub fn act(&self, c: &ChowClass) -> ChowClass {
        let mut out = ChowClass::zero(c.big_n);
        for ((i, j), k) in &self.terms {
            let mut x = c.clone();
            for _ in 0..*j {
                x = mul_sigma11(&x);
            }
            for _ in 0..*i {
                x = pieri_sigma1(&x);
            }
            out = out.add(&x.scale(k));
        }
        out
    }
}

impl fmt::Display for SymPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|((i, j), c)| format!("{c}*e1^{i}*e2^{j}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Top Chern class of `Sym^n S^*` in terms of `e1`, `e2`: the product of the
/// `n + 1` weights `i x1 + (n - i) x2`, reduced with `x1^2 = e1 x1 - e2`.
pub fn chern_top_sym(n: u32) -> Result<SymPoly2> {
    if n < 1 {
        return domain("chern_top_sym needs n >= 1");
    }
    // p0 + p1 * x1
    let mut p0 = SymPoly2::default();
    p0.add_term((0, 0), BigInt::one());
    let mut p1 = SymPoly2::default();
    for i in 0..=n {
        // i x1 + (n - i)(e1 - x1) = (n - i) e1 + (2i - n) x1
        let c = BigInt::from(n - i);
        let d = BigInt::from(2 * i as i64 - n as i64);
        let mut q0 = p0.shifted(1, 0, &c);
        let mut q1 = p0.shifted(0, 0, &d);
        q1.add(&p1.shifted(1, 0, &c));
        // p1 d x1^2 = p1 d (e1 x1 - e2)
        q1.add(&p1.shifted(1, 0, &d));
        q0.add(&p1.shifted(0, 1, &-d));
        p0 = q0;
        p1 = q1;
    }
    assert!(p1.terms.is_empty(), "product of weights must be symmetric");
    Ok(p0)
}

/// Degree of the Fano scheme of lines on the `n x n` determinantal
/// hypersurface, as an intersection number on `Gr(2, n^2)`.
pub fn f1_degree(n: u32) -> Result<BigInt> {
    if n < 2 {
        return domain("f1_degree needs n >= 2");
    }
    let big_n = n * n;
    let power = 2 * n * n - n - 5;
    let mut c = ChowClass::unit(big_n);
    for _ in 0..power {
        c = pieri_sigma1(&c);
    }
    Ok(chern_top_sym(n)?.act(&c).integrate())
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Degree of `Gr(a, b)` in its Plucker embedding.
pub fn gr_degree(a: u64, b: u64) -> Result<BigUint> {
    if a > b {
        return domain(format!("gr_degree needs a <= b, got ({a}, {b})"));
    }
    let num = factorial(a * (b - a));
    let mut den = BigUint::one();
    for i in 1..=a {
        for j in a + 1..=b {
            den *= j - i;
        }
    }
    let (q, rem) = num.div_rem(&den);
    assert!(rem.is_zero(), "Grassmannian degree must be an integer");
    Ok(q)
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Degree of the variety swept by the standard `s`-compression spaces'
/// parameter space, weighted as for the `s`-compression component of the
/// Fano scheme of maximal-dimensional planes.
pub fn compression_degree(m: i64, n: i64, r: i64, s: i64) -> Result<BigUint> {
    let p = FanoParams::new(m, n, r, 0)?;
    let idx = p.index(s)?;
    let t = idx.t(&p) as u64;
    let (m, n, r, s) = (m as u64, n as u64, r as u64, s as u64);
    let delta = p.delta_at(s as i64)? as u64;
    let cols = r - s - 1;
    let d1 = gr_degree(t, n)?;
    let d2 = gr_degree(s, m)?;
    Ok(binomial(delta, s * (m - s))
        * d1
        * Pow::pow(BigUint::from(m - s), t * cols)
        * d2
        * Pow::pow(BigUint::from(t), s * (m - s)))
}
