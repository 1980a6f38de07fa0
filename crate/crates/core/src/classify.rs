//! Smoothness, irreducibility and connectedness classifiers for Fano schemes
//! of `k`-planes on determinantal and permanental loci.
//!
//! Connectedness is tri-state: the criteria are exact for determinantal
//! hypersurface-type loci (`r = m`) and otherwise only sufficient in each
//! direction. Disconnection is tested first, then every sufficient
//! connectedness condition, and anything left is [`TriState::Unknown`].

use std::fmt;
use std::ops::RangeInclusive;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::params::{is_nonempty, FanoParams};

/// Which family of `r x r` forms cuts out the locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Det,
    Perm,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Det => "det",
            Family::Perm => "perm",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = crate::FanoError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "det" => Ok(Family::Det),
            "perm" => Ok(Family::Perm),
            other => domain(format!("unknown family {other:?}, expected det or perm")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriState {
    Connected,
    Disconnected,
    Unknown,
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriState::Connected => "Connected",
            TriState::Disconnected => "Disconnected",
            TriState::Unknown => "Unknown",
        })
    }
}

/// Machine-readable reason for a verdict: a clause tag plus the witnessing
/// compression index when the clause has one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub tag: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<i64>,
}

impl Certificate {
    fn new(tag: &str) -> Self {
        Certificate {
            tag: tag.to_string(),
            s: None,
        }
    }

    fn at(tag: &str, s: i64) -> Self {
        Certificate {
            tag: format!("{tag}(s={s})"),
            s: Some(s),
        }
    }
}

/// A verdict together with the clause that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict<T> {
    pub value: T,
    pub certificate: Certificate,
}

impl<T> Verdict<T> {
    fn new(value: T, certificate: Certificate) -> Self {
        Verdict { value, certificate }
    }
}

/// All three properties of one nonempty Fano scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub family: Family,
    pub params: FanoParams,
    pub smooth: Verdict<bool>,
    pub irreducible: Verdict<bool>,
    pub connected: Verdict<TriState>,
}

fn require_nonempty(p: &FanoParams) -> Result<()> {
    if !is_nonempty(p) {
        return domain(format!(
            "empty Fano scheme: k = {} >= (r - 1) n = {}",
            p.k(),
            (p.r() - 1) * p.n()
        ));
    }
    Ok(())
}

fn kap(p: &FanoParams, s: i64) -> i64 {
    p.kappa_at(s).expect("index in range")
}

/// `k <= m(r-2) - ((n-m) - (r-2))^2 / 4`, compared exactly.
fn below_small_k_bound(p: &FanoParams) -> bool {
    let (m, n, r) = (p.m(), p.n(), p.r());
    let gap = (n - m) - (r - 2);
    let bound = Ratio::from_integer(m * (r - 2)) - Ratio::new(gap * gap, 4);
    Ratio::from_integer(p.k()) <= bound
}

pub fn det_is_smooth(p: &FanoParams) -> Result<bool> {
    Ok(det_smooth_verdict(p)?.value)
}

fn det_smooth_verdict(p: &FanoParams) -> Result<Verdict<bool>> {
    require_nonempty(p)?;
    let threshold = (p.r() - 2) * p.n();
    Ok(if p.k() > threshold {
        Verdict::new(true, Certificate::new("det-smooth:k>(r-2)n"))
    } else {
        Verdict::new(false, Certificate::new("det-singular:shared-point(s=r-1,r-2)"))
    })
}

pub fn det_is_irreducible(p: &FanoParams) -> Result<bool> {
    Ok(det_irreducible_verdict(p)?.value)
}

fn det_irreducible_verdict(p: &FanoParams) -> Result<Verdict<bool>> {
    require_nonempty(p)?;
    if p.m() == p.n() {
        return Ok(Verdict::new(
            false,
            Certificate::new("det-reducible:square(s=0,r-1)"),
        ));
    }
    let threshold = (p.r() - 2) * p.n() + p.m() - p.r() + 1;
    Ok(if p.k() > threshold {
        Verdict::new(true, Certificate::new("det-irreducible:only(s=r-1)"))
    } else {
        Verdict::new(false, Certificate::new("det-reducible:k<=kappa(r-2)"))
    })
}

/// Conditions under which every point of the `s`-compression component of
/// the determinantal Fano scheme is smooth.
fn det_component_isolated(p: &FanoParams, s: i64) -> bool {
    let (m, n, r, k) = (p.m(), p.n(), p.r(), p.k());
    let kp = kap(p, s);
    let lower_rows = s == r - 1 || k > kp - (m - s - 1);
    let lower_cols = s == 0 || k > kp - (n - r + s);
    lower_rows && lower_cols
}

pub fn det_is_connected(p: &FanoParams) -> Result<TriState> {
    Ok(det_connected_verdict(p)?.value)
}

fn det_connected_verdict(p: &FanoParams) -> Result<Verdict<TriState>> {
    require_nonempty(p)?;
    if let Some(c) = det_disconnected_clause(p) {
        return Ok(Verdict::new(TriState::Disconnected, c));
    }
    if let Some(c) = det_connected_clause(p) {
        return Ok(Verdict::new(TriState::Connected, c));
    }
    Ok(Verdict::new(TriState::Unknown, Certificate::new("undecided")))
}

/// First clause proving disconnection, if any.
fn det_disconnected_clause(p: &FanoParams) -> Option<Certificate> {
    let (m, n, r, k) = (p.m(), p.n(), p.r(), p.k());
    if r == m {
        if m * m - 2 * m < k && k <= kap(p, 0) {
            return Some(Certificate::new("maximal-minors:outer-interval"));
        }
        return (1..m - 1)
            .find(|&s| {
                let kp = kap(p, s);
                kp - (m - s - 1).min(n - m + s) < k && k <= kp
            })
            .map(|s| Certificate::at("maximal-minors:interval", s));
    }
    (0..=r - 2)
        .find(|&s| k <= kap(p, s) && det_component_isolated(p, s))
        .map(|s| Certificate::at("isolated-compression-component", s))
}

/// First clause proving connectedness, if any.
fn det_connected_clause(p: &FanoParams) -> Option<Certificate> {
    let (m, r, k) = (p.m(), p.r(), p.k());
    if r == m {
        // the maximal-minors criterion is an equivalence
        return det_disconnected_clause(p)
            .is_none()
            .then(|| Certificate::new("maximal-minors:no-interval"));
    }
    let k0 = kap(p, 0);
    if k > k0 {
        return Some(Certificate::new("chain:k>kappa(0)"));
    }
    if k <= k0 - (m - r + 1) * (r - 1) {
        return Some(Certificate::new("chain:corner-meeting(s=0,r-1)"));
    }
    below_small_k_bound(p).then(|| Certificate::new("small-k-bound"))
}

pub fn perm_is_smooth(p: &FanoParams) -> Result<bool> {
    Ok(perm_smooth_verdict(p)?.value)
}

fn perm_smooth_verdict(p: &FanoParams) -> Result<Verdict<bool>> {
    require_nonempty(p)?;
    if p.n() == 2 {
        return Ok(Verdict::new(true, Certificate::new("perm-smooth:n=2")));
    }
    let threshold = (p.r() - 2) * p.n() + 1;
    Ok(if p.k() > threshold {
        Verdict::new(true, Certificate::new("perm-smooth:k>(r-2)n+1"))
    } else {
        Verdict::new(false, Certificate::new("perm-singular:extra-tangent"))
    })
}

pub fn perm_is_irreducible(p: &FanoParams) -> Result<bool> {
    Ok(perm_irreducible_verdict(p)?.value)
}

fn perm_irreducible_verdict(p: &FanoParams) -> Result<Verdict<bool>> {
    require_nonempty(p)?;
    Ok(Verdict::new(
        false,
        Certificate::new("perm-reducible:always"),
    ))
}

/// Size and range hypotheses under which a standard `s`-compression
/// component of the permanental Fano scheme has the expected tangent space.
pub fn perm_tangent_hypotheses(p: &FanoParams, s: i64) -> Result<()> {
    let (m, n, r, k) = (p.m(), p.n(), p.r(), p.k());
    let kp = p.kappa_at(s)?;
    let min_k = if s == 0 || s == r - 1 { 2 } else { 5 };
    if k < min_k {
        return domain(format!("need k >= {min_k} for s = {s}, got k = {k}"));
    }
    if k > kp {
        return domain(format!("need k <= kappa({s}) = {kp}, got k = {k}"));
    }
    if s != 0 && s + 1 + n - r < 3 {
        return domain(format!(
            "need s + 1 + n - r >= 3 when s != 0, got {}",
            s + 1 + n - r
        ));
    }
    if s != r - 1 && m - s < 3 {
        return domain(format!("need m - s >= 3 when s != r - 1, got {}", m - s));
    }
    Ok(())
}

fn perm_component_isolated(p: &FanoParams, s: i64) -> bool {
    let (m, n, r, k) = (p.m(), p.n(), p.r(), p.k());
    if perm_tangent_hypotheses(p, s).is_err() {
        return false;
    }
    let kp = kap(p, s);
    let lower_rows = s == r - 1 || k > kp - (m - s - 2);
    let lower_cols = s == 0 || k > kp - (n - r + s - 1);
    lower_rows && lower_cols
}

pub fn perm_is_connected(p: &FanoParams) -> Result<TriState> {
    Ok(perm_connected_verdict(p)?.value)
}

fn perm_connected_verdict(p: &FanoParams) -> Result<Verdict<TriState>> {
    require_nonempty(p)?;
    if let Some(c) = perm_disconnected_clause(p) {
        return Ok(Verdict::new(TriState::Disconnected, c));
    }
    if let Some(c) = perm_connected_clause(p) {
        return Ok(Verdict::new(TriState::Connected, c));
    }
    Ok(Verdict::new(TriState::Unknown, Certificate::new("undecided")))
}

fn perm_disconnected_clause(p: &FanoParams) -> Option<Certificate> {
    let (m, n, r, k) = (p.m(), p.n(), p.r(), p.k());
    if let Some(s) = (0..r).find(|&s| perm_component_isolated(p, s)) {
        return Some(Certificate::at("isolated-compression-component", s));
    }
    // lines on the smooth quadric surface: two disjoint rulings
    if (m, n, r, k) == (2, 2, 2, 1) {
        return Some(Certificate::new("quadric-surface:two-rulings"));
    }
    // 4-planes on the 3x3 permanental hypersurface: three connected
    // components found by explicit local analysis at every fixed point
    if (m, n, r, k) == (3, 3, 3, 4) {
        return Some(Certificate::new("perm-3x3-4-planes:three-components"));
    }
    None
}

fn perm_connected_clause(p: &FanoParams) -> Option<Certificate> {
    let (m, n, r, k) = (p.m(), p.n(), p.r(), p.k());
    let k0 = kap(p, 0);
    if k <= k0.max(kap(p, r - 2)) {
        let middle_ok = (1..r - 1).all(|s| {
            let kp = kap(p, s);
            k > kp || k <= kp - (m - s - 1).min(n - r + s)
        });
        let corner_ok = k > k0 || k <= k0 - (m - r + 1) * (r - 1);
        if middle_ok && corner_ok {
            return Some(Certificate::new("compression-chain"));
        }
    }
    below_small_k_bound(p).then(|| Certificate::new("small-k-bound"))
}

/// Classifies a nonempty Fano scheme; the empty case is a domain error.
pub fn classify(family: Family, p: &FanoParams) -> Result<Classification> {
    let (smooth, irreducible, connected) = match family {
        Family::Det => (
            det_smooth_verdict(p)?,
            det_irreducible_verdict(p)?,
            det_connected_verdict(p)?,
        ),
        Family::Perm => (
            perm_smooth_verdict(p)?,
            perm_irreducible_verdict(p)?,
            perm_connected_verdict(p)?,
        ),
    };
    Ok(Classification {
        family,
        params: *p,
        smooth,
        irreducible,
        connected,
    })
}

/// One column of the summary tables for `r = m = n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: i64,
    pub nonempty_max_k: i64,
    /// Largest singular `k`, `None` when every nonempty case is smooth.
    pub singular_max_k: Option<i64>,
    /// Connectedness verdict for `k = 1..=nonempty_max_k`, in order.
    pub connected_cells: Vec<TriState>,
}

impl TableRow {
    pub fn verdict(&self, k: i64) -> Option<TriState> {
        if k < 1 {
            return None;
        }
        self.connected_cells.get((k - 1) as usize).copied()
    }

    /// Largest `x` such that every `k <= x` is connected.
    pub fn connected_prefix(&self) -> Option<i64> {
        let len = self
            .connected_cells
            .iter()
            .take_while(|v| **v == TriState::Connected)
            .count() as i64;
        (len > 0).then_some(len)
    }

    /// Maximal runs of `k` with the given verdict, excluding the connected prefix.
    pub fn runs(&self, verdict: TriState) -> Vec<RangeInclusive<i64>> {
        let start = match verdict {
            TriState::Connected => self.connected_prefix().unwrap_or(0) + 1,
            _ => 1,
        };
        let mut runs = Vec::new();
        let mut open: Option<i64> = None;
        for k in start..=self.nonempty_max_k + 1 {
            let hit = self.verdict(k) == Some(verdict);
            match (hit, open) {
                (true, None) => open = Some(k),
                (false, Some(a)) => {
                    runs.push(a..=k - 1);
                    open = None;
                }
                _ => {}
            }
        }
        runs
    }
}

/// Formats runs like `57,60-63`; an empty list renders as `--`.
pub fn format_runs(runs: &[RangeInclusive<i64>]) -> String {
    if runs.is_empty() {
        return "--".to_string();
    }
    runs.iter()
        .map(|r| {
            if r.start() == r.end() {
                r.start().to_string()
            } else {
                format!("{}-{}", r.start(), r.end())
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Rows of the square summary table (`r = m = n`) for each `n` in range.
pub fn render_table(family: Family, n_range: RangeInclusive<i64>) -> Result<Vec<TableRow>> {
    n_range
        .map(|n| {
            let top = FanoParams::new(n, n, n, 0)?;
            let nonempty_max_k = (top.r() - 1) * n - 1;
            let mut singular_max_k = None;
            let mut connected_cells = Vec::with_capacity(nonempty_max_k as usize);
            for k in 1..=nonempty_max_k {
                let p = top.with_k(k)?;
                let c = classify(family, &p)?;
                if !c.smooth.value {
                    singular_max_k = Some(k);
                }
                connected_cells.push(c.connected.value);
            }
            Ok(TableRow {
                n,
                nonempty_max_k,
                singular_max_k,
                connected_cells,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use TriState::*;

    fn p(m: i64, n: i64, r: i64, k: i64) -> FanoParams {
        FanoParams::new(m, n, r, k).unwrap()
    }

    #[test]
    fn det_smooth_examples() {
        assert!(det_is_smooth(&p(3, 3, 3, 4)).unwrap());
        assert!(!det_is_smooth(&p(4, 4, 4, 8)).unwrap());
        assert!(det_is_smooth(&p(2, 2, 2, 1)).unwrap());
    }

    #[test]
    fn det_irreducible_examples() {
        assert!(!det_is_irreducible(&p(3, 3, 3, 5)).unwrap());
        assert!(det_is_irreducible(&p(3, 4, 3, 6)).unwrap());
        assert!(!det_is_irreducible(&p(3, 4, 3, 5)).unwrap());
    }

    #[test]
    fn det_connected_examples() {
        assert_eq!(det_is_connected(&p(6, 6, 6, 24)).unwrap(), Connected);
        assert_eq!(det_is_connected(&p(6, 6, 6, 22)).unwrap(), Disconnected);
        assert_eq!(det_is_connected(&p(5, 5, 4, 10)).unwrap(), Unknown);
        assert_eq!(det_is_connected(&p(8, 8, 8, 49)).unwrap(), Disconnected);
    }

    #[test]
    fn perm_examples() {
        assert!(perm_is_smooth(&p(3, 3, 3, 5)).unwrap());
        assert!(!perm_is_smooth(&p(3, 3, 3, 4)).unwrap());
        assert!(perm_is_smooth(&p(2, 2, 2, 1)).unwrap());
        for q in [p(3, 3, 3, 1), p(4, 4, 4, 7), p(2, 2, 2, 1)] {
            assert!(!perm_is_irreducible(&q).unwrap());
        }
        assert_eq!(perm_is_connected(&p(3, 3, 3, 4)).unwrap(), Disconnected);
        assert_eq!(perm_is_connected(&p(3, 3, 3, 3)).unwrap(), Connected);
        assert_eq!(perm_is_connected(&p(7, 7, 7, 36)).unwrap(), Unknown);
        assert_eq!(perm_is_connected(&p(2, 2, 2, 1)).unwrap(), Disconnected);
    }

    #[test]
    fn empty_scheme_is_domain_error() {
        let q = p(3, 3, 3, 6);
        for f in [Family::Det, Family::Perm] {
            assert!(matches!(classify(f, &q), Err(crate::FanoError::Domain(_))));
        }
        assert!(det_is_smooth(&q).is_err());
        assert!(perm_is_connected(&q).is_err());
    }

    #[test]
    fn table_examples() {
        let det5 = &render_table(Family::Det, 5..=5).unwrap()[0];
        assert_eq!(det5.nonempty_max_k, 19);
        assert_eq!(det5.singular_max_k, Some(15));
        assert_eq!(det5.connected_prefix(), Some(13));
        let perm4 = &render_table(Family::Perm, 4..=4).unwrap()[0];
        assert_eq!(perm4.singular_max_k, Some(9));
        assert_eq!(perm4.connected_prefix(), Some(8));
        assert_eq!(format_runs(&perm4.runs(Disconnected)), "10-11");
        let det2 = &render_table(Family::Det, 2..=2).unwrap()[0];
        assert_eq!(det2.nonempty_max_k, 1);
        assert_eq!(det2.singular_max_k, None);
        assert_eq!(det2.connected_prefix(), None);
    }

    #[test]
    fn square_det_never_unknown() {
        for m in 2..=8 {
            for n in m..=9 {
                for k in 1..(m - 1) * n {
                    assert_ne!(det_is_connected(&p(m, n, m, k)).unwrap(), Unknown);
                }
            }
        }
    }

    #[test]
    fn perm_threshold_one_above_det() {
        for n in 3..=9 {
            for r in 2..=n {
                let det_t = (r - 2) * n;
                for k in 1..(r - 1) * n {
                    let q = p(n, n, r, k);
                    assert_eq!(det_is_smooth(&q).unwrap(), k > det_t);
                    assert_eq!(perm_is_smooth(&q).unwrap(), k > det_t + 1);
                }
            }
        }
    }

    #[test]
    fn certificates_name_witness() {
        let c = classify(Family::Det, &p(6, 6, 6, 22)).unwrap();
        assert_eq!(c.connected.certificate.s, Some(2));
        assert_eq!(c.connected.certificate.tag, "maximal-minors:interval(s=2)");
        let c = classify(Family::Det, &p(5, 5, 4, 10)).unwrap();
        assert_eq!(c.connected.certificate.tag, "undecided");
    }

    // The chain conditions for r < m only apply once no component is
    // isolated, so only the unconditional clauses are compared here.
    #[test]
    fn sufficient_conditions_never_conflict() {
        for m in 2..=9 {
            for n in m..=10 {
                for r in 2..=m {
                    for k in 1..(r - 1) * n {
                        let q = p(m, n, r, k);
                        let det_unconditional = if r == m {
                            det_connected_clause(&q).is_some()
                        } else {
                            below_small_k_bound(&q)
                        };
                        assert!(
                            det_disconnected_clause(&q).is_none() || !det_unconditional,
                            "det {q:?}"
                        );
                        assert!(
                            perm_disconnected_clause(&q).is_none() || perm_connected_clause(&q).is_none(),
                            "perm {q:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn exact_small_k_bound() {
        // 5*2 - 1/4 = 9.75 and 4*1 - 9/4 = 1.75
        assert!(below_small_k_bound(&p(5, 6, 4, 9)));
        assert!(!below_small_k_bound(&p(5, 6, 4, 10)));
        assert!(below_small_k_bound(&p(4, 8, 3, 1)));
        assert!(!below_small_k_bound(&p(4, 8, 3, 2)));
    }
}
