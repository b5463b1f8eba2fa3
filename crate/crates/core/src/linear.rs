//! From k-broad to linear restriction exponents.
//!
//! A k-broad estimate at exponent `p` yields the linear estimate when
//! `2 + 4/(2n-k) ≤ p ≤ 2 + 2/(k-2)`. The linear exponent is
//! `min_k max(p_broad(n, k), p_limit(n, k))`.
//!
//! `p_broad` is strictly decreasing in `k` and `p_limit` strictly
//! increasing, so the minimum sits at their crossing. [`linear_exponent`]
//! locates the crossing with a floating-point estimate and then settles it
//! with exact comparisons; [`linear_exponent_exhaustive`] scans every `k`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::broad::{self, BroadExponent, DyadicFactors};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::exec::Exec;

/// `2 + 4/(2n - k)`.
pub fn p_limit(n: u32, k: u32) -> Result<Rational> {
    if n < 3 || k < 2 || k > n {
        return Err(Error::domain(format!("p_limit needs n >= 3 and 2 <= k <= n, got n = {n}, k = {k}")));
    }
    Ok(&Rational::from(2) + &Rational::ratio(4, 2 * n as i64 - k as i64))
}

/// Upper end of the admissible range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UpperConstraint {
    /// `k = 2`: no upper constraint.
    Unconstrained,
    AtMost(Rational),
}

impl UpperConstraint {
    pub fn admits(&self, p: &Rational) -> bool {
        match self {
            UpperConstraint::Unconstrained => true,
            UpperConstraint::AtMost(bound) => p <= bound,
        }
    }
}

impl fmt::Display for UpperConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpperConstraint::Unconstrained => f.write_str("unconstrained"),
            UpperConstraint::AtMost(b) => write!(f, "p <= {}", b.display_exponent()),
        }
    }
}

/// `2 + 2/(k - 2)` for `k ≥ 3`, unconstrained at `k = 2`.
pub fn p_upper_bg(_n: u32, k: u32) -> Result<UpperConstraint> {
    match k {
        0 | 1 => Err(Error::domain(format!("p_upper_bg needs k >= 2, got {k}"))),
        2 => Ok(UpperConstraint::Unconstrained),
        _ => Ok(UpperConstraint::AtMost(&Rational::from(2) + &Rational::ratio(2, k as i64 - 2))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearResult {
    pub n: u32,
    pub k_opt: u32,
    pub p: Rational,
    pub p_broad_at_k: Rational,
    pub p_limit_at_k: Rational,
    /// `p ≤ 2 + 2/(k_opt - 2)`; vacuous at `k_opt = 2`.
    pub upper_ok: bool,
    /// Another `k` attains the same minimum.
    pub tie: bool,
    /// Full record at `k_opt`, including the closed-form cross-check.
    pub broad: BroadExponent,
}

fn check_n(n: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::domain(format!("linear exponent needs n >= 3, got {n}")));
    }
    Ok(())
}

fn finish(n: u32, k_opt: u32, tie: bool) -> Result<LinearResult> {
    let broad = broad::p_broad(n, k_opt)?;
    let limit = p_limit(n, k_opt)?;
    let p = broad.p.clone().max(limit.clone());
    let upper_ok = p_upper_bg(n, k_opt)?.admits(&p);
    Ok(LinearResult { n, k_opt, p, p_broad_at_k: broad.p.clone(), p_limit_at_k: limit, upper_ok, tie, broad })
}

/// Floating-point guess for the smallest `k` with `p_broad ≤ p_limit`.
fn crossing_guess(n: u32) -> u32 {
    // log Π_{i=k}^{n-1} 2i/(2i+1), accumulated from the top.
    let mut log_prod = 0.0f64;
    let mut guess = n;
    for k in (2..n).rev() {
        log_prod += ((2 * k) as f64 / (2 * k + 1) as f64).ln();
        let broad = 6.0 / (2.0 * (n - 1) as f64 + (k - 1) as f64 * log_prod.exp());
        let limit = 4.0 / (2 * n - k) as f64;
        if broad <= limit {
            guess = k;
        } else {
            break;
        }
    }
    guess
}

/// Optimal `k` and the resulting linear exponent. Ties go to the smaller
/// `k` and set `tie`.
pub fn linear_exponent(n: u32) -> Result<LinearResult> {
    check_n(n)?;
    // At k = n the broad exponent 2 + 2/(n-1) is below 2 + 4/n, so the
    // predicate holds somewhere in [2, n].
    let mut k = crossing_guess(n).clamp(2, n);
    let mut f = DyadicFactors::new(k, n);
    if broad::broad_at_most_limit(n, k, &f) {
        while k > 2 {
            let down = f.extend_down(k);
            if !broad::broad_at_most_limit(n, k - 1, &down) {
                break;
            }
            k -= 1;
            f = down;
        }
    } else {
        while !broad::broad_at_most_limit(n, k, &f) {
            k += 1;
            f = DyadicFactors::new(k, n);
        }
    }
    // k is the smallest index with p_broad(k) ≤ p_limit(k). The optimum is
    // p_limit(k) at k, or p_broad(k-1) at k-1.
    if k == 2 {
        return finish(n, 2, false);
    }
    let below = f.extend_down(k);
    match broad::compare_broad_limit(n, k - 1, &below, k) {
        std::cmp::Ordering::Less => finish(n, k - 1, false),
        std::cmp::Ordering::Equal => finish(n, k - 1, true),
        // Every other k sits strictly above p_limit(k) here.
        std::cmp::Ordering::Greater => finish(n, k, false),
    }
}

/// Same result by evaluating every `k` in `2..=n`.
pub fn linear_exponent_exhaustive(n: u32) -> Result<LinearResult> {
    check_n(n)?;
    let mut best: Option<(Rational, u32)> = None;
    let mut tie = false;
    for k in 2..=n {
        let v = broad::p_broad(n, k)?.p.max(p_limit(n, k)?);
        match &best {
            Some((b, _)) if v > *b => {}
            Some((b, _)) if v == *b => tie = true,
            _ => {
                best = Some((v, k));
                tie = false;
            }
        }
    }
    let (_, k) = best.expect("n >= 3 gives candidates");
    finish(n, k, tie)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PriorEntry {
    pub exponent: Rational,
    pub attribution: String,
}

/// Previously known exponents, keyed by dimension.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PriorRegistry {
    entries: BTreeMap<u32, PriorEntry>,
}

impl PriorRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Low-dimensional rows not improved by the k-broad route.
    pub fn standard() -> Self {
        let two = Rational::from(2);
        let mut r = Self::empty();
        r.insert(2, Rational::from(4), "Fefferman-Stein");
        r.insert(3, &Rational::from(3) + &Rational::ratio(3, 13), "Wang");
        r.insert(4, &two + &Rational::ratio(1407, 1759), "Hickman-Rogers");
        r.insert(6, &two + &Rational::ratio(1, 2), "Guth");
        r.insert(8, &two + &Rational::ratio(4, 11), "Guth");
        r.insert(10, &two + &Rational::ratio(2, 7), "Guth");
        r.insert(12, &two + &Rational::ratio(4, 17), "Guth");
        r
    }

    pub fn insert(&mut self, n: u32, exponent: Rational, attribution: &str) {
        self.entries.insert(n, PriorEntry { exponent, attribution: attribution.to_owned() });
    }

    pub fn get(&self, n: u32) -> Option<&PriorEntry> {
        self.entries.get(&n)
    }

    pub fn dimensions(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Winner {
    New,
    Prior,
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Winner::New => "new",
            Winner::Prior => "prior",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub n: u32,
    pub new_p: Rational,
    pub prior: Option<PriorEntry>,
    pub winner: Winner,
    pub k_opt: u32,
    pub upper_ok: bool,
    pub tie: bool,
}

/// One row per dimension in `n_min..=n_max`.
pub fn state_of_art_table(n_min: u32, n_max: u32, registry: &PriorRegistry, exec: Exec) -> Result<Vec<TableRow>> {
    if n_min < 3 || n_min > n_max {
        return Err(Error::domain(format!("table needs 3 <= n_min <= n_max, got {n_min}..{n_max}")));
    }
    let dims: Vec<u32> = (n_min..=n_max).collect();
    let results = exec.try_map(&dims, |&n| linear_exponent(n))?;
    Ok(results
        .into_iter()
        .map(|r| {
            let prior = registry.get(r.n).cloned();
            let winner = match &prior {
                Some(e) if r.p >= e.exponent => Winner::Prior,
                _ => Winner::New,
            };
            TableRow { n: r.n, new_p: r.p, prior, winner, k_opt: r.k_opt, upper_ok: r.upper_ok, tie: r.tie }
        })
        .collect())
}

/// Flat record shared by the CSV and JSON renderings. Integers are
/// strings so that arbitrarily large numerators survive JSON readers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRecord {
    pub n: u32,
    pub new_num: String,
    pub new_den: String,
    pub prior_num: Option<String>,
    pub prior_den: Option<String>,
    pub winner: Winner,
    pub k_opt: u32,
    pub upper_ok: bool,
}

impl From<&TableRow> for TableRecord {
    fn from(r: &TableRow) -> Self {
        TableRecord {
            n: r.n,
            new_num: r.new_p.numer().to_string(),
            new_den: r.new_p.denom().to_string(),
            prior_num: r.prior.as_ref().map(|e| e.exponent.numer().to_string()),
            prior_den: r.prior.as_ref().map(|e| e.exponent.denom().to_string()),
            winner: r.winner,
            k_opt: r.k_opt,
            upper_ok: r.upper_ok,
        }
    }
}

pub fn write_table_csv<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(TableRecord::from(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn table_json(rows: &[TableRow]) -> serde_json::Value {
    serde_json::to_value(rows.iter().map(TableRecord::from).collect::<Vec<_>>()).expect("plain records serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_plus(a: i64, b: i64) -> Rational {
        &Rational::from(2) + &Rational::ratio(a, b)
    }

    #[test]
    fn limit_and_upper() {
        assert_eq!(p_limit(10, 4).unwrap(), two_plus(1, 4));
        assert_eq!(p_limit(5, 3).unwrap(), two_plus(4, 7));
        for n in 3..20 {
            assert_eq!(p_limit(n, n).unwrap(), two_plus(4, n as i64));
        }
        assert!(p_limit(2, 2).is_err());
        assert!(p_limit(5, 6).is_err());
        assert_eq!(p_upper_bg(9, 4).unwrap(), UpperConstraint::AtMost(Rational::from(3)));
        assert_eq!(p_upper_bg(9, 2).unwrap(), UpperConstraint::Unconstrained);
        assert_eq!(p_upper_bg(40, 13).unwrap(), UpperConstraint::AtMost(two_plus(2, 11)));
        assert!(p_upper_bg(9, 1).is_err());
    }

    #[test]
    fn reference_rows() {
        let r = linear_exponent(5).unwrap();
        assert_eq!((r.k_opt, r.p.clone()), (3, two_plus(63, 100)));
        assert_eq!(linear_exponent(19).unwrap().p, two_plus(1, 7));
        assert_eq!(linear_exponent(11).unwrap().p, two_plus(12597, 49670));
        assert!(linear_exponent(2).is_err());
    }

    #[test]
    fn crossing_search_matches_exhaustive() {
        for n in 3..=60 {
            assert_eq!(linear_exponent(n).unwrap(), linear_exponent_exhaustive(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn table_winners() {
        let rows = state_of_art_table(5, 19, &PriorRegistry::standard(), Exec::default()).unwrap();
        assert_eq!(rows.len(), 15);
        let row = |n: u32| rows.iter().find(|r| r.n == n).unwrap();
        assert_eq!(row(6).winner, Winner::Prior);
        assert!(row(6).new_p >= two_plus(1, 2));
        assert_eq!(row(15).winner, Winner::New);
        assert_eq!(row(15).new_p, two_plus(2, 11));
        assert_eq!(row(17).new_p, two_plus(4, 25));
        assert!(state_of_art_table(2, 5, &PriorRegistry::standard(), Exec::Sequential).is_err());
        assert!(state_of_art_table(7, 5, &PriorRegistry::standard(), Exec::Sequential).is_err());
    }

    #[test]
    fn registry_contents() {
        let reg = PriorRegistry::standard();
        assert_eq!(reg.dimensions().collect::<Vec<_>>(), vec![2, 3, 4, 6, 8, 10, 12]);
        assert_eq!(reg.get(3).unwrap().exponent, Rational::ratio(42, 13));
    }
}
