//! The multiscale parameter system and the identities that close the
//! induction.
//!
//! For a dimension `n` and depth `m ≤ n-2`:
//!
//! ```text
//! γ_j = (n-m-1)/2 · 1/((n-j)(n-j-1)) · Π_{i=n-m}^{n-j} 2i/(2i+1)   (1 ≤ j ≤ m)
//! γ_0 = 1 - Σ_{j≥1} γ_j,         σ_i = Σ_{j=i}^{m} γ_j,  σ_{m+1} = 0
//! (1/2 - 1/p_i)^{-1} = 2n - m - i + Σ_{j=i+1}^{m} (j-i) γ_j
//! X_i = (β_{i-1} - β_i)/2 - (1 + σ_i)/2 · (1/2 - 1/p_0)              (1 ≤ i ≤ m)
//! Y_i = β_{i-1}/2 - (1 + (n-i)(1 - σ_i)) · (1/2 - 1/p_0)             (1 ≤ i ≤ m+1)
//! ```
//!
//! Every quantity is built once, generically over [`Scalar`], and then
//! instantiated with `n` a [`Rational`] (numeric checks) or the
//! indeterminate of a [`RationalFunction`] (identities in `n` at fixed `m`).

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exact::{Polynomial, Rational, RationalFunction, Scalar};
use crate::exec::Exec;

/// Orientation of the ratios `α_i`, `β_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BetaConvention {
    /// `β_i = (1/2 - 1/p_i) / (1/2 - 1/p_0)`, as typeset.
    Printed,
    /// `β_i = (1/2 - 1/p_0) / (1/2 - 1/p_i)`; the orientation under which
    /// every residual vanishes.
    Reciprocal,
}

impl BetaConvention {
    pub const ALL: [BetaConvention; 2] = [BetaConvention::Reciprocal, BetaConvention::Printed];

    pub fn name(self) -> &'static str {
        match self {
            BetaConvention::Printed => "printed",
            BetaConvention::Reciprocal => "reciprocal",
        }
    }
}

/// Full parameter system at one `(n, m)`.
///
/// Index conventions: `gamma[j] = γ_j` and `p[i] = p_i` for `0..=m`;
/// `sigma[i] = σ_i` for `0..=m+1`; `alpha[i]`, `beta[i]` for `0..=m` with
/// `alpha[0] = beta[0] = 1`; `x[i-1] = X_i` for `1..=m`;
/// `y[i-1] = Y_i` for `1..=m+1`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultigrainParams<S> {
    pub n: S,
    pub m: usize,
    pub gamma: Vec<S>,
    pub sigma: Vec<S>,
    pub p: Vec<S>,
    pub alpha: Vec<S>,
    pub beta: Vec<S>,
    pub x: Vec<S>,
    pub y: Vec<S>,
    pub convention: BetaConvention,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Residuals<S> {
    pub x: Vec<S>,
    pub y: Vec<S>,
}

impl<S: Scalar> Residuals<S> {
    pub fn all_zero(&self) -> bool {
        self.x.iter().chain(&self.y).all(Scalar::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BetaRatios<S> {
    pub alpha: Vec<S>,
    pub beta: Vec<S>,
}

fn int<S: Scalar>(v: i64) -> S {
    S::from_i64(v)
}

fn half<S: Scalar>() -> S {
    S::one().div_ref(&int(2)).expect("2 != 0")
}

/// Rejects intermediate values whose size exceeds `cap`.
struct Guard {
    cap: Option<usize>,
}

impl Guard {
    fn check<S: Scalar>(&self, what: &str, v: &S) -> Result<()> {
        match self.cap {
            Some(cap) if v.complexity() > cap => Err(Error::ResourceGuard(format!(
                "{what} reached degree {} (cap {cap})",
                v.complexity()
            ))),
            _ => Ok(()),
        }
    }
}

/// `Π_{i=n-m}^{n-j} 2i/(2i+1)`, a product of `m-j+1` factors.
fn dyadic_tail<S: Scalar>(n: &S, m: usize, j: usize) -> Result<S> {
    let mut acc = S::one();
    for t in 0..=(m - j) {
        let i = n.sub_ref(&int((m - t) as i64));
        let two_i = i.mul_ref(&int(2));
        acc = acc.mul_ref(&two_i.div_ref(&two_i.add_ref(&S::one()))?);
    }
    Ok(acc)
}

fn gamma_generic<S: Scalar>(n: &S, m: usize, guard: &Guard) -> Result<Vec<S>> {
    let mut gamma = vec![S::zero(); m + 1];
    let lead = n.sub_ref(&int(m as i64 + 1)).div_ref(&int(2))?;
    // tail = Π_{i=n-m}^{n-j}, extended by one factor per step down in j.
    let mut tail = S::one();
    for j in (1..=m).rev() {
        let two_i = n.sub_ref(&int(j as i64)).mul_ref(&int(2));
        tail = tail.mul_ref(&two_i.div_ref(&two_i.add_ref(&S::one()))?);
        let nj = n.sub_ref(&int(j as i64));
        let nj1 = n.sub_ref(&int(j as i64 + 1));
        gamma[j] = lead.mul_ref(&tail).div_ref(&nj.mul_ref(&nj1))?;
        guard.check("gamma", &gamma[j])?;
    }
    let rest = gamma.iter().skip(1).fold(S::zero(), |acc, g| acc.add_ref(g));
    gamma[0] = S::one().sub_ref(&rest);
    Ok(gamma)
}

fn sigma_generic<S: Scalar>(gamma: &[S]) -> Vec<S> {
    let m = gamma.len() - 1;
    let mut sigma = vec![S::zero(); m + 2];
    for i in (0..=m).rev() {
        sigma[i] = sigma[i + 1].add_ref(&gamma[i]);
    }
    sigma
}

/// Right-hand sides `2n - m - i + Σ_{j>i} (j-i) γ_j` for `0 ≤ i ≤ m`.
fn inverse_gaps<S: Scalar>(n: &S, m: usize, gamma: &[S]) -> Vec<S> {
    // With T_i = Σ_{j>i} (j-i) γ_j and σ_i = Σ_{j≥i} γ_j: T_i = T_{i+1} + σ_{i+1}.
    let sigma = sigma_generic(gamma);
    let mut tail = S::zero();
    let mut out = vec![S::zero(); m + 1];
    for i in (0..=m).rev() {
        if i < m {
            tail = tail.add_ref(&sigma[i + 1]);
        }
        out[i] = n.mul_ref(&int(2)).sub_ref(&int((m + i) as i64)).add_ref(&tail);
    }
    out
}

fn lebesgue_generic<S: Scalar>(n: &S, m: usize, gamma: &[S], guard: &Guard) -> Result<Vec<S>> {
    inverse_gaps(n, m, gamma)
        .into_iter()
        .map(|w| {
            // 1/2 - 1/p = 1/w  ⇒  p = 2w/(w - 2)
            let p = w.mul_ref(&int(2)).div_ref(&w.sub_ref(&int(2)))?;
            guard.check("p", &p)?;
            Ok(p)
        })
        .collect()
}

/// `1/2 - 1/p`.
fn gap<S: Scalar>(p: &S) -> Result<S> {
    Ok(half::<S>().sub_ref(&S::one().div_ref(p)?))
}

fn beta_generic<S: Scalar>(p: &[S], convention: BetaConvention) -> Result<BetaRatios<S>> {
    let gaps: Vec<S> = p.iter().map(gap).collect::<Result<_>>()?;
    let ratio = |num: &S, den: &S| -> Result<S> {
        match convention {
            BetaConvention::Printed => num.div_ref(den),
            BetaConvention::Reciprocal => den.div_ref(num),
        }
    };
    let mut alpha = vec![S::one()];
    let mut beta = vec![S::one()];
    for i in 1..p.len() {
        alpha.push(ratio(&gaps[i], &gaps[i - 1])?);
        beta.push(ratio(&gaps[i], &gaps[0])?);
    }
    Ok(BetaRatios { alpha, beta })
}

fn residuals_generic<S: Scalar>(n: &S, m: usize, sigma: &[S], beta: &[S], p0: &S) -> Result<Residuals<S>> {
    let z0 = gap(p0)?;
    let one = S::one();
    let x = (1..=m)
        .map(|i| {
            let first = beta[i - 1].sub_ref(&beta[i]).mul_ref(&half());
            let second = one.add_ref(&sigma[i]).mul_ref(&half()).mul_ref(&z0);
            first.sub_ref(&second)
        })
        .collect();
    let y = (1..=m + 1)
        .map(|i| {
            let weight = one.add_ref(&n.sub_ref(&int(i as i64)).mul_ref(&one.sub_ref(&sigma[i])));
            beta[i - 1].mul_ref(&half()).sub_ref(&weight.mul_ref(&z0))
        })
        .collect();
    Ok(Residuals { x, y })
}

fn build_generic<S: Scalar>(n: S, m: usize, convention: BetaConvention, guard: &Guard) -> Result<MultigrainParams<S>> {
    let gamma = gamma_generic(&n, m, guard)?;
    let sigma = sigma_generic(&gamma);
    let p = lebesgue_generic(&n, m, &gamma, guard)?;
    let BetaRatios { alpha, beta } = beta_generic(&p, convention)?;
    for b in &beta {
        guard.check("beta", b)?;
    }
    let Residuals { x, y } = residuals_generic(&n, m, &sigma, &beta, &p[0])?;
    Ok(MultigrainParams { n, m, gamma, sigma, p, alpha, beta, x, y, convention })
}

/// `2 + 6 / (2(n-1) + (n-m-1) Π_{i=n-m}^{n-1} 2i/(2i+1))`.
fn p0_closed_form_generic<S: Scalar>(n: &S, m: usize) -> Result<S> {
    let prod = if m == 0 { S::one() } else { dyadic_tail(n, m, 1)? };
    let den = n
        .sub_ref(&S::one())
        .mul_ref(&int(2))
        .add_ref(&n.sub_ref(&int(m as i64 + 1)).mul_ref(&prod));
    Ok(int::<S>(2).add_ref(&int::<S>(6).div_ref(&den)?))
}

fn check_nm(n: u32, m: u32) -> Result<()> {
    if n < 2 || m + 2 > n {
        return Err(Error::domain(format!("need 0 <= m <= n - 2, got n = {n}, m = {m}")));
    }
    Ok(())
}

const NO_GUARD: Guard = Guard { cap: None };

/// `γ_0, …, γ_m`.
pub fn gamma_weights(n: u32, m: u32) -> Result<Vec<Rational>> {
    check_nm(n, m)?;
    gamma_generic(&Rational::from(n as i64), m as usize, &NO_GUARD)
}

/// `p_0, …, p_m` from the defining equation.
pub fn lebesgue_exponents(n: u32, m: u32) -> Result<Vec<Rational>> {
    check_nm(n, m)?;
    let nq = Rational::from(n as i64);
    let gamma = gamma_generic(&nq, m as usize, &NO_GUARD)?;
    lebesgue_generic(&nq, m as usize, &gamma, &NO_GUARD)
}

/// `α_i` and `β_i` (with `α_0 = β_0 = 1`) from exponents `p_0, …, p_m`.
pub fn beta_ratios(p: &[Rational], convention: BetaConvention) -> Result<BetaRatios<Rational>> {
    if p.is_empty() {
        return Err(Error::domain("beta_ratios needs at least p_0"));
    }
    if p.iter().any(|x| *x == Rational::from(2)) {
        return Err(Error::DivisionByZero);
    }
    beta_generic(p, convention)
}

/// `X_1..X_m` and `Y_1..Y_{m+1}` recomputed from a parameter system.
pub fn identity_residuals<S: Scalar>(params: &MultigrainParams<S>) -> Result<Residuals<S>> {
    residuals_generic(&params.n, params.m, &params.sigma, &params.beta, &params.p[0])
}

/// Full numeric parameter system.
pub fn multigrain_params(n: u32, m: u32, convention: BetaConvention) -> Result<MultigrainParams<Rational>> {
    check_nm(n, m)?;
    build_generic(Rational::from(n as i64), m as usize, convention, &NO_GUARD)
}

/// Closed form of `p_0` at `(n, m)`.
pub fn p0_closed_form(n: u32, m: u32) -> Result<Rational> {
    check_nm(n, m)?;
    p0_closed_form_generic(&Rational::from(n as i64), m as usize)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConventionCheck<S> {
    pub convention: BetaConvention,
    pub residuals: Residuals<S>,
    pub all_zero: bool,
    pub beta: Vec<S>,
}

const DELTA_NOTE: &str = "residuals verified at delta = 0; the small exponent perturbation is not modelled";
const X_NOTE: &str = "X_{m+1} is not defined (it would need beta_{m+1}); only Y_{m+1} is checked";

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub n: u32,
    pub m: u32,
    pub reciprocal: ConventionCheck<Rational>,
    pub printed: ConventionCheck<Rational>,
    pub gamma: Vec<Rational>,
    pub p: Vec<Rational>,
    pub p0_closed_form: Rational,
    pub p0_closed_form_match: bool,
    /// `Σγ = 1` and `0 ≤ γ_j ≤ 1`.
    pub gamma_invariants: bool,
    /// `(1/2 - 1/p_m)^{-1} = 2(n - m)`.
    pub pm_consistent: bool,
    pub notes: Vec<String>,
}

impl IdentityReport {
    pub fn check(&self, convention: BetaConvention) -> &ConventionCheck<Rational> {
        match convention {
            BetaConvention::Printed => &self.printed,
            BetaConvention::Reciprocal => &self.reciprocal,
        }
    }

    /// The convention that zeroes every residual, reciprocal first.
    pub fn verified_convention(&self) -> Option<BetaConvention> {
        BetaConvention::ALL.into_iter().find(|c| self.check(*c).all_zero)
    }

    pub fn p0(&self) -> &Rational {
        &self.p[0]
    }

    pub fn ok(&self) -> bool {
        self.reciprocal.all_zero && self.p0_closed_form_match && self.gamma_invariants && self.pm_consistent
    }

    pub fn to_json(&self) -> serde_json::Value {
        let strs = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        let block = |c: &ConventionCheck<Rational>| {
            json!({
                "convention": c.convention.name(),
                "residuals": { "X": strs(&c.residuals.x), "Y": strs(&c.residuals.y) },
                "beta": strs(&c.beta),
                "all_zero": c.all_zero,
            })
        };
        json!({
            "n": self.n,
            "m": self.m,
            "convention": BetaConvention::Reciprocal.name(),
            "residuals": { "X": strs(&self.reciprocal.residuals.x), "Y": strs(&self.reciprocal.residuals.y) },
            "all_zero": self.reciprocal.all_zero,
            "p0": self.p0().to_string(),
            "p0_closed_form_match": self.p0_closed_form_match,
            "gamma": strs(&self.gamma),
            "p": strs(&self.p),
            "gamma_invariants": self.gamma_invariants,
            "pm_consistent": self.pm_consistent,
            "conventions": [block(&self.reciprocal), block(&self.printed)],
            "notes": self.notes,
        })
    }
}

fn convention_check<S: Scalar>(params: MultigrainParams<S>) -> ConventionCheck<S> {
    let residuals = Residuals { x: params.x, y: params.y };
    ConventionCheck { convention: params.convention, all_zero: residuals.all_zero(), residuals, beta: params.beta }
}

/// Builds the parameter system under both conventions and checks the
/// residuals, the closed form of `p_0` and the weight invariants.
pub fn verify_identities(n: u32, m: u32) -> Result<IdentityReport> {
    check_nm(n, m)?;
    let rec = multigrain_params(n, m, BetaConvention::Reciprocal)?;
    let printed = multigrain_params(n, m, BetaConvention::Printed)?;
    let gamma = rec.gamma.clone();
    let p = rec.p.clone();
    let closed = p0_closed_form(n, m)?;
    let zero = Rational::zero();
    let one = Rational::one();
    let gamma_invariants =
        gamma.iter().cloned().sum::<Rational>() == one && gamma.iter().all(|g| *g >= zero && *g <= one);
    let pm_consistent = gap(&p[m as usize])?.recip()? == Rational::from(2 * (n as i64 - m as i64));
    let mut notes = vec![DELTA_NOTE.to_owned(), X_NOTE.to_owned()];
    if printed.beta.iter().any(|b| *b > one) {
        notes.push("printed convention gives beta_i > 1".to_owned());
    }
    Ok(IdentityReport {
        n,
        m,
        p0_closed_form_match: closed == p[0],
        p0_closed_form: closed,
        reciprocal: convention_check(rec),
        printed: convention_check(printed),
        gamma,
        p,
        gamma_invariants,
        pm_consistent,
        notes,
    })
}

/// Every `(n, m)` with `2 ≤ n ≤ n_max`, `0 ≤ m ≤ n - 2`.
pub fn verify_sweep(n_max: u32, exec: Exec) -> Result<Vec<IdentityReport>> {
    let pairs: Vec<(u32, u32)> = (2..=n_max).flat_map(|n| (0..=n - 2).map(move |m| (n, m))).collect();
    exec.try_map(&pairs, |&(n, m)| verify_identities(n, m))
}

/// Default degree cap for the symbolic pipeline.
pub const SYMBOLIC_DEGREE_CAP: usize = 256;
pub const SYMBOLIC_MAX_M: u32 = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicReport {
    pub m: u32,
    pub params: MultigrainParams<RationalFunction>,
    pub reciprocal: ConventionCheck<RationalFunction>,
    pub printed: ConventionCheck<RationalFunction>,
    pub p0_closed_form: RationalFunction,
    pub p0_closed_form_match: bool,
    /// `Σγ ≡ 1`, and `0 ≤ γ_j ≤ 1` on the real ray `n ≥ m + 2`.
    pub gamma_invariants: bool,
    /// Identities hold for `n > validity_threshold`.
    pub validity_threshold: u32,
    /// No denominator vanishes for real `n > validity_threshold`.
    pub validity_certified: bool,
    pub max_degree: usize,
    pub notes: Vec<String>,
}

impl SymbolicReport {
    pub fn p0(&self) -> &RationalFunction {
        &self.params.p[0]
    }

    pub fn ok(&self) -> bool {
        self.reciprocal.all_zero && self.p0_closed_form_match && self.gamma_invariants && self.validity_certified
    }

    pub fn to_json(&self) -> serde_json::Value {
        let strs = |v: &[RationalFunction]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        json!({
            "m": self.m,
            "variable": "n",
            "convention": BetaConvention::Reciprocal.name(),
            "residuals": { "X": strs(&self.reciprocal.residuals.x), "Y": strs(&self.reciprocal.residuals.y) },
            "all_zero": self.reciprocal.all_zero,
            "printed_all_zero": self.printed.all_zero,
            "p0": self.p0().to_string(),
            "p0_closed_form_match": self.p0_closed_form_match,
            "gamma": strs(&self.params.gamma),
            "gamma_invariants": self.gamma_invariants,
            "validity": format!("n > {}", self.validity_threshold),
            "validity_certified": self.validity_certified,
            "max_degree": self.max_degree,
            "notes": self.notes,
        })
    }
}

/// `f ≥ 0` for every real `n ≥ a`, certified by root counting.
fn nonnegative_from(f: &RationalFunction, a: i64) -> bool {
    let a = Rational::from(a);
    let probe = &a + &Rational::one();
    let no_sign_change = |p: &Polynomial| p.count_real_roots_above(&a) == 0;
    if !(no_sign_change(f.numer()) && no_sign_change(f.denom())) {
        return false;
    }
    match (f.eval(&a), f.eval(&probe)) {
        (Ok(at), Ok(after)) => !at.is_negative() && !after.is_negative(),
        _ => false,
    }
}

/// Identities in `n` at fixed depth `m`, over rational functions.
pub fn verify_identities_symbolic(m: u32, degree_cap: usize) -> Result<SymbolicReport> {
    if m == 0 || m > SYMBOLIC_MAX_M {
        return Err(Error::domain(format!("symbolic verification needs 1 <= m <= {SYMBOLIC_MAX_M}, got {m}")));
    }
    let guard = Guard { cap: Some(degree_cap) };
    let n = RationalFunction::var();
    let mu = m as usize;
    let rec = build_generic(n.clone(), mu, BetaConvention::Reciprocal, &guard)?;
    let printed = build_generic(n.clone(), mu, BetaConvention::Printed, &guard)?;
    let closed = p0_closed_form_generic(&n, mu)?;

    let lo = m as i64 + 1;
    let one = RationalFunction::one();
    let gamma_sum = rec.gamma.iter().fold(RationalFunction::zero(), |acc, g| &acc + g);
    let gamma_invariants = gamma_sum == one
        && rec.gamma.iter().all(|g| nonnegative_from(g, lo + 1) && nonnegative_from(&(&one - g), lo + 1));

    // Denominators of everything built, plus the quantities divided by.
    let w = inverse_gaps(&n, mu, &rec.gamma);
    let mut watch: Vec<Polynomial> = Vec::new();
    for f in rec.gamma.iter().chain(&rec.p).chain(&rec.alpha).chain(&rec.beta).chain(&printed.beta) {
        watch.push(f.denom().clone());
    }
    for wi in &w {
        watch.push(wi.numer().clone());
        watch.push((wi - &RationalFunction::from_i64(2)).numer().clone());
    }
    let validity_certified = watch.iter().all(|p| p.count_real_roots_above(&Rational::from(lo)) == 0);

    let max_degree = rec
        .gamma
        .iter()
        .chain(&rec.p)
        .chain(&rec.beta)
        .chain(&rec.x)
        .chain(&rec.y)
        .map(RationalFunction::degree)
        .max()
        .unwrap_or(0);

    let mut notes = vec![DELTA_NOTE.to_owned(), X_NOTE.to_owned()];
    if !validity_certified {
        notes.push(format!("a denominator vanishes somewhere in n > {lo}"));
    }
    Ok(SymbolicReport {
        m,
        p0_closed_form_match: closed == rec.p[0],
        p0_closed_form: closed,
        reciprocal: convention_check(rec.clone()),
        printed: convention_check(printed),
        params: rec,
        gamma_invariants,
        validity_threshold: m + 1,
        validity_certified,
        max_degree,
        notes,
    })
}
