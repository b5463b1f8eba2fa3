//! The large-dimension constant.
//!
//! The optimal split satisfies `k/n → ν` where `ν^{1/2}` is the real root of
//! `2x³ + 3x² - 2`, and `n(p_lin(n) - 2) → λ = 4/(2 - ν)`. The root is
//! irrational, so it is only ever handled as an enclosing interval.

use std::io::Write;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{Polynomial, Rational};
use crate::exec::Exec;
use crate::interval::HighPrecisionReal;
use crate::linear;

pub const MAX_PRECISION: u32 = 4096;
pub const MAX_FIT_N: u32 = 100_000;
/// Decimal digits printed for the deviation columns.
pub const DEVIATION_DIGITS: usize = 12;

fn check_precision(bits: u32) -> Result<()> {
    if bits > MAX_PRECISION {
        return Err(Error::domain(format!("precision must be at most {MAX_PRECISION} bits, got {bits}")));
    }
    Ok(())
}

/// `2x³ + 3x² - 2`.
pub fn cubic() -> Polynomial {
    Polynomial::from_i64s(&[-2, 0, 3, 2])
}

/// Exact facts showing the cubic has exactly one real root, lying in `(0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CubicCertificate {
    /// `f(0) = -2 < 0`.
    pub negative_at_zero: bool,
    /// `f(1) = 3 > 0`.
    pub positive_at_one: bool,
    /// `f'(x) = 6x² + 6x > 0` on `(0, 1]`: both roots of `f'` are `≤ 0`.
    pub increasing_on_unit: bool,
    /// `f(-1) = -1 < 0` at the local maximum, so no root below zero.
    pub negative_local_max: bool,
    /// Sturm count of real roots above the Cauchy bound `-5/2` equals 1.
    pub sturm_single_root: bool,
}

impl CubicCertificate {
    pub fn holds(&self) -> bool {
        self.negative_at_zero
            && self.positive_at_one
            && self.increasing_on_unit
            && self.negative_local_max
            && self.sturm_single_root
    }
}

pub fn cubic_certificate() -> CubicCertificate {
    let f = cubic();
    let df = f.derivative();
    let q = |v: i64| Rational::from(v);
    CubicCertificate {
        negative_at_zero: f.eval(&q(0)).is_negative(),
        positive_at_one: f.eval(&q(1)).is_positive(),
        increasing_on_unit: df.count_real_roots_above(&q(0)) == 0 && df.eval(&q(1)).is_positive(),
        negative_local_max: df.eval(&q(-1)).is_zero() && f.eval(&q(-1)).is_negative(),
        sturm_single_root: f.count_real_roots_above(&Rational::ratio(-5, 2)) == 1
            && f.count_real_roots_above(&q(0)) == 1
            && f.count_real_roots_above(&q(1)) == 0,
    }
}

fn eval_interval(p: &Polynomial, x: &HighPrecisionReal) -> HighPrecisionReal {
    p.coeffs()
        .iter()
        .rev()
        .fold(HighPrecisionReal::from_i64(0), |acc, c| acc.mul(x).add(&HighPrecisionReal::point(c.clone())))
}

/// Enclosure of the root of `2x³ + 3x² - 2` with width at most
/// `2^-precision`: bisection to a coarse bracket, then interval Newton.
pub fn solve_cubic(precision: u32) -> Result<HighPrecisionReal> {
    check_precision(precision)?;
    let cert = cubic_certificate();
    if !cert.holds() {
        return Err(Error::domain("root isolation certificate failed"));
    }
    let f = cubic();
    let df = f.derivative();
    let (mut a, mut b) = (Rational::zero(), Rational::one());
    let coarse = precision.min(24);
    let two = Rational::from(2);
    let mut x = HighPrecisionReal::new(a.clone(), b.clone())?;
    while !x.width_within(coarse) {
        let mid = (&a + &b).checked_div(&two)?;
        if f.eval(&mid).is_negative() {
            a = mid;
        } else {
            b = mid;
        }
        x = HighPrecisionReal::new(a.clone(), b.clone())?;
    }
    let grid = precision + 8;
    while !x.width_within(precision) {
        let m = crate::interval::round_down(&x.midpoint(), grid);
        let fm = HighPrecisionReal::point(f.eval(&m));
        // x ⊂ (0, 1], so f' is bounded away from zero there.
        let slope = eval_interval(&df, &x);
        let newton = HighPrecisionReal::point(m.clone()).sub(&fm.div(&slope)?).round_outward(grid);
        let next = x
            .intersection(&newton)
            .ok_or_else(|| Error::domain("interval Newton lost the root"))?;
        if next.width().mul_integer(&BigInt::from(2)) > x.width() {
            // Too little progress at this grid: bisect once.
            let mid = x.midpoint();
            x = if f.eval(&mid).is_negative() {
                HighPrecisionReal::new(mid, next.upper().clone())?
            } else {
                HighPrecisionReal::new(next.lower().clone(), mid)?
            };
        } else {
            x = next;
        }
    }
    Ok(x)
}

/// The closed form `(3/8 + 8^{-1/2})^{1/3} + (3/8 - 8^{-1/2})^{1/3} - 1/2`
/// evaluated in interval arithmetic, refining the working grid until the
/// result is `2^-precision` narrow.
pub fn cardano_root(precision: u32) -> Result<HighPrecisionReal> {
    check_precision(precision)?;
    let three_eighths = HighPrecisionReal::point(Rational::ratio(3, 8));
    let half = HighPrecisionReal::point(Rational::ratio(1, 2));
    let mut work = precision + 16;
    loop {
        let inv = HighPrecisionReal::from_i64(8).sqrt(work)?.recip()?;
        let plus = three_eighths.add(&inv).cbrt(work);
        let minus = three_eighths.sub(&inv).cbrt(work);
        let root = plus.add(&minus).sub(&half);
        if root.width_within(precision) {
            return Ok(root);
        }
        work += 32;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NuLambda {
    pub precision: u32,
    /// `ν^{1/2}`: the intersection of the Newton and Cardano enclosures.
    pub root: HighPrecisionReal,
    pub nu: HighPrecisionReal,
    /// `4/(2 - ν)`.
    pub lambda: HighPrecisionReal,
    /// `6/(2 + ν^{3/2})`, which must agree with `lambda`.
    pub lambda_alt: HighPrecisionReal,
    pub consistent: bool,
}

pub fn nu_lambda(precision: u32) -> Result<NuLambda> {
    check_precision(precision)?;
    let fine = precision + 8;
    let newton = solve_cubic(fine)?;
    let cardano = cardano_root(fine)?;
    let root = newton
        .intersection(&cardano)
        .ok_or_else(|| Error::domain("Cardano and Newton enclosures are disjoint"))?;
    let nu = root.square().round_outward(fine);
    let two = HighPrecisionReal::from_i64(2);
    let lambda = HighPrecisionReal::from_i64(4).div(&two.sub(&nu))?.round_outward(fine);
    let lambda_alt = HighPrecisionReal::from_i64(6).div(&two.add(&root.pow(3)))?.round_outward(fine);
    Ok(NuLambda { precision, consistent: lambda.intersects(&lambda_alt), root, nu, lambda, lambda_alt })
}

/// `n · (2(n+1)/(n-1) - 2) = 4n/(n-1)`, the control sequence tending to 4.
pub fn tomas_gap(n: u32) -> Result<Rational> {
    if n < 2 {
        return Err(Error::domain(format!("tomas_gap needs n >= 2, got {n}")));
    }
    Rational::new(4 * n as i64, n as i64 - 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitRow {
    pub n: u32,
    pub k_opt: u32,
    /// `n (p_lin(n) - 2)`, exact.
    pub gap: Rational,
    /// Upper bound for `|gap - λ|` over the λ enclosure.
    pub deviation: Rational,
    /// Upper bound for `|k_opt/n - ν|` over the ν enclosure.
    pub k_ratio_deviation: Rational,
}

fn distance_bound(x: &Rational, iv: &HighPrecisionReal) -> Rational {
    (x - iv.lower()).abs().max((x - iv.upper()).abs())
}

fn fit_row(n: u32, constants: &NuLambda) -> Result<FitRow> {
    let lin = linear::linear_exponent(n)?;
    let gap = (&lin.p - &Rational::from(2)).mul_integer(&BigInt::from(n));
    let ratio = Rational::new(lin.k_opt as i64, n as i64)?;
    Ok(FitRow {
        n,
        k_opt: lin.k_opt,
        deviation: distance_bound(&gap, &constants.lambda),
        k_ratio_deviation: distance_bound(&ratio, &constants.nu),
        gap,
    })
}

fn check_fit_n(n: u32) -> Result<()> {
    if n < 3 {
        return Err(Error::domain(format!("asymptotic fit needs n >= 3, got {n}")));
    }
    if n > MAX_FIT_N {
        return Err(Error::ResourceGuard(format!("asymptotic fit is capped at n = {MAX_FIT_N}, got {n}")));
    }
    Ok(())
}

/// One row per dimension in `ns`, computed in parallel when `exec` allows.
pub fn fit_points(ns: &[u32], exec: Exec) -> Result<Vec<FitRow>> {
    for &n in ns {
        check_fit_n(n)?;
    }
    let constants = nu_lambda(64)?;
    exec.try_map(ns, |&n| fit_row(n, &constants))
}

/// Every dimension in `n_lo..=n_hi`.
pub fn asymptotic_fit(n_lo: u32, n_hi: u32, exec: Exec) -> Result<Vec<FitRow>> {
    if n_lo > n_hi {
        return Err(Error::domain(format!("empty range {n_lo}..={n_hi}")));
    }
    check_fit_n(n_lo)?;
    check_fit_n(n_hi)?;
    let ns: Vec<u32> = (n_lo..=n_hi).collect();
    fit_points(&ns, exec)
}

/// `n_lo, n_lo + step, …`, always ending at `n_hi`.
pub fn stepped(n_lo: u32, n_hi: u32, step: u32) -> Vec<u32> {
    let mut ns: Vec<u32> = (n_lo..=n_hi).step_by(step.max(1) as usize).collect();
    if ns.last() != Some(&n_hi) && n_lo <= n_hi {
        ns.push(n_hi);
    }
    ns
}

/// `1, 2, 5 × 10^j` between `n_lo` and `n_hi`, plus `n_hi`.
pub fn log_checkpoints(n_lo: u32, n_hi: u32) -> Vec<u32> {
    let mut ns = Vec::new();
    let mut decade = 1u64;
    while decade <= n_hi as u64 {
        for mult in [1, 2, 5] {
            let n = decade * mult;
            if n >= n_lo as u64 && n <= n_hi as u64 {
                ns.push(n as u32);
            }
        }
        decade *= 10;
    }
    if ns.last() != Some(&n_hi) && n_lo <= n_hi {
        ns.push(n_hi);
    }
    ns
}

/// True when the deviation never increases along the rows.
pub fn deviations_non_increasing(rows: &[FitRow]) -> bool {
    rows.windows(2).all(|w| w[1].deviation <= w[0].deviation)
}

pub fn write_fit_csv<W: Write>(rows: &[FitRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "k_opt", "gap_num", "gap_den", "deviation", "k_ratio_deviation", "precision_digits"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.k_opt.to_string(),
            r.gap.numer().to_string(),
            r.gap.denom().to_string(),
            r.deviation.to_decimal_string(DEVIATION_DIGITS),
            r.k_ratio_deviation.to_decimal_string(DEVIATION_DIGITS),
            DEVIATION_DIGITS.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn fit_json(rows: &[FitRow]) -> serde_json::Value {
    serde_json::Value::Array(
        rows.iter()
            .map(|r| {
                serde_json::json!({
                    "n": r.n,
                    "k_opt": r.k_opt,
                    "gap_num": r.gap.numer().to_string(),
                    "gap_den": r.gap.denom().to_string(),
                    "deviation": r.deviation.to_decimal_string(DEVIATION_DIGITS),
                    "k_ratio_deviation": r.k_ratio_deviation.to_decimal_string(DEVIATION_DIGITS),
                    "precision_digits": DEVIATION_DIGITS,
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_holds() {
        assert!(cubic_certificate().holds());
    }

    #[test]
    fn root_enclosures() {
        let x = solve_cubic(64).unwrap();
        assert!(x.width_within(64));
        assert!(x.certifies_prefix("0.67765"));
        let fx = eval_interval(&cubic(), &x);
        assert!(fx.contains_zero());
        let c = cardano_root(64).unwrap();
        assert!(c.width_within(64));
        assert!(c.intersects(&x));
        assert!(c.certifies_prefix("0.67765"));
    }

    #[test]
    fn widths_shrink_with_precision() {
        for bits in [8, 16, 32, 100] {
            assert!(solve_cubic(bits).unwrap().width_within(bits));
            assert!(cardano_root(bits).unwrap().width_within(bits));
        }
        assert!(solve_cubic(MAX_PRECISION + 1).is_err());
    }

    #[test]
    fn constants() {
        let c = nu_lambda(64).unwrap();
        assert!(c.lambda.certifies_prefix("2.59607"));
        assert!(c.nu.certifies_prefix("0.45921"));
        assert!(c.consistent);
        assert!(c.lambda.width_within(64) && c.nu.width_within(64));
    }

    #[test]
    fn small_fit_rows() {
        let rows = fit_points(&[19], Exec::Sequential).unwrap();
        assert_eq!(rows[0].gap, Rational::ratio(19, 7));
        assert!(fit_points(&[MAX_FIT_N + 1], Exec::Sequential).is_err());
        assert!(asymptotic_fit(2, 10, Exec::Sequential).is_err());
        assert_eq!(tomas_gap(5).unwrap(), Rational::from(5));
    }

    #[test]
    fn checkpoints() {
        assert_eq!(stepped(10, 30, 7), vec![10, 17, 24, 30]);
        assert_eq!(log_checkpoints(3, 600), vec![5, 10, 20, 50, 100, 200, 500, 600]);
    }
}
