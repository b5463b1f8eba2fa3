//! Occupancy of a line inside `N_ρ V ∩ B`, the counted set and the bound.

use rand::Rng;

use super::geometry::{dot, sub, AffineFlag, AffineSubspace, Ball, Line, REL_TOL};
use crate::error::{Error, Result};
use crate::exec::Exec;

/// `{t : a t² + 2b t + c ≤ 0}` as a closed interval, for `a ≥ 0`.
/// `None` when empty; unbounded ends are infinite.
fn quadratic_sublevel(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    if a == 0.0 {
        if b == 0.0 {
            return (c <= 0.0).then_some((f64::NEG_INFINITY, f64::INFINITY));
        }
        let t = -c / (2.0 * b);
        return Some(if b > 0.0 { (f64::NEG_INFINITY, t) } else { (t, f64::INFINITY) });
    }
    let disc = b * b - a * c;
    if disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    // Cancellation-free roots.
    let q = -(b + b.signum() * s);
    let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
    Some((r1.min(r2), r1.max(r2)))
}

fn ball_chord(line: &Line, ball: &Ball) -> Option<(f64, f64)> {
    let d = sub(line.base(), &ball.center);
    quadratic_sublevel(1.0, dot(&d, line.dir()), dot(&d, &d) - ball.radius * ball.radius)
}

fn slab(line: &Line, v: &AffineSubspace, rho: f64) -> Option<(f64, f64)> {
    let d = sub(line.base(), v.origin());
    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    for nu in v.conormals() {
        let (p, q) = (dot(&d, nu), dot(line.dir(), nu));
        a += q * q;
        b += p * q;
        c += p * p;
    }
    quadratic_sublevel(a, b, c - rho * rho)
}

/// One-dimensional measure of `{t : dist(ℓ(t), V) ≤ ρ, ℓ(t) ∈ ball}`.
pub fn line_occupancy(line: &Line, v: &AffineSubspace, rho: f64, ball: &Ball) -> f64 {
    match (ball_chord(line, ball), slab(line, v, rho)) {
        (Some((a0, a1)), Some((b0, b1))) => (a1.min(b1) - a0.max(b0)).max(0.0),
        _ => 0.0,
    }
}

/// Same measure estimated from `samples` uniform points on the chord.
pub fn occupancy_monte_carlo<R: Rng>(line: &Line, v: &AffineSubspace, rho: f64, ball: &Ball, samples: usize, rng: &mut R) -> f64 {
    let Some((t0, t1)) = ball_chord(line, ball) else {
        return 0.0;
    };
    let hits = (0..samples)
        .filter(|_| v.dist2(&line.at(rng.random_range(t0..=t1))) <= rho * rho)
        .count();
    (t1 - t0) * hits as f64 / samples as f64
}

/// Length of `ℓ ∩ ball`.
pub fn chord_length(line: &Line, ball: &Ball) -> f64 {
    ball_chord(line, ball).map_or(0.0, |(a, b)| b - a)
}

/// `occupancy ≥ r_j` for every level, with relative slack `REL_TOL`.
pub fn satisfies(line: &Line, flag: &AffineFlag) -> bool {
    flag.subspaces()
        .iter()
        .zip(flag.balls())
        .zip(flag.rho())
        .all(|((v, ball), rho)| line_occupancy(line, v, *rho, ball) >= ball.radius * (1.0 - REL_TOL))
}

pub fn count_satisfying(lines: &[Line], flag: &AffineFlag, exec: Exec) -> usize {
    exec.count(lines, |l| satisfies(l, flag))
}

/// `C · Π(ρ_j/r_j) · R^{(n-1)/2 + eps}`.
pub fn theorem_bound(n: usize, m: usize, big_r: f64, r: &[f64], rho: &[f64], eps: f64, c: f64) -> Result<f64> {
    if r.len() != m || rho.len() != m {
        return Err(Error::domain(format!("need {m} radii and widths, got {} and {}", r.len(), rho.len())));
    }
    if n < 2 || big_r <= 0.0 {
        return Err(Error::domain("theorem_bound needs n >= 2 and R > 0"));
    }
    let prod: f64 = rho.iter().zip(r).map(|(p, q)| p / q).product();
    Ok(c * prod * big_r.powf((n as f64 - 1.0) / 2.0 + eps))
}

/// The bound for a single codimension-`j` variety emulated by a chain of
/// `j` nested levels sharing radius `r` and width `R^{1/2}`.
pub fn emulated_chain_bound(n: usize, j: usize, big_r: f64, r: f64, eps: f64, c: f64) -> Result<f64> {
    theorem_bound(n, j, big_r, &vec![r; j], &vec![big_r.sqrt(); j], eps, c)
}
