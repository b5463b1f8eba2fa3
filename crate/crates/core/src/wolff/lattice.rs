//! Separated direction families from the frequency lattice.
//!
//! Frequencies `ω` range over `h · Z^{n-1}` inside the open unit ball and
//! map to directions `G(ω) = (-2ω, 1)`, normalized. With
//! `h = s · c_n · R^{-1/2}`, `c_n = 1/(2√(n-1))` and `s = ⌈5√(n-1)⌉`, the
//! spacing is at least `2.5 R^{-1/2}`. On the unit ball
//! `sin ∠(G(ω), G(ω')) ≥ (2/5)|ω - ω'|`, so distinct directions are at
//! least `R^{-1/2}` apart in angle.

use std::collections::HashSet;

use rand::Rng;
use rand_distr::StandardNormal;

use super::geometry::{dot, normalized, AffineSubspace};
use crate::error::{Error, Result};

pub const MAX_LATTICE_POINTS: f64 = 1e7;

pub fn check_lattice_args(n: usize, big_r: f64) -> Result<()> {
    if !(2..=6).contains(&n) {
        return Err(Error::domain(format!("direction lattice needs 2 <= n <= 6, got {n}")));
    }
    if !(big_r >= 4.0 && big_r.is_finite()) {
        return Err(Error::domain(format!("direction lattice needs R >= 4, got {big_r}")));
    }
    Ok(())
}

/// Lattice spacing `h` in frequency space.
pub fn lattice_spacing(n: usize, big_r: f64) -> f64 {
    let d = (n - 1) as f64;
    let c_n = 0.5 / d.sqrt();
    let thin = (5.0 * d.sqrt()).ceil();
    thin * c_n / big_r.sqrt()
}

/// Guaranteed angular separation of distinct lattice directions.
pub fn separation(big_r: f64) -> f64 {
    big_r.powf(-0.5)
}

fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / d as f64 * unit_ball_volume(d - 2),
    }
}

/// Approximate number of lattice points.
pub fn lattice_size_estimate(n: usize, big_r: f64) -> f64 {
    let d = n - 1;
    unit_ball_volume(d) / lattice_spacing(n, big_r).powi(d as i32)
}

/// `G(ω) / |G(ω)|`.
pub fn direction_of(omega: &[f64]) -> Vec<f64> {
    let mut g: Vec<f64> = omega.iter().map(|w| -2.0 * w).collect();
    g.push(1.0);
    normalized(&g).expect("last coordinate is 1")
}

/// Inverse of [`direction_of`] for directions with positive last coordinate.
pub fn frequency_of(dir: &[f64]) -> Option<Vec<f64>> {
    let (last, head) = dir.split_last()?;
    (*last > 0.0).then(|| head.iter().map(|x| -x / (2.0 * last)).collect())
}

/// Integer points `z` with `|h z| < 1` and `|z_i| ≤ caps[i]`.
fn enumerate(h: f64, caps: &[i64]) -> Vec<Vec<i64>> {
    fn rec(h: f64, caps: &[i64], prefix: &mut Vec<i64>, used: f64, out: &mut Vec<Vec<i64>>) {
        let i = prefix.len();
        if i == caps.len() {
            out.push(prefix.clone());
            return;
        }
        let room = 1.0 - used;
        let reach = ((room.max(0.0)).sqrt() / h).floor() as i64;
        let cap = caps[i].min(reach);
        for z in -cap..=cap {
            let next = used + (z as f64 * h).powi(2);
            if next < 1.0 {
                prefix.push(z);
                rec(h, caps, prefix, next, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(h, caps, &mut Vec::with_capacity(caps.len()), 0.0, &mut out);
    out
}

fn to_direction(h: f64, z: &[i64]) -> Vec<f64> {
    let omega: Vec<f64> = z.iter().map(|&k| k as f64 * h).collect();
    direction_of(&omega)
}

/// Every lattice direction, in a fixed order.
pub fn direction_lattice(n: usize, big_r: f64) -> Result<Vec<Vec<f64>>> {
    check_lattice_args(n, big_r)?;
    let est = lattice_size_estimate(n, big_r);
    if est > MAX_LATTICE_POINTS {
        return Err(Error::ResourceGuard(format!("direction lattice would hold about {est:.3e} points")));
    }
    let h = lattice_spacing(n, big_r);
    let cap = (1.0 / h).floor() as i64;
    Ok(enumerate(h, &vec![cap; n - 1]).iter().map(|z| to_direction(h, z)).collect())
}

/// Lattice directions within angle `≤ R^{-1/2}` of the direction space of
/// `{x_0 = … = x_{j-1} = 0}`.
pub fn directions_near_coordinate_subspace(n: usize, j: usize, big_r: f64) -> Result<Vec<Vec<f64>>> {
    check_lattice_args(n, big_r)?;
    let h = lattice_spacing(n, big_r);
    let tol = separation(big_r);
    // sin ∠ = 2|ω_head| / √(1 + 4|ω|²) ≤ tol forces |ω_i| ≤ tol·√5/2 on the
    // first j coordinates.
    let head = ((tol * 5f64.sqrt() / 2.0) / h).floor() as i64;
    let full = (1.0 / h).floor() as i64;
    let caps: Vec<i64> = (0..n - 1).map(|i| if i < j { head } else { full }).collect();
    let boxed: f64 = caps.iter().map(|c| (2 * c + 1) as f64).product();
    if boxed > MAX_LATTICE_POINTS * 10.0 {
        return Err(Error::ResourceGuard(format!("restricted lattice box holds {boxed:.3e} points")));
    }
    Ok(enumerate(h, &caps)
        .iter()
        .map(|z| to_direction(h, z))
        .filter(|d| d[..j].iter().map(|x| x * x).sum::<f64>().sqrt() <= tol)
        .collect())
}

fn gaussian<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.sample(StandardNormal)).collect()
}

/// Distinct lattice directions drawn at random, for lattices too large to
/// enumerate. Half of the draws are uniform in frequency space; the other
/// half are tangent to `near` up to a Gaussian tilt of size `spread`, then
/// rounded to the lattice.
pub fn sample_directions<R: Rng>(
    n: usize,
    big_r: f64,
    count: usize,
    near: Option<&AffineSubspace>,
    spread: f64,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    check_lattice_args(n, big_r)?;
    let d = n - 1;
    let h = lattice_spacing(n, big_r);
    let mut seen: HashSet<Vec<i64>> = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count && attempts < 20 * count + 100 {
        attempts += 1;
        let omega = match near {
            Some(v) if attempts.is_multiple_of(2) => {
                let t = v.tangent_part(&gaussian(rng, n));
                let Some(mut u) = normalized(&t) else { continue };
                if u[d] < 0.0 {
                    u.iter_mut().for_each(|x| *x = -*x);
                }
                let tilt = gaussian(rng, n);
                let Some(dir) = normalized(&u.iter().zip(&tilt).map(|(a, b)| a + spread * b).collect::<Vec<_>>())
                else {
                    continue;
                };
                match frequency_of(&dir) {
                    Some(w) => w,
                    None => continue,
                }
            }
            _ => {
                let g = gaussian(rng, d);
                let radius = rng.random::<f64>().powf(1.0 / d as f64);
                let len = dot(&g, &g).sqrt();
                if len == 0.0 {
                    continue;
                }
                g.iter().map(|x| x / len * radius).collect()
            }
        };
        let z: Vec<i64> = omega.iter().map(|w| (w / h).round() as i64).collect();
        let r2: f64 = z.iter().map(|&k| (k as f64 * h).powi(2)).sum();
        if r2 < 1.0 && seen.insert(z.clone()) {
            out.push(to_direction(h, &z));
        }
    }
    Ok(out)
}

/// Smallest pairwise angle over all pairs (small families) or over
/// `pairs` random pairs.
pub fn min_pairwise_angle<R: Rng>(dirs: &[Vec<f64>], pairs: usize, rng: &mut R) -> f64 {
    use super::geometry::angle;
    let k = dirs.len();
    if k < 2 {
        return f64::INFINITY;
    }
    if k * (k - 1) / 2 <= pairs {
        let mut best = f64::INFINITY;
        for i in 0..k {
            for j in i + 1..k {
                best = best.min(angle(&dirs[i], &dirs[j]));
            }
        }
        return best;
    }
    (0..pairs)
        .map(|_| {
            let i = rng.random_range(0..k);
            let mut j = rng.random_range(0..k - 1);
            if j >= i {
                j += 1;
            }
            angle(&dirs[i], &dirs[j])
        })
        .fold(f64::INFINITY, f64::min)
}
