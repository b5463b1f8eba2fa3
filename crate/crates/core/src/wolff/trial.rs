//! Seeded falsification trials against the line-form incidence bound.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::geometry::{axpy, normalized, AffineFlag, AffineSubspace, Ball, Line};
use super::lattice::{direction_lattice, lattice_size_estimate, sample_directions};
use super::occupancy::{count_satisfying, theorem_bound};
use crate::error::{Error, Result};
use crate::exec::Exec;

pub const MAX_TRIAL_N: usize = 6;
pub const MAX_TRIAL_R: f64 = 1e6;
pub const MAX_BUDGET: usize = 1_000_000;
pub const DEFAULT_C: f64 = 10.0;
pub const DEFAULT_EPS: f64 = 0.1;
pub const MODEL: &str = "affine-flag line-form surrogate";
pub const PRECISION: &str = "binary64";

/// Where line base points are drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseDistribution {
    /// On the deepest subspace, within a quarter of its radius of the
    /// flag origin.
    #[default]
    Concentrated,
    /// Uniform in the ball `B_R` about the coordinate origin.
    Uniform,
}

fn default_c() -> f64 {
    DEFAULT_C
}

fn default_eps() -> f64 {
    DEFAULT_EPS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialConfig {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "R")]
    pub big_r: f64,
    /// Fixed radii; drawn per seed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<f64>>,
    /// Fixed widths; drawn per seed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<f64>>,
    pub seeds: Vec<u64>,
    #[serde(rename = "C", default = "default_c")]
    pub c: f64,
    #[serde(default = "default_eps")]
    pub eps: f64,
    pub budget: usize,
    #[serde(default)]
    pub distribution: BaseDistribution,
}

impl TrialConfig {
    pub fn new(n: usize, m: usize, big_r: f64, seeds: Vec<u64>, budget: usize) -> Self {
        TrialConfig {
            n,
            m,
            big_r,
            r: None,
            rho: None,
            seeds,
            c: DEFAULT_C,
            eps: DEFAULT_EPS,
            budget,
            distribution: BaseDistribution::Concentrated,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: TrialConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(2..=MAX_TRIAL_N).contains(&self.n) {
            return bad(format!("n must lie in 2..={MAX_TRIAL_N}, got {}", self.n));
        }
        if self.m >= self.n {
            return bad(format!("m must be below n, got m = {}", self.m));
        }
        if !(self.big_r >= 4.0 && self.big_r <= MAX_TRIAL_R) {
            return bad(format!("R must lie in [4, {MAX_TRIAL_R}], got {}", self.big_r));
        }
        if self.budget == 0 {
            return bad("budget must be positive".into());
        }
        if self.budget > MAX_BUDGET {
            return Err(Error::ResourceGuard(format!("line budget {} exceeds {MAX_BUDGET}", self.budget)));
        }
        if !(self.c > 0.0 && self.eps >= 0.0) {
            return bad("need C > 0 and eps >= 0".into());
        }
        for (name, v) in [("r", &self.r), ("rho", &self.rho)] {
            if let Some(v) = v {
                if v.len() != self.m {
                    return bad(format!("{name} needs {} entries, got {}", self.m, v.len()));
                }
            }
        }
        if self.r.is_some() != self.rho.is_some() {
            return bad("give both r and rho, or neither".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub r: Vec<f64>,
    pub rho: Vec<f64>,
    pub distribution: BaseDistribution,
    /// Size of the direction-separated family tested.
    pub lines: usize,
    pub count: usize,
    pub bound: f64,
    pub ratio: f64,
    pub violated: bool,
    pub model: String,
    /// Arithmetic used for `bound`, `ratio` and the scales.
    pub precision: String,
}

fn gaussian(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.sample(StandardNormal)).collect()
}

fn unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        if let Some(u) = normalized(&gaussian(rng, d)) {
            return u;
        }
    }
}

/// Uniform point of the ball of radius `radius` about the origin.
fn in_ball(rng: &mut ChaCha8Rng, d: usize, radius: f64) -> Vec<f64> {
    let s = radius * rng.random::<f64>().powf(1.0 / d as f64);
    unit(rng, d).into_iter().map(|x| x * s).collect()
}

/// `m` orthonormal vectors by Gram–Schmidt on Gaussian draws.
fn orthonormal_frame(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Vec<f64>> {
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(m);
    while frame.len() < m {
        let g = gaussian(rng, n);
        let v = frame.iter().fold(g.clone(), |acc, e| axpy(&acc, -super::geometry::dot(&g, e), e));
        // Second pass for orthogonality to rounding level.
        let v = frame.iter().fold(v.clone(), |acc, e| axpy(&acc, -super::geometry::dot(&v, e), e));
        if super::geometry::norm(&v) > 1e-3 {
            frame.push(normalized(&v).expect("nonzero"));
        }
    }
    frame
}

/// Radii log-uniform in `[R^{1/2}, R]`, sorted down; widths
/// `ρ_j = min(ρ_{j-1}, r_j^{a_j})` with `a_j ∈ [1/2, 1]`.
fn sample_scales(rng: &mut ChaCha8Rng, m: usize, big_r: f64) -> (Vec<f64>, Vec<f64>) {
    let ln = big_r.ln();
    let mut r: Vec<f64> = (0..m).map(|_| (ln * rng.random_range(0.5..=1.0)).exp()).collect();
    r.sort_by(|a, b| b.total_cmp(a));
    let mut rho = Vec::with_capacity(m);
    let mut prev = f64::INFINITY;
    for rj in &r {
        let a: f64 = rng.random_range(0.5..=1.0);
        prev = prev.min(rj.powf(a));
        rho.push(prev);
    }
    (r, rho)
}

/// Random flag with a common origin `o`, `V_j` cut out by the first `j`
/// conormals and ball centers walking away from `o`.
fn random_flag(rng: &mut ChaCha8Rng, n: usize, big_r: f64, r: &[f64], rho: &[f64]) -> Result<AffineFlag> {
    let m = r.len();
    let frame = orthonormal_frame(rng, n, m);
    let origin = in_ball(rng, n, big_r / 4.0);
    let subspaces = (1..=m)
        .map(|j| AffineSubspace::new(origin.clone(), frame[..j].to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let mut centers = vec![origin.clone(); m];
    for j in (0..m.saturating_sub(1)).rev() {
        let step = (r[j] - r[j + 1]) / 4.0;
        centers[j] = axpy(&centers[j + 1], step, &unit(rng, n));
    }
    let balls = centers
        .into_iter()
        .zip(r)
        .map(|(c, &radius)| Ball::new(c, radius))
        .collect::<Result<Vec<_>>>()?;
    AffineFlag::new(n, big_r, subspaces, balls, rho.to_vec())
}

/// One trial: a random flag, one line per direction of a separated family,
/// and the count of lines meeting every occupancy condition.
pub fn falsification_trial(seed: u64, config: &TrialConfig) -> Result<TrialReport> {
    config.validate()?;
    let (n, m, big_r) = (config.n, config.m, config.big_r);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (r, rho) = match (&config.r, &config.rho) {
        (Some(r), Some(rho)) => (r.clone(), rho.clone()),
        _ => sample_scales(&mut rng, m, big_r),
    };
    let flag = random_flag(&mut rng, n, big_r, &r, &rho)?;
    let deepest = flag.subspaces().last();
    let spread = match m {
        0 => 0.0,
        _ => rho[m - 1] / r[m - 1],
    };
    let dirs = if lattice_size_estimate(n, big_r) <= config.budget as f64 {
        direction_lattice(n, big_r)?
    } else {
        sample_directions(n, big_r, config.budget, deepest, spread, &mut rng)?
    };
    let base_radius = r.last().copied().unwrap_or(big_r) / 4.0;
    let lines = dirs
        .iter()
        .map(|d| {
            let base = match (config.distribution, deepest) {
                (BaseDistribution::Concentrated, Some(v)) => {
                    let y = axpy(v.origin(), 1.0, &in_ball(&mut rng, n, base_radius));
                    v.project(&y)
                }
                (BaseDistribution::Concentrated, None) => in_ball(&mut rng, n, base_radius),
                (BaseDistribution::Uniform, _) => in_ball(&mut rng, n, big_r),
            };
            Line::new(base, d)
        })
        .collect::<Result<Vec<_>>>()?;
    let count = count_satisfying(&lines, &flag, Exec::Sequential);
    let bound = theorem_bound(n, m, big_r, &r, &rho, config.eps, config.c)?;
    Ok(TrialReport {
        seed,
        n,
        m,
        big_r,
        r,
        rho,
        distribution: config.distribution,
        lines: lines.len(),
        count,
        bound,
        ratio: count as f64 / bound,
        violated: count as f64 > bound,
        model: MODEL.to_owned(),
        precision: PRECISION.to_owned(),
    })
}

/// Every seed of `config`, in seed order.
pub fn run_suite(config: &TrialConfig, exec: Exec) -> Result<Vec<TrialReport>> {
    config.validate()?;
    exec.try_map(&config.seeds, |&s| falsification_trial(s, config))
}

/// `(n, m) ∈ {(3,1), (3,2), (4,2), (5,3)}`, `R ∈ {10³, 10⁴}`, seeds `0..100`.
pub fn standard_suite(budget: usize) -> Vec<TrialConfig> {
    let mut out = Vec::new();
    for (n, m) in [(3, 1), (3, 2), (4, 2), (5, 3)] {
        for big_r in [1e3, 1e4] {
            out.push(TrialConfig::new(n, m, big_r, (0..100).collect(), budget));
        }
    }
    out
}

pub fn write_json_lines<W: Write>(reports: &[TrialReport], mut out: W) -> Result<()> {
    for r in reports {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}
