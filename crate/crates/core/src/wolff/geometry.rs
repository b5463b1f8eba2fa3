//! Lines, affine subspaces, balls and nested flags in `R^n`.

use crate::error::{Error, Result};

/// Relative slack for floating-point comparisons in this module.
pub const REL_TOL: f64 = 1e-9;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + s·b`.
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let l = norm(a);
    (l > 0.0 && l.is_finite()).then(|| a.iter().map(|x| x / l).collect())
}

/// Angle between two unit vectors, accurate for tiny angles.
pub fn angle(a: &[f64], b: &[f64]) -> f64 {
    let s = norm(&sub(a, b));
    let t = norm(&axpy(a, 1.0, b));
    2.0 * s.atan2(t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Line {
    base: Vec<f64>,
    dir: Vec<f64>,
}

impl Line {
    /// Normalizes `dir`; fails for a zero or non-finite direction.
    pub fn new(base: Vec<f64>, dir: &[f64]) -> Result<Self> {
        if base.len() != dir.len() {
            return Err(Error::domain("line base and direction differ in dimension"));
        }
        let dir = normalized(dir).ok_or_else(|| Error::domain("line direction must be nonzero and finite"))?;
        Ok(Line { base, dir })
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn dir(&self) -> &[f64] {
        &self.dir
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn at(&self, t: f64) -> Vec<f64> {
        axpy(&self.base, t, &self.dir)
    }
}

/// `{x : ⟨x - origin, ν_i⟩ = 0 for every conormal ν_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSubspace {
    origin: Vec<f64>,
    conormals: Vec<Vec<f64>>,
}

impl AffineSubspace {
    /// `conormals` must be orthonormal.
    pub fn new(origin: Vec<f64>, conormals: Vec<Vec<f64>>) -> Result<Self> {
        let n = origin.len();
        if conormals.len() > n {
            return Err(Error::domain("more conormals than dimensions"));
        }
        for (i, a) in conormals.iter().enumerate() {
            if a.len() != n {
                return Err(Error::domain("conormal has the wrong dimension"));
            }
            for (j, b) in conormals.iter().enumerate().take(i + 1) {
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot(a, b) - want).abs() > REL_TOL {
                    return Err(Error::domain("conormal frame is not orthonormal"));
                }
            }
        }
        Ok(AffineSubspace { origin, conormals })
    }

    /// `{x : x_0 = … = x_{j-1} = 0}`.
    pub fn coordinate(n: usize, j: usize) -> Result<Self> {
        let conormals = (0..j)
            .map(|i| (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(vec![0.0; n], conormals)
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn codim(&self) -> usize {
        self.conormals.len()
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn conormals(&self) -> &[Vec<f64>] {
        &self.conormals
    }

    pub fn dist2(&self, x: &[f64]) -> f64 {
        let d = sub(x, &self.origin);
        self.conormals.iter().map(|nu| dot(&d, nu).powi(2)).sum()
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let d = sub(x, &self.origin);
        self.conormals.iter().fold(x.to_vec(), |acc, nu| axpy(&acc, -dot(&d, nu), nu))
    }

    /// Component of a vector tangent to the subspace.
    pub fn tangent_part(&self, v: &[f64]) -> Vec<f64> {
        self.conormals.iter().fold(v.to_vec(), |acc, nu| axpy(&acc, -dot(v, nu), nu))
    }

    /// True when `other ⊂ self`, with relative slack `scale · REL_TOL`.
    pub fn contains(&self, other: &AffineSubspace, scale: f64) -> bool {
        if other.dim() != self.dim() || other.codim() < self.codim() {
            return false;
        }
        let spanned = self.conormals.iter().all(|nu| {
            let inside: f64 = other.conormals.iter().map(|mu| dot(nu, mu).powi(2)).sum();
            (1.0 - inside).abs() <= REL_TOL
        });
        spanned && self.dist2(&other.origin).sqrt() <= scale * REL_TOL
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::domain(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Ball { center, radius })
    }

    pub fn contains_ball(&self, other: &Ball) -> bool {
        norm(&sub(&self.center, &other.center)) + other.radius <= self.radius * (1.0 + REL_TOL)
    }
}

/// Nested subspaces `V_1 ⊃ … ⊃ V_m` (`codim V_j = j`), nested balls
/// `B_{r_1} ⊇ … ⊇ B_{r_m}` and widths `ρ_1 ≥ … ≥ ρ_m`, at scale `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFlag {
    n: usize,
    big_r: f64,
    subspaces: Vec<AffineSubspace>,
    balls: Vec<Ball>,
    rho: Vec<f64>,
}

fn non_increasing_in(xs: &[f64], lo: f64, hi: f64) -> bool {
    xs.iter().all(|x| *x >= lo * (1.0 - REL_TOL) && *x <= hi * (1.0 + REL_TOL))
        && xs.windows(2).all(|w| w[1] <= w[0] * (1.0 + REL_TOL))
}

impl AffineFlag {
    pub fn new(n: usize, big_r: f64, subspaces: Vec<AffineSubspace>, balls: Vec<Ball>, rho: Vec<f64>) -> Result<Self> {
        let m = subspaces.len();
        if balls.len() != m || rho.len() != m {
            return Err(Error::domain("flag needs one ball and one width per subspace"));
        }
        if !(big_r >= 1.0 && big_r.is_finite()) {
            return Err(Error::domain(format!("scale R must be at least 1, got {big_r}")));
        }
        for (j, v) in subspaces.iter().enumerate() {
            if v.dim() != n || v.codim() != j + 1 {
                return Err(Error::domain(format!("V_{} must have codimension {} in R^{n}", j + 1, j + 1)));
            }
            if balls[j].center.len() != n {
                return Err(Error::domain("ball center has the wrong dimension"));
            }
        }
        for j in 1..m {
            if !subspaces[j - 1].contains(&subspaces[j], big_r) {
                return Err(Error::domain(format!("V_{} is not contained in V_{}", j + 1, j)));
            }
            if !balls[j - 1].contains_ball(&balls[j]) {
                return Err(Error::domain(format!("ball {} is not contained in ball {}", j + 1, j)));
            }
        }
        let r: Vec<f64> = balls.iter().map(|b| b.radius).collect();
        if !non_increasing_in(&r, 1.0, big_r) || !non_increasing_in(&rho, 1.0, big_r) {
            return Err(Error::domain("radii and widths must be non-increasing in [1, R]"));
        }
        if m > 0 && rho[0] / r[0] < big_r.powf(-0.5) * (1.0 - REL_TOL) {
            return Err(Error::domain("need rho_1 / r_1 >= R^{-1/2}"));
        }
        Ok(AffineFlag { n, big_r, subspaces, balls, rho })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.subspaces.len()
    }

    pub fn big_r(&self) -> f64 {
        self.big_r
    }

    pub fn subspaces(&self) -> &[AffineSubspace] {
        &self.subspaces
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn radii(&self) -> Vec<f64> {
        self.balls.iter().map(|b| b.radius).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_distance_and_nesting() {
        let v1 = AffineSubspace::coordinate(3, 1).unwrap();
        let v2 = AffineSubspace::coordinate(3, 2).unwrap();
        assert_eq!(v1.dist2(&[3.0, 4.0, 5.0]), 9.0);
        assert_eq!(v2.dist2(&[3.0, 4.0, 5.0]), 25.0);
        assert!(v1.contains(&v2, 1.0));
        assert!(!v2.contains(&v1, 1.0));
        assert_eq!(v2.project(&[3.0, 4.0, 5.0]), vec![0.0, 0.0, 5.0]);
        assert!(AffineSubspace::new(vec![0.0; 2], vec![vec![1.0, 1.0]]).is_err());
    }

    #[test]
    fn flag_validation() {
        let v = |j| AffineSubspace::coordinate(3, j).unwrap();
        let b = |r| Ball::new(vec![0.0; 3], r).unwrap();
        assert!(AffineFlag::new(3, 100.0, vec![v(1), v(2)], vec![b(100.0), b(50.0)], vec![10.0, 5.0]).is_ok());
        // widths increasing
        assert!(AffineFlag::new(3, 100.0, vec![v(1), v(2)], vec![b(100.0), b(50.0)], vec![5.0, 10.0]).is_err());
        // not nested
        assert!(AffineFlag::new(3, 100.0, vec![v(2), v(1)], vec![b(100.0), b(50.0)], vec![10.0, 5.0]).is_err());
        // rho_1 / r_1 below R^{-1/2}
        assert!(AffineFlag::new(3, 100.0, vec![v(1)], vec![b(100.0)], vec![1.0]).is_err());
        let off = Ball::new(vec![60.0, 0.0, 0.0], 50.0).unwrap();
        assert!(AffineFlag::new(3, 100.0, vec![v(1), v(2)], vec![b(100.0), off], vec![10.0, 5.0]).is_err());
    }

    #[test]
    fn line_is_unit() {
        let l = Line::new(vec![0.0; 3], &[3.0, 0.0, 4.0]).unwrap();
        assert!((norm(l.dir()) - 1.0).abs() < 1e-12);
        assert!(Line::new(vec![0.0; 2], &[0.0, 0.0]).is_err());
        assert!((angle(&[1.0, 0.0], &[0.0, 1.0]) - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }
}
