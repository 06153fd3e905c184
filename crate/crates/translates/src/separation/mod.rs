//! Fitting a linear map so that one body's signature matches another's on a
//! finite set of directions, and searching dyadic direction sets for a
//! certified mismatch.
//!
//! With `u` the unit vector of argument `θ`, the signature ratio is
//! `ρ_A(θ) / ρ_{T(B)}(θ) = ρ_A(θ) · ‖T⁻¹u‖_B / 2`, so each evaluation is one
//! norm query on `B`.

mod simplex;

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GeometryError, LinearMap2, SymmetricBody, Vec2, SINGULAR_DET};
pub use simplex::{minimize, Point4};

pub const DEFAULT_MAX_LEVEL: u32 = 6;
pub const DEFAULT_MARGIN: f64 = 0.01;
pub const DEFAULT_SEEDS: usize = 16;
pub const DEFAULT_ITERATIONS: usize = 500;
pub const DEFAULT_RNG_SEED: u64 = 0x5eed;

/// Candidates with `|det T|` below this are treated as singular.
pub const MIN_DET: f64 = 1e-6;

/// Number of angles on which candidate signatures are kept within sanity bounds.
const SANITY_ANGLES: usize = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeparationError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("direction level must be at least 1, got {0}")]
    BadLevel(u32),
}

/// Angles `iπ/2ⁿ` for `i = 0, …, 2ⁿ − 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionSet {
    pub level: u32,
    pub angles: Vec<f64>,
}

impl DirectionSet {
    pub fn dyadic(level: u32) -> Self {
        let n = 1usize << level;
        DirectionSet {
            level,
            angles: (0..n).map(|i| i as f64 * PI / n as f64).collect(),
        }
    }
}

/// Per-angle signature comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub theta: f64,
    #[serde(rename = "rhoA")]
    pub rho_a: f64,
    #[serde(rename = "rhoTB")]
    pub rho_tb: f64,
    pub dev: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Separated,
    /// Numeric verdict only: no map reaching the margin was found up to the
    /// largest level tried.
    EquivalentUpToTolerance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationCertificate {
    pub verdict: Verdict,
    /// Half the best residual at the reported level.
    pub epsilon: f64,
    pub level: u32,
    /// Best map `T` found; the comparison is between `A` and `T(B)`.
    pub map: LinearMap2,
    pub residual: f64,
    /// Angle attaining the residual.
    pub argmax: f64,
    pub deviations: Vec<Deviation>,
    /// Best residual at each level tried, starting at level 2.
    pub level_residuals: Vec<f64>,
}

impl SeparationCertificate {
    pub fn theta_set(&self) -> DirectionSet {
        DirectionSet::dyadic(self.level)
    }

    /// Angles of the `count` largest deviations, largest first.
    pub fn top_angles(&self, count: usize) -> Vec<f64> {
        let mut d: Vec<&Deviation> = self.deviations.iter().collect();
        d.sort_by(|a, b| b.dev.total_cmp(&a.dev).then(a.theta.total_cmp(&b.theta)));
        d.into_iter().take(count).map(|d| d.theta).collect()
    }
}

/// Signature ratios `ρ_A/ρ_{T(B)}` over the given angles.
fn ratios(a: &SymmetricBody, b: &SymmetricBody, t: LinearMap2, angles: &[f64]) -> Result<Vec<(f64, f64, f64)>, GeometryError> {
    let inv = t.inverse_checked(SINGULAR_DET).ok_or(GeometryError::SingularMap(t.det()))?;
    Ok(angles
        .iter()
        .map(|&th| {
            let rho_a = a.signature(th);
            let rho_tb = 2.0 / b.norm(inv * Vec2::from_angle(th));
            (th, rho_a, rho_tb)
        })
        .collect())
}

/// Per-angle deviations `|ρ_A/ρ_{T(B)} − 1|`.
pub fn deviations(a: &SymmetricBody, b: &SymmetricBody, t: LinearMap2, angles: &[f64]) -> Result<Vec<Deviation>, GeometryError> {
    Ok(ratios(a, b, t, angles)?
        .into_iter()
        .map(|(theta, rho_a, rho_tb)| Deviation {
            theta,
            rho_a,
            rho_tb,
            dev: (rho_a / rho_tb - 1.0).abs(),
        })
        .collect())
}

/// `max_θ |ρ_A(θ)/ρ_{T(B)}(θ) − 1|` and the angle attaining it.
pub fn signature_deviation(a: &SymmetricBody, b: &SymmetricBody, t: LinearMap2, angles: &[f64]) -> Result<(f64, f64), GeometryError> {
    let mut best = (0.0, angles.first().copied().unwrap_or(0.0));
    for d in deviations(a, b, t, angles)? {
        if d.dev > best.0 {
            best = (d.dev, d.theta);
        }
    }
    Ok(best)
}

/// Options for [`fit_linear_map`] and [`find_separation`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub seeds: usize,
    pub iterations: usize,
    pub rng_seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            seeds: DEFAULT_SEEDS,
            iterations: DEFAULT_ITERATIONS,
            rng_seed: DEFAULT_RNG_SEED,
        }
    }
}

/// Precomputed data for evaluating candidate maps.
struct Objective<'a> {
    b: &'a SymmetricBody,
    units: Vec<Vec2>,
    half_rho_a: Vec<f64>,
    sanity_units: Vec<Vec2>,
    sig_lo: f64,
    sig_hi: f64,
}

impl<'a> Objective<'a> {
    fn new(a: &SymmetricBody, b: &'a SymmetricBody, angles: &[f64]) -> Self {
        let sanity: Vec<f64> = (0..SANITY_ANGLES).map(|i| i as f64 * PI / SANITY_ANGLES as f64).collect();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for &th in sanity.iter().chain(angles) {
            let s = a.signature(th);
            lo = lo.min(s);
            hi = hi.max(s);
        }
        Objective {
            b,
            units: angles.iter().map(|&t| Vec2::from_angle(t)).collect(),
            half_rho_a: angles.iter().map(|&t| a.signature(t) / 2.0).collect(),
            sanity_units: sanity.iter().map(|&t| Vec2::from_angle(t)).collect(),
            sig_lo: lo / 2f64.sqrt(),
            sig_hi: 2.0 * hi,
        }
    }

    /// `T⁻¹` for admissible candidates.
    fn admissible_inverse(&self, x: &Point4) -> Option<LinearMap2> {
        let t = LinearMap2::from_array(*x);
        if !t.is_finite() || t.det().abs() < MIN_DET {
            return None;
        }
        let inv = t.inverse()?;
        for &u in &self.sanity_units {
            let s = 2.0 / self.b.norm(inv * u);
            if !(self.sig_lo..=self.sig_hi).contains(&s) {
                return None;
            }
        }
        Some(inv)
    }

    fn ratio(&self, inv: LinearMap2, i: usize) -> f64 {
        self.half_rho_a[i] * self.b.norm(inv * self.units[i])
    }

    /// Mean squared log-ratio, a smooth surrogate.
    fn smooth(&self, x: &Point4) -> f64 {
        match self.admissible_inverse(x) {
            None => f64::INFINITY,
            Some(inv) => {
                (0..self.units.len()).map(|i| self.ratio(inv, i).ln().powi(2)).sum::<f64>() / self.units.len() as f64
            }
        }
    }

    fn max_dev(&self, x: &Point4) -> f64 {
        match self.admissible_inverse(x) {
            None => f64::INFINITY,
            Some(inv) => (0..self.units.len())
                .map(|i| (self.ratio(inv, i) - 1.0).abs())
                .fold(0.0, f64::max),
        }
    }
}

/// Area second-moment matrix `∫ x xᵀ` of a counter-clockwise polygon, as
/// `(xx, xy, yy)`.
fn second_moments(poly: &[Vec2]) -> (f64, f64, f64) {
    let n = poly.len();
    let (mut xx, mut xy, mut yy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let c = p.cross(q);
        xx += c * (p.x * p.x + p.x * q.x + q.x * q.x);
        yy += c * (p.y * p.y + p.y * q.y + q.y * q.y);
        xy += c * (p.x * q.y + 2.0 * p.x * p.y + 2.0 * q.x * q.y + q.x * p.y);
    }
    (xx / 12.0, xy / 24.0, yy / 12.0)
}

/// Square root of a symmetric positive definite 2×2 matrix.
fn spd_sqrt((a, b, c): (f64, f64, f64)) -> LinearMap2 {
    let s = (a * c - b * b).sqrt();
    let t = (a + c + 2.0 * s).sqrt();
    LinearMap2::new((a + s) / t, b / t, b / t, (c + s) / t)
}

/// Maps `T = J_A^{1/2} · R · J_B^{-1/2}` (scaled) that carry `B`'s inertia
/// ellipse onto `A`'s; `R` ranges over rotations and reflections.
struct MomentFrame {
    left: LinearMap2,
    right: LinearMap2,
}

impl MomentFrame {
    fn new(a: &SymmetricBody, b: &SymmetricBody) -> Self {
        let ja = second_moments(a.vertices());
        let jb = second_moments(b.vertices());
        let det_a = ja.0 * ja.2 - ja.1 * ja.1;
        let det_b = jb.0 * jb.2 - jb.1 * jb.1;
        let s = (det_b / det_a).powf(0.125);
        let right = spd_sqrt(jb).inverse().unwrap_or(LinearMap2::IDENTITY);
        MomentFrame {
            left: spd_sqrt(ja) * LinearMap2::diag(s, s),
            right,
        }
    }

    fn start(&self, phi: f64, reflect: bool) -> LinearMap2 {
        let f = if reflect { LinearMap2::diag(1.0, -1.0) } else { LinearMap2::IDENTITY };
        self.left * LinearMap2::rotation(phi) * f * self.right
    }
}

/// Outcome of [`fit_linear_map`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub map: LinearMap2,
    pub residual: f64,
    pub argmax: f64,
    /// Index of the multistart seed that produced the map.
    pub seed_index: usize,
}

/// Multistart simplex descent for the map `T` minimizing
/// `max_θ |ρ_A/ρ_{T(B)} − 1|` over `angles`.
///
/// Each seed starts from a moment-matched map with a seeded rotation
/// (alternating reflections), runs a smooth log-ratio phase and then a few
/// restarted phases on the max objective. Seeds run in parallel; the
/// smallest residual wins, ties going to the lowest seed index.
pub fn fit_linear_map(a: &SymmetricBody, b: &SymmetricBody, angles: &[f64], opts: &FitOptions) -> Fit {
    let obj = Objective::new(a, b, angles);
    let frame = MomentFrame::new(a, b);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
    let seeds = opts.seeds.max(1);
    let starts: Vec<LinearMap2> = (0..seeds)
        .map(|i| {
            let phi = if i < 2 { 0.0 } else { rng.gen_range(0.0..PI) };
            frame.start(phi, i % 2 == 1)
        })
        .collect();

    let iters = opts.iterations.max(8);
    let results: Vec<(f64, Point4)> = starts
        .par_iter()
        .map(|t0| {
            let x0 = t0.to_array();
            let (mut x, _) = minimize(&|x| obj.smooth(x), x0, 0.1, iters, 1e-30);
            let (xs, _) = minimize(&|x| obj.smooth(x), x, 0.01, iters, 1e-30);
            x = xs;
            let mut fx = obj.max_dev(&x);
            let mut step = 0.02;
            for _ in 0..4 {
                let (y, fy) = minimize(&|x| obj.max_dev(x), x, step, iters / 2, 1e-16);
                if fy < fx {
                    x = y;
                    fx = fy;
                }
                step *= 0.1;
            }
            (fx, x)
        })
        .collect();

    let (seed_index, &(_, x)) = results
        .iter()
        .enumerate()
        .min_by(|(i, p), (j, q)| p.0.total_cmp(&q.0).then(i.cmp(j)))
        .expect("at least one seed");
    let map = LinearMap2::from_array(x);
    let (residual, argmax) = signature_deviation(a, b, map, angles).unwrap_or((f64::INFINITY, 0.0));
    Fit {
        map,
        residual,
        argmax,
        seed_index,
    }
}

/// Runs [`fit_linear_map`] on `Θ_2, Θ_3, …, Θ_max_level` and stops at the
/// first level whose best residual reaches `margin`.
pub fn find_separation(
    a: &SymmetricBody,
    b: &SymmetricBody,
    max_level: u32,
    margin: f64,
    opts: &FitOptions,
) -> Result<SeparationCertificate, SeparationError> {
    if max_level < 2 {
        return Err(SeparationError::BadLevel(max_level));
    }
    let mut level_residuals = Vec::new();
    let mut last = None;
    for level in 2..=max_level {
        let dirs = DirectionSet::dyadic(level);
        let fit = fit_linear_map(a, b, &dirs.angles, opts);
        level_residuals.push(fit.residual);
        let separated = fit.residual >= margin;
        last = Some((level, dirs, fit));
        if separated {
            break;
        }
    }
    let (level, dirs, fit) = last.expect("at least one level");
    let verdict = if fit.residual >= margin {
        Verdict::Separated
    } else {
        Verdict::EquivalentUpToTolerance
    };
    Ok(SeparationCertificate {
        verdict,
        epsilon: 0.5 * fit.residual,
        level,
        map: fit.map,
        residual: fit.residual,
        argmax: fit.argmax,
        deviations: deviations(a, b, fit.map, &dirs.angles)?,
        level_residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk() -> SymmetricBody {
        SymmetricBody::disk(256).unwrap()
    }

    #[test]
    fn dyadic_angles() {
        let d = DirectionSet::dyadic(3);
        assert_eq!(d.angles.len(), 8);
        assert!(d.angles.windows(2).all(|w| w[0] < w[1]));
        assert!(*d.angles.last().unwrap() < PI);
    }

    #[test]
    fn deviation_examples() {
        let d = disk();
        let th = DirectionSet::dyadic(4).angles;
        assert!(signature_deviation(&d, &d, LinearMap2::IDENTITY, &th).unwrap().0 < 1e-12);

        let ell = SymmetricBody::ellipse(2.0, 1.0, 256).unwrap();
        let t = LinearMap2::diag(0.5, 1.0);
        assert!(signature_deviation(&d, &ell, t, &DirectionSet::dyadic(3).angles).unwrap().0 < 1e-3);

        // Oracle: the hexagon's boundary point at angle θ has length
        // (√3/2) / cos(θ − nearest edge normal).
        let hex = SymmetricBody::hexagon();
        let oracle = th
            .iter()
            .map(|&t| {
                let phi = (t - PI / 6.0).rem_euclid(PI / 3.0) - PI / 6.0;
                let r_hex = 3f64.sqrt() / 2.0 / phi.cos();
                (d.signature(t) / (2.0 * r_hex) - 1.0).abs()
            })
            .fold(0.0, f64::max);
        let (dev, _) = signature_deviation(&d, &hex, LinearMap2::IDENTITY, &th).unwrap();
        assert!((dev - oracle).abs() < 1e-12);
        assert!((dev - (2.0 / 3f64.sqrt() - 1.0)).abs() < 1e-3);
    }

    #[test]
    fn singular_map_is_an_error() {
        let d = disk();
        assert!(signature_deviation(&d, &d, LinearMap2::diag(1.0, 0.0), &[0.0]).is_err());
    }

    #[test]
    fn moments_of_square() {
        let (xx, xy, yy) = second_moments(SymmetricBody::square().vertices());
        assert!((xx - 4.0 / 3.0).abs() < 1e-12 && xy.abs() < 1e-12 && (yy - 4.0 / 3.0).abs() < 1e-12);
        let m = spd_sqrt((4.0, 1.0, 3.0));
        let sq = m * m;
        assert!(sq.max_abs_diff(LinearMap2::new(4.0, 1.0, 1.0, 3.0)) < 1e-12);
    }

    #[test]
    fn fits_linear_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = SymmetricBody::regular(7).unwrap();
        for _ in 0..3 {
            let m = LinearMap2::new(
                rng.gen_range(0.5..2.0),
                rng.gen_range(-0.8..0.8),
                rng.gen_range(-0.8..0.8),
                rng.gen_range(-2.0..-0.5),
            );
            let b = a.apply_linear(m).unwrap();
            let fit = fit_linear_map(&a, &b, &DirectionSet::dyadic(5).angles, &FitOptions::default());
            assert!(fit.residual <= 1e-6, "{fit:?}");
        }
    }

    #[test]
    fn square_against_rectangle() {
        let sq = SymmetricBody::square();
        let rect = sq.apply_linear(LinearMap2::diag(2.0, 1.0)).unwrap();
        let fit = fit_linear_map(&sq, &rect, &DirectionSet::dyadic(4).angles, &FitOptions::default());
        assert!(fit.residual <= 1e-6);
        // Up to the square's symmetries, T undoes the stretch.
        let t = fit.map;
        let cols = [Vec2::new(t.a11, t.a21).len(), Vec2::new(t.a12, t.a22).len()];
        assert!((cols[0] - 0.5).abs() < 1e-4 && (cols[1] - 1.0).abs() < 1e-4, "{t:?}");
    }

    #[test]
    fn disk_and_disk_are_equivalent() {
        let d = disk();
        let c = find_separation(&d, &d, 5, DEFAULT_MARGIN, &FitOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::EquivalentUpToTolerance);
        assert!(c.residual <= 1e-6);
    }

    #[test]
    fn residual_grows_with_level() {
        let d = disk();
        let hex = SymmetricBody::hexagon();
        let opts = FitOptions::default();
        let mut prev = 0.0;
        for level in 2..=5 {
            let th = DirectionSet::dyadic(level).angles;
            let r = fit_linear_map(&d, &hex, &th, &opts).residual;
            assert!(r >= prev - 1e-6, "level {level}: {r} < {prev}");
            prev = r;
        }
    }

    #[test]
    fn disk_and_hexagon_separate() {
        let d = disk();
        let hex = SymmetricBody::hexagon();
        let c = find_separation(&d, &hex, 5, DEFAULT_MARGIN, &FitOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Separated);
        assert!(c.epsilon >= 0.02, "{:?}", c.level_residuals);
        assert!(c.level <= 5);
    }
}
