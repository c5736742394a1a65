//! The map from unordered configurations modulo affine motions to the
//! weighted projective space `P(n, n-1, ..., 2)`: a configuration goes to the
//! coefficients of the monic polynomial whose roots are its points, centred
//! at their barycenter.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for distinctness and comparisons.
pub const EPSILON: f64 = 1e-9;

/// Largest weight handled by the root-branch search.
pub const MAX_POINTS: usize = 12;

/// `n` pairwise distinct points of the plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct Configuration {
    points: Vec<Complex64>,
}

impl Configuration {
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.len() < 2 || points.len() > MAX_POINTS {
            return Err(Error::Configuration(format!(
                "{} points given, between 2 and {MAX_POINTS} are supported",
                points.len()
            )));
        }
        if points.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Configuration("points must be finite".into()));
        }
        for i in 0..points.len() {
            for j in 0..i {
                if (points[i] - points[j]).norm() <= EPSILON {
                    return Err(Error::Configuration(format!("points {j} and {i} coincide")));
                }
            }
        }
        Ok(Configuration { points })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn barycenter(&self) -> Complex64 {
        self.points.iter().sum::<Complex64>() / self.points.len() as f64
    }

    /// Applies `z -> scale * z + shift`.
    pub fn affine(&self, scale: Complex64, shift: Complex64) -> Result<Self> {
        Configuration::new(self.points.iter().map(|&z| scale * z + shift).collect())
    }

    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        Configuration::new(order.iter().map(|&i| self.points[i]).collect())
    }

    /// Uniform points in the unit square, resampled until distinct.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut points: Vec<Complex64> = Vec::with_capacity(n);
        while points.len() < n {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            if points.iter().all(|w| (z - w).norm() > 1e-3) {
                points.push(z);
            }
        }
        Configuration::new(points)
    }
}

impl TryFrom<Vec<[f64; 2]>> for Configuration {
    type Error = Error;

    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        Configuration::new(v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

impl From<Configuration> for Vec<[f64; 2]> {
    fn from(c: Configuration) -> Self {
        c.points.iter().map(|z| [z.re, z.im]).collect()
    }
}

/// A point `[a_0 : ... : a_(n-2)]` of `P(n, ..., 2)`; `a_k` has weight `n - k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedPoint {
    #[serde(serialize_with = "serialize_complex")]
    pub coords: Vec<Complex64>,
    pub weights: Vec<u32>,
}

fn serialize_complex<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl WeightedPoint {
    pub fn new(coords: Vec<Complex64>, weights: Vec<u32>) -> Result<Self> {
        if coords.len() != weights.len() || weights.contains(&0) {
            return Err(Error::Configuration(
                "one positive weight per coordinate is needed".into(),
            ));
        }
        if coords.iter().all(|z| z.norm() <= EPSILON) {
            return Err(Error::Configuration("all coordinates vanish".into()));
        }
        Ok(WeightedPoint { coords, weights })
    }

    /// `t · x = (t^(w_k) x_k)`.
    pub fn act(&self, t: Complex64) -> WeightedPoint {
        WeightedPoint {
            coords: self
                .coords
                .iter()
                .zip(&self.weights)
                .map(|(&z, &w)| t.powu(w) * z)
                .collect(),
            weights: self.weights.clone(),
        }
    }

    /// Rescaled by a positive real so that `max_k |x_k|^(1/w_k) = 1`.
    pub fn normalized(&self) -> WeightedPoint {
        let size = self
            .coords
            .iter()
            .zip(&self.weights)
            .map(|(z, &w)| z.norm().powf(1.0 / w as f64))
            .fold(0.0, f64::max);
        self.act(Complex64::new(1.0 / size, 0.0))
    }
}

/// Coefficients of `∏ (z - r_i)`, lowest degree first, leading 1 included.
pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= r * c;
        }
        coeffs = next;
    }
    coeffs
}

/// The centred polynomial's coefficients `(a_0, ..., a_(n-2))`. The vanishing
/// of `a_(n-1)` is checked relative to the spread of the points.
pub fn embed(config: &Configuration) -> Result<WeightedPoint> {
    let n = config.len();
    let b = config.barycenter();
    let centred: Vec<Complex64> = config.points.iter().map(|&z| z - b).collect();
    let coeffs = poly_from_roots(&centred);
    let spread = centred.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let sub_leading = coeffs[n - 1].norm();
    if sub_leading > EPSILON * spread.max(1.0) {
        return Err(Error::Configuration(format!(
            "centred polynomial has a_(n-1) = {sub_leading:e}"
        )));
    }
    let weights = (0..n - 1).map(|k| (n - k) as u32).collect();
    WeightedPoint::new(coeffs[..n - 1].to_vec(), weights)
}

/// `|a_(n-1)|` of the centred polynomial, relative to the spread.
pub fn sub_leading_residual(config: &Configuration) -> f64 {
    let n = config.len();
    let b = config.barycenter();
    let centred: Vec<Complex64> = config.points.iter().map(|&z| z - b).collect();
    let spread = centred.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    poly_from_roots(&centred)[n - 1].norm() / spread
}

/// Whether some `t ≠ 0` has `t^(w_k) x_k ≈ y_k` for all `k`. Both points are
/// normalized first; `t` is solved from the coordinate of `x` largest after
/// normalization, over every branch of the root.
pub fn weighted_equal(x: &WeightedPoint, y: &WeightedPoint, tol: f64) -> Result<bool> {
    if x.weights != y.weights {
        return Err(Error::Configuration("weight vectors differ".into()));
    }
    for p in [x, y] {
        if p.coords.iter().all(|z| z.norm() <= EPSILON) {
            return Err(Error::Configuration("zero vector".into()));
        }
    }
    let (x, y) = (x.normalized(), y.normalized());
    let (k, _) = x
        .coords
        .iter()
        .zip(&x.weights)
        .map(|(z, &w)| z.norm().powf(1.0 / w as f64))
        .enumerate()
        .fold((0, -1.0), |best, (i, v)| if v > best.1 { (i, v) } else { best });
    let w = x.weights[k];
    if y.coords[k].norm() <= tol {
        return Ok(false);
    }
    let ratio = y.coords[k] / x.coords[k];
    let root = ratio.powf(1.0 / w as f64);
    for j in 0..w {
        let t = root * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / w as f64);
        let image = x.act(t);
        if image.coords.iter().zip(&y.coords).all(|(a, b)| (a - b).norm() <= tol) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Outcome of the seeded invariance and separation trials for one `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub invariance_failures: usize,
    pub max_sub_leading: f64,
    pub distinguished_pairs: usize,
}

impl PropertyReport {
    pub fn distinguished_fraction(&self) -> f64 {
        self.distinguished_pairs as f64 / self.samples as f64
    }

    pub fn passed(&self) -> bool {
        self.invariance_failures == 0 && self.max_sub_leading <= EPSILON && self.distinguished_fraction() >= 0.99
    }
}

/// For `samples` random configurations: invariance under a random
/// translation, rotation, dilation and permutation, vanishing of `a_(n-1)`,
/// and separation from an independent random configuration.
pub fn property_trials(n: usize, samples: usize, seed: u64) -> Result<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32));
    let mut failures = 0;
    let mut max_sub = 0.0f64;
    let mut distinguished = 0;
    for _ in 0..samples {
        let c = Configuration::random(n, &mut rng)?;
        let e = embed(&c)?;
        max_sub = max_sub.max(sub_leading_residual(&c));
        let shift = Complex64::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        let rotation = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        let dilation = Complex64::new(rng.random_range(0.2..5.0), 0.0);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let moved = [
            c.affine(Complex64::new(1.0, 0.0), shift)?,
            c.affine(rotation, Complex64::new(0.0, 0.0))?,
            c.affine(dilation, Complex64::new(0.0, 0.0))?,
            c.permuted(&order)?,
            c.permuted(&order)?.affine(rotation * dilation, shift)?,
        ];
        for m in &moved {
            max_sub = max_sub.max(sub_leading_residual(m));
            if !weighted_equal(&e, &embed(m)?, EPSILON)? {
                failures += 1;
            }
        }
        let other = Configuration::random(n, &mut rng)?;
        if !weighted_equal(&e, &embed(&other)?, EPSILON)? {
            distinguished += 1;
        }
    }
    Ok(PropertyReport {
        n,
        samples,
        seed,
        invariance_failures: failures,
        max_sub_leading: max_sub,
        distinguished_pairs: distinguished,
    })
}
