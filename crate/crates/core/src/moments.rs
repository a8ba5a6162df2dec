//! Catalan numbers, semicircular laws and the moments of `χ(v)` under
//! `φ = ∫ ⊗ tr`.
//!
//! For the Clifford construction the spectrum of `χ(v)` is known in closed
//! form from the coefficients of `x` (`{n x_I²}` for even `s`, see
//! [`crate::magic::character_spectrum_exact`] for odd `s`), so
//! `tr(χ(v)^k)` never needs a matrix. The dense-matrix route is kept as an
//! oracle in the tests.
//!
//! Monte Carlo runs are split into fixed chunks of sample indices; chunks are
//! evaluated in parallel and merged in index order, so a report depends only
//! on `(seed, stream, samples)` and never on scheduling.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::clifford::{CliffordElement, MAX_RANK};
use crate::error::{Error, Result};
use crate::haar::{
    sphere_block_moment_exact, sphere_measure_label, sphere_moment_exact, SeededSampler,
};
use crate::magic::character_spectrum_from_coeffs;

/// Samples per parallel work unit.
pub const CHUNK_SIZE: u64 = 4096;

/// Largest degree handled by reports (`catalan` must fit in `u128`).
pub const MAX_DEGREE: u32 = 60;

/// Default number of histogram bins.
pub const DEFAULT_BINS: usize = 40;

/// Tolerance used when counting non-unitary sphere draws.
pub const UNITARITY_CHECK_TOL: f64 = 1e-9;

/// `C_k = binom(2k, k) / (k + 1)`.
pub fn catalan(k: u32) -> BigUint {
    let k = u64::from(k);
    let mut binom = BigUint::one();
    for i in 0..k {
        // binom(2k, i + 1) = binom(2k, i) (2k - i) / (i + 1), exact at each step
        binom = binom * (2 * k - i) / (i + 1);
    }
    binom / (k + 1)
}

/// `k`-th moment of the standard semicircle law on `[-2, 2]`.
pub fn semicircle_moment(k: u32) -> BigUint {
    if k % 2 == 1 {
        BigUint::default()
    } else {
        catalan(k / 2)
    }
}

/// Density of `x²` for `x` standard semicircular:
/// `(1/2π) √((4 - t)/t)` on `(0, 4]`, zero elsewhere.
pub fn squared_semicircle_density(t: f64) -> f64 {
    if t <= 0.0 || t > 4.0 {
        return 0.0;
    }
    ((4.0 - t) / t).sqrt() / (2.0 * std::f64::consts::PI)
}

/// Distribution function of [`squared_semicircle_density`]:
/// `√(t(4-t)) / 2π + (2/π) asin(√t / 2)` on `[0, 4]`.
pub fn squared_semicircle_cdf(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 4.0 {
        return 1.0;
    }
    use std::f64::consts::PI;
    (t * (4.0 - t)).sqrt() / (2.0 * PI) + 2.0 / PI * (t.sqrt() / 2.0).asin()
}

const GAUSS5_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GAUSS5_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
    0.236_926_885_056_189_08,
];

fn gauss5(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    GAUSS5_NODES
        .iter()
        .zip(GAUSS5_WEIGHTS)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

fn adaptive_gauss(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let mid = 0.5 * (a + b);
    let left = gauss5(f, a, mid);
    let right = gauss5(f, mid, b);
    if depth == 0 || (left + right - whole).abs() <= tol {
        return left + right;
    }
    adaptive_gauss(f, a, mid, left, tol / 2.0, depth - 1)
        + adaptive_gauss(f, mid, b, right, tol / 2.0, depth - 1)
}

/// Adaptive 5-point Gauss–Legendre quadrature on `[a, b]`. Endpoints are
/// never evaluated, so integrable endpoint singularities are tolerated.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let whole = gauss5(&f, a, b);
    adaptive_gauss(&f, a, b, whole, tol, 50)
}

/// `∫ t^k dμ(t)` against [`squared_semicircle_density`] by quadrature, using
/// `t = u²` to remove the `1/√t` singularity at the origin.
pub fn squared_semicircle_moment_quadrature(k: u32, tol: f64) -> f64 {
    integrate(
        |u| {
            let t = u * u;
            t.powi(k as i32) * squared_semicircle_density(t) * 2.0 * u
        },
        0.0,
        2.0,
        tol,
    )
}

/// `tr(χ(v)^k)` for the character of the Clifford construction at a real
/// unit vector `x`, from its closed-form spectrum.
pub fn character_moment_exact(x: &CliffordElement, k: u32) -> Result<f64> {
    let coeffs = x.real_coeffs(0.0)?;
    Ok(character_moments_from_coeffs(&coeffs, k)[k as usize])
}

/// `tr(χ(v)^j)` for `j = 0..=k_max`.
fn character_moments_from_coeffs(coeffs: &[f64], k_max: u32) -> Vec<f64> {
    let n = coeffs.len() as f64;
    let mut out = vec![0.0; k_max as usize + 1];
    for eigen in character_spectrum_from_coeffs(coeffs) {
        let mut power = 1.0;
        for slot in out.iter_mut() {
            *slot += power;
            power *= eigen;
        }
    }
    out.iter_mut().for_each(|m| *m /= n);
    out
}

/// Exact `φ(χ(v)^k)` with `x` uniform on the unit sphere `S^{n-1}`.
///
/// Even `s`: `n^k E[x_1^{2k}]`. Odd `s` (`k ≥ 1`): half the eigenvalues
/// vanish and the others are `n r` with `r = x_I² + x_{I'}² ~ Beta(1, n/2 - 1)`,
/// giving `(1/2) n^k E[r^k]`.
pub fn phi_moment_exact(rank: u32, k: u32) -> BigRational {
    if rank.is_multiple_of(2) || k == 0 {
        return diagonal_formula_moment(rank, k);
    }
    let n = 1u64 << rank;
    let scale = BigRational::new(BigInt::from(n).pow(k), BigInt::from(2));
    scale * sphere_block_moment_exact(n, 2, k)
}

/// `n^k E[x_1^{2k}]`: the moment obtained by treating `χ(v)` as
/// `diag(n x_I²)`. Equals [`phi_moment_exact`] exactly when `s` is even.
pub fn diagonal_formula_moment(rank: u32, k: u32) -> BigRational {
    let n = 1u64 << rank;
    let scale = BigRational::from_integer(BigInt::from(n).pow(k));
    scale * sphere_moment_exact(n, k)
}

fn catalan_u128(k: u32) -> u128 {
    catalan(k).to_u128().expect("degree bounded by MAX_DEGREE")
}

fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn check_rank(rank: u32) -> Result<()> {
    if rank == 0 || rank > MAX_RANK {
        return Err(Error::RankOutOfRange {
            rank,
            max: MAX_RANK,
        });
    }
    Ok(())
}

fn check_degree(k_max: u32) -> Result<()> {
    if k_max > MAX_DEGREE {
        return Err(Error::TooLarge {
            what: "k_max",
            value: k_max as usize,
            max: MAX_DEGREE as usize,
        });
    }
    Ok(())
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Sums of `x - shift` and `(x - shift)²` for one degree.
#[derive(Clone, Debug, Default)]
struct ShiftedMoments {
    sum: CompensatedSum,
    sum_sq: CompensatedSum,
}

#[derive(Clone, Debug)]
struct ChunkAccumulator {
    degrees: Vec<ShiftedMoments>,
    unitarity_failures: u64,
}

fn chunks(samples: u64) -> Vec<(u64, u64)> {
    (0..samples.div_ceil(CHUNK_SIZE))
        .map(|c| (c * CHUNK_SIZE, ((c + 1) * CHUNK_SIZE).min(samples)))
        .collect()
}

/// Monte Carlo estimate of one moment degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeMoment {
    pub k: u32,
    pub mc_estimate: f64,
    /// Sample standard deviation over `√samples`, floored at the per-sample
    /// rounding bound `(k + 2) ε |mc_estimate|`.
    pub mc_stderr: f64,
    /// Exact rational value, e.g. `"12/5"`.
    pub exact_value: String,
    pub exact_value_f64: f64,
    pub catalan_ref: u128,
    /// `exact_value == catalan_ref`, compared exactly.
    pub exact_is_catalan: bool,
    /// `(mc_estimate - catalan_ref) / mc_stderr`.
    pub z_score: Option<f64>,
    pub sample_count: u64,
}

impl DegreeMoment {
    /// `|mc_estimate - exact| / mc_stderr`.
    pub fn exact_deviation_sigmas(&self) -> f64 {
        (self.mc_estimate - self.exact_value_f64).abs() / self.mc_stderr
    }
}

/// Per-degree comparison of Monte Carlo, exact and Catalan moments.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentReport {
    pub s: u32,
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub stream: u64,
    pub measure_label: String,
    /// Sphere draws with `‖x x* - 1‖ > UNITARITY_CHECK_TOL`; always zero for
    /// `s ≤ 2`, generically every draw for `s ≥ 3`.
    pub unitarity_failures: u64,
    pub unitarity_failure_rate: f64,
    pub degrees: Vec<DegreeMoment>,
}

impl MomentReport {
    pub fn degree(&self, k: u32) -> Option<&DegreeMoment> {
        self.degrees.iter().find(|d| d.k == k)
    }

    /// Two-column-per-field CSV: `k,mc_estimate,mc_stderr,exact,exact_f64,catalan,z_score`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,mc_estimate,mc_stderr,exact,exact_f64,catalan,z_score\n");
        for d in &self.degrees {
            let z = d.z_score.map(|z| z.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                d.k, d.mc_estimate, d.mc_stderr, d.exact_value, d.exact_value_f64, d.catalan_ref, z
            ));
        }
        out
    }
}

/// Monte Carlo estimates of `φ(χ(v)^k)`, `k = 0..=k_max`, over `samples`
/// draws from the unit sphere of `Cl(R^s)`.
pub fn estimate_phi_moments(
    rank: u32,
    k_max: u32,
    samples: u64,
    sampler: &SeededSampler,
) -> Result<MomentReport> {
    check_rank(rank)?;
    check_degree(k_max)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let exact: Vec<BigRational> = (0..=k_max).map(|k| phi_moment_exact(rank, k)).collect();
    let shifts: Vec<f64> = exact.iter().map(|r| r.to_f64().unwrap_or(0.0)).collect();
    let degrees = k_max as usize + 1;
    let check_unitarity = rank >= 3;

    let partials: Vec<Result<ChunkAccumulator>> = chunks(samples)
        .into_par_iter()
        .map(|(start, end)| {
            let mut acc = ChunkAccumulator {
                degrees: vec![ShiftedMoments::default(); degrees],
                unitarity_failures: 0,
            };
            for index in start..end {
                let x = sampler.unit_sphere(rank, index)?;
                if check_unitarity && !x.is_unitary(UNITARITY_CHECK_TOL) {
                    acc.unitarity_failures += 1;
                }
                let coeffs: Vec<f64> = x.coeffs().iter().map(|c| c.re).collect();
                let values = character_moments_from_coeffs(&coeffs, k_max);
                for ((slot, v), shift) in acc.degrees.iter_mut().zip(values).zip(&shifts) {
                    let d = v - shift;
                    slot.sum.add(d);
                    slot.sum_sq.add(d * d);
                }
            }
            Ok(acc)
        })
        .collect();

    let mut total = ChunkAccumulator {
        degrees: vec![ShiftedMoments::default(); degrees],
        unitarity_failures: 0,
    };
    for partial in partials {
        let partial = partial?;
        total.unitarity_failures += partial.unitarity_failures;
        for (t, p) in total.degrees.iter_mut().zip(&partial.degrees) {
            t.sum.merge(&p.sum);
            t.sum_sq.merge(&p.sum_sq);
        }
    }

    let m = samples as f64;
    let moments = (0..=k_max)
        .map(|k| {
            let acc = &total.degrees[k as usize];
            let shift = shifts[k as usize];
            let mean_offset = acc.sum.value() / m;
            let mc_estimate = shift + mean_offset;
            let variance = if samples > 1 {
                ((acc.sum_sq.value() - acc.sum.value() * mean_offset) / (m - 1.0)).max(0.0)
            } else {
                0.0
            };
            let statistical = (variance / m).sqrt();
            let rounding = f64::from(k + 2) * f64::EPSILON * mc_estimate.abs();
            let mc_stderr = statistical.max(rounding);
            let catalan_ref = catalan_u128(k);
            let exact_value = &exact[k as usize];
            DegreeMoment {
                k,
                mc_estimate,
                mc_stderr,
                exact_value: rational_string(exact_value),
                exact_value_f64: shift,
                catalan_ref,
                exact_is_catalan: *exact_value == BigRational::from_integer(catalan(k).into()),
                z_score: (mc_stderr > 0.0).then(|| (mc_estimate - catalan_ref as f64) / mc_stderr),
                sample_count: samples,
            }
        })
        .collect();

    Ok(MomentReport {
        s: rank,
        n: 1 << rank,
        samples,
        seed: sampler.seed(),
        stream: sampler.stream(),
        measure_label: sphere_measure_label(rank),
        unitarity_failures: total.unitarity_failures,
        unitarity_failure_rate: total.unitarity_failures as f64 / m,
        degrees: moments,
    })
}

/// Pooled eigenvalue observations of `χ(v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSample {
    pub values: Vec<f64>,
    /// Closed interval containing every value.
    pub support: (f64, f64),
}

/// Equal-width histogram normalised to a density.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub lower: f64,
    pub upper: f64,
    pub bin_centers: Vec<f64>,
    pub counts: Vec<u64>,
    pub density: Vec<f64>,
}

impl Histogram {
    fn from_counts(lower: f64, upper: f64, counts: Vec<u64>) -> Self {
        let bins = counts.len();
        let width = (upper - lower) / bins as f64;
        let total: u64 = counts.iter().sum();
        let bin_centers = (0..bins)
            .map(|b| lower + (b as f64 + 0.5) * width)
            .collect();
        let density = counts
            .iter()
            .map(|&c| {
                if total == 0 {
                    0.0
                } else {
                    c as f64 / (total as f64 * width)
                }
            })
            .collect();
        Self {
            lower,
            upper,
            bin_centers,
            counts,
            density,
        }
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn bin_edges(&self, bin: usize) -> (f64, f64) {
        let width = (self.upper - self.lower) / self.bins() as f64;
        (
            self.lower + bin as f64 * width,
            self.lower + (bin + 1) as f64 * width,
        )
    }

    /// `bin_center,density` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_center,density\n");
        for (c, d) in self.bin_centers.iter().zip(&self.density) {
            out.push_str(&format!("{c},{d}\n"));
        }
        out
    }
}

fn bin_of(value: f64, lower: f64, upper: f64, bins: usize) -> usize {
    let width = (upper - lower) / bins as f64;
    (((value - lower) / width).floor().max(0.0) as usize).min(bins - 1)
}

impl SpectralSample {
    pub fn histogram(&self, bins: usize) -> Result<Histogram> {
        if bins == 0 {
            return Err(Error::InvalidArgument("bins must be at least 1".into()));
        }
        let (lower, upper) = self.support;
        let mut counts = vec![0u64; bins];
        for &v in &self.values {
            counts[bin_of(v, lower, upper, bins)] += 1;
        }
        Ok(Histogram::from_counts(lower, upper, counts))
    }
}

/// Eigenvalues of `χ(v)` pooled over sphere draws `0..samples`.
pub fn pooled_eigenvalues(
    rank: u32,
    samples: u64,
    sampler: &SeededSampler,
) -> Result<SpectralSample> {
    check_rank(rank)?;
    let n = 1usize << rank;
    let mut values = Vec::with_capacity(samples as usize * n);
    for index in 0..samples {
        let x = sampler.unit_sphere(rank, index)?;
        let coeffs: Vec<f64> = x.coeffs().iter().map(|c| c.re).collect();
        values.extend(character_spectrum_from_coeffs(&coeffs));
    }
    Ok(SpectralSample {
        values,
        support: (0.0, n as f64),
    })
}

/// Histogram of pooled `χ(v)` eigenvalues with its reference law.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralHistogram {
    pub s: u32,
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub stream: u64,
    pub measure_label: String,
    pub histogram: Histogram,
    /// Bin averages of [`squared_semicircle_density`]; present for `s = 2`.
    pub reference_density: Option<Vec<f64>>,
    /// `max_b |density_b - reference_b|`.
    pub sup_norm_deviation: Option<f64>,
    pub pooled_mean: f64,
    pub pooled_stderr: f64,
}

impl SpectralHistogram {
    /// `bin_center,density` (plus `reference` when available).
    pub fn to_csv(&self) -> String {
        match &self.reference_density {
            None => self.histogram.to_csv(),
            Some(reference) => {
                let mut out = String::from("bin_center,density,reference\n");
                for ((c, d), r) in self
                    .histogram
                    .bin_centers
                    .iter()
                    .zip(&self.histogram.density)
                    .zip(reference)
                {
                    out.push_str(&format!("{c},{d},{r}\n"));
                }
                out
            }
        }
    }
}

/// Average of the squared-semicircle density over `[a, b]`.
pub fn squared_semicircle_bin_average(a: f64, b: f64) -> f64 {
    (squared_semicircle_cdf(b) - squared_semicircle_cdf(a)) / (b - a)
}

/// Histogram of the pooled spectrum over `samples` sphere draws, with
/// `bins` equal-width bins on `[0, n]`.
pub fn spectral_histogram(
    rank: u32,
    samples: u64,
    bins: usize,
    sampler: &SeededSampler,
) -> Result<SpectralHistogram> {
    check_rank(rank)?;
    if samples == 0 || bins == 0 {
        return Err(Error::InvalidArgument(
            "samples and bins must be at least 1".into(),
        ));
    }
    let n = 1usize << rank;
    let upper = n as f64;

    type Partial = (Vec<u64>, CompensatedSum, CompensatedSum);
    let partials: Vec<Result<Partial>> = chunks(samples)
        .into_par_iter()
        .map(|(start, end)| {
            let mut counts = vec![0u64; bins];
            let mut sum = CompensatedSum::default();
            let mut sum_sq = CompensatedSum::default();
            for index in start..end {
                let x = sampler.unit_sphere(rank, index)?;
                let coeffs: Vec<f64> = x.coeffs().iter().map(|c| c.re).collect();
                for v in character_spectrum_from_coeffs(&coeffs) {
                    counts[bin_of(v, 0.0, upper, bins)] += 1;
                    // pooled values have mean exactly 1; accumulate offsets
                    sum.add(v - 1.0);
                    sum_sq.add((v - 1.0) * (v - 1.0));
                }
            }
            Ok((counts, sum, sum_sq))
        })
        .collect();

    let mut counts = vec![0u64; bins];
    let mut sum = CompensatedSum::default();
    let mut sum_sq = CompensatedSum::default();
    for partial in partials {
        let (c, s, sq) = partial?;
        counts.iter_mut().zip(c).for_each(|(t, x)| *t += x);
        sum.merge(&s);
        sum_sq.merge(&sq);
    }
    let total = (samples * n as u64) as f64;
    let offset = sum.value() / total;
    let variance = ((sum_sq.value() - sum.value() * offset) / (total - 1.0).max(1.0)).max(0.0);
    let pooled_mean = 1.0 + offset;
    let pooled_stderr = (variance / total).sqrt().max(2.0 * f64::EPSILON);

    let histogram = Histogram::from_counts(0.0, upper, counts);
    let reference_density: Option<Vec<f64>> = (rank == 2).then(|| {
        (0..bins)
            .map(|b| {
                let (a, e) = histogram.bin_edges(b);
                squared_semicircle_bin_average(a, e)
            })
            .collect()
    });
    let sup_norm_deviation = reference_density.as_ref().map(|r| {
        histogram
            .density
            .iter()
            .zip(r)
            .map(|(d, r)| (d - r).abs())
            .fold(0.0, f64::max)
    });

    Ok(SpectralHistogram {
        s: rank,
        n,
        samples,
        seed: sampler.seed(),
        stream: sampler.stream(),
        measure_label: sphere_measure_label(rank),
        histogram,
        reference_density,
        sup_norm_deviation,
        pooled_mean,
        pooled_stderr,
    })
}

/// Exact moment against its Catalan target.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactMoment {
    pub k: u32,
    pub exact_value: String,
    pub catalan: u128,
    pub equal: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HypothesisSatisfied,
    HypothesisViolated,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::HypothesisSatisfied => "hypothesis satisfied",
            Verdict::HypothesisViolated => "hypothesis violated",
        }
    }
}

/// Whether `φ(χ(v)^k) = C_k` for all `k ≤ k_max`, decided in exact
/// arithmetic. Monte Carlo is attached for illustration when `samples > 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub s: u32,
    pub n: usize,
    pub k_max: u32,
    pub measure_label: String,
    pub verdict: Verdict,
    /// First degree where the exact moment differs from the Catalan number.
    pub witness_degree: Option<u32>,
    pub exact_moments: Vec<ExactMoment>,
    pub monte_carlo: Option<MomentReport>,
    pub conclusion: String,
}

impl HypothesisReport {
    pub fn satisfied(&self) -> bool {
        self.verdict == Verdict::HypothesisSatisfied
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "Catalan moment check for Cl(R^{}) (n = {}), k = 0..={}\nmeasure: {}\n",
            self.s, self.n, self.k_max, self.measure_label
        );
        out.push_str(&format!(
            "{:>4}  {:>24}  {:>24}  {}\n",
            "k", "exact phi-moment", "catalan", "match"
        ));
        for m in &self.exact_moments {
            out.push_str(&format!(
                "{:>4}  {:>24}  {:>24}  {}\n",
                m.k,
                m.exact_value,
                m.catalan,
                if m.equal { "yes" } else { "NO" }
            ));
        }
        if let Some(mc) = &self.monte_carlo {
            out.push_str(&format!(
                "monte carlo ({} samples, seed {}):\n",
                mc.samples, mc.seed
            ));
            for d in &mc.degrees {
                out.push_str(&format!(
                    "{:>4}  {:>24.12}  +/- {:.3e}\n",
                    d.k, d.mc_estimate, d.mc_stderr
                ));
            }
        }
        out.push_str(&format!("verdict: {}", self.verdict.as_str()));
        if let Some(k) = self.witness_degree {
            out.push_str(&format!(" (first mismatch at k = {k})"));
        }
        out.push('\n');
        out.push_str(&self.conclusion);
        out.push('\n');
        out
    }
}

pub fn hypothesis_report(
    rank: u32,
    k_max: u32,
    samples: u64,
    sampler: &SeededSampler,
) -> Result<HypothesisReport> {
    check_rank(rank)?;
    check_degree(k_max)?;
    let exact_moments: Vec<ExactMoment> = (0..=k_max)
        .map(|k| {
            let exact = phi_moment_exact(rank, k);
            let target = catalan(k);
            ExactMoment {
                k,
                exact_value: rational_string(&exact),
                catalan: target.to_u128().expect("bounded degree"),
                equal: exact == BigRational::from_integer(target.into()),
            }
        })
        .collect();
    let witness_degree = exact_moments.iter().find(|m| !m.equal).map(|m| m.k);
    let verdict = if witness_degree.is_none() {
        Verdict::HypothesisSatisfied
    } else {
        Verdict::HypothesisViolated
    };
    let conclusion = match verdict {
        Verdict::HypothesisSatisfied => format!(
            "chi(v) has the moments of the square of a semicircular element up to degree {k_max} \
             (exact rational arithmetic). Inner faithfulness of the representation follows from \
             this moment criterion by proof; it is not machine-checked here."
        ),
        Verdict::HypothesisViolated => "chi(v) does not have the moments of the square of a \
             semicircular element; the Catalan criterion does not apply."
            .to_owned(),
    };
    let monte_carlo = if samples > 0 {
        Some(estimate_phi_moments(rank, k_max, samples, sampler)?)
    } else {
        None
    };
    Ok(HypothesisReport {
        s: rank,
        n: 1 << rank,
        k_max,
        measure_label: sphere_measure_label(rank),
        verdict,
        witness_degree,
        exact_moments,
        monte_carlo,
        conclusion,
    })
}
