//! Reproducible sampling of unit spheres and Clifford unitaries, and exact
//! sphere moments.
//!
//! # Stream derivation
//!
//! Sample `index` of stream `stream` under seed `seed` reads the ChaCha8
//! keystream keyed by `ChaCha8Rng::seed_from_u64(seed)`, with stream id
//! `stream`, starting at 32-bit word `index * 2^32`. Every sample therefore
//! owns a disjoint window of the keystream, and any subset of samples can be
//! regenerated in any order, on any thread, bit for bit.
//!
//! Gaussians come from the Box–Muller transform of consecutive 53-bit
//! uniforms drawn from that window.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::clifford::{involution_sign_bits, CliffordElement, MultiIndex};
use crate::error::Result;

/// Label for `s = 1` and `s = 2` sphere draws, which are Haar on `U(1)` and
/// `SU(2)` respectively.
pub fn sphere_measure_label(rank: u32) -> String {
    match rank {
        1 => "Haar measure on U(1) = unit circle S^1".to_owned(),
        2 => "Haar measure on SU(2) = unit sphere S^3".to_owned(),
        s => format!(
            "sphere measure: uniform on real unit vectors in S^{} (n = {})",
            (1usize << s) - 1,
            1usize << s
        ),
    }
}

/// Label for draws from [`SeededSampler::unitary`].
pub fn unitary_measure_label(rank: u32) -> String {
    match rank {
        1 | 2 => sphere_measure_label(rank),
        s => format!(
            "unitary random walk: {UNITARY_WALK_ROUNDS} rounds of exp(theta e_I) over skew-adjoint e_I, s = {s}"
        ),
    }
}

/// Rounds of one-parameter rotations used by [`SeededSampler::unitary`].
pub const UNITARY_WALK_ROUNDS: usize = 4;

/// Counter-based sampler keyed by `(seed, stream)`; samples are addressed by
/// index and never depend on how many other samples were drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeededSampler {
    seed: u64,
    stream: u64,
}

impl SeededSampler {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Generator positioned at the start of sample `index`'s window.
    pub fn sample_rng(&self, index: u64) -> SampleRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng.set_word_pos(u128::from(index) << 32);
        SampleRng { rng, spare: None }
    }

    /// Uniform real unit vector in `Cl(R^s)`, i.e. a point of `S^{n-1}`.
    pub fn unit_sphere(&self, rank: u32, index: u64) -> Result<CliffordElement> {
        let n = 1usize << rank;
        let mut rng = self.sample_rng(index);
        let coeffs = rng.unit_vector(n);
        CliffordElement::from_real(rank, &coeffs)
    }

    /// A real-coefficient unitary of `Cl(R^s)`.
    ///
    /// For `s ≤ 2` every real unit vector is unitary and this coincides with
    /// [`Self::unit_sphere`] (Haar on `U(1)` or `SU(2)`). For `s ≥ 3` it is a
    /// product of rotations `cos θ + sin θ e_I` over the skew-adjoint basis
    /// elements with independent uniform angles; the result is unitary but
    /// not claimed to be Haar distributed.
    pub fn unitary(&self, rank: u32, index: u64) -> Result<CliffordElement> {
        if rank <= 2 {
            return self.unit_sphere(rank, index);
        }
        let mut rng = self.sample_rng(index);
        let skew: Vec<MultiIndex> = MultiIndex::all(rank)?
            .filter(|i| involution_sign_bits(i.bits()) == -1)
            .collect();
        let mut x = CliffordElement::one(rank)?;
        let mut rotation = vec![0.0; 1 << rank];
        for _ in 0..UNITARY_WALK_ROUNDS {
            for &generator in &skew {
                let theta = 2.0 * PI * rng.next_uniform();
                rotation.iter_mut().for_each(|c| *c = 0.0);
                rotation[0] = theta.cos();
                rotation[generator.bits() as usize] = theta.sin();
                x = x.multiply(&CliffordElement::from_real(rank, &rotation)?)?;
            }
        }
        Ok(x)
    }
}

/// Per-sample generator; see the module docs for the keystream layout.
#[derive(Clone, Debug)]
pub struct SampleRng {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl SampleRng {
    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `(0, 1]`.
    fn next_open_uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box–Muller; the second variate of each pair is
    /// kept for the next call.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let radius = (-2.0 * self.next_open_uniform().ln()).sqrt();
        let angle = 2.0 * PI * self.next_uniform();
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// Normalised vector of `n` independent Gaussians.
    pub fn unit_vector(&mut self, n: usize) -> Vec<f64> {
        loop {
            let g: Vec<f64> = (0..n).map(|_| self.next_gaussian()).collect();
            let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                return g.into_iter().map(|x| x / norm).collect();
            }
        }
    }
}

/// `E[x_1^{2k}]` for `x` uniform on `S^{n-1}`:
/// `(2k-1)!! / (n (n+2) ⋯ (n+2k-2))`, exactly.
///
/// # Panics
///
/// If `n == 0`.
pub fn sphere_moment_exact(n: u64, k: u32) -> BigRational {
    assert!(n >= 1, "sphere dimension must be positive");
    let mut numerator = BigInt::one();
    let mut denominator = BigInt::one();
    for j in 0..u64::from(k) {
        numerator *= BigInt::from(2 * j + 1);
        denominator *= BigInt::from(n + 2 * j);
    }
    BigRational::new(numerator, denominator)
}

/// `E[(x_1² + ⋯ + x_m²)^k]` for `x` uniform on `S^{n-1}`: the sum is
/// `Beta(m/2, (n-m)/2)`, giving `Π_{j<k} (m + 2j) / (n + 2j)`.
///
/// # Panics
///
/// If `m == 0` or `m > n`.
pub fn sphere_block_moment_exact(n: u64, m: u64, k: u32) -> BigRational {
    assert!(m >= 1 && m <= n, "block size must lie in 1..=n");
    let mut numerator = BigInt::one();
    let mut denominator = BigInt::one();
    for j in 0..u64::from(k) {
        numerator *= BigInt::from(m + 2 * j);
        denominator *= BigInt::from(n + 2 * j);
    }
    BigRational::new(numerator, denominator)
}
