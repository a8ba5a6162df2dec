//! The Clifford algebra `Cl(R^s)`: generators `e_1..e_s` with `e_i^2 = -1`
//! and `e_i e_j = -e_j e_i`, basis `{e_I}` indexed by subsets `I`.
//!
//! Subsets are bitmasks (bit `i - 1` set iff `i` is in `I`), and the basis is
//! ordered by ascending bitmask: `e_∅, e_1, e_2, e_12, e_3, ...`. With this
//! layout the product of two basis elements lands on the XOR of their masks,
//! up to a sign computed by [`sign_product`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Largest supported number of generators (`n = 2^16`).
pub const MAX_RANK: u32 = 16;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_rank(rank: u32) -> Result<()> {
    if rank == 0 || rank > MAX_RANK {
        return Err(Error::RankOutOfRange {
            rank,
            max: MAX_RANK,
        });
    }
    Ok(())
}

fn same_rank(left: u32, right: u32) -> Result<()> {
    if left != right {
        return Err(Error::RankMismatch { left, right });
    }
    Ok(())
}

/// A subset `I ⊆ {1, …, s}` labelling the basis element `e_I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    bits: u32,
    rank: u32,
}

impl MultiIndex {
    pub fn new(bits: u32, rank: u32) -> Result<Self> {
        check_rank(rank)?;
        if (bits as u64) >= (1u64 << rank) {
            return Err(Error::IndexOutOfRange { bits, rank });
        }
        Ok(Self { bits, rank })
    }

    pub fn empty(rank: u32) -> Result<Self> {
        Self::new(0, rank)
    }

    /// `{1, …, s}`, the index of the pseudoscalar `e_1 e_2 ⋯ e_s`.
    pub fn full(rank: u32) -> Result<Self> {
        check_rank(rank)?;
        Ok(Self {
            bits: ((1u64 << rank) - 1) as u32,
            rank,
        })
    }

    /// Builds `I` from 1-based generator labels, e.g. `[1, 2]` for `e_12`.
    pub fn from_generators(generators: &[u32], rank: u32) -> Result<Self> {
        let mut bits = 0u32;
        for &g in generators {
            if g == 0 || g > rank {
                return Err(Error::InvalidArgument(format!(
                    "generator {g} outside 1..={rank}"
                )));
            }
            bits |= 1 << (g - 1);
        }
        Self::new(bits, rank)
    }

    /// All `2^s` subsets in basis order.
    pub fn all(rank: u32) -> Result<impl Iterator<Item = MultiIndex>> {
        check_rank(rank)?;
        Ok((0..(1u32 << rank)).map(move |bits| MultiIndex { bits, rank }))
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn rank(self) -> u32 {
        self.rank
    }

    /// Cardinality `|I|`.
    pub fn len(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn contains(self, generator: u32) -> bool {
        generator >= 1 && generator <= self.rank && self.bits & (1 << (generator - 1)) != 0
    }

    /// Generators of `I` in increasing order (1-based).
    pub fn generators(self) -> Vec<u32> {
        (1..=self.rank).filter(|&g| self.contains(g)).collect()
    }

    /// `I Δ J`, the index of `e_I e_J` up to sign.
    pub fn symmetric_difference(self, other: MultiIndex) -> Result<MultiIndex> {
        same_rank(self.rank, other.rank)?;
        Ok(MultiIndex {
            bits: self.bits ^ other.bits,
            rank: self.rank,
        })
    }

    /// Quaternion name for `s = 2`: `1, i, j, k` for `∅, {1}, {2}, {1,2}`.
    pub fn quaternion_label(self) -> Option<&'static str> {
        if self.rank != 2 {
            return None;
        }
        Some(["1", "i", "j", "k"][self.bits as usize])
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits == 0 {
            return write!(f, "∅");
        }
        let labels: Vec<String> = self.generators().iter().map(u32::to_string).collect();
        // generator labels above 9 need a separator to stay unambiguous
        if self.rank > 9 {
            write!(f, "{}", labels.join(","))
        } else {
            write!(f, "{}", labels.concat())
        }
    }
}

/// Sign `σ` with `e_a e_b = σ e_{a ^ b}` on raw bitmasks.
///
/// `t` counts pairs `i ∈ a, j ∈ b` with `i > j` (transpositions needed to sort
/// the concatenated word); `c = |a ∩ b|` counts squared generators.
pub(crate) fn product_sign_bits(a: u32, b: u32) -> i32 {
    let mut t = 0u32;
    let mut shifted = a >> 1;
    while shifted != 0 {
        t += (shifted & b).count_ones();
        shifted >>= 1;
    }
    let c = (a & b).count_ones();
    if (t + c).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign of `e_I*` relative to `e_I`: `(-1)^{|I|(|I|+1)/2}`.
pub(crate) fn involution_sign_bits(bits: u32) -> i32 {
    let k = bits.count_ones();
    if (k * (k + 1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `σ ∈ {+1, -1}` with `e_I · e_J = σ e_{I Δ J}`.
pub fn sign_product(left: MultiIndex, right: MultiIndex) -> Result<i32> {
    same_rank(left.rank, right.rank)?;
    Ok(product_sign_bits(left.bits, right.bits))
}

/// `(-1)^{N(I,J)}` where `e_I e_J = (-1)^{N(I,J)} e_J e_I`.
pub fn commutation_sign(left: MultiIndex, right: MultiIndex) -> Result<i32> {
    same_rank(left.rank, right.rank)?;
    Ok(product_sign_bits(left.bits, right.bits) * product_sign_bits(right.bits, left.bits))
}

/// An element `Σ_I x_I e_I` of `Cl(R^s)` with complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordElement {
    rank: u32,
    coeffs: Vec<Complex64>,
}

impl CliffordElement {
    pub fn zero(rank: u32) -> Result<Self> {
        check_rank(rank)?;
        Ok(Self {
            rank,
            coeffs: vec![ZERO; 1 << rank],
        })
    }

    /// The unit `e_∅`.
    pub fn one(rank: u32) -> Result<Self> {
        let mut out = Self::zero(rank)?;
        out.coeffs[0] = ONE;
        Ok(out)
    }

    pub fn basis(index: MultiIndex) -> Self {
        let mut coeffs = vec![ZERO; 1 << index.rank];
        coeffs[index.bits as usize] = ONE;
        Self {
            rank: index.rank,
            coeffs,
        }
    }

    pub fn from_coeffs(rank: u32, coeffs: Vec<Complex64>) -> Result<Self> {
        check_rank(rank)?;
        if coeffs.len() != 1 << rank {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients for rank {rank}, got {}",
                1usize << rank,
                coeffs.len()
            )));
        }
        Ok(Self { rank, coeffs })
    }

    pub fn from_real(rank: u32, coeffs: &[f64]) -> Result<Self> {
        Self::from_coeffs(
            rank,
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// `n = 2^s`.
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, index: MultiIndex) -> Complex64 {
        self.coeffs[index.bits as usize]
    }

    /// Real parts of the coefficients, or an error if any imaginary part
    /// exceeds `tol`.
    pub fn real_coeffs(&self, tol: f64) -> Result<Vec<f64>> {
        if !self.is_real(tol) {
            return Err(Error::ComplexCoefficients);
        }
        Ok(self.coeffs.iter().map(|c| c.re).collect())
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.im.abs() <= tol)
    }

    /// `Σ_I |x_I|^2`.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rank: self.rank,
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    /// Largest coefficient difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        same_rank(self.rank, other.rank)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `(a·b)_K = Σ_{I Δ J = K} σ(I,J) a_I b_J`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        same_rank(self.rank, other.rank)?;
        let n = self.coeffs.len();
        let mut out = vec![ZERO; n];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == ZERO {
                continue;
            }
            for (b, &cb) in other.coeffs.iter().enumerate() {
                if cb == ZERO {
                    continue;
                }
                let sign = product_sign_bits(a as u32, b as u32) as f64;
                out[a ^ b] += ca * cb * sign;
            }
        }
        Ok(Self {
            rank: self.rank,
            coeffs: out,
        })
    }

    /// `e_I · self · e_J`, computed as a signed permutation of coefficients.
    pub fn sandwich(&self, left: MultiIndex, right: MultiIndex) -> Result<Self> {
        same_rank(self.rank, left.rank)?;
        same_rank(self.rank, right.rank)?;
        let mut out = vec![ZERO; self.coeffs.len()];
        for (k, &c) in self.coeffs.iter().enumerate() {
            let k = k as u32;
            let inner = product_sign_bits(left.bits, k);
            let outer = product_sign_bits(left.bits ^ k, right.bits);
            out[(left.bits ^ k ^ right.bits) as usize] = c * f64::from(inner * outer);
        }
        Ok(Self {
            rank: self.rank,
            coeffs: out,
        })
    }

    /// The C*-involution: conjugate-linear, antimultiplicative, with
    /// `e_I* = (-1)^{|I|(|I|+1)/2} e_I` so that generators are skew-adjoint.
    pub fn involution(&self) -> Self {
        Self {
            rank: self.rank,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(bits, c)| c.conj() * f64::from(involution_sign_bits(bits as u32)))
                .collect(),
        }
    }

    /// `⟨a, b⟩ = Σ_I a_I conj(b_I)`; the basis `{e_I}` is orthonormal.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        same_rank(self.rank, other.rank)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    /// The Pauli-matrix representation of `Cl(R^2)`.
    pub fn pauli_rep(&self) -> Result<ComplexMatrix> {
        if self.rank != 2 {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: 2,
            });
        }
        let images = pauli_basis();
        let mut out = ComplexMatrix::zeros(2, 2);
        for (c, m) in self.coeffs.iter().zip(images.iter()) {
            out = out.add(&m.scale(*c))?;
        }
        Ok(out)
    }

    /// Matrix of `b ↦ self · b` in the basis `{e_I}`.
    pub fn left_mult_matrix(&self) -> ComplexMatrix {
        let n = self.coeffs.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == ZERO {
                continue;
            }
            for col in 0..n {
                let row = a ^ col;
                let sign = product_sign_bits(a as u32, col as u32) as f64;
                out[(row, col)] += ca * sign;
            }
        }
        out
    }

    /// Largest coefficient of `x x* - 1` and `x* x - 1`.
    pub fn unitarity_defect(&self) -> f64 {
        let adj = self.involution();
        let one = Self::one(self.rank).expect("rank already validated");
        let left = self.multiply(&adj).expect("same rank");
        let right = adj.multiply(self).expect("same rank");
        let d1 = left.max_abs_diff(&one).expect("same rank");
        let d2 = right.max_abs_diff(&one).expect("same rank");
        d1.max(d2)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }
}

/// Images of `e_∅, e_1, e_2, e_12` under the Pauli identification.
pub fn pauli_basis() -> [ComplexMatrix; 4] {
    let m = |a: [Complex64; 4]| ComplexMatrix::new(2, 2, a.to_vec()).expect("2x2");
    [
        m([ONE, ZERO, ZERO, ONE]),
        m([I, ZERO, ZERO, -I]),
        m([ZERO, ONE, -ONE, ZERO]),
        m([ZERO, I, I, ZERO]),
    ]
}

/// Panics on rank mismatch; use [`CliffordElement::multiply`] to get an error.
impl Mul for &CliffordElement {
    type Output = CliffordElement;

    fn mul(self, rhs: Self) -> CliffordElement {
        self.multiply(rhs)
            .expect("rank mismatch in Clifford product")
    }
}

impl Add for &CliffordElement {
    type Output = CliffordElement;

    fn add(self, rhs: Self) -> CliffordElement {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in Clifford sum");
        CliffordElement {
            rank: self.rank,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CliffordElement {
    type Output = CliffordElement;

    fn sub(self, rhs: Self) -> CliffordElement {
        self + &(-rhs)
    }
}

impl Neg for &CliffordElement {
    type Output = CliffordElement;

    fn neg(self) -> CliffordElement {
        self.scale(-ONE)
    }
}
