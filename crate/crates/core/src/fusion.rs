//! The `SO(3)` fusion ring: formal sums of labels `r_0, r_1, …` with
//! `r_k ⊗ r_s = r_{|k-s|} + r_{|k-s|+1} + … + r_{k+s}`.
//!
//! The fundamental corepresentation is taken to be `u = r_0 + r_1`; the
//! multiplicity of `r_0` in `u^{⊗k}` is the Haar moment `h(χ(u)^k)`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Nonnegative integer combination `Σ_k m_k r_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FusionVector {
    // index = label; no trailing zeros
    multiplicities: Vec<BigUint>,
}

impl FusionVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The single irreducible `r_label`.
    pub fn irreducible(label: usize) -> Self {
        let mut multiplicities = vec![BigUint::zero(); label + 1];
        multiplicities[label] = BigUint::one();
        Self { multiplicities }
    }

    /// `u = r_0 + r_1`.
    pub fn fundamental() -> Self {
        Self::from_multiplicities(vec![BigUint::one(), BigUint::one()])
    }

    pub fn from_multiplicities(mut multiplicities: Vec<BigUint>) -> Self {
        while multiplicities.last().is_some_and(Zero::is_zero) {
            multiplicities.pop();
        }
        Self { multiplicities }
    }

    pub fn multiplicity(&self, label: usize) -> BigUint {
        self.multiplicities.get(label).cloned().unwrap_or_default()
    }

    /// Largest label with nonzero multiplicity.
    pub fn max_label(&self) -> Option<usize> {
        self.multiplicities.len().checked_sub(1)
    }

    /// `(label, multiplicity)` pairs with nonzero multiplicity.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.multiplicities
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.multiplicities.len().max(other.multiplicities.len());
        let out = (0..len)
            .map(|k| self.multiplicity(k) + other.multiplicity(k))
            .collect();
        Self::from_multiplicities(out)
    }

    /// Bilinear extension of the Clebsch–Gordan rule.
    pub fn fuse(&self, other: &Self) -> Self {
        let (Some(a_max), Some(b_max)) = (self.max_label(), other.max_label()) else {
            return Self::zero();
        };
        let mut out = vec![BigUint::zero(); a_max + b_max + 1];
        for (k, mk) in self.terms() {
            for (s, ms) in other.terms() {
                let weight = mk * ms;
                for slot in &mut out[k.abs_diff(s)..=k + s] {
                    *slot += &weight;
                }
            }
        }
        Self::from_multiplicities(out)
    }

    /// `Σ_k m_k (2k + 1)`, the ring map to `Z` given by `dim r_k = 2k + 1`.
    pub fn dimension(&self) -> BigUint {
        self.terms()
            .map(|(k, m)| m * BigUint::from(2 * k as u64 + 1))
            .sum()
    }
}

impl fmt::Display for FusionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms()
            .map(|(k, m)| {
                if m.is_one() {
                    format!("r_{k}")
                } else {
                    format!("{m} r_{k}")
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// `(r_0 + r_1)^{⊗k}`.
pub fn fundamental_power(k: u32) -> FusionVector {
    let u = FusionVector::fundamental();
    (0..k).fold(FusionVector::irreducible(0), |acc, _| acc.fuse(&u))
}

/// Multiplicities of `r_0` in `u^{⊗k}` for `k = 0..=k_max`.
pub fn poincare_coefficients(k_max: u32) -> Vec<BigUint> {
    let u = FusionVector::fundamental();
    let mut power = FusionVector::irreducible(0);
    let mut out = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        if k > 0 {
            power = power.fuse(&u);
        }
        out.push(power.multiplicity(0));
    }
    out
}
