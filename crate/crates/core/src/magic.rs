//! Magic biunitary matrices: square grids of projections whose rows and
//! columns are partitions of unity.
//!
//! A [`MagicMatrix`] is just an `n x n` grid of `d x d` blocks; magic
//! biunitarity is certified after the fact by [`verify_magic`], so invalid
//! grids stay representable for defect reporting.

use num_complex::Complex64;
use serde::ser::{Serialize, SerializeStruct, Serializer};
use serde::Serialize as DeriveSerialize;

use crate::clifford::{CliffordElement, MultiIndex};
use crate::error::{Error, Result};
use crate::linalg::{nested_entries, ComplexMatrix};
use crate::EXACT_TOL;

/// Squared norms below this are rejected by [`projection_onto`].
pub const MIN_NORM_SQ: f64 = 1e-14;

/// Largest `n` accepted by [`permutation_magic`]; blocks are dense `n! x n!`.
pub const MAX_PERMUTATION_N: usize = 5;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct MagicMatrix {
    n: usize,
    d: usize,
    blocks: Vec<ComplexMatrix>,
}

impl MagicMatrix {
    /// Builds an `n x n` grid from row-major blocks, all `d x d`.
    pub fn new(n: usize, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if n == 0 || blocks.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "{} blocks do not form a {n}x{n} grid",
                blocks.len()
            )));
        }
        let d = blocks[0].rows();
        for b in &blocks {
            if b.shape() != (d, d) {
                return Err(Error::ShapeMismatch {
                    op: "magic block",
                    left: (d, d),
                    right: b.shape(),
                });
            }
        }
        Ok(Self { n, d, blocks })
    }

    /// `v_ij = δ_ij · 1_d`.
    pub fn identity(n: usize, d: usize) -> Self {
        let blocks = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    ComplexMatrix::identity(d)
                } else {
                    ComplexMatrix::zeros(d, d)
                }
            })
            .collect();
        Self { n, d, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn block(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.blocks[i * self.n + j]
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    /// The `nd x nd` matrix with `v_ij` in block position `(i, j)`.
    pub fn to_dense(&self) -> ComplexMatrix {
        let size = self.n * self.d;
        let mut out = ComplexMatrix::zeros(size, size);
        for i in 0..self.n {
            for j in 0..self.n {
                let b = self.block(i, j);
                for r in 0..self.d {
                    for c in 0..self.d {
                        out[(i * self.d + r, j * self.d + c)] = b[(r, c)];
                    }
                }
            }
        }
        out
    }
}

impl Serialize for MagicMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let grid: Vec<Vec<Vec<Vec<[f64; 2]>>>> = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| nested_entries(self.block(i, j)))
                    .collect()
            })
            .collect();
        let mut st = serializer.serialize_struct("MagicMatrix", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("blocks", &grid)?;
        st.end()
    }
}

/// Worst-case defects found by [`verify_magic`].
#[derive(Clone, Debug, PartialEq, DeriveSerialize)]
pub struct MagicReport {
    pub n: usize,
    pub d: usize,
    pub tolerance: f64,
    /// `max ‖v_ij² - v_ij‖`.
    pub max_projection_defect: f64,
    /// `max ‖v_ij - v_ij*‖`.
    pub max_selfadjoint_defect: f64,
    /// `max_i ‖Σ_j v_ij - 1‖`.
    pub max_row_defect: f64,
    /// `max_j ‖Σ_i v_ij - 1‖`.
    pub max_col_defect: f64,
    /// `max ‖v_ij v_ik‖` over distinct pairs in a row or column.
    pub max_orthogonality_defect: f64,
    pub pass: bool,
}

impl MagicReport {
    pub fn max_defect(&self) -> f64 {
        [
            self.max_projection_defect,
            self.max_selfadjoint_defect,
            self.max_row_defect,
            self.max_col_defect,
            self.max_orthogonality_defect,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Checks the magic biunitary axioms at `tol` (entrywise max norm).
pub fn verify_magic(v: &MagicMatrix, tol: f64) -> MagicReport {
    let (n, d) = (v.n, v.d);
    let id = ComplexMatrix::identity(d);
    let mut projection: f64 = 0.0;
    let mut selfadjoint: f64 = 0.0;
    for b in &v.blocks {
        projection = projection.max(b.idempotent_defect().expect("square block"));
        selfadjoint = selfadjoint.max(b.hermitian_defect().expect("square block"));
    }

    let mut row_defect: f64 = 0.0;
    let mut col_defect: f64 = 0.0;
    for i in 0..n {
        let mut row = ComplexMatrix::zeros(d, d);
        let mut col = ComplexMatrix::zeros(d, d);
        for j in 0..n {
            row = row.add(v.block(i, j)).expect("same shape");
            col = col.add(v.block(j, i)).expect("same shape");
        }
        row_defect = row_defect.max(row.max_abs_diff(&id).expect("same shape"));
        col_defect = col_defect.max(col.max_abs_diff(&id).expect("same shape"));
    }

    let mut orthogonality: f64 = 0.0;
    for a in 0..n {
        for j in 0..n {
            for k in 0..n {
                if j == k {
                    continue;
                }
                let in_row = v.block(a, j).mul(v.block(a, k)).expect("same shape");
                let in_col = v.block(j, a).mul(v.block(k, a)).expect("same shape");
                orthogonality = orthogonality.max(in_row.max_abs()).max(in_col.max_abs());
            }
        }
    }

    let pass = [
        projection,
        selfadjoint,
        row_defect,
        col_defect,
        orthogonality,
    ]
    .iter()
    .all(|&x| x <= tol);
    MagicReport {
        n,
        d,
        tolerance: tol,
        max_projection_defect: projection,
        max_selfadjoint_defect: selfadjoint,
        max_row_defect: row_defect,
        max_col_defect: col_defect,
        max_orthogonality_defect: orthogonality,
        pass,
    }
}

/// Orthogonal projection onto `C y`: `(P_y)_IJ = y_I conj(y_J) / ⟨y, y⟩`.
pub fn projection_onto(y: &CliffordElement) -> Result<ComplexMatrix> {
    let norm_sq = y.norm_sq();
    if norm_sq < MIN_NORM_SQ {
        return Err(Error::ZeroVector { norm_sq });
    }
    let c = y.coeffs();
    let n = c.len();
    let mut p = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            p[(i, j)] = c[i] * c[j].conj() / norm_sq;
        }
    }
    Ok(p)
}

/// `v = (P_{e_I x e_J})_{IJ}` for a unitary `x ∈ Cl(R^s)`, `n = d = 2^s`.
///
/// For `s = 2` the rows and columns follow the order `1, i, j, k`.
pub fn clifford_magic(x: &CliffordElement, tol: f64) -> Result<MagicMatrix> {
    let defect = x.unitarity_defect();
    if defect > tol {
        return Err(Error::NotUnitary { defect });
    }
    let rank = x.rank();
    let indices: Vec<MultiIndex> = MultiIndex::all(rank)?.collect();
    let mut blocks = Vec::with_capacity(indices.len() * indices.len());
    for &left in &indices {
        for &right in &indices {
            blocks.push(projection_onto(&x.sandwich(left, right)?)?);
        }
    }
    MagicMatrix::new(indices.len(), blocks)
}

/// `χ(v) = Σ_i v_ii`.
pub fn character(v: &MagicMatrix) -> ComplexMatrix {
    (0..v.n).fold(ComplexMatrix::zeros(v.d, v.d), |acc, i| {
        acc.add(v.block(i, i)).expect("same shape")
    })
}

/// Diagonal `(n x_I²)_I` of the character of [`clifford_magic`]`(x)`.
///
/// Requires real coefficients and unit norm. For even `s` the character is
/// diagonal, so these are its eigenvalues; for odd `s` the character also
/// couples `I` with `I Δ {1..s}` (see [`character_spectrum_exact`]).
pub fn character_diagonal_exact(x: &CliffordElement) -> Result<Vec<f64>> {
    let coeffs = unit_real_coeffs(x)?;
    let n = coeffs.len() as f64;
    Ok(coeffs.iter().map(|c| n * c * c).collect())
}

/// Eigenvalues of the character of [`clifford_magic`]`(x)`, unsorted.
///
/// Even `s`: `{n x_I²}`. Odd `s`: the pseudoscalar is central, so
/// `e_I x e_I` and its partner `e_{I'} x e_{I'}` with `I' = I Δ {1..s}` span
/// the same line and the character is `n` times a sum of rank-one blocks on
/// the pairs `{I, I'}`; the spectrum is `{n (x_I² + x_{I'}²)}` over pairs
/// followed by `n/2` zeros.
pub fn character_spectrum_exact(x: &CliffordElement) -> Result<Vec<f64>> {
    let coeffs = unit_real_coeffs(x)?;
    Ok(character_spectrum_from_coeffs(&coeffs))
}

pub(crate) fn character_spectrum_from_coeffs(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len();
    let rank = n.trailing_zeros();
    let nf = n as f64;
    if rank.is_multiple_of(2) {
        return coeffs.iter().map(|c| nf * c * c).collect();
    }
    let full = n - 1;
    let mut out: Vec<f64> = (0..n)
        .filter(|&i| i < i ^ full)
        .map(|i| nf * (coeffs[i] * coeffs[i] + coeffs[i ^ full] * coeffs[i ^ full]))
        .collect();
    out.resize(n, 0.0);
    out
}

fn unit_real_coeffs(x: &CliffordElement) -> Result<Vec<f64>> {
    let coeffs = x.real_coeffs(0.0)?;
    let norm_sq: f64 = coeffs.iter().map(|c| c * c).sum();
    if (norm_sq - 1.0).abs() > crate::SAMPLED_TOL {
        return Err(Error::NotUnitNorm { norm_sq });
    }
    Ok(coeffs)
}

fn require_projection(p: &ComplexMatrix) -> Result<()> {
    if !p.is_projection(EXACT_TOL)? {
        let defect = p.idempotent_defect()?.max(p.hermitian_defect()?);
        return Err(Error::NotProjection { defect });
    }
    Ok(())
}

/// `[[p, 1-p], [1-p, p]]`, the general `2 x 2` magic biunitary.
pub fn two_by_two(p: &ComplexMatrix) -> Result<MagicMatrix> {
    require_projection(p)?;
    let q = ComplexMatrix::identity(p.rows()).sub(p)?;
    MagicMatrix::new(2, vec![p.clone(), q.clone(), q, p.clone()])
}

/// `two_by_two(p) ⊕ two_by_two(q)` laid out as a `4 x 4` grid.
pub fn block_4x4(p: &ComplexMatrix, q: &ComplexMatrix) -> Result<MagicMatrix> {
    require_projection(p)?;
    require_projection(q)?;
    if p.shape() != q.shape() {
        return Err(Error::ShapeMismatch {
            op: "block_4x4",
            left: p.shape(),
            right: q.shape(),
        });
    }
    let d = p.rows();
    let id = ComplexMatrix::identity(d);
    let zero = ComplexMatrix::zeros(d, d);
    let p_c = id.sub(p)?;
    let q_c = id.sub(q)?;
    #[rustfmt::skip]
    let blocks = vec![
        p.clone(), p_c.clone(), zero.clone(), zero.clone(),
        p_c, p.clone(), zero.clone(), zero.clone(),
        zero.clone(), zero.clone(), q.clone(), q_c.clone(),
        zero.clone(), zero, q_c, q.clone(),
    ];
    MagicMatrix::new(4, blocks)
}

/// Direct sum of `v` with the `m x m` identity magic matrix.
pub fn glue_identity(v: &MagicMatrix, m: usize) -> MagicMatrix {
    let size = v.n + m;
    let d = v.d;
    let mut blocks = Vec::with_capacity(size * size);
    for i in 0..size {
        for j in 0..size {
            let b = if i < v.n && j < v.n {
                v.block(i, j).clone()
            } else if i == j {
                ComplexMatrix::identity(d)
            } else {
                ComplexMatrix::zeros(d, d)
            };
            blocks.push(b);
        }
    }
    MagicMatrix { n: size, d, blocks }
}

/// Permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(pivot) = (1..n)
            .rev()
            .find(|&i| current[i - 1] < current[i])
            .map(|i| i - 1)
        else {
            return out;
        };
        let successor = (pivot + 1..n)
            .rev()
            .find(|&j| current[j] > current[pivot])
            .unwrap();
        current.swap(pivot, successor);
        current[pivot + 1..].reverse();
        out.push(current.clone());
    }
}

/// Characteristic functions `v_ij = 1{σ(j) = i}` on `S_n`, as diagonal
/// `n! x n!` blocks over lexicographically ordered permutations.
pub fn permutation_magic(n: usize) -> Result<MagicMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if n > MAX_PERMUTATION_N {
        return Err(Error::TooLarge {
            what: "permutation_magic n",
            value: n,
            max: MAX_PERMUTATION_N,
        });
    }
    let perms = permutations(n);
    let mut blocks = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let diag: Vec<Complex64> = perms
                .iter()
                .map(|sigma| if sigma[j] == i { ONE } else { ZERO })
                .collect();
            blocks.push(ComplexMatrix::from_diagonal(&diag));
        }
    }
    MagicMatrix::new(n, blocks)
}
