//! Dense exact matrices over a [`FieldSpec`], the structured banded
//! constructors the classification is written in, and the coset-reduction
//! algorithm for lower-triangular Hankel matrices.
//!
//! Index conventions: element access through [`Mat::at`] / indexing is
//! 0-based, but the structured constructors speak the 1-based language of
//! the underlying theory: `toeplitz(.., i, x)` fills the entries `(s, t)`
//! with `t − s = i − 1` (1-based), `hankel(.., j, x)` fills `s + t = j`
//! (1-based), and `single_entry(.., s, t, x)` places `x` at the 1-based
//! position `(s, t)`.
//!
//! Two banded families recur constantly: `𝒰𝒯_n`, the upper-triangular
//! Toeplitz matrices `Σᵢ T_i(xᵢ)`, which form a commutative local ring
//! isomorphic to `K[u]/(uⁿ)` under `T_{i+1} ↔ uⁱ`, and `ℒℋ_n = Ĩ·𝒰𝒯_n`,
//! the lower-triangular Hankel matrices, which are symmetric.  Coefficient
//! extraction helpers for both live here, alongside [`lh_coset_reduce`].

use crate::error::{Error, Result};
use crate::field::FieldSpec;

// ---------------------------------------------------------------------------
// Mat
// ---------------------------------------------------------------------------

/// A dense `rows × cols` matrix over a finite field of characteristic two,
/// stored row-major with raw `u64` element encodings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    /// Owner field of every entry.
    pub field: FieldSpec,
    /// Number of rows (positive).
    pub rows: usize,
    /// Number of columns (positive).
    pub cols: usize,
    data: Vec<u64>,
}

impl Mat {
    /// The zero matrix.
    ///
    /// # Panics
    ///
    /// Panics if either dimension is zero.
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Mat {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Mat { field, rows, cols, data: vec![0; rows * cols] }
    }

    /// The identity matrix of size `n`.
    pub fn identity(field: FieldSpec, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from explicit rows.
    ///
    /// # Panics
    ///
    /// Panics on ragged input, empty input, or out-of-range entries.
    pub fn from_rows(field: FieldSpec, rows: &[Vec<u64>]) -> Mat {
        assert!(!rows.is_empty() && !rows[0].is_empty(), "matrix dimensions must be positive");
        let cols = rows[0].len();
        let mut m = Mat::zero(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    /// Builds a matrix entry by entry from a function of 0-based indices.
    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> Mat {
        let mut m = Mat::zero(field, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    /// Entry at 0-based `(r, c)`.
    #[inline]
    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    /// Sets the entry at 0-based `(r, c)`.
    ///
    /// # Panics
    ///
    /// Panics if the value is out of range for the owner field.
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        assert!(self.field.contains(v), "value {v} out of range");
        self.data[r * self.cols + c] = v;
    }

    /// True when square.
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Matrix sum.
    ///
    /// # Panics
    ///
    /// Panics on dimension or field mismatch.
    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.field, rhs.field, "matrices over different fields");
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| a ^ b).collect();
        Mat { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    /// Matrix product.
    ///
    /// # Panics
    ///
    /// Panics on dimension or field mismatch.
    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.field, rhs.field, "matrices over different fields");
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let f = self.field;
        let mut out = Mat::zero(f, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.at(k, c);
                    if b != 0 {
                        out.data[r * rhs.cols + c] ^= f.mul(a, b);
                    }
                }
            }
        }
        out
    }

    /// Scales every entry by `x`.
    pub fn scale(&self, x: u64) -> Mat {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, x)).collect();
        Mat { field: f, rows: self.rows, cols: self.cols, data }
    }

    /// Transpose.
    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.field, self.cols, self.rows, |r, c| self.at(c, r))
    }

    /// Congruence transform `MᵀAM` (with `A = self`).
    pub fn congruence(&self, m: &Mat) -> Mat {
        m.transpose().mul(self).mul(m)
    }

    /// Applies `f` to every entry, producing a matrix over `target`.
    pub fn map(&self, target: FieldSpec, mut f: impl FnMut(u64) -> u64) -> Mat {
        let mut out = Mat::zero(target, self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, f(self.at(r, c)));
            }
        }
        out
    }

    /// Copies a rectangular block with 0-based top-left corner `(r0, c0)`.
    ///
    /// # Panics
    ///
    /// Panics if the block exceeds the matrix.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        Mat::from_fn(self.field, rows, cols, |r, c| self.at(r0 + r, c0 + c))
    }

    /// Writes `block` into `self` with 0-based top-left corner `(r0, c0)`.
    ///
    /// # Panics
    ///
    /// Panics if the block exceeds the matrix or fields differ.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Mat) {
        assert_eq!(self.field, block.field, "matrices over different fields");
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.at(r, c));
            }
        }
    }

    /// Assembles a 2×2 block matrix.
    ///
    /// # Panics
    ///
    /// Panics unless the block dimensions are consistent.
    pub fn block2(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Mat {
        assert!(a.rows == b.rows && c.rows == d.rows && a.cols == c.cols && b.cols == d.cols);
        let mut out = Mat::zero(a.field, a.rows + c.rows, a.cols + b.cols);
        out.paste(0, 0, a);
        out.paste(0, a.cols, b);
        out.paste(a.rows, 0, c);
        out.paste(a.rows, a.cols, d);
        out
    }

    /// Assembles a block-diagonal matrix from square blocks.
    pub fn block_diag(blocks: &[&Mat]) -> Mat {
        assert!(!blocks.is_empty());
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zero(blocks[0].field, n, m);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.paste(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// True when the main diagonal is zero.
    ///
    /// # Panics
    ///
    /// Panics on non-square input.
    pub fn is_hollow(&self) -> bool {
        assert!(self.is_square(), "hollowness is defined for square matrices");
        (0..self.rows).all(|i| self.at(i, i) == 0)
    }

    /// True when equal to its transpose.
    ///
    /// # Panics
    ///
    /// Panics on non-square input.
    pub fn is_symmetric(&self) -> bool {
        assert!(self.is_square(), "symmetry is defined for square matrices");
        (0..self.rows).all(|r| (0..r).all(|c| self.at(r, c) == self.at(c, r)))
    }

    /// True when the matrix is the Gram matrix of an alternating form:
    /// symmetric and hollow (the two conditions characterize alternating
    /// forms in characteristic two).
    pub fn is_alternating_gram(&self) -> bool {
        self.is_symmetric() && self.is_hollow()
    }

    /// Rank, by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let f = self.field;
        let mut m = self.clone();
        let mut rank = 0usize;
        for col in 0..m.cols {
            let pivot = (rank..m.rows).find(|&r| m.at(r, col) != 0);
            let Some(p) = pivot else { continue };
            for c in 0..m.cols {
                let tmp = m.at(rank, c);
                m.set(rank, c, m.at(p, c));
                m.set(p, c, tmp);
            }
            let inv = f.inv(m.at(rank, col)).expect("pivot nonzero");
            for r in 0..m.rows {
                if r != rank && m.at(r, col) != 0 {
                    let factor = f.mul(m.at(r, col), inv);
                    for c in 0..m.cols {
                        let v = f.add(m.at(r, c), f.mul(factor, m.at(rank, c)));
                        m.set(r, c, v);
                    }
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// True when square and of full rank.
    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Inverse, by Gauss–Jordan elimination.
    ///
    /// # Errors
    ///
    /// [`Error::Singular`] when the matrix has no inverse.
    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::Singular);
        }
        let f = self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Mat::identity(f, n);
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| m.at(r, col) != 0) else {
                return Err(Error::Singular);
            };
            for c in 0..n {
                let (a, b) = (m.at(col, c), m.at(p, c));
                m.set(col, c, b);
                m.set(p, c, a);
                let (a, b) = (inv.at(col, c), inv.at(p, c));
                inv.set(col, c, b);
                inv.set(p, c, a);
            }
            let piv_inv = f.inv(m.at(col, col)).expect("pivot nonzero");
            for c in 0..n {
                m.set(col, c, f.mul(m.at(col, c), piv_inv));
                inv.set(col, c, f.mul(inv.at(col, c), piv_inv));
            }
            for r in 0..n {
                if r != col && m.at(r, col) != 0 {
                    let factor = m.at(r, col);
                    for c in 0..n {
                        let v = f.add(m.at(r, c), f.mul(factor, m.at(col, c)));
                        m.set(r, c, v);
                        let w = f.add(inv.at(r, c), f.mul(factor, inv.at(col, c)));
                        inv.set(r, c, w);
                    }
                }
            }
        }
        Ok(inv)
    }

    /// A basis of the right nullspace, as column vectors.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let mut m = self.clone();
        // Row-reduce, remembering pivot columns.
        let mut pivots: Vec<usize> = Vec::new();
        let mut rank = 0usize;
        for col in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| m.at(r, col) != 0) else { continue };
            for c in 0..m.cols {
                let (a, b) = (m.at(rank, c), m.at(p, c));
                m.set(rank, c, b);
                m.set(p, c, a);
            }
            let inv = f.inv(m.at(rank, col)).expect("pivot nonzero");
            for c in 0..m.cols {
                m.set(rank, c, f.mul(m.at(rank, c), inv));
            }
            for r in 0..m.rows {
                if r != rank && m.at(r, col) != 0 {
                    let factor = m.at(r, col);
                    for c in 0..m.cols {
                        let v = f.add(m.at(r, c), f.mul(factor, m.at(rank, c)));
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        let mut basis = Vec::new();
        for free in 0..m.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; m.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = m.at(r, free);
            }
            basis.push(v);
        }
        basis
    }

    /// Flat row-major copy of the entries, for deterministic ordering and
    /// hashing of Gram matrices.
    pub fn entries(&self) -> &[u64] {
        &self.data
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = u64;
    fn index(&self, (r, c): (usize, usize)) -> &u64 {
        &self.data[r * self.cols + c]
    }
}

impl std::fmt::Display for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let width = self.data.iter().map(|v| v.to_string().len()).max().unwrap_or(1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", self.at(r, c))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Structured constructors
// ---------------------------------------------------------------------------

/// The banded Toeplitz matrix `T_i(x)`: entries `(s, t)` (1-based) with
/// `t − s = i − 1` equal `x`, all others zero.  `i = 1` is the main
/// diagonal; `i ≤ 0` addresses subdiagonals.
pub fn toeplitz(field: FieldSpec, rows: usize, cols: usize, i: i64, x: u64) -> Mat {
    Mat::from_fn(field, rows, cols, |r, c| {
        if c as i64 - r as i64 == i - 1 {
            x
        } else {
            0
        }
    })
}

/// The banded Hankel matrix `H_j(x)`: entries `(s, t)` (1-based) with
/// `s + t = j` equal `x`.  When `j` lies outside `2..=rows+cols` no entry
/// satisfies the condition and the zero matrix is returned (the convention
/// used for out-of-range bands throughout the classification).
pub fn hankel(field: FieldSpec, rows: usize, cols: usize, j: i64, x: u64) -> Mat {
    Mat::from_fn(field, rows, cols, |r, c| {
        if (r + 1 + c + 1) as i64 == j {
            x
        } else {
            0
        }
    })
}

/// The anti-identity `Ĩ_m`: ones on the anti-diagonal.
pub fn anti_identity(field: FieldSpec, m: usize) -> Mat {
    hankel(field, m, m, m as i64 + 1, 1)
}

/// The single-entry matrix `E_{s,t}(x)` with `x` at the 1-based position
/// `(s, t)`.
///
/// # Panics
///
/// Panics when the position is out of range.
pub fn single_entry(field: FieldSpec, rows: usize, cols: usize, s: usize, t: usize, x: u64) -> Mat {
    assert!((1..=rows).contains(&s) && (1..=cols).contains(&t), "position out of range");
    let mut m = Mat::zero(field, rows, cols);
    m.set(s - 1, t - 1, x);
    m
}

/// The reflected transpose `A^τ = Ĩ_cols · Aᵀ · Ĩ_rows`; an involution that
/// preserves banded Toeplitz matrices band by band.
pub fn tau_transpose(a: &Mat) -> Mat {
    Mat::from_fn(a.field, a.cols, a.rows, |r, c| a.at(a.rows - 1 - c, a.cols - 1 - r))
}

/// Main diagonal of the congruence `XᵀAX` for symmetric `A`, via the
/// characteristic-two closed formula `(XᵀAX)_{ii} = Σ_s A_{ss}·X_{si}²`
/// (the off-diagonal contributions cancel in pairs).
///
/// # Panics
///
/// Panics when `A` is not symmetric or the dimensions are incompatible.
pub fn diag_of_conjugation(a: &Mat, x: &Mat) -> Vec<u64> {
    assert!(a.is_symmetric(), "A must be symmetric");
    assert_eq!(a.cols, x.rows, "dimension mismatch");
    let f = a.field;
    (0..x.cols)
        .map(|i| {
            let mut acc = 0u64;
            for s in 0..a.rows {
                let xsi = x.at(s, i);
                acc = f.add(acc, f.mul(a.at(s, s), f.mul(xsi, xsi)));
            }
            acc
        })
        .collect()
}

/// Strict upper triangle `Z` of a symmetric hollow `D`, so that
/// `D = Z + Zᵀ`.  Any other solution differs by a symmetric hollow
/// correction; the strict upper triangle is the deterministic choice.
///
/// # Errors
///
/// [`Error::Shape`] when `D` is not symmetric and hollow.
pub fn split_symmetric_hollow(d: &Mat) -> Result<Mat> {
    if !d.is_square() || !d.is_alternating_gram() {
        return Err(Error::Shape("expected a symmetric hollow matrix".into()));
    }
    Ok(Mat::from_fn(d.field, d.rows, d.cols, |r, c| if c > r { d.at(r, c) } else { 0 }))
}

/// Strict-upper-triangular part of any square matrix.
pub fn strict_upper(a: &Mat) -> Mat {
    assert!(a.is_square());
    Mat::from_fn(a.field, a.rows, a.cols, |r, c| if c > r { a.at(r, c) } else { 0 })
}

// ---------------------------------------------------------------------------
// 𝒰𝒯 and ℒℋ coefficient helpers
// ---------------------------------------------------------------------------

/// Builds `Σ_j T_{j+1}(coeffs[j])` of size `n×n`: the upper-triangular
/// Toeplitz matrix whose image in `K[u]/(uⁿ)` is `Σ coeffs[j]·uʲ`.
///
/// # Panics
///
/// Panics when more than `n` coefficients are supplied.
pub fn ut_from_coeffs(field: FieldSpec, n: usize, coeffs: &[u64]) -> Mat {
    assert!(coeffs.len() <= n, "too many coefficients");
    let mut m = Mat::zero(field, n, n);
    for (j, &x) in coeffs.iter().enumerate() {
        if x != 0 {
            m = m.add(&toeplitz(field, n, n, j as i64 + 1, x));
        }
    }
    m
}

/// Coefficient vector of an upper-triangular Toeplitz matrix
/// (`coeffs[j]` is the coefficient of `T_{j+1}`, i.e. of `uʲ`).
///
/// # Errors
///
/// [`Error::Shape`] when the matrix is not upper-triangular Toeplitz.
pub fn ut_coeffs(a: &Mat) -> Result<Vec<u64>> {
    if !a.is_square() {
        return Err(Error::Shape("expected a square matrix".into()));
    }
    let n = a.rows;
    let coeffs: Vec<u64> = (0..n).map(|j| a.at(0, j)).collect();
    let rebuilt = ut_from_coeffs(a.field, n, &coeffs);
    if &rebuilt != a {
        return Err(Error::Shape("expected an upper-triangular Toeplitz matrix".into()));
    }
    Ok(coeffs)
}

/// Builds `Σ_j H_{n+1+j}(coeffs[j])` of size `n×n`: the lower-triangular
/// Hankel matrix with anti-diagonal coefficients `coeffs[0]` (main
/// anti-diagonal) through `coeffs[n−1]` (bottom-right corner).
///
/// # Panics
///
/// Panics when more than `n` coefficients are supplied.
pub fn lh_from_coeffs(field: FieldSpec, n: usize, coeffs: &[u64]) -> Mat {
    assert!(coeffs.len() <= n, "too many coefficients");
    let mut m = Mat::zero(field, n, n);
    for (j, &x) in coeffs.iter().enumerate() {
        if x != 0 {
            m = m.add(&hankel(field, n, n, (n + 1 + j) as i64, x));
        }
    }
    m
}

/// Anti-diagonal coefficient vector of a lower-triangular Hankel matrix
/// (`coeffs[j]` is the coefficient of `H_{n+1+j}`).
///
/// # Errors
///
/// [`Error::Shape`] when the matrix is not lower-triangular Hankel.
pub fn lh_coeffs(a: &Mat) -> Result<Vec<u64>> {
    if !a.is_square() {
        return Err(Error::Shape("expected a square matrix".into()));
    }
    let n = a.rows;
    let coeffs: Vec<u64> = (0..n).map(|j| a.at(n - 1, j)).collect();
    let rebuilt = lh_from_coeffs(a.field, n, &coeffs);
    if &rebuilt != a {
        return Err(Error::Shape("expected a lower-triangular Hankel matrix".into()));
    }
    Ok(coeffs)
}

/// Leading index `r` of a nonzero lower-triangular Hankel matrix: the
/// 1-based position of its first nonzero anti-diagonal coefficient, so that
/// `A = Σ_{i=r..n} H_{n+i}(xᵢ)` with `x_r ≠ 0` and `rank(A) = n + 1 − r`.
/// Returns `None` for the zero matrix.
///
/// # Errors
///
/// [`Error::Shape`] when the matrix is not lower-triangular Hankel.
pub fn lh_leading_index(a: &Mat) -> Result<Option<usize>> {
    let coeffs = lh_coeffs(a)?;
    Ok(coeffs.iter().position(|&x| x != 0).map(|p| p + 1))
}

/// Coset reduction of a lower-triangular Hankel matrix: given nonzero
/// `A ∈ ℒℋ_n(K)` with leading index `r` and a shift `s ≥ 0` with
/// `r + 2s ≤ n`, produces `(C, B)` with `A·B² = C`, where `C` lies in the
/// normalized family `ℋ_{r+2s}(K)` (leading coefficient 1 at anti-diagonal
/// `n + r + 2s`, then free coefficients only at every second subsequent
/// anti-diagonal) and `B` is upper-triangular Toeplitz, invertible when
/// `s = 0`.
///
/// Construction: split the coefficients of `A` into even- and odd-offset
/// parts, take entrywise square roots of the even part into an invertible
/// `A₁ ∈ 𝒰𝒯_n`, and set `B = A₁⁻¹·T_{s+1}(1)`; then `A·B²` telescopes into
/// the normalized family.  `C` is unique (only `B` can vary).
///
/// # Errors
///
/// * [`Error::Shape`] — `A` is zero or not lower-triangular Hankel.
/// * [`Error::Unsupported`] — `r + 2s > n`, where the target family
///   degenerates.
pub fn lh_coset_reduce(a: &Mat, s: usize) -> Result<(Mat, Mat)> {
    let field = a.field;
    let n = a.rows;
    let coeffs = lh_coeffs(a)?;
    let Some(r) = coeffs.iter().position(|&x| x != 0).map(|p| p + 1) else {
        return Err(Error::Shape("coset reduction of the zero matrix".into()));
    };
    if r + 2 * s > n {
        return Err(Error::Unsupported(format!(
            "target index {} exceeds the matrix size {n}",
            r + 2 * s
        )));
    }
    // Even-offset coefficients x_r, x_{r+2}, …, square-rooted.
    let mut even_roots = Vec::new();
    let mut idx = r;
    while idx <= n {
        even_roots.push(field.sqrt(coeffs[idx - 1]));
        idx += 2;
    }
    let a1 = ut_from_coeffs(field, n, &even_roots);
    let b = a1.inverse().expect("leading coefficient nonzero").mul(&toeplitz(
        field,
        n,
        n,
        s as i64 + 1,
        1,
    ));
    let c = a.mul(&b).mul(&b);

    // The result must land in ℋ_{r+2s}: leading coefficient 1, and zero
    // coefficients at even offsets past the leading one.
    let c_coeffs = lh_coeffs(&c).expect("product of ℒℋ by 𝒰𝒯 stays ℒℋ");
    let lead = r + 2 * s;
    debug_assert_eq!(c_coeffs[lead - 1], 1);
    debug_assert!((0..lead - 1).all(|j| c_coeffs[j] == 0));
    debug_assert!((lead + 2..=n).step_by(2).all(|j| c_coeffs[j - 1] == 0));
    Ok((c, b))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn gf2() -> FieldSpec {
        FieldSpec::gf2()
    }
    fn gf4() -> FieldSpec {
        FieldSpec::canonical(2)
    }

    /// All matrices of the given shape over `field`, by odometer counting.
    fn all_mats(field: FieldSpec, rows: usize, cols: usize) -> Vec<Mat> {
        let q = field.order();
        let total = q.pow((rows * cols) as u32);
        (0..total)
            .map(|mut code| {
                Mat::from_fn(field, rows, cols, |_, _| {
                    let v = code % q;
                    code /= q;
                    v
                })
            })
            .collect()
    }

    /// All upper-triangular Toeplitz matrices of size n over `field`.
    fn all_ut(field: FieldSpec, n: usize) -> Vec<Mat> {
        let q = field.order();
        (0..q.pow(n as u32))
            .map(|mut code| {
                let coeffs: Vec<u64> = (0..n)
                    .map(|_| {
                        let v = code % q;
                        code /= q;
                        v
                    })
                    .collect();
                ut_from_coeffs(field, n, &coeffs)
            })
            .collect()
    }

    /// All lower-triangular Hankel matrices of size n over `field`.
    fn all_lh(field: FieldSpec, n: usize) -> Vec<Mat> {
        let q = field.order();
        (0..q.pow(n as u32))
            .map(|mut code| {
                let coeffs: Vec<u64> = (0..n)
                    .map(|_| {
                        let v = code % q;
                        code /= q;
                        v
                    })
                    .collect();
                lh_from_coeffs(field, n, &coeffs)
            })
            .collect()
    }

    #[test]
    fn toeplitz_main_diagonal_is_identity() {
        assert_eq!(toeplitz(gf2(), 2, 2, 1, 1), Mat::identity(gf2(), 2));
    }

    #[test]
    fn anti_identity_times_toeplitz_is_hankel() {
        // Ĩ_m·T_i(x) = H_{m+i}(x), checked over all bands of small shapes.
        for (rows, cols) in [(2usize, 2usize), (3, 3), (3, 4), (4, 3)] {
            let f = gf4();
            let anti = anti_identity(f, rows);
            for i in -(rows as i64)..=(cols as i64 + 1) {
                for x in [1u64, 0b10] {
                    let lhs = anti.mul(&toeplitz(f, rows, cols, i, x));
                    let rhs = hankel(f, rows, cols, rows as i64 + i, x);
                    assert_eq!(lhs, rhs, "rows={rows} cols={cols} i={i}");
                }
            }
        }
    }

    #[test]
    fn out_of_range_hankel_is_zero() {
        assert_eq!(hankel(gf2(), 2, 2, 5, 1), Mat::zero(gf2(), 2, 2));
        assert_eq!(hankel(gf2(), 2, 2, 1, 1), Mat::zero(gf2(), 2, 2));
    }

    #[test]
    fn tau_transpose_examples() {
        let f = gf4();
        assert_eq!(tau_transpose(&Mat::identity(f, 3)), Mat::identity(f, 3));
        // τ maps a band of an n×(n+1) Toeplitz matrix to the corresponding
        // band of the transposed shape: T_i(x)^τ for a 2×3 matrix is the
        // 3×2 Toeplitz matrix on the band i − 1.
        for i in -1..=3i64 {
            let t = toeplitz(f, 2, 3, i, 0b10);
            assert_eq!(tau_transpose(&t), toeplitz(f, 3, 2, i - 1, 0b10));
        }
        // Involution on arbitrary matrices.
        for a in all_mats(gf2(), 2, 3) {
            assert_eq!(tau_transpose(&tau_transpose(&a)), a);
        }
    }

    #[test]
    fn alternating_gram_predicates() {
        assert!(anti_identity(gf2(), 2).is_alternating_gram());
        assert!(!Mat::identity(gf2(), 2).is_hollow());
        assert!(Mat::identity(gf2(), 2).is_symmetric());
    }

    #[test]
    fn congruence_preserves_hollowness() {
        // XᵀAX stays hollow for every hollow symmetric A and arbitrary X.
        let f = gf2();
        for a in all_mats(f, 3, 3).into_iter().filter(Mat::is_alternating_gram) {
            for x in all_mats(f, 3, 3).into_iter().step_by(7) {
                assert!(a.congruence(&x).is_hollow());
            }
        }
    }

    #[test]
    fn ut_rank_is_determined_by_leading_index() {
        // rank(Σ_{i≥l} T_i(xᵢ)) = n + 1 − l when x_l ≠ 0.
        for field in [gf2(), gf4()] {
            for n in 1..=4usize {
                for a in all_ut(field, n) {
                    let coeffs = ut_coeffs(&a).unwrap();
                    match coeffs.iter().position(|&x| x != 0) {
                        None => assert_eq!(a.rank(), 0),
                        Some(l0) => assert_eq!(a.rank(), n - l0),
                    }
                }
            }
        }
    }

    #[test]
    fn rank_of_banded_products() {
        // rk(AB) = rk(A) + rk(B) − n whenever A ∈ ℒℋ_n, B ∈ 𝒰𝒯_n, AB ≠ 0.
        for field in [gf2(), gf4()] {
            let n = 3usize;
            for a in all_lh(field, n) {
                for b in all_ut(field, n) {
                    let ab = a.mul(&b);
                    if ab != Mat::zero(field, n, n) {
                        assert_eq!(ab.rank() + n, a.rank() + b.rank());
                    }
                }
            }
        }
    }

    #[test]
    fn inverse_of_anti_identity_is_itself() {
        let anti = anti_identity(gf4(), 4);
        assert_eq!(anti.inverse().unwrap(), anti);
    }

    #[test]
    fn inverse_round_trips() {
        let f = gf4();
        for a in all_mats(f, 2, 2) {
            match a.inverse() {
                Ok(inv) => {
                    assert_eq!(a.mul(&inv), Mat::identity(f, 2));
                    assert_eq!(inv.mul(&a), Mat::identity(f, 2));
                }
                Err(Error::Singular) => assert!(a.rank() < 2),
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let f = gf4();
        for a in all_mats(f, 2, 3).into_iter().step_by(5) {
            let ns = a.nullspace();
            assert_eq!(ns.len(), 3 - a.rank());
            for v in ns {
                for r in 0..a.rows {
                    let acc = v
                        .iter()
                        .enumerate()
                        .fold(0, |acc, (c, &vc)| f.add(acc, f.mul(a.at(r, c), vc)));
                    assert_eq!(acc, 0);
                }
            }
        }
    }

    #[test]
    fn diag_of_conjugation_matches_full_product() {
        // Deterministic sweep standing in for random sampling: all symmetric
        // 3×3 over GF(4) would be large, so stride through them.
        let f = gf4();
        let symmetric: Vec<Mat> =
            all_mats(f, 3, 3).into_iter().filter(Mat::is_symmetric).step_by(11).collect();
        let xs: Vec<Mat> = all_mats(f, 3, 3).into_iter().step_by(1571).collect();
        let mut checked = 0usize;
        for a in &symmetric {
            for x in &xs {
                let fast = diag_of_conjugation(a, x);
                let full = a.congruence(x);
                let slow: Vec<u64> = (0..3).map(|i| full.at(i, i)).collect();
                assert_eq!(fast, slow);
                checked += 1;
            }
        }
        assert!(checked > 100);
        // Hollow A gives the zero diagonal (anti_identity of even size is
        // hollow; odd sizes have a center diagonal entry and are not).
        let hollow = anti_identity(f, 4);
        let x = Mat::from_rows(
            f,
            &[vec![1, 2, 3, 0], vec![0, 1, 2, 3], vec![3, 0, 1, 2], vec![2, 3, 0, 1]],
        );
        assert_eq!(diag_of_conjugation(&hollow, &x), vec![0, 0, 0, 0]);
        let sym_hollow = x.add(&x.transpose());
        assert_eq!(diag_of_conjugation(&sym_hollow, &x), vec![0, 0, 0, 0]);
    }

    #[test]
    fn split_symmetric_hollow_reassembles() {
        let f = gf2();
        assert_eq!(
            split_symmetric_hollow(&Mat::zero(f, 3, 3)).unwrap(),
            Mat::zero(f, 3, 3)
        );
        assert_eq!(
            split_symmetric_hollow(&anti_identity(f, 2)).unwrap(),
            single_entry(f, 2, 2, 1, 2, 1)
        );
        for d in all_mats(gf2(), 4, 4).into_iter().filter(Mat::is_alternating_gram).step_by(3) {
            let z = split_symmetric_hollow(&d).unwrap();
            assert_eq!(z.add(&z.transpose()), d);
            assert_eq!(z, strict_upper(&z));
        }
        assert!(split_symmetric_hollow(&Mat::identity(f, 2)).is_err());
    }

    #[test]
    fn ut_products_commute() {
        for field in [gf2(), gf4()] {
            let mats = all_ut(field, 3);
            for a in &mats {
                for b in &mats {
                    assert_eq!(a.mul(b), b.mul(a));
                }
            }
        }
    }

    #[test]
    fn lh_matrices_are_symmetric() {
        for a in all_lh(gf4(), 3) {
            assert!(a.is_symmetric());
        }
    }

    #[test]
    fn lh_coset_reduce_fixed_points() {
        let f = gf2();
        // A = H₃(1) at n = 2 is already normalized in ℋ₁.
        let a = hankel(f, 2, 2, 3, 1);
        let (c, b) = lh_coset_reduce(&a, 0).unwrap();
        assert_eq!(c, a);
        assert_eq!(b, Mat::identity(f, 2));
        // A = H₄(1) at n = 2 is already normalized in ℋ₂.
        let a = hankel(f, 2, 2, 4, 1);
        let (c, b) = lh_coset_reduce(&a, 0).unwrap();
        assert_eq!(c, a);
        assert_eq!(b, Mat::identity(f, 2));
    }

    #[test]
    fn lh_coset_reduce_normalizes_leading_coefficient() {
        // n = 2 over GF(4), A = H₃(ω): B = T₁(sqrt(ω)⁻¹), C = H₃(1).
        let f = gf4();
        let omega = 0b10u64;
        let a = hankel(f, 2, 2, 3, omega);
        let (c, b) = lh_coset_reduce(&a, 0).unwrap();
        assert_eq!(c, hankel(f, 2, 2, 3, 1));
        let expected_b = toeplitz(f, 2, 2, 1, f.inv(f.sqrt(omega)).unwrap());
        assert_eq!(b, expected_b);
        assert_eq!(a.mul(&b).mul(&b), c);
    }

    #[test]
    fn lh_coset_reduce_rejects_bad_inputs() {
        let f = gf2();
        assert!(matches!(
            lh_coset_reduce(&Mat::zero(f, 2, 2), 0),
            Err(Error::Shape(_))
        ));
        // r = 1 at n = 2: s = 1 would need target index 3 > 2.
        let a = hankel(f, 2, 2, 3, 1);
        assert!(matches!(lh_coset_reduce(&a, 1), Err(Error::Unsupported(_))));
        // Not lower-triangular Hankel at all.
        assert!(matches!(
            lh_coset_reduce(&Mat::identity(f, 2), 0),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn lh_coset_reduce_round_trip_and_uniqueness() {
        // For every nonzero A and admissible s: A·B² = C, and any other
        // B′ ∈ 𝒰𝒯 with A·B′² in the same normalized family gives the same C.
        for field in [gf2(), gf4()] {
            for n in 1..=3usize {
                let uts = all_ut(field, n);
                for a in all_lh(field, n) {
                    let Ok(Some(r)) = lh_leading_index(&a) else { continue };
                    for s in 0..=n {
                        if r + 2 * s > n {
                            continue;
                        }
                        let (c, b) = lh_coset_reduce(&a, s).unwrap();
                        assert_eq!(a.mul(&b).mul(&b), c);
                        if s == 0 {
                            assert!(b.is_invertible());
                        }
                        let lead = r + 2 * s;
                        for b2 in &uts {
                            let c2 = a.mul(b2).mul(b2);
                            let coeffs = lh_coeffs(&c2).unwrap();
                            let in_family = coeffs[lead - 1] == 1
                                && (0..lead - 1).all(|j| coeffs[j] == 0)
                                && (lead + 2..=n).step_by(2).all(|j| coeffs[j - 1] == 0);
                            if in_family {
                                assert_eq!(c2, c, "C is unique for A with r={r}, s={s}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn block_assembly_round_trips() {
        let f = gf4();
        let a = Mat::from_rows(f, &[vec![1, 2], vec![3, 0]]);
        let b = Mat::from_rows(f, &[vec![2], vec![1]]);
        let c = Mat::from_rows(f, &[vec![0, 1]]);
        let d = Mat::from_rows(f, &[vec![3]]);
        let m = Mat::block2(&a, &b, &c, &d);
        assert_eq!(m.submatrix(0, 0, 2, 2), a);
        assert_eq!(m.submatrix(0, 2, 2, 1), b);
        assert_eq!(m.submatrix(2, 0, 1, 2), c);
        assert_eq!(m.submatrix(2, 2, 1, 1), d);
        let bd = Mat::block_diag(&[&a, &d]);
        assert_eq!(bd.at(2, 2), 3);
        assert_eq!(bd.at(0, 2), 0);
    }
}
