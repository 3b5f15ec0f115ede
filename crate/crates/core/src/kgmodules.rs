//! The eight module families for the Klein four-group over a perfect field
//! of characteristic two.
//!
//! Each family fixes one ambient basis once and for all; every Gram matrix,
//! action matrix and endomorphism produced by this crate refers to that
//! basis.  The families and their dimensions:
//!
//! | family       | module                  | dimension |
//! |--------------|-------------------------|-----------|
//! | `TrivialSq`  | trivial ⊕ trivial       | 2         |
//! | `Regular`    | group algebra kG        | 4         |
//! | `RegularSq`  | kG ⊕ kG                 | 8         |
//! | `AnBn(n)`    | Aₙ ⊕ Bₙ                 | 4n+2      |
//! | `Cnf(n, f)`  | Cₙ(f)                   | 2mn       |
//! | `CnfSq(n,f)` | Cₙ(f) ⊕ Cₙ(f)           | 4mn       |
//! | `CnInf(n)`   | Cₙ(∞)                   | 2n        |
//! | `CnInfSq(n)` | Cₙ(∞) ⊕ Cₙ(∞)           | 4n        |
//!
//! Here `m` is the degree of the monic irreducible `f`.  Besides the actions
//! themselves the module provides the structural data the classification
//! rests on: endomorphism-ring bases (closed form and independently via a
//! generic commutant solver), the companion-to-Jordan transition for
//! `Cₙ(f)`, the conjugation maps `𝒟(X)` and `𝒱(X)` between structured
//! matrices over the extension `K = k[ε]` and matrices over `k`, and
//! explicit self-duality witnesses.

use crate::error::{Error, Result};
use crate::field::{make_extension, ExtensionData, FieldSpec, Poly};
use crate::matrix::{anti_identity, single_entry, tau_transpose, toeplitz, Mat};

// ---------------------------------------------------------------------------
// Module specifications
// ---------------------------------------------------------------------------

/// One of the eight candidate families of indecomposable symplectic modules.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Family {
    /// Trivial module squared, dimension 2.
    TrivialSq,
    /// The group algebra kG, dimension 4.
    Regular,
    /// kG ⊕ kG, dimension 8.
    RegularSq,
    /// Aₙ ⊕ Bₙ, dimension 4n+2.
    AnBn(usize),
    /// Cₙ(f) for a monic irreducible f, dimension 2·deg(f)·n.
    Cnf(usize, Poly),
    /// Cₙ(f) ⊕ Cₙ(f), dimension 4·deg(f)·n.
    CnfSq(usize, Poly),
    /// Cₙ(∞), dimension 2n.
    CnInf(usize),
    /// Cₙ(∞) ⊕ Cₙ(∞), dimension 4n.
    CnInfSq(usize),
}

/// A module family together with its base field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleSpec {
    /// The base field `k`.
    pub field: FieldSpec,
    /// The family (with parameters validated at construction).
    pub family: Family,
}

impl ModuleSpec {
    /// Builds a validated module specification.
    ///
    /// # Errors
    ///
    /// * [`Error::Shape`] — `n = 0`, or a parametrizing polynomial lives over
    ///   the wrong field.
    /// * [`Error::NotMonic`] / [`Error::Reducible`] — bad `f` for `Cnf`-type
    ///   families.
    /// * [`Error::Unsupported`] — the splitting field of `f` would exceed the
    ///   32-bit field degree cap.
    pub fn new(field: FieldSpec, family: Family) -> Result<ModuleSpec> {
        match &family {
            Family::TrivialSq | Family::Regular | Family::RegularSq => {}
            Family::AnBn(n) | Family::CnInf(n) | Family::CnInfSq(n) => {
                if *n == 0 {
                    return Err(Error::Shape("module parameter n must be positive".into()));
                }
            }
            Family::Cnf(n, f) | Family::CnfSq(n, f) => {
                if *n == 0 {
                    return Err(Error::Shape("module parameter n must be positive".into()));
                }
                if f.field != field {
                    return Err(Error::Shape(
                        "parametrizing polynomial lives over a different field".into(),
                    ));
                }
                // Re-run the extension checks eagerly so that later
                // `jordan_data` calls cannot fail on user input.
                make_extension(field, f)?;
            }
        }
        Ok(ModuleSpec { field, family })
    }

    /// Dimension of the module over `k`.
    pub fn dim(&self) -> usize {
        match &self.family {
            Family::TrivialSq => 2,
            Family::Regular => 4,
            Family::RegularSq => 8,
            Family::AnBn(n) => 4 * n + 2,
            Family::Cnf(n, f) => 2 * self.poly_degree(f) * n,
            Family::CnfSq(n, f) => 4 * self.poly_degree(f) * n,
            Family::CnInf(n) => 2 * n,
            Family::CnInfSq(n) => 4 * n,
        }
    }

    /// Degree `m` of the parametrizing polynomial (1 for families without one).
    pub fn m(&self) -> usize {
        match &self.family {
            Family::Cnf(_, f) | Family::CnfSq(_, f) => self.poly_degree(f),
            _ => 1,
        }
    }

    /// True for the doubled families `M ⊕ M`.
    pub fn is_squared(&self) -> bool {
        matches!(
            self.family,
            Family::TrivialSq | Family::RegularSq | Family::CnfSq(_, _) | Family::CnInfSq(_)
        )
    }

    fn poly_degree(&self, f: &Poly) -> usize {
        f.degree().expect("validated nonzero")
    }
}

/// The two commuting involutions generating the group action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    /// Action of the first generator.
    pub g1: Mat,
    /// Action of the second generator.
    pub g2: Mat,
}

// ---------------------------------------------------------------------------
// Group algebra arithmetic
// ---------------------------------------------------------------------------
//
// Elements of kG are stored as `[a, b, c, d]` for a·1 + b·g₁ + c·g₂ + d·g₁g₂.
// With the basis indexed by the bit pairs {00, 01, 10, 11} the product index
// is the XOR of the factor indices, which keeps the convolution below free of
// case analysis.

/// Product of two group-algebra elements.
pub fn kg_mul(field: FieldSpec, x: [u64; 4], y: [u64; 4]) -> [u64; 4] {
    let mut z = [0u64; 4];
    for i in 0..4 {
        for j in 0..4 {
            z[i ^ j] = field.add(z[i ^ j], field.mul(x[i], y[j]));
        }
    }
    z
}

/// Augmentation `a + b + c + d`; an element is a unit exactly when its
/// augmentation is nonzero.
pub fn kg_augmentation(field: FieldSpec, x: [u64; 4]) -> u64 {
    x.iter().fold(0, |acc, &v| field.add(acc, v))
}

/// Inverse in kG.  Squares are central scalars (`x² = |x|²·1`), so the
/// inverse of a unit is `|x|⁻²·x`.
///
/// # Errors
///
/// [`Error::ZeroInverse`] when the augmentation vanishes (a nilpotent).
pub fn kg_inv(field: FieldSpec, x: [u64; 4]) -> Result<[u64; 4]> {
    let aug = kg_augmentation(field, x);
    let s = field.inv(field.mul(aug, aug))?;
    Ok([
        field.mul(s, x[0]),
        field.mul(s, x[1]),
        field.mul(s, x[2]),
        field.mul(s, x[3]),
    ])
}

/// The 4×4 matrix of multiplication by `x` on kG in the basis
/// {1, g₁, g₂, g₁g₂}: entry `(i, j)` is the coefficient `x[i XOR j]`.
pub fn kg_hat(field: FieldSpec, x: [u64; 4]) -> Mat {
    Mat::from_fn(field, 4, 4, |r, c| x[r ^ c])
}

/// Recovers the group-algebra element from its multiplication matrix
/// (the top row), validating the full matrix shape.
///
/// # Errors
///
/// [`Error::Shape`] when the matrix is not a multiplication matrix.
pub fn kg_from_hat(m: &Mat) -> Result<[u64; 4]> {
    if m.rows != 4 || m.cols != 4 {
        return Err(Error::Shape("group algebra matrices are 4x4".into()));
    }
    let x = [m.at(0, 0), m.at(0, 1), m.at(0, 2), m.at(0, 3)];
    if kg_hat(m.field, x) != *m {
        return Err(Error::Shape(
            "matrix is not multiplication by a group-algebra element".into(),
        ));
    }
    Ok(x)
}

// ---------------------------------------------------------------------------
// Companion matrices and actions
// ---------------------------------------------------------------------------

/// Companion matrix of `fⁿ`: ones on the first sub-diagonal, and the
/// coefficients `a₀, …, a_{mn−1}` of `fⁿ = a₀ + a₁T + … + T^{mn}` down the
/// final column.
///
/// # Panics
///
/// Panics if `f` is not monic of positive degree or `n = 0`.
pub fn companion(f: &Poly, n: usize) -> Mat {
    assert!(f.is_monic() && n > 0, "companion needs a monic f and n >= 1");
    let fname = f.pow(n);
    let mn = fname.degree().expect("monic power is nonzero");
    let mut pi = Mat::zero(f.field, mn, mn);
    for r in 1..mn {
        pi.set(r, r - 1, 1);
    }
    for r in 0..mn {
        pi.set(r, mn - 1, fname.coeff(r));
    }
    pi
}

/// Evaluates a polynomial (coefficients in the matrix's field) at a square
/// matrix by Horner's rule.
fn poly_at_matrix(coeffs: &[u64], m: &Mat) -> Mat {
    let id = Mat::identity(m.field, m.rows);
    let mut acc = Mat::zero(m.field, m.rows, m.rows);
    for &c in coeffs.iter().rev() {
        acc = acc.mul(m).add(&id.scale(c));
    }
    acc
}

/// The group action of the family, in its fixed ambient basis.
///
/// For `AnBn` this is the reordered sum basis in which both generators are
/// unipotent with a single super-diagonal block; for the squared families it
/// is the block basis (first copy's top half, second copy's top half, first
/// copy's bottom half, second copy's bottom half) except for `RegularSq`,
/// where the two copies of kG are simply concatenated.
pub fn action(spec: &ModuleSpec) -> GroupAction {
    let k = spec.field;
    match &spec.family {
        Family::TrivialSq => GroupAction {
            g1: Mat::identity(k, 2),
            g2: Mat::identity(k, 2),
        },
        Family::Regular => GroupAction {
            g1: kg_hat(k, [0, 1, 0, 0]),
            g2: kg_hat(k, [0, 0, 1, 0]),
        },
        Family::RegularSq => {
            let a = action(&ModuleSpec::new(k, Family::Regular).expect("valid"));
            GroupAction {
                g1: Mat::block_diag(&[&a.g1, &a.g1]),
                g2: Mat::block_diag(&[&a.g2, &a.g2]),
            }
        }
        Family::AnBn(n) => {
            let h = 2 * n + 1;
            let id = Mat::identity(k, h);
            let mut sup2 = id.clone();
            // In characteristic two the (n+1, n+1) entry of I + E_{n+1,n+1}
            // cancels.
            sup2.set(*n, *n, 0);
            GroupAction {
                g1: unipotent(&id, &toeplitz(k, h, h, 2, 1)),
                g2: unipotent(&id, &sup2),
            }
        }
        Family::Cnf(n, f) => {
            let mn = spec.m() * n;
            let id = Mat::identity(k, mn);
            GroupAction {
                g1: unipotent(&id, &id),
                g2: unipotent(&id, &companion(f, *n)),
            }
        }
        Family::CnfSq(n, f) => {
            let mn = spec.m() * n;
            let id = Mat::identity(k, 2 * mn);
            let pi = companion(f, *n);
            GroupAction {
                g1: unipotent(&id, &id),
                g2: unipotent(&id, &Mat::block_diag(&[&pi, &pi])),
            }
        }
        Family::CnInf(n) => {
            let id = Mat::identity(k, *n);
            GroupAction {
                g1: unipotent(&id, &toeplitz(k, *n, *n, 2, 1)),
                g2: unipotent(&id, &id),
            }
        }
        Family::CnInfSq(n) => {
            let id = Mat::identity(k, 2 * n);
            let t2 = toeplitz(k, *n, *n, 2, 1);
            GroupAction {
                g1: unipotent(&id, &Mat::block_diag(&[&t2, &t2])),
                g2: unipotent(&id, &id),
            }
        }
    }
}

/// `(I P; 0 I)` for a square block `P` the size of `id`.
fn unipotent(id: &Mat, p: &Mat) -> Mat {
    let zero = Mat::zero(id.field, id.rows, id.rows);
    Mat::block2(id, p, &zero, id)
}

/// The basis change `diag(Ĩₙ, Ĩₙ)` (respectively four blocks for the squared
/// family) that carries `Cₙ(∞)` onto `Cₙ(T)` with the two generators
/// exchanged.  Symmetric and involutive.
///
/// # Panics
///
/// Panics when the family is not `CnInf` or `CnInfSq`.
pub fn cn_inf_swap(spec: &ModuleSpec) -> Mat {
    let rev = |n: usize| anti_identity(spec.field, n);
    match &spec.family {
        Family::CnInf(n) => Mat::block_diag(&[&rev(*n), &rev(*n)]),
        Family::CnInfSq(n) => Mat::block_diag(&[&rev(*n), &rev(*n), &rev(*n), &rev(*n)]),
        _ => panic!("basis swap only exists for the Cn(infinity) families"),
    }
}

// ---------------------------------------------------------------------------
// Jordan data for Cₙ(f)
// ---------------------------------------------------------------------------

/// Transition data between the companion matrix `Π` of `fⁿ` over `k` and its
/// Jordan form `J` over the splitting field `K = k[ε]`.
///
/// The conjugating matrix `V` satisfies `V·Π = J·V`; its first column is `m`
/// stacked copies of the last unit vector, and row block `t` is `σ_t`
/// applied to row block 1.
#[derive(Debug, Clone)]
pub struct JordanData {
    /// The extension `K = k[ε]` with its embeddings.
    pub ext: ExtensionData,
    /// Jordan block size (the module parameter `n`).
    pub n: usize,
    /// Companion matrix of `fⁿ` over `k`.
    pub pi: Mat,
    /// `Π` with entries embedded into `K`.
    pub pi_ext: Mat,
    /// `diag(Jₙ(σ₁(ε)), …, Jₙ(σ_m(ε)))` over `K`.
    pub j: Mat,
    /// The conjugating matrix over `K`.
    pub v: Mat,
    /// Cached inverse of `v`.
    pub v_inv: Mat,
}

/// Builds the Jordan transition data for `Cₙ(f)`.
///
/// # Errors
///
/// Propagates the extension-construction errors for invalid `f`; all
/// structural facts (invertibility of `V`, the intertwining identity, the
/// vanishing of `fⁿ` at `Π` and `J`) are asserted, since their failure would
/// be a bug rather than an input condition.
pub fn jordan_data(k: FieldSpec, n: usize, f: &Poly) -> Result<JordanData> {
    let ext = make_extension(k, f)?;
    let m = ext.m;
    let mn = m * n;
    let kk = ext.ext;

    let pi = companion(f, n);
    let pi_ext = pi.map(kk, |v| ext.embed(v));

    // J = diag(Jₙ(σᵢ(ε))) with Jₙ(α) = α·Iₙ + T₂(1).
    let mut jblocks = Vec::with_capacity(m);
    for i in 1..=m {
        let alpha = ext.sigma(i, ext.epsilon);
        let block = Mat::identity(kk, n)
            .scale(alpha)
            .add(&toeplitz(kk, n, n, 2, 1));
        jblocks.push(block);
    }
    let j = Mat::block_diag(&jblocks.iter().collect::<Vec<_>>());

    // V column by column: the first column is m stacked copies of eₙ and
    // each later column is J times the previous one.
    let mut v = Mat::zero(kk, mn, mn);
    let mut col = vec![0u64; mn];
    for t in 0..m {
        col[t * n + n - 1] = 1;
    }
    for s in 0..mn {
        for (r, &x) in col.iter().enumerate() {
            v.set(r, s, x);
        }
        if s + 1 < mn {
            col = (0..mn)
                .map(|r| {
                    col.iter()
                        .enumerate()
                        .fold(0, |acc, (c, &x)| kk.add(acc, kk.mul(j.at(r, c), x)))
                })
                .collect();
        }
    }
    let v_inv = v.inverse().expect("V is invertible by construction");

    // Structural assertions.
    assert_eq!(v.mul(&pi_ext), j.mul(&v), "V does not intertwine Pi and J");
    let fn_coeffs = f.pow(n).coeffs.clone();
    assert!(
        poly_at_matrix(&fn_coeffs, &pi) == Mat::zero(k, mn, mn),
        "f^n does not annihilate Pi"
    );
    let fn_ext: Vec<u64> = fn_coeffs.iter().map(|&c| ext.embed(c)).collect();
    assert!(
        poly_at_matrix(&fn_ext, &j) == Mat::zero(kk, mn, mn),
        "f^n does not annihilate J"
    );
    for t in 2..=m {
        for q in 0..n {
            for s in 0..mn {
                assert_eq!(
                    v.at((t - 1) * n + q, s),
                    ext.sigma(t, v.at(q, s)),
                    "row block {t} of V is not sigma_{t} of block 1"
                );
            }
        }
    }

    Ok(JordanData {
        ext,
        n,
        pi,
        pi_ext,
        j,
        v,
        v_inv,
    })
}

/// `𝒟(X) = diag(X, σ₂(X), …, σ_m(X))` over `K` for an n×n matrix `X`.
///
/// # Panics
///
/// Panics on a shape or field mismatch.
pub fn script_d(jd: &JordanData, x: &Mat) -> Mat {
    assert_eq!((x.rows, x.cols), (jd.n, jd.n), "X must be n x n");
    assert_eq!(x.field, jd.ext.ext, "X must live over the extension");
    let blocks: Vec<Mat> = (1..=jd.ext.m)
        .map(|i| x.map(jd.ext.ext, |v| jd.ext.sigma(i, v)))
        .collect();
    Mat::block_diag(&blocks.iter().collect::<Vec<_>>())
}

/// `𝒱(X) = Vᵀ·𝒟(X)·V`, down-cast to the base field.
///
/// The Galois argument guarantees every entry lands in the embedded copy of
/// `k`; a failure to lift signals corrupted σ data.
///
/// # Errors
///
/// [`Error::NotInBaseField`] if an entry fails to lift.
pub fn script_v(jd: &JordanData, x: &Mat) -> Result<Mat> {
    let full = jd.v.transpose().mul(&script_d(jd, x)).mul(&jd.v);
    lift_matrix(&jd.ext, &full)
}

/// A centralizer element `V⁻¹·𝒟(X)·V`, down-cast to the base field.
///
/// # Errors
///
/// [`Error::NotInBaseField`] if an entry fails to lift.
pub fn centralizer_element(jd: &JordanData, x: &Mat) -> Result<Mat> {
    let full = jd.v_inv.mul(&script_d(jd, x)).mul(&jd.v);
    lift_matrix(&jd.ext, &full)
}

fn lift_matrix(ext: &ExtensionData, m: &Mat) -> Result<Mat> {
    let mut out = Mat::zero(ext.base, m.rows, m.cols);
    for r in 0..m.rows {
        for c in 0..m.cols {
            out.set(r, c, ext.lift(m.at(r, c))?);
        }
    }
    Ok(out)
}

/// Recovers `X` from `B = 𝒱(X)`, validating the `𝒟`-block structure.
///
/// # Errors
///
/// [`Error::Shape`] when `B` is not of the form `𝒱(X)`.
pub fn w_param(jd: &JordanData, b: &Mat) -> Result<Mat> {
    let b_ext = b.map(jd.ext.ext, |v| jd.ext.embed(v));
    let full = jd
        .v_inv
        .transpose()
        .mul(&b_ext)
        .mul(&jd.v_inv);
    extract_d_block(jd, &full)
}

/// Recovers `X` from `A = V⁻¹·𝒟(X)·V`, validating the `𝒟`-block structure.
///
/// # Errors
///
/// [`Error::Shape`] when `A` is not a centralizer element.
pub fn centralizer_param(jd: &JordanData, a: &Mat) -> Result<Mat> {
    let a_ext = a.map(jd.ext.ext, |v| jd.ext.embed(v));
    let full = jd.v.mul(&a_ext).mul(&jd.v_inv);
    extract_d_block(jd, &full)
}

fn extract_d_block(jd: &JordanData, full: &Mat) -> Result<Mat> {
    let x = full.submatrix(0, 0, jd.n, jd.n);
    if script_d(jd, &x) != *full {
        return Err(Error::Shape("matrix does not conjugate to a sigma-block diagonal".into()));
    }
    Ok(x)
}

/// Membership test for `𝒲 = {B : Πᵀ·B = B·Π}`.
pub fn in_w_space(pi: &Mat, b: &Mat) -> bool {
    pi.transpose().mul(b) == b.mul(pi)
}

/// Membership test for the centralizer `{A : A·Π = Π·A}`.
pub fn in_centralizer(pi: &Mat, a: &Mat) -> bool {
    a.mul(pi) == pi.mul(a)
}

/// The residue-field image of an endomorphism `(A B; 0 A)` of `Cₙ(f)`:
/// the `(1,1)` coefficient of the Toeplitz parameter `X` of `A`, an element
/// of `K`.  The map is a ring epimorphism onto `K` whose kernel is exactly
/// the nilpotent part, so the endomorphism is invertible precisely when the
/// image is nonzero.
///
/// # Errors
///
/// [`Error::Shape`] when the matrix is not an endomorphism of the stated
/// block shape.
pub fn residue_field_map(jd: &JordanData, m: &Mat) -> Result<u64> {
    let mn = jd.ext.m * jd.n;
    if m.rows != 2 * mn || m.cols != 2 * mn {
        return Err(Error::Shape("endomorphism has the wrong dimension".into()));
    }
    let a = m.submatrix(0, 0, mn, mn);
    let d = m.submatrix(mn, mn, mn, mn);
    let c = m.submatrix(mn, 0, mn, mn);
    if a != d || c != Mat::zero(m.field, mn, mn) || !in_centralizer(&jd.pi, &a) {
        return Err(Error::Shape("not an endomorphism of Cn(f)".into()));
    }
    let x = centralizer_param(jd, &a)?;
    Ok(x.at(0, 0))
}

// ---------------------------------------------------------------------------
// Endomorphism rings
// ---------------------------------------------------------------------------

/// A `k`-basis of `End(M)` from the closed-form block descriptions.
///
/// Dimensions: 4 for `TrivialSq` and `Regular`, 16 for `RegularSq`,
/// `2 + 2n + (2n+1)²` for `AnBn(n)`, `mn + (mn)²` for `Cnf`,
/// `4mn + 4(mn)²` for `CnfSq`, and the `m = 1` specializations for the
/// `CnInf` families.
pub fn end_basis(spec: &ModuleSpec) -> Vec<Mat> {
    let k = spec.field;
    match &spec.family {
        Family::TrivialSq => (0..2)
            .flat_map(|r| (0..2).map(move |c| (r, c)))
            .map(|(r, c)| single_entry(k, 2, 2, r + 1, c + 1, 1))
            .collect(),
        Family::Regular => vec![
            kg_hat(k, [1, 0, 0, 0]),
            kg_hat(k, [0, 1, 0, 0]),
            kg_hat(k, [0, 0, 1, 0]),
            kg_hat(k, [0, 0, 0, 1]),
        ],
        Family::RegularSq => {
            let mut basis = Vec::with_capacity(16);
            for br in 0..2 {
                for bc in 0..2 {
                    for unit in 0..4 {
                        let mut x = [0u64; 4];
                        x[unit] = 1;
                        let mut m = Mat::zero(k, 8, 8);
                        m.paste(4 * br, 4 * bc, &kg_hat(k, x));
                        basis.push(m);
                    }
                }
            }
            basis
        }
        Family::AnBn(n) => {
            let n = *n;
            let h = 2 * n + 1;
            let dim = 4 * n + 2;
            let mut basis = Vec::new();
            // α: identity on the first block of M₁ and the first block of M₄.
            let mut alpha = Mat::zero(k, dim, dim);
            alpha.paste(0, 0, &Mat::identity(k, n));
            alpha.paste(h, h, &Mat::identity(k, n + 1));
            basis.push(alpha);
            // β: identity on the complementary blocks.
            let mut beta = Mat::zero(k, dim, dim);
            beta.paste(n, n, &Mat::identity(k, n + 1));
            beta.paste(h + n + 1, h + n + 1, &Mat::identity(k, n));
            basis.push(beta);
            // Σ bands: an n×(n+1) Toeplitz band in M₁ paired with its
            // τ-transpose in M₄.
            for band in (2 - n as i64)..=(n as i64 + 1) {
                let s = toeplitz(k, n, n + 1, band, 1);
                let mut elem = Mat::zero(k, dim, dim);
                elem.paste(0, n, &s);
                elem.paste(h, h + n + 1, &tau_transpose(&s));
                basis.push(elem);
            }
            // The free block M₂.
            for r in 0..h {
                for c in 0..h {
                    basis.push(single_entry(k, dim, dim, r + 1, h + c + 1, 1));
                }
            }
            basis
        }
        Family::Cnf(n, f) => {
            let mn = spec.m() * n;
            let pi = companion(f, *n);
            end_basis_pair_block(k, mn, &powers_of(&pi, mn))
        }
        Family::CnfSq(n, f) => {
            let mn = spec.m() * n;
            let pi = companion(f, *n);
            end_basis_quad_block(k, mn, &powers_of(&pi, mn))
        }
        Family::CnInf(n) => {
            let cent: Vec<Mat> = (1..=*n as i64).map(|i| toeplitz(k, *n, *n, i, 1)).collect();
            end_basis_pair_block(k, *n, &cent)
        }
        Family::CnInfSq(n) => {
            let cent: Vec<Mat> = (1..=*n as i64).map(|i| toeplitz(k, *n, *n, i, 1)).collect();
            end_basis_quad_block(k, *n, &cent)
        }
    }
}

/// `I, Π, Π², …` up to the given count; the companion matrix is cyclic, so
/// these span its centralizer.
fn powers_of(pi: &Mat, count: usize) -> Vec<Mat> {
    let mut powers = Vec::with_capacity(count);
    let mut cur = Mat::identity(pi.field, pi.rows);
    for _ in 0..count {
        powers.push(cur.clone());
        cur = cur.mul(pi);
    }
    powers
}

/// Basis of `{(A B; 0 A)}` with `A` running over `cent` and `B` free.
fn end_basis_pair_block(k: FieldSpec, half: usize, cent: &[Mat]) -> Vec<Mat> {
    let mut basis = Vec::new();
    for a in cent {
        let mut m = Mat::zero(k, 2 * half, 2 * half);
        m.paste(0, 0, a);
        m.paste(half, half, a);
        basis.push(m);
    }
    for r in 0..half {
        for c in 0..half {
            basis.push(single_entry(k, 2 * half, 2 * half, r + 1, half + c + 1, 1));
        }
    }
    basis
}

/// Basis of `{(υ Υ; 0 υ)}` where `υ = (a b; c d)` has blocks in `cent` and
/// `Υ` is free, in the interleaved basis of the squared family.
fn end_basis_quad_block(k: FieldSpec, quarter: usize, cent: &[Mat]) -> Vec<Mat> {
    let dim = 4 * quarter;
    let mut basis = Vec::new();
    for (br, bc) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        for a in cent {
            let mut m = Mat::zero(k, dim, dim);
            m.paste(br * quarter, bc * quarter, a);
            m.paste((2 + br) * quarter, (2 + bc) * quarter, a);
            basis.push(m);
        }
    }
    for r in 0..2 * quarter {
        for c in 0..2 * quarter {
            basis.push(single_entry(k, dim, dim, r + 1, 2 * quarter + c + 1, 1));
        }
    }
    basis
}

/// A `k`-basis of `End(M)` found by the generic commutant solver: the
/// nullspace of the linear system `g·M = M·g` for both generators.  Used to
/// cross-check the closed forms; the two computations must span the same
/// space.
pub fn end_basis_generic(spec: &ModuleSpec) -> Vec<Mat> {
    let act = action(spec);
    let d = spec.dim();
    let k = spec.field;
    // One row per equation entry and generator, one column per entry of M.
    let mut system = Mat::zero(k, 2 * d * d, d * d);
    for (gi, g) in [&act.g1, &act.g2].into_iter().enumerate() {
        for r in 0..d {
            for c in 0..d {
                let row = gi * d * d + r * d + c;
                // (gM + Mg)_{rc} = Σ_i g_{ri}·M_{ic} + Σ_j M_{rj}·g_{jc}.
                for i in 0..d {
                    let cur = system.at(row, i * d + c);
                    system.set(row, i * d + c, k.add(cur, g.at(r, i)));
                }
                for jx in 0..d {
                    let cur = system.at(row, r * d + jx);
                    system.set(row, r * d + jx, k.add(cur, g.at(jx, c)));
                }
            }
        }
    }
    system
        .nullspace()
        .into_iter()
        .map(|flat| Mat::from_fn(k, d, d, |r, c| flat[r * d + c]))
        .collect()
}

// ---------------------------------------------------------------------------
// Duality witnesses
// ---------------------------------------------------------------------------

/// An explicit invertible `W` with `W⁻¹·gᵀ·W` equal to the dual partner's
/// action for both generators (the generators are involutions, so `gᵀ` is
/// the contragredient action).
///
/// * `AnBn`: `W = Ĩ_{2n+1}` carries the contragredient of the `Aₙ` action
///   onto the `Bₙ` action.
/// * `Cnf`: `W = (0 B₀; B₀ 0)` with `B₀ = 𝒱(Ĩₙ)` carries the contragredient
///   of `Cₙ(f)` onto itself; the half swap is forced because transposition
///   exchanges the two unipotent block triangles.
///
/// # Errors
///
/// [`Error::Unsupported`] for other families.
pub fn dual_witness(spec: &ModuleSpec) -> Result<Mat> {
    match &spec.family {
        Family::AnBn(n) => Ok(anti_identity(spec.field, 2 * n + 1)),
        Family::Cnf(n, f) => {
            let jd = jordan_data(spec.field, *n, f)?;
            let mn = jd.ext.m * jd.n;
            let b0 = script_v(&jd, &anti_identity(jd.ext.ext, jd.n))?;
            let zero = Mat::zero(spec.field, mn, mn);
            Ok(Mat::block2(&zero, &b0, &b0, &zero))
        }
        _ => Err(Error::Unsupported(
            "duality witnesses are provided for AnBn and Cnf only".into(),
        )),
    }
}

/// The raw `Aₙ` action (internal: used to validate the combined `AnBn`
/// basis and the duality witness).
#[cfg(test)]
pub(crate) fn a_action(k: FieldSpec, n: usize) -> GroupAction {
    let top = Mat::identity(k, n);
    let bot = Mat::identity(k, n + 1);
    let zero = Mat::zero(k, n + 1, n);
    GroupAction {
        g1: Mat::block2(&top, &toeplitz(k, n, n + 1, 2, 1), &zero, &bot),
        g2: Mat::block2(&top, &toeplitz(k, n, n + 1, 1, 1), &zero, &bot),
    }
}

/// The raw `Bₙ` action.
#[cfg(test)]
pub(crate) fn b_action(k: FieldSpec, n: usize) -> GroupAction {
    let top = Mat::identity(k, n + 1);
    let bot = Mat::identity(k, n);
    let zero = Mat::zero(k, n, n + 1);
    GroupAction {
        g1: Mat::block2(&top, &toeplitz(k, n + 1, n, 1, 1), &zero, &bot),
        g2: Mat::block2(&top, &toeplitz(k, n + 1, n, 0, 1), &zero, &bot),
    }
}
