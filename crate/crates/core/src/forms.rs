//! Bilinear and quadratic forms on the module families.
//!
//! A bilinear form is identified with its Gram matrix in the ambient basis
//! of its [`ModuleSpec`]; a quadratic form is stored as the unique
//! upper-triangular representative of its coset (two matrices describe the
//! same quadratic form exactly when they differ by a symmetric hollow
//! matrix).  Degenerate and non-invariant forms are representable — the
//! predicates here classify them, and the classification layer rejects them
//! with a diagnosis.

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::kgmodules::{action, Family, GroupAction, ModuleSpec};
use crate::matrix::{strict_upper, Mat};

// ---------------------------------------------------------------------------
// Bilinear forms
// ---------------------------------------------------------------------------

/// A bilinear form on a module, identified with its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    /// The underlying module.
    pub spec: ModuleSpec,
    /// Gram matrix in the module's ambient basis.
    pub gram: Mat,
}

impl BilinearForm {
    /// Wraps a Gram matrix, validating its shape against the module.
    ///
    /// # Errors
    ///
    /// [`Error::Shape`] on a dimension or field mismatch.
    pub fn new(spec: ModuleSpec, gram: Mat) -> Result<BilinearForm> {
        if gram.rows != spec.dim() || gram.cols != spec.dim() {
            return Err(Error::Shape(format!(
                "Gram matrix is {}x{} but the module has dimension {}",
                gram.rows,
                gram.cols,
                spec.dim()
            )));
        }
        if gram.field != spec.field {
            return Err(Error::Shape("Gram matrix field differs from the module field".into()));
        }
        Ok(BilinearForm { spec, gram })
    }

    /// True when both generators preserve the form: `gᵀ·S·g = S`.
    pub fn is_invariant(&self) -> bool {
        gram_is_invariant(&action(&self.spec), &self.gram)
    }

    /// True when the Gram matrix is alternating (hollow and symmetric) and
    /// invertible.
    pub fn is_symplectic(&self) -> bool {
        self.gram.is_alternating_gram() && self.gram.is_invertible()
    }

    /// Basis of the radical (the kernel of the Gram matrix).
    pub fn radical(&self) -> Vec<Vec<u64>> {
        self.gram.nullspace()
    }

    /// Evaluates the form on a pair of coordinate vectors.
    ///
    /// # Panics
    ///
    /// Panics when a vector has the wrong length.
    pub fn eval(&self, x: &[u64], y: &[u64]) -> u64 {
        bilinear_eval(&self.gram, x, y)
    }
}

/// Invariance of a Gram matrix under an explicit pair of generators.  The
/// form-level predicates delegate here; direct-sum constructions outside the
/// eight families can use it with a hand-built action.
pub fn gram_is_invariant(act: &GroupAction, gram: &Mat) -> bool {
    gram.congruence(&act.g1) == *gram && gram.congruence(&act.g2) == *gram
}

/// Precondition check used by the classification entry points: the form must
/// be invariant and symplectic, and the failures are reported separately so
/// callers can see which assumption broke.
///
/// # Errors
///
/// [`Error::NotInvariant`] or [`Error::NotSymplectic`] with a diagnosis.
pub fn ensure_invariant_symplectic(b: &BilinearForm) -> Result<()> {
    let act = action(&b.spec);
    if b.gram.congruence(&act.g1) != b.gram {
        return Err(Error::NotInvariant("the first generator does not preserve the form".into()));
    }
    if b.gram.congruence(&act.g2) != b.gram {
        return Err(Error::NotInvariant("the second generator does not preserve the form".into()));
    }
    if !b.gram.is_hollow() {
        return Err(Error::NotSymplectic("the Gram matrix has a nonzero diagonal entry".into()));
    }
    if !b.gram.is_symmetric() {
        return Err(Error::NotSymplectic("the Gram matrix is not symmetric".into()));
    }
    if !b.gram.is_invertible() {
        return Err(Error::NotSymplectic("the form is degenerate".into()));
    }
    Ok(())
}

/// The paired module `M²` of a self-dual module `(M, B)`: the block Gram
/// `(0 B; Bᵀ 0)` transported into the ambient basis of the squared family.
///
/// The input form must be invariant and non-degenerate; the result is then
/// invariant, alternating and non-degenerate (symplectic).
///
/// # Errors
///
/// * [`Error::NotInvariant`] / [`Error::Singular`] — the pairing is not
///   invariant or not invertible.
/// * [`Error::Unsupported`] — the family has no squared counterpart
///   (`TrivialSq`, `AnBn` and the already-squared families).
pub fn paired_module(b: &BilinearForm) -> Result<BilinearForm> {
    let act = action(&b.spec);
    if !gram_is_invariant(&act, &b.gram) {
        return Err(Error::NotInvariant("pairing is not invariant".into()));
    }
    if !b.gram.is_invertible() {
        return Err(Error::Singular);
    }
    let k = b.spec.field;
    let d = b.spec.dim();
    let squared = match &b.spec.family {
        Family::Regular => ModuleSpec::new(k, Family::RegularSq)?,
        Family::Cnf(n, f) => ModuleSpec::new(k, Family::CnfSq(*n, f.clone()))?,
        Family::CnInf(n) => ModuleSpec::new(k, Family::CnInfSq(*n))?,
        _ => {
            return Err(Error::Unsupported(
                "the paired module is provided for Regular, Cnf and CnInf".into(),
            ))
        }
    };
    // Concatenated two-copy coordinates first.
    let zero = Mat::zero(k, d, d);
    let conc = Mat::block2(&zero, &b.gram, &b.gram.transpose(), &zero);
    // The squared Cnf/CnInf families interleave the copies half by half:
    // ambient order is (top of copy 1, top of copy 2, bottom 1, bottom 2).
    let gram = match &b.spec.family {
        Family::Regular => conc,
        _ => {
            let h = d / 2;
            let mut order = Vec::with_capacity(2 * d);
            order.extend(0..h);
            order.extend(d..d + h);
            order.extend(h..d);
            order.extend(d + h..2 * d);
            let mut c = Mat::zero(k, 2 * d, 2 * d);
            for (new, &old) in order.iter().enumerate() {
                c.set(old, new, 1);
            }
            conc.congruence(&c)
        }
    };
    let out = BilinearForm::new(squared, gram)?;
    debug_assert!(out.is_invariant() && out.is_symplectic());
    Ok(out)
}

/// Orthogonal sum at the level of explicit actions and Gram matrices: the
/// direct-sum action together with the block-diagonal Gram.  Direct sums
/// leave the eight-family universe, so the result is not wrapped in a
/// [`BilinearForm`].
///
/// # Errors
///
/// [`Error::Shape`] on a field mismatch or non-square input.
pub fn orthogonal_sum(
    act1: &GroupAction,
    s1: &Mat,
    act2: &GroupAction,
    s2: &Mat,
) -> Result<(GroupAction, Mat)> {
    if s1.field != s2.field {
        return Err(Error::Shape("orthogonal sum needs a common base field".into()));
    }
    if !s1.is_square() || !s2.is_square() || s1.rows != act1.g1.rows || s2.rows != act2.g1.rows {
        return Err(Error::Shape("Gram and action dimensions do not match".into()));
    }
    let act = GroupAction {
        g1: Mat::block_diag(&[&act1.g1, &act2.g1]),
        g2: Mat::block_diag(&[&act1.g2, &act2.g2]),
    };
    Ok((act, Mat::block_diag(&[s1, s2])))
}

// ---------------------------------------------------------------------------
// Quadratic forms
// ---------------------------------------------------------------------------

/// A quadratic form `q(x) = xᵀ·Q·x`, stored as the unique upper-triangular
/// representative of its coset modulo symmetric hollow matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    /// The underlying module.
    pub spec: ModuleSpec,
    rep: Mat,
}

impl QuadraticForm {
    /// Wraps any square matrix describing the form, normalizing it to the
    /// upper-triangular representative (lower entries are folded onto their
    /// mirror positions; this does not change the form).
    ///
    /// # Errors
    ///
    /// [`Error::Shape`] on a dimension or field mismatch.
    pub fn new(spec: ModuleSpec, q: &Mat) -> Result<QuadraticForm> {
        if q.rows != spec.dim() || q.cols != spec.dim() {
            return Err(Error::Shape(format!(
                "matrix is {}x{} but the module has dimension {}",
                q.rows,
                q.cols,
                spec.dim()
            )));
        }
        if q.field != spec.field {
            return Err(Error::Shape("matrix field differs from the module field".into()));
        }
        Ok(QuadraticForm {
            spec,
            rep: upper_normalize(q),
        })
    }

    /// The upper-triangular representative.
    pub fn rep(&self) -> &Mat {
        &self.rep
    }

    /// Evaluates the form on a coordinate vector.
    ///
    /// # Panics
    ///
    /// Panics when the vector has the wrong length.
    pub fn eval(&self, x: &[u64]) -> u64 {
        assert_eq!(x.len(), self.rep.rows, "vector length mismatch");
        let k = self.rep.field;
        let mut acc = 0;
        for i in 0..self.rep.rows {
            for j in i..self.rep.cols {
                acc = k.add(acc, k.mul(self.rep.at(i, j), k.mul(x[i], x[j])));
            }
        }
        acc
    }

    /// The polar form `B_q = Q + Qᵀ`, always alternating.
    pub fn polar(&self) -> BilinearForm {
        BilinearForm {
            spec: self.spec.clone(),
            gram: self.rep.add(&self.rep.transpose()),
        }
    }
}

/// Folds a square matrix to its unique upper-triangular coset representative.
fn upper_normalize(q: &Mat) -> Mat {
    let k = q.field;
    Mat::from_fn(k, q.rows, q.cols, |r, c| {
        if r < c {
            k.add(q.at(r, c), q.at(c, r))
        } else if r == c {
            q.at(r, r)
        } else {
            0
        }
    })
}

/// Lifts a symplectic (alternating) Gram matrix to the quadratic form given
/// by its strictly upper triangle, so that `Ŝ + Ŝᵀ = S`.
///
/// # Errors
///
/// [`Error::NotSymplectic`] when the Gram matrix is not alternating (the
/// reassembly identity would fail).
pub fn s_hat(b: &BilinearForm) -> Result<QuadraticForm> {
    if !b.gram.is_alternating_gram() {
        return Err(Error::NotSymplectic("the Gram matrix is not alternating".into()));
    }
    QuadraticForm::new(b.spec.clone(), &strict_upper(&b.gram))
}

/// Invariance of a quadratic form: for each generator `g`, the difference
/// `gᵀ·Q·g + Q` must be symmetric and hollow, i.e. represent the zero form.
/// This is field-size independent, unlike evaluating `q` on every vector.
pub fn quad_is_invariant(q: &QuadraticForm) -> bool {
    let act = action(&q.spec);
    let holds = [&act.g1, &act.g2].into_iter().all(|g| {
        let diff = q.rep().congruence(g).add(q.rep());
        diff.is_symmetric() && diff.is_hollow()
    });
    holds
}

// ---------------------------------------------------------------------------
// Isometries
// ---------------------------------------------------------------------------

/// True when `M` is an isometry carrying the first form to the second:
/// `M` is invertible, commutes with both generators, and `Mᵀ·S·M = S′`
/// exactly.  Forms over different modules are never isometric.
pub fn bform_isometry_check(from: &BilinearForm, to: &BilinearForm, m: &Mat) -> bool {
    from.spec == to.spec
        && endomorphism_unit(&from.spec, m)
        && from.gram.congruence(m) == to.gram
}

/// True when `M` is an isometry carrying the first quadratic form to the
/// second: same conditions, with the Gram identity replaced by equality of
/// the upper-triangular representatives of `Mᵀ·Q·M` and `Q′`.
pub fn quad_isometry_check(from: &QuadraticForm, to: &QuadraticForm, m: &Mat) -> bool {
    from.spec == to.spec
        && endomorphism_unit(&from.spec, m)
        && upper_normalize(&from.rep().congruence(m)) == *to.rep()
}

pub(crate) fn endomorphism_unit(spec: &ModuleSpec, m: &Mat) -> bool {
    if m.rows != spec.dim() || m.cols != spec.dim() || m.field != spec.field {
        return false;
    }
    let act = action(spec);
    m.is_invertible()
        && m.mul(&act.g1) == act.g1.mul(m)
        && m.mul(&act.g2) == act.g2.mul(m)
}

// ---------------------------------------------------------------------------
// Symplectic bases and Arf sums
// ---------------------------------------------------------------------------

/// A change of basis `P` with `Pᵀ·S·P = diag(Ĩ₂, …, Ĩ₂)`, found by
/// hyperbolic-pair peeling.  Columns come in pairs `u₁, v₁, u₂, v₂, …` with
/// `S(uᵢ, vᵢ) = 1`.
///
/// # Errors
///
/// [`Error::Shape`] for odd dimension, [`Error::NotSymplectic`] when the
/// matrix is not alternating or is degenerate.
pub fn symplectic_basis(s: &Mat) -> Result<Mat> {
    if !s.is_square() || !s.rows.is_multiple_of(2) {
        return Err(Error::Shape("symplectic forms have even dimension".into()));
    }
    if !s.is_alternating_gram() {
        return Err(Error::NotSymplectic("the Gram matrix is not alternating".into()));
    }
    if !s.is_invertible() {
        return Err(Error::NotSymplectic("the form is degenerate".into()));
    }
    let k = s.field;
    let d = s.rows;
    let mut remaining: Vec<Vec<u64>> = (0..d)
        .map(|i| (0..d).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut columns: Vec<Vec<u64>> = Vec::with_capacity(d);
    while !remaining.is_empty() {
        let u = remaining.remove(0);
        let partner = remaining
            .iter()
            .position(|w| bilinear_eval(s, &u, w) != 0)
            .expect("non-degenerate form pairs every residual vector");
        let mut v = remaining.remove(partner);
        let c = k.inv(bilinear_eval(s, &u, &v)).expect("nonzero pairing");
        for entry in &mut v {
            *entry = k.mul(*entry, c);
        }
        for w in &mut remaining {
            let a = bilinear_eval(s, w, &v);
            let b = bilinear_eval(s, w, &u);
            for i in 0..d {
                let correction = k.add(k.mul(a, u[i]), k.mul(b, v[i]));
                w[i] = k.add(w[i], correction);
            }
        }
        columns.push(u);
        columns.push(v);
    }
    let p = Mat::from_fn(k, d, d, |r, c| columns[c][r]);
    debug_assert!({
        let target: Vec<Mat> = (0..d / 2).map(|_| crate::matrix::anti_identity(k, 2)).collect();
        s.congruence(&p) == Mat::block_diag(&target.iter().collect::<Vec<_>>())
    });
    Ok(p)
}

/// The Arf sum `Σ q(uᵢ)·q(vᵢ)` of a quadratic form over a symplectic basis
/// of its polar form.  The value is well defined modulo `{δ² + δ : δ ∈ k}`;
/// isometric forms have equal cosets.
///
/// # Errors
///
/// Propagates [`symplectic_basis`] errors when the polar form is degenerate.
pub fn arf_sum(q: &QuadraticForm) -> Result<Scalar> {
    let polar = q.polar();
    let p = symplectic_basis(&polar.gram)?;
    let k = polar.gram.field;
    let d = p.rows;
    let mut acc = 0;
    for pair in 0..d / 2 {
        let u: Vec<u64> = (0..d).map(|r| p.at(r, 2 * pair)).collect();
        let v: Vec<u64> = (0..d).map(|r| p.at(r, 2 * pair + 1)).collect();
        acc = k.add(acc, k.mul(q.eval(&u), q.eval(&v)));
    }
    Ok(Scalar { field: k, value: acc })
}

fn bilinear_eval(s: &Mat, x: &[u64], y: &[u64]) -> u64 {
    assert_eq!(x.len(), s.rows, "vector length mismatch");
    assert_eq!(y.len(), s.cols, "vector length mismatch");
    let k = s.field;
    let mut acc = 0;
    for (r, &xr) in x.iter().enumerate() {
        if xr == 0 {
            continue;
        }
        for (c, &yc) in y.iter().enumerate() {
            acc = k.add(acc, k.mul(xr, k.mul(s.at(r, c), yc)));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldSpec, Poly};
    use crate::matrix::{anti_identity, single_entry};

    fn gf2() -> FieldSpec {
        FieldSpec::gf2()
    }

    fn spec(family: Family) -> ModuleSpec {
        ModuleSpec::new(gf2(), family).unwrap()
    }

    fn kron(a: &Mat, b: &Mat) -> Mat {
        let k = a.field;
        Mat::from_fn(k, a.rows * b.rows, a.cols * b.cols, |r, c| {
            k.mul(a.at(r / b.rows, c / b.cols), b.at(r % b.rows, c % b.cols))
        })
    }

    /// All invertible alternating 4×4 Gram matrices over GF(2).
    fn small_symplectic_grams() -> Vec<Mat> {
        let k = gf2();
        let mut out = Vec::new();
        for bits in 0..64u64 {
            let mut s = Mat::zero(k, 4, 4);
            let mut idx = 0;
            for r in 0..4 {
                for c in r + 1..4 {
                    let v = (bits >> idx) & 1;
                    s.set(r, c, v);
                    s.set(c, r, v);
                    idx += 1;
                }
            }
            if s.is_invertible() {
                out.push(s);
            }
        }
        out
    }

    #[test]
    fn anti_identity_is_invariant_and_symplectic_on_anbn() {
        for n in 1..=2 {
            let sp = spec(Family::AnBn(n));
            let b = BilinearForm::new(sp, anti_identity(gf2(), 4 * n + 2)).unwrap();
            assert!(b.is_invariant());
            assert!(b.is_symplectic());
            assert!(b.radical().is_empty());
            assert!(ensure_invariant_symplectic(&b).is_ok());
        }
    }

    #[test]
    fn zero_form_is_invariant_with_full_radical() {
        let sp = spec(Family::Regular);
        let b = BilinearForm::new(sp, Mat::zero(gf2(), 4, 4)).unwrap();
        assert!(b.is_invariant());
        assert!(!b.is_symplectic());
        assert_eq!(b.radical().len(), 4);
    }

    #[test]
    fn non_invariant_gram_is_detected() {
        let sp = spec(Family::Regular);
        let b = BilinearForm::new(sp, single_entry(gf2(), 4, 4, 1, 1, 1)).unwrap();
        assert!(!b.is_invariant());
        assert!(matches!(ensure_invariant_symplectic(&b), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn symplectic_predicate_examples() {
        let sp = spec(Family::TrivialSq);
        let yes = BilinearForm::new(sp.clone(), anti_identity(gf2(), 2)).unwrap();
        assert!(yes.is_symplectic());
        let no = BilinearForm::new(sp, Mat::identity(gf2(), 2)).unwrap();
        assert!(!no.is_symplectic());
        assert!(matches!(ensure_invariant_symplectic(&no), Err(Error::NotSymplectic(_))));
    }

    #[test]
    fn block_form_on_anbn_is_invariant() {
        // (0 A; Aᵀ 0) with A = (0 Ĩₙ; Ĩ_{n+1} Ω) and a nonzero Ω.
        let k = gf2();
        let n = 1;
        let sp = spec(Family::AnBn(n));
        let mut a = Mat::zero(k, 3, 3);
        a.paste(0, 2, &anti_identity(k, n));
        a.paste(n, 0, &anti_identity(k, n + 1));
        a.set(1, 2, 1); // Ω with leading coefficient 1
        a.set(2, 2, 1);
        let zero = Mat::zero(k, 3, 3);
        let s = Mat::block2(&zero, &a, &a.transpose(), &zero);
        let b = BilinearForm::new(sp, s).unwrap();
        assert!(b.is_invariant());
        assert!(b.is_symplectic());
    }

    #[test]
    fn radical_dimension_matches_corank() {
        // Multiplication Gram of a group-algebra element with zero
        // augmentation: rank 2, radical dimension 2.
        let sp = spec(Family::Regular);
        let gram = crate::kgmodules::kg_hat(gf2(), [0, 1, 1, 0]);
        let b = BilinearForm::new(sp, gram.clone()).unwrap();
        let rad = b.radical();
        assert_eq!(rad.len(), 4 - gram.rank());
        for v in rad {
            let img: Vec<u64> = (0..4)
                .map(|r| {
                    (0..4).fold(0, |acc, c| gf2().add(acc, gf2().mul(gram.at(r, c), v[c])))
                })
                .collect();
            assert_eq!(img, vec![0, 0, 0, 0]);
        }
    }

    #[test]
    fn paired_module_of_the_group_algebra() {
        let sp = spec(Family::Regular);
        let b = BilinearForm::new(sp, Mat::identity(gf2(), 4)).unwrap();
        let paired = paired_module(&b).unwrap();
        assert_eq!(paired.spec.family, Family::RegularSq);
        let z = Mat::zero(gf2(), 4, 4);
        let i = Mat::identity(gf2(), 4);
        assert_eq!(paired.gram, Mat::block2(&z, &i, &i, &z));
        assert!(paired.is_invariant() && paired.is_symplectic());
    }

    #[test]
    fn paired_module_interleaves_the_squared_chain_family() {
        let k = gf2();
        let sp = ModuleSpec::new(k, Family::Cnf(1, Poly::t(k))).unwrap();
        let b = BilinearForm::new(sp, anti_identity(k, 2)).unwrap();
        let paired = paired_module(&b).unwrap();
        assert_eq!(paired.gram, anti_identity(k, 4));
        assert!(paired.is_invariant() && paired.is_symplectic());
    }

    #[test]
    fn paired_module_rejects_bad_pairings() {
        let sp = spec(Family::Regular);
        let not_invariant =
            BilinearForm::new(sp.clone(), single_entry(gf2(), 4, 4, 1, 1, 1)).unwrap();
        assert!(matches!(paired_module(&not_invariant), Err(Error::NotInvariant(_))));
        let singular = BilinearForm::new(sp, Mat::zero(gf2(), 4, 4)).unwrap();
        assert!(matches!(paired_module(&singular), Err(Error::NotInvariant(_)) | Err(Error::Singular)));
        let anbn = BilinearForm::new(spec(Family::AnBn(1)), anti_identity(gf2(), 6)).unwrap();
        assert!(matches!(paired_module(&anbn), Err(Error::Unsupported(_))));
    }

    #[test]
    fn paired_sum_is_isometric_to_sum_of_paireds() {
        // Two invariant pairings on the two-dimensional chain module.
        let k = gf2();
        let sp = ModuleSpec::new(k, Family::Cnf(1, Poly::t(k))).unwrap();
        let act = action(&sp);
        let b1 = anti_identity(k, 2);
        let b2 = Mat::from_rows(k, &[vec![0, 1], vec![1, 1]]);
        for b in [&b1, &b2] {
            assert!(gram_is_invariant(&act, b));
        }
        // Paired module of the direct sum, in concatenated coordinates
        // (copy of M₁⊕M₂, then its partner).
        let bsum = Mat::block_diag(&[&b1, &b2]);
        let z4 = Mat::zero(k, 4, 4);
        let paired_sum = Mat::block2(&z4, &bsum, &bsum.transpose(), &z4);
        let act_sum = GroupAction {
            g1: Mat::block_diag(&[&act.g1, &act.g1, &act.g1, &act.g1]),
            g2: Mat::block_diag(&[&act.g2, &act.g2, &act.g2, &act.g2]),
        };
        assert!(gram_is_invariant(&act_sum, &paired_sum));
        // Orthogonal sum of the two paired modules.
        let z2 = Mat::zero(k, 2, 2);
        let p1 = Mat::block2(&z2, &b1, &b1.transpose(), &z2);
        let p2 = Mat::block2(&z2, &b2, &b2.transpose(), &z2);
        let pair_act = GroupAction {
            g1: Mat::block_diag(&[&act.g1, &act.g1]),
            g2: Mat::block_diag(&[&act.g2, &act.g2]),
        };
        let (sum_act, p1_perp_p2) = orthogonal_sum(&pair_act, &p1, &pair_act, &p2).unwrap();
        // The permutation sending (M₁, M₂, M₁*, M₂*) to (M₁, M₁*, M₂, M₂*).
        let order = [0usize, 1, 4, 5, 2, 3, 6, 7];
        let mut c = Mat::zero(k, 8, 8);
        for (new, &old) in order.iter().enumerate() {
            c.set(old, new, 1);
        }
        assert_eq!(paired_sum.congruence(&c), p1_perp_p2);
        for (g_old, g_new) in [(&act_sum.g1, &sum_act.g1), (&act_sum.g2, &sum_act.g2)] {
            assert_eq!(c.inverse().unwrap().mul(g_old).mul(&c), *g_new);
        }
    }

    #[test]
    fn triple_copy_isometry_witness() {
        // (M, B) ⊥ (M², P_B) is isometric to three orthogonal copies of
        // (M, B); the witness is t ⊗ I for a fixed invertible 3×3 t with
        // tᵀ·t equal to the paired block pattern.
        let k = gf2();
        let sp = ModuleSpec::new(k, Family::Cnf(1, Poly::t(k))).unwrap();
        let act = action(&sp);
        let b = anti_identity(k, 2);
        let t = Mat::from_rows(k, &[vec![1, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(
            t.transpose().mul(&t),
            Mat::from_rows(k, &[vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]])
        );
        let witness = kron(&t, &Mat::identity(k, 2));
        assert!(witness.is_invertible());
        // Three copies of B versus B ⊥ P_B (same total space, concatenated).
        let triple = kron(&Mat::identity(k, 3), &b);
        let z2 = Mat::zero(k, 2, 2);
        let target = Mat::block_diag(&[&b, &Mat::block2(&z2, &b, &b.transpose(), &z2)]);
        assert_eq!(triple.congruence(&witness), target);
        let g_triple = kron(&Mat::identity(k, 3), &act.g1);
        assert_eq!(witness.mul(&g_triple), g_triple.mul(&witness));
    }

    #[test]
    fn s_hat_reassembles_the_gram() {
        let sp = spec(Family::TrivialSq);
        let b = BilinearForm::new(sp, anti_identity(gf2(), 2)).unwrap();
        let q = s_hat(&b).unwrap();
        assert_eq!(*q.rep(), single_entry(gf2(), 2, 2, 1, 2, 1));
        // Sweep all 4-dimensional symplectic Gram matrices.
        let sp4 = spec(Family::Regular);
        for s in small_symplectic_grams() {
            let form = BilinearForm::new(sp4.clone(), s.clone()).unwrap();
            let q = s_hat(&form).unwrap();
            assert_eq!(q.polar().gram, s);
        }
        // Non-alternating input is rejected.
        let bad = BilinearForm::new(spec(Family::TrivialSq), Mat::identity(gf2(), 2)).unwrap();
        assert!(s_hat(&bad).is_err());
    }

    #[test]
    fn quad_rep_normalization_is_sound() {
        let k = gf2();
        let sp = spec(Family::Regular);
        // Any matrix and its symmetric-hollow shifts evaluate identically
        // and normalize to the same representative.
        let base = Mat::from_rows(
            k,
            &[
                vec![1, 0, 1, 1],
                vec![1, 1, 0, 0],
                vec![0, 1, 0, 1],
                vec![1, 0, 0, 1],
            ],
        );
        let q = QuadraticForm::new(sp.clone(), &base).unwrap();
        for s in small_symplectic_grams() {
            let shifted = QuadraticForm::new(sp.clone(), &base.add(&s)).unwrap();
            assert_eq!(q, shifted);
        }
        for bits in 0..16u64 {
            let x: Vec<u64> = (0..4).map(|i| (bits >> i) & 1).collect();
            let mut direct = 0;
            for r in 0..4 {
                for c in 0..4 {
                    direct = k.add(direct, k.mul(base.at(r, c), k.mul(x[r], x[c])));
                }
            }
            assert_eq!(q.eval(&x), direct);
        }
    }

    #[test]
    fn quad_invariance_examples() {
        let k = gf2();
        let sp = spec(Family::Regular);
        // The strict upper triangle of an invariant symplectic Gram gives an
        // invariant quadratic form on the group algebra.
        let gram = crate::kgmodules::kg_hat(k, [0, 1, 1, 1]);
        let b = BilinearForm::new(sp.clone(), gram).unwrap();
        assert!(b.is_invariant() && b.is_symplectic());
        let q = s_hat(&b).unwrap();
        assert!(quad_is_invariant(&q));
        // Perturbing one diagonal entry breaks invariance.
        let mut bad = q.rep().clone();
        bad.set(0, 0, 1);
        let qbad = QuadraticForm::new(sp.clone(), &bad).unwrap();
        assert!(!quad_is_invariant(&qbad));
        // Brute-force cross-check by evaluating on every vector.
        let act = action(&sp);
        for (form, expected) in [(&q, true), (&qbad, false)] {
            let mut holds = true;
            for bits in 0..16u64 {
                let x: Vec<u64> = (0..4).map(|i| (bits >> i) & 1).collect();
                for g in [&act.g1, &act.g2] {
                    let gx: Vec<u64> = (0..4)
                        .map(|r| (0..4).fold(0, |acc, c| k.add(acc, k.mul(g.at(r, c), x[c]))))
                        .collect();
                    holds &= form.eval(&gx) == form.eval(&x);
                }
            }
            assert_eq!(holds, expected);
        }
        // The zero form is invariant.
        let zero = QuadraticForm::new(sp, &Mat::zero(k, 4, 4)).unwrap();
        assert!(quad_is_invariant(&zero));
    }

    #[test]
    fn isometry_checks_accept_units_and_reject_junk() {
        let k = gf2();
        let sp = spec(Family::Regular);
        let gram = crate::kgmodules::kg_hat(k, [0, 1, 1, 1]);
        let b = BilinearForm::new(sp.clone(), gram).unwrap();
        let id = Mat::identity(k, 4);
        assert!(bform_isometry_check(&b, &b, &id));
        // Multiplication by a group element is a unit isometry.
        let g1hat = crate::kgmodules::kg_hat(k, [0, 1, 0, 0]);
        assert!(bform_isometry_check(&b, &b, &g1hat));
        // A non-commuting invertible matrix is rejected even though it
        // happens to preserve nothing.
        let swap = single_entry(k, 4, 4, 1, 2, 1)
            .add(&single_entry(k, 4, 4, 2, 1, 1))
            .add(&single_entry(k, 4, 4, 3, 3, 1))
            .add(&single_entry(k, 4, 4, 4, 4, 1));
        assert!(!bform_isometry_check(&b, &b, &swap));
        // Singular matrices are rejected.
        assert!(!bform_isometry_check(&b, &b, &Mat::zero(k, 4, 4)));
        // Quadratic variant: shifting by a symmetric hollow matrix is
        // invisible, other changes are not.
        let q = s_hat(&b).unwrap();
        assert!(quad_isometry_check(&q, &q, &id));
        assert!(quad_isometry_check(&q, &q, &g1hat));
        let mut other = q.rep().clone();
        other.set(0, 0, 1);
        let q_other = QuadraticForm::new(sp, &other).unwrap();
        assert!(!quad_isometry_check(&q, &q_other, &id));
    }

    #[test]
    fn symplectic_basis_examples() {
        let k = gf2();
        // Already in hyperbolic shape: the peeling returns the identity.
        let std4 = Mat::block_diag(&[&anti_identity(k, 2), &anti_identity(k, 2)]);
        assert_eq!(symplectic_basis(&std4).unwrap(), Mat::identity(k, 4));
        // Every 4-dimensional symplectic Gram is carried to the standard one.
        for s in small_symplectic_grams() {
            let p = symplectic_basis(&s).unwrap();
            assert_eq!(s.congruence(&p), std4);
        }
        // A non-trivial scaling case over GF(4).
        let k4 = FieldSpec::canonical(2);
        let mut s = Mat::zero(k4, 2, 2);
        s.set(0, 1, 2);
        s.set(1, 0, 2);
        let p = symplectic_basis(&s).unwrap();
        assert_eq!(s.congruence(&p), anti_identity(k4, 2));
        // Odd dimension and degenerate input are rejected.
        assert!(matches!(symplectic_basis(&Mat::zero(k, 3, 3)), Err(Error::Shape(_))));
        assert!(matches!(
            symplectic_basis(&Mat::zero(k, 2, 2)),
            Err(Error::NotSymplectic(_))
        ));
    }

    #[test]
    fn arf_sum_on_the_plane() {
        let k = gf2();
        let sp = spec(Family::TrivialSq);
        let q0 = QuadraticForm::new(
            sp.clone(),
            &Mat::from_rows(k, &[vec![1, 1], vec![0, 0]]),
        )
        .unwrap();
        assert_eq!(arf_sum(&q0).unwrap().value, 0);
        let q1 = QuadraticForm::new(sp, &Mat::from_rows(k, &[vec![1, 1], vec![0, 1]])).unwrap();
        assert_eq!(arf_sum(&q1).unwrap().value, 1);
    }

    #[test]
    fn arf_sum_is_independent_of_the_symplectic_basis() {
        let k = gf2();
        let sp = spec(Family::Regular);
        let std4 = Mat::block_diag(&[&anti_identity(k, 2), &anti_identity(k, 2)]);
        // A quadratic form with polar form std4.
        let mut rep = strict_upper(&std4);
        rep.set(0, 0, 1);
        rep.set(3, 3, 1);
        let q = QuadraticForm::new(sp.clone(), &rep).unwrap();
        let reference = arf_sum(&q).unwrap().value;
        // Sweep every basis change preserving std4 and recompute the sum.
        let mut checked = 0;
        for bits in 0..65536u64 {
            let p = Mat::from_fn(k, 4, 4, |r, c| (bits >> (4 * r + c)) & 1);
            if std4.congruence(&p) != std4 {
                continue;
            }
            checked += 1;
            let mut acc = 0;
            for pair in 0..2 {
                let u: Vec<u64> = (0..4).map(|r| p.at(r, 2 * pair)).collect();
                let v: Vec<u64> = (0..4).map(|r| p.at(r, 2 * pair + 1)).collect();
                acc = k.add(acc, k.mul(q.eval(&u), q.eval(&v)));
            }
            assert_eq!(acc, reference);
        }
        // The symplectic group on four points over GF(2) has order 720.
        assert_eq!(checked, 720);
    }

    #[test]
    fn invariant_nondegenerate_forms_intertwine_with_the_dual_action() {
        let k = gf2();
        for (sp, gram) in [
            (spec(Family::Regular), crate::kgmodules::kg_hat(k, [0, 1, 1, 1])),
            (spec(Family::AnBn(1)), anti_identity(k, 6)),
        ] {
            let b = BilinearForm::new(sp.clone(), gram).unwrap();
            assert!(b.is_invariant());
            let act = action(&sp);
            for g in [&act.g1, &act.g2] {
                assert_eq!(b.gram.mul(g), g.transpose().mul(&b.gram));
            }
        }
    }
}
