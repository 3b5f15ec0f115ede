//! Classification of invariant symplectic forms up to isometry, and of
//! their quadratic refinements, over the eight module families.
//!
//! Every isometry class of invariant symplectic forms carries a unique
//! [`ClassLabel`]; [`representative`] rebuilds the canonical Gram matrix
//! from a label and [`canonicalize`] reduces an arbitrary invariant
//! symplectic form to its label together with an explicit isometry
//! [`Witness`].  The quadratic layer ([`quad_exists`],
//! [`quad_representatives`], [`quad_canonicalize`]) refines each bilinear
//! class into its invariant quadratic classes, indexed by Artin–Schreier
//! coset representatives.

mod anbn;
mod cnf;
mod cnf_sq;
mod quad;
mod regular;
mod regular_sq;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::forms::{bform_isometry_check, endomorphism_unit, quad_is_invariant};
use crate::forms::{BilinearForm, QuadraticForm};
use crate::kgmodules::{action, Family, GroupAction, ModuleSpec};
use crate::matrix::Mat;

/// Default ceiling on the number of labels [`enumerate_classes`] will
/// produce before giving up with [`Error::Budget`].
pub const DEFAULT_ENUM_CAP: u128 = 1 << 20;

// ---------------------------------------------------------------------------
// Labels and witnesses
// ---------------------------------------------------------------------------

/// Canonical name of one isometry class of invariant symplectic forms.
///
/// Which variants occur depends on the family: `Trivial` for the
/// two-dimensional trivial module, `Group` for the group algebra, `Paired`,
/// `Alpha`, `Mu` for its square, `Omega` for the `AnBn` chain modules,
/// `EvenCoeffs` for the `Cnf`/`CnInf` chain modules, and `Kappa` for their
/// squares.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClassLabel {
    /// The single class on the two-dimensional module with trivial action.
    Trivial,
    /// Group algebra: the class of the functional `(0, b, c, 1 + b + c)`
    /// (normalized to augmentation one).
    Group { b: u64, c: u64 },
    /// Square of the group algebra: the hyperbolic pairing of the copies.
    Paired,
    /// Square of the group algebra: `S(g₁ + λg₂ + (1+λ)g₁g₂, 1, 0)`.
    Alpha { lambda: u64 },
    /// Square of the group algebra: `S(g₂ + g₁g₂, 1, μ(g₁ + g₁g₂))`.
    Mu { mu: u64 },
    /// `AnBn(n)`: the 2n anti-diagonal coefficients `ω₁..ω_{2n}` of the
    /// Hankel block `Ω`, either all zero (the paired class) or with leading
    /// coefficient one.
    Omega { coeffs: Vec<u64> },
    /// `Cnf(n, f)` and `CnInf(n)`: the even-position coefficients
    /// `(a₂, a₄, …)` of `A = H_{n+1}(1) + Σ H_{n+2j}(a_{2j})`, over the
    /// residue field.
    EvenCoeffs { coeffs: Vec<u64> },
    /// `CnfSq(n, f)` and `CnInfSq(n)`: the parameter block `(r, s, φ, ψ)`
    /// with `2 ≤ r ≤ n+1`, `0 ≤ s ≤ (n−r+1)/2`, `φ` the `s` odd-offset
    /// coefficients of the first diagonal block, and `ψ` the `t` offsets of
    /// the pairing block from `H_{n+1}(1)` (`ψ₁ ≠ 1` when `t ≥ 1`).
    /// `(n+1, 0, ∅, ∅)` is the paired class.
    Kappa {
        r: usize,
        s: usize,
        phi: Vec<u64>,
        psi: Vec<u64>,
    },
}

/// Canonical name of one isometry class of invariant quadratic forms
/// refining a fixed bilinear class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadLabel {
    /// The only quadratic class over its bilinear class.
    Unique,
    /// The class whose canonical form shifts the distinguished diagonal
    /// entry by the Artin–Schreier representative `x`.
    ArfRep(u64),
    /// No invariant quadratic form exists over this bilinear class.
    None,
}

/// An explicit isometry produced by canonicalization: an invertible module
/// endomorphism `M` with `Mᵀ·S·M` equal to the canonical representative
/// (exactly for bilinear forms, modulo symmetric hollow matrices for
/// quadratic ones).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// The matrix of the isometry, acting on column vectors.
    pub m: Mat,
}

// ---------------------------------------------------------------------------
// Counting
// ---------------------------------------------------------------------------

/// Number of isometry classes of invariant symplectic forms on the module.
///
/// # Panics
///
/// Panics if the count overflows `u128` (beyond any enumerable range).
pub fn count_classes(spec: &ModuleSpec) -> u128 {
    let q = spec.field.order() as u128;
    let qm = |m: usize| q.checked_pow(m as u32).expect("class count overflow");
    match &spec.family {
        Family::TrivialSq => 1,
        Family::Regular => qm(2),
        Family::RegularSq => 2 * q + 1,
        Family::AnBn(n) => {
            // q^(2n−1) + … + q + 2.
            (1..2 * n).map(&qm).sum::<u128>() + 2
        }
        Family::Cnf(n, f) => {
            let m = f.degree().expect("validated modulus");
            qm(m * (n / 2))
        }
        Family::CnfSq(n, f) => {
            let m = f.degree().expect("validated modulus");
            kappa_count(*n, qm(m))
        }
        Family::CnInf(n) => qm(n / 2),
        Family::CnInfSq(n) => kappa_count(*n, q),
    }
}

/// Class count of a squared chain module over a residue field of order `qk`.
fn kappa_count(n: usize, qk: u128) -> u128 {
    let pow = |e: usize| qk.checked_pow(e as u32).expect("class count overflow");
    if n.is_multiple_of(2) {
        n as u128 * pow((n - 2) / 2)
    } else {
        let mut total = n.div_ceil(2) as u128 * pow((n - 1) / 2);
        if n >= 3 {
            total += ((n - 1) / 2) as u128 * pow((n - 3) / 2);
        }
        total
    }
}

/// The class count as a closed formula in the field order `q`, for use when
/// the base field is left symbolic.  Chain families additionally substitute
/// the modulus degree `m`, the only datum of `f` the count depends on.
pub fn count_formula(family: &Family) -> String {
    match family {
        Family::TrivialSq => "1".to_owned(),
        Family::Regular => "q^2".to_owned(),
        Family::RegularSq => "2q + 1".to_owned(),
        Family::AnBn(n) => {
            let mut terms: Vec<String> = (1..2 * n).rev().map(|i| monomial(1, i)).collect();
            terms.push("2".to_owned());
            terms.join(" + ")
        }
        Family::Cnf(n, f) => {
            let m = f.degree().expect("validated modulus");
            monomial(1, m * (n / 2))
        }
        Family::CnfSq(n, f) => {
            let m = f.degree().expect("validated modulus");
            kappa_formula(*n, m)
        }
        Family::CnInf(n) => monomial(1, n / 2),
        Family::CnInfSq(n) => kappa_formula(*n, 1),
    }
}

fn kappa_formula(n: usize, m: usize) -> String {
    if n.is_multiple_of(2) {
        monomial(n as u128, m * (n - 2) / 2)
    } else if n == 1 {
        "1".to_owned()
    } else {
        format!(
            "{} + {}",
            monomial(n.div_ceil(2) as u128, m * (n - 1) / 2),
            monomial(((n - 1) / 2) as u128, m * (n - 3) / 2)
        )
    }
}

/// Renders `c·q^e` with the usual omissions (`q^0 = 1`, `q^1 = q`, unit
/// coefficient dropped).
fn monomial(c: u128, e: usize) -> String {
    match (c, e) {
        (c, 0) => format!("{c}"),
        (1, 1) => "q".to_owned(),
        (c, 1) => format!("{c}q"),
        (1, e) => format!("q^{e}"),
        (c, e) => format!("{c}q^{e}"),
    }
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// All class labels of the module, in a fixed deterministic order, capped at
/// [`DEFAULT_ENUM_CAP`] labels.
///
/// # Errors
///
/// [`Error::Budget`] when the class count exceeds the cap (the field is too
/// large to enumerate).
pub fn enumerate_classes(spec: &ModuleSpec) -> Result<Vec<ClassLabel>> {
    enumerate_classes_capped(spec, DEFAULT_ENUM_CAP)
}

/// [`enumerate_classes`] with an explicit label cap.
pub fn enumerate_classes_capped(spec: &ModuleSpec, cap: u128) -> Result<Vec<ClassLabel>> {
    let count = count_classes(spec);
    if count > cap {
        return Err(Error::Budget(format!(
            "enumerating {count} classes exceeds the cap of {cap}"
        )));
    }
    let labels = match &spec.family {
        Family::TrivialSq => vec![ClassLabel::Trivial],
        Family::Regular => regular::enumerate(spec.field),
        Family::RegularSq => regular_sq::enumerate(spec.field),
        Family::AnBn(n) => anbn::enumerate(spec.field, *n),
        Family::Cnf(..) | Family::CnInf(_) => cnf::enumerate(spec)?,
        Family::CnfSq(..) | Family::CnInfSq(_) => cnf_sq::enumerate(spec)?,
    };
    debug_assert_eq!(labels.len() as u128, count);
    Ok(labels)
}

// ---------------------------------------------------------------------------
// Representatives and canonicalization
// ---------------------------------------------------------------------------

/// The canonical Gram matrix of the class, as an invariant symplectic form.
///
/// # Errors
///
/// [`Error::Unsupported`] when the label variant does not belong to the
/// family; [`Error::Shape`] when its parameters are out of range.
pub fn representative(spec: &ModuleSpec, label: &ClassLabel) -> Result<BilinearForm> {
    let form = match (&spec.family, label) {
        (Family::TrivialSq, ClassLabel::Trivial) => regular::representative_trivial(spec),
        (Family::Regular, ClassLabel::Group { .. }) => regular::representative(spec, label),
        (Family::RegularSq, ClassLabel::Paired)
        | (Family::RegularSq, ClassLabel::Alpha { .. })
        | (Family::RegularSq, ClassLabel::Mu { .. }) => regular_sq::representative(spec, label),
        (Family::AnBn(_), ClassLabel::Omega { .. }) => anbn::representative(spec, label),
        (Family::Cnf(..), ClassLabel::EvenCoeffs { .. })
        | (Family::CnInf(_), ClassLabel::EvenCoeffs { .. }) => cnf::representative(spec, label),
        (Family::CnfSq(..), ClassLabel::Kappa { .. })
        | (Family::CnInfSq(_), ClassLabel::Kappa { .. }) => cnf_sq::representative(spec, label),
        _ => Err(Error::Unsupported(format!(
            "label {label:?} does not name a class of family {:?}",
            spec.family
        ))),
    }?;
    debug_assert!(crate::forms::ensure_invariant_symplectic(&form).is_ok());
    Ok(form)
}

/// Reduces an invariant symplectic form to its class label, together with an
/// explicit isometry carrying the input onto [`representative`]`(label)`.
///
/// # Errors
///
/// [`Error::NotInvariant`] / [`Error::NotSymplectic`] with a diagnosis when
/// the input fails the preconditions, and [`Error::Unsupported`] when the
/// form is decomposable on a squared family (a diagonal block restricts
/// non-degenerately), which places it outside the classified shapes.
pub fn canonicalize(b: &BilinearForm) -> Result<(ClassLabel, Witness)> {
    crate::forms::ensure_invariant_symplectic(b)?;
    let (label, witness) = match &b.spec.family {
        Family::TrivialSq => regular::canonicalize_trivial(b)?,
        Family::Regular => regular::canonicalize(b)?,
        Family::RegularSq => regular_sq::canonicalize(b)?,
        Family::AnBn(_) => anbn::canonicalize(b)?,
        Family::Cnf(..) => cnf::canonicalize(b)?,
        Family::CnInf(_) => cnf::canonicalize_swapped(b)?,
        Family::CnfSq(..) => cnf_sq::canonicalize(b)?,
        Family::CnInfSq(_) => cnf_sq::canonicalize_swapped(b)?,
    };
    let target = representative(&b.spec, &label)?;
    assert!(
        bform_isometry_check(b, &target, &witness.m),
        "canonicalization produced an unsound witness"
    );
    Ok((label, witness))
}

// ---------------------------------------------------------------------------
// Quadratic refinements
// ---------------------------------------------------------------------------

/// Whether the bilinear class admits an invariant quadratic refinement.
///
/// # Errors
///
/// As for [`representative`] when the label is invalid for the family.
pub fn quad_exists(spec: &ModuleSpec, label: &ClassLabel) -> Result<bool> {
    representative(spec, label)?;
    Ok(match (&spec.family, label) {
        (Family::TrivialSq, _) | (Family::Regular, _) | (Family::RegularSq, _) => true,
        (Family::AnBn(n), ClassLabel::Omega { coeffs }) => anbn::quad_exists(*n, coeffs),
        (Family::Cnf(..), _) | (Family::CnInf(_), _) => cnf::quad_exists(spec, label)?,
        (Family::CnfSq(..), _) | (Family::CnInfSq(_), _) => cnf_sq::quad_exists(spec, label)?,
        _ => unreachable!("the representative call above validated the label"),
    })
}

/// The canonical invariant quadratic forms over the class representative,
/// pairwise non-isometric, with their labels.  One form when the class is
/// quadratically unique, otherwise one per Artin–Schreier coset.
///
/// # Errors
///
/// [`Error::Unsupported`] when no invariant quadratic form exists.
pub fn quad_representatives(
    spec: &ModuleSpec,
    label: &ClassLabel,
) -> Result<(Vec<QuadraticForm>, Vec<QuadLabel>)> {
    if !quad_exists(spec, label)? {
        return Err(Error::Unsupported(format!(
            "no invariant quadratic form exists on class {label:?}"
        )));
    }
    let (forms, labels) = match &spec.family {
        Family::TrivialSq => regular::quad_representatives_trivial(spec)?,
        Family::Regular => regular::quad_representatives(spec, label)?,
        Family::RegularSq => regular_sq::quad_representatives(spec, label)?,
        Family::AnBn(_) => anbn::quad_representatives(spec, label)?,
        Family::Cnf(..) => cnf::quad_representatives(spec, label)?,
        Family::CnInf(_) => cnf::quad_representatives_swapped(spec, label)?,
        Family::CnfSq(..) => cnf_sq::quad_representatives(spec, label)?,
        Family::CnInfSq(_) => cnf_sq::quad_representatives_swapped(spec, label)?,
    };
    debug_assert_eq!(forms.len(), labels.len());
    debug_assert!(forms.iter().all(quad_is_invariant));
    Ok((forms, labels))
}

/// Reduces an invariant quadratic form whose polar form is a class
/// representative to its quadratic label, with an isometry witness onto the
/// canonical refinement.
///
/// # Errors
///
/// [`Error::Shape`] when the polar form is not a class representative
/// (canonicalize the bilinear form first), [`Error::NotInvariant`] when the
/// quadratic form itself is not invariant.
pub fn quad_canonicalize(q: &QuadraticForm) -> Result<(QuadLabel, Witness)> {
    let polar = q.polar();
    let (label, _) = canonicalize(&polar)?;
    let rep = representative(&polar.spec, &label)?;
    if polar.gram != rep.gram {
        return Err(Error::Shape(
            "the polar form of the quadratic input is not a class representative; \
             canonicalize the bilinear form first"
                .to_owned(),
        ));
    }
    if !quad_is_invariant(q) {
        return Err(Error::NotInvariant(
            "the quadratic form is not invariant under the group action".to_owned(),
        ));
    }
    match &q.spec.family {
        Family::TrivialSq => regular::quad_canonicalize_trivial(q),
        Family::Regular => regular::quad_canonicalize(q, &label),
        Family::RegularSq => regular_sq::quad_canonicalize(q),
        Family::AnBn(_) => anbn::quad_canonicalize(q),
        Family::Cnf(..) => cnf::quad_canonicalize(q),
        Family::CnInf(_) => cnf::quad_canonicalize_swapped(q),
        Family::CnfSq(..) => cnf_sq::quad_canonicalize(q),
        Family::CnInfSq(_) => cnf_sq::quad_canonicalize_swapped(q),
    }
}

// ---------------------------------------------------------------------------
// Shared reduction machinery
// ---------------------------------------------------------------------------

/// Accumulator for a chain of congruence steps on a bilinear form.  Every
/// step is checked to be an invertible endomorphism and to keep the running
/// form invariant and symplectic; the final form must match the canonical
/// representative exactly.
pub(crate) struct Reduction {
    spec: ModuleSpec,
    act: GroupAction,
    start: Mat,
    current: Mat,
    acc: Mat,
}

impl Reduction {
    pub(crate) fn new(b: &BilinearForm) -> Reduction {
        Reduction {
            spec: b.spec.clone(),
            act: action(&b.spec),
            start: b.gram.clone(),
            current: b.gram.clone(),
            acc: Mat::identity(b.spec.field, b.spec.dim()),
        }
    }

    /// The running Gram matrix.
    pub(crate) fn gram(&self) -> &Mat {
        &self.current
    }

    /// Applies one congruence step `S ↦ MᵀSM`.
    pub(crate) fn apply(&mut self, step: &Mat) {
        assert!(
            endomorphism_unit(&self.spec, step),
            "reduction step is not an invertible endomorphism"
        );
        self.current = self.current.congruence(step);
        self.acc = self.acc.mul(step);
        debug_assert_eq!(self.start.congruence(&self.acc), self.current);
        assert!(
            crate::forms::gram_is_invariant(&self.act, &self.current)
                && self.current.is_alternating_gram()
                && self.current.is_invertible(),
            "reduction step left the invariant symplectic forms"
        );
    }

    /// Checks the accumulated reduction against the expected canonical Gram
    /// matrix and returns the witness.
    pub(crate) fn finish(self, expected: &Mat) -> Witness {
        assert_eq!(
            self.current, *expected,
            "reduction did not reach the canonical representative"
        );
        Witness { m: self.acc }
    }
}

/// Accumulator for a chain of congruence steps on a quadratic form, with the
/// same soundness checks as [`Reduction`] (invariance is the quadratic one;
/// equality at the end is equality of upper-triangular representatives).
pub(crate) struct QuadReduction {
    spec: ModuleSpec,
    start: QuadraticForm,
    current: QuadraticForm,
    acc: Mat,
}

impl QuadReduction {
    pub(crate) fn new(q: &QuadraticForm) -> QuadReduction {
        QuadReduction {
            spec: q.spec.clone(),
            start: q.clone(),
            current: q.clone(),
            acc: Mat::identity(q.spec.field, q.spec.dim()),
        }
    }

    pub(crate) fn apply(&mut self, step: &Mat) {
        assert!(
            endomorphism_unit(&self.spec, step),
            "reduction step is not an invertible endomorphism"
        );
        self.current = QuadraticForm::new(self.spec.clone(), &self.current.rep().congruence(step))
            .expect("congruence preserves the shape");
        self.acc = self.acc.mul(step);
        assert!(
            quad_is_invariant(&self.current),
            "reduction step left the invariant quadratic forms"
        );
        debug_assert!(crate::forms::quad_isometry_check(
            &self.start,
            &self.current,
            &self.acc
        ));
    }

    pub(crate) fn finish(self, expected: &QuadraticForm) -> Witness {
        assert_eq!(
            self.current.rep(),
            expected.rep(),
            "reduction did not reach the canonical quadratic representative"
        );
        Witness { m: self.acc }
    }
}

// ---------------------------------------------------------------------------
// Shared label plumbing
// ---------------------------------------------------------------------------

/// Checks that every entry of a label coefficient vector lies in the field.
pub(crate) fn check_coeffs(field: FieldSpec, coeffs: &[u64], what: &str) -> Result<()> {
    if let Some(&bad) = coeffs.iter().find(|&&c| !field.contains(c)) {
        return Err(Error::Shape(format!(
            "{what} coefficient {bad} lies outside the field of order {}",
            field.order()
        )));
    }
    Ok(())
}
