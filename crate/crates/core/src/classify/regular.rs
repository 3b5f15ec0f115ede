//! Classification on the trivial two-dimensional module and on the group
//! algebra itself.
//!
//! On the trivial module every invertible matrix is an isometry candidate,
//! so there is a single symplectic class and the quadratic refinements are
//! the two Artin–Schreier classes.  On the group algebra the invariant
//! forms are exactly `S_φ(x, y) = augmentation coefficient of x·φ·ȳ`, whose
//! Gram matrix is the multiplication matrix of a hollow element `φ`; the
//! class is the pair of mixed coefficients after normalizing the
//! augmentation to one, and each class carries a unique quadratic
//! refinement.

use crate::error::Result;
use crate::field::{artin_schreier_reps, coset_reduce, FieldSpec};
use crate::forms::{s_hat, BilinearForm, QuadraticForm};
use crate::kgmodules::{kg_augmentation, kg_from_hat, kg_hat, ModuleSpec};
use crate::matrix::Mat;

use super::{check_coeffs, ClassLabel, QuadLabel, QuadReduction, Reduction, Witness};

// ---------------------------------------------------------------------------
// TrivialSq
// ---------------------------------------------------------------------------

/// Gram matrix `(0 1; 1 0)` of the single class on the trivial module.
pub(super) fn representative_trivial(spec: &ModuleSpec) -> Result<BilinearForm> {
    let k = spec.field;
    BilinearForm::new(
        spec.clone(),
        Mat::from_rows(k, &[vec![0, 1], vec![1, 0]]),
    )
}

pub(super) fn canonicalize_trivial(b: &BilinearForm) -> Result<(ClassLabel, Witness)> {
    let k = b.spec.field;
    let s = b.gram.at(0, 1);
    let mut red = Reduction::new(b);
    let scale = Mat::from_fn(k, 2, 2, |r, c| {
        if r != c {
            0
        } else if r == 0 {
            1
        } else {
            k.inv(s).expect("symplectic forms are invertible")
        }
    });
    red.apply(&scale);
    let target = representative_trivial(&b.spec)?;
    Ok((ClassLabel::Trivial, red.finish(&target.gram)))
}

/// The two Artin–Schreier quadratic classes `x₁² + x₁x₂ + r·x₂²`.
pub(super) fn quad_representatives_trivial(
    spec: &ModuleSpec,
) -> Result<(Vec<QuadraticForm>, Vec<QuadLabel>)> {
    let k = spec.field;
    let mut forms = Vec::new();
    let mut labels = Vec::new();
    for x in artin_schreier_reps(k) {
        let rep = Mat::from_rows(k, &[vec![1, 1], vec![0, x]]);
        forms.push(QuadraticForm::new(spec.clone(), &rep)?);
        labels.push(QuadLabel::ArfRep(x));
    }
    Ok((forms, labels))
}

pub(super) fn quad_canonicalize_trivial(q: &QuadraticForm) -> Result<(QuadLabel, Witness)> {
    let k = q.spec.field;
    let mut red = QuadReduction::new(q);
    // The representative is (u 1; 0 w) with free diagonal (u, w).
    if q.rep().at(0, 0) == 0 && q.rep().at(1, 1) != 0 {
        red.apply(&Mat::from_rows(k, &[vec![0, 1], vec![1, 0]]));
    }
    if red.current.rep().at(0, 0) == 0 {
        // Now w = 0 as well: a shear makes the leading entry one.
        red.apply(&Mat::from_rows(k, &[vec![1, 0], vec![1, 1]]));
    }
    let u = red.current.rep().at(0, 0);
    let root = k.sqrt(u);
    red.apply(&Mat::from_rows(
        k,
        &[vec![k.inv(root)?, 0], vec![0, root]],
    ));
    let (x, delta) = coset_reduce(k, red.current.rep().at(1, 1));
    red.apply(&Mat::from_rows(k, &[vec![1, delta], vec![0, 1]]));
    let expected = QuadraticForm::new(
        q.spec.clone(),
        &Mat::from_rows(k, &[vec![1, 1], vec![0, x]]),
    )?;
    Ok((QuadLabel::ArfRep(x), red.finish(&expected)))
}

// ---------------------------------------------------------------------------
// Regular
// ---------------------------------------------------------------------------

/// All labels `(b, c)` over the field, in lexicographic order.
pub(super) fn enumerate(field: FieldSpec) -> Vec<ClassLabel> {
    field
        .elements()
        .flat_map(|b| field.elements().map(move |c| ClassLabel::Group { b, c }))
        .collect()
}

/// The hollow augmentation-one element of the label.
fn label_element(field: FieldSpec, label: &ClassLabel) -> Result<[u64; 4]> {
    let ClassLabel::Group { b, c } = *label else {
        unreachable!("dispatch guarantees a group-algebra label");
    };
    check_coeffs(field, &[b, c], "group algebra")?;
    Ok([0, b, c, field.add(1, field.add(b, c))])
}

pub(super) fn representative(spec: &ModuleSpec, label: &ClassLabel) -> Result<BilinearForm> {
    let phi = label_element(spec.field, label)?;
    BilinearForm::new(spec.clone(), kg_hat(spec.field, phi))
}

pub(super) fn canonicalize(b: &BilinearForm) -> Result<(ClassLabel, Witness)> {
    let k = b.spec.field;
    // Invariance forces the Gram matrix to be a multiplication matrix; its
    // element is hollow (the form is) with nonzero augmentation (the form
    // is invertible and the determinant is the fourth power of the
    // augmentation).
    let phi = kg_from_hat(&b.gram)?;
    debug_assert_eq!(phi[0], 0);
    let aug = kg_augmentation(k, phi);
    let scale = k.sqrt(k.inv(aug)?);
    let mut red = Reduction::new(b);
    red.apply(&Mat::identity(k, 4).scale(scale));
    let normalized = kg_from_hat(red.gram())?;
    let label = ClassLabel::Group {
        b: normalized[1],
        c: normalized[2],
    };
    let target = representative(&b.spec, &label)?;
    Ok((label, red.finish(&target.gram)))
}

/// The unique quadratic refinement: the strict upper triangle of the Gram
/// matrix.
pub(super) fn quad_representatives(
    spec: &ModuleSpec,
    label: &ClassLabel,
) -> Result<(Vec<QuadraticForm>, Vec<QuadLabel>)> {
    let rep = representative(spec, label)?;
    Ok((vec![s_hat(&rep)?], vec![QuadLabel::Unique]))
}

pub(super) fn quad_canonicalize(
    q: &QuadraticForm,
    label: &ClassLabel,
) -> Result<(QuadLabel, Witness)> {
    let k = q.spec.field;
    // Invariance forces a constant diagonal r·I₄ on top of the strict upper
    // triangle of the polar form.
    let r = q.rep().at(0, 0);
    for i in 1..4 {
        assert_eq!(
            q.rep().at(i, i),
            r,
            "invariant quadratic forms on the group algebra have constant diagonal"
        );
    }
    let mut red = QuadReduction::new(q);
    // I + r·(all-ones) is a self-inverse unit of the group algebra and
    // clears the diagonal.
    let move_m = Mat::identity(k, 4).add(&kg_hat(k, [r, r, r, r]));
    red.apply(&move_m);
    let target = representative(&q.spec, label)?;
    Ok((QuadLabel::Unique, red.finish(&s_hat(&target)?)))
}
