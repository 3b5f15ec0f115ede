//! Classification on the square of the group algebra.
//!
//! Invariant forms are assembled from multiplication matrices: the Gram
//! matrix is `(α̂ β̂; β̂ γ̂)` for group-algebra elements `α, γ` (hollow) and
//! `β`.  The classified shapes have both diagonal restrictions degenerate
//! (zero augmentation); the pair `(α, γ)` then moves by the entrywise
//! squared augmentation matrix of the transforming block matrix, which
//! sorts every form into the hyperbolic class, the `Alpha` line, or the
//! `Mu` line.  Quadratic refinements are unique: the free constants on the
//! two half-diagonals are cleared by the self-inverse unit
//! `(I y·J; x·J I)` with `J` the all-ones block.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::forms::{s_hat, BilinearForm, QuadraticForm};
use crate::kgmodules::{kg_augmentation, kg_from_hat, kg_hat, kg_inv, ModuleSpec};
use crate::matrix::Mat;

use super::{check_coeffs, ClassLabel, QuadLabel, QuadReduction, Reduction, Witness};

/// `Paired`, then the `Alpha` line, then the `Mu` line.
pub(super) fn enumerate(field: FieldSpec) -> Vec<ClassLabel> {
    let mut labels = vec![ClassLabel::Paired];
    labels.extend(field.elements().map(|lambda| ClassLabel::Alpha { lambda }));
    labels.extend(field.elements().map(|mu| ClassLabel::Mu { mu }));
    labels
}

pub(super) fn representative(spec: &ModuleSpec, label: &ClassLabel) -> Result<BilinearForm> {
    let k = spec.field;
    let (alpha, gamma) = match *label {
        ClassLabel::Paired => ([0; 4], [0; 4]),
        ClassLabel::Alpha { lambda } => {
            check_coeffs(k, &[lambda], "alpha")?;
            ([0, 1, lambda, k.add(1, lambda)], [0; 4])
        }
        ClassLabel::Mu { mu } => {
            check_coeffs(k, &[mu], "mu")?;
            ([0, 0, 1, 1], [0, mu, 0, mu])
        }
        _ => unreachable!("dispatch guarantees a squared group-algebra label"),
    };
    let gram = Mat::block2(
        &kg_hat(k, alpha),
        &Mat::identity(k, 4),
        &Mat::identity(k, 4),
        &kg_hat(k, gamma),
    );
    BilinearForm::new(spec.clone(), gram)
}

/// The three multiplication-matrix blocks `(α, β, γ)` of an invariant Gram
/// matrix.
fn blocks(gram: &Mat) -> Result<([u64; 4], [u64; 4], [u64; 4])> {
    Ok((
        kg_from_hat(&gram.submatrix(0, 0, 4, 4))?,
        kg_from_hat(&gram.submatrix(0, 4, 4, 4))?,
        kg_from_hat(&gram.submatrix(4, 4, 4, 4))?,
    ))
}

/// `(aI bI; cI dI)` with scalar entries.
fn scalar_step(k: FieldSpec, a: u64, b: u64, c: u64, d: u64) -> Mat {
    Mat::block2(
        &Mat::identity(k, 4).scale(a),
        &Mat::identity(k, 4).scale(b),
        &Mat::identity(k, 4).scale(c),
        &Mat::identity(k, 4).scale(d),
    )
}

/// Right-normalization `diag(I, hat(β⁻¹))`, making the pairing block the
/// identity without touching `α`.
fn beta_normalize(k: FieldSpec, red: &mut Reduction) -> Result<()> {
    let (_, beta, _) = blocks(red.gram())?;
    let step = Mat::block_diag(&[&Mat::identity(k, 4), &kg_hat(k, kg_inv(k, beta)?)]);
    red.apply(&step);
    Ok(())
}

pub(super) fn canonicalize(b: &BilinearForm) -> Result<(ClassLabel, Witness)> {
    let k = b.spec.field;
    let mut red = Reduction::new(b);
    let (alpha, _, gamma) = blocks(red.gram())?;
    if kg_augmentation(k, alpha) != 0 || kg_augmentation(k, gamma) != 0 {
        return Err(Error::Unsupported(
            "a diagonal block restricts non-degenerately, so the form splits off a proper \
             orthogonal summand; only indecomposable pairings of the two copies are classified"
                .into(),
        ));
    }
    // With zero augmentations, α and γ are determined by their coefficient
    // pairs at (g₂, g₁g₂); the block moves act on the pair matrix N by
    // right multiplication with the squared-augmentation matrix.
    let pair = |x: [u64; 4]| (x[2], x[3]);
    let n_mat = {
        let ((a2, a3), (c2, c3)) = (pair(alpha), pair(gamma));
        Mat::from_rows(k, &[vec![a2, c2], vec![a3, c3]])
    };

    if n_mat.is_invertible() {
        // Move N onto the Mu shape, normalize β, and read off μ.
        let target = Mat::from_rows(k, &[vec![1, 0], vec![1, 1]]);
        let q = n_mat.inverse()?.mul(&target);
        red.apply(&scalar_step(
            k,
            k.sqrt(q.at(0, 0)),
            k.sqrt(q.at(0, 1)),
            k.sqrt(q.at(1, 0)),
            k.sqrt(q.at(1, 1)),
        ));
        beta_normalize(k, &mut red)?;
        let (_, _, gamma) = blocks(red.gram())?;
        let label = ClassLabel::Mu { mu: gamma[1] };
        let target = representative(&b.spec, &label)?;
        return Ok((label, red.finish(&target.gram)));
    }

    if n_mat.rank() == 0 {
        beta_normalize(k, &mut red)?;
        let label = ClassLabel::Paired;
        let target = representative(&b.spec, &label)?;
        return Ok((label, red.finish(&target.gram)));
    }

    // Singular nonzero N: the columns are proportional, γ = y·α after
    // swapping the copies if necessary.
    let (mut alpha, mut gamma) = (alpha, gamma);
    if alpha == [0; 4] {
        let id = Mat::identity(k, 4);
        let zero = Mat::zero(k, 4, 4);
        red.apply(&Mat::block2(&zero, &id, &id, &zero));
        let bl = blocks(red.gram())?;
        alpha = bl.0;
        gamma = bl.2;
    }
    let y = if alpha[2] != 0 {
        k.mul(gamma[2], k.inv(alpha[2])?)
    } else {
        k.mul(gamma[3], k.inv(alpha[3])?)
    };
    let x = if alpha[1] != 0 {
        k.inv(alpha[1])?
    } else {
        k.inv(alpha[2])?
    };
    // (√x·I √y·I; 0 I) scales α onto its normal form and clears γ = y·α.
    red.apply(&scalar_step(k, k.sqrt(x), k.sqrt(y), 0, 1));
    beta_normalize(k, &mut red)?;
    let (alpha, _, gamma) = blocks(red.gram())?;
    debug_assert_eq!(gamma, [0; 4]);
    let label = if alpha[1] != 0 {
        ClassLabel::Alpha { lambda: alpha[2] }
    } else {
        ClassLabel::Mu { mu: 0 }
    };
    let target = representative(&b.spec, &label)?;
    Ok((label, red.finish(&target.gram)))
}

/// The single quadratic refinement: the strict upper triangle.
pub(super) fn quad_representatives(
    spec: &ModuleSpec,
    label: &ClassLabel,
) -> Result<(Vec<QuadraticForm>, Vec<QuadLabel>)> {
    let rep = representative(spec, label)?;
    Ok((vec![s_hat(&rep)?], vec![QuadLabel::Unique]))
}

pub(super) fn quad_canonicalize(q: &QuadraticForm) -> Result<(QuadLabel, Witness)> {
    let k = q.spec.field;
    // Invariance forces a constant diagonal on each half.
    let x = q.rep().at(0, 0);
    let y = q.rep().at(4, 4);
    for i in 0..4 {
        assert_eq!(q.rep().at(i, i), x, "first half-diagonal must be constant");
        assert_eq!(
            q.rep().at(4 + i, 4 + i),
            y,
            "second half-diagonal must be constant"
        );
    }
    let ones = Mat::from_fn(k, 4, 4, |_, _| 1);
    let id = Mat::identity(k, 4);
    let step = Mat::block2(&id, &ones.scale(y), &ones.scale(x), &id);
    let mut red = QuadReduction::new(q);
    red.apply(&step);
    let expected = s_hat(&q.polar())?;
    Ok((QuadLabel::Unique, red.finish(&expected)))
}
