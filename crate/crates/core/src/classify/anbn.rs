//! Classification on the odd-dimensional chain pairs.
//!
//! Invariance forces the Gram matrix into the shape `(0 A; Aᵀ D)` where `A`
//! carries a constant scalar on its full anti-diagonal and the band
//! coefficients `ω₁, …, ω_{2n}` on the anti-diagonals below it, confined to
//! the lower-right block; `D` is an arbitrary symmetric hollow block.
//! Killing `D` with a unipotent move and rescaling the two chain halves
//! normalizes the scalar to one and the leading band coefficient to one,
//! leaving the band tail as the complete invariant.  Quadratic refinements
//! exist exactly when consecutive band coefficients agree in pairs beyond
//! the first, and are handled by the shared unipotent machinery.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::forms::{BilinearForm, QuadraticForm};
use crate::kgmodules::{Family, ModuleSpec};
use crate::matrix::{anti_identity, hankel, split_symmetric_hollow, Mat};

use super::{check_coeffs, quad, ClassLabel, QuadLabel, Reduction, Witness};

/// Zero first, then leading index ascending with lexicographic tails.
pub(super) fn enumerate(field: FieldSpec, n: usize) -> Vec<ClassLabel> {
    let q = field.order();
    let len = 2 * n;
    let mut labels = vec![ClassLabel::Omega {
        coeffs: vec![0; len],
    }];
    for lead in 0..len {
        let tail = len - lead - 1;
        for code in 0..q.pow(tail as u32) {
            let mut coeffs = vec![0u64; len];
            coeffs[lead] = 1;
            let mut c = code;
            for pos in (lead + 1..len).rev() {
                coeffs[pos] = c % q;
                c /= q;
            }
            labels.push(ClassLabel::Omega { coeffs });
        }
    }
    labels
}

/// The pairing block: constant `x` on the anti-diagonal and the band `ω`
/// on the anti-diagonals of the lower-right `(n+1)×n` corner.
fn build_a(k: FieldSpec, n: usize, x: u64, coeffs: &[u64]) -> Mat {
    let h = 2 * n + 1;
    let mut a = anti_identity(k, h).scale(x);
    let mut corner = Mat::zero(k, n + 1, n);
    for (i, &w) in coeffs.iter().enumerate() {
        corner = corner.add(&hankel(k, n + 1, n, i as i64 + 2, w));
    }
    a.paste(n, n + 1, &corner);
    a
}

/// Reads the band coefficients back off the pairing block.
fn read_band(a: &Mat, n: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; 2 * n];
    for (i, w) in coeffs.iter_mut().enumerate() {
        let j = i + 1;
        // One cell of the global anti-diagonal r + c = 2n + j inside the
        // corner block.
        let (r, c) = if j <= n { (n, n + j) } else { (j, 2 * n) };
        *w = a.at(r, c);
    }
    coeffs
}

pub(super) fn representative(spec: &ModuleSpec, label: &ClassLabel) -> Result<BilinearForm> {
    let ClassLabel::Omega { coeffs } = label else {
        unreachable!("dispatch guarantees a band label");
    };
    let Family::AnBn(n) = spec.family else {
        unreachable!("dispatch guarantees the chain-pair family");
    };
    let k = spec.field;
    if coeffs.len() != 2 * n {
        return Err(Error::Shape(format!(
            "band label must have {} coefficients, got {}",
            2 * n,
            coeffs.len()
        )));
    }
    check_coeffs(k, coeffs, "band")?;
    if let Some(&first) = coeffs.iter().find(|&&c| c != 0) {
        if first != 1 {
            return Err(Error::Shape(
                "band label must be normalized: its leading coefficient is one".into(),
            ));
        }
    }
    let a = build_a(k, n, 1, coeffs);
    let h = 2 * n + 1;
    let zero = Mat::zero(k, h, h);
    BilinearForm::new(
        spec.clone(),
        Mat::block2(&zero, &a, &a.transpose(), &zero),
    )
}

pub(super) fn canonicalize(b: &BilinearForm) -> Result<(ClassLabel, Witness)> {
    let k = b.spec.field;
    let Family::AnBn(n) = b.spec.family else {
        unreachable!("dispatch guarantees the chain-pair family");
    };
    let h = 2 * n + 1;
    let mut red = Reduction::new(b);

    // Invariance pins the whole shape: zero upper-left block, banded
    // pairing block.
    let a = red.gram().submatrix(0, h, h, h);
    assert_eq!(
        red.gram().submatrix(0, 0, h, h),
        Mat::zero(k, h, h),
        "invariant forms have no pairing within the first half"
    );
    let x = a.at(0, 2 * n);
    let band = read_band(&a, n);
    assert_eq!(
        a,
        build_a(k, n, x, &band),
        "invariant forms carry a constant anti-diagonal and a banded corner"
    );

    // Kill the symmetric hollow tail block with the unipotent move
    // (I A⁻ᵀZ; 0 I) where D = Z + Zᵀ.
    let d = red.gram().submatrix(h, h, h, h);
    let z = split_symmetric_hollow(&d)?;
    let m2 = a.inverse()?.transpose().mul(&z);
    let id = Mat::identity(k, h);
    red.apply(&Mat::block2(&id, &m2, &Mat::zero(k, h, h), &id));

    // Rescale the two chain halves: the anti-diagonal becomes one and the
    // leading band coefficient becomes one.
    let scale_b = match band.iter().find(|&&w| w != 0) {
        Some(&lead) => k.sqrt(k.inv(lead)?),
        None => 1,
    };
    let scale_a = k.inv(k.mul(scale_b, x))?;
    let step = Mat::block_diag(&[
        &Mat::identity(k, n).scale(scale_a),
        &Mat::identity(k, n + 1).scale(scale_b),
        &Mat::identity(k, n + 1).scale(scale_a),
        &Mat::identity(k, n).scale(scale_b),
    ]);
    red.apply(&step);

    let label = ClassLabel::Omega {
        coeffs: read_band(&red.gram().submatrix(0, h, h, h), n),
    };
    let target = representative(&b.spec, &label)?;
    Ok((label, red.finish(&target.gram)))
}

/// Quadratic refinements exist exactly when the band pairs up beyond the
/// leading coefficient: `ω_{2i-1} = ω_{2i-2}` for `2 ≤ i ≤ n`.
pub(super) fn quad_exists(n: usize, coeffs: &[u64]) -> bool {
    (2..=n).all(|i| coeffs[2 * i - 2] == coeffs[2 * i - 3])
}

pub(super) fn quad_representatives(
    spec: &ModuleSpec,
    label: &ClassLabel,
) -> Result<(Vec<QuadraticForm>, Vec<QuadLabel>)> {
    quad::quad_reps(&representative(spec, label)?)
}

pub(super) fn quad_canonicalize(q: &QuadraticForm) -> Result<(QuadLabel, Witness)> {
    quad::quad_canon(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify;
    use crate::forms::quad_is_invariant;
    use crate::kgmodules::action;

    fn spec(e: u32, n: usize) -> ModuleSpec {
        ModuleSpec::new(FieldSpec::canonical(e), Family::AnBn(n)).unwrap()
    }

    #[test]
    fn the_zero_band_representative_is_the_hyperbolic_anti_identity() {
        let s = spec(1, 2);
        let rep = classify::representative(
            &s,
            &ClassLabel::Omega {
                coeffs: vec![0; 4],
            },
        )
        .unwrap();
        let k = s.field;
        let ai = anti_identity(k, 5);
        let z = Mat::zero(k, 5, 5);
        assert_eq!(rep.gram, Mat::block2(&z, &ai, &ai, &z));
    }

    #[test]
    fn banded_forms_with_tails_and_scaling_reduce_correctly() {
        // Over GF(4): scale the whole form and add a random-ish symmetric
        // hollow tail; canonicalization must undo both.
        let s = spec(2, 1);
        let k = s.field;
        for scale in 1..4u64 {
            for w1 in k.elements() {
                for w2 in k.elements() {
                    let a = build_a(k, 1, scale, &[k.mul(scale, w1), k.mul(scale, w2)]);
                    let mut d = Mat::zero(k, 3, 3);
                    d.set(0, 2, 3);
                    d.set(2, 0, 3);
                    d.set(1, 2, 2);
                    d.set(2, 1, 2);
                    let gram = Mat::block2(&Mat::zero(k, 3, 3), &a, &a.transpose(), &d);
                    let form = BilinearForm::new(s.clone(), gram).unwrap();
                    let (label, _) = classify::canonicalize(&form).unwrap();
                    let ClassLabel::Omega { coeffs } = &label else {
                        panic!("wrong label kind");
                    };
                    // Scaling by a square multiplier keeps the projective
                    // band class: (w1, w2) ↦ lead-normalized.
                    match (w1, w2) {
                        (0, 0) => assert_eq!(coeffs, &vec![0, 0]),
                        (0, _) => assert_eq!(coeffs, &vec![0, 1]),
                        _ => {
                            assert_eq!(coeffs[0], 1);
                            // ω₂ scales by the square that renormalizes ω₁.
                            let b2 = k.inv(w1).unwrap();
                            assert_eq!(coeffs[1], k.mul(b2, w2));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn forced_diagonal_matches_the_interleaved_closed_form() {
        for (e, n) in [(1u32, 1usize), (1, 2), (1, 3), (2, 1), (2, 2)] {
            let s = spec(e, n);
            let act = action(&s);
            let h = 2 * n + 1;
            for label in classify::enumerate_classes(&s).unwrap() {
                let ClassLabel::Omega { coeffs } = &label else {
                    panic!("wrong label kind");
                };
                let rep = classify::representative(&s, &label).unwrap();
                let a = rep.gram.submatrix(0, h, h, h);
                let d1 = quad::forced_d1(&act, &a);
                if !quad_exists(n, coeffs) {
                    assert!(d1.is_none(), "existence test and solver disagree");
                    continue;
                }
                // (0, …, 0, ω₁, ω₃, …, ω_{2n−1}, ω_{2n}).
                let mut expected = vec![0u64; n];
                expected.extend((0..n).map(|i| coeffs[2 * i]));
                expected.push(coeffs[2 * n - 1]);
                assert_eq!(d1.expect("existence test and solver disagree"), expected);
            }
        }
    }

    #[test]
    fn quadratic_class_counts_follow_the_band() {
        let s = spec(1, 2);
        for label in classify::enumerate_classes(&s).unwrap() {
            let ClassLabel::Omega { coeffs } = &label else {
                panic!("wrong label kind");
            };
            if !classify::quad_exists(&s, &label).unwrap() {
                continue;
            }
            let (reps, labels) = classify::quad_representatives(&s, &label).unwrap();
            assert!(reps.iter().all(quad_is_invariant));
            if coeffs.iter().all(|&w| w == 0) {
                assert_eq!(labels, vec![QuadLabel::Unique]);
            } else {
                assert_eq!(labels, vec![QuadLabel::ArfRep(0), QuadLabel::ArfRep(1)]);
            }
        }
    }
}
