//! Classification on the self-paired chain modules.
//!
//! The invariant forms are `(0 B; B D)` with `B` a symmetric invertible
//! member of the intertwining space `𝒲 = {B : Πᵀ·B = B·Π}` and `D`
//! symmetric hollow.  `𝒲` is parametrized over the residue field
//! `K = k[ε]` by banded matrices; killing `D` with a unipotent move and
//! reducing the band parameter modulo squared centralizer units leaves the
//! even-position band coefficients as the complete invariant.  The
//! infinite-parameter chain family is carried onto the `f = T` case by the
//! half-reversal basis swap and classified there.

use crate::error::{Error, Result};
use crate::field::Poly;
use crate::forms::{endomorphism_unit, quad_isometry_check, BilinearForm, QuadraticForm};
use crate::kgmodules::{
    cn_inf_swap, jordan_data, w_param, centralizer_element, Family, JordanData, ModuleSpec,
};
use crate::matrix::{lh_coeffs, lh_coset_reduce, lh_from_coeffs, split_symmetric_hollow, Mat};

use super::{check_coeffs, quad, ClassLabel, QuadLabel, Reduction, Witness};

/// The chain parameters `(n, f)`, reading the infinite-parameter family as
/// its `f = T` transport.
fn chain_params(spec: &ModuleSpec) -> (usize, Poly) {
    match &spec.family {
        Family::Cnf(n, f) => (*n, f.clone()),
        Family::CnInf(n) => (*n, Poly::t(spec.field)),
        _ => unreachable!("dispatch guarantees a chain family"),
    }
}

/// The `f = T` sibling together with the symmetric involution carrying the
/// infinite-parameter module onto it.
fn transport(spec: &ModuleSpec) -> Result<(ModuleSpec, Mat)> {
    let Family::CnInf(n) = spec.family else {
        unreachable!("transport applies to the infinite-parameter family");
    };
    let spec_t = ModuleSpec::new(spec.field, Family::Cnf(n, Poly::t(spec.field)))?;
    Ok((spec_t, cn_inf_swap(spec)))
}

/// Every even-position band vector over the residue field, in
/// lexicographic order.
pub(super) fn enumerate(spec: &ModuleSpec) -> Result<Vec<ClassLabel>> {
    let (n, f) = chain_params(spec);
    let jd = jordan_data(spec.field, n, &f)?;
    let qm = jd.ext.ext.order();
    let len = n / 2;
    let mut labels = Vec::new();
    for code in 0..qm.pow(len as u32) {
        let mut coeffs = vec![0u64; len];
        let mut c = code;
        for pos in (0..len).rev() {
            coeffs[pos] = c % qm;
            c /= qm;
        }
        labels.push(ClassLabel::EvenCoeffs { coeffs });
    }
    Ok(labels)
}

/// The banded parameter of a label: anti-diagonal one plus the label
/// coefficients on the even positions below it.
fn band_parameter(jd: &JordanData, coeffs: &[u64]) -> Result<Mat> {
    let n = jd.n;
    if coeffs.len() != n / 2 {
        return Err(Error::Shape(format!(
            "band label must have {} coefficients, got {}",
            n / 2,
            coeffs.len()
        )));
    }
    check_coeffs(jd.ext.ext, coeffs, "band")?;
    let mut full = vec![0u64; n];
    full[0] = 1;
    for (j, &c) in coeffs.iter().enumerate() {
        full[2 * j + 1] = c;
    }
    Ok(lh_from_coeffs(jd.ext.ext, n, &full))
}

pub(super) fn representative(spec: &ModuleSpec, label: &ClassLabel) -> Result<BilinearForm> {
    if matches!(spec.family, Family::CnInf(_)) {
        let (spec_t, w) = transport(spec)?;
        let rep_t = representative(&spec_t, label)?;
        return BilinearForm::new(spec.clone(), rep_t.gram.congruence(&w));
    }
    let ClassLabel::EvenCoeffs { coeffs } = label else {
        unreachable!("dispatch guarantees a band label");
    };
    let (n, f) = chain_params(spec);
    let jd = jordan_data(spec.field, n, &f)?;
    let b = crate::kgmodules::script_v(&jd, &band_parameter(&jd, coeffs)?)?;
    debug_assert!(b.is_symmetric());
    let mn = jd.ext.m * jd.n;
    let zero = Mat::zero(spec.field, mn, mn);
    BilinearForm::new(spec.clone(), Mat::block2(&zero, &b, &b, &zero))
}

pub(super) fn canonicalize(b: &BilinearForm) -> Result<(ClassLabel, Witness)> {
    let k = b.spec.field;
    let (n, f) = chain_params(&b.spec);
    let jd = jordan_data(k, n, &f)?;
    let mn = jd.ext.m * jd.n;
    let mut red = Reduction::new(b);

    // Invariance forces (0 B; B D) with B a symmetric member of 𝒲.
    assert_eq!(
        red.gram().submatrix(0, 0, mn, mn),
        Mat::zero(k, mn, mn),
        "invariant forms have no pairing within the chain half"
    );
    let pairing = red.gram().submatrix(0, mn, mn, mn);
    assert!(pairing.is_symmetric(), "the pairing block must be symmetric");

    // Kill D with (I B⁻¹Z; 0 I) where D = Z + Zᵀ.
    let d = red.gram().submatrix(mn, mn, mn, mn);
    let z = split_symmetric_hollow(&d)?;
    let y = pairing.inverse()?.mul(&z);
    let id = Mat::identity(k, mn);
    red.apply(&Mat::block2(&id, &y, &Mat::zero(k, mn, mn), &id));

    // Reduce the band parameter by a squared centralizer unit:
    // uᵀ·𝒱(X)·u = 𝒱(X·X′²) for u the centralizer element of X′.
    let x_b = w_param(&jd, &pairing)?;
    let (_, x_prime) = lh_coset_reduce(&x_b, 0)?;
    let u = centralizer_element(&jd, &x_prime)?;
    red.apply(&Mat::block_diag(&[&u, &u]));

    let reduced = w_param(&jd, &red.gram().submatrix(0, mn, mn, mn))?;
    let full = lh_coeffs(&reduced)?;
    debug_assert_eq!(full[0], 1, "the reduced band has leading coefficient one");
    let label = ClassLabel::EvenCoeffs {
        coeffs: (0..n / 2).map(|j| full[2 * j + 1]).collect(),
    };
    let target = representative(&b.spec, &label)?;
    Ok((label, red.finish(&target.gram)))
}

pub(super) fn canonicalize_swapped(b: &BilinearForm) -> Result<(ClassLabel, Witness)> {
    let (spec_t, w) = transport(&b.spec)?;
    let b_t = BilinearForm::new(spec_t, b.gram.congruence(&w))?;
    let (label, wit_t) = canonicalize(&b_t)?;
    let m = w.mul(&wit_t.m).mul(&w);
    assert!(
        endomorphism_unit(&b.spec, &m),
        "transported witness must be an endomorphism unit"
    );
    Ok((label, Witness { m }))
}

/// Existence of a quadratic refinement, from the residue parameter
/// `ε + ε²`: when it vanishes only odd chains with the band `(1, 0, …)`
/// qualify, otherwise only even chains with the geometric band
/// `((ε+ε²)⁻¹, (ε+ε²)⁻², …)`.
pub(super) fn quad_exists(spec: &ModuleSpec, label: &ClassLabel) -> Result<bool> {
    let ClassLabel::EvenCoeffs { coeffs } = label else {
        unreachable!("dispatch guarantees a band label");
    };
    let (n, f) = chain_params(spec);
    let jd = jordan_data(spec.field, n, &f)?;
    let kk = jd.ext.ext;
    let eps = jd.ext.epsilon;
    let w = kk.add(eps, kk.mul(eps, eps));
    Ok(if w == 0 {
        n % 2 == 1
            && coeffs
                .iter()
                .enumerate()
                .all(|(j, &c)| c == u64::from(j == 0))
    } else {
        let winv = kk.inv(w)?;
        n % 2 == 0
            && coeffs
                .iter()
                .enumerate()
                .all(|(j, &c)| c == kk.pow(winv, j as u64 + 1))
    })
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

pub(super) fn quad_representatives_swapped(
    spec: &ModuleSpec,
    label: &ClassLabel,
) -> Result<(Vec<QuadraticForm>, Vec<QuadLabel>)> {
    let (spec_t, w) = transport(spec)?;
    let (reps_t, labels) = quad_representatives(&spec_t, label)?;
    let reps = reps_t
        .iter()
        .map(|q| QuadraticForm::new(spec.clone(), &q.rep().congruence(&w)))
        .collect::<Result<Vec<_>>>()?;
    Ok((reps, labels))
}

pub(super) fn quad_canonicalize_swapped(q: &QuadraticForm) -> Result<(QuadLabel, Witness)> {
    let (spec_t, w) = transport(&q.spec)?;
    let q_t = QuadraticForm::new(spec_t.clone(), &q.rep().congruence(&w))?;
    let (label, wit_t) = quad::quad_canon(&q_t)?;
    let m = w.mul(&wit_t.m).mul(&w);
    assert!(
        endomorphism_unit(&q.spec, &m),
        "transported witness must be an endomorphism unit"
    );
    // The canonical refinement transports back exactly.
    let canonical_t = QuadraticForm::new(spec_t, &q_t.rep().congruence(&wit_t.m))?;
    let expected = QuadraticForm::new(q.spec.clone(), &canonical_t.rep().congruence(&w))?;
    assert!(
        quad_isometry_check(q, &expected, &m),
        "transported witness must carry the form onto the canonical refinement"
    );
    Ok((label, Witness { m }))
}
