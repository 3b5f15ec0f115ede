//! Classification on the doubled chain modules.
//!
//! Invariance forces the Gram matrix into the shape `(0 σ; σ D)` over the
//! half split, where `D` is symmetric hollow and the pairing block
//! decomposes into intertwining quarters
//!
//! ```text
//!         ( 𝒱(φ)  𝒱(ψ) )
//!     σ = (             ),        φ, ψ, μ ∈ K[u]/(uⁿ),
//!         ( 𝒱(ψ)  𝒱(μ) )
//! ```
//!
//! with `K` the residue field.  Indecomposability demands `φ` and `μ`
//! non-units (and hence `ψ` a unit); the classification moves are
//! congruences by `diag(υ, υ)` with `υ` a 2×2 block matrix of centralizer
//! elements `(α β; γ δ)`, acting on the parameters by
//!
//! ```text
//!     φ ↦ φα² + μγ²,   μ ↦ φβ² + μδ²,   ψ ↦ φαβ + ψ(αδ + βγ) + μγδ.
//! ```
//!
//! The canonical form fixes `φ = u^{r−1}(1 + Σ_{j<s} φⱼ u^{2j+1})`,
//! `μ = u^{r+2s}` (zero when that power is out of range) and `ψ` a unit
//! supported below `t = ⌊(n−r−2s+1)/2⌋`; the tuple `(r, s, φ, ψ)` is the
//! complete invariant.  The infinite-parameter doubled family is carried
//! onto the `f = T` case by the four-block half-reversal swap.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Poly};
use crate::forms::{endomorphism_unit, quad_isometry_check, BilinearForm, QuadraticForm};
use crate::kgmodules::{
    cn_inf_swap, jordan_data, script_v, w_param, centralizer_element, Family, JordanData,
    ModuleSpec,
};
use crate::matrix::{
    lh_coeffs, lh_coset_reduce, lh_from_coeffs, split_symmetric_hollow, ut_coeffs,
    ut_from_coeffs, Mat,
};

use super::{check_coeffs, quad, ClassLabel, QuadLabel, Reduction, Witness};

// ---------------------------------------------------------------------------
// Truncated polynomial arithmetic in K[u]/(uⁿ)
// ---------------------------------------------------------------------------
//
// Band parameters live in K[u]/(uⁿ) and are handled as coefficient vectors
// of fixed length n (index i ↔ uⁱ).

fn p_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Index of the lowest nonzero coefficient.
fn p_lead(a: &[u64]) -> Option<usize> {
    a.iter().position(|&c| c != 0)
}

fn p_add(kk: FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(&x, &y)| kk.add(x, y)).collect()
}

/// Product truncated to the common length.
fn p_mul(kk: FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len();
    let mut c = vec![0u64; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            c[i + j] = kk.add(c[i + j], kk.mul(x, y));
        }
    }
    c
}

/// Inverse of a unit, by back substitution.
fn p_inv(kk: FieldSpec, a: &[u64]) -> Vec<u64> {
    assert_ne!(a[0], 0, "only units are invertible in K[u]/(u^n)");
    let lead = kk.inv(a[0]).expect("nonzero residue");
    let n = a.len();
    let mut b = vec![0u64; n];
    b[0] = lead;
    for i in 1..n {
        let mut acc = 0;
        for j in 1..=i {
            acc = kk.add(acc, kk.mul(a[j], b[i - j]));
        }
        b[i] = kk.mul(lead, acc);
    }
    b
}

/// Square root of a polynomial supported on even powers (coefficient-wise
/// Frobenius inverse, exact in characteristic two).
fn p_sqrt(kk: FieldSpec, a: &[u64]) -> Vec<u64> {
    let n = a.len();
    let mut b = vec![0u64; n];
    for (i, &c) in a.iter().enumerate() {
        if i % 2 == 1 {
            assert_eq!(c, 0, "square roots exist only for even polynomials");
        } else {
            b[i / 2] = kk.sqrt(c);
        }
    }
    b
}

/// The odd-power part.
fn p_odd(a: &[u64]) -> Vec<u64> {
    a.iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 1 { c } else { 0 })
        .collect()
}

/// Exact division by `u^s` (the low coefficients must vanish).
fn p_shift_down(a: &[u64], s: usize) -> Vec<u64> {
    assert!(a[..s].iter().all(|&c| c == 0), "not divisible by u^{s}");
    let mut b = a[s..].to_vec();
    b.resize(a.len(), 0);
    b
}

/// Multiplication by `u^s`, truncated.
fn p_shift_up(a: &[u64], s: usize) -> Vec<u64> {
    let n = a.len();
    let mut b = vec![0u64; n];
    let kept = n.saturating_sub(s);
    b[n - kept..].copy_from_slice(&a[..kept]);
    b
}

/// `x·uⁱ`.
fn p_monomial(n: usize, i: usize, x: u64) -> Vec<u64> {
    let mut v = vec![0u64; n];
    v[i] = x;
    v
}

fn p_one(n: usize) -> Vec<u64> {
    p_monomial(n, 0, 1)
}

// ---------------------------------------------------------------------------
// Family plumbing
// ---------------------------------------------------------------------------

/// The chain parameters `(n, f)`, reading the doubled infinite-parameter
/// family as its `f = T` transport.
fn chain_params(spec: &ModuleSpec) -> (usize, Poly) {
    match &spec.family {
        Family::CnfSq(n, f) => (*n, f.clone()),
        Family::CnInfSq(n) => (*n, Poly::t(spec.field)),
        _ => unreachable!("dispatch guarantees a doubled chain family"),
    }
}

/// The `f = T` sibling together with the symmetric involution carrying the
/// doubled infinite-parameter module onto it.
fn transport(spec: &ModuleSpec) -> Result<(ModuleSpec, Mat)> {
    let Family::CnInfSq(n) = spec.family else {
        unreachable!("transport applies to the doubled infinite-parameter family");
    };
    let spec_t = ModuleSpec::new(spec.field, Family::CnfSq(n, Poly::t(spec.field)))?;
    Ok((spec_t, cn_inf_swap(spec)))
}

/// Largest `s` for a given lead position: `⌊(n−r+1)/2⌋`.
fn s_max(n: usize, r: usize) -> usize {
    (n + 1 - r) / 2
}

/// Length of the pairing tail: `⌊(n−r−2s+1)/2⌋`.
fn t_len(n: usize, r: usize, s: usize) -> usize {
    (n + 1 - r - 2 * s) / 2
}

fn validate_label(
    kk: FieldSpec,
    n: usize,
    r: usize,
    s: usize,
    phi: &[u64],
    psi: &[u64],
) -> Result<()> {
    if r < 2 || r > n + 1 {
        return Err(Error::Shape(format!(
            "lead position r must lie in 2..={}, got {r}",
            n + 1
        )));
    }
    if s > s_max(n, r) {
        return Err(Error::Shape(format!(
            "offset count s must lie in 0..={}, got {s}",
            s_max(n, r)
        )));
    }
    if phi.len() != s {
        return Err(Error::Shape(format!(
            "phi must have {s} coefficients, got {}",
            phi.len()
        )));
    }
    let t = t_len(n, r, s);
    if psi.len() != t {
        return Err(Error::Shape(format!(
            "psi must have {t} coefficients, got {}",
            psi.len()
        )));
    }
    if t >= 1 && psi[0] == 1 {
        return Err(Error::Shape(
            "the first psi coefficient must differ from one".into(),
        ));
    }
    check_coeffs(kk, phi, "phi")?;
    check_coeffs(kk, psi, "psi")
}

/// All labels `(r, s, φ, ψ)` in lexicographic order.
pub(super) fn enumerate(spec: &ModuleSpec) -> Result<Vec<ClassLabel>> {
    let (n, f) = chain_params(spec);
    let jd = jordan_data(spec.field, n, &f)?;
    let qm = jd.ext.ext.order();
    let decode = |code: u64, len: usize| {
        let mut v = vec![0u64; len];
        let mut c = code;
        for pos in (0..len).rev() {
            v[pos] = c % qm;
            c /= qm;
        }
        v
    };
    let mut labels = Vec::new();
    for r in 2..=n + 1 {
        for s in 0..=s_max(n, r) {
            let t = t_len(n, r, s);
            for phi_code in 0..qm.pow(s as u32) {
                let phi = decode(phi_code, s);
                for psi_code in 0..qm.pow(t as u32) {
                    let psi = decode(psi_code, t);
                    if t >= 1 && psi[0] == 1 {
                        continue;
                    }
                    labels.push(ClassLabel::Kappa {
                        r,
                        s,
                        phi: phi.clone(),
                        psi,
                    });
                }
            }
        }
    }
    Ok(labels)
}

/// The three full band vectors of a label.
fn bands_from_label(
    kk: FieldSpec,
    n: usize,
    r: usize,
    s: usize,
    phi: &[u64],
    psi: &[u64],
) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let mut full_phi = vec![0u64; n];
    if r <= n {
        full_phi[r - 1] = 1;
        for (j, &c) in phi.iter().enumerate() {
            full_phi[r + 2 * j] = c;
        }
    }
    let mut full_mu = vec![0u64; n];
    if r + 2 * s < n {
        full_mu[r + 2 * s] = 1;
    }
    let mut full_psi = vec![0u64; n];
    if psi.is_empty() {
        full_psi[0] = 1;
    } else {
        full_psi[0] = kk.add(1, psi[0]);
        full_psi[1..psi.len()].copy_from_slice(&psi[1..]);
    }
    (full_phi, full_psi, full_mu)
}

/// The Gram matrix `(0 σ; σ 0)` built from three band vectors.
fn sigma_gram(jd: &JordanData, bands: &(Vec<u64>, Vec<u64>, Vec<u64>)) -> Result<Mat> {
    let kk = jd.ext.ext;
    let n = jd.n;
    let lift = |full: &[u64]| -> Result<Mat> {
        let b = script_v(jd, &lh_from_coeffs(kk, n, full))?;
        debug_assert!(b.is_symmetric());
        Ok(b)
    };
    let v_phi = lift(&bands.0)?;
    let v_psi = lift(&bands.1)?;
    let v_mu = lift(&bands.2)?;
    let sigma = Mat::block2(&v_phi, &v_psi, &v_psi, &v_mu);
    let zero = Mat::zero(sigma.field, sigma.rows, sigma.cols);
    Ok(Mat::block2(&zero, &sigma, &sigma, &zero))
}

pub(super) fn representative(spec: &ModuleSpec, label: &ClassLabel) -> Result<BilinearForm> {
    if matches!(spec.family, Family::CnInfSq(_)) {
        let (spec_t, w) = transport(spec)?;
        let rep_t = representative(&spec_t, label)?;
        return BilinearForm::new(spec.clone(), rep_t.gram.congruence(&w));
    }
    let ClassLabel::Kappa { r, s, phi, psi } = label else {
        unreachable!("dispatch guarantees a doubled chain label");
    };
    let (n, f) = chain_params(spec);
    let jd = jordan_data(spec.field, n, &f)?;
    validate_label(jd.ext.ext, n, *r, *s, phi, psi)?;
    let bands = bands_from_label(jd.ext.ext, n, *r, *s, phi, psi);
    BilinearForm::new(spec.clone(), sigma_gram(&jd, &bands)?)
}

/// Read `(φ, ψ, μ)` off an invariant Gram matrix.
fn extract_bands(jd: &JordanData, gram: &Mat) -> Result<(Vec<u64>, Vec<u64>, Vec<u64>)> {
    let mn = jd.ext.m * jd.n;
    let half = 2 * mn;
    assert_eq!(
        gram.submatrix(0, 0, half, half),
        Mat::zero(gram.field, half, half),
        "invariant forms have no pairing within the doubled half"
    );
    let sigma = gram.submatrix(0, half, half, half);
    assert!(sigma.is_symmetric(), "the pairing block must be symmetric");
    assert_eq!(
        sigma.submatrix(0, mn, mn, mn),
        sigma.submatrix(mn, 0, mn, mn),
        "the two mixed quarters must agree"
    );
    let band = |quarter: &Mat| -> Result<Vec<u64>> { lh_coeffs(&w_param(jd, quarter)?) };
    Ok((
        band(&sigma.submatrix(0, 0, mn, mn))?,
        band(&sigma.submatrix(0, mn, mn, mn))?,
        band(&sigma.submatrix(mn, mn, mn, mn))?,
    ))
}

/// The congruence step `diag(υ, υ)` for `υ = (α β; γ δ)` with entries the
/// centralizer elements of the given truncated polynomials.
fn move_step(jd: &JordanData, a: &[u64], b: &[u64], c: &[u64], d: &[u64]) -> Result<Mat> {
    let kk = jd.ext.ext;
    let n = jd.n;
    let block = |v: &[u64]| -> Result<Mat> { centralizer_element(jd, &ut_from_coeffs(kk, n, v)) };
    let ups = Mat::block2(&block(a)?, &block(b)?, &block(c)?, &block(d)?);
    Ok(Mat::block_diag(&[&ups, &ups]))
}

pub(super) fn canonicalize(b: &BilinearForm) -> Result<(ClassLabel, Witness)> {
    let k = b.spec.field;
    let (n, f) = chain_params(&b.spec);
    let jd = jordan_data(k, n, &f)?;
    let kk = jd.ext.ext;
    let mn = jd.ext.m * jd.n;
    let half = 2 * mn;
    let one = p_one(n);
    let zero = vec![0u64; n];
    let mut red = Reduction::new(b);

    // Kill D with (I σ⁻¹Z; 0 I) where D = Z + Zᵀ.
    let sigma = red.gram().submatrix(0, half, half, half);
    let d = red.gram().submatrix(half, half, half, half);
    let z = split_symmetric_hollow(&d)?;
    let ups = sigma.inverse()?.mul(&z);
    let id = Mat::identity(k, half);
    red.apply(&Mat::block2(&id, &ups, &Mat::zero(k, half, half), &id));

    let (mut phi, mut psi, mut mu) = extract_bands(&jd, red.gram())?;
    if phi[0] != 0 || mu[0] != 0 {
        return Err(Error::Unsupported(
            "a diagonal block restricts non-degenerately to one copy of the chain; \
             only indecomposable pairings of the two copies are classified"
                .into(),
        ));
    }
    // σ invertible with φ, μ non-units forces ψ to be a unit.
    assert_ne!(psi[0], 0, "the mixed band must be a unit");

    let finish_with = |red: Reduction,
                       spec: &ModuleSpec,
                       r: usize,
                       s: usize,
                       phi: Vec<u64>,
                       psi: Vec<u64>|
     -> Result<(ClassLabel, Witness)> {
        let label = ClassLabel::Kappa { r, s, phi, psi };
        let target = representative(spec, &label)?;
        Ok((label, red.finish(&target.gram)))
    };

    // Both diagonal bands zero: normalize the pairing band to one.
    if p_is_zero(&phi) && p_is_zero(&mu) {
        red.apply(&move_step(&jd, &p_inv(kk, &psi), &zero, &zero, &one)?);
        return finish_with(red, &b.spec, n + 1, 0, vec![], vec![]);
    }

    // Position the band of smaller lead first (the half swap exchanges the
    // diagonal bands and fixes the mixed one).
    if p_is_zero(&phi) || (!p_is_zero(&mu) && p_lead(&mu) < p_lead(&phi)) {
        red.apply(&move_step(&jd, &zero, &one, &one, &zero)?);
        (phi, psi, mu) = extract_bands(&jd, red.gram())?;
    }

    // Climb the lead of μ past an even offset: (1, x·uⁱ, 0, 1) cancels the
    // lead of μ against φ·x²·u²ⁱ.
    loop {
        if p_is_zero(&mu) {
            break;
        }
        let r0 = p_lead(&phi).expect("phi is nonzero here");
        let j0 = p_lead(&mu).expect("mu is nonzero here");
        if (j0 - r0) % 2 == 1 {
            break;
        }
        let x = kk.sqrt(kk.mul(kk.inv(phi[r0])?, mu[j0]));
        red.apply(&move_step(&jd, &one, &p_monomial(n, (j0 - r0) / 2, x), &zero, &one)?);
        (phi, psi, mu) = extract_bands(&jd, red.gram())?;
    }

    // μ exhausted: reduce φ to its canonical band and absorb ψ entirely.
    if p_is_zero(&mu) {
        let (_, a_mat) = lh_coset_reduce(&lh_from_coeffs(kk, n, &phi), 0)?;
        let alpha = ut_coeffs(&a_mat)?;
        let delta = p_inv(kk, &p_mul(kk, &psi, &alpha));
        red.apply(&move_step(&jd, &alpha, &zero, &zero, &delta)?);
        let (phi, psi, mu) = extract_bands(&jd, red.gram())?;
        debug_assert!(p_is_zero(&mu));
        debug_assert_eq!(psi, one);
        let r = p_lead(&phi).expect("phi stays nonzero") + 1;
        let s = s_max(n, r);
        let coeffs = (0..s).map(|j| phi[r + 2 * j]).collect();
        return finish_with(red, &b.spec, r, s, coeffs, vec![]);
    }

    // Both bands survive with lead offset j − r odd: canonicalize each band
    // separately, then purify μ, trim the φ tail and truncate ψ.
    let r0 = p_lead(&phi).expect("phi is nonzero");
    let j0 = p_lead(&mu).expect("mu is nonzero");
    let s = (j0 - r0 - 1) / 2;
    let (_, a_mat) = lh_coset_reduce(&lh_from_coeffs(kk, n, &phi), 0)?;
    let (_, d_mat) = lh_coset_reduce(&lh_from_coeffs(kk, n, &mu), 0)?;
    red.apply(&move_step(
        &jd,
        &ut_coeffs(&a_mat)?,
        &zero,
        &zero,
        &ut_coeffs(&d_mat)?,
    )?);
    (phi, _, mu) = extract_bands(&jd, red.gram())?;

    // Purify μ to the bare power u^{j−1}: with φ = u^{r−1}(1 + F), μ =
    // u^{j−1}(1 + G) and F, G odd, the move (1, u^{s+1}·c, 0, d) for
    // d² = (1 + FG)⁻¹ and c² = (G/u)·d² sends μ to u^{j−1} exactly.
    let f_odd = p_odd(&p_shift_down(&phi, r0));
    let g_odd = p_odd(&p_shift_down(&mu, j0));
    let dt2 = p_inv(kk, &p_add(kk, &one, &p_mul(kk, &f_odd, &g_odd)));
    let ct2 = p_mul(kk, &p_shift_down(&g_odd, 1), &dt2);
    let beta = p_shift_up(&p_sqrt(kk, &ct2), s + 1);
    red.apply(&move_step(&jd, &one, &beta, &zero, &p_sqrt(kk, &dt2))?);
    (phi, psi, mu) = extract_bands(&jd, red.gram())?;
    debug_assert_eq!(mu, p_monomial(n, j0, 1));

    // Kill the φ offsets above 2s − 1 against μ: (1, 0, γ, 1) adds
    // u^{r+2s}·γ² to φ and fixes μ.
    let mut gamma_sq = vec![0u64; n];
    for i in ((2 * s + 1)..n - r0).step_by(2) {
        gamma_sq[i - 2 * s - 1] = phi[r0 + i];
    }
    if !p_is_zero(&gamma_sq) {
        red.apply(&move_step(&jd, &one, &zero, &p_sqrt(kk, &gamma_sq), &one)?);
        (phi, psi, mu) = extract_bands(&jd, red.gram())?;
    }

    // Truncate ψ below t: (1, 0, 0, 1 + ψ⁻¹·ψ″) fixes φ and μ because
    // u^{j−1+2t} already vanishes.
    let t = (n - j0).div_ceil(2);
    debug_assert!(t >= 1, "a surviving mu forces a nonempty pairing tail");
    let mut psi_hi = psi.clone();
    psi_hi[..t].fill(0);
    if !p_is_zero(&psi_hi) {
        let delta = p_add(kk, &one, &p_mul(kk, &p_inv(kk, &psi), &psi_hi));
        red.apply(&move_step(&jd, &one, &zero, &zero, &delta)?);
        (phi, psi, mu) = extract_bands(&jd, red.gram())?;
    }

    debug_assert_eq!(p_lead(&phi), Some(r0));
    debug_assert_eq!(phi[r0], 1);
    debug_assert_eq!(mu, p_monomial(n, j0, 1));
    debug_assert!(psi[t..].iter().all(|&c| c == 0));
    let mut psi_label = psi[..t].to_vec();
    psi_label[0] = kk.add(psi_label[0], 1);
    let coeffs = (0..s).map(|j| phi[r0 + 2 * j + 1]).collect();
    finish_with(red, &b.spec, r0 + 1, s, coeffs, psi_label)
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

/// Existence of a quadratic refinement.  The paired class always refines;
/// the other classes need `μ = 0` and the same residue condition as the
/// single chain, applied to the lead parity `n + r` and the band `φ`.
pub(super) fn quad_exists(spec: &ModuleSpec, label: &ClassLabel) -> Result<bool> {
    let ClassLabel::Kappa { r, s, phi, psi } = label else {
        unreachable!("dispatch guarantees a doubled chain label");
    };
    let (n, f) = chain_params(spec);
    let jd = jordan_data(spec.field, n, &f)?;
    let kk = jd.ext.ext;
    validate_label(kk, n, *r, *s, phi, psi)?;
    if *r == n + 1 {
        return Ok(true);
    }
    if r + 2 * s < n {
        return Ok(false);
    }
    let eps = jd.ext.epsilon;
    let w = kk.add(eps, kk.mul(eps, eps));
    Ok(if w == 0 {
        (n + r) % 2 == 0
            && (*s == 0
                || phi
                    .iter()
                    .enumerate()
                    .all(|(j, &c)| c == u64::from(j == 0)))
    } else {
        let winv = kk.inv(w)?;
        (n + r) % 2 == 1
            && phi
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify;
    use crate::field::FieldSpec;
    use crate::kgmodules::action;
    use crate::matrix::single_entry;

    fn gf(e: u32) -> FieldSpec {
        FieldSpec::canonical(e)
    }

    fn cnf_sq(e: u32, n: usize, coeffs: Vec<u64>) -> ModuleSpec {
        ModuleSpec::new(gf(e), Family::CnfSq(n, Poly::new(gf(e), coeffs))).unwrap()
    }

    fn kappa(r: usize, s: usize, phi: Vec<u64>, psi: Vec<u64>) -> ClassLabel {
        ClassLabel::Kappa { r, s, phi, psi }
    }

    #[test]
    fn truncated_polynomial_helpers_invert_and_take_square_roots() {
        let kk = gf(2);
        for a0 in 1..4u64 {
            for a1 in kk.elements() {
                for a2 in kk.elements() {
                    let a = vec![a0, a1, a2];
                    let b = p_inv(kk, &a);
                    assert_eq!(p_mul(kk, &a, &b), p_one(3));
                    let sq = p_mul(kk, &a, &a);
                    assert_eq!(p_sqrt(kk, &sq), vec![a0, a1, 0]);
                }
            }
        }
    }

    #[test]
    fn the_smallest_doubled_chains_have_the_expected_label_lists() {
        let s3 = cnf_sq(1, 3, vec![0, 1]);
        assert_eq!(
            classify::enumerate_classes(&s3).unwrap(),
            vec![
                kappa(2, 0, vec![], vec![0]),
                kappa(2, 1, vec![0], vec![]),
                kappa(2, 1, vec![1], vec![]),
                kappa(3, 0, vec![], vec![]),
                kappa(4, 0, vec![], vec![]),
            ]
        );
        let exists: Vec<bool> = classify::enumerate_classes(&s3)
            .unwrap()
            .iter()
            .map(|l| classify::quad_exists(&s3, l).unwrap())
            .collect();
        assert_eq!(exists, vec![false, false, false, true, true]);
        assert_eq!(
            classify::enumerate_classes(&cnf_sq(1, 1, vec![0, 1])).unwrap(),
            vec![kappa(2, 0, vec![], vec![])]
        );
        assert_eq!(classify::count_classes(&cnf_sq(1, 4, vec![0, 1])), 8);
    }

    #[test]
    fn every_band_triple_on_the_doubled_chain_reduces_to_a_label() {
        // Over CnfSq(3, T) / GF(2): sweep all 64 indecomposable band triples
        // (φ, ψ, μ), with and without congruence perturbations, and check
        // the class is stable and every class is reached.
        let s = cnf_sq(1, 3, vec![0, 1]);
        let k = s.field;
        let jd = jordan_data(k, 3, &Poly::t(k)).unwrap();
        let id = Mat::identity(k, 6);
        let zero = Mat::zero(k, 6, 6);
        let tail = Mat::block2(&id, &single_entry(k, 6, 6, 2, 5, 1), &zero, &id);
        let unit = move_step(&jd, &[1, 1, 0], &[0, 1, 0], &[0, 0, 1], &[1, 0, 1]).unwrap();
        let mut seen = std::collections::HashSet::new();
        for code in 0..64u64 {
            let bits = |i: u64| (code >> i) & 1;
            let bands = (
                vec![0, bits(0), bits(1)],
                vec![1, bits(2), bits(3)],
                vec![0, bits(4), bits(5)],
            );
            let gram = sigma_gram(&jd, &bands).unwrap();
            let form = BilinearForm::new(s.clone(), gram).unwrap();
            let (label, _) = classify::canonicalize(&form).unwrap();
            for step in [&tail, &unit] {
                let moved = BilinearForm::new(s.clone(), form.gram.congruence(step)).unwrap();
                let (again, _) = classify::canonicalize(&moved).unwrap();
                assert_eq!(again, label, "bands {bands:?}");
            }
            seen.insert(label);
        }
        assert_eq!(seen.len(), classify::count_classes(&s) as usize);
    }

    #[test]
    fn unit_diagonal_bands_are_rejected_as_decomposable() {
        let s = cnf_sq(1, 2, vec![0, 1]);
        let jd = jordan_data(s.field, 2, &Poly::t(s.field)).unwrap();
        let bands = (vec![1, 0], vec![1, 0], vec![0, 0]);
        let form = BilinearForm::new(s, sigma_gram(&jd, &bands).unwrap()).unwrap();
        assert!(matches!(
            classify::canonicalize(&form),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn existence_closed_form_agrees_with_the_constraint_solver() {
        let specs = vec![
            cnf_sq(1, 1, vec![0, 1]),
            cnf_sq(1, 2, vec![0, 1]),
            cnf_sq(1, 3, vec![0, 1]),
            cnf_sq(2, 1, vec![0, 1]),
            cnf_sq(2, 2, vec![0, 1]),
            cnf_sq(1, 1, vec![1, 1, 1]),
            cnf_sq(1, 2, vec![1, 1, 1]),
            ModuleSpec::new(gf(1), Family::CnInfSq(2)).unwrap(),
            ModuleSpec::new(gf(1), Family::CnInfSq(3)).unwrap(),
        ];
        for s in specs {
            let act = action(&s);
            let h = s.dim() / 2;
            for label in classify::enumerate_classes(&s).unwrap() {
                let rep = classify::representative(&s, &label).unwrap();
                let r = rep.gram.submatrix(0, h, h, h);
                let solver = quad::forced_d1(&act, &r).is_some();
                assert_eq!(
                    classify::quad_exists(&s, &label).unwrap(),
                    solver,
                    "family {:?}, label {label:?}",
                    s.family
                );
            }
        }
    }

    #[test]
    fn the_swapped_doubled_family_matches_its_transport() {
        let s_inf = ModuleSpec::new(gf(1), Family::CnInfSq(2)).unwrap();
        let s_t = cnf_sq(1, 2, vec![0, 1]);
        let w = cn_inf_swap(&s_inf);
        assert_eq!(w.mul(&w), Mat::identity(s_inf.field, 8));
        let labels = classify::enumerate_classes(&s_inf).unwrap();
        assert_eq!(labels, classify::enumerate_classes(&s_t).unwrap());
        for label in &labels {
            let rep_inf = classify::representative(&s_inf, label).unwrap();
            let rep_t = classify::representative(&s_t, label).unwrap();
            assert_eq!(rep_inf.gram.congruence(&w), rep_t.gram);
            assert_eq!(
                classify::quad_exists(&s_inf, label).unwrap(),
                classify::quad_exists(&s_t, label).unwrap()
            );
        }
    }
}
