//! Generic quadratic-refinement machinery for the chain families.
//!
//! Every canonical bilinear representative of the `AnBn`, `Cnf` and `CnfSq`
//! families has Gram matrix `S = (0 R; Rᵀ 0)` with both generators acting as
//! `(I W; 0 I)` with respect to the same splitting.  An invariant quadratic
//! form with polar form `S` then has upper-triangular representative
//! `Ŝ + diag(D₁, D₂)` where `Ŝ` is the strict upper triangle of `S`: the
//! strict part is pinned by the polar form and only the diagonal is free.
//! Invariance constrains `D₁` through the linear system
//!
//! ```text
//! Σ_s W[s][i]² · d_s = Σ_s W[s][i] · R[s][i]      for all i, per generator,
//! ```
//!
//! while `D₂` stays free and is swept out by the unipotent isometries
//! `(I Y; 0 I)`.  When the forced `D₁` is zero there is a single quadratic
//! class; otherwise the classes are indexed by the Artin–Schreier cosets of
//! the field, detected on a distinguished diagonal entry of
//! `η = R⁻¹·diag(D₁)·R⁻ᵀ`.

use crate::error::{Error, Result};
use crate::field::{artin_schreier_reps, coset_reduce, FieldSpec};
use crate::forms::{quad_is_invariant, s_hat, BilinearForm, QuadraticForm};
use crate::kgmodules::{action, GroupAction};
use crate::matrix::Mat;

use super::{QuadLabel, QuadReduction, Witness};

/// Diagonal matrix with the given entries.
fn diag(field: FieldSpec, d: &[u64]) -> Mat {
    Mat::from_fn(field, d.len(), d.len(), |r, c| if r == c { d[r] } else { 0 })
}

/// Extracts `W` from a generator of shape `(I W; 0 I)` with halves of size
/// `h`, panicking when the action does not have that shape.
fn unipotent_supblock(g: &Mat, h: usize) -> Mat {
    let k = g.field;
    assert_eq!(g.rows, 2 * h, "action size mismatch");
    let w = g.submatrix(0, h, h, h);
    let expected = Mat::block2(
        &Mat::identity(k, h),
        &w,
        &Mat::zero(k, h, h),
        &Mat::identity(k, h),
    );
    assert_eq!(*g, expected, "generator action is not unipotent upper-triangular");
    w
}

/// Particular solution of `A·x = rhs` over the matrix field together with
/// the rank of `A`, or `None` when the system is inconsistent.
fn solve_affine(a: &Mat, rhs: &[u64]) -> Option<(Vec<u64>, usize)> {
    let k = a.field;
    assert_eq!(a.rows, rhs.len(), "right-hand side length mismatch");
    let (rows, cols) = (a.rows, a.cols);
    let mut m: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            let mut row: Vec<u64> = (0..cols).map(|c| a.at(r, c)).collect();
            row.push(rhs[r]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    for col in 0..cols {
        let next = pivots.len();
        let Some(p) = (next..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(next, p);
        let inv = k.inv(m[next][col]).expect("pivot is nonzero");
        for v in &mut m[next][col..=cols] {
            *v = k.mul(*v, inv);
        }
        let pivot_row = m[next][col..=cols].to_vec();
        for (r, row) in m.iter_mut().enumerate() {
            if r != next && row[col] != 0 {
                let f = row[col];
                for (v, &p) in row[col..=cols].iter_mut().zip(&pivot_row) {
                    *v = k.add(*v, k.mul(f, p));
                }
            }
        }
        pivots.push(col);
        if pivots.len() == rows {
            break;
        }
    }
    if (pivots.len()..rows).any(|r| m[r][cols] != 0) {
        return None;
    }
    let mut x = vec![0u64; cols];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = m[i][cols];
    }
    Some((x, pivots.len()))
}

/// The diagonal `D₁` forced on every invariant quadratic form with polar
/// form `(0 R; Rᵀ 0)`, or `None` when the constraints are unsatisfiable (no
/// invariant quadratic form exists).
///
/// # Panics
///
/// Panics when an action generator is not of shape `(I W; 0 I)`, or when the
/// constraint system is satisfiable but not uniquely (which would contradict
/// the classification and must surface loudly).
pub(crate) fn forced_d1(act: &GroupAction, r: &Mat) -> Option<Vec<u64>> {
    let k = r.field;
    let h = r.rows;
    assert_eq!(r.cols, h, "pairing block must be square");
    let mut a = Mat::zero(k, 2 * h, h);
    let mut rhs = vec![0u64; 2 * h];
    for (gi, g) in [&act.g1, &act.g2].into_iter().enumerate() {
        let w = unipotent_supblock(g, h);
        for i in 0..h {
            let mut target = 0;
            for s in 0..h {
                a.set(gi * h + i, s, k.mul(w.at(s, i), w.at(s, i)));
                target = k.add(target, k.mul(w.at(s, i), r.at(s, i)));
            }
            rhs[gi * h + i] = target;
        }
    }
    let (d1, rank) = solve_affine(&a, &rhs)?;
    assert_eq!(rank, h, "forced diagonal must be unique");
    Some(d1)
}

/// `η = R⁻¹·diag(d₁)·R⁻ᵀ`, the matrix whose diagonal steers the reduction
/// of the free half-diagonal.
pub(crate) fn eta(r: &Mat, d1: &[u64]) -> Result<Mat> {
    let r_inv = r.inverse()?;
    Ok(r_inv.mul(&diag(r.field, d1)).mul(&r_inv.transpose()))
}

/// First diagonal index of `η` with a nonzero entry, with that entry.
///
/// # Panics
///
/// Panics when the diagonal vanishes entirely; for `d₁ ≠ 0` it cannot,
/// because `diag(η)` is the image of `d₁` under the entrywise square of
/// `R⁻¹`, which is again invertible.
pub(crate) fn eta_pivot(eta: &Mat) -> (usize, u64) {
    (0..eta.rows)
        .map(|i| (i, eta.at(i, i)))
        .find(|&(_, v)| v != 0)
        .expect("eta has a nonzero diagonal entry when d1 is nonzero")
}

/// The canonical invariant quadratic forms over a canonical bilinear
/// representative with Gram `(0 R; Rᵀ 0)`, with their labels.
///
/// # Errors
///
/// [`Error::Unsupported`] when no invariant quadratic form exists over the
/// representative.
pub(crate) fn quad_reps(b: &BilinearForm) -> Result<(Vec<QuadraticForm>, Vec<QuadLabel>)> {
    let spec = &b.spec;
    let k = spec.field;
    let h = spec.dim() / 2;
    let r = b.gram.submatrix(0, h, h, h);
    debug_assert_eq!(
        b.gram,
        Mat::block2(&Mat::zero(k, h, h), &r, &r.transpose(), &Mat::zero(k, h, h)),
        "representative must pair the two halves"
    );
    let act = action(spec);
    let d1 = forced_d1(&act, &r).ok_or_else(|| {
        Error::Unsupported("no invariant quadratic form exists over this representative".into())
    })?;
    let base = s_hat(b)?;
    if d1.iter().all(|&d| d == 0) {
        return Ok((vec![base], vec![QuadLabel::Unique]));
    }
    let (t, eta_tt) = eta_pivot(&eta(&r, &d1)?);
    let eta_tt_inv = k.inv(eta_tt)?;
    let mut forms = Vec::new();
    let mut labels = Vec::new();
    for x in artin_schreier_reps(k) {
        let mut rep = base.rep().clone();
        for (i, &d) in d1.iter().enumerate() {
            rep.set(i, i, d);
        }
        rep.set(h + t, h + t, k.mul(eta_tt_inv, x));
        let q = QuadraticForm::new(spec.clone(), &rep)?;
        assert!(quad_is_invariant(&q), "canonical refinement must be invariant");
        forms.push(q);
        labels.push(QuadLabel::ArfRep(x));
    }
    Ok((forms, labels))
}

/// Reduces an invariant quadratic form whose polar Gram is `(0 R; Rᵀ 0)` to
/// its canonical refinement, using a single unipotent move `(I R⁻ᵀL; 0 I)`.
pub(crate) fn quad_canon(q: &QuadraticForm) -> Result<(QuadLabel, Witness)> {
    let spec = q.spec.clone();
    let k = spec.field;
    let h = spec.dim() / 2;
    let polar = q.polar();
    let r = polar.gram.submatrix(0, h, h, h);
    let act = action(&spec);
    let d1 = forced_d1(&act, &r)
        .expect("an invariant quadratic form exists over this polar form, so its forced diagonal is solvable");
    for (i, &d) in d1.iter().enumerate() {
        assert_eq!(
            q.rep().at(i, i),
            d,
            "invariant quadratic form must carry the forced diagonal"
        );
    }
    let d2: Vec<u64> = (0..h).map(|i| q.rep().at(h + i, h + i)).collect();
    let r_inv_t = r.inverse()?.transpose();
    let id = Mat::identity(k, h);
    let zero = Mat::zero(k, h, h);
    let mut red = QuadReduction::new(q);

    if d1.iter().all(|&d| d == 0) {
        let y = r_inv_t.mul(&diag(k, &d2));
        red.apply(&Mat::block2(&id, &y, &zero, &id));
        let expected = s_hat(&polar)?;
        let witness = red.finish(&expected);
        return Ok((QuadLabel::Unique, witness));
    }

    let eta = eta(&r, &d1)?;
    let (t, eta_tt) = eta_pivot(&eta);
    let eta_tt_inv = k.inv(eta_tt)?;
    // Symmetric L supported on row and column t clears every free diagonal
    // entry except the distinguished one, which lands on its Artin–Schreier
    // representative.
    let mut l = Mat::zero(k, h, h);
    for (i, &d) in d2.iter().enumerate() {
        if i != t {
            let v = k.sqrt(k.mul(d, eta_tt_inv));
            l.set(t, i, v);
            l.set(i, t, v);
        }
    }
    let mut b_val = d2[t];
    for s in 0..h {
        if s != t {
            let ls = l.at(t, s);
            b_val = k.add(b_val, k.mul(eta.at(s, s), k.mul(ls, ls)));
        }
    }
    let b_val = k.mul(eta_tt, b_val);
    let (x, delta) = coset_reduce(k, b_val);
    l.set(t, t, k.mul(eta_tt_inv, delta));
    let y = r_inv_t.mul(&l);
    red.apply(&Mat::block2(&id, &y, &zero, &id));

    let mut expected = s_hat(&polar)?.rep().clone();
    for (i, &d) in d1.iter().enumerate() {
        expected.set(i, i, d);
    }
    expected.set(h + t, h + t, k.mul(eta_tt_inv, x));
    let expected = QuadraticForm::new(spec, &expected)?;
    let witness = red.finish(&expected);
    Ok((QuadLabel::ArfRep(x), witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(e: u32) -> FieldSpec {
        FieldSpec::canonical(e)
    }

    #[test]
    fn affine_solver_handles_the_three_outcomes() {
        let k = gf(2);
        // Unique solution.
        let a = Mat::from_rows(k, &[vec![1, 0], vec![1, 1], vec![0, 2]]);
        let (x, rank) = solve_affine(&a, &[3, k.add(3, 2), k.mul(2, 2)]).unwrap();
        assert_eq!(rank, 2);
        assert_eq!(x, vec![3, 2]);
        // Underdetermined but consistent: rank below the column count.
        let a = Mat::from_rows(k, &[vec![1, 1], vec![2, 2]]);
        let (x, rank) = solve_affine(&a, &[1, 2]).unwrap();
        assert_eq!(rank, 1);
        assert_eq!(k.add(x[0], x[1]), 1);
        // Inconsistent.
        let a = Mat::from_rows(k, &[vec![1, 1], vec![1, 1]]);
        assert!(solve_affine(&a, &[1, 2]).is_none());
    }

    #[test]
    fn solver_agrees_with_exhaustive_search_over_small_fields() {
        let k = gf(1);
        let row_dot = |a: &Mat, r: usize, v: &[u64]| {
            v.iter()
                .enumerate()
                .fold(0, |acc, (c, &vc)| k.add(acc, k.mul(a.at(r, c), vc)))
        };
        for code in 0..(1u32 << 9) {
            let a = Mat::from_fn(k, 3, 2, |r, c| u64::from(code >> (r * 2 + c) & 1));
            let rhs: Vec<u64> = (0..3).map(|r| u64::from(code >> (6 + r) & 1)).collect();
            let brute = (0..4u64).find(|x| {
                let v = [x & 1, x >> 1];
                (0..3).all(|r| row_dot(&a, r, &v) == rhs[r])
            });
            match solve_affine(&a, &rhs) {
                Some((x, _)) => {
                    assert!(brute.is_some(), "solver found a solution where none exists");
                    for (r, &want) in rhs.iter().enumerate() {
                        assert_eq!(row_dot(&a, r, &x), want);
                    }
                }
                None => assert!(brute.is_none(), "solver missed a solution"),
            }
        }
    }
}
