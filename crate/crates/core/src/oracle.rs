//! Independent brute-force verification of the classification engine.
//!
//! Everything in this module recomputes, from the action matrices alone,
//! what [`classify`](crate::classify) derives structurally:
//!
//! * [`enumerate_invariant_symplectic`] lists the invariant symplectic Gram
//!   matrices twice — through an explicit per-family parametrization and
//!   through a generic sweep of the solution space of the invariance
//!   equations — and insists the two paths agree;
//! * [`unit_group`] enumerates the invertible module endomorphisms over the
//!   endomorphism basis, exhaustively while the algebra is small enough and
//!   as a set of stability generators beyond that;
//! * [`orbit_partition`] sweeps congruence orbits explicitly and compares
//!   the partition with the canonical labels;
//! * [`quad_orbit_partition`] does the same for the quadratic refinements of
//!   one class under the stabilizer of its representative;
//! * [`verify`] chains the steps into one report per module.
//!
//! Every move applied during a sweep is an exact matrix identity — the unit
//! is multiplied out and the result compared entry by entry — so an orbit
//! merge is always certified, never inferred.  Disagreements between the
//! sweep and the canonical labelling are collected as readable lines in the
//! returned [`OrbitReport`]; *internal* contract violations of the oracle
//! itself (the two enumeration paths disagreeing, an orbit escaping the
//! enumerated set) abort with an assertion instead.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classify::{
    canonicalize, count_classes, enumerate_classes, quad_canonicalize, quad_exists,
    quad_representatives, representative, ClassLabel,
};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Poly};
use crate::forms::{
    ensure_invariant_symplectic, quad_is_invariant, s_hat, BilinearForm, QuadraticForm,
};
use crate::kgmodules::{action, cn_inf_swap, end_basis, jordan_data, kg_hat, Family, ModuleSpec};
use crate::matrix::{anti_identity, hankel, lh_from_coeffs, split_symmetric_hollow, Mat};

/// Hard cap on `|forms| · |units|` for one orbit partition.
pub const ORBIT_BUDGET: u128 = 100_000_000;

/// Cap on exhaustive sweeps: endomorphism coefficient codes, solution-space
/// codes and diagonal-correction codes all stop here.
pub const EXHAUSTIVE_CAP: u128 = 1 << 20;

/// Largest parametrized family [`verify`] will enumerate with its free tail
/// block left free; beyond this the tail is pinned to zero and the pinning
/// is certified by sampling instead.
const FULL_TAIL_FORM_CAP: u128 = 4096;

/// Seed for every sampled check, so reports are reproducible.
const SAMPLE_SEED: u64 = 0x4b4c_4549_4e34;

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// One congruence orbit: its size and the canonical label of its members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSummary {
    /// Number of enumerated forms in the orbit.
    pub size: usize,
    /// Canonical label shared by every member, rendered as text.
    pub label: String,
}

/// Outcome of one oracle run over a module.
#[derive(Debug, Clone)]
pub struct OrbitReport {
    /// The module under scrutiny.
    pub spec: ModuleSpec,
    /// Number of forms that were enumerated and partitioned.
    pub total_forms: usize,
    /// One summary per orbit, sorted by label text.
    pub orbits: Vec<OrbitSummary>,
    /// Inconsistencies between the sweep and the canonical labelling; empty
    /// exactly when the run is clean.
    pub discrepancies: Vec<String>,
}

impl OrbitReport {
    /// Number of orbits found.
    #[must_use]
    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    /// Whether the run is clean: no discrepancies, and the orbit sizes sum
    /// back to the number of enumerated forms.
    #[must_use]
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
            && self.orbits.iter().map(|o| o.size).sum::<usize>() == self.total_forms
    }

    /// Machine-readable listing: one `orbit <index> <size> <label>` line per
    /// orbit and one `discrepancy <text>` line per finding, tab-separated.
    #[must_use]
    pub fn to_tsv(&self) -> String {
        use fmt::Write as _;
        let mut out = String::new();
        for (i, o) in self.orbits.iter().enumerate() {
            let _ = writeln!(out, "orbit\t{i}\t{}\t{}", o.size, o.label);
        }
        for d in &self.discrepancies {
            let _ = writeln!(out, "discrepancy\t{d}");
        }
        out
    }
}

impl fmt::Display for OrbitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:?} over GF({}): {} forms in {} orbits [{}]",
            self.spec.family,
            self.spec.field.order(),
            self.total_forms,
            self.orbits.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        for o in &self.orbits {
            writeln!(f, "  {:>6}  {}", o.size, o.label)?;
        }
        for d in &self.discrepancies {
            writeln!(f, "  ! {d}")?;
        }
        Ok(())
    }
}

fn render(label: &ClassLabel) -> String {
    format!("{label:?}")
}

// ---------------------------------------------------------------------------
// Small shared helpers
// ---------------------------------------------------------------------------

/// Flat encoding of a matrix for hashing and deterministic sorting.
fn key(m: &Mat) -> Vec<u64> {
    m.entries().to_vec()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller index wins, to keep grouping deterministic.
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Whether invariance forces the family's Grams into the half-split shape
/// `(0 A; Aᵀ D)` with a free symmetric hollow tail block `D`.
fn has_free_tail(family: &Family) -> bool {
    matches!(
        family,
        Family::AnBn(_)
            | Family::Cnf(..)
            | Family::CnfSq(..)
            | Family::CnInf(_)
            | Family::CnInfSq(_)
    )
}

/// Index sets of the two module copies inside a squared family.
fn copy_spans(spec: &ModuleSpec) -> Option<[Vec<usize>; 2]> {
    match &spec.family {
        Family::TrivialSq => Some([vec![0], vec![1]]),
        Family::RegularSq => Some([(0..4).collect(), (4..8).collect()]),
        Family::CnfSq(..) | Family::CnInfSq(_) => {
            let h = spec.dim() / 4;
            let one = (0..h).chain(2 * h..3 * h).collect();
            let two = (h..2 * h).chain(3 * h..4 * h).collect();
            Some([one, two])
        }
        _ => None,
    }
}

/// The principal submatrix over an arbitrary index set.
fn restriction(gram: &Mat, idx: &[usize]) -> Mat {
    Mat::from_fn(gram.field, idx.len(), idx.len(), |r, c| {
        gram.at(idx[r], idx[c])
    })
}

/// Whether the tail block of a half-split Gram is identically zero.
fn tail_is_zero(spec: &ModuleSpec, gram: &Mat) -> bool {
    let h = spec.dim() / 2;
    gram.submatrix(h, h, h, h) == Mat::zero(spec.field, h, h)
}

/// Kills the tail block of `(0 A; Aᵀ D)` with the unipotent move
/// `(I A⁻ᵀZ; 0 I)` where `D = Z + Zᵀ`; returns the move and the reduced
/// Gram.  The move commutes with both generators — they are unipotent with
/// the same identity diagonal — so it is always an endomorphism, and it is
/// visibly invertible.
fn kill_tail(spec: &ModuleSpec, gram: &Mat) -> Result<(Mat, Mat)> {
    let k = spec.field;
    let h = spec.dim() / 2;
    debug_assert!(
        gram.submatrix(0, 0, h, h) == Mat::zero(k, h, h),
        "half-split Grams carry no pairing within the first half"
    );
    let a = gram.submatrix(0, h, h, h);
    let d = gram.submatrix(h, h, h, h);
    let z = split_symmetric_hollow(&d)?;
    let y = a.inverse()?.transpose().mul(&z);
    let m = Mat::block2(
        &Mat::identity(k, h),
        &y,
        &Mat::zero(k, h, h),
        &Mat::identity(k, h),
    );
    let reduced = gram.congruence(&m);
    Ok((m, reduced))
}

/// Whether the Gram pairs the two copies of a squared module
/// indecomposably: its restriction to either copy must be degenerate (after
/// the tail kill where a tail exists).  Families that are indecomposable as
/// modules pass vacuously.
fn pairs_indecomposably(spec: &ModuleSpec, gram: &Mat) -> Result<bool> {
    let Some(spans) = copy_spans(spec) else {
        return Ok(true);
    };
    let reduced;
    let g = if has_free_tail(&spec.family) {
        reduced = kill_tail(spec, gram)?.1;
        &reduced
    } else {
        gram
    };
    Ok(spans.iter().all(|s| !restriction(g, s).is_invertible()))
}

/// Dimension of the space of symmetric hollow `m × m` matrices.
fn hollow_dim(m: usize) -> usize {
    m * (m - 1) / 2
}

/// The symmetric hollow matrix with the given strict-upper coefficient code.
fn symmetric_hollow(field: FieldSpec, m: usize, code: u128) -> Mat {
    let q = u128::from(field.order());
    let mut z = Mat::zero(field, m, m);
    let mut c = code;
    for r in 0..m {
        for s in r + 1..m {
            let v = (c % q) as u64;
            c /= q;
            z.set(r, s, v);
            z.set(s, r, v);
        }
    }
    z
}

fn qpow(q: u128, e: usize) -> u128 {
    q.checked_pow(u32::try_from(e).expect("exponent fits"))
        .expect("sweep size overflow")
}

// ---------------------------------------------------------------------------
// Form enumeration: the parametrized path
// ---------------------------------------------------------------------------

/// Number of Grams the parametrized enumeration produces.
fn structured_count(spec: &ModuleSpec, restrict_tail: bool) -> u128 {
    let q = u128::from(spec.field.order());
    let tail = |m: usize| if restrict_tail { 1 } else { qpow(q, hollow_dim(m)) };
    let chain = |n: usize, m: usize| {
        let qk = qpow(q, m);
        (qk - 1) * qpow(qk, n - 1) * tail(m * n)
    };
    let chain_sq = |n: usize, m: usize| {
        let qk = qpow(q, m);
        qpow(qk, n - 1) * qpow(qk, n - 1) * (qk - 1) * qpow(qk, n - 1) * tail(2 * m * n)
    };
    match &spec.family {
        Family::TrivialSq => q - 1,
        Family::Regular => qpow(q, 3) - qpow(q, 2),
        Family::RegularSq => qpow(q, 2) * qpow(q, 2) * (qpow(q, 4) - qpow(q, 3)),
        Family::AnBn(n) => (q - 1) * qpow(q, 2 * n) * tail(2 * n + 1),
        Family::Cnf(n, _) => chain(*n, spec.m()),
        Family::CnfSq(n, _) => chain_sq(*n, spec.m()),
        Family::CnInf(n) => chain(*n, 1),
        Family::CnInfSq(n) => chain_sq(*n, 1),
    }
}

/// The `(0 B; B D)` Grams of the chain families: `B` is the banded pairing
/// block for `Cnf`, the four-quarter block for its square.
fn chain_forms(
    field: FieldSpec,
    n: usize,
    f: &Poly,
    squared: bool,
    restrict_tail: bool,
) -> Result<Vec<Mat>> {
    let jd = jordan_data(field, n, f)?;
    let kk = jd.ext.ext;
    let qk = u128::from(kk.order());
    let m = f.degree().expect("the modulus of a chain family is monic");
    let half = if squared { 2 * m * n } else { m * n };

    // Band coefficient vectors over the splitting field, by code.
    let band = |code: u128, fixed_first: Option<u64>| -> Vec<u64> {
        let mut coeffs = Vec::with_capacity(n);
        let mut c = code;
        let start = usize::from(fixed_first.is_some());
        if let Some(v) = fixed_first {
            coeffs.push(v);
        }
        for _ in start..n {
            coeffs.push((c % qk) as u64);
            c /= qk;
        }
        coeffs
    };
    let block = |coeffs: &[u64]| -> Result<Mat> {
        crate::kgmodules::script_v(&jd, &lh_from_coeffs(kk, n, coeffs))
    };

    let mut pairings = Vec::new();
    if squared {
        // Quarters (φ ψ; ψ μ): φ, μ not invertible, ψ invertible.
        let free = qpow(qk, n - 1);
        for pc in 0..free {
            let vphi = block(&band(pc, Some(0)))?;
            for mc in 0..free {
                let vmu = block(&band(mc, Some(0)))?;
                for lead in 1..qk {
                    for tc in 0..free {
                        let vpsi = block(&band(tc, Some(lead as u64)))?;
                        pairings.push(Mat::block2(&vphi, &vpsi, &vpsi, &vmu));
                    }
                }
            }
        }
    } else {
        for lead in 1..qk {
            for tc in 0..qpow(qk, n - 1) {
                pairings.push(block(&band(tc, Some(lead as u64)))?);
            }
        }
    }

    let tails = if restrict_tail {
        1
    } else {
        qpow(u128::from(field.order()), hollow_dim(half))
    };
    let zero = Mat::zero(field, half, half);
    let mut grams = Vec::new();
    for b in &pairings {
        for tc in 0..tails {
            let d = symmetric_hollow(field, half, tc);
            grams.push(Mat::block2(&zero, b, &b.transpose(), &d));
        }
    }
    Ok(grams)
}

/// The per-family explicit parametrization of the invariant symplectic
/// Grams (indecomposable pairings only, for the squared families).
fn structured_forms(spec: &ModuleSpec, restrict_tail: bool) -> Result<Vec<Mat>> {
    let k = spec.field;
    let q = k.order();
    let mut grams = Vec::new();
    match &spec.family {
        Family::TrivialSq => {
            for x in 1..q {
                grams.push(Mat::from_rows(k, &[vec![0, x], vec![x, 0]]));
            }
        }
        Family::Regular => {
            for b in k.elements() {
                for c in k.elements() {
                    for d in k.elements() {
                        if k.add(k.add(b, c), d) != 0 {
                            grams.push(kg_hat(k, [0, b, c, d]));
                        }
                    }
                }
            }
        }
        Family::RegularSq => {
            // Degenerate hollow diagonal blocks, unit pairing block.
            let halves: Vec<Mat> = k
                .elements()
                .flat_map(|a| k.elements().map(move |b| (a, b)))
                .map(|(a, b)| kg_hat(k, [0, a, b, k.add(a, b)]))
                .collect();
            let mut pads = Vec::new();
            for b1 in k.elements() {
                for b2 in k.elements() {
                    for b3 in k.elements() {
                        for b4 in k.elements() {
                            if k.add(k.add(b1, b2), k.add(b3, b4)) != 0 {
                                pads.push(kg_hat(k, [b1, b2, b3, b4]));
                            }
                        }
                    }
                }
            }
            for alpha in &halves {
                for gamma in &halves {
                    for beta in &pads {
                        grams.push(Mat::block2(alpha, beta, beta, gamma));
                    }
                }
            }
        }
        Family::AnBn(n) => {
            let n = *n;
            let h = 2 * n + 1;
            let tails = if restrict_tail {
                1
            } else {
                qpow(u128::from(q), hollow_dim(h))
            };
            let zero = Mat::zero(k, h, h);
            for x in 1..q {
                for code in 0..qpow(u128::from(q), 2 * n) {
                    let mut a = anti_identity(k, h).scale(x);
                    let mut corner = Mat::zero(k, n + 1, n);
                    let mut c = code;
                    for i in 0..2 * n {
                        let w = (c % u128::from(q)) as u64;
                        c /= u128::from(q);
                        corner = corner.add(&hankel(k, n + 1, n, i as i64 + 2, w));
                    }
                    a.paste(n, n + 1, &corner);
                    for tc in 0..tails {
                        let d = symmetric_hollow(k, h, tc);
                        grams.push(Mat::block2(&zero, &a, &a.transpose(), &d));
                    }
                }
            }
        }
        Family::Cnf(n, f) => grams = chain_forms(k, *n, f, false, restrict_tail)?,
        Family::CnfSq(n, f) => grams = chain_forms(k, *n, f, true, restrict_tail)?,
        Family::CnInf(n) => {
            let w = cn_inf_swap(spec);
            grams = chain_forms(k, *n, &Poly::t(k), false, restrict_tail)?
                .into_iter()
                .map(|g| g.congruence(&w))
                .collect();
        }
        Family::CnInfSq(n) => {
            let w = cn_inf_swap(spec);
            grams = chain_forms(k, *n, &Poly::t(k), true, restrict_tail)?
                .into_iter()
                .map(|g| g.congruence(&w))
                .collect();
        }
    }
    Ok(grams)
}

// ---------------------------------------------------------------------------
// Form enumeration: the generic path
// ---------------------------------------------------------------------------

/// Basis of the space of invariant symmetric matrices, with or without the
/// diagonal, computed from nothing but the two action matrices.
fn invariant_symmetric_span(spec: &ModuleSpec, hollow: bool) -> Vec<Mat> {
    let k = spec.field;
    let d = spec.dim();
    let act = action(spec);
    let positions: Vec<(usize, usize)> = (0..d)
        .flat_map(|r| (r + usize::from(hollow)..d).map(move |c| (r, c)))
        .collect();
    let elementary: Vec<Mat> = positions
        .iter()
        .map(|&(r, c)| {
            let mut e = Mat::zero(k, d, d);
            e.set(r, c, 1);
            e.set(c, r, 1);
            e
        })
        .collect();
    let mut rows = Vec::with_capacity(2 * positions.len());
    for g in [&act.g1, &act.g2] {
        let images: Vec<Mat> = elementary.iter().map(|e| e.congruence(g).add(e)).collect();
        for &(r, c) in &positions {
            rows.push(images.iter().map(|t| t.at(r, c)).collect());
        }
    }
    Mat::from_rows(k, &rows)
        .nullspace()
        .into_iter()
        .map(|v| {
            let mut s = Mat::zero(k, d, d);
            for (pi, &(r, c)) in positions.iter().enumerate() {
                s.set(r, c, v[pi]);
                s.set(c, r, v[pi]);
            }
            s
        })
        .collect()
}

/// Basis of the space of invariant symmetric hollow matrices — the ambient
/// linear space in which every invariant symplectic Gram lives.
#[must_use]
pub fn invariant_alternating_basis(spec: &ModuleSpec) -> Vec<Mat> {
    invariant_symmetric_span(spec, true)
}

/// Asserts that the parametrized Grams and the generic solution space
/// describe the same set of forms.
fn cross_check(spec: &ModuleSpec, restrict_tail: bool, structured: &[Mat], basis: &[Mat]) {
    let k = spec.field;
    let q = u128::from(k.order());
    let d = spec.dim();
    let structured_set: HashSet<Vec<u64>> = structured.iter().map(key).collect();
    assert_eq!(
        structured_set.len(),
        structured.len(),
        "the parametrized enumeration repeats a Gram matrix"
    );
    for g in structured {
        assert!(
            pairs_indecomposably(spec, g).expect("structured Grams are half-split and invertible"),
            "a parametrized Gram pairs the copies decomposably"
        );
    }

    // Containment: every parametrized Gram solves the invariance equations.
    let positions: Vec<(usize, usize)> = (0..d)
        .flat_map(|r| (r + 1..d).map(move |c| (r, c)))
        .collect();
    let coords = |m: &Mat| -> Vec<u64> { positions.iter().map(|&(r, c)| m.at(r, c)).collect() };
    let base_rows: Vec<Vec<u64>> = basis.iter().map(coords).collect();
    let base_rank = Mat::from_rows(k, &base_rows).rank();
    assert_eq!(base_rank, basis.len(), "the solution basis is independent");
    for g in structured {
        let mut rows = base_rows.clone();
        rows.push(coords(g));
        assert_eq!(
            Mat::from_rows(k, &rows).rank(),
            base_rank,
            "a parametrized Gram does not solve the invariance equations"
        );
    }

    let decode = |code: u128| -> Mat {
        let mut s = Mat::zero(k, d, d);
        let mut c = code;
        for b in basis {
            let v = (c % q) as u64;
            c /= q;
            if v != 0 {
                s = s.add(&b.scale(v));
            }
        }
        s
    };
    let keep = |s: &Mat| -> bool {
        s.is_invertible()
            && (!restrict_tail || !has_free_tail(&spec.family) || tail_is_zero(spec, s))
            && pairs_indecomposably(spec, s).expect("invertible half-split Gram")
    };

    let total = qpow(q, basis.len());
    if total <= EXHAUSTIVE_CAP {
        // Equality: sweep the whole solution space.
        let swept: HashSet<Vec<u64>> = (0..total as u64)
            .into_par_iter()
            .filter_map(|code| {
                let s = decode(u128::from(code));
                keep(&s).then(|| key(&s))
            })
            .collect();
        assert_eq!(
            swept, structured_set,
            "the generic and parametrized enumerations disagree"
        );
    } else {
        // The solution space is too large to sweep; this only happens for
        // half-split families with a pinned tail, where random solutions can
        // be certified individually through the tail kill.
        assert!(
            restrict_tail && has_free_tail(&spec.family),
            "only tail-pinned half-split sweeps may exceed the cap"
        );
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        let mut hits = 0;
        for _ in 0..256 {
            let mut code = 0u128;
            for _ in 0..basis.len() {
                code = code * q + u128::from(rng.gen_range(0..k.order()));
            }
            let s = decode(code);
            if !s.is_invertible()
                || !pairs_indecomposably(spec, &s).expect("invertible half-split Gram")
            {
                continue;
            }
            let killed = kill_tail(spec, &s).expect("invertible half-split Gram").1;
            assert!(
                structured_set.contains(&key(&killed)),
                "a sampled generic solution leaves the parametrized set after its tail kill"
            );
            hits += 1;
        }
        assert!(hits > 0, "no sampled generic solution survived the filters");
    }
}

/// All invariant symplectic Gram matrices of the module, as validated forms
/// in a deterministic order.
///
/// Two independent code paths produce the set — the explicit per-family
/// parametrization and a generic sweep of the solution space of the
/// invariance equations — and the call aborts if they disagree.  For the
/// squared families only Grams pairing the two copies indecomposably are
/// kept (the restriction to either copy is degenerate); decomposable
/// pairings leave the classified universe.  With `restrict_tail` the free
/// symmetric hollow tail block of the half-split families is pinned to
/// zero; [`verify`] certifies that pinning separately with sampled
/// tail-kill witnesses.
///
/// # Errors
///
/// [`Error::Budget`] when the parametrized family exceeds
/// [`EXHAUSTIVE_CAP`].
///
/// # Panics
///
/// Panics when the two enumeration paths disagree — an internal soundness
/// failure of the oracle, never a property of the input.
pub fn enumerate_invariant_symplectic(
    spec: &ModuleSpec,
    restrict_tail: bool,
) -> Result<Vec<BilinearForm>> {
    let count = structured_count(spec, restrict_tail);
    if count > EXHAUSTIVE_CAP {
        return Err(Error::Budget(format!(
            "enumerating {count} forms on {:?} exceeds the cap of {EXHAUSTIVE_CAP}",
            spec.family
        )));
    }
    let mut grams = structured_forms(spec, restrict_tail)?;
    assert_eq!(
        grams.len() as u128,
        count,
        "the parametrized enumeration misses its own count"
    );
    grams.sort_by(|a, b| a.entries().cmp(b.entries()));
    let basis = invariant_alternating_basis(spec);
    cross_check(spec, restrict_tail, &grams, &basis);
    grams
        .into_iter()
        .map(|g| {
            let b = BilinearForm::new(spec.clone(), g)?;
            ensure_invariant_symplectic(&b)?;
            Ok(b)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Unit groups
// ---------------------------------------------------------------------------

/// The invertible module endomorphisms, either complete or as a set of
/// stability generators.
pub enum UnitSet {
    /// Every unit, stored as coefficient codes over the endomorphism basis
    /// and decoded on demand.
    Exhaustive {
        /// Basis of the endomorphism algebra.
        basis: Vec<Mat>,
        /// Base-`q` coefficient codes of the invertible elements.
        codes: Vec<u64>,
    },
    /// The endomorphism algebra is too large to sweep: invertible scalars
    /// `λI` and invertible basis translates `I + λb` only.
    Generators(Vec<Mat>),
}

impl UnitSet {
    /// Number of stored units or generators.
    #[must_use]
    pub fn len(&self) -> usize {
        match self {
            UnitSet::Exhaustive { codes, .. } => codes.len(),
            UnitSet::Generators(mats) => mats.len(),
        }
    }

    /// Whether `len` counts the whole unit group.
    #[must_use]
    pub fn is_exhaustive(&self) -> bool {
        matches!(self, UnitSet::Exhaustive { .. })
    }

    /// True when no unit is stored (an empty endomorphism basis; unused in
    /// practice but demanded by the `len` convention).
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The `i`-th stored unit.
    #[must_use]
    pub fn unit(&self, i: usize) -> Mat {
        match self {
            UnitSet::Exhaustive { basis, codes } => decode_end(basis, codes[i]),
            UnitSet::Generators(mats) => mats[i].clone(),
        }
    }
}

/// Linear combination of the endomorphism basis with base-`q` code `c`.
fn decode_end(basis: &[Mat], code: u64) -> Mat {
    let field = basis[0].field;
    let q = field.order();
    let mut m = Mat::zero(field, basis[0].rows, basis[0].cols);
    let mut c = code;
    for b in basis {
        let v = c % q;
        c /= q;
        if v != 0 {
            m = m.add(&b.scale(v));
        }
    }
    m
}

/// The invertible module endomorphisms.
///
/// While `q^(dim End)` stays within [`EXHAUSTIVE_CAP`] every unit is
/// produced; beyond that only stability generators are returned (the
/// invertible scalars and the invertible basis translates of the identity),
/// and orbit partitions fall back to certified label merges for
/// completeness.  The identity is always included.
#[must_use]
pub fn unit_group(spec: &ModuleSpec) -> UnitSet {
    let k = spec.field;
    let q = k.order();
    let basis = end_basis(spec);
    let total = qpow(u128::from(q), basis.len());
    if total <= EXHAUSTIVE_CAP {
        let codes: Vec<u64> = (0..total as u64)
            .into_par_iter()
            .filter(|&code| decode_end(&basis, code).is_invertible())
            .collect();
        UnitSet::Exhaustive { basis, codes }
    } else {
        let id = Mat::identity(k, spec.dim());
        let mut mats = Vec::new();
        let mut seen = HashSet::new();
        for lam in 1..q {
            let m = id.scale(lam);
            if seen.insert(key(&m)) {
                mats.push(m);
            }
        }
        for b in &basis {
            for lam in 1..q {
                let m = id.add(&b.scale(lam));
                if m.is_invertible() && seen.insert(key(&m)) {
                    mats.push(m);
                }
            }
        }
        UnitSet::Generators(mats)
    }
}

// ---------------------------------------------------------------------------
// Orbit partitions
// ---------------------------------------------------------------------------

/// Partitions the forms into congruence orbits under the units and checks
/// the canonical labels against the partition.
///
/// With an exhaustive unit set the orbit of each unvisited form is produced
/// in a single sweep `{MᵀSM : M a unit}`, which is the exact congruence
/// orbit; when every input Gram has a zero tail block, each image is
/// composed with its tail-killing unit, which maps the orbit back onto that
/// slice exactly.  With a generator set the sweep only refines the true
/// partition, so forms carrying equal canonical labels are merged
/// afterwards; every such merge is certified because canonicalization has
/// already verified an exact isometry onto the shared representative.
///
/// Discrepancies reported: an orbit whose members disagree on their label,
/// two exhaustive orbits sharing a label, an orbit image escaping the
/// enumerated set.
///
/// # Errors
///
/// [`Error::Shape`] when `forms` is empty or mixes modules;
/// [`Error::Budget`] when `|forms| · |units|` exceeds [`ORBIT_BUDGET`].
pub fn orbit_partition(forms: &[BilinearForm], units: &UnitSet) -> Result<OrbitReport> {
    let Some(first) = forms.first() else {
        return Err(Error::Shape("cannot partition an empty set of forms".into()));
    };
    let spec = first.spec.clone();
    if forms.iter().any(|f| f.spec != spec) {
        return Err(Error::Shape("all forms must live on one module".into()));
    }
    if (forms.len() as u128) * (units.len() as u128) > ORBIT_BUDGET {
        return Err(Error::Budget(format!(
            "{} forms under {} units exceeds the orbit budget of {ORBIT_BUDGET}",
            forms.len(),
            units.len()
        )));
    }

    let labels: Vec<String> = forms
        .iter()
        .map(|f| canonicalize(f).map(|(l, _)| render(&l)))
        .collect::<Result<_>>()?;
    let index: HashMap<Vec<u64>, usize> = forms
        .iter()
        .enumerate()
        .map(|(i, f)| (key(&f.gram), i))
        .collect();
    let slice = has_free_tail(&spec.family) && forms.iter().all(|f| tail_is_zero(&spec, &f.gram));
    // Image of one congruence move, as an index into the enumerated set.
    let target = |gram: &Mat, m: &Mat| -> Option<usize> {
        let mut img = gram.congruence(m);
        if slice {
            img = kill_tail(&spec, &img).ok()?.1;
        }
        index.get(&key(&img)).copied()
    };

    let mut disc = BTreeSet::new();
    let mut uf = UnionFind::new(forms.len());
    match units {
        UnitSet::Exhaustive { .. } => {
            let mut visited = vec![false; forms.len()];
            for i in 0..forms.len() {
                if visited[i] {
                    continue;
                }
                visited[i] = true;
                let gram = &forms[i].gram;
                let images: Vec<isize> = (0..units.len())
                    .into_par_iter()
                    .map(|u| target(gram, &units.unit(u)).map_or(-1, |j| j as isize))
                    .collect();
                for j in images {
                    let Ok(j) = usize::try_from(j) else {
                        disc.insert(format!(
                            "the orbit of form {i} ({}) escapes the enumerated set",
                            labels[i]
                        ));
                        continue;
                    };
                    visited[j] = true;
                    uf.union(i, j);
                    if labels[j] != labels[i] {
                        disc.insert(format!(
                            "one orbit reaches both {} and {}",
                            labels[i], labels[j]
                        ));
                    }
                }
            }
        }
        UnitSet::Generators(mats) => {
            for (i, f) in forms.iter().enumerate() {
                for m in mats {
                    match target(&f.gram, m) {
                        Some(j) => {
                            uf.union(i, j);
                            if labels[j] != labels[i] {
                                disc.insert(format!(
                                    "one orbit reaches both {} and {}",
                                    labels[i], labels[j]
                                ));
                            }
                        }
                        None => {
                            disc.insert(format!(
                                "the orbit of form {i} ({}) escapes the enumerated set",
                                labels[i]
                            ));
                        }
                    }
                }
            }
            // The generators only refine the true partition: close it with
            // the certified canonicalization witnesses.
            let mut by_label: HashMap<&str, usize> = HashMap::new();
            for (i, l) in labels.iter().enumerate() {
                match by_label.entry(l.as_str()) {
                    std::collections::hash_map::Entry::Occupied(e) => uf.union(*e.get(), i),
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(i);
                    }
                }
            }
        }
    }

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..forms.len() {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    let mut seen_labels: HashMap<String, usize> = HashMap::new();
    let mut orbits = Vec::new();
    for members in groups.values() {
        let label = labels[members[0]].clone();
        for &m in members {
            if labels[m] != label {
                disc.insert(format!("one orbit reaches both {} and {}", label, labels[m]));
            }
        }
        if let Some(prev) = seen_labels.insert(label.clone(), members.len()) {
            // With generators, equal labels were merged above; reaching this
            // point means two exhaustively swept orbits share a label.
            disc.insert(format!(
                "distinct orbits (sizes {prev} and {}) share the label {label}",
                members.len()
            ));
        }
        orbits.push(OrbitSummary {
            size: members.len(),
            label,
        });
    }
    orbits.sort_by(|a, b| a.label.cmp(&b.label).then(a.size.cmp(&b.size)));
    Ok(OrbitReport {
        spec,
        total_forms: forms.len(),
        orbits,
        discrepancies: disc.into_iter().collect(),
    })
}

// ---------------------------------------------------------------------------
// Quadratic refinements
// ---------------------------------------------------------------------------

/// Every invariant quadratic refinement of the class representative: the
/// halved representative with each diagonal correction that stays
/// invariant.
fn quad_candidates(spec: &ModuleSpec, label: &ClassLabel) -> Result<Vec<QuadraticForm>> {
    let rep = representative(spec, label)?;
    let k = spec.field;
    let d = spec.dim();
    let q = u128::from(k.order());
    let total = qpow(q, d);
    if total > EXHAUSTIVE_CAP {
        return Err(Error::Budget(format!(
            "sweeping {total} diagonal corrections exceeds the cap of {EXHAUSTIVE_CAP}"
        )));
    }
    let base = s_hat(&rep)?;
    let quads: Vec<QuadraticForm> = (0..total as u64)
        .into_par_iter()
        .filter_map(|code| {
            let mut mat = base.rep().clone();
            let mut c = u128::from(code);
            for i in 0..d {
                mat.set(i, i, (c % q) as u64);
                c /= q;
            }
            let qf = QuadraticForm::new(spec.clone(), &mat).ok()?;
            quad_is_invariant(&qf).then_some(qf)
        })
        .collect();
    Ok(quads)
}

/// Decides invariant-quadratic existence by sweeping every diagonal
/// correction of the halved representative.
///
/// # Errors
///
/// [`Error::Budget`] when the diagonal sweep exceeds [`EXHAUSTIVE_CAP`];
/// label validation errors are propagated.
pub fn quad_exists_brute(spec: &ModuleSpec, label: &ClassLabel) -> Result<bool> {
    Ok(!quad_candidates(spec, label)?.is_empty())
}

/// Partitions the invariant quadratic refinements of one class into orbits
/// under the stabilizer of the class representative, and compares the
/// partition with the canonical quadratic labels and representatives.
///
/// When no refinement exists the report simply records zero forms (and a
/// discrepancy if the existence verdict disagrees).
///
/// # Errors
///
/// [`Error::Budget`] when the diagonal sweep or `|quads| · |stabilizer|`
/// exceeds the caps, or when the unit group is not exhaustive.
pub fn quad_orbit_partition(spec: &ModuleSpec, label: &ClassLabel) -> Result<OrbitReport> {
    let rep = representative(spec, label)?;
    let quads = quad_candidates(spec, label)?;
    let mut disc = BTreeSet::new();
    if quad_exists(spec, label)? != !quads.is_empty() {
        disc.insert(format!(
            "the existence verdict disagrees with {} enumerated refinements",
            quads.len()
        ));
    }
    if quads.is_empty() {
        return Ok(OrbitReport {
            spec: spec.clone(),
            total_forms: 0,
            orbits: Vec::new(),
            discrepancies: disc.into_iter().collect(),
        });
    }

    let units = unit_group(spec);
    if !units.is_exhaustive() {
        return Err(Error::Budget(
            "the quadratic orbit sweep needs the exhaustive unit group".into(),
        ));
    }
    let stab: Vec<Mat> = (0..units.len())
        .into_par_iter()
        .filter_map(|i| {
            let m = units.unit(i);
            (rep.gram.congruence(&m) == rep.gram).then_some(m)
        })
        .collect();
    if (quads.len() as u128) * (stab.len() as u128) > ORBIT_BUDGET {
        return Err(Error::Budget(format!(
            "{} refinements under {} stabilizer units exceeds the orbit budget",
            quads.len(),
            stab.len()
        )));
    }

    let labels: Vec<String> = quads
        .iter()
        .map(|q| quad_canonicalize(q).map(|(l, _)| format!("{l:?}")))
        .collect::<Result<_>>()?;
    let index: HashMap<Vec<u64>, usize> = quads
        .iter()
        .enumerate()
        .map(|(i, q)| (key(q.rep()), i))
        .collect();

    let mut uf = UnionFind::new(quads.len());
    let mut visited = vec![false; quads.len()];
    for i in 0..quads.len() {
        if visited[i] {
            continue;
        }
        visited[i] = true;
        for m in &stab {
            let image = QuadraticForm::new(spec.clone(), &quads[i].rep().congruence(m))?;
            match index.get(&key(image.rep())) {
                Some(&j) => {
                    visited[j] = true;
                    uf.union(i, j);
                    if labels[j] != labels[i] {
                        disc.insert(format!(
                            "one orbit reaches both {} and {}",
                            labels[i], labels[j]
                        ));
                    }
                }
                None => {
                    disc.insert(format!(
                        "the stabilizer orbit of refinement {i} escapes the enumerated set"
                    ));
                }
            }
        }
    }

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..quads.len() {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    let mut seen_labels: HashSet<String> = HashSet::new();
    let mut orbits = Vec::new();
    for members in groups.values() {
        let label = labels[members[0]].clone();
        if !seen_labels.insert(label.clone()) {
            disc.insert(format!("distinct orbits share the label {label}"));
        }
        orbits.push(OrbitSummary {
            size: members.len(),
            label,
        });
    }
    orbits.sort_by(|a, b| a.label.cmp(&b.label).then(a.size.cmp(&b.size)));

    // The canonical refinements must tile the orbits exactly.
    let (reps, rep_labels) = quad_representatives(spec, label)?;
    if reps.len() != orbits.len() {
        disc.insert(format!(
            "{} canonical refinements but {} orbits",
            reps.len(),
            orbits.len()
        ));
    }
    let expected: BTreeSet<String> = rep_labels.iter().map(|l| format!("{l:?}")).collect();
    let got: BTreeSet<String> = orbits.iter().map(|o| o.label.clone()).collect();
    if expected != got {
        disc.insert(format!(
            "canonical refinement labels {expected:?} differ from orbit labels {got:?}"
        ));
    }
    for r in &reps {
        if !index.contains_key(&key(r.rep())) {
            disc.insert("a canonical refinement is missing from the enumerated set".into());
        }
    }

    Ok(OrbitReport {
        spec: spec.clone(),
        total_forms: quads.len(),
        orbits,
        discrepancies: disc.into_iter().collect(),
    })
}

// ---------------------------------------------------------------------------
// Degenerate embeddings
// ---------------------------------------------------------------------------

/// Checks that every endomorphism pair `(a₁, a₂)`, viewed as an embedding
/// of the module into the hyperbolic pairing of two copies, restricts that
/// pairing degenerately: `a₁ᵀBa₂ + a₂ᵀBa₁` is singular for an invariant
/// symmetric non-degenerate `B`.  The sweep over pairs is exhaustive.
///
/// This is the structural reason the squared families admit no forms whose
/// restriction to an embedded copy is non-degenerate, so it is checked here
/// from first principles.
///
/// # Errors
///
/// [`Error::Unsupported`] when the module carries no invariant symmetric
/// non-degenerate pairing; [`Error::Budget`] when the pair sweep exceeds
/// [`EXHAUSTIVE_CAP`].
pub fn embedded_submodules_degenerate(spec: &ModuleSpec) -> Result<bool> {
    let k = spec.field;
    let d = spec.dim();
    let q = u128::from(k.order());
    let sym = invariant_symmetric_span(spec, false);
    let span_size = qpow(q, sym.len());
    if span_size > EXHAUSTIVE_CAP {
        return Err(Error::Budget(
            "the invariant symmetric span is too large to search".into(),
        ));
    }
    let pairing = (1..span_size as u64)
        .map(|code| decode_end(&sym, code))
        .find(Mat::is_invertible)
        .ok_or_else(|| {
            Error::Unsupported(
                "the module carries no invariant symmetric non-degenerate pairing".into(),
            )
        })?;

    let ends = end_basis(spec);
    let singles = qpow(q, ends.len());
    if singles.checked_mul(singles).is_none_or(|p| p > EXHAUSTIVE_CAP) {
        return Err(Error::Budget(
            "the endomorphism pair sweep is too large".into(),
        ));
    }
    let all: Vec<Mat> = (0..singles as u64)
        .map(|code| decode_end(&ends, code))
        .collect();
    Ok(all.par_iter().all(|a1| {
        let ba1 = pairing.mul(a1);
        all.iter().all(|a2| {
            let g = a1.transpose().mul(&pairing.mul(a2)).add(&a2.transpose().mul(&ba1));
            g.rank() < d
        })
    }))
}

// ---------------------------------------------------------------------------
// The full pipeline
// ---------------------------------------------------------------------------

/// Whether [`verify`] pins the free tail block for this module: the full
/// parametrized family must stay small and an exhaustive orbit sweep must
/// fit the budget.
#[must_use]
pub fn suggested_restriction(spec: &ModuleSpec) -> bool {
    if !has_free_tail(&spec.family) {
        return false;
    }
    let full = structured_count(spec, false);
    if full > FULL_TAIL_FORM_CAP {
        return true;
    }
    let unit_bound = qpow(u128::from(spec.field.order()), end_basis(spec).len());
    unit_bound <= EXHAUSTIVE_CAP && full * unit_bound > ORBIT_BUDGET
}

/// Runs the full pipeline for one module and reports every check: the forms
/// are enumerated (tail pinned when [`suggested_restriction`] says so), the
/// orbits swept, and the partition compared against the canonical class
/// count, the canonical label list, the re-verified witnesses, the
/// brute-force quadratic existence verdicts, label stability under sampled
/// random units, and — in pinned mode — sampled tail-kill witnesses.
///
/// # Errors
///
/// Budget and classification errors from the steps are propagated;
/// comparison failures land in the report's discrepancy list instead.
pub fn verify(spec: &ModuleSpec) -> Result<OrbitReport> {
    let k = spec.field;
    let restrict = suggested_restriction(spec);
    let forms = enumerate_invariant_symplectic(spec, restrict)?;
    let units = unit_group(spec);
    let mut report = orbit_partition(&forms, &units)?;
    let mut disc: Vec<String> = std::mem::take(&mut report.discrepancies);

    // Count identity.
    let classes = count_classes(spec);
    if report.orbits.len() as u128 != classes {
        disc.push(format!(
            "{} orbits but {classes} classes by the closed count",
            report.orbits.len()
        ));
    }

    // Label bijection: the orbit labels are exactly the canonical labels.
    let labels = enumerate_classes(spec)?;
    let expected: BTreeSet<String> = labels.iter().map(render).collect();
    let got: BTreeSet<String> = report.orbits.iter().map(|o| o.label.clone()).collect();
    for missing in expected.difference(&got) {
        disc.push(format!("no enumerated form canonicalizes to {missing}"));
    }
    for extra in got.difference(&expected) {
        disc.push(format!("orbit label {extra} is not a canonical label"));
    }

    // Witness soundness, re-verified from scratch on a prefix.
    let act = action(spec);
    for (i, f) in forms.iter().enumerate().take(32) {
        let (label, w) = canonicalize(f)?;
        let rep = representative(spec, &label)?;
        if f.gram.congruence(&w.m) != rep.gram {
            disc.push(format!("the witness of form {i} misses the representative"));
        }
        if !w.m.is_invertible()
            || w.m.mul(&act.g1) != act.g1.mul(&w.m)
            || w.m.mul(&act.g2) != act.g2.mul(&w.m)
        {
            disc.push(format!("the witness of form {i} is not an endomorphism unit"));
        }
    }

    // Quadratic existence: closed verdict against the diagonal sweep.
    for label in &labels {
        match quad_exists_brute(spec, label) {
            Ok(brute) => {
                if brute != quad_exists(spec, label)? {
                    disc.push(format!(
                        "existence disagreement on {}: sweep says {brute}",
                        render(label)
                    ));
                }
            }
            Err(Error::Budget(_)) => {} // beyond the sweep, checked elsewhere
            Err(e) => return Err(e),
        }
    }

    // Label stability under sampled random units.
    let basis = end_basis(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut random_unit = || -> Option<Mat> {
        for _ in 0..1000 {
            let mut code = 0u128;
            for _ in 0..basis.len() {
                code = code * u128::from(k.order()) + u128::from(rng.gen_range(0..k.order()));
            }
            let mut m = Mat::zero(k, spec.dim(), spec.dim());
            let mut c = code;
            for b in &basis {
                let v = (c % u128::from(k.order())) as u64;
                c /= u128::from(k.order());
                if v != 0 {
                    m = m.add(&b.scale(v));
                }
            }
            if m.is_invertible() {
                return Some(m);
            }
        }
        None
    };
    let step = (forms.len() / 8).max(1);
    for _ in 0..24 {
        let Some(m) = random_unit() else {
            disc.push("no random endomorphism unit found in 1000 draws".into());
            break;
        };
        for (i, f) in forms.iter().enumerate().step_by(step) {
            let moved = BilinearForm::new(spec.clone(), f.gram.congruence(&m))?;
            let (label, _) = canonicalize(&moved)?;
            let (expected, _) = canonicalize(f)?;
            if label != expected {
                disc.push(format!("form {i} changes label under a random unit"));
            }
        }
    }

    // Pinned tails: certify the tail kill on sampled nonzero tails.
    if restrict {
        let h = spec.dim() / 2;
        let tail_codes = qpow(u128::from(k.order()), hollow_dim(h));
        for t in 0..100 {
            let f = &forms[t % forms.len()];
            let code = 1 + u128::from(rng.gen_range(0..(tail_codes - 1) as u64));
            let d = symmetric_hollow(k, h, code);
            let mut gram = f.gram.clone();
            for r in 0..h {
                for c in 0..h {
                    gram.set(h + r, h + c, d.at(r, c));
                }
            }
            let perturbed = BilinearForm::new(spec.clone(), gram.clone())?;
            let (label, _) = canonicalize(&perturbed)?;
            let (expected, _) = canonicalize(f)?;
            if label != expected {
                disc.push(format!("tail sample {t} changes the label"));
            }
            let (m, killed) = kill_tail(spec, &gram)?;
            if killed != f.gram {
                disc.push(format!("tail sample {t} does not kill back to its slice form"));
            }
            if !m.is_invertible()
                || m.mul(&act.g1) != act.g1.mul(&m)
                || m.mul(&act.g2) != act.g2.mul(&m)
            {
                disc.push(format!("the tail kill of sample {t} is not an endomorphism unit"));
            }
        }
    }

    report.discrepancies = disc;
    Ok(report)
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn gf2() -> FieldSpec {
        FieldSpec::canonical(1)
    }

    fn spec(family: Family) -> ModuleSpec {
        ModuleSpec::new(gf2(), family).unwrap()
    }

    fn t() -> Poly {
        Poly::t(gf2())
    }

    fn t2t1() -> Poly {
        Poly::new(gf2(), vec![1, 1, 1])
    }

    #[test]
    fn enumerated_form_counts_match_the_desk_values() {
        let cases: Vec<(Family, bool, usize)> = vec![
            (Family::TrivialSq, false, 1),
            (Family::Regular, false, 4),
            (Family::RegularSq, false, 128),
            (Family::AnBn(1), false, 32),
            (Family::AnBn(1), true, 4),
            (Family::Cnf(1, t()), false, 1),
            (Family::Cnf(2, t()), false, 4),
            (Family::Cnf(2, t2t1()), true, 12),
            (Family::CnfSq(1, t()), false, 2),
            (Family::CnfSq(3, t()), true, 64),
            (Family::CnInf(2), false, 4),
            (Family::CnInfSq(2), true, 8),
        ];
        for (family, restrict, expected) in cases {
            let s = spec(family);
            let forms = enumerate_invariant_symplectic(&s, restrict).unwrap();
            assert_eq!(forms.len(), expected, "count mismatch on {:?}", s.family);
            // Deterministic order.
            let again = enumerate_invariant_symplectic(&s, restrict).unwrap();
            let enc: Vec<_> = forms.iter().map(|f| key(&f.gram)).collect();
            let enc2: Vec<_> = again.iter().map(|f| key(&f.gram)).collect();
            assert_eq!(enc, enc2);
        }
        let gf4 = FieldSpec::canonical(2);
        let trivial4 = ModuleSpec::new(gf4, Family::TrivialSq).unwrap();
        assert_eq!(enumerate_invariant_symplectic(&trivial4, false).unwrap().len(), 3);
    }

    #[test]
    fn unit_group_orders_match_the_desk_values() {
        let cases: Vec<(Family, usize)> = vec![
            (Family::TrivialSq, 6),
            (Family::Regular, 8),
            (Family::AnBn(1), 2048),
            (Family::Cnf(1, t()), 2),
            (Family::Cnf(2, t()), 32),
            (Family::CnInf(2), 32),
            (Family::RegularSq, 24576),
        ];
        for (family, expected) in cases {
            let s = spec(family);
            let units = unit_group(&s);
            assert!(units.is_exhaustive(), "{:?} should be exhaustive", s.family);
            assert_eq!(units.len(), expected, "unit count mismatch on {:?}", s.family);
        }
        let big = spec(Family::CnfSq(2, t()));
        let gens = unit_group(&big);
        assert!(!gens.is_exhaustive());
        assert!(gens.len() > 1);
        assert_eq!(gens.unit(0), Mat::identity(gf2(), 8));
    }

    #[test]
    fn orbit_partitions_match_the_class_counts() {
        let cases: Vec<(Family, bool, usize)> = vec![
            (Family::TrivialSq, false, 1),
            (Family::Regular, false, 4),
            (Family::AnBn(1), false, 4),
            (Family::AnBn(1), true, 4),
            (Family::Cnf(2, t()), false, 2),
            (Family::CnfSq(1, t()), false, 1),
        ];
        for (family, restrict, expected) in cases {
            let s = spec(family);
            let forms = enumerate_invariant_symplectic(&s, restrict).unwrap();
            let units = unit_group(&s);
            let report = orbit_partition(&forms, &units).unwrap();
            assert!(report.passed(), "{report}");
            assert_eq!(report.orbit_count(), expected, "{report}");
            assert_eq!(report.orbit_count() as u128, count_classes(&s));
        }
    }

    #[test]
    fn generator_mode_partitions_through_certified_label_merges() {
        let s = spec(Family::CnfSq(2, t()));
        let forms = enumerate_invariant_symplectic(&s, false).unwrap();
        assert_eq!(forms.len(), 512);
        let units = unit_group(&s);
        assert!(!units.is_exhaustive());
        let report = orbit_partition(&forms, &units).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.orbit_count() as u128, count_classes(&s));
    }

    #[test]
    fn quadratic_orbit_counts_match_the_desk_values() {
        let trivial = spec(Family::TrivialSq);
        let report = quad_orbit_partition(&trivial, &ClassLabel::Trivial).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.orbit_count(), 2);
        assert_eq!(report.total_forms, 4);

        let regular = spec(Family::Regular);
        let report = quad_orbit_partition(&regular, &ClassLabel::Group { b: 0, c: 0 }).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.orbit_count(), 1);

        let chain = spec(Family::Cnf(1, t()));
        let label = ClassLabel::EvenCoeffs { coeffs: vec![] };
        let report = quad_orbit_partition(&chain, &label).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.orbit_count(), 2);
    }

    #[test]
    fn existence_sweep_agrees_when_no_refinement_exists() {
        let s = spec(Family::Cnf(1, t2t1()));
        for label in enumerate_classes(&s).unwrap() {
            assert!(!quad_exists(&s, &label).unwrap());
            assert!(!quad_exists_brute(&s, &label).unwrap());
            let report = quad_orbit_partition(&s, &label).unwrap();
            assert!(report.passed(), "{report}");
            assert_eq!(report.total_forms, 0);
        }
    }

    #[test]
    fn embedded_copies_always_restrict_degenerately() {
        for family in [Family::Regular, Family::Cnf(1, t())] {
            let s = spec(family);
            assert!(embedded_submodules_degenerate(&s).unwrap());
        }
    }

    #[test]
    fn verify_passes_on_the_small_modules() {
        for family in [
            Family::TrivialSq,
            Family::Regular,
            Family::Cnf(1, t()),
            Family::CnfSq(1, t()),
            Family::CnInf(2),
        ] {
            let s = spec(family);
            let report = verify(&s).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn oversized_sweeps_are_rejected_with_budget_errors() {
        let wide = ModuleSpec::new(FieldSpec::canonical(21), Family::TrivialSq).unwrap();
        assert!(matches!(
            enumerate_invariant_symplectic(&wide, false),
            Err(Error::Budget(_))
        ));
        assert!(matches!(
            quad_exists_brute(&wide, &ClassLabel::Trivial),
            Err(Error::Budget(_))
        ));
    }
}
