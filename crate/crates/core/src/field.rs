//! Exact arithmetic in finite fields of characteristic two.
//!
//! A field GF(2^e) is described by a [`FieldSpec`]: the extension degree `e`
//! together with a bit-encoded irreducible modulus polynomial over GF(2).
//! Elements are polynomial residues, bit-encoded with the constant term in
//! the least significant bit, and travel either as raw `u64` values (inside
//! hot loops) or wrapped in a [`Scalar`] that remembers its owner field.
//!
//! Besides the four field operations, this module provides the
//! characteristic-two specific machinery the rest of the library relies on:
//! square roots (squaring is a bijection on a perfect field), absolute
//! traces, Artin–Schreier coset representatives of the additive subgroup
//! `{x² + x}`, and explicit degree-`m` extensions `K = k[ε]` with their
//! `m` distinct `k`-embeddings `σᵢ`.

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Bit-encoded polynomials over GF(2)
// ---------------------------------------------------------------------------

/// Degree of a bit-encoded GF(2) polynomial, or `None` for the zero
/// polynomial.
fn bitpoly_degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// Carry-less product of two bit-encoded GF(2) polynomials.
fn bitpoly_mul(a: u64, b: u64) -> u128 {
    let mut acc: u128 = 0;
    let mut b = b;
    let mut shift = 0u32;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= (a as u128) << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

/// Remainder of a bit-encoded GF(2) polynomial modulo `m` (m ≠ 0).
fn bitpoly_rem(mut v: u128, m: u64) -> u64 {
    let md = bitpoly_degree(m).expect("zero modulus");
    while v >> md != 0 {
        let vd = 127 - v.leading_zeros();
        v ^= (m as u128) << (vd - md);
    }
    v as u64
}

/// Greatest common divisor of two bit-encoded GF(2) polynomials.
fn bitpoly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = bitpoly_rem(a as u128, b);
        a = b;
        b = r;
    }
    a
}

/// `T^(2^i) mod m` for a bit-encoded modulus, by repeated squaring.
fn bitpoly_frob_pow(i: u32, m: u64) -> u64 {
    let mut x = bitpoly_rem(2, m); // the polynomial T
    for _ in 0..i {
        x = bitpoly_rem(bitpoly_mul(x, x), m);
    }
    x
}

/// Irreducibility of a bit-encoded GF(2) polynomial, by the Frobenius
/// criterion: `p` of degree `n` is irreducible iff `T^(2^n) ≡ T (mod p)`
/// and `gcd(T^(2^(n/q)) − T, p) = 1` for every prime divisor `q` of `n`.
fn bitpoly_is_irreducible(p: u64) -> bool {
    let n = match bitpoly_degree(p) {
        Some(0) | None => return false,
        Some(n) => n,
    };
    let t = bitpoly_rem(2, p);
    if bitpoly_frob_pow(n, p) != t {
        return false;
    }
    let mut rest = n;
    let mut primes = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if rest % q == 0 {
            primes.push(q);
            while rest % q == 0 {
                rest /= q;
            }
        }
        q += 1;
    }
    if rest > 1 {
        primes.push(rest);
    }
    primes
        .into_iter()
        .all(|pr| bitpoly_gcd(bitpoly_frob_pow(n / pr, p) ^ t, p) == 1)
}

// ---------------------------------------------------------------------------
// FieldSpec
// ---------------------------------------------------------------------------

/// A finite field GF(2^e), described by its extension degree and a
/// bit-encoded irreducible modulus polynomial over GF(2).
///
/// The modulus is encoded as a non-negative integer whose binary digits are
/// the polynomial coefficients, least significant bit = constant term; so
/// `T² + T + 1` is `0b111 = 7`.  Two `FieldSpec`s compare equal exactly when
/// degree and modulus agree; values of distinct specs never mix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    /// Extension degree over GF(2); the field has `2^e` elements.
    pub e: u32,
    /// Bit-encoded irreducible modulus polynomial of degree `e`.
    pub modulus: u64,
}

impl FieldSpec {
    /// Builds a field from an explicit modulus.
    ///
    /// # Errors
    ///
    /// [`Error::BadModulus`] if the modulus is not an irreducible polynomial
    /// of degree exactly `e`, or if `e` is outside `1..=32`.
    pub fn new(e: u32, modulus: u64) -> Result<FieldSpec> {
        if !(1..=32).contains(&e) || bitpoly_degree(modulus) != Some(e) || !bitpoly_is_irreducible(modulus)
        {
            return Err(Error::BadModulus { degree: e, modulus });
        }
        Ok(FieldSpec { e, modulus })
    }

    /// The field GF(2^e) with the canonical modulus: the numerically
    /// smallest irreducible polynomial of degree `e`.
    ///
    /// # Panics
    ///
    /// Panics if `e` is outside `1..=32`.
    pub fn canonical(e: u32) -> FieldSpec {
        assert!((1..=32).contains(&e), "extension degree {e} out of range");
        let mut m = 1u64 << e;
        loop {
            if bitpoly_is_irreducible(m) {
                return FieldSpec { e, modulus: m };
            }
            m += 1;
        }
    }

    /// GF(2) itself.
    pub fn gf2() -> FieldSpec {
        FieldSpec::canonical(1)
    }

    /// Number of elements, `2^e`.
    pub fn order(&self) -> u64 {
        1u64 << self.e
    }

    /// Iterator over all element encodings, in increasing numeric order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.order()
    }

    /// True when `v` is a valid element encoding of this field.
    pub fn contains(&self, v: u64) -> bool {
        v < self.order()
    }

    /// Sum (= difference) of two elements.
    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(self.contains(a) && self.contains(b));
        a ^ b
    }

    /// Product of two elements.
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(self.contains(a) && self.contains(b));
        bitpoly_rem(bitpoly_mul(a, b), self.modulus)
    }

    /// `a` raised to the power `n`.
    pub fn pow(&self, a: u64, mut n: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while n != 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Multiplicative inverse.
    ///
    /// # Errors
    ///
    /// [`Error::ZeroInverse`] when `a = 0`.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// The unique square root; `sqrt(a) = a^(2^(e−1))` since squaring is a
    /// bijection on a finite field of characteristic two.
    pub fn sqrt(&self, a: u64) -> u64 {
        self.pow(a, self.order() / 2)
    }

    /// Frobenius power `a^(2^j)`.
    pub fn frobenius(&self, a: u64, j: u32) -> u64 {
        let mut x = a;
        for _ in 0..j {
            x = self.mul(x, x);
        }
        x
    }

    /// Absolute trace to GF(2): `a + a² + a⁴ + … + a^(2^(e−1))`.
    pub fn trace(&self, a: u64) -> u64 {
        let mut acc = 0u64;
        let mut x = a;
        for _ in 0..self.e {
            acc ^= x;
            x = self.mul(x, x);
        }
        debug_assert!(acc <= 1);
        acc
    }

    /// Wraps a raw value as a [`Scalar`] of this field.
    ///
    /// # Panics
    ///
    /// Panics if `v` is not a valid encoding for this field.
    pub fn scalar(&self, v: u64) -> Scalar {
        assert!(self.contains(v), "value {v} out of range for GF(2^{})", self.e);
        Scalar { field: *self, value: v }
    }
}

// ---------------------------------------------------------------------------
// Scalar
// ---------------------------------------------------------------------------

/// An element of a specific finite field: a bit-encoded polynomial residue
/// together with its owner [`FieldSpec`].
///
/// Arithmetic via the `+` and `*` operators panics when the owner fields
/// differ; that is a programming error, not a data error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    /// The field this value lives in.
    pub field: FieldSpec,
    /// Bit-encoded residue, `< 2^e`.
    pub value: u64,
}

impl Scalar {
    /// Multiplicative inverse.
    ///
    /// # Errors
    ///
    /// [`Error::ZeroInverse`] when the value is zero.
    pub fn inv(&self) -> Result<Scalar> {
        Ok(Scalar { field: self.field, value: self.field.inv(self.value)? })
    }

    /// The unique square root.
    pub fn sqrt(&self) -> Scalar {
        Scalar { field: self.field, value: self.field.sqrt(self.value) }
    }

    /// Absolute trace to GF(2), returned as 0 or 1.
    pub fn trace(&self) -> u64 {
        self.field.trace(self.value)
    }
}

impl std::ops::Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        assert_eq!(self.field, rhs.field, "scalars from different fields");
        Scalar { field: self.field, value: self.field.add(self.value, rhs.value) }
    }
}

impl std::ops::Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        assert_eq!(self.field, rhs.field, "scalars from different fields");
        Scalar { field: self.field, value: self.field.mul(self.value, rhs.value) }
    }
}

impl std::fmt::Display for Scalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

// ---------------------------------------------------------------------------
// Artin–Schreier cosets
// ---------------------------------------------------------------------------

/// The canonical transversal 𝒫 of the additive subgroup `{x² + x : x ∈ k}`:
/// `{0, c}` where `c` is the numerically smallest element of absolute
/// trace 1.
///
/// The subgroup `{x² + x}` has index two in the additive group of a finite
/// field and equals the kernel of the absolute trace, so the two returned
/// values lie in distinct cosets.
pub fn artin_schreier_reps(field: FieldSpec) -> [u64; 2] {
    let c = field
        .elements()
        .find(|&x| field.trace(x) == 1)
        .expect("every finite field of characteristic two has a trace-one element");
    [0, c]
}

/// Writes `a = rep + δ² + δ` with `rep` from [`artin_schreier_reps`];
/// returns `(rep, δ)` with the numerically smaller of the two solutions δ.
///
/// The map `x ↦ x² + x` is GF(2)-linear, so δ is found by solving a small
/// bit-matrix system over GF(2).
pub fn coset_reduce(field: FieldSpec, a: u64) -> (u64, u64) {
    assert!(field.contains(a));
    let reps = artin_schreier_reps(field);
    let rep = if field.trace(a) == 0 { reps[0] } else { reps[1] };
    let target = field.add(a, rep);
    let delta = solve_artin_schreier(field, target);
    debug_assert_eq!(field.add(rep, field.add(field.mul(delta, delta), delta)), a);
    (rep, delta)
}

/// Solves `x² + x = b` for `b` of trace zero, returning the numerically
/// smaller root.  GF(2)-linear: column `j` of the system matrix is the image
/// of the basis element `2^j`.
fn solve_artin_schreier(field: FieldSpec, b: u64) -> u64 {
    debug_assert_eq!(field.trace(b), 0, "no solution: trace(b) = 1");
    let e = field.e as usize;
    // Augmented rows: row i holds bit i of every column image plus bit i of b.
    let mut rows: Vec<u64> = vec![0; e];
    for j in 0..e {
        let g = 1u64 << j;
        let img = field.add(field.mul(g, g), g);
        for (i, row) in rows.iter_mut().enumerate() {
            *row |= ((img >> i) & 1) << j;
        }
    }
    for (i, row) in rows.iter_mut().enumerate() {
        *row |= ((b >> i) & 1) << e;
    }
    // Gaussian elimination over GF(2).
    let mut pivot_row = 0usize;
    let mut pivot_cols = Vec::new();
    for col in 0..e {
        if let Some(r) = (pivot_row..e).find(|&r| (rows[r] >> col) & 1 == 1) {
            rows.swap(pivot_row, r);
            for r in 0..e {
                if r != pivot_row && (rows[r] >> col) & 1 == 1 {
                    rows[r] ^= rows[pivot_row];
                }
            }
            pivot_cols.push(col);
            pivot_row += 1;
        }
    }
    let mut x = 0u64;
    for (r, &col) in pivot_cols.iter().enumerate() {
        if (rows[r] >> e) & 1 == 1 {
            x |= 1 << col;
        }
    }
    debug_assert_eq!(field.add(field.mul(x, x), x), b);
    // The kernel of x ↦ x² + x is {0, 1}; pick the smaller of x, x + 1.
    x.min(x ^ 1)
}

// ---------------------------------------------------------------------------
// Polynomials over a field of characteristic two
// ---------------------------------------------------------------------------

/// A polynomial with coefficients in a finite field of characteristic two,
/// stored in ascending order with no trailing zero coefficients (so the zero
/// polynomial has an empty coefficient vector).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    /// Coefficient field.
    pub field: FieldSpec,
    /// Coefficients, ascending; `coeffs.last()` is the leading coefficient.
    pub coeffs: Vec<u64>,
}

impl Poly {
    /// Builds a polynomial, trimming trailing zeros.
    ///
    /// # Panics
    ///
    /// Panics if a coefficient is out of range for the field.
    pub fn new(field: FieldSpec, mut coeffs: Vec<u64>) -> Poly {
        for &c in &coeffs {
            assert!(field.contains(c), "coefficient {c} out of range");
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    /// The monomial `T` over `field`.
    pub fn t(field: FieldSpec) -> Poly {
        Poly::new(field, vec![0, 1])
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// True when the leading coefficient is 1.
    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Coefficient of `T^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Evaluation at a point of the coefficient field, by Horner's rule.
    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = self.field.add(self.field.mul(acc, x), c);
        }
        acc
    }

    /// Sum of two polynomials over the same field.
    pub fn add(&self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "polynomials over different fields");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.field.add(self.coeff(i), rhs.coeff(i))).collect();
        Poly::new(self.field, coeffs)
    }

    /// Product of two polynomials over the same field.
    pub fn mul(&self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "polynomials over different fields");
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::new(self.field, vec![]);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = self.field.add(coeffs[i + j], self.field.mul(a, b));
            }
        }
        Poly::new(self.field, coeffs)
    }

    /// `self` raised to the power `n`.
    pub fn pow(&self, n: usize) -> Poly {
        let mut acc = Poly::new(self.field, vec![1]);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Remainder of `self` modulo a nonzero divisor.
    ///
    /// # Panics
    ///
    /// Panics when `divisor` is zero.
    pub fn rem(&self, divisor: &Poly) -> Poly {
        assert_eq!(self.field, divisor.field, "polynomials over different fields");
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = self
            .field
            .inv(*divisor.coeffs.last().unwrap())
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        while rem.len() > d {
            let k = rem.len() - 1 - d;
            let factor = self.field.mul(*rem.last().unwrap(), lead_inv);
            for i in 0..=d {
                rem[k + i] = self.field.add(rem[k + i], self.field.mul(factor, divisor.coeff(i)));
            }
            while rem.last() == Some(&0) {
                rem.pop();
            }
            if rem.len() <= d {
                break;
            }
        }
        Poly::new(self.field, rem)
    }

    /// Greatest common divisor (monic normalization not applied; callers
    /// only test for constancy).
    fn gcd(&self, rhs: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.coeffs.is_empty() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// `T^(q^i) mod self` where `q` is the coefficient field order, by
    /// repeated q-th powering.
    fn frob_pow_mod(&self, i: u32) -> Poly {
        let q = self.field.order();
        let mut x = Poly::t(self.field).rem(self);
        for _ in 0..i {
            let mut acc = Poly::new(self.field, vec![1]);
            let mut base = x.clone();
            let mut n = q;
            while n != 0 {
                if n & 1 == 1 {
                    acc = acc.mul(&base).rem(self);
                }
                base = base.mul(&base).rem(self);
                n >>= 1;
            }
            x = acc;
        }
        x
    }

    /// Irreducibility over the coefficient field, by the Frobenius
    /// criterion (`T^(q^m) ≡ T` and properness at maximal subdegrees).
    pub fn is_irreducible(&self) -> bool {
        let m = match self.degree() {
            Some(0) | None => return false,
            Some(m) => m as u32,
        };
        if self.frob_pow_mod(m) != Poly::t(self.field).rem(self) {
            return false;
        }
        let t = Poly::t(self.field);
        let mut rest = m;
        let mut q = 2;
        let mut prime_divisors = Vec::new();
        while q * q <= m {
            if rest % q == 0 {
                prime_divisors.push(q);
                while rest % q == 0 {
                    rest /= q;
                }
            }
            q += 1;
        }
        if rest > 1 {
            prime_divisors.push(rest);
        }
        for p in prime_divisors {
            let g = self.frob_pow_mod(m / p).add(&t).gcd(self);
            if g.degree() != Some(0) {
                return false;
            }
        }
        true
    }
}

impl std::fmt::Display for Poly {
    /// Human-readable form, e.g. `T^2 + T + 1`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (1, c) => write!(f, "{c}*T")?,
                (i, 1) => write!(f, "T^{i}")?,
                (i, c) => write!(f, "{c}*T^{i}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Extensions K = k[ε]
// ---------------------------------------------------------------------------

/// A degree-`m` extension `K = k[ε]` of a base field `k`, where ε is a root
/// of a monic irreducible `f` over `k`.
///
/// Since finite-field extensions are Galois, `K` is already a splitting
/// field of `f`; the `m` distinct `k`-embeddings are the Frobenius powers
/// `σᵢ(x) = x^(q^(i−1))` with `q = |k|`, and `σᵢ(ε)` runs over the roots
/// of `f`.
#[derive(Debug, Clone)]
pub struct ExtensionData {
    /// The base field `k`.
    pub base: FieldSpec,
    /// The monic irreducible polynomial defining the extension.
    pub f: Poly,
    /// Degree of `f`.
    pub m: usize,
    /// The extension field `K`, with canonical modulus of degree `e·m`.
    pub ext: FieldSpec,
    /// A root of `f` in `K` (the numerically smallest, for reproducibility).
    pub epsilon: u64,
    /// `embed[a]` is the image in `K` of the base element `a`.
    embed_table: Vec<u64>,
    /// Order of the base field, cached for the Frobenius embeddings.
    q: u64,
}

impl ExtensionData {
    /// Image in `K` of a base-field element.
    ///
    /// # Panics
    ///
    /// Panics if `a` is not a valid base-field encoding.
    pub fn embed(&self, a: u64) -> u64 {
        self.embed_table[a as usize]
    }

    /// Preimage in `k` of an extension element, if it has one.
    ///
    /// # Errors
    ///
    /// [`Error::NotInBaseField`] when `x` is outside the embedded copy of `k`.
    pub fn lift(&self, x: u64) -> Result<u64> {
        // The embedded copy is tiny (≤ |k| elements); scan it.
        self.embed_table
            .iter()
            .position(|&v| v == x)
            .map(|i| i as u64)
            .ok_or(Error::NotInBaseField)
    }

    /// The `i`-th `k`-embedding `σᵢ(x) = x^(q^(i−1))`, 1-based; `σ₁` is the
    /// identity.
    ///
    /// # Panics
    ///
    /// Panics if `i` is outside `1..=m`.
    pub fn sigma(&self, i: usize, x: u64) -> u64 {
        assert!((1..=self.m).contains(&i), "embedding index {i} out of range");
        let mut v = x;
        for _ in 0..(i - 1) {
            v = self.ext.pow(v, self.q);
        }
        v
    }

    /// ε as a [`Scalar`] of the extension field.
    pub fn epsilon_scalar(&self) -> Scalar {
        self.ext.scalar(self.epsilon)
    }
}

/// Builds the extension `K = k[ε]` for a monic irreducible `f` over `k`.
///
/// The extension field is GF(2^(e·m)) with the canonical modulus; the
/// embedding of `k` sends the class of `T` to the numerically smallest root
/// of `k`'s modulus in `K`, and ε is the numerically smallest root of the
/// embedded `f`.
///
/// # Errors
///
/// * [`Error::NotMonic`] — `f` is not monic (normalization is deliberately
///   not applied; callers must be explicit).
/// * [`Error::Reducible`] — `f` factors over `k`.
/// * [`Error::Unsupported`] — combined degree `e·m` exceeds 32.
pub fn make_extension(k: FieldSpec, f: &Poly) -> Result<ExtensionData> {
    assert_eq!(f.field, k, "f must have coefficients in k");
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let m = f.degree().expect("monic implies nonzero");
    if m < 1 {
        return Err(Error::Reducible);
    }
    if !f.is_irreducible() {
        return Err(Error::Reducible);
    }
    let em = k.e as usize * m;
    if em > 32 {
        return Err(Error::Unsupported(format!("extension degree {em} exceeds 32")));
    }
    let ext = FieldSpec::canonical(em as u32);

    // Embed k into K: send the class of T in k to the smallest root of k's
    // modulus polynomial in K, then extend multiplicatively/additively.
    let embed_table: Vec<u64> = if k.e == 1 {
        vec![0, 1]
    } else {
        let root = ext
            .elements()
            .find(|&x| {
                // Evaluate k's modulus (a GF(2) polynomial) at x in K.
                let mut acc = 0u64;
                let mut pw = 1u64;
                for i in 0..=k.e {
                    if (k.modulus >> i) & 1 == 1 {
                        acc = ext.add(acc, pw);
                    }
                    pw = ext.mul(pw, x);
                }
                acc == 0
            })
            .expect("k's modulus splits in K since e divides e·m");
        k.elements()
            .map(|a| {
                let mut acc = 0u64;
                let mut pw = 1u64;
                for i in 0..k.e {
                    if (a >> i) & 1 == 1 {
                        acc = ext.add(acc, pw);
                    }
                    pw = ext.mul(pw, root);
                }
                acc
            })
            .collect()
    };

    // ε: smallest root in K of f with embedded coefficients.
    let epsilon = ext
        .elements()
        .find(|&x| {
            let mut acc = 0u64;
            let mut pw = 1u64;
            for i in 0..=m {
                acc = ext.add(acc, ext.mul(embed_table[f.coeff(i) as usize], pw));
                pw = ext.mul(pw, x);
            }
            acc == 0
        })
        .expect("f splits in K = k[ε]");

    let data = ExtensionData { base: k, f: f.clone(), m, ext, epsilon, embed_table, q: k.order() };

    // Structural checks: the σᵢ(ε) are m distinct roots of f, and every σᵢ
    // fixes the embedded copy of k pointwise.
    let mut roots: Vec<u64> = (1..=m).map(|i| data.sigma(i, data.epsilon)).collect();
    for &r in &roots {
        let mut acc = 0u64;
        let mut pw = 1u64;
        for i in 0..=m {
            acc = ext.add(acc, ext.mul(data.embed(f.coeff(i)), pw));
            pw = ext.mul(pw, r);
        }
        assert_eq!(acc, 0, "σᵢ(ε) must be a root of f");
    }
    roots.sort_unstable();
    roots.dedup();
    assert_eq!(roots.len(), m, "the m embeddings must give m distinct roots");
    for a in k.elements() {
        for i in 1..=m {
            assert_eq!(data.sigma(i, data.embed(a)), data.embed(a), "σᵢ must fix k");
        }
    }
    Ok(data)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
