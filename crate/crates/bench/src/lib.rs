//! Shared fixtures for the criterion benchmarks.

use kleinforms::classify::{enumerate_classes, representative};
use kleinforms::forms::BilinearForm;
use kleinforms::kgmodules::{end_basis, Family, ModuleSpec};
use kleinforms::matrix::Mat;
use kleinforms::{FieldSpec, Poly};

/// GF(2).
#[must_use]
pub fn gf2() -> FieldSpec {
    FieldSpec::canonical(1)
}

/// The doubled group algebra over GF(2).
#[must_use]
pub fn regular_sq() -> ModuleSpec {
    ModuleSpec::new(gf2(), Family::RegularSq).unwrap()
}

/// The doubled length-three chain over GF(2).
#[must_use]
pub fn cnf_sq_3() -> ModuleSpec {
    ModuleSpec::new(gf2(), Family::CnfSq(3, Poly::t(gf2()))).unwrap()
}

/// A non-canonical form on the module: the last class representative moved
/// off itself by the first unit that changes it, so canonicalization does
/// real work.
#[must_use]
pub fn perturbed_form(spec: &ModuleSpec) -> BilinearForm {
    let labels = enumerate_classes(spec).unwrap();
    let basis = end_basis(spec);
    for label in labels.iter().rev() {
        let rep = representative(spec, label).unwrap();
        for code in 1u64..1 << basis.len().min(16) {
            let mut m = Mat::zero(spec.field, spec.dim(), spec.dim());
            for (i, b) in basis.iter().enumerate().take(16) {
                if code >> i & 1 == 1 {
                    m = m.add(b);
                }
            }
            if !m.is_invertible() {
                continue;
            }
            let moved = rep.gram.congruence(&m);
            if moved != rep.gram {
                return BilinearForm::new(spec.clone(), moved).unwrap();
            }
        }
    }
    // Fall back to the first representative itself.
    let rep = representative(spec, &labels[0]).unwrap();
    BilinearForm::new(spec.clone(), rep.gram.clone()).unwrap()
}
