//! Classification of invariant symplectic bilinear forms and quadratic
//! forms on modules for the Klein four-group over perfect fields of
//! characteristic two.
//!
//! The library is organized bottom-up:
//!
//! * [`field`] — exact GF(2^e) arithmetic, extensions `k[ε]`, Frobenius
//!   embeddings, and Artin–Schreier coset representatives;
//! * [`matrix`] — dense matrices over such fields, the banded Toeplitz and
//!   Hankel constructors the structure theory is written in, and the
//!   coset-reduction algorithm for lower-Hankel matrices;
//! * [`kgmodules`] — the eight families of modules under study, their group
//!   actions, Jordan data over the splitting field, and endomorphism rings;
//! * [`forms`] — invariant bilinear forms, symplectic checks, quadratic
//!   forms as upper-triangular representatives, and Arf sums;
//! * [`classify`] — complete isometry classification: labels, counts,
//!   representatives, and constructive canonicalization with witnesses;
//! * [`oracle`] — an independent brute-force verifier built on exhaustive
//!   enumeration and unit-group orbits;
//! * [`io`] — the plain-text interchange format used by the CLI.
//!
//! The commonly used types are re-exported at the crate root.

pub mod classify;
pub mod error;
pub mod field;
pub mod forms;
pub mod io;
pub mod kgmodules;
pub mod matrix;
pub mod oracle;

pub use classify::{canonicalize, count_classes, count_formula, representative};
pub use classify::{enumerate_classes, enumerate_classes_capped, DEFAULT_ENUM_CAP};
pub use classify::{quad_canonicalize, quad_exists, quad_representatives};
pub use classify::{ClassLabel, QuadLabel, Witness};
pub use error::{Error, Result};
pub use field::{artin_schreier_reps, coset_reduce, make_extension};
pub use field::{ExtensionData, FieldSpec, Poly, Scalar};
pub use forms::{BilinearForm, QuadraticForm};
pub use io::{parse_class_label, parse_field_arg, parse_form, parse_module_arg};
pub use io::{render_class_label, render_form, render_quad_label, FieldArg, FormFile, FormKind};
pub use kgmodules::{action, companion, end_basis, jordan_data};
pub use kgmodules::{Family, GroupAction, JordanData, ModuleSpec};
pub use matrix::Mat;
pub use oracle::{enumerate_invariant_symplectic, orbit_partition, quad_orbit_partition};
pub use oracle::{quad_exists_brute, unit_group, verify};
pub use oracle::{OrbitReport, OrbitSummary, UnitSet};
