//! Plain-text interchange format for fields, modules, forms and labels.
//!
//! Everything here is deterministic and line-oriented so fixtures can be
//! written by hand and diffed byte for byte:
//!
//! * field arguments `2,<e>[,<modulus>]` (see [`parse_field_arg`]);
//! * module arguments `<family>[,<n>[,<coeffs…>]]` (see
//!   [`parse_module_arg`]);
//! * form files with a `field`/`module`/`kind`/`matrix` header (see
//!   [`parse_form`] and [`FormFile`]);
//! * class and quadratic labels in a shell-safe comma format (see
//!   [`render_class_label`] and friends).
//!
//! Rendering and parsing are exact inverses on every valid value.

use std::fmt::Write as _;

use crate::classify::{ClassLabel, QuadLabel};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Poly};
use crate::kgmodules::{Family, ModuleSpec};
use crate::matrix::Mat;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn int<T: std::str::FromStr>(token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_err(format!("{what} must be an integer, got `{token}`")))
}

// ---------------------------------------------------------------------------
// Field arguments
// ---------------------------------------------------------------------------

/// A parsed `--field` argument: a concrete field or the symbolic marker
/// used for formula-only output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldArg {
    /// A concrete finite field.
    Concrete(FieldSpec),
    /// `symbolic`: render counting formulas instead of numbers.
    Symbolic,
}

/// Parses `2,<e>[,<modulus>]` or the word `symbolic`.
///
/// The characteristic token must be `2`; the optional third component is
/// the bit-encoded modulus polynomial (e.g. `7` for `T²+T+1`), defaulting
/// to the canonical modulus of the degree.
///
/// # Errors
///
/// [`Error::Parse`] on malformed syntax; [`Error::BadModulus`] when the
/// explicit modulus is not irreducible of the right degree.
pub fn parse_field_arg(arg: &str) -> Result<FieldArg> {
    if arg == "symbolic" {
        return Ok(FieldArg::Symbolic);
    }
    let parts: Vec<&str> = arg.split(',').collect();
    if parts.len() < 2 || parts.len() > 3 {
        return Err(parse_err(format!(
            "field argument must be `2,<e>[,<modulus>]` or `symbolic`, got `{arg}`"
        )));
    }
    if parts[0] != "2" {
        return Err(parse_err(format!(
            "only characteristic 2 is supported, got `{}`",
            parts[0]
        )));
    }
    let e: u32 = int(parts[1], "the extension degree")?;
    if !(1..=32).contains(&e) {
        return Err(parse_err(format!("extension degree {e} out of range 1..=32")));
    }
    let field = match parts.get(2) {
        Some(m) => FieldSpec::new(e, int(m, "the modulus")?)?,
        None => FieldSpec::canonical(e),
    };
    Ok(FieldArg::Concrete(field))
}

/// Renders a field in the argument syntax, always with the explicit
/// modulus so the output re-parses to the identical field.
#[must_use]
pub fn render_field_arg(field: FieldSpec) -> String {
    format!("2,{},{}", field.e, field.modulus)
}

// ---------------------------------------------------------------------------
// Module arguments
// ---------------------------------------------------------------------------

/// Parses `<family>[,<n>[,<coeffs…>]]` into a family over the given field.
///
/// Family tokens: `trivial2`, `regular`, `regular2`, `anbn,<n>`,
/// `cninf,<n>`, `cninfsq,<n>`, `cnf,<n>,<c₀>,…,<c_m>` and
/// `cnfsq,<n>,<c₀>,…,<c_m>` with polynomial coefficients listed from the
/// constant term up.
///
/// # Errors
///
/// [`Error::Parse`] on malformed syntax or coefficients outside the field.
pub fn parse_module_arg(field: FieldSpec, arg: &str) -> Result<Family> {
    let parts: Vec<&str> = arg.split(',').collect();
    let name = parts[0];
    let fixed = |len: usize| -> Result<()> {
        if parts.len() == len {
            Ok(())
        } else {
            Err(parse_err(format!("module `{name}` takes {} arguments", len - 1)))
        }
    };
    let n_arg = || -> Result<usize> {
        let n: usize = int(parts[1], "the chain length n")?;
        if n == 0 {
            return Err(parse_err("the chain length n must be positive"));
        }
        Ok(n)
    };
    match name {
        "trivial2" => fixed(1).map(|()| Family::TrivialSq),
        "regular" => fixed(1).map(|()| Family::Regular),
        "regular2" => fixed(1).map(|()| Family::RegularSq),
        "anbn" => {
            fixed(2)?;
            Ok(Family::AnBn(n_arg()?))
        }
        "cninf" => {
            fixed(2)?;
            Ok(Family::CnInf(n_arg()?))
        }
        "cninfsq" => {
            fixed(2)?;
            Ok(Family::CnInfSq(n_arg()?))
        }
        "cnf" | "cnfsq" => {
            if parts.len() < 3 {
                return Err(parse_err(format!(
                    "module `{name}` needs a chain length and modulus coefficients"
                )));
            }
            let n = n_arg()?;
            let mut coeffs = Vec::new();
            for c in &parts[2..] {
                let v: u64 = int(c, "a modulus coefficient")?;
                if !field.contains(v) {
                    return Err(parse_err(format!(
                        "coefficient {v} is outside the field of order {}",
                        field.order()
                    )));
                }
                coeffs.push(v);
            }
            let f = Poly::new(field, coeffs);
            if name == "cnf" {
                Ok(Family::Cnf(n, f))
            } else {
                Ok(Family::CnfSq(n, f))
            }
        }
        other => Err(parse_err(format!("unknown module family `{other}`"))),
    }
}

/// Parses a module argument without a concrete field, for symbolic counts:
/// coefficients are read over the smallest field containing them all.
///
/// # Errors
///
/// [`Error::Parse`] on malformed syntax.
pub fn parse_module_arg_symbolic(arg: &str) -> Result<Family> {
    let mut e = 1u32;
    for token in arg.split(',').skip(2) {
        if let Ok(v) = token.parse::<u64>() {
            while e < 32 && !FieldSpec::canonical(e).contains(v) {
                e += 1;
            }
        }
    }
    parse_module_arg(FieldSpec::canonical(e), arg)
}

/// Renders a family in the argument syntax.  Together with
/// [`render_field_arg`] this re-parses to the identical module.
#[must_use]
pub fn render_module_arg(family: &Family) -> String {
    let with_poly = |name: &str, n: usize, f: &Poly| {
        let mut s = format!("{name},{n}");
        for c in &f.coeffs {
            let _ = write!(s, ",{c}");
        }
        s
    };
    match family {
        Family::TrivialSq => "trivial2".into(),
        Family::Regular => "regular".into(),
        Family::RegularSq => "regular2".into(),
        Family::AnBn(n) => format!("anbn,{n}"),
        Family::CnInf(n) => format!("cninf,{n}"),
        Family::CnInfSq(n) => format!("cninfsq,{n}"),
        Family::Cnf(n, f) => with_poly("cnf", *n, f),
        Family::CnfSq(n, f) => with_poly("cnfsq", *n, f),
    }
}

// ---------------------------------------------------------------------------
// Form files
// ---------------------------------------------------------------------------

/// Whether a form file carries a bilinear Gram matrix or the matrix of a
/// quadratic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    /// A Gram matrix, expected to be symplectic and invariant.
    Symplectic,
    /// A quadratic-form matrix (any matrix; forms are matrices modulo
    /// symmetric hollow ones).
    Quadratic,
}

/// One parsed form file: the module, the declared kind, and the matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormFile {
    /// The module the form lives on.
    pub spec: ModuleSpec,
    /// Declared kind of the matrix.
    pub kind: FormKind,
    /// The matrix itself, `dim × dim` over the module's field.
    pub mat: Mat,
}

/// Parses the line-oriented form file format:
///
/// ```text
/// field 2 <e> <modulus>
/// module <family> <n> [<coeffs…>]
/// kind symplectic|quadratic
/// matrix <r> <c>
/// <r rows of c entries>
/// ```
///
/// Blank lines and lines starting with `#` are skipped.  The family token
/// and `n` follow the argument syntax; families without a chain length
/// write `0`.  The matrix must be square of the module's dimension with
/// entries inside the field.
///
/// # Errors
///
/// [`Error::Parse`] for any syntactic or shape defect; module validation
/// errors (reducible modulus, …) are propagated.
pub fn parse_form(text: &str) -> Result<FormFile> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let mut next = |what: &str| -> Result<Vec<&str>> {
        lines
            .next()
            .map(|l| l.split_whitespace().collect())
            .ok_or_else(|| parse_err(format!("missing {what} line")))
    };

    let field_line = next("`field`")?;
    if field_line.len() != 4 || field_line[0] != "field" || field_line[1] != "2" {
        return Err(parse_err("the first line must be `field 2 <e> <modulus>`"));
    }
    let e: u32 = int(field_line[2], "the extension degree")?;
    let modulus: u64 = int(field_line[3], "the field modulus")?;
    let field = FieldSpec::new(e, modulus)?;

    let module_line = next("`module`")?;
    if module_line.len() < 3 || module_line[0] != "module" {
        return Err(parse_err("the second line must be `module <family> <n> [<coeffs>]`"));
    }
    let family = match module_line[1] {
        "trivial2" | "regular" | "regular2" => {
            if module_line.len() != 3 || module_line[2] != "0" {
                return Err(parse_err(format!(
                    "module `{}` takes no parameters; write `module {} 0`",
                    module_line[1], module_line[1]
                )));
            }
            parse_module_arg(field, module_line[1])?
        }
        name => {
            let arg = format!("{},{}", name, module_line[2..].join(","));
            parse_module_arg(field, &arg)?
        }
    };
    let spec = ModuleSpec::new(field, family)?;

    let kind_line = next("`kind`")?;
    let kind = match kind_line.as_slice() {
        ["kind", "symplectic"] => FormKind::Symplectic,
        ["kind", "quadratic"] => FormKind::Quadratic,
        _ => return Err(parse_err("the third line must be `kind symplectic` or `kind quadratic`")),
    };

    let matrix_line = next("`matrix`")?;
    if matrix_line.len() != 3 || matrix_line[0] != "matrix" {
        return Err(parse_err("expected `matrix <rows> <cols>`"));
    }
    let rows: usize = int(matrix_line[1], "the row count")?;
    let cols: usize = int(matrix_line[2], "the column count")?;
    let d = spec.dim();
    if rows != d || cols != d {
        return Err(parse_err(format!(
            "the matrix must be {d}×{d} for this module, got {rows}×{cols}"
        )));
    }
    let mut data = Vec::with_capacity(rows);
    for r in 0..rows {
        let row = next(&format!("matrix row {}", r + 1))?;
        if row.len() != cols {
            return Err(parse_err(format!(
                "matrix row {} has {} entries, expected {cols}",
                r + 1,
                row.len()
            )));
        }
        let mut vals = Vec::with_capacity(cols);
        for t in row {
            let v: u64 = int(t, "a matrix entry")?;
            if !field.contains(v) {
                return Err(parse_err(format!(
                    "matrix entry {v} is outside the field of order {}",
                    field.order()
                )));
            }
            vals.push(v);
        }
        data.push(vals);
    }
    if lines.next().is_some() {
        return Err(parse_err("unexpected trailing content after the matrix"));
    }
    Ok(FormFile {
        spec,
        kind,
        mat: Mat::from_rows(field, &data),
    })
}

/// Renders the matrix block `matrix <r> <c>` plus one line per row.
#[must_use]
pub fn render_matrix_block(m: &Mat) -> String {
    let mut out = format!("matrix {} {}\n", m.rows, m.cols);
    for r in 0..m.rows {
        let row: Vec<String> = (0..m.cols).map(|c| m.at(r, c).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Renders a form file; the exact inverse of [`parse_form`].
#[must_use]
pub fn render_form(file: &FormFile) -> String {
    let spec = &file.spec;
    let (name, params): (&str, Vec<String>) = match &spec.family {
        Family::TrivialSq => ("trivial2", vec!["0".into()]),
        Family::Regular => ("regular", vec!["0".into()]),
        Family::RegularSq => ("regular2", vec!["0".into()]),
        Family::AnBn(n) => ("anbn", vec![n.to_string()]),
        Family::CnInf(n) => ("cninf", vec![n.to_string()]),
        Family::CnInfSq(n) => ("cninfsq", vec![n.to_string()]),
        Family::Cnf(n, f) => (
            "cnf",
            std::iter::once(n.to_string())
                .chain(f.coeffs.iter().map(u64::to_string))
                .collect(),
        ),
        Family::CnfSq(n, f) => (
            "cnfsq",
            std::iter::once(n.to_string())
                .chain(f.coeffs.iter().map(u64::to_string))
                .collect(),
        ),
    };
    let kind = match file.kind {
        FormKind::Symplectic => "symplectic",
        FormKind::Quadratic => "quadratic",
    };
    format!(
        "field 2 {} {}\nmodule {} {}\nkind {}\n{}",
        spec.field.e,
        spec.field.modulus,
        name,
        params.join(" "),
        kind,
        render_matrix_block(&file.mat)
    )
}

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

fn render_list(v: &[u64]) -> String {
    if v.is_empty() {
        "-".into()
    } else {
        v.iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(":")
    }
}

fn parse_list(token: &str) -> Result<Vec<u64>> {
    if token == "-" {
        return Ok(Vec::new());
    }
    token
        .split(':')
        .map(|t| int(t, "a label coefficient"))
        .collect()
}

/// Renders a class label in the shell-safe comma syntax: `trivial`,
/// `group,<b>,<c>`, `paired`, `alpha,<λ>`, `mu,<μ>`, `omega,<coeffs>`,
/// `even,<coeffs>`, `kappa,<r>,<s>,<φ>,<ψ>`; coefficient lists are joined
/// with `:` and the empty list is `-`.
#[must_use]
pub fn render_class_label(label: &ClassLabel) -> String {
    match label {
        ClassLabel::Trivial => "trivial".into(),
        ClassLabel::Group { b, c } => format!("group,{b},{c}"),
        ClassLabel::Paired => "paired".into(),
        ClassLabel::Alpha { lambda } => format!("alpha,{lambda}"),
        ClassLabel::Mu { mu } => format!("mu,{mu}"),
        ClassLabel::Omega { coeffs } => format!("omega,{}", render_list(coeffs)),
        ClassLabel::EvenCoeffs { coeffs } => format!("even,{}", render_list(coeffs)),
        ClassLabel::Kappa { r, s, phi, psi } => {
            format!("kappa,{r},{s},{},{}", render_list(phi), render_list(psi))
        }
    }
}

/// Parses the syntax of [`render_class_label`].
///
/// # Errors
///
/// [`Error::Parse`] on malformed syntax.  Whether the label names an
/// actual class of a given module is checked downstream by
/// [`representative`](crate::classify::representative).
pub fn parse_class_label(text: &str) -> Result<ClassLabel> {
    let parts: Vec<&str> = text.split(',').collect();
    let arity = |n: usize| -> Result<()> {
        if parts.len() == 1 + n {
            Ok(())
        } else {
            Err(parse_err(format!("label `{}` takes {n} parameters", parts[0])))
        }
    };
    match parts[0] {
        "trivial" => arity(0).map(|()| ClassLabel::Trivial),
        "paired" => arity(0).map(|()| ClassLabel::Paired),
        "group" => {
            arity(2)?;
            Ok(ClassLabel::Group {
                b: int(parts[1], "b")?,
                c: int(parts[2], "c")?,
            })
        }
        "alpha" => {
            arity(1)?;
            Ok(ClassLabel::Alpha {
                lambda: int(parts[1], "lambda")?,
            })
        }
        "mu" => {
            arity(1)?;
            Ok(ClassLabel::Mu {
                mu: int(parts[1], "mu")?,
            })
        }
        "omega" => {
            arity(1)?;
            Ok(ClassLabel::Omega {
                coeffs: parse_list(parts[1])?,
            })
        }
        "even" => {
            arity(1)?;
            Ok(ClassLabel::EvenCoeffs {
                coeffs: parse_list(parts[1])?,
            })
        }
        "kappa" => {
            arity(4)?;
            Ok(ClassLabel::Kappa {
                r: int(parts[1], "r")?,
                s: int(parts[2], "s")?,
                phi: parse_list(parts[3])?,
                psi: parse_list(parts[4])?,
            })
        }
        other => Err(parse_err(format!("unknown label kind `{other}`"))),
    }
}

/// Renders a quadratic label: `unique`, `arf,<x>` or `none`.
#[must_use]
pub fn render_quad_label(label: &QuadLabel) -> String {
    match label {
        QuadLabel::Unique => "unique".into(),
        QuadLabel::ArfRep(x) => format!("arf,{x}"),
        QuadLabel::None => "none".into(),
    }
}

/// Parses the syntax of [`render_quad_label`].
///
/// # Errors
///
/// [`Error::Parse`] on malformed syntax.
pub fn parse_quad_label(text: &str) -> Result<QuadLabel> {
    let parts: Vec<&str> = text.split(',').collect();
    match parts.as_slice() {
        ["unique"] => Ok(QuadLabel::Unique),
        ["none"] => Ok(QuadLabel::None),
        ["arf", x] => Ok(QuadLabel::ArfRep(int(x, "the coset representative")?)),
        _ => Err(parse_err(format!("unknown quadratic label `{text}`"))),
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{enumerate_classes, representative};

    fn gf2() -> FieldSpec {
        FieldSpec::canonical(1)
    }

    #[test]
    fn field_arguments_round_trip() {
        for arg in ["2,1", "2,2", "2,3,11"] {
            let FieldArg::Concrete(f) = parse_field_arg(arg).unwrap() else {
                panic!("expected a concrete field");
            };
            let rendered = render_field_arg(f);
            assert_eq!(parse_field_arg(&rendered).unwrap(), FieldArg::Concrete(f));
        }
        assert_eq!(parse_field_arg("symbolic").unwrap(), FieldArg::Symbolic);
        for bad in ["3,1", "2", "2,0", "2,33", "2,2,5", "2,x", ""] {
            assert!(parse_field_arg(bad).is_err(), "accepted `{bad}`");
        }
    }

    #[test]
    fn module_arguments_round_trip() {
        let k = gf2();
        let families = [
            Family::TrivialSq,
            Family::Regular,
            Family::RegularSq,
            Family::AnBn(2),
            Family::Cnf(2, Poly::new(k, vec![1, 1, 1])),
            Family::CnfSq(1, Poly::t(k)),
            Family::CnInf(3),
            Family::CnInfSq(1),
        ];
        for fam in families {
            let arg = render_module_arg(&fam);
            assert_eq!(parse_module_arg(k, &arg).unwrap(), fam, "via `{arg}`");
        }
        for bad in ["nosuch", "anbn", "anbn,0", "anbn,x", "cnf,2", "regular,1", "cnf,1,9"] {
            assert!(parse_module_arg(k, bad).is_err(), "accepted `{bad}`");
        }
    }

    #[test]
    fn symbolic_module_parsing_widens_the_field_for_the_coefficients() {
        let fam = parse_module_arg_symbolic("cnf,1,2,1").unwrap();
        let Family::Cnf(1, f) = fam else {
            panic!("wrong family");
        };
        assert_eq!(f.coeffs, vec![2, 1]);
        assert!(f.field.order() >= 4);
    }

    #[test]
    fn form_files_round_trip_through_render_and_parse() {
        let spec = ModuleSpec::new(gf2(), Family::Regular).unwrap();
        let label = enumerate_classes(&spec).unwrap().remove(0);
        let rep = representative(&spec, &label).unwrap();
        let file = FormFile {
            spec: spec.clone(),
            kind: FormKind::Symplectic,
            mat: rep.gram.clone(),
        };
        let text = render_form(&file);
        assert_eq!(parse_form(&text).unwrap(), file);

        // Comments and blank lines are tolerated.
        let commented = format!("# fixture\n\n{text}");
        assert_eq!(parse_form(&commented).unwrap(), file);
    }

    #[test]
    fn malformed_form_files_are_rejected_with_parse_errors() {
        let good = render_form(&FormFile {
            spec: ModuleSpec::new(gf2(), Family::TrivialSq).unwrap(),
            kind: FormKind::Symplectic,
            mat: Mat::from_rows(gf2(), &[vec![0, 1], vec![1, 0]]),
        });
        let cases = [
            String::new(),
            good.replace("field 2", "field 3"),
            good.replace("kind symplectic", "kind what"),
            good.replace("matrix 2 2", "matrix 2 3"),
            good.replace("matrix 2 2", "matrix 3 3"),
            good.replace("0 1", "0 7"),
            format!("{good}stray\n"),
            good.replace("trivial2 0", "trivial2 1"),
        ];
        for bad in cases {
            assert!(
                matches!(parse_form(&bad), Err(Error::Parse(_))),
                "accepted:\n{bad}"
            );
        }
    }

    #[test]
    fn class_labels_round_trip() {
        let labels = [
            ClassLabel::Trivial,
            ClassLabel::Paired,
            ClassLabel::Group { b: 0, c: 1 },
            ClassLabel::Alpha { lambda: 2 },
            ClassLabel::Mu { mu: 3 },
            ClassLabel::Omega { coeffs: vec![] },
            ClassLabel::Omega { coeffs: vec![1, 0, 1] },
            ClassLabel::EvenCoeffs { coeffs: vec![0, 2] },
            ClassLabel::Kappa {
                r: 2,
                s: 1,
                phi: vec![1],
                psi: vec![],
            },
        ];
        for label in labels {
            let text = render_class_label(&label);
            assert_eq!(parse_class_label(&text).unwrap(), label, "via `{text}`");
        }
        for bad in ["", "nope", "group,1", "kappa,1,2,3", "omega,1:x"] {
            assert!(parse_class_label(bad).is_err(), "accepted `{bad}`");
        }
    }

    #[test]
    fn quad_labels_round_trip() {
        for label in [QuadLabel::Unique, QuadLabel::None, QuadLabel::ArfRep(1)] {
            let text = render_quad_label(&label);
            assert_eq!(parse_quad_label(&text).unwrap(), label, "via `{text}`");
        }
        assert!(parse_quad_label("arf").is_err());
    }
}
