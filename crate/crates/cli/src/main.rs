//! `kleinforms` — classify invariant symplectic and quadratic forms on
//! modules for the Klein four-group over GF(2^e).
//!
//! Subcommands: `classes`, `count`, `canon`, `quad`, `verify`.  All output
//! is deterministic: identical invocations produce identical bytes.
//!
//! Exit codes: 0 success, 1 argument or parse error, 2 precondition
//! failure (the input is well-formed but not in the operation's domain),
//! 3 verification failure.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kleinforms::classify::{
    canonicalize, count_classes, count_formula, enumerate_classes, quad_canonicalize, quad_exists,
    quad_representatives, representative,
};
use kleinforms::forms::{ensure_invariant_symplectic, BilinearForm, QuadraticForm};
use kleinforms::io::{
    parse_class_label, parse_field_arg, parse_form, parse_module_arg, parse_module_arg_symbolic,
    render_class_label, render_matrix_block, render_quad_label, FieldArg, FormKind,
};
use kleinforms::kgmodules::{action, Family, ModuleSpec};
use kleinforms::oracle::verify;
use kleinforms::{Error, FieldSpec, Poly};

#[derive(Parser)]
#[command(
    name = "kleinforms",
    version,
    about = "Isometry classification of invariant symplectic and quadratic forms \
             on Klein four-group modules in characteristic two"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the isometry class labels of a module, one per line.
    Classes {
        /// Field as `2,<e>[,<modulus>]`.
        #[arg(long)]
        field: String,
        /// Module as `<family>[,<n>[,<coeffs…>]]`.
        #[arg(long)]
        module: String,
        /// Tab-separated machine output.
        #[arg(long)]
        tsv: bool,
    },
    /// Print the number of isometry classes and its closed formula.
    Count {
        /// Field as `2,<e>[,<modulus>]`, or `symbolic` for the formula only.
        #[arg(long)]
        field: String,
        /// Module as `<family>[,<n>[,<coeffs…>]]`.
        #[arg(long)]
        module: String,
        /// Tab-separated machine output.
        #[arg(long)]
        tsv: bool,
    },
    /// Canonicalize the symplectic form in a file: print its label and an
    /// isometry witness onto the class representative.
    Canon {
        /// Form file (`field`/`module`/`kind symplectic`/`matrix` format).
        file: PathBuf,
        /// Re-verify the witness before printing and report the check.
        #[arg(long)]
        check: bool,
        /// Tab-separated machine output.
        #[arg(long)]
        tsv: bool,
    },
    /// Quadratic refinements: classify a quadratic form file, or report
    /// existence and representatives for a class label.
    Quad {
        /// Form file; `kind quadratic` classifies the form, `kind
        /// symplectic` canonicalizes it and reports its refinements.
        file: Option<PathBuf>,
        /// Class label (needs --field and --module instead of a file).
        #[arg(long)]
        label: Option<String>,
        /// Field as `2,<e>[,<modulus>]`.
        #[arg(long)]
        field: Option<String>,
        /// Module as `<family>[,<n>[,<coeffs…>]]`.
        #[arg(long)]
        module: Option<String>,
        /// Tab-separated machine output.
        #[arg(long)]
        tsv: bool,
    },
    /// Run the independent verification pipeline and print a PASS/FAIL
    /// table; exits non-zero unless every module passes.
    Verify {
        /// Field as `2,<e>[,<modulus>]` (default `2,1`).
        #[arg(long)]
        field: Option<String>,
        /// Verify a single module instead of the standard suite.
        #[arg(long)]
        module: Option<String>,
        /// Tab-separated machine output.
        #[arg(long)]
        tsv: bool,
    },
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            // The input never named a valid field/module/file.
            Error::Parse(_) | Error::BadModulus { .. } | Error::NotMonic | Error::Reducible => 1,
            // Well-formed input outside the operation's domain.
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = std::result::Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; everything else is
            // an argument error (exit 1).
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.cmd) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Cmd) -> CmdResult {
    match cmd {
        Cmd::Classes { field, module, tsv } => cmd_classes(&field, &module, tsv),
        Cmd::Count { field, module, tsv } => cmd_count(&field, &module, tsv),
        Cmd::Canon { file, check, tsv } => cmd_canon(&file, check, tsv),
        Cmd::Quad {
            file,
            label,
            field,
            module,
            tsv,
        } => cmd_quad(file.as_deref(), label.as_deref(), field.as_deref(), module.as_deref(), tsv),
        Cmd::Verify { field, module, tsv } => cmd_verify(field.as_deref(), module.as_deref(), tsv),
    }
}

/// Parses a concrete `--field`/`--module` pair into a module.
fn concrete_spec(field: &str, module: &str) -> std::result::Result<ModuleSpec, Failure> {
    let FieldArg::Concrete(k) = parse_field_arg(field)? else {
        return Err(Failure::new(1, "this command needs a concrete field, not `symbolic`"));
    };
    let family = parse_module_arg(k, module)?;
    Ok(ModuleSpec::new(k, family)?)
}

fn cmd_classes(field: &str, module: &str, tsv: bool) -> CmdResult {
    let spec = concrete_spec(field, module)?;
    let labels = enumerate_classes(&spec)?;
    let mut out = String::new();
    for (i, label) in labels.iter().enumerate() {
        if tsv {
            let _ = writeln!(out, "{i}\t{}", render_class_label(label));
        } else {
            let _ = writeln!(out, "{}", render_class_label(label));
        }
    }
    Ok(out)
}

fn cmd_count(field: &str, module: &str, tsv: bool) -> CmdResult {
    let mut out = String::new();
    match parse_field_arg(field)? {
        FieldArg::Symbolic => {
            let family = parse_module_arg_symbolic(module)?;
            if tsv {
                let _ = writeln!(out, "formula\t{}", count_formula(&family));
            } else {
                let _ = writeln!(out, "formula {}", count_formula(&family));
            }
        }
        FieldArg::Concrete(k) => {
            let family = parse_module_arg(k, module)?;
            let spec = ModuleSpec::new(k, family)?;
            let count = count_classes(&spec);
            let formula = count_formula(&spec.family);
            // The closed count must agree with the explicit enumeration
            // whenever the latter is feasible.
            match enumerate_classes(&spec) {
                Ok(labels) => {
                    if labels.len() as u128 != count {
                        return Err(Failure::new(
                            3,
                            format!(
                                "count mismatch: formula gives {count}, enumeration gives {}",
                                labels.len()
                            ),
                        ));
                    }
                }
                Err(Error::Budget(_)) => {}
                Err(e) => return Err(e.into()),
            }
            if tsv {
                let _ = writeln!(out, "count\t{count}\t{formula}");
            } else {
                let _ = writeln!(out, "count {count}");
                let _ = writeln!(out, "formula {formula}");
            }
        }
    }
    Ok(out)
}

fn read_form_file(path: &std::path::Path) -> std::result::Result<kleinforms::FormFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(1, format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_form(&text)?)
}

/// Checks a canonicalization witness from scratch: an invertible
/// endomorphism carrying the form onto its class representative.
fn witness_is_sound(form: &BilinearForm, label_rep: &BilinearForm, m: &kleinforms::Mat) -> bool {
    let act = action(&form.spec);
    m.is_invertible()
        && m.mul(&act.g1) == act.g1.mul(m)
        && m.mul(&act.g2) == act.g2.mul(m)
        && form.gram.congruence(m) == label_rep.gram
}

fn cmd_canon(path: &std::path::Path, check: bool, tsv: bool) -> CmdResult {
    let file = read_form_file(path)?;
    if file.kind != FormKind::Symplectic {
        return Err(Failure::new(1, "canon expects a file with `kind symplectic`"));
    }
    let form = BilinearForm::new(file.spec.clone(), file.mat)?;
    ensure_invariant_symplectic(&form)?;
    let (label, witness) = canonicalize(&form)?;
    let mut out = String::new();
    if tsv {
        let _ = writeln!(out, "label\t{}", render_class_label(&label));
    } else {
        let _ = writeln!(out, "label {}", render_class_label(&label));
    }
    out.push_str(&render_matrix_block(&witness.m));
    if check {
        let rep = representative(&file.spec, &label)?;
        if !witness_is_sound(&form, &rep, &witness.m) {
            return Err(Failure::new(3, "witness re-verification failed"));
        }
        let _ = writeln!(out, "check PASS");
    }
    Ok(out)
}

/// Existence verdict and representatives for one class label.
fn quad_report(spec: &ModuleSpec, label: &kleinforms::ClassLabel, tsv: bool) -> CmdResult {
    let mut out = String::new();
    if !quad_exists(spec, label)? {
        let _ = writeln!(out, "NONE");
        return Ok(out);
    }
    let (reps, labels) = quad_representatives(spec, label)?;
    if tsv {
        let _ = writeln!(out, "exists\t{}", reps.len());
    } else {
        let _ = writeln!(out, "EXISTS {}", reps.len());
    }
    for (rep, ql) in reps.iter().zip(&labels) {
        if tsv {
            let _ = writeln!(out, "quad\t{}", render_quad_label(ql));
        } else {
            let _ = writeln!(out, "quad {}", render_quad_label(ql));
        }
        out.push_str(&render_matrix_block(rep.rep()));
    }
    Ok(out)
}

fn cmd_quad(
    file: Option<&std::path::Path>,
    label: Option<&str>,
    field: Option<&str>,
    module: Option<&str>,
    tsv: bool,
) -> CmdResult {
    match (file, label) {
        (Some(_), Some(_)) => Err(Failure::new(1, "give either a form file or --label, not both")),
        (None, None) => Err(Failure::new(1, "give a form file or --label with --field/--module")),
        (None, Some(l)) => {
            let (Some(f), Some(m)) = (field, module) else {
                return Err(Failure::new(1, "--label needs --field and --module"));
            };
            let spec = concrete_spec(f, m)?;
            let label = parse_class_label(l)?;
            quad_report(&spec, &label, tsv)
        }
        (Some(path), None) => {
            let file = read_form_file(path)?;
            match file.kind {
                FormKind::Quadratic => {
                    let q = QuadraticForm::new(file.spec.clone(), &file.mat)?;
                    let (ql, witness) = quad_canonicalize(&q)?;
                    let mut out = String::new();
                    if tsv {
                        let _ = writeln!(out, "quad\t{}", render_quad_label(&ql));
                    } else {
                        let _ = writeln!(out, "quad {}", render_quad_label(&ql));
                    }
                    out.push_str(&render_matrix_block(&witness.m));
                    Ok(out)
                }
                FormKind::Symplectic => {
                    let form = BilinearForm::new(file.spec.clone(), file.mat)?;
                    ensure_invariant_symplectic(&form)?;
                    let (label, _) = canonicalize(&form)?;
                    let mut out = String::new();
                    if tsv {
                        let _ = writeln!(out, "label\t{}", render_class_label(&label));
                    } else {
                        let _ = writeln!(out, "label {}", render_class_label(&label));
                    }
                    out.push_str(&quad_report(&file.spec, &label, tsv)?);
                    Ok(out)
                }
            }
        }
    }
}

/// The standard verification suite over one base field: every family at
/// the sizes the pipeline can sweep within its budgets.
fn standard_suite(k: FieldSpec) -> Vec<ModuleSpec> {
    let t = Poly::t(k);
    let t2t1 = Poly::new(k, vec![1, 1, 1]);
    let mut families = vec![
        Family::TrivialSq,
        Family::Regular,
        Family::RegularSq,
        Family::AnBn(1),
        Family::AnBn(2),
        Family::Cnf(1, t.clone()),
        Family::Cnf(2, t.clone()),
        Family::CnfSq(1, t.clone()),
        Family::CnfSq(2, t.clone()),
        Family::CnfSq(3, t),
        Family::CnInf(2),
        Family::CnInfSq(2),
    ];
    if k.order() == 2 {
        // T²+T+1 is only irreducible over fields without cube roots of
        // unity; the suite includes it where it exists.
        families.insert(7, Family::Cnf(2, t2t1));
    }
    families
        .into_iter()
        .filter_map(|f| ModuleSpec::new(k, f).ok())
        .collect()
}

fn cmd_verify(field: Option<&str>, module: Option<&str>, tsv: bool) -> CmdResult {
    let FieldArg::Concrete(k) = parse_field_arg(field.unwrap_or("2,1"))? else {
        return Err(Failure::new(1, "verify needs a concrete field, not `symbolic`"));
    };
    let suite = match module {
        Some(m) => {
            let family = parse_module_arg(k, m)?;
            vec![ModuleSpec::new(k, family)?]
        }
        None => standard_suite(k),
    };
    let mut out = String::new();
    let mut all_pass = true;
    for spec in &suite {
        let module_name = kleinforms::io::render_module_arg(&spec.family);
        let report = verify(spec)?;
        let verdict = if report.passed() { "PASS" } else { "FAIL" };
        all_pass &= report.passed();
        if tsv {
            let _ = writeln!(
                out,
                "{module_name}\t{verdict}\t{}\t{}",
                report.total_forms,
                report.orbit_count()
            );
            for line in report.to_tsv().lines() {
                if line.starts_with("discrepancy") {
                    let _ = writeln!(out, "{module_name}\t{line}");
                }
            }
        } else {
            let _ = writeln!(
                out,
                "{verdict}  {module_name}: {} forms in {} orbits",
                report.total_forms,
                report.orbit_count()
            );
            for d in &report.discrepancies {
                let _ = writeln!(out, "      ! {d}");
            }
        }
    }
    if all_pass {
        Ok(out)
    } else {
        // Print the table before signalling failure.
        print!("{out}");
        Err(Failure::new(3, "verification failed"))
    }
}
