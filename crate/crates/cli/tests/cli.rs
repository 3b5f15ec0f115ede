//! End-to-end tests of the `kleinforms` binary: argument handling, output
//! determinism, exit codes, and round-trips through the file format.

use std::path::PathBuf;
use std::process::{Command, Output};

use kleinforms::classify::{enumerate_classes, representative};
use kleinforms::io::{render_class_label, render_form, FormFile, FormKind};
use kleinforms::kgmodules::{end_basis, Family, ModuleSpec};
use kleinforms::matrix::Mat;
use kleinforms::{FieldSpec, Poly};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kleinforms"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn gf2() -> FieldSpec {
    FieldSpec::canonical(1)
}

/// Writes a form file into a fresh temp dir and returns its path.
fn write_form(dir: &tempfile::TempDir, name: &str, file: &FormFile) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, render_form(file)).expect("write fixture");
    path
}

#[test]
fn classes_lists_one_label_per_class() {
    let cases = [
        (vec!["classes", "--field", "2,1", "--module", "regular2"], 5),
        (vec!["classes", "--field", "2,1", "--module", "anbn,1"], 4),
        (vec!["classes", "--field", "2,1", "--module", "trivial2"], 1),
        (vec!["classes", "--field", "2,1", "--module", "cnf,2,1,1,1"], 4),
    ];
    for (args, rows) in cases {
        let out = run(&args);
        assert!(out.status.success(), "{args:?}: {}", stderr(&out));
        let text = stdout(&out);
        assert_eq!(text.lines().count(), rows, "{args:?} printed:\n{text}");
        // Identical invocations are byte-identical.
        assert_eq!(out.stdout, run(&args).stdout);
    }
}

#[test]
fn count_prints_the_number_and_the_formula() {
    let out = run(&["count", "--field", "2,1", "--module", "regular"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("count 4\n"), "got:\n{text}");
    assert!(text.lines().nth(1).unwrap().starts_with("formula "));

    let out = run(&["count", "--field", "2,2", "--module", "regular"]);
    assert!(stdout(&out).starts_with("count 16\n"));

    let out = run(&["count", "--field", "2,1", "--module", "regular2", "--tsv"]);
    assert!(stdout(&out).starts_with("count\t5\t"));
}

#[test]
fn symbolic_count_prints_only_the_formula() {
    let out = run(&["count", "--field", "symbolic", "--module", "anbn,2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("formula "), "got:\n{text}");
    assert!(text.contains('q'), "symbolic formula mentions the field size");
}

/// Reads `label <x>` plus the following matrix block from canon output.
fn parse_canon_output(text: &str) -> (String, Mat) {
    let mut lines = text.lines();
    let label = lines
        .next()
        .and_then(|l| l.strip_prefix("label "))
        .expect("label line")
        .to_string();
    let header: Vec<&str> = lines.next().expect("matrix header").split(' ').collect();
    assert_eq!(header[0], "matrix");
    let rows: usize = header[1].parse().unwrap();
    let data: Vec<Vec<u64>> = (0..rows)
        .map(|_| {
            lines
                .next()
                .expect("matrix row")
                .split(' ')
                .map(|t| t.parse().unwrap())
                .collect()
        })
        .collect();
    (label, Mat::from_rows(gf2(), &data))
}

#[test]
fn canon_round_trips_every_representative_and_certifies_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let modules = [
        ModuleSpec::new(gf2(), Family::Regular).unwrap(),
        ModuleSpec::new(gf2(), Family::AnBn(1)).unwrap(),
        ModuleSpec::new(gf2(), Family::Cnf(2, Poly::t(gf2()))).unwrap(),
    ];
    for spec in &modules {
        for (i, label) in enumerate_classes(spec).unwrap().iter().enumerate() {
            let rep = representative(spec, label).unwrap();
            let path = write_form(
                &dir,
                &format!("rep{i}.form"),
                &FormFile {
                    spec: spec.clone(),
                    kind: FormKind::Symplectic,
                    mat: rep.gram.clone(),
                },
            );
            let out = run(&["canon", path.to_str().unwrap(), "--check"]);
            assert!(out.status.success(), "{}", stderr(&out));
            let text = stdout(&out);
            let (got, witness) = parse_canon_output(&text);
            assert_eq!(got, render_class_label(label));
            assert!(text.trim_end().ends_with("check PASS"));
            // Independent witness verification in-process.
            assert_eq!(rep.gram.congruence(&witness), rep.gram);
        }
    }
}

#[test]
fn canon_is_stable_under_a_packaged_isometry() {
    // A module with orbits of size > 1, so some unit actually moves a
    // representative.
    let spec = ModuleSpec::new(gf2(), Family::Cnf(2, Poly::t(gf2()))).unwrap();
    let basis = end_basis(&spec);
    let units: Vec<Mat> = (1u64..1 << basis.len())
        .map(|code| {
            let mut m = Mat::zero(gf2(), spec.dim(), spec.dim());
            for (i, b) in basis.iter().enumerate() {
                if code >> i & 1 == 1 {
                    m = m.add(b);
                }
            }
            m
        })
        .filter(Mat::is_invertible)
        .collect();
    let (label, perturbed) = enumerate_classes(&spec)
        .unwrap()
        .into_iter()
        .find_map(|label| {
            let rep = representative(&spec, &label).unwrap();
            units
                .iter()
                .map(|u| rep.gram.congruence(u))
                .find(|g| *g != rep.gram)
                .map(|g| (label, g))
        })
        .expect("some representative is moved by some unit");

    let dir = tempfile::tempdir().unwrap();
    let path = write_form(
        &dir,
        "perturbed.form",
        &FormFile {
            spec: spec.clone(),
            kind: FormKind::Symplectic,
            mat: perturbed,
        },
    );
    let out = run(&["canon", path.to_str().unwrap(), "--check"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (got, _) = parse_canon_output(&stdout(&out));
    assert_eq!(got, render_class_label(&label));
}

#[test]
fn canon_exit_codes_separate_parse_and_precondition_failures() {
    let dir = tempfile::tempdir().unwrap();

    let garbage = dir.path().join("garbage.form");
    std::fs::write(&garbage, "not a form file\n").unwrap();
    let out = run(&["canon", garbage.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));

    let missing = dir.path().join("missing.form");
    let out = run(&["canon", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    // Well-formed file, but the identity matrix is not alternating.
    let spec = ModuleSpec::new(gf2(), Family::TrivialSq).unwrap();
    let bad = write_form(
        &dir,
        "notsymplectic.form",
        &FormFile {
            spec: spec.clone(),
            kind: FormKind::Symplectic,
            mat: Mat::identity(gf2(), 2),
        },
    );
    let out = run(&["canon", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(
        err.contains("not symplectic") || err.contains("not invariant"),
        "the message names the failed predicate, got: {err}"
    );

    // Hollow but singular Grams are rejected as non-symplectic too.
    let singular = write_form(
        &dir,
        "singular.form",
        &FormFile {
            spec,
            kind: FormKind::Quadratic,
            mat: Mat::zero(gf2(), 2, 2),
        },
    );
    let out = run(&["canon", singular.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "wrong kind is an argument error");
}

#[test]
fn quad_reports_representatives_or_none() {
    let out = run(&["quad", "--label", "trivial", "--field", "2,1", "--module", "trivial2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("EXISTS 2\n"), "got:\n{text}");
    assert_eq!(text.matches("quad arf,").count(), 2);

    let out = run(&["quad", "--label", "even,-", "--field", "2,1", "--module", "cnf,1,1,1,1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), "NONE\n");
}

#[test]
fn quad_classifies_a_quadratic_form_file() {
    let spec = ModuleSpec::new(gf2(), Family::TrivialSq).unwrap();
    let (reps, labels) =
        kleinforms::quad_representatives(&spec, &kleinforms::ClassLabel::Trivial).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for (q, ql) in reps.iter().zip(&labels) {
        let path = write_form(
            &dir,
            "quad.form",
            &FormFile {
                spec: spec.clone(),
                kind: FormKind::Quadratic,
                mat: q.rep().clone(),
            },
        );
        let out = run(&["quad", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", stderr(&out));
        let text = stdout(&out);
        let first = text.lines().next().unwrap();
        assert_eq!(first, format!("quad {}", kleinforms::render_quad_label(ql)));
    }
}

#[test]
fn quad_on_a_symplectic_file_reports_the_class_refinements() {
    let spec = ModuleSpec::new(gf2(), Family::Regular).unwrap();
    let label = enumerate_classes(&spec).unwrap().remove(0);
    let rep = representative(&spec, &label).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = write_form(
        &dir,
        "sym.form",
        &FormFile {
            spec,
            kind: FormKind::Symplectic,
            mat: rep.gram.clone(),
        },
    );
    let out = run(&["quad", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.starts_with(&format!("label {}\n", render_class_label(&label))),
        "got:\n{text}"
    );
    assert!(text.contains("EXISTS 1"), "got:\n{text}");
}

#[test]
fn verify_single_module_passes_with_exit_zero() {
    let out = run(&["verify", "--field", "2,1", "--module", "regular", "--tsv"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("regular\tPASS\t4\t4"), "got:\n{text}");
}

#[test]
fn argument_errors_exit_one() {
    for args in [
        vec!["classes", "--field", "3,1", "--module", "regular"],
        vec!["classes", "--field", "2,1", "--module", "nosuch"],
        vec!["classes", "--field", "symbolic", "--module", "regular"],
        vec!["count", "--field", "2,1", "--module", "cnf,1,1,0,1"], // T²+1 = (T+1)² is reducible
        vec!["quad", "--label", "trivial"],
        vec!["nosuchcommand"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", stderr(&out));
    }
}
