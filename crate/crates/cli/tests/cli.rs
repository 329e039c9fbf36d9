use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use idemat_core::formats::{load_matrix, LoadedMatrix};
use idemat_core::matrix::ResMatrix;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn idemat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idemat")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn factors_the_square() {
    let o = idemat(&["lattice", "factor", "builtin:square"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "2 factors: chain2 × chain2; |Aut| = 2");
}

#[test]
fn counts_invertible_matrices() {
    let o = idemat(&["matrix", "count", "builtin:m3", "--n", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "72");
}

#[test]
fn checks_a_boolean_permutation() {
    let o = idemat(&["matrix", "check", data("perm3_bool.json").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("invertible\n"), "{out}");
    assert!(out.contains("sigma: ((0,0) (0,1) (0,2))"), "{out}");
}

#[test]
fn singular_matrices_exit_one() {
    for file in ["unitriangular_bool.json", "maxplus_shift.json"] {
        let path = data(file);
        let o = idemat(&["matrix", "check", path.to_str().unwrap()]);
        assert_eq!(code(&o), 1, "{file}");
        assert_eq!(stdout(&o).trim(), "not invertible");
        assert_eq!(code(&idemat(&["oracle", "check", "--compare", path.to_str().unwrap()])), 1);
    }
}

#[test]
fn input_errors_exit_two() {
    let o = idemat(&["lattice", "validate", data("not_a_lattice.json").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let o = idemat(&["semiring", "validate", data("xor.json").to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("additive idempotence"));
    assert_eq!(code(&idemat(&["lattice", "validate", "builtin:nope"])), 2);
    assert_eq!(code(&idemat(&["matrix", "frobnicate"])), 2);
    assert_eq!(code(&idemat(&[])), 2);
}

#[test]
fn json_output_parses() {
    let o = idemat(&["--json", "matrix", "check", data("square_swap.json").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["invertible"], true);
    assert_eq!(v["maps"].as_array().unwrap().len(), 4);
}

#[test]
fn generation_is_deterministic() {
    let args = ["gen", "random-invertible", "--lattice", "builtin:m3", "--n", "2", "--seed", "11"];
    let (a, b) = (idemat(&args), idemat(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

fn res(path: &Path) -> ResMatrix {
    match load_matrix(path).unwrap() {
        LoadedMatrix::Res(m) => m,
        LoadedMatrix::Semiring(_) => panic!("expected a res matrix"),
    }
}

#[test]
fn inverse_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for (lattice, n) in [("builtin:chain2", 3), ("builtin:square", 2), ("builtin:m3", 2), ("builtin:n5", 2)] {
        for seed in ["1", "2", "3"] {
            let m_path = dir.path().join("m.json");
            let inv_path = dir.path().join("inv.json");
            let n_arg = n.to_string();
            let gen = idemat(&[
                "gen",
                "random-invertible",
                "--lattice",
                lattice,
                "--n",
                &n_arg,
                "--seed",
                seed,
                "-o",
                m_path.to_str().unwrap(),
            ]);
            assert_eq!(code(&gen), 0);
            let inv = idemat(&["matrix", "invert", m_path.to_str().unwrap(), "-o", inv_path.to_str().unwrap()]);
            assert_eq!(code(&inv), 0);
            let (m, b) = (res(&m_path), res(&inv_path));
            let id = ResMatrix::identity(m.lattice(), n);
            assert_eq!(m.mat_mul(&b).unwrap(), id, "{lattice} seed {seed}");
            assert_eq!(b.mat_mul(&m).unwrap(), id, "{lattice} seed {seed}");
        }
    }
}

#[test]
fn relative_bases_survive_a_move() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("inv.json");
    let o = idemat(&["matrix", "invert", data("square_swap.json").to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let m = res(&data("square_swap.json"));
    let b = res(&out);
    assert_eq!(m.mat_mul(&b).unwrap(), ResMatrix::identity(&Arc::clone(m.lattice()), 2));
}

#[test]
fn semiring_inverse_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for file in ["perm3_bool.json", "maxplus_perm.json"] {
        let out = dir.path().join("inv.json");
        let o = idemat(&["matrix", "invert", data(file).to_str().unwrap(), "-o", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{file}");
        let (LoadedMatrix::Semiring(a), LoadedMatrix::Semiring(b)) =
            (load_matrix(&data(file)).unwrap(), load_matrix(&out).unwrap())
        else {
            panic!("expected semiring matrices");
        };
        assert!(a.mat_mul(&b).unwrap().is_identity(), "{file}");
        let oracle = idemat(&["oracle", "invert", "--compare", data(file).to_str().unwrap()]);
        assert_eq!(code(&oracle), 0, "{file}");
    }
}

#[test]
fn oracle_count_agrees_with_formula() {
    let o = idemat(&["--threads", "2", "oracle", "count", "builtin:square", "--n", "2", "--compare"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "24\nformula agrees\n");
}
