use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn hecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("hecke-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, body: &str) -> String {
        let path = self.0.join(name);
        std::fs::File::create(&path).unwrap().write_all(body.as_bytes()).unwrap();
        path.to_string_lossy().into_owned()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

#[test]
fn decompose_bc() {
    let o = hecke(&["decompose", "--instance", "bc", "(1/2; 2)"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("key (0; 2)"), "{out}");
    assert!(out.contains("R 2\n") && out.contains("L 1\n"), "{out}");
}

#[test]
fn decompose_identity() {
    let out = stdout(&hecke(&["decompose", "--instance", "gl:2", "(0,0; 1,0,0,1)"]));
    assert!(out.contains("R 1\n") && out.contains("L 1\n"), "{out}");
}

#[test]
fn decompose_gauss_machine() {
    let o = hecke(&["decompose", "--instance", "gauss", "--format", "machine", "(1/4,1; 1)"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["instance"], "gauss");
    assert_eq!(v["R"], 4);
    assert_eq!(v["right"].as_array().unwrap().len(), 4);
}

#[test]
fn convolve_bc_generators() {
    let s = Scratch::new("conv");
    let f = s.file("f", "instance bc\n1 [(0; 2)]\n");
    let g = s.file("g", "instance bc\n1 [(0; 3)]\n");
    let o = hecke(&["convolve", &f, &g]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "instance bc\n1 [(0; 6)]\n");
}

#[test]
fn convolve_output_reparses() {
    let s = Scratch::new("reparse");
    let f = s.file("f", "instance bc\n2 [(1/2; 2)]\n-1/3 [(0; 3/5)]\n");
    let once = stdout(&hecke(&["convolve", &f, &f]));
    let g = s.file("g", &once);
    let id = s.file("id", "instance bc\n1 [(0; 1)]\n");
    assert_eq!(stdout(&hecke(&["convolve", &id, &g])), once);
}

#[test]
fn exit_codes() {
    let s = Scratch::new("codes");
    assert_eq!(hecke(&["decompose", "--instance", "bc", "(1/2; "]).status.code(), Some(2));
    let f = s.file("f", "instance bc\n1 [(0; 2)]\n");
    let g = s.file("g", "instance gl:2\n1 [(0,0; 1,0,0,1)]\n");
    assert_eq!(hecke(&["convolve", &f, &g]).status.code(), Some(3));
    // not in the corner of α_2
    let h = s.file("h", "instance bc\n1 [(1/3; 1)]\n");
    assert_eq!(hecke(&["cp", "alpha-inv", "2", &h]).status.code(), Some(4));
}

#[test]
fn cp_isometry_relation() {
    let s = Scratch::new("cp");
    let a = s.file("a", "instance bc\n1 mu*(1) e[(0; 1)] mu(2)\n");
    let star = s.file("star", &stdout(&hecke(&["cp", "star", &a])));
    let o = hecke(&["cp", "mul", &star, &a]);
    assert_eq!(stdout(&o), "instance bc\n1 mu*(1) e[(0; 1)] mu(1)\n");
    for (r, x, y) in [("h1", "2", "3"), ("h2", "(1/2; 1)", "(1/3; 1)"), ("h3", "2", "(1/2; 1)")] {
        assert!(hecke(&["cp", "verify", "--instance", "bc", r, x, y]).status.success(), "{r}");
    }
}

#[test]
fn embed_unembed_round_trip() {
    let s = Scratch::new("embed");
    let h = s.file("h", "instance gl:2\n1 [(1/2,0; 2,0,0,1)]\n3 [(0,1/3; 1,0,0,1)]\n");
    let a = s.file("a", &stdout(&hecke(&["cp", "unembed", &h])));
    let back = stdout(&hecke(&["cp", "embed", &a]));
    // canonical rendering of the input
    let id = s.file("id", "instance gl:2\n1 [(0,0; 1,0,0,1)]\n");
    assert_eq!(back, stdout(&hecke(&["convolve", &id, &h])));
    assert!(back.contains("1 [(0, 0; 2, 0, 0, 1)]"), "{back}");
}

#[test]
fn table_bc() {
    let out = stdout(&hecke(&["table", "--instance", "bc", "(0; 2)", "(0; 3)"]));
    assert!(out.contains("[(0; 2)] * [(0; 3)] = 1 [(0; 6)]"), "{out}");
    assert!(out.contains("[(0; 3)] * [(0; 2)] = 1 [(0; 6)]"), "{out}");
}

#[test]
fn selftest_single_suite_is_deterministic() {
    let args = ["selftest", "--suite", "r-multiplicative", "--seed", "7", "--format", "machine"];
    let (a, b) = (hecke(&args), hecke(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["suites"].as_array().unwrap().len(), 1);
    assert_eq!(hecke(&["selftest", "--suite", "no-such-suite"]).status.code(), Some(2));
}

#[test]
fn gauss_table_leaves_the_group_algebra() {
    let out = stdout(&hecke(&["table", "--instance", "gauss", "(1/2, 1; 1)"]));
    assert_eq!(out, "instance gauss\n[(1/2*i, 1; 1)] * [(1/2*i, 1; 1)] = 2 [(0, 1; 1)] + 2 [(1/2+1/2*i, 1; 1)]\n");
}
