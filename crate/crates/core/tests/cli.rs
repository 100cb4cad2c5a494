use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use normsurf::abstract_problem::{decide_instance, reduce_sat, ClauseSet};
use normsurf::detect::{enumerate_connected_spanning_central, find_connected_spanning_central, DEFAULT_BUDGET};
use normsurf::gadgets::{build_t_g, node_gadget, CubicGraph};

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("normsurf-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn normsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normsurf")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value<'a>(summary: &'a str, key: &str) -> &'a str {
    summary
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {summary}"))
}

#[test]
fn node_gadget_has_32_surfaces() {
    let dir = workdir("gadget");
    let tri = dir.join("gadget.tri");
    let built = normsurf(&["build", "node-gadget", "--output", tri.to_str().unwrap()]);
    assert_eq!(built.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&tri).unwrap(), node_gadget().0.to_text());
    let all = normsurf(&["detect", "spanning", tri.to_str().unwrap(), "--enumerate-all", "--output", dir.join("all").to_str().unwrap()]);
    assert_eq!(all.status.code(), Some(0));
    let s = stdout(&all);
    assert_eq!(value(&s, "spanning"), "true");
    assert_eq!(value(&s, "count"), "32");
    let lib = enumerate_connected_spanning_central(&node_gadget().0, DEFAULT_BUDGET).unwrap().0;
    let texts: Vec<String> = lib.iter().map(|x| x.to_text()).collect();
    assert_eq!(fs::read_to_string(dir.join("all")).unwrap(), texts.join("\n"));
}

#[test]
fn petersen_has_no_surface() {
    let dir = workdir("petersen");
    let graph = dir.join("petersen.graph");
    fs::write(&graph, CubicGraph::petersen().to_text()).unwrap();
    let tri = dir.join("petersen.tri");
    let red = normsurf(&["reduce", "ham", graph.to_str().unwrap(), "--output", tri.to_str().unwrap()]);
    assert_eq!(red.status.code(), Some(0));
    assert_eq!(value(&stdout(&red), "tetrahedra"), "90");
    assert!(dir.join("petersen.tri.labels").exists());
    let det = normsurf(&["detect", "spanning", tri.to_str().unwrap()]);
    assert_eq!(det.status.code(), Some(1));
    assert_eq!(value(&stdout(&det), "spanning"), "false");
}

#[test]
fn verdicts_match_library() {
    let dir = workdir("verdicts");
    for (name, g) in [("k4", CubicGraph::k4()), ("prism", CubicGraph::prism())] {
        let tri = dir.join(format!("{name}.tri"));
        normsurf(&["reduce", "ham", name, "--output", tri.to_str().unwrap()]);
        let lib = find_connected_spanning_central(&build_t_g(&g).tri).unwrap();
        let vec = dir.join(format!("{name}.vec"));
        let det = normsurf(&["detect", "spanning", tri.to_str().unwrap(), "--output", vec.to_str().unwrap()]);
        assert_eq!(det.status.code(), Some(if lib.is_some() { 0 } else { 1 }));
        let x = lib.unwrap();
        assert_eq!(fs::read_to_string(&vec).unwrap(), x.to_text());
        let ok = normsurf(&["verify", "cert", tri.to_str().unwrap(), vec.to_str().unwrap()]);
        assert_eq!(ok.status.code(), Some(0));
    }
    for (i, text) in ["a b c\na d e\n", "a b c\na b d\na c d\nb c d\n"].into_iter().enumerate() {
        let clauses = dir.join(format!("c{i}.txt"));
        fs::write(&clauses, text).unwrap();
        let inst = dir.join(format!("c{i}.inst"));
        assert_eq!(normsurf(&["reduce", "sat", clauses.to_str().unwrap(), "--output", inst.to_str().unwrap()]).status.code(), Some(0));
        let c: ClauseSet = text.parse().unwrap();
        let expected = decide_instance(&reduce_sat(&c).unwrap()).unwrap().answer;
        let ray = dir.join(format!("c{i}.ray"));
        let solved = normsurf(&["solve", "abstract", inst.to_str().unwrap(), "--output", ray.to_str().unwrap()]);
        assert_eq!(solved.status.code(), Some(if expected { 0 } else { 1 }));
        assert_eq!(value(&stdout(&solved), "satisfiable"), expected.to_string());
    }
}

#[test]
fn corrupted_certificate_is_rejected() {
    let dir = workdir("corrupt");
    let tri = dir.join("pillow.tri");
    normsurf(&["build", "pillow", "--output", tri.to_str().unwrap()]);
    let vec = dir.join("w.vec");
    assert_eq!(normsurf(&["detect", "spanning", tri.to_str().unwrap(), "--output", vec.to_str().unwrap()]).status.code(), Some(0));
    let good = fs::read_to_string(&vec).unwrap();
    fs::write(&vec, good.replacen('1', "2", 1)).unwrap();
    let bad = normsurf(&["verify", "cert", tri.to_str().unwrap(), vec.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(value(&stdout(&bad), "valid"), "false");
}

#[test]
fn outputs_are_byte_stable() {
    let dir = workdir("stable");
    let tri = dir.join("torus.tri");
    normsurf(&["build", "torus", "--output", tri.to_str().unwrap()]);
    for args in [
        vec!["skeleton", tri.to_str().unwrap()],
        vec!["enumerate", "rays", tri.to_str().unwrap()],
        vec!["detect", "splitting", tri.to_str().unwrap()],
        vec!["--threads", "2", "enumerate", "rays", tri.to_str().unwrap()],
    ] {
        let a = normsurf(&args);
        let b = normsurf(&args);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stderr, b.stderr);
    }
    let sk = stdout(&normsurf(&["skeleton", tri.to_str().unwrap()]));
    assert_eq!(value(&sk, "boundary_edges"), "9");
    assert_eq!(value(&sk, "boundary_vertices"), "3");
}

#[test]
fn usage_and_io_errors() {
    assert_eq!(normsurf(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(normsurf(&["build", "cube"]).status.code(), Some(64));
    assert_eq!(normsurf(&["skeleton", "/nonexistent/file.tri"]).status.code(), Some(2));
    assert_eq!(normsurf(&["--help"]).status.code(), Some(0));
    let dir = workdir("budget");
    let tri = dir.join("gadget.tri");
    normsurf(&["build", "node-gadget", "--output", tri.to_str().unwrap()]);
    let out = normsurf(&["detect", "spanning", tri.to_str().unwrap(), "--enumerate-all", "--budget", "3"]);
    assert_eq!(out.status.code(), Some(2));
}
