use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bianchi(args: &[&str], cache_env: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bianchi"));
    cmd.args(args).env_remove("BIANCHI_CACHE_DIR");
    if let Some(dir) = cache_env {
        cmd.env("BIANCHI_CACHE_DIR", dir);
    }
    cmd.output().expect("runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn run_reports_the_degree_table() {
    let out = bianchi(&["run", "-m", "19", "-l", "2,3", "--qmax", "10"], None);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["schema"], "bianchi-run/1");
    let h = &doc["results"][0]["report"]["homology"];
    assert_eq!(h["integral"][1]["rank"], 1);
    assert_eq!(h["integral"][2]["torsion"], serde_json::json!([2, 12]));
    let dims: Vec<u64> = h["mod_l"][0]["dims"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(dims, vec![3, 1, 3, 5, 3, 5, 7, 5]);
}

#[test]
fn k_homology_of_the_gaussian_integers() {
    let out = bianchi(&["run", "-m", "1", "--ksh", "--qmax", "4", "--format", "markdown"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("K_0 = Z^6, K_1 = Z"), "{text}");
}

#[test]
fn non_square_free_is_an_error_record() {
    let out = bianchi(&["run", "-m", "12"], None);
    assert_eq!(out.status.code(), Some(2));
    let doc = json(&out);
    assert_eq!(doc["results"][0]["error"]["kind"], "NotSquareFree");
    assert_eq!(doc["results"][0]["m"], 12);
}

#[test]
fn bad_prime_is_rejected() {
    let out = bianchi(&["run", "-m", "2", "-l", "7"], None);
    assert!(!out.status.success());
}

#[test]
fn output_is_deterministic() {
    let args = ["run", "-m", "2,7", "--qmax", "6", "--ksh"];
    let a = bianchi(&args, None);
    let b = bianchi(&args, None);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cached_and_fresh_runs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let fresh = bianchi(&["run", "-m", "3", "--qmax", "6"], None);
    let first = bianchi(&["run", "-m", "3", "--qmax", "6", "--cache-dir", d], None);
    let second = bianchi(&["run", "-m", "3", "--qmax", "6", "--cache-dir", d], None);
    assert!(dir.path().join(format!("orbit-complex-m3-{}.json", bianchi_core::pipeline::CACHE_KEY)).exists());
    assert_eq!(fresh.stdout, first.stdout);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn flag_wins_over_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let out = bianchi(&["run", "-m", "2", "--qmax", "4", "--cache-dir", flag_dir.path().to_str().unwrap()], Some(env_dir.path()));
    assert!(out.status.success());
    assert_eq!(std::fs::read_dir(env_dir.path()).unwrap().count(), 0);
    assert!(std::fs::read_dir(flag_dir.path()).unwrap().count() > 0);
    let env_only = bianchi(&["run", "-m", "2", "--qmax", "4"], Some(env_dir.path()));
    assert!(env_only.status.success());
    assert!(std::fs::read_dir(env_dir.path()).unwrap().count() > 0);
}

#[test]
fn compare_principal_case_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = bianchi(&["compare", "-m", "11", "--cache-dir", d], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["results"][0]["mismatches"], 0);
    // rewrite K_1 in the stored report
    let report = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).find(|p| p.file_name().unwrap().to_str().unwrap().starts_with("report-")).unwrap();
    let mut r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    r["k_homology"]["k1"]["rank"] = 4.into();
    std::fs::write(&report, serde_json::to_string(&r).unwrap()).unwrap();
    let out = bianchi(&["compare", "-m", "11", "--cache-dir", d], None);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("K_1") && err.contains("equivariant K-homology table"), "{err}");
}

#[test]
fn compare_figure_row_39() {
    let out = bianchi(&["compare", "-m", "39", "-l", "3", "--qmax", "8"], None);
    assert!(out.status.success());
    let doc = json(&out);
    let cs = doc["results"][0]["comparisons"].as_array().unwrap();
    let t = cs.iter().find(|c| c["quantity"] == "3-torsion subcomplex").unwrap();
    assert_eq!(t["computed"], "1 circle + 1 interval");
    assert_eq!(t["matches"], true);
}

#[test]
fn export_needs_a_computed_complex() {
    let dir = tempfile::tempdir().unwrap();
    let out = bianchi(&["export", "-m", "1", "polyhedron", "--cache-dir", dir.path().to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "UnknownArtifact");
    let out = bianchi(&["export", "-m", "1", "polyhedron"], None);
    assert_eq!(json(&out)["error"]["kind"], "UnknownArtifact");
}

#[test]
fn export_polyhedron_as_obj() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert!(bianchi(&["run", "-m", "1", "--qmax", "3", "--cache-dir", d], None).status.success());
    let file = dir.path().join("floor.obj");
    let out = bianchi(&["export", "-m", "1", "polyhedron", "--format", "obj", "--cache-dir", d, "-o", file.to_str().unwrap()], None);
    assert!(out.status.success());
    let obj = std::fs::read_to_string(&file).unwrap();
    let nv = obj.lines().filter(|l| l.starts_with("v ")).count();
    assert!(nv >= 3);
    for l in obj.lines().filter(|l| l.starts_with("v ")) {
        let xs: Vec<f64> = l[2..].split(' ').map(|x| x.parse().unwrap()).collect();
        assert_eq!(xs.len(), 3);
        assert!(xs[2] > 0.0);
    }
    for l in obj.lines().filter(|l| l.starts_with("f ")) {
        let idx: Vec<usize> = l[2..].split(' ').map(|x| x.parse().unwrap()).collect();
        assert!(idx.len() >= 3 && idx.iter().all(|&i| (1..=nv).contains(&i)));
    }
    let out = bianchi(&["export", "-m", "1", "polyhedron", "--format", "dot", "--cache-dir", d], None);
    assert_eq!(json(&out)["error"]["kind"], "UnknownArtifact");
}

#[test]
fn export_torsion_graph_of_13_has_two_intervals() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    assert!(bianchi(&["run", "-m", "13", "--qmax", "3", "--cache-dir", d], None).status.success());
    let out = bianchi(&["export", "-m", "13", "torsion-graph", "-l", "3", "--format", "dot", "--cache-dir", d], None);
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    let n = dot.lines().filter(|l| l.contains("[label=\"v")).count();
    let edges: Vec<(usize, usize)> = dot
        .lines()
        .filter_map(|l| l.trim().split_once(" -- "))
        .map(|(a, b)| (a.parse().unwrap(), b.split(' ').next().unwrap().parse().unwrap()))
        .collect();
    // two components, each a path with one edge between distinct ends
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &(a, b) in &edges {
        assert_ne!(a, b);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let roots: std::collections::BTreeSet<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
    assert_eq!(roots.len(), 2);
    assert_eq!(edges.len(), n - 2);
    let out = bianchi(&["export", "-m", "13", "torsion-graph", "-l", "3", "--cache-dir", d], None);
    assert_eq!(json(&out)["homeo_type"]["intervals"], 2);
}
