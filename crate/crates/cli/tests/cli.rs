use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ndnsec::node::TrustStore;
use ndnsec::sigcore::{KeyPair, SchemeId};
use ndnsec_cli::keys::KeyFile;

fn ndnsec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ndnsec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn sim_line_demo() {
    let dir = tempfile::tempdir().unwrap();
    let topo = configs().join("line.toml");
    let out = ndnsec(&["sim", "--topology", p(&topo), "--out", p(dir.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = fs::read_to_string(dir.path().join("counters.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let hits = header.iter().position(|h| *h == "cs_hits").unwrap();
    let total: u64 = lines
        .map(|l| l.split(',').nth(hits).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 1);

    let deliveries = fs::read_to_string(dir.path().join("deliveries.jsonl")).unwrap();
    assert_eq!(deliveries.lines().count(), 2);
    let trace = fs::read_to_string(dir.path().join("trace.jsonl")).unwrap();
    assert!(trace.lines().count() > 0);
}

#[test]
fn sim_split_files() {
    let dir = tempfile::tempdir().unwrap();
    let topo = dir.path().join("topo.toml");
    let scen = dir.path().join("scen.toml");
    let full = fs::read_to_string(configs().join("line.toml")).unwrap();
    let cut = full.find("[[schedule]]").unwrap();
    fs::write(&topo, &full[..cut]).unwrap();
    fs::write(&scen, &full[cut..]).unwrap();
    let outdir = dir.path().join("out");
    let out = ndnsec(&["sim", "--topology", p(&topo), "--scenario", p(&scen), "--out", p(&outdir)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let deliveries = fs::read_to_string(outdir.join("deliveries.jsonl")).unwrap();
    assert_eq!(deliveries.lines().count(), 2);
}

#[test]
fn sim_malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let topo = dir.path().join("bad.toml");
    fs::write(&topo, "[[nodes]]\nid = \"A\"\nrole = \"wizard\"\n").unwrap();
    let out = ndnsec(&["sim", "--topology", p(&topo), "--out", p(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn sim_tick_limit_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let topo = dir.path().join("t.toml");
    let text = fs::read_to_string(configs().join("line.toml")).unwrap();
    fs::write(&topo, text.replace("seed = 42", "seed = 42\ntick_limit = 0")).unwrap();
    let out = ndnsec(&["sim", "--topology", p(&topo), "--out", p(dir.path())]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sim_missing_file_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = ndnsec(&["sim", "--topology", "/nonexistent/t.toml", "--out", p(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn keygen_bls_loads_as_anchor() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bls.toml");
    let out = ndnsec(&["keygen", "--scheme", "bls", "--out", p(&path)]);
    assert!(out.status.success());
    let kf = KeyFile::from_toml(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(kf.scheme, SchemeId::Bls);
    let kp = kf.key_pair().unwrap();
    let store = TrustStore::from_toml(&kf.anchor_toml(&"/snnu/KEY".parse().unwrap())).unwrap();
    assert_eq!(store.anchors().len(), 1);
    let anchor = store.lookup(&"/snnu/KEY".parse().unwrap()).unwrap();
    assert_eq!(anchor.key, ndnsec::node::TrustKey::Sig(kp.public()));
}

#[test]
fn keygen_rsa_modulus_is_1024_bits() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rsa.toml");
    let out = ndnsec(&["keygen", "--scheme", "rsa", "--out", p(&path)]);
    assert!(out.status.success());
    let kf = KeyFile::from_toml(&fs::read_to_string(&path).unwrap()).unwrap();
    let KeyPair::Rsa(k) = kf.key_pair().unwrap() else {
        panic!("not an RSA key");
    };
    assert_eq!(k.n.bits(), 1024);
}

#[test]
fn keygen_unknown_scheme_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = ndnsec(&["keygen", "--scheme", "elgamal", "--out", p(&dir.path().join("k"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("k").exists());
}

#[test]
fn bench_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.csv");
    let out = ndnsec(&[
        "bench", "--schemes", "ecdsa,dsa", "--iterations", "2", "--warmup", "0", "--msg-size", "32", "--out",
        p(&path),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), ndnsec_cli::bench::CSV_HEADER);
    let mut pairs: Vec<(String, String)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 7);
            assert_eq!(f[2], "2");
            assert_eq!(f[5], "32");
            (f[0].to_owned(), f[1].to_owned())
        })
        .collect();
    pairs.sort();
    pairs.dedup();
    assert_eq!(pairs.len(), 6);
}

#[test]
fn bench_unknown_scheme_exits_2() {
    let out = ndnsec(&["bench", "--schemes", "rsa,nope", "--iterations", "1"]);
    assert_eq!(out.status.code(), Some(2));
}
