use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sumrank::certify::{replay, Certificate, Verdict};
use sumrank::cli::Descriptor;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumrank")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, format!("schema_version = 1\n{body}")).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const THM61: &str = "[code]\nfamily = \"THM61\"\nparams = { q = 2, m = 2, u = 2 }\n";

#[test]
fn build_prints_geometry() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        (THM61, "t = 5", "2x2"),
        ("[code]\nfamily = \"THM41\"\nparams = { q = 2, s = 3, m = 1, lambda = 1 }\n", "t = 7", "3x3"),
        ("[code]\nfamily = \"THM31\"\nparams = { q = 4, m = 3, lambda = 1 }\n", "t = 63", "1x1"),
    ];
    for (i, (body, t, shape)) in cases.iter().enumerate() {
        let cfg = config(tmp.path(), &format!("{i}.toml"), body);
        let out = bin(&["build", "--config", &cfg]);
        assert_eq!(out.status.code(), Some(0));
        let text = stdout(&out);
        assert!(text.contains(t) && text.contains(shape), "{text}");
    }
    let cfg = config(tmp.path(), "c.toml", "[code]\nfamily = \"THM31\"\nparams = { q = 4, m = 3 }\n");
    bin(&["build", "--config", &cfg, "--out", p(&tmp.path().join("b"))]);
    let desc = Descriptor::load(&tmp.path().join("b/descriptor.json")).unwrap();
    assert_eq!((desc.components[0].length, desc.components[0].dimension), (63, 56));
}

#[test]
fn build_certify_report_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(tmp.path(), "t61.toml", THM61);
    let built_dir = tmp.path().join("built");
    assert_eq!(bin(&["build", "--config", &cfg, "--out", p(&built_dir)]).status.code(), Some(0));
    let certs = tmp.path().join("certs/thm61");
    let out = bin(&["certify", "--descriptor", p(&built_dir.join("descriptor.json")), "--out", p(&certs), "--serial"]);
    // optimality fails the strict volume test
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));

    let desc = Descriptor::load(&built_dir.join("descriptor.json")).unwrap();
    let built = desc.rebuild().unwrap();
    let mut n = 0;
    for e in fs::read_dir(&certs).unwrap() {
        let path = e.unwrap().path();
        if path.file_name().unwrap() == "timing.json" {
            continue;
        }
        let cert: Certificate = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        replay(&cert, &built).unwrap();
        n += 1;
    }
    assert_eq!(n, 6);

    let t41 = config(
        tmp.path(),
        "t41.toml",
        "claims = [\"optimality\"]\n[code]\nfamily = \"THM41\"\nparams = { q = 2, s = 2, m = 2, lambda = 1 }\n",
    );
    let out = bin(&["certify", "--config", &t41, "--out", p(&tmp.path().join("certs/thm41"))]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("8731 > q^codim = 4096"));

    fs::write(tmp.path().join("certs/broken.json"), "{").unwrap();
    let csv = tmp.path().join("report.csv");
    let out = bin(&["report", p(&tmp.path().join("certs")), "--csv", p(&csv)]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4, "{text}");
    assert!(lines[1].starts_with("THM41") && lines[1].contains("CONFIRMED"));
    assert!(lines[2].starts_with("THM61") && lines[2].contains("optimality:REFUTED_BY_CRITERION"));
    assert!(lines[3].starts_with("ERROR"));
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 4);
}

#[test]
fn report_of_empty_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin(&["report", p(tmp.path())]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 1);
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = [
        "[code]\nfamily = \"THM99\"\nparams = { q = 2 }\n",
        "[code]\nfamily = \"THM61\"\nparams = { q = 2, m = 2, u = 2, extra = 1 }\n",
        "colour = \"red\"\n[code]\nfamily = \"THM51\"\nparams = { q = 2 }\n",
        "[code]\nfamily = \"THM32\"\nparams = { q = 7, m = 2 }\n",
    ];
    for (i, body) in bad.iter().enumerate() {
        let cfg = config(tmp.path(), &format!("{i}.toml"), body);
        assert_eq!(bin(&["certify", "--config", &cfg]).status.code(), Some(2), "{body}");
    }
    let wrong_version = tmp.path().join("v.toml");
    fs::write(&wrong_version, "schema_version = 9\n[code]\nfamily = \"THM51\"\nparams = { q = 2 }\n").unwrap();
    assert_eq!(bin(&["build", "--config", p(&wrong_version)]).status.code(), Some(2));
    assert_eq!(bin(&["certify"]).status.code(), Some(2));
}

#[test]
fn exhausted_budget_is_inconclusive() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(
        tmp.path(),
        "b.toml",
        "claims = [\"distance\"]\n[code]\nfamily = \"THM41\"\nparams = { q = 2, s = 3, m = 1 }\n",
    );
    let dir = tmp.path().join("out");
    let out = bin(&["certify", "--config", &cfg, "--budget", "1000", "--out", p(&dir)]);
    assert_eq!(out.status.code(), Some(2));
    let cert: Certificate = serde_json::from_str(&fs::read_to_string(dir.join("distance.json")).unwrap()).unwrap();
    assert_eq!(cert.verdict, Verdict::Inconclusive);
}

#[test]
fn volumes_and_cosets() {
    assert_eq!(stdout(&bin(&["volumes", "--q", "2", "--t", "7", "--block", "3x3", "--radius", "2"])).trim(), "52823");
    assert_eq!(stdout(&bin(&["volumes", "--q", "4", "--hamming", "63", "--radius", "2"])).trim(), "17767");
    assert_eq!(stdout(&bin(&["volumes", "--q", "3", "--hamming", "26", "--radius", "2"])).trim(), "1353");
    let text = stdout(&bin(&["cosets", "--n", "15", "--q", "4"]));
    assert!(text.lines().any(|l| l == "C_1: {1, 4}"));
    assert_eq!(text.lines().count(), 9);
}
