use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::certify::{Certificate, ClaimKind, Verdict};

const SKIP: [&str; 2] = ["timing.json", "descriptor.json"];

/// One (family, parameters) pair, or one unreadable file.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub family: String,
    pub params: String,
    pub sort_key: (u64, u64, u64, u64),
    /// `(claimed, computed, verdict)` per claim.
    pub claims: BTreeMap<ClaimKind, (Value, Value, Verdict)>,
    pub runtime: Option<f64>,
    pub error: Option<String>,
}

impl ReportRow {
    /// Confirmed if every claim is, else the non-confirmed claims with their verdicts.
    pub fn verdict(&self) -> String {
        if let Some(e) = &self.error {
            return format!("ERROR: {e}");
        }
        let bad: Vec<String> = self
            .claims
            .iter()
            .filter(|(_, (_, _, v))| *v != Verdict::Confirmed)
            .map(|(k, (_, _, v))| format!("{}:{}", k.name(), verdict_name(*v)))
            .collect();
        if bad.is_empty() {
            "CONFIRMED".into()
        } else {
            bad.join(" ")
        }
    }

    fn cell(&self, kind: ClaimKind) -> (String, String) {
        match self.claims.get(&kind) {
            Some((claimed, computed, _)) => (show(claimed), show(computed)),
            None => ("-".into(), "-".into()),
        }
    }
}

fn verdict_name(v: Verdict) -> String {
    serde_json::to_string(&v).unwrap().trim_matches('"').to_string()
}

fn show(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Object(o) => match (o.get("value"), o.get("at_most")) {
            (Some(x), Some(Value::Bool(true))) => format!("≤{x}"),
            (Some(x), _) => x.to_string(),
            _ => v.to_string(),
        },
        _ => v.to_string(),
    }
}

fn json_files(dir: &Path, out: &mut Vec<PathBuf>) -> io::Result<()> {
    let mut entries: Vec<_> = fs::read_dir(dir)?.collect::<Result<_, _>>()?;
    entries.sort_by_key(|e| e.path());
    for e in entries {
        let p = e.path();
        if p.is_dir() {
            json_files(&p, out)?;
        } else if p.extension().is_some_and(|x| x == "json")
            && !SKIP.contains(&p.file_name().and_then(|n| n.to_str()).unwrap_or(""))
        {
            out.push(p);
        }
    }
    Ok(())
}

fn runtime(dir: &Path) -> Option<f64> {
    let text = fs::read_to_string(dir.join("timing.json")).ok()?;
    let map: BTreeMap<String, f64> = serde_json::from_str(&text).ok()?;
    Some(map.values().sum())
}

/// Reads every certificate below `dir`, grouped per code and sorted by
/// `(family, q, s, m, λ)`.
pub fn collect_rows(dir: &Path) -> io::Result<Vec<ReportRow>> {
    let mut files = Vec::new();
    json_files(dir, &mut files)?;
    let mut groups: BTreeMap<(String, String), ReportRow> = BTreeMap::new();
    let mut dirs: BTreeMap<(String, String), Vec<PathBuf>> = BTreeMap::new();
    let mut errors = Vec::new();
    for path in files {
        let parsed = fs::read_to_string(&path)
            .map_err(|e| e.to_string())
            .and_then(|t| serde_json::from_str::<Certificate>(&t).map_err(|e| e.to_string()));
        let cert = match parsed {
            Ok(c) => c,
            Err(e) => {
                errors.push(ReportRow {
                    family: "ERROR".into(),
                    params: path.display().to_string(),
                    sort_key: (0, 0, 0, 0),
                    claims: BTreeMap::new(),
                    runtime: None,
                    error: Some(e),
                });
                continue;
            }
        };
        let key = (cert.code.family.clone(), cert.code.params.clone());
        let row = groups.entry(key.clone()).or_insert_with(|| ReportRow {
            family: cert.code.family.clone(),
            params: cert.code.params.clone(),
            sort_key: cert.code.spec.sort_key(),
            claims: BTreeMap::new(),
            runtime: None,
            error: None,
        });
        row.claims.insert(cert.claim, (cert.claimed, cert.computed, cert.verdict));
        let parent = path.parent().unwrap_or(dir).to_path_buf();
        let seen = dirs.entry(key).or_default();
        if !seen.contains(&parent) {
            seen.push(parent);
        }
    }
    let mut rows: Vec<ReportRow> = groups
        .into_iter()
        .map(|(key, mut row)| {
            row.runtime = dirs[&key].iter().map(|d| runtime(d)).sum();
            row
        })
        .collect();
    rows.sort_by(|a, b| (&a.family, a.sort_key, &a.params).cmp(&(&b.family, b.sort_key, &b.params)));
    rows.extend(errors);
    Ok(rows)
}

const HEADER: [&str; 16] = [
    "family", "params", "d_claimed", "d", "codim_claimed", "codim", "R_claimed", "R", "class_claimed",
    "class", "optimal_claimed", "optimal", "defect", "density", "verdict", "runtime_s",
];

fn cells(row: &ReportRow) -> Vec<String> {
    let mut out = vec![row.family.clone(), row.params.clone()];
    for kind in [ClaimKind::Distance, ClaimKind::Codimension, ClaimKind::CoveringRadius, ClaimKind::Classification, ClaimKind::Optimality] {
        let (a, b) = row.cell(kind);
        out.push(a);
        out.push(b);
    }
    out.push(row.cell(ClaimKind::Defect).1);
    out.push(row.cell(ClaimKind::Density).1);
    out.push(row.verdict());
    out.push(row.runtime.map_or("-".into(), |s| format!("{s:.2}")));
    out
}

pub fn render_text(rows: &[ReportRow]) -> String {
    let table: Vec<Vec<String>> = std::iter::once(HEADER.iter().map(|s| s.to_string()).collect())
        .chain(rows.iter().map(cells))
        .collect();
    let widths: Vec<usize> =
        (0..HEADER.len()).map(|i| table.iter().map(|r| r[i].chars().count()).max().unwrap_or(0)).collect();
    let mut s = String::new();
    for r in &table {
        let line: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        s.push_str(line.join("  ").trim_end());
        s.push('\n');
    }
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render_csv(rows: &[ReportRow]) -> String {
    let mut s = HEADER.join(",");
    s.push('\n');
    for r in rows {
        let line: Vec<String> = cells(r).iter().map(|c| csv_field(c)).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}
