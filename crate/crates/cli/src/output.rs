//! CSV, JSON and plot files for one run, plus its manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use semigroup_ergodic::averages::{AverageReport, ReportValue};
use serde::Serialize;
use serde_json::Value as Json;
use sha2::{Digest, Sha256};

/// One named output of a subcommand.
pub struct Artifact {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub json: Json,
    pub plot: Vec<(f64, f64)>,
}

impl Artifact {
    pub fn new(name: &str, header: &[&str], json: Json) -> Self {
        Artifact {
            name: name.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
            json,
            plot: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn json_text(&self) -> String {
        serde_json::to_string_pretty(&self.json).expect("serializable") + "\n"
    }

    pub fn plot_text(&self) -> String {
        let mut out = String::new();
        for (x, y) in &self.plot {
            out.push_str(&format!("{} {}\n", sig15(*x), sig15(*y)));
        }
        out
    }

    /// Rows `(n, empirical, limit, abs_error)` followed by components and
    /// exact forms.
    pub fn from_report(name: &str, rep: &AverageReport) -> Self {
        let mut a = Artifact::new(
            name,
            &[
                "n",
                "empirical",
                "limit",
                "abs_error",
                "empirical_re",
                "empirical_im",
                "empirical_exact",
                "limit_exact",
                "abs_error_exact",
            ],
            to_json(rep),
        );
        for (i, (n, emp, limit, err)) in rep.rows().into_iter().enumerate() {
            let e = &rep.empirical[i];
            a.push(vec![
                n.to_string(),
                sig15(emp),
                sig15(limit),
                sig15(err),
                sig15(e.re),
                sig15(e.im),
                exact(e),
                exact(&rep.limit),
                exact(&rep.abs_error[i]),
            ]);
            a.plot.push((n as f64, err));
        }
        a
    }
}

fn exact(v: &ReportValue) -> String {
    v.exact.clone().unwrap_or_default()
}

pub fn to_json<T: Serialize>(v: &T) -> Json {
    serde_json::to_value(v).expect("serializable")
}

/// `x` with 15 significant digits, fixed or scientific like `%.15g`.
pub fn sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let s = format!("{:.14e}", x);
    let (mant, e) = s.split_once('e').expect("scientific form");
    let e: i32 = e.parse().expect("exponent");
    // rounding can carry into the next decade
    let exp = if e != exp { e } else { exp };
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim(mant), e)
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[derive(Serialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub config: BTreeMap<String, String>,
    pub config_hash: String,
    pub started: DateTime<Utc>,
    pub finished: DateTime<Utc>,
    pub reports: Vec<String>,
    pub status: String,
}

/// SHA-256 of the canonical `key=value` lines, sorted by key.
pub fn config_hash(subcommand: &str, config: &BTreeMap<String, String>) -> String {
    let mut h = Sha256::new();
    h.update(format!("subcommand={subcommand}\n"));
    for (k, v) in config {
        h.update(format!("{k}={v}\n"));
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes `<name>.csv`, `<name>.json` and optionally `<name>.plot.dat`;
/// returns the file names.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact], plot: bool) -> std::io::Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let mut names = Vec::new();
    for a in artifacts {
        let mut files: Vec<(PathBuf, String)> = vec![
            (dir.join(format!("{}.csv", a.name)), a.csv()),
            (dir.join(format!("{}.json", a.name)), a.json_text()),
        ];
        if plot && !a.plot.is_empty() {
            files.push((dir.join(format!("{}.plot.dat", a.name)), a.plot_text()));
        }
        for (path, text) in files {
            fs::write(&path, text)?;
            names.push(path.file_name().expect("file").to_string_lossy().into_owned());
        }
    }
    Ok(names)
}

pub fn write_manifest(dir: &Path, manifest: &Manifest) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(manifest).expect("serializable") + "\n";
    fs::write(dir.join("manifest.json"), text)
}
