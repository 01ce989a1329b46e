//! Textual instance descriptions.
//!
//! One-line form: `poly:p=2,k=1`, `synthetic:q=2,pi=gauss`,
//! `synthetic:q=2,pi=2/1/2/3`, `graph:k4`, `graph:complete=5`,
//! `graph:bipartite=3x3`, `graph:edges=path/to/file`.
//!
//! Config-file form: `key = value` lines (`#` starts a comment) with either
//! `instance = <one-line form>` or `kind = poly|synthetic|graph` plus the
//! same parameters as separate keys. Optional keys `c`, `eta`, `theta`
//! record known axiom constants.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{GraphSpec, Instance, SyntheticInstance};
use crate::error::{Error, Result};
use crate::ffpoly::FieldSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum GraphSource {
    Complete(usize),
    Bipartite(usize, usize),
    EdgeFile(PathBuf),
}

#[serde_with::serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum InstanceKindSpec {
    Polynomial { p: u64, k: u32 },
    /// `pi = None` means the Gauss counts for `q`.
    Synthetic {
        q: u64,
        #[serde_as(as = "Option<Vec<serde_with::DisplayFromStr>>")]
        pi: Option<Vec<BigUint>>,
    },
    Graph(GraphSource),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub kind: InstanceKindSpec,
    pub c: Option<f64>,
    pub eta: Option<f64>,
    pub theta: Option<f64>,
}

/// Parses `key = value` lines; later keys override earlier ones.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", i + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn params(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_once('=') {
            Some((k, v)) => out.insert(k.trim().to_string(), v.trim().to_string()),
            None => out.insert(item.to_string(), String::new()),
        };
    }
    Ok(out)
}

fn num<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    map.get(key)
        .map(|v| {
            v.parse()
                .map_err(|_| Error::Parse(format!("bad value for {key}: {v:?}")))
        })
        .transpose()
}

fn required<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<T> {
    num(map, key)?.ok_or_else(|| Error::Parse(format!("missing key {key}")))
}

impl InstanceKindSpec {
    fn from_parts(kind: &str, map: &BTreeMap<String, String>) -> Result<Self> {
        match kind {
            "poly" | "polynomial" => Ok(InstanceKindSpec::Polynomial {
                p: required(map, "p")?,
                k: num(map, "k")?.unwrap_or(1),
            }),
            "synthetic" => {
                let q = required(map, "q")?;
                let pi = match map.get("pi").map(String::as_str) {
                    None | Some("gauss") => None,
                    Some(list) => Some(
                        list.split('/')
                            .map(|x| {
                                x.trim()
                                    .parse::<BigUint>()
                                    .map_err(|_| Error::Parse(format!("bad prime count {x:?}")))
                            })
                            .collect::<Result<Vec<_>>>()?,
                    ),
                };
                Ok(InstanceKindSpec::Synthetic { q, pi })
            }
            "graph" => {
                if map.contains_key("k4") {
                    return Ok(InstanceKindSpec::Graph(GraphSource::Complete(4)));
                }
                if let Some(n) = num(map, "complete")? {
                    return Ok(InstanceKindSpec::Graph(GraphSource::Complete(n)));
                }
                if let Some(v) = map.get("bipartite") {
                    let (a, b) = v
                        .split_once('x')
                        .ok_or_else(|| Error::Parse(format!("bipartite expects AxB, got {v:?}")))?;
                    let parse = |s: &str| {
                        s.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad part size {s:?}")))
                    };
                    return Ok(InstanceKindSpec::Graph(GraphSource::Bipartite(parse(a)?, parse(b)?)));
                }
                if let Some(path) = map.get("edges") {
                    return Ok(InstanceKindSpec::Graph(GraphSource::EdgeFile(path.into())));
                }
                Err(Error::Parse("graph needs k4, complete=N, bipartite=AxB or edges=FILE".into()))
            }
            other => Err(Error::Parse(format!("unknown instance kind {other:?}"))),
        }
    }
}

impl FromStr for InstanceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let map = params(rest)?;
        Ok(InstanceSpec {
            kind: InstanceKindSpec::from_parts(kind, &map)?,
            c: num(&map, "c")?,
            eta: num(&map, "eta")?,
            theta: num(&map, "theta")?,
        })
    }
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            InstanceKindSpec::Polynomial { p, k } => write!(f, "poly:p={p},k={k}")?,
            InstanceKindSpec::Synthetic { q, pi: None } => write!(f, "synthetic:q={q},pi=gauss")?,
            InstanceKindSpec::Synthetic { q, pi: Some(v) } => {
                let list: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "synthetic:q={q},pi={}", list.join("/"))?
            }
            InstanceKindSpec::Graph(GraphSource::Complete(n)) => write!(f, "graph:complete={n}")?,
            InstanceKindSpec::Graph(GraphSource::Bipartite(a, b)) => {
                write!(f, "graph:bipartite={a}x{b}")?
            }
            InstanceKindSpec::Graph(GraphSource::EdgeFile(p)) => {
                write!(f, "graph:edges={}", p.display())?
            }
        }
        for (key, v) in [("c", self.c), ("eta", self.eta), ("theta", self.theta)] {
            if let Some(v) = v {
                write!(f, ",{key}={v}")?;
            }
        }
        Ok(())
    }
}

impl InstanceSpec {
    /// Reads the config-file form.
    pub fn from_config(text: &str) -> Result<Self> {
        let map = parse_key_values(text)?;
        if let Some(line) = map.get("instance") {
            let mut spec: InstanceSpec = line.parse()?;
            spec.c = num(&map, "c")?.or(spec.c);
            spec.eta = num(&map, "eta")?.or(spec.eta);
            spec.theta = num(&map, "theta")?.or(spec.theta);
            return Ok(spec);
        }
        let kind = map
            .get("kind")
            .ok_or_else(|| Error::Parse("config needs `instance` or `kind`".into()))?;
        Ok(InstanceSpec {
            kind: InstanceKindSpec::from_parts(kind, &map)?,
            c: num(&map, "c")?,
            eta: num(&map, "eta")?,
            theta: num(&map, "theta")?,
        })
    }

    pub fn build(&self) -> Result<Instance> {
        let label = self.to_string();
        let inst = match &self.kind {
            InstanceKindSpec::Polynomial { p, k } => Instance::polynomial(&FieldSpec::new(*p, *k)?),
            InstanceKindSpec::Synthetic { q, pi: None } => {
                Instance::synthetic(SyntheticInstance::gauss(*q)?)
            }
            InstanceKindSpec::Synthetic { q, pi: Some(v) } => {
                Instance::synthetic(SyntheticInstance::from_list(*q, v.clone())?)
            }
            InstanceKindSpec::Graph(GraphSource::Complete(n)) => {
                Instance::graph(GraphSpec::complete(*n)?)
            }
            InstanceKindSpec::Graph(GraphSource::Bipartite(a, b)) => {
                Instance::graph(GraphSpec::complete_bipartite(*a, *b)?)
            }
            InstanceKindSpec::Graph(GraphSource::EdgeFile(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
                Instance::graph(GraphSpec::parse_edge_list(&text)?)
            }
        };
        Ok(inst.with_label(label))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_line_forms_round_trip() {
        for s in [
            "poly:p=2,k=1",
            "poly:p=3,k=2",
            "synthetic:q=2,pi=gauss",
            "synthetic:q=2,pi=2/1/2/3",
            "graph:complete=4",
            "graph:bipartite=3x3",
        ] {
            let spec: InstanceSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        let k4: InstanceSpec = "graph:k4".parse().unwrap();
        assert_eq!(k4.kind, InstanceKindSpec::Graph(GraphSource::Complete(4)));
    }

    #[test]
    fn config_file_forms() {
        let a = InstanceSpec::from_config("# test\nkind = poly\np = 5\nk = 1\neta = 0\n").unwrap();
        assert_eq!(a.kind, InstanceKindSpec::Polynomial { p: 5, k: 1 });
        assert_eq!(a.eta, Some(0.0));
        let b = InstanceSpec::from_config("instance = synthetic:q=3\nc = 1\n").unwrap();
        assert_eq!(b.kind, InstanceKindSpec::Synthetic { q: 3, pi: None });
        assert_eq!(b.c, Some(1.0));
        assert!(InstanceSpec::from_config("p = 2").is_err());
    }

    #[test]
    fn bad_inputs() {
        assert!("poly:p=4".parse::<InstanceSpec>().unwrap().build().is_err());
        assert!("nonsense:x=1".parse::<InstanceSpec>().is_err());
        assert!("graph:".parse::<InstanceSpec>().is_err());
    }
}
