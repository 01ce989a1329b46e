//! Prime cycles of a finite graph.
//!
//! A prime is an equivalence class (under rotation) of primitive, closed,
//! non-backtracking, tailless paths; its degree is the length. Closed paths
//! of length `m` are counted by `tr(W^m)`, where `W` is the 0/1 transition
//! matrix on oriented edges that forbids immediate reversal. Prime counts
//! follow by Möbius inversion of those traces.

use std::collections::VecDeque;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::counting::arith::pi_from_lambda;
use crate::error::{Error, Result};

/// Default cap on DFS path extensions when listing prime cycles.
pub const DEFAULT_PATH_BUDGET: u64 = 1_000_000;

/// An undirected graph together with its oriented-edge transition matrix.
#[derive(Clone, Debug)]
pub struct GraphSpec {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    /// Oriented edge `2i` runs `edges[i].0 -> edges[i].1`; `2i + 1` is its reversal.
    successors: Vec<Vec<usize>>,
    delta: u64,
    radius_inv: f64,
    regular_rate: Option<u64>,
}

impl GraphSpec {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidInput("graph has no vertices".into()));
        }
        for &(u, v) in &edges {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidInput(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
        }
        if !is_connected(vertices, &edges) {
            return Err(Error::Disconnected);
        }
        let m = 2 * edges.len();
        let tail = |e: usize| if e.is_multiple_of(2) { edges[e / 2].0 } else { edges[e / 2].1 };
        let head = |e: usize| if e.is_multiple_of(2) { edges[e / 2].1 } else { edges[e / 2].0 };
        let successors: Vec<Vec<usize>> = (0..m)
            .map(|e| {
                (0..m)
                    .filter(|&f| tail(f) == head(e) && f != (e ^ 1))
                    .collect()
            })
            .collect();
        let mut spec = GraphSpec {
            vertices,
            edges,
            successors,
            delta: 0,
            radius_inv: 0.0,
            regular_rate: None,
        };
        let traces = spec.traces(m.max(1));
        let delta = (1..traces.len())
            .filter(|&k| !traces[k].is_zero())
            .fold(0u64, |g, k| g.gcd(&(k as u64)));
        if delta == 0 {
            return Err(Error::InvalidInput("graph has no closed non-backtracking paths".into()));
        }
        spec.delta = delta;
        let rows: Vec<usize> = spec.successors.iter().map(Vec::len).collect();
        if rows.windows(2).all(|w| w[0] == w[1]) {
            spec.regular_rate = Some(rows[0] as u64);
            spec.radius_inv = rows[0] as f64;
        } else {
            spec.radius_inv = spec.perron();
        }
        Ok(spec)
    }

    /// The complete graph on `n` vertices.
    pub fn complete(n: usize) -> Result<Self> {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::new(n, edges)
    }

    /// The complete bipartite graph `K_{a,b}`.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self> {
        let edges = (0..a)
            .flat_map(|u| (0..b).map(move |v| (u, a + v)))
            .collect();
        Self::new(a + b, edges)
    }

    /// Parses whitespace-separated `u v` lines; `#` starts a comment. The
    /// vertex count is one more than the largest label.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<&str> = line.split_whitespace().collect();
            if nums.len() != 2 {
                return Err(Error::Parse(format!("line {}: expected 'u v'", lineno + 1)));
            }
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {}: bad vertex '{s}'", lineno + 1)))
            };
            edges.push((parse(nums[0])?, parse(nums[1])?));
        }
        let vertices = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::new(vertices, edges)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn oriented_edge_count(&self) -> usize {
        self.successors.len()
    }

    /// Dense 0/1 transition matrix on oriented edges.
    pub fn edge_matrix(&self) -> Vec<Vec<u8>> {
        let m = self.successors.len();
        self.successors
            .iter()
            .map(|succ| {
                let mut row = vec![0u8; m];
                for &f in succ {
                    row[f] = 1;
                }
                row
            })
            .collect()
    }

    /// gcd of the lengths of prime cycles.
    pub fn delta(&self) -> u64 {
        self.delta
    }

    /// Perron eigenvalue of the edge matrix, `1 / R_G`.
    pub fn radius_inv(&self) -> f64 {
        self.radius_inv
    }

    /// `Some(r)` when every oriented edge has exactly `r` successors, in which
    /// case the Perron eigenvalue is exactly `r`.
    pub fn regular_rate(&self) -> Option<u64> {
        self.regular_rate
    }

    /// `N_m = tr(W^m)` for `0 <= m <= nmax` (`N_0` is the oriented edge count).
    pub fn traces(&self, nmax: usize) -> Vec<BigUint> {
        let m = self.successors.len();
        let mut preds = vec![Vec::new(); m];
        for (e, succ) in self.successors.iter().enumerate() {
            for &f in succ {
                preds[f].push(e);
            }
        }
        let mut out = vec![BigUint::from(m)];
        let mut power: Vec<Vec<BigUint>> = (0..m)
            .map(|i| (0..m).map(|j| BigUint::from((i == j) as u8)).collect())
            .collect();
        for _ in 1..=nmax {
            power = power
                .iter()
                .map(|row| {
                    (0..m)
                        .map(|j| preds[j].iter().map(|&f| &row[f]).sum())
                        .collect()
                })
                .collect();
            out.push((0..m).map(|i| &power[i][i]).sum());
        }
        out
    }

    /// Prime counts `pi(1..=n)` (index 0 holds 0).
    pub fn prime_counts(&self, n: usize) -> Vec<BigUint> {
        let traces: Vec<BigInt> = self.traces(n).into_iter().map(BigInt::from).collect();
        let mut pi = vec![BigUint::zero()];
        for k in 1..=n {
            pi.push(pi_from_lambda(&traces, k).expect("trace sums invert to nonnegative integers"));
        }
        pi
    }

    fn perron(&self) -> f64 {
        let m = self.successors.len();
        let mut v = vec![1.0f64; m];
        let mut lambda = 0.0;
        for _ in 0..200_000 {
            // (W + I) v keeps the iteration aperiodic
            let mut w = v.clone();
            for (e, succ) in self.successors.iter().enumerate() {
                for &f in succ {
                    w[e] += v[f];
                }
            }
            let norm: f64 = w.iter().sum();
            let next = norm / v.iter().sum::<f64>();
            for x in w.iter_mut() {
                *x /= norm;
            }
            v = w;
            if (next - lambda).abs() <= 1e-15 * next {
                lambda = next;
                break;
            }
            lambda = next;
        }
        lambda - 1.0
    }

    /// Canonical oriented-edge sequences of the prime cycles of length `n`,
    /// sorted. Each class is represented by its lexicographically least
    /// rotation. Fails with `CountOnly` once `budget` path extensions are spent.
    pub fn prime_cycles(&self, n: usize, budget: u64) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        if n == 0 {
            return Ok(out);
        }
        let mut spent = 0u64;
        let mut path = Vec::with_capacity(n);
        for start in 0..self.successors.len() {
            path.clear();
            path.push(start);
            self.extend_cycle(start, n, &mut path, &mut spent, budget, &mut out)?;
        }
        out.sort();
        Ok(out)
    }

    fn extend_cycle(
        &self,
        start: usize,
        n: usize,
        path: &mut Vec<usize>,
        spent: &mut u64,
        budget: u64,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        let last = *path.last().expect("path is never empty");
        if path.len() == n {
            if self.successors[last].contains(&start) && is_primitive_least_rotation(path) {
                out.push(path.clone());
            }
            return Ok(());
        }
        for &f in &self.successors[last] {
            if f < start {
                continue;
            }
            *spent += 1;
            if *spent > budget {
                return Err(Error::CountOnly(format!(
                    "listing prime cycles of length {n} exceeds {budget} path extensions"
                )));
            }
            path.push(f);
            self.extend_cycle(start, n, path, spent, budget, out)?;
            path.pop();
        }
        Ok(())
    }
}

fn is_primitive_least_rotation(seq: &[usize]) -> bool {
    let n = seq.len();
    (1..n).all(|r| {
        let rotated = seq[r..].iter().chain(&seq[..r]);
        rotated.cmp(seq.iter()) == std::cmp::Ordering::Greater
    })
}

fn is_connected(vertices: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); vertices];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; vertices];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}
