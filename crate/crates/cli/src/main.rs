mod config;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgMatches, CommandFactory, FromArgMatches, Parser, Subcommand};
use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::json;

use semigroup_ergodic::acceptance;
use semigroup_ergodic::averages::Stats;
use semigroup_ergodic::counting::{chebyshev_lambda, count_table, pnt_check, CountTable, FactorCount};
use semigroup_ergodic::dynamics::{unit_root, Angle, DynSystem, Observable, WindowFn};
use semigroup_ergodic::ffpoly::{enumerate_monic, factorize, parse_poly};
use semigroup_ergodic::keyprop::{
    construct_b_sets, lemma43_identity, liouville, proposition31_check, BSet, BSetKind, LemmaFn,
};
use semigroup_ergodic::semigroup::graph::DEFAULT_PATH_BUDGET;
use semigroup_ergodic::semigroup::{histogram, Instance, InstanceSpec, SemigroupElement};
use semigroup_ergodic::Error;

use output::{sig15, to_json, Artifact, Manifest};

const THREADS_ENV: &str = "SEMIGROUP_ERGODIC_THREADS";

#[derive(Parser)]
#[command(name = "semigroup-ergodic", version, about = "Omega statistics and ergodic averages over arithmetical semigroups")]
struct Cli {
    /// Instance: poly:p=2,k=1 | synthetic:q=2,pi=gauss | graph:k4 | graph:complete=N | graph:bipartite=AxB | graph:edges=FILE
    #[arg(long, global = true, default_value = "poly:p=2,k=1")]
    instance: InstanceSpec,
    /// Flat key = value file; flags on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for CSV, JSON and manifest files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print JSON instead of CSV on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Also write (x, y) pairs to <name>.plot.dat in the output directory.
    #[arg(long = "plot-data", global = true)]
    plot_data: bool,
    /// Worker threads.
    #[arg(long, global = true, env = THREADS_ENV)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the primes of one degree.
    Primes {
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 1000)]
        limit: usize,
    },
    /// Factor a monic polynomial of the polynomial instance.
    Factor { poly: String },
    /// The table N(n, k) of elements of degree n with k prime factors.
    Counts {
        #[arg(long, default_value_t = 12)]
        nmax: usize,
        /// Count distinct prime factors.
        #[arg(long)]
        distinct: bool,
        /// Compare with full enumeration: `enumerate`.
        #[arg(long)]
        oracle: Option<Oracle>,
        /// Validate a saved table (JSON) instead of computing one.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Lambda(n) against q^n.
    PntCheck {
        #[arg(long, default_value_t = 30)]
        nmax: usize,
    },
    /// Proportion of elements with Omega = r mod m.
    Density {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        r: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Mean of e(h alpha Omega).
    Weyl {
        #[arg(long, default_value = "sqrt2-1")]
        alpha: Angle,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        h: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Distance of the normalized Omega distribution to the standard normal.
    ErdosKac {
        #[command(flatten)]
        common: Common,
    },
    /// Mean of f(T^Omega(g) x).
    BrAverage {
        #[command(flatten)]
        orbit: Orbit,
        #[command(flatten)]
        common: Common,
    },
    /// Mean of F(phi(g)) f(T^Omega(g) x).
    LoydAverage {
        #[command(flatten)]
        orbit: Orbit,
        #[arg(long, default_value = "hat:a=-3,b=3")]
        window: WindowFn,
        #[command(flatten)]
        common: Common,
    },
    /// Mean of F(phi(g)) (a(Omega(g) + 1) - a(Omega(g))).
    ShiftTest {
        /// parity | rotation:alpha=A | root:m=M
        #[arg(long, default_value = "parity")]
        a: ShiftFn,
        #[arg(long, default_value = "one")]
        window: WindowFn,
        #[command(flatten)]
        common: Common,
    },
    /// E(B) and the comparison of a with its twists by B.
    Keyprop {
        /// primes:degrees=1|2
        #[arg(long, default_value = "primes:degrees=1|2")]
        b: PrimeSetSpec,
        /// liouville | one
        #[arg(long, default_value = "liouville")]
        a: String,
        #[arg(long, value_delimiter = ',', default_value = "10,11,12")]
        ngrid: Vec<usize>,
        /// Rational, as p/q or a decimal.
        #[arg(long, default_value = "0.05")]
        slack: String,
    },
    /// Matched sets of primes and 2-almost primes.
    ConstructB {
        #[arg(long, default_value_t = 0.9)]
        eps: f64,
        #[arg(long, requires = "t")]
        s: Option<usize>,
        #[arg(long, requires = "s")]
        t: Option<usize>,
        /// Also check the twisted-average identity at this degree.
        #[arg(long = "verify-n")]
        verify_n: Option<usize>,
    },
    /// Prime cycle counts of a graph from non-backtracking traces.
    GraphPi {
        #[arg(long, default_value_t = 10)]
        nmax: usize,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Halve every degree.
        #[arg(long)]
        quick: bool,
        /// Validate a saved count table first.
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct Common {
    #[arg(long, value_delimiter = ',', default_value = "25,50,100,200")]
    ngrid: Vec<usize>,
    /// Count distinct prime factors.
    #[arg(long)]
    distinct: bool,
}

#[derive(clap::Args)]
struct Orbit {
    /// finite:m=M | torus:alpha=A|B
    #[arg(long, default_value = "torus:alpha=sqrt2-1")]
    system: DynSystem,
    /// Starting point; the origin by default.
    #[arg(long)]
    point: Option<String>,
    /// indicator:r=R | character:freq=F | constant:c=C | parity | table:values=V
    #[arg(long, default_value = "character:freq=1")]
    observable: Observable,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Oracle {
    Enumerate,
}

#[derive(Clone)]
enum ShiftFn {
    Parity,
    Rotation(Angle),
    Root(u64),
}

impl std::str::FromStr for ShiftFn {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "parity" {
            return Ok(ShiftFn::Parity);
        }
        if let Some(a) = s.strip_prefix("rotation:alpha=") {
            return a.parse().map(ShiftFn::Rotation).map_err(|e: Error| e.to_string());
        }
        if let Some(m) = s.strip_prefix("root:m=") {
            return match m.parse::<u64>() {
                Ok(m) if m > 0 => Ok(ShiftFn::Root(m)),
                _ => Err(format!("bad modulus `{m}`")),
            };
        }
        Err(format!("unknown shift function `{s}`"))
    }
}

impl std::fmt::Display for ShiftFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ShiftFn::Parity => write!(f, "parity"),
            ShiftFn::Rotation(a) => write!(f, "rotation:alpha={a}"),
            ShiftFn::Root(m) => write!(f, "root:m={m}"),
        }
    }
}

#[derive(Clone)]
struct PrimeSetSpec(Vec<usize>);

impl std::str::FromStr for PrimeSetSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let list = s.strip_prefix("primes:degrees=").ok_or_else(|| format!("unknown set `{s}`"))?;
        let degrees = list
            .split('|')
            .map(|d| d.trim().parse::<usize>().map_err(|_| format!("bad degree `{d}`")))
            .collect::<Result<Vec<_>, _>>()?;
        if degrees.is_empty() || degrees.contains(&0) {
            return Err("degrees must be positive".into());
        }
        Ok(PrimeSetSpec(degrees))
    }
}

/// How a run ended, short of a usage or library error.
struct Outcome {
    artifacts: Vec<Artifact>,
    /// Replaces the CSV on stdout.
    text: Option<String>,
    /// An invariant the run was asked to verify failed.
    failure: Option<String>,
}

impl Outcome {
    fn ok(artifacts: Vec<Artifact>) -> Self {
        Outcome { artifacts, text: None, failure: None }
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run = Result<Outcome, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let mut cmd = Cli::command();
    let args = match config::merge(&mut cmd, std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let config = effective_config(&matches, sub);
    let started = chrono::Utc::now();
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let mut stdout = String::new();
    if let Some(t) = &outcome.text {
        stdout.push_str(t);
    } else if let Some(first) = outcome.artifacts.first() {
        stdout.push_str(&if cli.json { first.json_text() } else { first.csv() });
    }
    print!("{stdout}");
    if let Some(dir) = &cli.out {
        let files = match output::write_artifacts(dir, &outcome.artifacts, cli.plot_data) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("error: writing {}: {e}", dir.display());
                return ExitCode::from(1);
            }
        };
        let manifest = Manifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            subcommand: name.into(),
            config_hash: output::config_hash(name, &config),
            config,
            started,
            finished: chrono::Utc::now(),
            reports: files,
            status: outcome.failure.clone().unwrap_or_else(|| "ok".into()),
        };
        if let Err(e) = output::write_manifest(dir, &manifest) {
            eprintln!("error: writing manifest: {e}");
            return ExitCode::from(1);
        }
    } else if cli.plot_data {
        for a in outcome.artifacts.iter().filter(|a| !a.plot.is_empty()) {
            let path = format!("{}.plot.dat", a.name);
            if let Err(e) = std::fs::write(&path, a.plot_text()) {
                eprintln!("error: writing {path}: {e}");
                return ExitCode::from(1);
            }
        }
    }
    match outcome.failure {
        Some(msg) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
        None => ExitCode::SUCCESS,
    }
}

/// Every argument value that shapes the results, keyed by flag name.
fn effective_config(root: &ArgMatches, sub: &ArgMatches) -> BTreeMap<String, String> {
    const IGNORED: [&str; 5] = ["config", "out", "json", "plot_data", "threads"];
    let mut out = BTreeMap::new();
    for m in [root, sub] {
        for id in m.ids() {
            let id = id.as_str();
            // derive adds argument groups named after the structs
            if IGNORED.contains(&id) || id.starts_with(char::is_uppercase) {
                continue;
            }
            if let Ok(Some(raw)) = m.try_get_raw(id) {
                let v: Vec<String> = raw.map(|s| s.to_string_lossy().into_owned()).collect();
                out.insert(id.replace('_', "-"), v.join(","));
            }
        }
    }
    out
}

fn dispatch(cli: &Cli) -> Run {
    let instance = cli.instance.build()?;
    match &cli.command {
        Cmd::Primes { degree, limit } => primes(&instance, *degree, *limit),
        Cmd::Factor { poly } => factor(&instance, poly),
        Cmd::Counts { nmax, distinct, oracle, check } => match check {
            Some(path) => check_table(path),
            None => counts(&instance, *nmax, *distinct, oracle.is_some()),
        },
        Cmd::PntCheck { nmax } => pnt(&instance, *nmax),
        Cmd::Density { m, r, common } => {
            if *m == 0 || r >= m {
                return Err(Failure::Usage(format!("need 0 <= r < m, got m = {m}, r = {r}")));
            }
            with_stats(&instance, common, |s, g| Ok(s.density_report(*m, *r, g)?), "density")
        }
        Cmd::Weyl { alpha, h, common } => with_stats(&instance, common, |s, g| Ok(s.weyl_report(alpha, *h, g)?), "weyl"),
        Cmd::ErdosKac { common } => erdos_kac(&instance, common),
        Cmd::BrAverage { orbit, common } => {
            let x = point(orbit)?;
            with_stats(&instance, common, |s, g| Ok(s.br_report(&orbit.system, &x, &orbit.observable, g)?), "br-average")
        }
        Cmd::LoydAverage { orbit, window, common } => {
            let x = point(orbit)?;
            with_stats(
                &instance,
                common,
                |s, g| Ok(s.loyd_report(&orbit.system, &x, &orbit.observable, window, g)?),
                "loyd-average",
            )
        }
        Cmd::ShiftTest { a, window, common } => shift(&instance, a, window, common),
        Cmd::Keyprop { b, a, ngrid, slack } => keyprop(&instance, b, a, ngrid, slack),
        Cmd::ConstructB { eps, s, t, verify_n } => construct(&instance, *eps, s.zip(*t), *verify_n),
        Cmd::GraphPi { nmax } => graph_pi(&instance, *nmax),
        Cmd::Selftest { quick, table } => selftest(*quick, table.as_deref()),
    }
}

fn point(orbit: &Orbit) -> Result<semigroup_ergodic::dynamics::Point, Failure> {
    Ok(match &orbit.point {
        Some(p) => orbit.system.parse_point(p)?,
        None => orbit.system.origin(),
    })
}

fn table_for(instance: &Instance, nmax: usize, distinct: bool) -> Result<CountTable, Failure> {
    let t = count_table(instance, nmax)?;
    Ok(if distinct { t.with_distinct() } else { t })
}

fn which(distinct: bool) -> FactorCount {
    if distinct {
        FactorCount::Distinct
    } else {
        FactorCount::Total
    }
}

fn check_grid(grid: &[usize]) -> Result<usize, Failure> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Failure::Usage("--ngrid must be nonempty and strictly increasing".into()));
    }
    Ok(*grid.last().expect("nonempty"))
}

fn with_stats(
    instance: &Instance,
    common: &Common,
    report: impl Fn(&Stats<'_>, &[usize]) -> Result<semigroup_ergodic::averages::AverageReport, Failure>,
    name: &str,
) -> Run {
    let nmax = check_grid(&common.ngrid)?;
    let table = table_for(instance, nmax, common.distinct)?;
    let stats = Stats::new(instance, &table, which(common.distinct))?;
    let rep = report(&stats, &common.ngrid)?;
    Ok(Outcome::ok(vec![Artifact::from_report(name, &rep)]))
}

fn primes(instance: &Instance, degree: usize, limit: usize) -> Run {
    let count = instance.pi(degree)?;
    let mut a = Artifact::new(
        "primes",
        &["degree", "index", "prime"],
        json!({"instance": instance.label(), "degree": degree, "count": count.to_string()}),
    );
    if let Some(p) = instance.as_polynomial() {
        for (i, m) in p.irreducibles(degree)?.iter().take(limit).enumerate() {
            a.push(vec![degree.to_string(), i.to_string(), m.to_string()]);
        }
    } else if let Some(g) = instance.as_graph() {
        for (i, c) in g.prime_cycles(degree, DEFAULT_PATH_BUDGET)?.iter().take(limit).enumerate() {
            let path: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            a.push(vec![degree.to_string(), i.to_string(), path.join("-")]);
        }
    } else {
        for p in instance.primes(degree)?.into_iter().take(limit) {
            a.push(vec![degree.to_string(), p.index.to_string(), p.to_string()]);
        }
    }
    Ok(Outcome::ok(vec![a]))
}

fn factor(instance: &Instance, text: &str) -> Run {
    let p = instance
        .as_polynomial()
        .ok_or_else(|| Failure::Usage("factor needs a polynomial instance".into()))?;
    let m = parse_poly(p.field(), text)?;
    let f = factorize(&m)?;
    let mut a = Artifact::new(
        "factor",
        &["factor", "multiplicity"],
        json!({"input": m.to_string(), "omega": f.omega(), "big_omega": f.big_omega()}),
    );
    let mut parts = Vec::new();
    for (q, e) in f.parts() {
        let s = q.to_string();
        let s = if s.contains('+') { format!("({s})") } else { s };
        parts.push(if *e > 1 { format!("{s}^{e}") } else { s });
        a.push(vec![q.to_string(), e.to_string()]);
    }
    let shown = if parts.is_empty() { "1".to_string() } else { parts.join(" * ") };
    Ok(Outcome {
        text: Some(format!("{shown}, Omega={}\n", f.big_omega())),
        artifacts: vec![a],
        failure: None,
    })
}

fn counts(instance: &Instance, nmax: usize, distinct: bool, oracle: bool) -> Run {
    let table = table_for(instance, nmax, distinct)?;
    let w = which(distinct);
    let mut a = Artifact::new("counts", &["n", "k", "count"], to_json(&table));
    for (n, k, c) in table.entries(w) {
        a.push(vec![n.to_string(), k.to_string(), c.to_string()]);
    }
    let mut out = Outcome::ok(vec![a]);
    if oracle {
        let hist = oracle_histogram(instance, nmax, distinct)?;
        let mut o = Artifact::new("counts_oracle", &["n", "k", "table", "oracle", "match"], json!(null));
        let mut mismatches = Vec::new();
        for (n, row) in hist.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                let t = table.count(w, n, k);
                if t != *v {
                    mismatches.push(json!({"n": n, "k": k, "table": t.to_string(), "oracle": v.to_string()}));
                }
                o.push(vec![n.to_string(), k.to_string(), t.to_string(), v.to_string(), (t == *v).to_string()]);
            }
        }
        let matched = mismatches.is_empty();
        o.json = json!({
            "instance": instance.label(),
            "oracle": if instance.as_polynomial().is_some() { "monic enumeration and factorization" } else { "semigroup enumeration" },
            "nmax": nmax,
            "factor_count": w,
            "matched": matched,
            "mismatches": mismatches,
        });
        eprintln!("oracle match for n <= {nmax}: {matched}");
        if !matched {
            out.failure = Some(format!("{} table entries differ from the enumeration oracle", mismatches.len()));
        }
        out.artifacts.push(o);
    }
    Ok(out)
}

/// `N(n, k)` by listing every element: monic polynomials factored one by
/// one for polynomial instances, products of prime tokens otherwise.
fn oracle_histogram(
    instance: &Instance,
    nmax: usize,
    distinct: bool,
) -> Result<Vec<Vec<BigUint>>, Failure> {
    let mut hist = vec![];
    if let Some(p) = instance.as_polynomial() {
        for n in 0..=nmax {
            let mut row = vec![BigUint::default(); n + 1];
            for m in enumerate_monic(p.field(), n) {
                let f = factorize(&m)?;
                let k = if distinct { f.omega() } else { f.big_omega() };
                row[k as usize] += 1u32;
            }
            hist.push(row);
        }
        return Ok(hist);
    }
    let all = instance.enumerate_upto(nmax)?;
    if distinct {
        let mut rows: Vec<Vec<BigUint>> =
            (0..=nmax).map(|n| vec![BigUint::default(); n + 1]).collect();
        for g in &all {
            rows[g.degree()][g.omega() as usize] += 1u32;
        }
        return Ok(rows);
    }
    Ok(histogram(&all, nmax))
}

fn check_table(path: &std::path::Path) -> Run {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let table: CountTable =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{} is not a count table: {e}", path.display())))?;
    let failure = table_failure(&table);
    let a = Artifact::new(
        "counts_check",
        &["file", "valid"],
        json!({"file": path.display().to_string(), "valid": failure.is_none(), "violation": failure}),
    );
    let mut out = Outcome::ok(vec![a]);
    out.artifacts[0].push(vec![path.display().to_string(), failure.is_none().to_string()]);
    out.failure = failure;
    Ok(out)
}

/// The first invariant a saved table violates, if any.
fn table_failure(table: &CountTable) -> Option<String> {
    if let Err(e) = table.validate() {
        return Some(format!("count table invariant violated: {e}"));
    }
    let fresh = CountTable::from_prime_counts(table.label(), table.prime_counts(), table.nmax());
    let fresh = if table.has_distinct() { fresh.with_distinct() } else { fresh };
    for w in [FactorCount::Total, FactorCount::Distinct] {
        if w == FactorCount::Distinct && !table.has_distinct() {
            continue;
        }
        for (n, k, c) in table.entries(w) {
            if fresh.count(w, n, k) != *c {
                return Some(format!(
                    "count table invariant violated: entry ({n}, {k}) of the {w:?} table is not the Euler-product count of its prime counts"
                ));
            }
        }
    }
    None
}

fn pnt(instance: &Instance, nmax: usize) -> Run {
    let rep = pnt_check(instance, nmax)?;
    let mut a = Artifact::new("pnt-check", &["n", "lambda", "residual"], to_json(&rep));
    for (i, r) in rep.residuals.iter().enumerate() {
        let n = i + 1;
        a.push(vec![n.to_string(), chebyshev_lambda(instance, n)?.to_string(), sig15(*r)]);
        a.plot.push((n as f64, *r));
    }
    Ok(Outcome::ok(vec![a]))
}

fn erdos_kac(instance: &Instance, common: &Common) -> Run {
    let nmax = check_grid(&common.ngrid)?;
    let table = table_for(instance, nmax, common.distinct)?;
    let stats = Stats::new(instance, &table, which(common.distinct))?;
    let rep = stats.erdos_kac_report(&common.ngrid)?;
    let ek = stats.erdos_kac(nmax)?;
    let mut cdf = Artifact::new("erdos-kac_cdf", &["t", "cdf"], to_json(&ek));
    for (t, f) in &ek.cdf {
        cdf.push(vec![sig15(*t), sig15(*f)]);
        cdf.plot.push((*t, *f));
    }
    Ok(Outcome::ok(vec![Artifact::from_report("erdos-kac", &rep), cdf]))
}

fn shift(instance: &Instance, a: &ShiftFn, window: &WindowFn, common: &Common) -> Run {
    let f: Box<dyn Fn(u64) -> Complex64> = match a {
        ShiftFn::Parity => Box::new(|k| Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0)),
        ShiftFn::Rotation(alpha) => {
            let bits = alpha.bits();
            Box::new(move |k| unit_root(bits.wrapping_mul(k as u128)))
        }
        ShiftFn::Root(m) => {
            let step = Angle::rational(1, *m)?.bits();
            Box::new(move |k| unit_root(step.wrapping_mul(k as u128)))
        }
    };
    let label = a.to_string();
    with_stats(instance, common, |s, g| Ok(s.shift_report(&label, &*f, window, g)?), "shift-test")
}

fn parse_rational(s: &str) -> Result<BigRational, Failure> {
    let bad = || Failure::Usage(format!("`{s}` is not a rational number"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(BigRational::new(n.into(), d.into()));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits = format!("{int}{frac}");
    let n: i64 = digits.parse().map_err(|_| bad())?;
    Ok(BigRational::new(n.into(), 10i64.pow(frac.len() as u32).into()))
}

fn keyprop(instance: &Instance, b: &PrimeSetSpec, a: &str, grid: &[usize], slack: &str) -> Run {
    check_grid(grid)?;
    let slack = parse_rational(slack)?;
    let mut elements = Vec::new();
    for &d in &b.0 {
        elements.extend(instance.primes(d)?.into_iter().map(SemigroupElement::prime));
    }
    let set = BSet::new(instance, elements, BSetKind::Primes)?;
    let one = |_: &SemigroupElement| BigRational::from_integer(1.into());
    let f: &(dyn Fn(&SemigroupElement) -> BigRational + Sync) = match a {
        "liouville" => &liouville,
        "one" => &one,
        _ => return Err(Failure::Usage(format!("unknown function `{a}`; use liouville or one"))),
    };
    let rep = proposition31_check(instance, &set, f, grid, &|_| slack.clone())?;
    let mut art = Artifact::new(
        "keyprop",
        &["n", "lhs", "rhs", "slack", "holds", "lhs_exact", "error_functional_exact"],
        to_json(&rep),
    );
    for r in &rep.rows {
        art.push(vec![
            r.n.to_string(),
            sig15(r.lhs.re),
            sig15(r.rhs),
            sig15(r.slack.re),
            r.holds.to_string(),
            r.lhs.exact.clone().unwrap_or_default(),
            rep.error_functional.exact.clone().unwrap_or_default(),
        ]);
        art.plot.push((r.n as f64, r.lhs.re));
    }
    let mut out = Outcome::ok(vec![art]);
    if !rep.all_hold {
        out.failure = Some("the comparison bound fails for some n".into());
    }
    Ok(out)
}

fn construct(instance: &Instance, eps: f64, st: Option<(usize, usize)>, verify_n: Option<usize>) -> Run {
    let con = construct_b_sets(instance, eps, st)?;
    let bounds = con.bounds(instance)?;
    let (c1, c2) = (con.b1.degree_counts(), con.b2.degree_counts());
    let mut a = Artifact::new("construct-b", &["degree", "b1", "b2"], json!(null));
    for (d, n) in &c1 {
        a.push(vec![d.to_string(), n.to_string(), c2.get(d).copied().unwrap_or(0).to_string()]);
    }
    let mut failures = Vec::new();
    if c1 != c2 {
        failures.push("per-degree counts differ".to_string());
    }
    if !bounds.holds {
        failures.push("an error functional exceeds its bound".to_string());
    }
    let identity = match verify_n {
        Some(n) => {
            let table = count_table(instance, n)?;
            let parity = |k: usize| BigRational::from_integer(if k.is_multiple_of(2) { 1 } else { -1 }.into());
            let res = lemma43_identity(instance, &con.b1, &con.b2, &LemmaFn::ByOmega(&parity, &table), n)?;
            if !res.equal {
                failures.push(format!("twisted averages differ at n = {n}"));
            }
            Some(res)
        }
        None => None,
    };
    a.json = json!({
        "instance": instance.label(),
        "params": con.params,
        "harmonic_p1": con.harmonic_p1,
        "harmonic_p2": con.harmonic_p2,
        "b1": con.b1.elements.iter().map(|g| format!("{g:?}")).collect::<Vec<_>>(),
        "b2": con.b2.elements.iter().map(|g| format!("{g:?}")).collect::<Vec<_>>(),
        "bounds": bounds,
        "identity": identity,
    });
    let mut out = Outcome::ok(vec![a]);
    if !failures.is_empty() {
        out.failure = Some(failures.join("; "));
    }
    Ok(out)
}

fn graph_pi(instance: &Instance, nmax: usize) -> Run {
    let g = instance
        .as_graph()
        .ok_or_else(|| Failure::Usage("graph-pi needs a graph instance".into()))?;
    let traces = g.traces(nmax);
    let pi = instance.pi_table(nmax)?;
    let mut a = Artifact::new(
        "graph-pi",
        &["n", "trace", "pi"],
        json!({
            "instance": instance.label(),
            "oriented_edges": g.oriented_edge_count(),
            "delta": g.delta(),
            "radius_inv": g.radius_inv(),
            "traces": traces.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "pi": pi.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        }),
    );
    for n in 1..=nmax {
        a.push(vec![n.to_string(), traces[n].to_string(), pi[n].to_string()]);
    }
    Ok(Outcome::ok(vec![a]))
}

fn selftest(quick: bool, table: Option<&std::path::Path>) -> Run {
    let mut text = String::new();
    let mut failures = Vec::new();
    if let Some(path) = table {
        let checked = check_table(path)?;
        match checked.failure {
            Some(msg) => {
                text.push_str(&format!("table {}: {msg}\n", path.display()));
                failures.push(msg);
            }
            None => text.push_str(&format!("table {}: valid\n", path.display())),
        }
    }
    let results = acceptance::run_all(quick);
    let mut a = Artifact::new("selftest", &["criterion", "name", "passed", "detail"], to_json(&results));
    for r in &results {
        text.push_str(&format!("{r}\n"));
        a.push(vec![r.id.to_string(), r.name.clone(), r.passed.to_string(), r.detail.clone()]);
        if !r.passed {
            failures.push(format!("criterion {}", r.id));
        }
    }
    Ok(Outcome {
        artifacts: vec![a],
        text: Some(text),
        failure: (!failures.is_empty()).then(|| failures.join(", ")),
    })
}
