use std::fmt::Write as _;
use std::str::FromStr;

use markov_growth::action::{
    convergence_report, invariance_probe, spherical_averages, Exponent, FiniteAction, Observable,
};
use markov_growth::codings::{
    build_finite_group_shortlex, build_free_group, build_free_semigroup, verify_bijectivity,
    FiniteGroupTable, GroupOracle,
};
use markov_growth::counting::{count_table, DEFAULT_PATH_CAP};
use markov_growth::regularity::{
    descriptor_of_pair, descriptor_of_spheres, RegularDescriptor, RegularityError,
    RegularityOptions, DEFAULT_RANGE,
};
use markov_growth::LabelledGraph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::{analyze_csv, count_csv, format_float, ladder_csv, series_csv};
use crate::{parse_action, parse_graph, parse_group_table, read_file, write_file, CliError};

pub const DEFAULT_NMAX: usize = 200;
pub const DEFAULT_BIG_NMAX: usize = 4096;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_LADDER_START: usize = 1;
pub const DEFAULT_LADDER_GROWTH: f64 = 2.0;
/// Verification depth for the free constructions when `--nmax` is absent.
pub const DEFAULT_FREE_VERIFY_NMAX: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Count,
    Analyze,
    Verify,
    Simulate,
}

/// A built-in coding or oracle: `free_semigroup:k`, `free_group:k`,
/// `cyclic:n` or `table:<path>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    FreeSemigroup(usize),
    FreeGroup(usize),
    Cyclic(usize),
    Table(String),
}

impl FromStr for Builtin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| format!("expected <kind>:<parameter>, got '{s}'"))?;
        let number = || {
            arg.parse::<usize>()
                .map_err(|_| format!("'{arg}' is not a nonnegative integer"))
        };
        match kind {
            "free_semigroup" => Ok(Builtin::FreeSemigroup(number()?)),
            "free_group" => Ok(Builtin::FreeGroup(number()?)),
            "cyclic" => Ok(Builtin::Cyclic(number()?)),
            "table" => Ok(Builtin::Table(arg.to_string())),
            _ => Err(format!(
                "unknown builtin '{kind}' (expected free_semigroup, free_group, cyclic or table)"
            )),
        }
    }
}

impl Builtin {
    fn finite_group(&self) -> Result<Option<FiniteGroupTable>, CliError> {
        match self {
            Builtin::Cyclic(n) => Ok(Some(FiniteGroupTable::cyclic(*n)?)),
            Builtin::Table(path) => {
                let text = read_file(path)?;
                let t = parse_group_table(&text).map_err(|source| CliError::Parse {
                    path: path.clone(),
                    source,
                })?;
                Ok(Some(t))
            }
            _ => Ok(None),
        }
    }

    /// The coding graph and the oracle it codes.
    pub fn load(&self) -> Result<(LabelledGraph, GroupOracle), CliError> {
        match self {
            Builtin::FreeSemigroup(k) => Ok((build_free_semigroup(*k)?, GroupOracle::FreeSemigroup(*k))),
            Builtin::FreeGroup(k) => Ok((build_free_group(*k)?, GroupOracle::FreeGroup(*k))),
            _ => {
                let t = self.finite_group()?.expect("finite group builtin");
                let coding = build_finite_group_shortlex(&t)?;
                Ok((coding.graph, GroupOracle::FiniteGroup(coding.group)))
            }
        }
    }

    pub fn oracle(&self) -> Result<GroupOracle, CliError> {
        match self {
            Builtin::FreeSemigroup(k) => Ok(GroupOracle::FreeSemigroup(*k)),
            Builtin::FreeGroup(k) => Ok(GroupOracle::FreeGroup(*k)),
            _ => {
                let t = self.finite_group()?.expect("finite group builtin");
                Ok(GroupOracle::FiniteGroup(t.symmetrized().0))
            }
        }
    }
}

/// Parses `inf` or a real `p >= 1`.
pub fn parse_exponent(s: &str) -> Result<Exponent, String> {
    if s.eq_ignore_ascii_case("inf") {
        return Ok(Exponent::Infinity);
    }
    let p: f64 = s.parse().map_err(|_| format!("'{s}' is not a number or 'inf'"))?;
    Exponent::finite(p).map_err(|e| e.to_string())
}

/// Parses `u,v`.
pub fn parse_pair(s: &str) -> Result<(String, String), String> {
    match s.split_once(',') {
        Some((u, v)) if !u.is_empty() && !v.is_empty() && !v.contains(',') => {
            Ok((u.to_string(), v.to_string()))
        }
        _ => Err(format!("expected <u>,<v>, got '{s}'")),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub graph_path: Option<String>,
    pub builtin: Option<Builtin>,
    pub action_path: Option<String>,
    pub oracle: Option<Builtin>,
    pub n_max: Option<usize>,
    pub big_n_max: usize,
    pub p: Exponent,
    pub tol: f64,
    pub seed: u64,
    pub out: Option<String>,
    pub pairs: Vec<(String, String)>,
    pub ladder_start: usize,
    pub ladder_growth: f64,
    pub phi: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            graph_path: None,
            builtin: None,
            action_path: None,
            oracle: None,
            n_max: None,
            big_n_max: DEFAULT_BIG_NMAX,
            p: Exponent::Finite(1.0),
            tol: DEFAULT_TOL,
            seed: 0,
            out: None,
            pairs: Vec::new(),
            ladder_start: DEFAULT_LADDER_START,
            ladder_growth: DEFAULT_LADDER_GROWTH,
            phi: None,
        }
    }
}

/// What a command produced. Nothing is written until [`Outcome::emit`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub files: Vec<(String, Vec<u8>)>,
}

impl Outcome {
    fn success(stdout: String, files: Vec<(String, Vec<u8>)>) -> Self {
        Outcome {
            exit_code: 0,
            stdout,
            files,
        }
    }

    /// Writes the files and returns the text meant for standard output.
    pub fn emit(&self) -> Result<&str, CliError> {
        for (path, bytes) in &self.files {
            write_file(path, bytes)?;
        }
        Ok(&self.stdout)
    }
}

fn load_graph(cfg: &RunConfig) -> Result<(LabelledGraph, Option<GroupOracle>), CliError> {
    match (&cfg.graph_path, &cfg.builtin) {
        (Some(_), Some(_)) => Err(CliError::usage("give either --graph or --builtin, not both")),
        (None, None) => Err(CliError::usage("one of --graph or --builtin is required")),
        (None, Some(b)) => {
            let (g, oracle) = b.load()?;
            Ok((g, Some(oracle)))
        }
        (Some(path), None) => {
            let text = read_file(path)?;
            let g = parse_graph(&text).map_err(|source| CliError::Parse {
                path: path.clone(),
                source,
            })?;
            Ok((g, None))
        }
    }
}

fn resolve_pairs(g: &LabelledGraph, pairs: &[(String, String)]) -> Result<Vec<(usize, usize, String)>, CliError> {
    pairs
        .iter()
        .map(|(u, v)| {
            let find = |name: &str| {
                g.vertex_index(name)
                    .ok_or_else(|| CliError::usage(format!("unknown vertex '{name}' in --pairs")))
            };
            Ok((find(u)?, find(v)?, format!("{u}->{v}")))
        })
        .collect()
}

/// CSV to the `--out` file, or to standard output.
fn csv_outcome(cfg: &RunConfig, csv: Vec<u8>) -> Outcome {
    match &cfg.out {
        Some(path) => Outcome::success(format!("wrote {path}\n"), vec![(path.clone(), csv)]),
        None => Outcome::success(String::from_utf8(csv).expect("CSV is UTF-8"), Vec::new()),
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if !(cfg.tol > 0.0 && cfg.tol.is_finite()) {
        return Err(CliError::usage("--tol must be a positive number"));
    }
    match cfg.command {
        Command::Count => cmd_count(cfg),
        Command::Analyze => cmd_analyze(cfg),
        Command::Verify => cmd_verify(cfg),
        Command::Simulate => cmd_simulate(cfg),
    }
}

pub fn cmd_count(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (g, _) = load_graph(cfg)?;
    let pairs = resolve_pairs(&g, &cfg.pairs)?;
    if pairs.is_empty() && g.start().is_none() {
        return Err(CliError::usage("no start vertex (sphere counts need one; or pass --pairs)"));
    }
    let n_max = cfg.n_max.unwrap_or(DEFAULT_NMAX);
    let table = count_table(&g, n_max);
    let csv = count_csv(table.spheres(), &table, &pairs)?;
    Ok(csv_outcome(cfg, csv))
}

pub fn cmd_analyze(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (g, _) = load_graph(cfg)?;
    let pairs = resolve_pairs(&g, &cfg.pairs)?;
    if pairs.is_empty() && g.start().is_none() {
        return Err(CliError::usage("no start vertex (sphere analysis needs one; or pass --pairs)"));
    }
    let n_max = cfg.n_max.unwrap_or(DEFAULT_NMAX);
    let opts = RegularityOptions {
        tol: cfg.tol,
        range: DEFAULT_RANGE.max(n_max),
        ..RegularityOptions::default()
    };
    let mut targets: Vec<(String, Option<(usize, usize)>)> = Vec::new();
    if g.start().is_some() {
        targets.push(("spheres".to_string(), None));
    }
    targets.extend(pairs.iter().map(|(u, v, name)| (name.clone(), Some((*u, *v)))));

    let mut rows = Vec::with_capacity(targets.len());
    for (name, pair) in targets {
        let d = analyze_target(&g, &opts, pair)?;
        let report = d.validate(n_max / 2, n_max, cfg.tol)?;
        rows.push((name, d, report));
    }
    Ok(csv_outcome(cfg, analyze_csv(&rows)?))
}

fn analyze_target(
    g: &LabelledGraph,
    opts: &RegularityOptions,
    pair: Option<(usize, usize)>,
) -> Result<RegularDescriptor, RegularityError> {
    match pair {
        Some((u, v)) => descriptor_of_pair(g, u, v, opts),
        None => descriptor_of_spheres(g, opts),
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (g, builtin_oracle) = load_graph(cfg)?;
    let oracle = match (&cfg.oracle, builtin_oracle) {
        (Some(o), _) => o.oracle()?,
        (None, Some(o)) => o,
        (None, None) => return Err(CliError::usage("--oracle is required with --graph")),
    };
    let n_max = cfg.n_max.unwrap_or(match &oracle {
        GroupOracle::FiniteGroup(t) => t.sphere_sizes().len() + 1,
        _ => DEFAULT_FREE_VERIFY_NMAX,
    });
    let report = verify_bijectivity(&g, &oracle, n_max, DEFAULT_PATH_CAP)?;
    let mut text = format!("{report}\n");
    let sizes: Vec<String> = report.spheres.iter().map(|s| s.to_string()).collect();
    writeln!(text, "spheres: {}", sizes.join(" ")).unwrap();
    let exit_code = if report.pass() { 0 } else { 1 };
    let mut files = Vec::new();
    if let Some(path) = &cfg.out {
        files.push((path.clone(), text.clone().into_bytes()));
    }
    Ok(Outcome {
        exit_code,
        stdout: text,
        files,
    })
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (g, _) = load_graph(cfg)?;
    if g.start().is_none() {
        return Err(CliError::usage("no start vertex"));
    }
    let action_path = cfg
        .action_path
        .as_ref()
        .ok_or_else(|| CliError::usage("--action is required for simulate"))?;
    let act: FiniteAction = parse_action(&read_file(action_path)?, &g).map_err(|source| CliError::Parse {
        path: action_path.clone(),
        source,
    })?;
    if cfg.big_n_max == 0 {
        return Err(CliError::usage("--Nmax must be at least 1"));
    }
    let space = act.space();
    let phi: Vec<f64> = match &cfg.phi {
        Some(values) => Observable::new(values.clone())?.into_values(),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            Observable::random(&mut rng, space.len(), -1.0, 1.0).into_values()
        }
    };
    let series = spherical_averages(&act, &g, &phi, cfg.big_n_max)?;
    let report = convergence_report(&series, space, cfg.p, cfg.ladder_start, cfg.ladder_growth)?;
    let probe = invariance_probe(&series, &act, &g, cfg.big_n_max)?;

    let prefix = cfg.out.clone().unwrap_or_else(|| "simulate".to_string());
    let series_path = format!("{prefix}_series.csv");
    let ladder_path = format!("{prefix}_ladder.csv");
    let files = vec![
        (series_path.clone(), series_csv(&series, space, cfg.p)?),
        (ladder_path.clone(), ladder_csv(&report, &probe)?),
    ];
    let mut text = String::new();
    let last = report.steps.last().expect("convergence report has steps");
    writeln!(
        text,
        "ladder {} -> {}: difference {} (p = {}), monotone {}",
        report.steps[0].from,
        last.to,
        format_float(last.difference),
        report.p,
        report.monotone
    )
    .unwrap();
    writeln!(text, "invariance at N = {}: {}", probe.big_n, format_float(probe.max)).unwrap();
    writeln!(text, "wrote {series_path} and {ladder_path}").unwrap();
    Ok(Outcome::success(text, files))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names() {
        assert_eq!("free_group:2".parse::<Builtin>(), Ok(Builtin::FreeGroup(2)));
        assert_eq!("table:g.txt".parse::<Builtin>(), Ok(Builtin::Table("g.txt".into())));
        assert!("free_group".parse::<Builtin>().is_err());
        assert!("torus:3".parse::<Builtin>().is_err());
    }

    #[test]
    fn exponents_and_pairs() {
        assert_eq!(parse_exponent("inf"), Ok(Exponent::Infinity));
        assert_eq!(parse_exponent("2"), Ok(Exponent::Finite(2.0)));
        assert!(parse_exponent("0.5").is_err());
        assert_eq!(parse_pair("u,v"), Ok(("u".into(), "v".into())));
        assert!(parse_pair("u").is_err());
    }

    #[test]
    fn count_free_group() {
        let mut cfg = RunConfig::new(Command::Count);
        cfg.builtin = Some(Builtin::FreeGroup(2));
        cfg.n_max = Some(10);
        let out = run(&cfg).unwrap();
        let last = out.stdout.lines().last().unwrap();
        assert_eq!(last, "10,78732");
    }

    #[test]
    fn spheres_need_a_start() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        std::fs::write(&path, "alphabet a\nvertex q\nedge q q a\n").unwrap();
        let mut cfg = RunConfig::new(Command::Count);
        cfg.graph_path = Some(path.to_string_lossy().into_owned());
        let err = run(&cfg).unwrap_err();
        assert!(err.to_string().contains("no start vertex"));
    }
}
