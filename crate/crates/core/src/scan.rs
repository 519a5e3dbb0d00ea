//! Scan engine behind the `ibm-qds` command line: settings resolution,
//! (N, alpha) sweeps and deterministic CSV / JSON emission.
//!
//! Settings are flat `key = value` pairs. The config file and command-line
//! flags use the same keys (`N`, `alpha`, `alpha-min`, `alpha-max`, `steps`,
//! `vmax`, `levels`, `tol`, `out`, `format`, `v`, `k`, `beta-max`, `grid`,
//! `phase-levels`, `verdicts`, `threads`); flags win over the file.
//!
//! Grid points are evaluated in parallel and emitted in (N, alpha) order, so
//! output bytes never depend on the worker count.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use crate::classical::potential_curve;
use crate::error::{Error, Result};
use crate::harmonic::{fit_harmonic, gaussian_profile, harmonic_be2};
use crate::observables::{
    be2_first_excited, classify_phase, diagonalize, excitation_spectrum, transition_width,
    ClassifierConfig, PhaseVerdict, SpectrumLevel, TransitionWidth,
};
use crate::oracle::{build_full_h, q_strength_ratio, so5_multiplicity, MAX_ORACLE_BOSONS};
use crate::rpa::{rpa_be2, rpa_solve};
use crate::sector::ModelParams;

/// Tolerance of the `oracle-check` command.
pub const ORACLE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Be2,
    Wavefunction,
    Potential,
    Classify,
    OracleCheck,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Be2 => "be2",
            Command::Wavefunction => "wavefunction",
            Command::Potential => "potential",
            Command::Classify => "classify",
            Command::OracleCheck => "oracle-check",
        }
    }
}

impl std::str::FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "spectrum" => Command::Spectrum,
            "be2" => Command::Be2,
            "wavefunction" => Command::Wavefunction,
            "potential" => Command::Potential,
            "classify" => Command::Classify,
            "oracle-check" => Command::OracleCheck,
            other => return Err(Error::Config(format!("unknown command {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Keys accepted in config files and as flags.
pub const KNOWN_KEYS: &[&str] = &[
    "N",
    "alpha",
    "alpha-min",
    "alpha-max",
    "steps",
    "vmax",
    "levels",
    "tol",
    "out",
    "format",
    "v",
    "k",
    "beta-max",
    "grid",
    "phase-levels",
    "verdicts",
    "threads",
];

/// Parses a flat `key = value` config file. `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let key = key.trim().trim_start_matches("--").to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::Config(format!(
                "line {}: unknown key {key:?}",
                lineno + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

/// Alpha values of a sweep: an explicit list or an inclusive uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub enum AlphaSpec {
    List(Vec<f64>),
    Grid { min: f64, max: f64, steps: usize },
}

impl AlphaSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            AlphaSpec::List(v) => v.clone(),
            AlphaSpec::Grid { min, max, steps } => (0..*steps)
                .map(|i| {
                    if i + 1 == *steps {
                        *max
                    } else {
                        min + (max - min) * i as f64 / (*steps - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

/// Fully resolved settings of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub n_list: Vec<u32>,
    pub alphas: AlphaSpec,
    pub v_max: u32,
    pub k_max: u32,
    pub classifier: ClassifierConfig,
    pub grid: f64,
    pub seniority: u32,
    pub state: usize,
    pub beta_max: f64,
    pub beta_steps: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub verdicts: bool,
    pub threads: Option<usize>,
}

fn parse_value<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| Error::Config(format!("invalid value {raw:?} for {key}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, raw: &str) -> Result<Vec<T>> {
    let items = raw
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(key, s))
        .collect::<Result<Vec<T>>>()?;
    if items.is_empty() {
        return Err(Error::Config(format!("{key} needs at least one value")));
    }
    Ok(items)
}

impl Settings {
    /// Resolves raw key/value pairs into settings for `command`, applying
    /// command-specific defaults and validating ranges.
    pub fn resolve(command: Command, raw: &BTreeMap<String, String>) -> Result<Self> {
        for key in raw.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown setting {key:?}")));
            }
        }
        let get = |k: &str| raw.get(k).map(String::as_str);

        let default_n: &[u32] = match command {
            Command::Wavefunction | Command::Potential => &[60],
            Command::Classify => &[20, 40, 80],
            Command::OracleCheck => &[1, 2, 3, 4, 5, 6],
            _ => &[10, 20, 40, 60],
        };
        let n_list = match get("N") {
            Some(s) => parse_list("N", s)?,
            None => default_n.to_vec(),
        };
        if n_list.contains(&0) {
            return Err(Error::Config("N must be at least 1".into()));
        }

        let steps = match get("steps") {
            Some(s) => parse_value("steps", s)?,
            None => 101,
        };
        let alphas = if let Some(s) = get("alpha") {
            AlphaSpec::List(parse_list("alpha", s)?)
        } else {
            match command {
                Command::Wavefunction => AlphaSpec::List(vec![1.0]),
                Command::Potential | Command::OracleCheck => {
                    AlphaSpec::List(vec![0.0, 0.25, 0.5, 0.75, 1.0])
                }
                _ => AlphaSpec::Grid {
                    min: get("alpha-min")
                        .map(|s| parse_value("alpha-min", s))
                        .transpose()?
                        .unwrap_or(0.0),
                    max: get("alpha-max")
                        .map(|s| parse_value("alpha-max", s))
                        .transpose()?
                        .unwrap_or(1.0),
                    steps,
                },
            }
        };
        match &alphas {
            AlphaSpec::List(v) => {
                if v.iter().any(|a| !(0.0..=1.0).contains(a)) {
                    return Err(Error::Config("alpha values must lie in [0, 1]".into()));
                }
            }
            AlphaSpec::Grid { min, max, steps } => {
                if *steps < 2 {
                    return Err(Error::Config("steps must be at least 2".into()));
                }
                if !(0.0 <= *min && min < max && *max <= 1.0) {
                    return Err(Error::Config("need 0 <= alpha-min < alpha-max <= 1".into()));
                }
            }
        }

        let format = match get("format").unwrap_or("csv") {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => return Err(Error::Config(format!("unknown format {other:?}"))),
        };
        let tolerance: f64 = get("tol")
            .map(|s| parse_value("tol", s))
            .transpose()?
            .unwrap_or(0.05);
        if !(tolerance > 0.0 && tolerance < 1.0) {
            return Err(Error::Config("tol must lie in (0, 1)".into()));
        }
        let phase_levels: usize = get("phase-levels")
            .map(|s| parse_value("phase-levels", s))
            .transpose()?
            .unwrap_or(4);
        if phase_levels == 0 {
            return Err(Error::Config("phase-levels must be at least 1".into()));
        }
        let grid: f64 = get("grid")
            .map(|s| parse_value("grid", s))
            .transpose()?
            .unwrap_or(0.01);
        if !(grid > 0.0 && grid <= 0.01) {
            return Err(Error::Config("grid must lie in (0, 0.01]".into()));
        }
        let k_max: u32 = get("levels")
            .map(|s| parse_value("levels", s))
            .transpose()?
            .unwrap_or(3);
        if k_max == 0 {
            return Err(Error::Config("levels must be at least 1".into()));
        }
        let beta_max: f64 = get("beta-max")
            .map(|s| parse_value("beta-max", s))
            .transpose()?
            .unwrap_or(1.2);
        if beta_max.is_nan() || beta_max <= 0.0 {
            return Err(Error::Config("beta-max must be positive".into()));
        }
        let verdicts = match get("verdicts") {
            None => false,
            Some(s) => parse_value::<bool>("verdicts", s)?,
        };
        let threads = get("threads")
            .map(|s| parse_value::<usize>("threads", s))
            .transpose()?;
        if threads == Some(0) {
            return Err(Error::Config("threads must be at least 1".into()));
        }
        if command == Command::OracleCheck && n_list.iter().any(|&n| n > MAX_ORACLE_BOSONS) {
            return Err(Error::Config(format!(
                "oracle-check supports N <= {MAX_ORACLE_BOSONS}"
            )));
        }
        if command == Command::Wavefunction && (n_list.len() != 1 || alphas.values().len() != 1) {
            return Err(Error::Config(
                "wavefunction takes exactly one N and one alpha".into(),
            ));
        }

        Ok(Settings {
            n_list,
            alphas,
            v_max: get("vmax")
                .map(|s| parse_value("vmax", s))
                .transpose()?
                .unwrap_or(2),
            k_max,
            classifier: ClassifierConfig {
                tolerance,
                levels: phase_levels,
            },
            grid,
            seniority: get("v")
                .map(|s| parse_value("v", s))
                .transpose()?
                .unwrap_or(0),
            state: get("k")
                .map(|s| parse_value("k", s))
                .transpose()?
                .unwrap_or(0),
            beta_max,
            beta_steps: steps.max(2),
            format,
            out: get("out").map(PathBuf::from),
            verdicts,
            threads,
        })
    }
}

/// Formats with 12 significant digits, `.` decimal, no locale; integral and
/// short values lose trailing zeros.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if (-5..12).contains(&exp) {
        trim(&format!("{:.*}", (11 - exp) as usize, x))
    } else {
        format!("{}e{}", trim(mantissa), exp)
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

/// JSON cannot carry infinities; out-of-domain deviations become null.
fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// One (N, alpha) point of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    #[serde(rename = "N")]
    pub n_bosons: u32,
    pub alpha: f64,
    pub levels: Vec<SpectrumLevel>,
    pub be2_exact: f64,
    pub be2_rpa: Option<f64>,
    pub be2_harmonic: Option<f64>,
    pub epsilon_rpa: Option<f64>,
    pub omega_harmonic: Option<f64>,
    pub verdict: VerdictRecord,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerdictRecord {
    pub label: &'static str,
    pub u5_deviation: Option<f64>,
    pub o6_deviation: Option<f64>,
    pub tolerance: f64,
}

impl From<PhaseVerdict> for VerdictRecord {
    fn from(v: PhaseVerdict) -> Self {
        Self {
            label: v.label.as_str(),
            u5_deviation: finite(v.u5_deviation),
            o6_deviation: finite(v.o6_deviation),
            tolerance: v.tolerance,
        }
    }
}

fn harmonic_or_none<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(Error::HarmonicBreakdown { .. }) | Err(Error::Domain(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Evaluates every grid point of one (N, alpha) sweep.
pub fn scan_point(params: &ModelParams, settings: &Settings) -> Result<ScanRecord> {
    let alpha = params.alpha();
    let v_max = settings.v_max.min(params.n_bosons());
    let rpa = rpa_solve(alpha).ok();
    let omega = if alpha > 0.5 {
        harmonic_or_none(fit_harmonic(params, 0))?.map(|m| m.omega)
    } else {
        None
    };
    let be2_harmonic = if omega.is_some() {
        harmonic_or_none(harmonic_be2(params))?
    } else {
        None
    };
    Ok(ScanRecord {
        n_bosons: params.n_bosons(),
        alpha,
        levels: excitation_spectrum(params, v_max, settings.k_max)?,
        be2_exact: be2_first_excited(params)?,
        be2_rpa: rpa.map(|_| rpa_be2(alpha)).transpose()?,
        be2_harmonic,
        epsilon_rpa: rpa.map(|r| r.epsilon),
        omega_harmonic: omega,
        verdict: classify_phase(params, &settings.classifier)?.into(),
    })
}

/// Sweep over `settings.n_list x settings.alphas`, ordered by (N, alpha).
pub fn scan(settings: &Settings) -> Result<Vec<ScanRecord>> {
    let alphas = settings.alphas.values();
    let points: Vec<(u32, f64)> = settings
        .n_list
        .iter()
        .flat_map(|&n| alphas.iter().map(move |&a| (n, a)))
        .collect();
    let mut records = points
        .par_iter()
        .map(|&(n, a)| scan_point(&ModelParams::new(n, a)?, settings))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| {
        a.n_bosons
            .cmp(&b.n_bosons)
            .then(a.alpha.total_cmp(&b.alpha))
    });
    Ok(records)
}

/// `(n, exact coefficient, Gaussian profile value)` rows of one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavefunctionRow {
    pub n: u32,
    pub coefficient: f64,
    pub gaussian: Option<f64>,
}

pub fn wavefunction_table(
    params: &ModelParams,
    seniority: u32,
    k: usize,
) -> Result<Vec<WavefunctionRow>> {
    let dec = diagonalize(params, seniority)?;
    let coeffs = dec.eigenvector(k)?;
    let gaussian = if params.alpha() > 0.5 {
        harmonic_or_none(fit_harmonic(params, seniority))?.map(|m| gaussian_profile(&m, k as u32))
    } else {
        None
    };
    Ok(dec
        .sector()
        .n_values()
        .enumerate()
        .map(|(i, n)| WavefunctionRow {
            n,
            coefficient: coeffs[i],
            gaussian: gaussian.as_ref().map(|g| g[i]),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialRow {
    pub alpha: f64,
    pub beta: f64,
    pub potential: f64,
}

pub fn potential_table(
    alphas: &[f64],
    n_bosons: u32,
    beta_max: f64,
    steps: usize,
) -> Result<Vec<PotentialRow>> {
    let mut rows = Vec::new();
    for &alpha in alphas {
        let curve = potential_curve(alpha, n_bosons, beta_max, steps)?;
        rows.extend(
            curve
                .beta_values
                .iter()
                .zip(&curve.v_values)
                .map(|(&beta, &potential)| PotentialRow {
                    alpha,
                    beta,
                    potential,
                }),
        );
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WidthRecord {
    #[serde(rename = "N")]
    pub n_bosons: u32,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub width: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictRow {
    #[serde(rename = "N")]
    pub n_bosons: u32,
    pub alpha: f64,
    #[serde(flatten)]
    pub verdict: VerdictRecord,
}

/// Transition widths for every N of the settings, ordered by N.
pub fn classify_table(settings: &Settings) -> Result<Vec<TransitionWidth>> {
    settings
        .n_list
        .iter()
        .map(|&n| transition_width(n, &settings.classifier, settings.grid))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRow {
    #[serde(rename = "N")]
    pub n_bosons: u32,
    pub alpha: f64,
    pub dimension: usize,
    pub spectrum_deviation: f64,
    pub be2_oracle: f64,
    pub be2_sector: f64,
    pub be2_deviation: f64,
    pub pass: bool,
}

/// Compares the m-scheme construction with the sector route.
pub fn oracle_check(params: &ModelParams) -> Result<OracleRow> {
    let nb = params.n_bosons();
    let full = build_full_h(params)?.spectrum();
    let mut union = Vec::with_capacity(full.len());
    for v in 0..=nb {
        let dec = diagonalize(params, v)?;
        for &e in dec.eigenvalues() {
            union.extend(std::iter::repeat_n(e, so5_multiplicity(v)));
        }
    }
    union.sort_by(f64::total_cmp);
    let spectrum_deviation = if union.len() == full.len() {
        full.iter()
            .zip(&union)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let be2_oracle = q_strength_ratio(params)?;
    let be2_sector = be2_first_excited(params)?;
    let be2_deviation = (be2_oracle - be2_sector).abs();
    Ok(OracleRow {
        n_bosons: nb,
        alpha: params.alpha(),
        dimension: full.len(),
        spectrum_deviation,
        be2_oracle,
        be2_sector,
        be2_deviation,
        pass: spectrum_deviation <= ORACLE_TOL && be2_deviation <= ORACLE_TOL,
    })
}

/// Result of a command: whether every check it ran passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub passed: bool,
}

#[derive(Serialize)]
struct JsonDoc<'a, T: Serialize> {
    command: &'a str,
    rows: T,
}

fn write_json<T: Serialize>(out: &mut dyn Write, command: Command, rows: T) -> Result<()> {
    serde_json::to_writer_pretty(
        &mut *out,
        &JsonDoc {
            command: command.name(),
            rows,
        },
    )?;
    writeln!(out)?;
    Ok(())
}

fn write_csv(
    out: &mut dyn Write,
    header: &[String],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Header of the `spectrum` CSV.
pub fn spectrum_header(settings: &Settings) -> Vec<String> {
    let mut h = vec!["N".to_string(), "alpha".to_string()];
    for v in 0..=settings.v_max {
        for k in 0..settings.k_max {
            h.push(format!("ex_v{v}_k{k}"));
        }
    }
    for k in 1..=settings.k_max {
        h.push(format!("rpa_k{k}"));
    }
    for k in 1..=settings.k_max {
        h.push(format!("harmonic_k{k}"));
    }
    h.extend(
        ["epsilon_rpa", "omega_harmonic", "be2_exact", "verdict"]
            .iter()
            .map(|s| s.to_string()),
    );
    h
}

pub const BE2_HEADER: &[&str] = &[
    "N",
    "alpha",
    "be2_exact",
    "be2_rpa",
    "be2_harmonic",
    "epsilon_rpa",
    "omega_harmonic",
];

/// Runs `command`, writing its table to `out`.
pub fn run_command(command: Command, settings: &Settings, out: &mut dyn Write) -> Result<Outcome> {
    let passed = true;
    match command {
        Command::Spectrum => {
            let records = scan(settings)?;
            match settings.format {
                Format::Json => write_json(out, command, &records)?,
                Format::Csv => {
                    let rows = records.iter().map(|r| {
                        let mut row = vec![r.n_bosons.to_string(), fmt_num(r.alpha)];
                        for v in 0..=settings.v_max {
                            for k in 0..settings.k_max {
                                let level = r.levels.iter().find(|l| l.v == v && l.k == k);
                                row.push(fmt_opt(level.map(|l| l.excitation)));
                            }
                        }
                        for k in 1..=settings.k_max {
                            row.push(fmt_opt(r.epsilon_rpa.map(|e| k as f64 * e)));
                        }
                        for k in 1..=settings.k_max {
                            row.push(fmt_opt(r.omega_harmonic.map(|w| k as f64 * w)));
                        }
                        row.push(fmt_opt(r.epsilon_rpa));
                        row.push(fmt_opt(r.omega_harmonic));
                        row.push(fmt_num(r.be2_exact));
                        row.push(r.verdict.label.to_string());
                        row
                    });
                    write_csv(out, &spectrum_header(settings), rows)?;
                }
            }
        }
        Command::Be2 => {
            let records = scan(settings)?;
            match settings.format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Be2Row {
                        #[serde(rename = "N")]
                        n_bosons: u32,
                        alpha: f64,
                        be2_exact: f64,
                        be2_rpa: Option<f64>,
                        be2_harmonic: Option<f64>,
                        epsilon_rpa: Option<f64>,
                        omega_harmonic: Option<f64>,
                    }
                    let rows: Vec<Be2Row> = records
                        .iter()
                        .map(|r| Be2Row {
                            n_bosons: r.n_bosons,
                            alpha: r.alpha,
                            be2_exact: r.be2_exact,
                            be2_rpa: r.be2_rpa,
                            be2_harmonic: r.be2_harmonic,
                            epsilon_rpa: r.epsilon_rpa,
                            omega_harmonic: r.omega_harmonic,
                        })
                        .collect();
                    write_json(out, command, rows)?;
                }
                Format::Csv => {
                    let header: Vec<String> = BE2_HEADER.iter().map(|s| s.to_string()).collect();
                    let rows = records.iter().map(|r| {
                        vec![
                            r.n_bosons.to_string(),
                            fmt_num(r.alpha),
                            fmt_num(r.be2_exact),
                            fmt_opt(r.be2_rpa),
                            fmt_opt(r.be2_harmonic),
                            fmt_opt(r.epsilon_rpa),
                            fmt_opt(r.omega_harmonic),
                        ]
                    });
                    write_csv(out, &header, rows)?;
                }
            }
        }
        Command::Wavefunction => {
            let params = ModelParams::new(settings.n_list[0], settings.alphas.values()[0])?;
            let rows = wavefunction_table(&params, settings.seniority, settings.state)?;
            match settings.format {
                Format::Json => write_json(out, command, &rows)?,
                Format::Csv => {
                    let header = ["n", "coefficient", "gaussian"].map(String::from);
                    let lines = rows.iter().map(|r| {
                        vec![r.n.to_string(), fmt_num(r.coefficient), fmt_opt(r.gaussian)]
                    });
                    write_csv(out, &header, lines)?;
                }
            }
        }
        Command::Potential => {
            let rows = potential_table(
                &settings.alphas.values(),
                settings.n_list[0],
                settings.beta_max,
                settings.beta_steps,
            )?;
            match settings.format {
                Format::Json => write_json(out, command, &rows)?,
                Format::Csv => {
                    let header = ["alpha", "beta", "potential"].map(String::from);
                    let lines = rows
                        .iter()
                        .map(|r| vec![fmt_num(r.alpha), fmt_num(r.beta), fmt_num(r.potential)]);
                    write_csv(out, &header, lines)?;
                }
            }
        }
        Command::Classify => {
            let widths = classify_table(settings)?;
            let width_rows: Vec<WidthRecord> = widths
                .iter()
                .map(|w| WidthRecord {
                    n_bosons: w.n_bosons,
                    alpha_lo: w.alpha_lo,
                    alpha_hi: w.alpha_hi,
                    width: w.width,
                    tolerance: w.tolerance,
                })
                .collect();
            let verdict_rows: Vec<VerdictRow> = widths
                .iter()
                .flat_map(|w| {
                    w.verdicts.iter().map(|&(alpha, v)| VerdictRow {
                        n_bosons: w.n_bosons,
                        alpha,
                        verdict: v.into(),
                    })
                })
                .collect();
            match settings.format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct ClassifyDoc {
                        widths: Vec<WidthRecord>,
                        verdicts: Vec<VerdictRow>,
                    }
                    write_json(
                        out,
                        command,
                        ClassifyDoc {
                            widths: width_rows,
                            verdicts: verdict_rows,
                        },
                    )?;
                }
                Format::Csv if settings.verdicts => {
                    let header = [
                        "N",
                        "alpha",
                        "label",
                        "u5_deviation",
                        "o6_deviation",
                        "tolerance",
                    ]
                    .map(String::from);
                    let lines = widths.iter().flat_map(|w| {
                        w.verdicts.iter().map(move |(alpha, v)| {
                            vec![
                                w.n_bosons.to_string(),
                                fmt_num(*alpha),
                                v.label.to_string(),
                                fmt_num(v.u5_deviation),
                                fmt_num(v.o6_deviation),
                                fmt_num(v.tolerance),
                            ]
                        })
                    });
                    write_csv(out, &header, lines)?;
                }
                Format::Csv => {
                    let header =
                        ["N", "alpha_lo", "alpha_hi", "width", "tolerance"].map(String::from);
                    let lines = width_rows.iter().map(|w| {
                        vec![
                            w.n_bosons.to_string(),
                            fmt_num(w.alpha_lo),
                            fmt_num(w.alpha_hi),
                            fmt_num(w.width),
                            fmt_num(w.tolerance),
                        ]
                    });
                    write_csv(out, &header, lines)?;
                }
            }
        }
        Command::OracleCheck => {
            let alphas = settings.alphas.values();
            let points: Vec<(u32, f64)> = settings
                .n_list
                .iter()
                .flat_map(|&n| alphas.iter().map(move |&a| (n, a)))
                .collect();
            let rows = points
                .par_iter()
                .map(|&(n, a)| oracle_check(&ModelParams::new(n, a)?))
                .collect::<Result<Vec<_>>>()?;
            let all_pass = rows.iter().all(|r| r.pass);
            match settings.format {
                Format::Json => write_json(out, command, &rows)?,
                Format::Csv => {
                    let header = [
                        "N",
                        "alpha",
                        "dimension",
                        "spectrum_deviation",
                        "be2_oracle",
                        "be2_sector",
                        "be2_deviation",
                        "pass",
                    ]
                    .map(String::from);
                    let lines = rows.iter().map(|r| {
                        vec![
                            r.n_bosons.to_string(),
                            fmt_num(r.alpha),
                            r.dimension.to_string(),
                            fmt_num(r.spectrum_deviation),
                            fmt_num(r.be2_oracle),
                            fmt_num(r.be2_sector),
                            fmt_num(r.be2_deviation),
                            r.pass.to_string(),
                        ]
                    });
                    write_csv(out, &header, lines)?;
                }
            }
            return Ok(Outcome { passed: all_pass });
        }
    }
    Ok(Outcome { passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(100.0), "100");
        assert_eq!(fmt_num(1.5), "1.5");
        assert_eq!(fmt_num(61.0 / 60.0), "1.01666666667");
        assert_eq!(fmt_num(-15.0), "-15");
        assert_eq!(fmt_num(1e-7), "1e-7");
        assert_eq!(fmt_num(1.234e15), "1.234e15");
        assert_eq!(fmt_num(122.47448713915891), "122.474487139");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn config_parsing() {
        let m =
            parse_config("# sweep\nN = 10,20\n--tol=0.1  # tighter\n\nformat = json\n").unwrap();
        assert_eq!(m["N"], "10,20");
        assert_eq!(m["tol"], "0.1");
        assert_eq!(m["format"], "json");
        assert!(matches!(parse_config("bogus = 1"), Err(Error::Config(_))));
        assert!(matches!(parse_config("N 10"), Err(Error::Config(_))));
    }

    #[test]
    fn defaults() {
        let s = Settings::resolve(Command::Be2, &BTreeMap::new()).unwrap();
        assert_eq!(s.n_list, vec![10, 20, 40, 60]);
        assert_eq!(s.alphas.values().len(), 101);
        assert_eq!(s.alphas.values()[100], 1.0);
        assert_eq!(s.classifier, ClassifierConfig::default());
        assert_eq!(s.format, Format::Csv);
    }

    #[test]
    fn invalid_settings() {
        for pairs in [
            vec![("steps", "1")],
            vec![("alpha-min", "0.6"), ("alpha-max", "0.4")],
            vec![("alpha", "1.2")],
            vec![("format", "xml")],
            vec![("tol", "0")],
            vec![("N", "0")],
            vec![("N", "ten")],
            vec![("grid", "0.05")],
        ] {
            assert!(
                matches!(
                    Settings::resolve(Command::Spectrum, &raw(&pairs)),
                    Err(Error::Config(_))
                ),
                "{pairs:?}"
            );
        }
        assert!(Settings::resolve(Command::OracleCheck, &raw(&[("N", "9")])).is_err());
        assert!(Settings::resolve(Command::Wavefunction, &raw(&[("N", "10,20")])).is_err());
    }

    #[test]
    fn record_domains() {
        let s = Settings::resolve(
            Command::Spectrum,
            &raw(&[("N", "20"), ("alpha", "0,0.25,0.5,0.8")]),
        )
        .unwrap();
        let recs = scan(&s).unwrap();
        assert_eq!(recs.len(), 4);
        for r in &recs {
            assert_eq!(r.be2_rpa.is_some(), r.alpha < 0.5);
            assert_eq!(r.epsilon_rpa.is_some(), r.alpha < 0.5);
            assert_eq!(r.omega_harmonic.is_some(), r.alpha > 0.5);
            assert_eq!(r.be2_harmonic.is_some(), r.alpha > 0.5);
        }
        assert_eq!(recs[2].verdict.label, "transition");
    }
}
