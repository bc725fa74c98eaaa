//! Scenario evaluation and table rendering.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{logspace, parse_config, ScenarioConfig, ScenarioKind};
use crate::cavity::{self, WaveVector};
use crate::error::{Error, Result};
use crate::phase_matching;
use crate::state::{self, BipartiteState};
use crate::witness::{self, CertifyOptions};

/// Window reached by the derived grid when the media do not dephase.
const FALLBACK_DT_MAX: f64 = 1.0;

const GENERATOR: &str = concat!("polariton-sn ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(usize),
}

impl Cell {
    /// Fixed 12-significant-digit scientific notation; integers verbatim.
    pub fn render(&self) -> String {
        match *self {
            Cell::Real(x) => format_real(x),
            Cell::Int(n) => n.to_string(),
        }
    }

    fn to_json(self) -> Value {
        match self {
            Cell::Real(x) => {
                let rounded: f64 = format_real(x).parse().unwrap_or(x);
                json!(rounded)
            }
            Cell::Int(n) => json!(n),
        }
    }
}

fn format_real(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!("format: expected csv or json, got `{s}`"))),
        }
    }
}

/// Result table together with the fully resolved config that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioTable {
    pub config: ScenarioConfig,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ScenarioTable {
    /// Index of `name` in the column list.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# generator: {GENERATOR}");
        let _ = writeln!(out, "# scenario: {}", self.config.scenario);
        let _ = writeln!(out, "# units: energies in eV, wave numbers in k0 = E_C(0), times in t0 = 1/eV");
        let _ = writeln!(out, "# config: {}", self.config.to_json());
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let config: Value = serde_json::from_str(&self.config.to_json()).expect("config is valid JSON");
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(|c| c.to_json()).collect())).collect();
        let doc = json!({
            "generator": GENERATOR,
            "scenario": self.config.scenario.name(),
            "config": config,
            "columns": self.columns,
            "rows": rows,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("table serializes");
        text.push('\n');
        text
    }
}

/// Recovers the resolved config embedded in a CSV or JSON output file.
pub fn extract_embedded_config(text: &str) -> Result<ScenarioConfig> {
    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed output file: {e}")))?;
        let config = doc.get("config").ok_or_else(|| Error::Config("output file has no `config` entry".into()))?;
        return parse_config(&config.to_string());
    }
    let line = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.strip_prefix("# config: "))
        .ok_or_else(|| Error::Config("output file has no `# config:` header line".into()))?;
    parse_config(line)
}

/// Evaluates the scenario on the current rayon pool. Rows come back in grid
/// order regardless of scheduling.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioTable> {
    match config.scenario {
        ScenarioKind::HopfieldSweep => hopfield_sweep(config),
        ScenarioKind::BetaMap => beta_map(config),
        ScenarioKind::SnVsDt => sn_vs_dt(config),
    }
}

/// Runs the scenario and writes the rendered table to `path`.
pub fn run_to_path(config: &ScenarioConfig, format: OutputFormat, path: &Path) -> Result<ScenarioTable> {
    let table = run_scenario(config)?;
    std::fs::write(path, table.render(format))
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
    Ok(table)
}

fn columns(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn hopfield_sweep(config: &ScenarioConfig) -> Result<ScenarioTable> {
    let items: Vec<(f64, f64)> =
        config.deltas().into_iter().flat_map(|d| config.k_grid.iter().map(move |&k| (d, k))).collect();
    let base = config.cavity.params()?;
    let rows = items
        .par_iter()
        .map(|&(delta, k)| {
            let p = base.with_delta(delta)?;
            let m = cavity::hopfield(&p, WaveVector::in_k0(&p, k, 0.0));
            Ok(vec![Cell::Real(k), Cell::Real(delta), Cell::Real(m.m11 * m.m11), Cell::Real(m.m12 * m.m12)])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScenarioTable { config: config.clone(), columns: columns(&["k_over_k0", "delta", "m11_sq", "m12_sq"]), rows })
}

fn pump_direction(config: &ScenarioConfig) -> [f64; 2] {
    config.pumps.as_ref().map(|p| p.direction).unwrap_or([1.0, 0.0])
}

fn beta_map(config: &ScenarioConfig) -> Result<ScenarioTable> {
    let ps = config.saturation_ratios()?;
    let items: Vec<(f64, f64)> = config.deltas().into_iter().flat_map(|d| ps.iter().map(move |&p| (d, p))).collect();
    let base = config.cavity.params()?;
    let [dx, dy] = pump_direction(config);
    let norm = dx.hypot(dy);
    let rows = items
        .par_iter()
        .map(|&(delta, p_s)| {
            let p = base.with_delta(delta)?.with_saturation_ratio(p_s)?;
            let kp = WaveVector::in_k0(&p, config.kp * dx / norm, config.kp * dy / norm);
            let pair = phase_matching::pair_for_pump(&p, kp)?;
            Ok(vec![Cell::Real(delta), Cell::Real(p_s), Cell::Real(pair.beta * pair.beta)])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScenarioTable { config: config.clone(), columns: columns(&["delta", "p_s", "beta_sq"]), rows })
}

/// Emitted state for one `(delta, p_s)` point of an sn_vs_dt run.
pub fn scenario_state(config: &ScenarioConfig, delta: f64, p_s: f64) -> Result<BipartiteState> {
    let pumps = config
        .pumps
        .as_ref()
        .ok_or_else(|| Error::Config("missing required field(s): pumps".into()))?
        .spec()?;
    let p = config.cavity.params()?.with_delta(delta)?.with_saturation_ratio(p_s)?;
    let pairs = phase_matching::build_pairs(&p, &pumps)?;
    BipartiteState::from_pairs(&pairs)
}

/// Default window grid: `0` followed by `points - 1` log-spaced values that
/// end at `dt_max = 40 pi / x_max` and start `decades` below it, where
/// `x_max` is the largest relative propagation energy difference of the
/// least dispersive state. Every state then reaches `x dt / 2 >= 20 pi`.
pub fn default_dt_grid(states: &[BipartiteState], config: &ScenarioConfig) -> Result<Vec<f64>> {
    let media = config.media()?;
    let spread = states
        .iter()
        .map(|s| {
            let eps = state::relative_energies(s, media);
            let hi = eps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = eps.iter().copied().fold(f64::INFINITY, f64::min);
            hi - lo
        })
        .filter(|&x| x > 0.0)
        .fold(f64::INFINITY, f64::min);
    let dt_max = if spread.is_finite() { 40.0 * PI / spread } else { FALLBACK_DT_MAX };
    let lo = dt_max * 10f64.powf(-config.dt_decades);
    let mut grid = vec![0.0];
    grid.extend(logspace(lo, dt_max, config.dt_points - 1));
    Ok(grid)
}

fn sn_vs_dt(config: &ScenarioConfig) -> Result<ScenarioTable> {
    let combos: Vec<(f64, f64)> = {
        let ps = config.saturation_ratios()?;
        config.deltas().into_iter().flat_map(|d| ps.clone().into_iter().map(move |p| (d, p))).collect()
    };
    let states =
        combos.par_iter().map(|&(d, p)| scenario_state(config, d, p)).collect::<Result<Vec<BipartiteState>>>()?;
    let dim = states[0].dim();

    let mut resolved = config.clone();
    let dts = match &config.dt_grid {
        Some(g) => g.clone(),
        None => default_dt_grid(&states, config)?,
    };
    resolved.dt_grid = Some(dts.clone());

    let media = config.media()?;
    let options = CertifyOptions {
        rank_tolerance: config.tolerances.rank,
        tolerance: config.tolerances.certification,
        mode: config.search,
    };
    let items: Vec<(usize, f64)> = (0..combos.len()).flat_map(|c| dts.iter().map(move |&dt| (c, dt))).collect();
    let rows = items
        .par_iter()
        .map(|&(c, dt)| {
            let rho = state::dephased_density_window(&states[c], media, config.t_mid, dt)?;
            let cert = witness::certify_sn_with(&rho, options)?;
            let (delta, p_s) = combos[c];
            let mut row = vec![Cell::Real(dt), Cell::Real(delta), Cell::Real(p_s), Cell::Int(cert.certified_sn)];
            row.extend(cert.f_values.iter().map(|&f| Cell::Real(f)));
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut names = columns(&["dt_over_t0", "delta", "p_s", "certified_sn"]);
    names.extend((1..=dim).map(|r| format!("f_{r}")));
    Ok(ScenarioTable { config: resolved, columns: names, rows })
}
