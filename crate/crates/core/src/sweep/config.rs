//! JSON scenario configuration.
//!
//! Parsing goes through a permissive raw layer (unknown keys rejected, every
//! field optional) followed by a validator that reports problems by dotted
//! path. Grids accept either an explicit list or
//! `{"start": a, "stop": b, "points": n, "spacing": "linear" | "log"}` and are
//! resolved to explicit lists, so the resolved config reproduces a run
//! without re-deriving anything.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cavity::CavityParams;
use crate::error::{Error, Result};
use crate::phase_matching::PumpSpec;
use crate::state::{Media, MediumDispersion};
use crate::witness::{SearchMode, DEFAULT_CERTIFICATION_TOLERANCE, DEFAULT_RANK_TOLERANCE};

pub const DEFAULT_EC0: f64 = 1.5;
pub const DEFAULT_OMEGA_R: f64 = 0.002;
pub const DEFAULT_EB: f64 = 0.01;
pub const DEFAULT_SLOPE_MINUS: f64 = 0.5;
pub const DEFAULT_SLOPE_PLUS: f64 = 1.0;
pub const DEFAULT_DT_POINTS: usize = 200;
pub const DEFAULT_DT_DECADES: f64 = 8.0;
pub const DEFAULT_BETA_MAP_KP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    HopfieldSweep,
    BetaMap,
    SnVsDt,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [ScenarioKind::HopfieldSweep, ScenarioKind::BetaMap, ScenarioKind::SnVsDt];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::HopfieldSweep => "hopfield_sweep",
            ScenarioKind::BetaMap => "beta_map",
            ScenarioKind::SnVsDt => "sn_vs_dt",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            Error::Config(format!("scenario: unknown scenario `{s}` (expected hopfield_sweep, beta_map or sn_vs_dt)"))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityConfig {
    pub ec0: f64,
    pub omega_r: f64,
    pub eb: f64,
    pub delta: f64,
    /// `p_s` override; `2 omega_r / eb` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saturation_ratio: Option<f64>,
}

impl Default for CavityConfig {
    fn default() -> Self {
        CavityConfig { ec0: DEFAULT_EC0, omega_r: DEFAULT_OMEGA_R, eb: DEFAULT_EB, delta: 0.0, saturation_ratio: None }
    }
}

impl CavityConfig {
    pub fn params(&self) -> Result<CavityParams> {
        let p = CavityParams::new(self.ec0, self.omega_r, self.eb, self.delta)?;
        match self.saturation_ratio {
            Some(ps) => p.with_saturation_ratio(ps),
            None => Ok(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PumpConfig {
    pub direction: [f64; 2],
    /// Pump magnitudes in units of `k0`.
    pub magnitudes: Vec<f64>,
}

impl PumpConfig {
    pub fn spec(&self) -> Result<PumpSpec> {
        PumpSpec::new(self.direction, self.magnitudes.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Margin in `f_r < <L> - certification`.
    pub certification: f64,
    /// Support threshold relative to the largest eigenvalue of the state.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { certification: DEFAULT_CERTIFICATION_TOLERANCE, rank: DEFAULT_RANK_TOLERANCE }
    }
}

/// Validated configuration with every default applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub cavity: CavityConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pumps: Option<PumpConfig>,
    pub medium_slope_minus: f64,
    pub medium_slope_plus: f64,
    pub t_mid: f64,
    /// Window lengths in units of `t0 = 1/eV`; derived from the state when
    /// absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_grid: Option<Vec<f64>>,
    pub dt_points: usize,
    pub dt_decades: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub delta_grid: Vec<f64>,
    /// Saturation ratios; empty means the cavity value.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p_s_grid: Vec<f64>,
    /// `|k| / k0` for the Hopfield sweep.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub k_grid: Vec<f64>,
    /// `|kp| / k0` for the beta map.
    pub kp: f64,
    pub tolerances: Tolerances,
    pub search: SearchMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
}

impl ScenarioConfig {
    /// Defaults for `kind`, before any document is applied.
    pub fn defaults(kind: ScenarioKind) -> Self {
        let (delta_grid, p_s_grid, k_grid) = match kind {
            ScenarioKind::HopfieldSweep => (vec![-1.0, 0.0, 1.0], vec![], linspace(0.0, 3.0, 301)),
            ScenarioKind::BetaMap => (linspace(-2.0, 2.0, 101), linspace(0.0, 1.0, 101), vec![]),
            ScenarioKind::SnVsDt => (vec![], vec![], vec![]),
        };
        ScenarioConfig {
            scenario: kind,
            cavity: CavityConfig::default(),
            pumps: None,
            medium_slope_minus: DEFAULT_SLOPE_MINUS,
            medium_slope_plus: DEFAULT_SLOPE_PLUS,
            t_mid: 0.0,
            dt_grid: None,
            dt_points: DEFAULT_DT_POINTS,
            dt_decades: DEFAULT_DT_DECADES,
            delta_grid,
            p_s_grid,
            k_grid,
            kp: DEFAULT_BETA_MAP_KP,
            tolerances: Tolerances::default(),
            search: SearchMode::Pruned,
            output_path: None,
        }
    }

    pub fn media(&self) -> Result<Media> {
        Ok(Media::new(MediumDispersion::new(self.medium_slope_minus)?, MediumDispersion::new(self.medium_slope_plus)?))
    }

    /// Detunings actually swept: the grid, or the cavity value.
    pub fn deltas(&self) -> Vec<f64> {
        if self.delta_grid.is_empty() {
            vec![self.cavity.delta]
        } else {
            self.delta_grid.clone()
        }
    }

    /// Saturation ratios actually swept: the grid, or the cavity value.
    pub fn saturation_ratios(&self) -> Result<Vec<f64>> {
        if self.p_s_grid.is_empty() {
            Ok(vec![self.cavity.params()?.saturation_ratio()])
        } else {
            Ok(self.p_s_grid.clone())
        }
    }

    /// One-line JSON used for provenance headers.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<String>,
    cavity: Option<RawCavity>,
    pumps: Option<RawPumps>,
    medium_slope_minus: Option<f64>,
    medium_slope_plus: Option<f64>,
    t_mid: Option<f64>,
    dt_grid: Option<Value>,
    dt_points: Option<usize>,
    dt_decades: Option<f64>,
    delta_grid: Option<Value>,
    p_s_grid: Option<Value>,
    k_grid: Option<Value>,
    kp: Option<f64>,
    tolerances: Option<RawTolerances>,
    search: Option<SearchMode>,
    output_path: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCavity {
    ec0: Option<f64>,
    omega_r: Option<f64>,
    eb: Option<f64>,
    delta: Option<f64>,
    saturation_ratio: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPumps {
    direction: Option<[f64; 2]>,
    magnitudes: Option<Vec<f64>>,
    step: Option<f64>,
    count: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    certification: Option<f64>,
    rank: Option<f64>,
}

/// Collects every validation problem before failing.
#[derive(Default)]
struct Problems(Vec<String>);

impl Problems {
    fn push(&mut self, path: &str, msg: impl fmt::Display) {
        self.0.push(format!("{path}: {msg}"));
    }

    fn finish<T>(self, value: T) -> Result<T> {
        if self.0.is_empty() {
            Ok(value)
        } else {
            Err(Error::Config(self.0.join("; ")))
        }
    }
}

/// Parses and validates a JSON scenario document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    parse_config_for(text, None)
}

/// As [`parse_config`], with the scenario optionally supplied out of band
/// (the command line). A document naming a different scenario is rejected.
pub fn parse_config_for(text: &str, scenario: Option<ScenarioKind>) -> Result<ScenarioConfig> {
    let raw: RawConfig = if text.trim().is_empty() {
        RawConfig::default()
    } else {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("malformed configuration: {e}")))?
    };
    let kind = match (raw.scenario.as_deref(), scenario) {
        (None, None) => {
            return Err(Error::Config(
                "missing required field(s): scenario (one of hopfield_sweep, beta_map, sn_vs_dt)".into(),
            ))
        }
        (None, Some(k)) => k,
        (Some(s), None) => s.parse()?,
        (Some(s), Some(k)) => {
            let doc: ScenarioKind = s.parse()?;
            if doc != k {
                return Err(Error::Config(format!("scenario: document names `{doc}` but `{k}` was requested")));
            }
            k
        }
    };
    resolve(raw, kind)
}

fn resolve(raw: RawConfig, kind: ScenarioKind) -> Result<ScenarioConfig> {
    let mut cfg = ScenarioConfig::defaults(kind);
    let mut problems = Problems::default();
    let mut missing = Vec::new();

    if let Some(c) = raw.cavity {
        let d = CavityConfig::default();
        cfg.cavity = CavityConfig {
            ec0: c.ec0.unwrap_or(d.ec0),
            omega_r: c.omega_r.unwrap_or(d.omega_r),
            eb: c.eb.unwrap_or(d.eb),
            delta: c.delta.unwrap_or(d.delta),
            saturation_ratio: c.saturation_ratio,
        };
    }
    if let Err(e) = cfg.cavity.params() {
        problems.push("cavity", e);
    }

    match (raw.pumps, kind) {
        (Some(p), _) => {
            let direction = p.direction.unwrap_or([1.0, 0.0]);
            let magnitudes = match (p.magnitudes, p.step, p.count) {
                (Some(m), None, None) => Some(m),
                (None, Some(step), Some(count)) => Some((1..=count).map(|n| step * n as f64).collect()),
                (None, None, None) => {
                    missing.push("pumps.magnitudes");
                    None
                }
                (None, Some(_), None) => {
                    missing.push("pumps.count");
                    None
                }
                (None, None, Some(_)) => {
                    missing.push("pumps.step");
                    None
                }
                (Some(_), _, _) => {
                    problems.push("pumps", "give either `magnitudes` or `step` and `count`, not both");
                    None
                }
            };
            if let Some(magnitudes) = magnitudes {
                let pumps = PumpConfig { direction, magnitudes };
                if let Err(e) = pumps.spec() {
                    problems.push("pumps", e);
                }
                cfg.pumps = Some(pumps);
            }
        }
        (None, ScenarioKind::SnVsDt) => missing.push("pumps"),
        (None, _) => {}
    }

    if let Some(s) = raw.medium_slope_minus {
        cfg.medium_slope_minus = s;
    }
    if let Some(s) = raw.medium_slope_plus {
        cfg.medium_slope_plus = s;
    }
    for (path, s) in [("medium_slope_minus", cfg.medium_slope_minus), ("medium_slope_plus", cfg.medium_slope_plus)] {
        if !(s.is_finite() && s > 0.0) {
            problems.push(path, format!("must be positive, got {s}"));
        }
    }
    if let Some(t) = raw.t_mid {
        cfg.t_mid = t;
    }
    if !cfg.t_mid.is_finite() {
        problems.push("t_mid", "must be finite");
    }

    if let Some(v) = raw.dt_grid {
        if let Some(grid) = grid_from_value("dt_grid", &v, &mut problems) {
            match grid.iter().position(|&x| x < 0.0) {
                Some(i) => problems.push(&format!("dt_grid[{i}]"), format!("negative window {}", grid[i])),
                None => cfg.dt_grid = Some(grid),
            }
        }
    }
    if let Some(n) = raw.dt_points {
        cfg.dt_points = n;
    }
    if cfg.dt_points < 2 {
        problems.push("dt_points", "at least 2 points are required");
    }
    if let Some(d) = raw.dt_decades {
        cfg.dt_decades = d;
    }
    if !(cfg.dt_decades.is_finite() && cfg.dt_decades > 0.0 && cfg.dt_decades <= 300.0) {
        problems.push("dt_decades", format!("must lie in (0, 300], got {}", cfg.dt_decades));
    }

    for (path, value, slot) in [
        ("delta_grid", raw.delta_grid, &mut cfg.delta_grid),
        ("p_s_grid", raw.p_s_grid, &mut cfg.p_s_grid),
        ("k_grid", raw.k_grid, &mut cfg.k_grid),
    ] {
        if let Some(v) = value {
            if let Some(grid) = grid_from_value(path, &v, &mut problems) {
                *slot = grid;
            }
        }
    }
    if let Some(i) = cfg.p_s_grid.iter().position(|&x| x < 0.0) {
        problems.push(&format!("p_s_grid[{i}]"), "saturation ratio must be non-negative");
    }
    if let Some(i) = cfg.k_grid.iter().position(|&x| x < 0.0) {
        problems.push(&format!("k_grid[{i}]"), "wave numbers must be non-negative");
    }
    if kind == ScenarioKind::HopfieldSweep && cfg.k_grid.is_empty() {
        missing.push("k_grid");
    }

    if let Some(kp) = raw.kp {
        cfg.kp = kp;
    }
    if !(cfg.kp.is_finite() && cfg.kp >= 0.0) {
        problems.push("kp", format!("must be non-negative, got {}", cfg.kp));
    }

    if let Some(t) = raw.tolerances {
        if let Some(c) = t.certification {
            cfg.tolerances.certification = c;
        }
        if let Some(r) = t.rank {
            cfg.tolerances.rank = r;
        }
    }
    let tol = cfg.tolerances;
    if !(tol.certification > 0.0 && tol.certification <= 0.1) {
        problems.push("tolerances.certification", format!("must lie in (0, 0.1], got {}", tol.certification));
    }
    if !(tol.rank.is_finite() && (0.0..1.0).contains(&tol.rank)) {
        problems.push("tolerances.rank", format!("must lie in [0, 1), got {}", tol.rank));
    }
    if let Some(s) = raw.search {
        cfg.search = s;
    }
    cfg.output_path = raw.output_path;

    if !missing.is_empty() {
        problems.0.insert(0, format!("missing required field(s): {}", missing.join(", ")));
    }
    problems.finish(cfg)
}

fn grid_from_value(path: &str, value: &Value, problems: &mut Problems) -> Option<Vec<f64>> {
    let grid = match value {
        Value::Array(items) => {
            let mut out = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                match item.as_f64() {
                    Some(x) => out.push(x),
                    None => {
                        problems.push(&format!("{path}[{i}]"), "expected a number");
                        return None;
                    }
                }
            }
            out
        }
        Value::Object(map) => {
            let known = ["start", "stop", "points", "spacing"];
            if let Some(k) = map.keys().find(|k| !known.contains(&k.as_str())) {
                problems.push(&format!("{path}.{k}"), "unknown field");
                return None;
            }
            let num = |key: &str| map.get(key).and_then(Value::as_f64);
            let (Some(start), Some(stop)) = (num("start"), num("stop")) else {
                let absent: Vec<_> = ["start", "stop"].into_iter().filter(|k| num(k).is_none()).collect();
                problems.push(path, format!("missing or non-numeric field(s): {}", absent.join(", ")));
                return None;
            };
            let Some(points) = map.get("points").and_then(Value::as_u64) else {
                problems.push(&format!("{path}.points"), "missing or not a non-negative integer");
                return None;
            };
            let points = points as usize;
            match map.get("spacing").map(|v| v.as_str()) {
                None | Some(Some("linear")) => linspace(start, stop, points),
                Some(Some("log")) => {
                    if !(start > 0.0 && stop > 0.0) {
                        problems.push(path, "log spacing needs positive start and stop");
                        return None;
                    }
                    logspace(start, stop, points)
                }
                Some(_) => {
                    problems.push(&format!("{path}.spacing"), "expected \"linear\" or \"log\"");
                    return None;
                }
            }
        }
        _ => {
            problems.push(path, "expected a list of numbers or {start, stop, points}");
            return None;
        }
    };
    if grid.is_empty() {
        problems.push(path, "grid is empty");
        return None;
    }
    if let Some(i) = grid.iter().position(|x| !x.is_finite()) {
        problems.push(&format!("{path}[{i}]"), "non-finite value");
        return None;
    }
    if let Some(i) = grid.windows(2).position(|w| w[1] <= w[0]) {
        problems.push(path, format!("grid must be strictly increasing (entries {} and {})", i, i + 1));
        return None;
    }
    Some(grid)
}

/// `points` values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![start],
        _ => {
            let step = (stop - start) / (points - 1) as f64;
            (0..points).map(|i| if i == points - 1 { stop } else { start + step * i as f64 }).collect()
        }
    }
}

/// Geometric progression from `start` to `stop` inclusive; both positive.
pub fn logspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    let (a, b) = (start.ln(), stop.ln());
    linspace(a, b, points)
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            if i == 0 {
                start
            } else if i == points - 1 {
                stop
            } else {
                x.exp()
            }
        })
        .collect()
}
