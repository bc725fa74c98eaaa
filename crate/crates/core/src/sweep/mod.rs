//! Configuration-driven scenario runner.
//!
//! Three scenarios tabulate the library outputs:
//!
//! | scenario         | columns                                                  |
//! |------------------|----------------------------------------------------------|
//! | `hopfield_sweep` | `k_over_k0, delta, m11_sq, m12_sq`                       |
//! | `beta_map`       | `delta, p_s, beta_sq`                                    |
//! | `sn_vs_dt`       | `dt_over_t0, delta, p_s, certified_sn, f_1 .. f_{2^N}`   |
//!
//! Output is deterministic: grid points are evaluated in parallel but
//! gathered in grid order, and reals are printed with 12 significant digits.
//! Every file embeds the resolved config, which reproduces it byte for byte.

mod config;
mod run;

pub use config::{
    linspace, logspace, parse_config, parse_config_for, CavityConfig, PumpConfig, ScenarioConfig, ScenarioKind,
    Tolerances, DEFAULT_BETA_MAP_KP, DEFAULT_DT_DECADES, DEFAULT_DT_POINTS, DEFAULT_EB, DEFAULT_EC0, DEFAULT_OMEGA_R,
    DEFAULT_SLOPE_MINUS, DEFAULT_SLOPE_PLUS,
};
pub use run::{
    default_dt_grid, extract_embedded_config, run_scenario, run_to_path, scenario_state, Cell, OutputFormat,
    ScenarioTable,
};
