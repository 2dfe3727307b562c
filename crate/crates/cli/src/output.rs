//! CSV and JSON-lines writers for result tables.

use std::fmt::Write as _;

use serde::Serialize;

use hetsim_core::simulation::CellRadius;
use hetsim_core::SweepRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

pub const RESULT_COLUMNS: [&str; 12] = [
    "pattern",
    "downtilt_deg",
    "power_mode",
    "p2_dbm",
    "ase_bps_hz_km2",
    "ase_stderr",
    "avg_rate_bps_hz",
    "rate_stderr",
    "metro_fraction",
    "cell_radius_m",
    "drops",
    "seed",
];

fn radius_field(r: CellRadius<f64>) -> String {
    r.meters().map(|m| m.to_string()).unwrap_or_default()
}

#[derive(Serialize)]
struct ResultRecord<'a> {
    pattern: &'a str,
    downtilt_deg: f64,
    power_mode: &'a str,
    p2_dbm: f64,
    ase_bps_hz_km2: f64,
    ase_stderr: f64,
    avg_rate_bps_hz: f64,
    rate_stderr: f64,
    metro_fraction: f64,
    cell_radius_m: Option<f64>,
    drops: usize,
    seed: u64,
    metro_fraction_stderr: f64,
    r1_bps_hz: f64,
    r2_bps_hz: f64,
    macro_drops: usize,
    metro_drops: usize,
    macro_density_per_km2: f64,
    metro_density_per_km2: f64,
    empty_tiers: Vec<&'a str>,
}

/// Renders result rows. CSV carries the fixed column set; JSON lines add
/// per-tier means, counts and densities.
pub fn render_results(rows: &[SweepRow], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(&RESULT_COLUMNS.join(","));
            out.push('\n');
            for r in rows {
                let m = &r.metrics;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.cell.antenna.name(),
                    r.cell.downtilt_deg,
                    r.cell.power_mode.name(),
                    r.p2_dbm,
                    m.ase,
                    m.ase_stderr,
                    m.avg_user_rate,
                    m.rate_stderr,
                    m.metro_fraction,
                    radius_field(r.cell_radius),
                    r.drops,
                    r.seed
                );
            }
        }
        Format::Jsonl => {
            for r in rows {
                let m = &r.metrics;
                let rec = ResultRecord {
                    pattern: r.cell.antenna.name(),
                    downtilt_deg: r.cell.downtilt_deg,
                    power_mode: r.cell.power_mode.name(),
                    p2_dbm: r.p2_dbm,
                    ase_bps_hz_km2: m.ase,
                    ase_stderr: m.ase_stderr,
                    avg_rate_bps_hz: m.avg_user_rate,
                    rate_stderr: m.rate_stderr,
                    metro_fraction: m.metro_fraction,
                    cell_radius_m: r.cell_radius.meters(),
                    drops: r.drops,
                    seed: r.seed,
                    metro_fraction_stderr: m.metro_fraction_stderr,
                    r1_bps_hz: m.r1,
                    r2_bps_hz: m.r2,
                    macro_drops: m.macro_drops,
                    metro_drops: m.metro_drops,
                    macro_density_per_km2: m.macro_density_per_km2,
                    metro_density_per_km2: m.metro_density_per_km2,
                    empty_tiers: m.empty_tiers.iter().map(|t| t.name()).collect(),
                };
                out.push_str(&serde_json::to_string(&rec).expect("record serializes"));
                out.push('\n');
            }
        }
    }
    out
}

/// One analytic cell-radius row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusRow {
    pub pattern: String,
    pub height_m: f64,
    pub downtilt_deg: f64,
    pub vert_hpbw_deg: f64,
    pub cell_radius_m: Option<f64>,
    /// `cell_radius_m` rounded to 0.1 m.
    pub cell_radius_display_m: Option<String>,
}

pub const RADIUS_COLUMNS: [&str; 6] = [
    "pattern",
    "height_m",
    "downtilt_deg",
    "vert_hpbw_deg",
    "cell_radius_m",
    "cell_radius_display_m",
];

pub fn render_radius(rows: &[RadiusRow], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(&RADIUS_COLUMNS.join(","));
            out.push('\n');
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.pattern,
                    r.height_m,
                    r.downtilt_deg,
                    r.vert_hpbw_deg,
                    r.cell_radius_m.map(|v| v.to_string()).unwrap_or_default(),
                    r.cell_radius_display_m.clone().unwrap_or_default()
                );
            }
        }
        Format::Jsonl => {
            for r in rows {
                out.push_str(&serde_json::to_string(r).expect("record serializes"));
                out.push('\n');
            }
        }
    }
    out
}
