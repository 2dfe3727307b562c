//! Seeded Monte Carlo engine: drops, aggregation, downtilt sweeps and the
//! analytic metro cell radius.
//!
//! Drops are independent and may run on any number of workers. Each drop
//! derives its random streams from `(master_seed, drop_index)` and results
//! are reduced in drop-index order, so output does not depend on the worker
//! count.

mod drop;
mod metrics;
mod radius;
pub mod rng;
mod scenario;

pub use drop::{place_network, run_drop, run_drop_with, DropGeometry, DropResult, MAX_ATTEMPTS};
pub use metrics::{aggregate, NetworkMetrics};
pub use radius::{cell_radius, CellRadius};
pub use scenario::{
    check_metro_tilt, BuildingConfig, MacroConfig, MetroConfig, PowerMode, Scenario, DEFAULT_DROPS,
    DEFAULT_SEED,
};

use rayon::prelude::*;

use crate::antenna::{AntennaPattern, MetroAntenna};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default downtilt grid: 0° to 40° in 2° steps.
pub fn default_tilts() -> Vec<f64> {
    (0..=20).map(|k| 2.0 * k as f64).collect()
}

/// One metro configuration evaluated in a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub antenna: MetroAntenna,
    pub downtilt_deg: f64,
    pub power_mode: PowerMode,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepGrid {
    cells: Vec<SweepCell>,
}

impl SweepGrid {
    /// Full grid over `modes × antennas × tilts`. Antennas that cannot be
    /// tilted get a single 0° row (when `tilts` is non-empty).
    pub fn new(antennas: &[MetroAntenna], tilts: &[f64], modes: &[PowerMode]) -> Result<Self> {
        let mut cells = Vec::new();
        if tilts.is_empty() {
            return Ok(SweepGrid { cells });
        }
        for &power_mode in modes {
            for &antenna in antennas {
                let row_tilts: &[f64] = if antenna.is_tiltable() { tilts } else { &[0.0] };
                for &downtilt_deg in row_tilts {
                    check_metro_tilt(antenna, downtilt_deg)?;
                    cells.push(SweepCell {
                        antenna,
                        downtilt_deg,
                        power_mode,
                    });
                }
            }
        }
        Ok(SweepGrid { cells })
    }

    /// Explicit cells; a tilted single-element dipole is a configuration error.
    pub fn from_cells(cells: Vec<SweepCell>) -> Result<Self> {
        for c in &cells {
            check_metro_tilt(c.antenna, c.downtilt_deg)?;
        }
        Ok(SweepGrid { cells })
    }

    pub fn cells(&self) -> &[SweepCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Metrics of one sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub cell: SweepCell,
    pub p2_dbm: f64,
    pub metrics: NetworkMetrics,
    pub cell_radius: CellRadius<f64>,
    pub drops: usize,
    pub seed: u64,
}

/// Cells sharing an antenna and tilt; only the metro power differs.
struct BeamGroup<T> {
    pattern: AntennaPattern<T>,
    tilt: T,
    powers: Vec<T>,
    cells: Vec<usize>,
}

fn group_cells<T: Scalar>(template: &Scenario, grid: &SweepGrid) -> Vec<BeamGroup<T>> {
    let mut groups: Vec<(MetroAntenna, f64, BeamGroup<T>)> = Vec::new();
    for (k, c) in grid.cells().iter().enumerate() {
        let p2 = T::lit(template.metro_tx_power_for(c.antenna, c.power_mode));
        let found = groups
            .iter_mut()
            .find(|(a, t, _)| *a == c.antenna && t.to_bits() == c.downtilt_deg.to_bits());
        match found {
            Some((_, _, g)) => {
                g.powers.push(p2);
                g.cells.push(k);
            }
            None => groups.push((
                c.antenna,
                c.downtilt_deg,
                BeamGroup {
                    pattern: c.antenna.pattern(),
                    tilt: T::lit(c.downtilt_deg),
                    powers: vec![p2],
                    cells: vec![k],
                },
            )),
        }
    }
    groups.into_iter().map(|(_, _, g)| g).collect()
}

/// Runs `template.drops` drops once and evaluates every grid cell on them.
pub fn run_sweep_with<T: Scalar>(
    template: &Scenario,
    grid: &SweepGrid,
    workers: usize,
) -> Result<Vec<SweepRow>> {
    template.validate()?;
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    let groups = group_cells::<T>(template, grid);
    let bias = T::lit(template.bias_db);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let per_drop: Vec<Vec<DropResult>> = pool.install(|| {
        (0..template.drops as u64)
            .into_par_iter()
            .map(|d| {
                let geometry = DropGeometry::<T>::sample(template, d)?;
                let mut out: Vec<Option<DropResult>> = vec![None; grid.len()];
                for g in &groups {
                    let rs = geometry.evaluate_powers(&g.pattern, g.tilt, &g.powers, bias)?;
                    for (&k, r) in g.cells.iter().zip(rs) {
                        out[k] = Some(r);
                    }
                }
                Ok(out
                    .into_iter()
                    .map(|r| r.expect("every cell is in a group"))
                    .collect())
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut rows = Vec::with_capacity(grid.len());
    let mut column = Vec::with_capacity(per_drop.len());
    for (k, cell) in grid.cells().iter().enumerate() {
        column.clear();
        column.extend(per_drop.iter().map(|r| r[k]));
        rows.push(SweepRow {
            cell: *cell,
            p2_dbm: template.metro_tx_power_for(cell.antenna, cell.power_mode),
            metrics: aggregate(
                &column,
                template.macro_tier.density_per_km2,
                template.metro.density_per_km2,
            ),
            cell_radius: cell_radius(
                template.metro.height_m,
                template.user_height_m,
                cell.downtilt_deg,
                cell.antenna.vert_hpbw_deg(),
            )
            .unwrap_or(CellRadius::Unbounded),
            drops: template.drops,
            seed: template.master_seed,
        });
    }
    Ok(rows)
}

pub fn run_sweep(template: &Scenario, grid: &SweepGrid, workers: usize) -> Result<Vec<SweepRow>> {
    run_sweep_with::<f64>(template, grid, workers)
}

/// Runs the scenario's own metro configuration.
pub fn simulate(scenario: &Scenario, workers: usize) -> Result<SweepRow> {
    let grid = SweepGrid::from_cells(vec![SweepCell {
        antenna: scenario.metro.antenna,
        downtilt_deg: scenario.metro.downtilt_deg,
        power_mode: scenario.power_mode,
    }])?;
    let mut rows = run_sweep(scenario, &grid, workers)?;
    Ok(rows.remove(0))
}
