//! One Monte Carlo drop around the typical user at the origin.
//!
//! A drop is split in two stages. [`DropGeometry`] holds everything that does
//! not depend on the metro antenna: placement, blockage counts, path loss,
//! angles, fading draws and the complete macro tier. [`DropGeometry::evaluate`]
//! then applies a metro antenna, tilt and power, runs association and
//! returns the SIR. Sweeps reuse one geometry for every grid cell, so cells
//! differ only by the swept parameters.

use rand::Rng;

use super::rng::{drop_stream, Purpose};
use super::scenario::Scenario;
use crate::antenna::AntennaPattern;
use crate::association::{decide, SectorPower};
use crate::channel::{draw_fading, shadow_db, Propagation};
use crate::error::{Error, Result};
use crate::geometry::{link_geometry, sample_ppp, Building, BuildingIndex, Point2, Tier, Wap};
use crate::scalar::Scalar;

/// Placement attempts per drop before giving up on an empty window.
pub const MAX_ATTEMPTS: u32 = 16;

/// Samples macro sites, metro cells and buildings, in that order, from `rng`.
pub fn place_network<T: Scalar, R: Rng + ?Sized>(
    scenario: &Scenario,
    rng: &mut R,
) -> Result<(Vec<Wap<T>>, Vec<Building<T>>)> {
    let region = scenario.region::<T>()?;
    let mc = &scenario.macro_tier;
    let macro_pattern = mc.pattern::<T>()?;
    let mut waps = Vec::new();
    for pos in sample_ppp(T::lit(mc.density_per_km2), &region, rng)? {
        let first = T::lit(rng.random::<f64>() * core::f64::consts::TAU);
        // Guard the open upper end against rounding.
        let first = if first >= T::TAU() { T::zero() } else { first };
        waps.push(Wap::macro_site(
            pos,
            T::lit(mc.height_m),
            T::lit(mc.tx_power_dbm),
            first,
            macro_pattern,
            T::lit(mc.downtilt_deg),
        )?);
    }

    let metro = &scenario.metro;
    let metro_pattern = metro.antenna.pattern::<T>();
    let metro_power = T::lit(scenario.metro_tx_power_dbm());
    for pos in sample_ppp(T::lit(metro.density_per_km2), &region, rng)? {
        waps.push(Wap::metro_site(
            pos,
            T::lit(metro.height_m),
            metro_power,
            metro_pattern,
            T::lit(metro.downtilt_deg),
        )?);
    }

    let bc = &scenario.buildings;
    let uniform = |rng: &mut R, lo: f64, hi: f64| T::lit(lo + (hi - lo) * rng.random::<f64>());
    let mut buildings = Vec::new();
    for center in sample_ppp(T::lit(bc.density_per_km2), &region, rng)? {
        let length = uniform(rng, bc.length_min_m, bc.length_max_m);
        let orientation = uniform(rng, 0.0, core::f64::consts::PI);
        let height = uniform(rng, bc.height_min_m, bc.height_max_m);
        buildings.push(Building::new(center, length, orientation, height)?);
    }
    Ok((waps, buildings))
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct MacroLink<T> {
    wap_index: usize,
    sector_index: usize,
    mean_mw: T,
    fading: T,
    blockages: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct MetroLink<T> {
    wap_index: usize,
    azimuth_offset_deg: T,
    elevation_deg: T,
    /// Shadowing minus path loss, in dB.
    channel_db: T,
    fading: T,
    blockages: usize,
}

/// Per-drop state independent of the metro antenna configuration.
#[derive(Debug, Clone)]
pub struct DropGeometry<T> {
    macros: Vec<MacroLink<T>>,
    metros: Vec<MetroLink<T>>,
    macro_best: Option<usize>,
    macro_mean_total: T,
    macro_faded_total: T,
}

/// Outcome of one drop for the typical user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DropResult {
    pub tier: Tier,
    pub wap_index: usize,
    pub sector_index: usize,
    /// `log2(1 + SIR)` in b/s/Hz.
    pub spectral_efficiency: f64,
    pub sir_db: f64,
    pub asair_db: f64,
    pub blockage_count_serving: usize,
}

impl<T: Scalar> DropGeometry<T> {
    /// Samples the geometry of drop `drop_index`, resampling empty windows
    /// from derived streams up to [`MAX_ATTEMPTS`] times.
    pub fn sample(scenario: &Scenario, drop_index: u64) -> Result<Self> {
        let propagation = scenario.propagation::<T>();
        let user = Point2::origin();
        let mut last = Error::Degenerate("no placement attempted".into());
        for attempt in 0..MAX_ATTEMPTS {
            let mut placement = drop_stream(
                scenario.master_seed,
                drop_index,
                attempt,
                Purpose::Placement,
            );
            let (waps, buildings) = place_network::<T, _>(scenario, &mut placement)?;
            let sectors: usize = waps.iter().map(|w| w.sectors.len()).sum();
            if sectors < 2 {
                last = Error::Degenerate(format!(
                    "drop {drop_index}: {sectors} sector(s) in the window after {} attempt(s)",
                    attempt + 1
                ));
                continue;
            }
            let index = BuildingIndex::new(buildings);
            let mut fading =
                drop_stream(scenario.master_seed, drop_index, attempt, Purpose::Fading);
            return Ok(Self::from_network(
                &waps,
                &index,
                user,
                &propagation,
                || draw_fading(&mut fading),
            ));
        }
        Err(last)
    }

    /// Builds the drop state for an explicit network. `fading` is called once
    /// per sector in WAP then sector order.
    pub fn from_network(
        waps: &[Wap<T>],
        buildings: &BuildingIndex<T>,
        user_xy: Point2<T>,
        propagation: &Propagation<T>,
        mut fading: impl FnMut() -> T,
    ) -> Self {
        let user = user_xy.with_height(propagation.user_height_m);
        let mut scratch = Vec::new();
        let mut macros = Vec::new();
        let mut metros = Vec::new();
        for (wi, wap) in waps.iter().enumerate() {
            let blockages =
                buildings.count_blockages_with(wap.antenna_position(), user, &mut scratch);
            let shadow = shadow_db(blockages, propagation.building_attenuation_db);
            for (si, sector) in wap.sectors.iter().enumerate() {
                let g = link_geometry(wap, sector, user_xy, propagation.user_height_m);
                let loss = propagation
                    .path_loss(wap.tier)
                    .loss_db(g.distance_3d_m / T::lit(1000.0));
                let fade = fading();
                match wap.tier {
                    Tier::Macro => {
                        let gain = sector.pattern.total_gain_dbi(
                            g.azimuth_offset_deg,
                            g.elevation_deg,
                            sector.downtilt_deg,
                        );
                        macros.push(MacroLink {
                            wap_index: wi,
                            sector_index: si,
                            mean_mw: T::db_to_linear(wap.tx_power_dbm + gain - loss + shadow),
                            fading: fade,
                            blockages,
                        });
                    }
                    Tier::Metro => metros.push(MetroLink {
                        wap_index: wi,
                        azimuth_offset_deg: g.azimuth_offset_deg,
                        elevation_deg: g.elevation_deg,
                        channel_db: shadow - loss,
                        fading: fade,
                        blockages,
                    }),
                }
            }
        }

        let mut macro_best: Option<usize> = None;
        let mut macro_mean_total = T::zero();
        let mut macro_faded_total = T::zero();
        for (k, link) in macros.iter().enumerate() {
            macro_mean_total = macro_mean_total + link.mean_mw;
            macro_faded_total = macro_faded_total + link.mean_mw * link.fading;
            if macro_best.is_none_or(|b| link.mean_mw > macros[b].mean_mw) {
                macro_best = Some(k);
            }
        }
        DropGeometry {
            macros,
            metros,
            macro_best,
            macro_mean_total,
            macro_faded_total,
        }
    }

    pub fn sector_count(&self) -> usize {
        self.macros.len() + self.metros.len()
    }

    /// Associates and scores the typical user for one metro configuration.
    pub fn evaluate(
        &self,
        metro_pattern: &AntennaPattern<T>,
        metro_tilt_deg: T,
        metro_tx_power_dbm: T,
        bias_db: T,
    ) -> Result<DropResult> {
        let mut out = self.evaluate_powers(
            metro_pattern,
            metro_tilt_deg,
            &[metro_tx_power_dbm],
            bias_db,
        )?;
        Ok(out.remove(0))
    }

    /// Like [`evaluate`](Self::evaluate) for several metro transmit powers
    /// sharing one pattern and tilt. Results are identical to separate calls.
    pub fn evaluate_powers(
        &self,
        metro_pattern: &AntennaPattern<T>,
        metro_tilt_deg: T,
        metro_tx_powers_dbm: &[T],
        bias_db: T,
    ) -> Result<Vec<DropResult>> {
        let gains: Vec<T> = self
            .metros
            .iter()
            .map(|link| {
                T::db_to_linear(
                    metro_pattern.horizontal_gain_db(link.azimuth_offset_deg)
                        + metro_pattern.vertical_gain_db(link.elevation_deg, metro_tilt_deg)
                        + link.channel_db,
                )
            })
            .collect();
        metro_tx_powers_dbm
            .iter()
            .map(|&p2| {
                self.score(
                    T::db_to_linear(p2 + metro_pattern.max_gain_dbi()),
                    &gains,
                    bias_db,
                )
            })
            .collect()
    }

    fn score(&self, metro_scale: T, metro_gains: &[T], bias_db: T) -> Result<DropResult> {
        let mut metro_best: Option<(usize, T)> = None;
        let mut metro_mean_total = T::zero();
        let mut metro_faded_total = T::zero();
        for (k, (link, &g)) in self.metros.iter().zip(metro_gains).enumerate() {
            let mean = metro_scale * g;
            metro_mean_total = metro_mean_total + mean;
            metro_faded_total = metro_faded_total + mean * link.fading;
            if metro_best.is_none_or(|(_, b)| mean > b) {
                metro_best = Some((k, mean));
            }
        }

        let macro_power = self.macro_best.map(|k| {
            let l = &self.macros[k];
            SectorPower {
                tier: Tier::Macro,
                wap_index: l.wap_index,
                sector_index: l.sector_index,
                mean_mw: l.mean_mw,
            }
        });
        let metro_power = metro_best.map(|(k, mean)| SectorPower {
            tier: Tier::Metro,
            wap_index: self.metros[k].wap_index,
            sector_index: 0,
            mean_mw: mean,
        });
        let decision = decide(
            macro_power,
            metro_power,
            self.macro_mean_total,
            metro_mean_total,
            bias_db,
        )?;

        let (serving, interference, blockages) = match decision.tier {
            Tier::Macro => {
                let l = &self.macros[self.macro_best.expect("macro decision has a macro sector")];
                let s = l.mean_mw * l.fading;
                (
                    s,
                    (self.macro_faded_total - s) + metro_faded_total,
                    l.blockages,
                )
            }
            Tier::Metro => {
                let (k, mean) = metro_best.expect("metro decision has a metro cell");
                let s = mean * self.metros[k].fading;
                (
                    s,
                    (metro_faded_total - s) + self.macro_faded_total,
                    self.metros[k].blockages,
                )
            }
        };
        if !(interference > T::zero()) {
            return Err(Error::Degenerate(
                "no interference at the typical user".into(),
            ));
        }
        let sir = (serving / interference).as_f64();
        Ok(DropResult {
            tier: decision.tier,
            wap_index: decision.wap_index,
            sector_index: decision.sector_index,
            spectral_efficiency: sir.ln_1p() / core::f64::consts::LN_2,
            sir_db: 10.0 * sir.log10(),
            asair_db: decision.serving_asair_db.as_f64(),
            blockage_count_serving: blockages,
        })
    }

    /// Evaluates with the scenario's own metro configuration.
    pub fn evaluate_scenario(&self, scenario: &Scenario) -> Result<DropResult> {
        self.evaluate(
            &scenario.metro.antenna.pattern(),
            T::lit(scenario.metro.downtilt_deg),
            T::lit(scenario.metro_tx_power_dbm()),
            T::lit(scenario.bias_db),
        )
    }
}

/// Runs drop `drop_index` of `scenario` at precision `T`.
pub fn run_drop_with<T: Scalar>(scenario: &Scenario, drop_index: u64) -> Result<DropResult> {
    DropGeometry::<T>::sample(scenario, drop_index)?.evaluate_scenario(scenario)
}

/// Runs drop `drop_index` of `scenario` in double precision.
pub fn run_drop(scenario: &Scenario, drop_index: u64) -> Result<DropResult> {
    run_drop_with::<f64>(scenario, drop_index)
}
