use std::fmt;
use std::str::FromStr;

use crate::antenna::{AntennaPattern, MetroAntenna};
use crate::channel::{PathLossModel, Propagation};
use crate::error::{Error, Result};
use crate::geometry::{Point2, Region};
use crate::scalar::Scalar;

/// How the metro transmit power is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PowerMode {
    /// Every metro antenna transmits `metro.tx_power_dbm`.
    SamePower,
    /// Transmit power is lowered by the antenna's peak gain so the EIRP
    /// stays at `metro.eirp_dbm`.
    SameEirp,
}

impl PowerMode {
    pub fn name(self) -> &'static str {
        match self {
            PowerMode::SamePower => "same_power",
            PowerMode::SameEirp => "same_eirp",
        }
    }
}

impl fmt::Display for PowerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PowerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "same_power" => Ok(PowerMode::SamePower),
            "same_eirp" => Ok(PowerMode::SameEirp),
            _ => Err(Error::Config(format!(
                "unknown power mode `{s}` (expected same_power or same_eirp)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MacroConfig {
    pub tx_power_dbm: f64,
    pub density_per_km2: f64,
    pub height_m: f64,
    pub horiz_hpbw_deg: f64,
    pub fbr_db: f64,
    pub downtilt_deg: f64,
    pub vert_hpbw_deg: f64,
    pub sll_db: f64,
    pub max_gain_dbi: f64,
    pub path_loss_intercept_db: f64,
    pub path_loss_slope_db: f64,
}

impl Default for MacroConfig {
    fn default() -> Self {
        MacroConfig {
            tx_power_dbm: 46.0,
            density_per_km2: 2.05,
            height_m: 30.0,
            horiz_hpbw_deg: 65.0,
            fbr_db: 25.0,
            downtilt_deg: 10.0,
            vert_hpbw_deg: 7.0,
            sll_db: -18.0,
            max_gain_dbi: 18.0,
            path_loss_intercept_db: 128.1,
            path_loss_slope_db: 37.6,
        }
    }
}

impl MacroConfig {
    pub fn pattern<T: Scalar>(&self) -> Result<AntennaPattern<T>> {
        AntennaPattern::sector_3gpp(
            T::lit(self.horiz_hpbw_deg),
            T::lit(self.fbr_db),
            T::lit(self.vert_hpbw_deg),
            T::lit(self.sll_db),
            T::lit(self.max_gain_dbi),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetroConfig {
    /// Transmit power under [`PowerMode::SamePower`].
    pub tx_power_dbm: f64,
    /// EIRP held fixed under [`PowerMode::SameEirp`].
    pub eirp_dbm: f64,
    pub density_per_km2: f64,
    pub height_m: f64,
    pub antenna: MetroAntenna,
    pub downtilt_deg: f64,
    pub path_loss_intercept_db: f64,
    pub path_loss_slope_db: f64,
}

impl Default for MetroConfig {
    fn default() -> Self {
        MetroConfig {
            tx_power_dbm: 33.0,
            eirp_dbm: 33.0 + MetroAntenna::Dipole1.max_gain_dbi(),
            density_per_km2: 15.0 * 2.05,
            height_m: 5.0,
            antenna: MetroAntenna::QuasiOmni,
            downtilt_deg: 8.0,
            path_loss_intercept_db: 140.7,
            path_loss_slope_db: 36.7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildingConfig {
    pub density_per_km2: f64,
    pub attenuation_db: f64,
    pub length_min_m: f64,
    pub length_max_m: f64,
    pub height_min_m: f64,
    pub height_max_m: f64,
}

impl Default for BuildingConfig {
    fn default() -> Self {
        BuildingConfig {
            density_per_km2: 15.0 * 2.05,
            attenuation_db: -40.0,
            length_min_m: 20.0,
            length_max_m: 30.0,
            height_min_m: 10.0,
            height_max_m: 20.0,
        }
    }
}

/// Complete description of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub macro_tier: MacroConfig,
    pub metro: MetroConfig,
    pub buildings: BuildingConfig,
    pub bias_db: f64,
    pub region_radius_km: f64,
    pub user_height_m: f64,
    /// Recorded for reference; the path-loss intercepts already encode it.
    pub carrier_frequency_ghz: f64,
    pub drops: usize,
    pub master_seed: u64,
    pub power_mode: PowerMode,
}

pub const DEFAULT_SEED: u64 = 20_150_601;
pub const DEFAULT_DROPS: usize = 10_000;

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            macro_tier: MacroConfig::default(),
            metro: MetroConfig::default(),
            buildings: BuildingConfig::default(),
            bias_db: 6.0,
            region_radius_km: 5.0,
            user_height_m: 0.0,
            carrier_frequency_ghz: 2.0,
            drops: DEFAULT_DROPS,
            master_seed: DEFAULT_SEED,
            power_mode: PowerMode::SamePower,
        }
    }
}

fn require(ok: bool, name: &'static str, reason: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(name, reason()))
    }
}

fn finite_nonneg(name: &'static str, v: f64) -> Result<()> {
    require(v.is_finite() && v >= 0.0, name, || {
        format!("{v} must be finite and ≥ 0")
    })
}

fn finite_pos(name: &'static str, v: f64) -> Result<()> {
    require(v.is_finite() && v > 0.0, name, || {
        format!("{v} must be finite and > 0")
    })
}

fn finite(name: &'static str, v: f64) -> Result<()> {
    require(v.is_finite(), name, || format!("{v} must be finite"))
}

/// Rejects tilted single-element dipoles and out-of-range tilts.
pub fn check_metro_tilt(antenna: MetroAntenna, downtilt_deg: f64) -> Result<()> {
    require(
        (0.0..90.0).contains(&downtilt_deg),
        "metro.downtilt_deg",
        || format!("{downtilt_deg}° outside [0°, 90°)"),
    )?;
    if !antenna.is_tiltable() && downtilt_deg != 0.0 {
        return Err(Error::Config(format!(
            "metro antenna {antenna} cannot be tilted (downtilt {downtilt_deg}° requested)"
        )));
    }
    Ok(())
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let m = &self.macro_tier;
        finite("macro.tx_power_dbm", m.tx_power_dbm)?;
        finite_nonneg("macro.density_per_km2", m.density_per_km2)?;
        finite_pos("macro.height_m", m.height_m)?;
        require(
            (0.0..90.0).contains(&m.downtilt_deg),
            "macro.downtilt_deg",
            || format!("{}° outside [0°, 90°)", m.downtilt_deg),
        )?;
        m.pattern::<f64>()?;
        finite("macro.path_loss_intercept_db", m.path_loss_intercept_db)?;
        finite_pos("macro.path_loss_slope_db", m.path_loss_slope_db)?;

        let s = &self.metro;
        finite("metro.tx_power_dbm", s.tx_power_dbm)?;
        finite("metro.eirp_dbm", s.eirp_dbm)?;
        finite_nonneg("metro.density_per_km2", s.density_per_km2)?;
        finite_pos("metro.height_m", s.height_m)?;
        check_metro_tilt(s.antenna, s.downtilt_deg)?;
        finite("metro.path_loss_intercept_db", s.path_loss_intercept_db)?;
        finite_pos("metro.path_loss_slope_db", s.path_loss_slope_db)?;

        let b = &self.buildings;
        finite_nonneg("buildings.density_per_km2", b.density_per_km2)?;
        finite("buildings.attenuation_db", b.attenuation_db)?;
        finite_pos("buildings.length_min_m", b.length_min_m)?;
        finite_pos("buildings.height_min_m", b.height_min_m)?;
        require(
            b.length_max_m.is_finite() && b.length_max_m >= b.length_min_m,
            "buildings.length_max_m",
            || {
                format!(
                    "{} must be ≥ length_min_m ({})",
                    b.length_max_m, b.length_min_m
                )
            },
        )?;
        require(
            b.height_max_m.is_finite() && b.height_max_m >= b.height_min_m,
            "buildings.height_max_m",
            || {
                format!(
                    "{} must be ≥ height_min_m ({})",
                    b.height_max_m, b.height_min_m
                )
            },
        )?;

        finite("simulation.bias_db", self.bias_db)?;
        finite_pos("simulation.region_radius_km", self.region_radius_km)?;
        finite_nonneg("simulation.user_height_m", self.user_height_m)?;
        finite_pos(
            "simulation.carrier_frequency_ghz",
            self.carrier_frequency_ghz,
        )?;
        require(self.drops >= 1, "simulation.drops", || {
            "at least one drop is required".into()
        })?;
        Ok(())
    }

    /// Metro transmit power for `antenna` under `mode`.
    pub fn metro_tx_power_for(&self, antenna: MetroAntenna, mode: PowerMode) -> f64 {
        match mode {
            PowerMode::SamePower => self.metro.tx_power_dbm,
            PowerMode::SameEirp => self.metro.eirp_dbm - antenna.max_gain_dbi(),
        }
    }

    pub fn metro_tx_power_dbm(&self) -> f64 {
        self.metro_tx_power_for(self.metro.antenna, self.power_mode)
    }

    pub fn region<T: Scalar>(&self) -> Result<Region<T>> {
        Region::disc(Point2::origin(), T::lit(self.region_radius_km * 1000.0))
    }

    pub fn propagation<T: Scalar>(&self) -> Propagation<T> {
        Propagation {
            macro_path_loss: PathLossModel::new(
                T::lit(self.macro_tier.path_loss_intercept_db),
                T::lit(self.macro_tier.path_loss_slope_db),
            ),
            metro_path_loss: PathLossModel::new(
                T::lit(self.metro.path_loss_intercept_db),
                T::lit(self.metro.path_loss_slope_db),
            ),
            building_attenuation_db: T::lit(self.buildings.attenuation_db),
            user_height_m: T::lit(self.user_height_m),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_reference_parameters() {
        let s = Scenario::default();
        s.validate().unwrap();
        assert_eq!(s.macro_tier.tx_power_dbm, 46.0);
        assert_eq!(s.macro_tier.density_per_km2, 2.05);
        assert_eq!(s.macro_tier.height_m, 30.0);
        assert!((s.metro.density_per_km2 - 15.0 * s.macro_tier.density_per_km2).abs() < 1e-12);
        assert!((s.buildings.density_per_km2 - 15.0 * s.macro_tier.density_per_km2).abs() < 1e-12);
        assert_eq!(
            s.metro_tx_power_for(MetroAntenna::Dipole4, PowerMode::SamePower),
            33.0
        );
    }

    #[test]
    fn same_eirp_powers() {
        let s = Scenario::default();
        let p = |a| s.metro_tx_power_for(a, PowerMode::SameEirp);
        assert!((p(MetroAntenna::Dipole1) - 33.0).abs() < 1e-9);
        assert!((p(MetroAntenna::Dipole2) - 30.0).abs() < 1e-9);
        assert!((p(MetroAntenna::Dipole4) - 27.0).abs() < 1e-9);
        assert!((p(MetroAntenna::QuasiOmni) - 24.95).abs() < 1e-9);
        assert!((p(MetroAntenna::Dipole1) - p(MetroAntenna::QuasiOmni) - 8.05).abs() < 1e-9);
    }

    #[test]
    fn validation_errors() {
        let mut s = Scenario::default();
        s.drops = 0;
        assert!(s.validate().is_err());

        let mut s = Scenario::default();
        s.metro.antenna = MetroAntenna::Dipole1;
        s.metro.downtilt_deg = 4.0;
        assert!(matches!(s.validate(), Err(Error::Config(_))));
        s.metro.downtilt_deg = 0.0;
        s.validate().unwrap();

        let mut s = Scenario::default();
        s.buildings.length_max_m = 5.0;
        assert!(s.validate().is_err());

        let mut s = Scenario::default();
        s.macro_tier.density_per_km2 = -1.0;
        assert!(s.validate().is_err());
    }
}
