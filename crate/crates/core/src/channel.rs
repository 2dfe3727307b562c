//! Link budget: transmit power, antenna gain, distance path loss, building
//! shadowing and Rayleigh fading.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::geometry::{
    count_blockages, link_geometry, Building, BuildingIndex, LinkGeometry, Point2, Point3, Sector,
    Tier, Wap,
};
use crate::scalar::Scalar;

/// Log-distance path loss `intercept + slope·log10(d_km)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossModel<T> {
    pub intercept_db: T,
    pub slope_db_per_decade: T,
}

impl<T: Scalar> PathLossModel<T> {
    pub fn new(intercept_db: T, slope_db_per_decade: T) -> Self {
        PathLossModel {
            intercept_db,
            slope_db_per_decade,
        }
    }

    /// Macro-cell urban model at 2 GHz.
    pub fn macro_urban() -> Self {
        Self::new(T::lit(128.1), T::lit(37.6))
    }

    /// Metro-cell model at 2 GHz.
    pub fn metro_urban() -> Self {
        Self::new(T::lit(140.7), T::lit(36.7))
    }

    pub fn loss_db(&self, distance_km: T) -> T {
        self.intercept_db + self.slope_db_per_decade * distance_km.log10()
    }
}

pub fn path_loss_db<T: Scalar>(model: &PathLossModel<T>, distance_km: T) -> T {
    model.loss_db(distance_km)
}

/// Shadowing from `blockages` walls of `attenuation_db` each.
pub fn shadow_db<T: Scalar>(blockages: usize, attenuation_db: T) -> T {
    if blockages == 0 {
        return T::zero();
    }
    T::lit(blockages as f64) * attenuation_db
}

/// Unit-mean exponential power gain of a Rayleigh fading coefficient.
pub fn draw_fading<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    let x: f64 = Exp1.sample(rng);
    T::lit(x)
}

/// Per-tier propagation parameters shared by all links of a drop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagation<T> {
    pub macro_path_loss: PathLossModel<T>,
    pub metro_path_loss: PathLossModel<T>,
    pub building_attenuation_db: T,
    pub user_height_m: T,
}

impl<T: Scalar> Propagation<T> {
    pub fn path_loss(&self, tier: Tier) -> &PathLossModel<T> {
        match tier {
            Tier::Macro => &self.macro_path_loss,
            Tier::Metro => &self.metro_path_loss,
        }
    }
}

/// Fading-averaged budget of one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget<T> {
    pub geometry: LinkGeometry<T>,
    pub blockages: usize,
    pub gain_dbi: T,
    pub path_loss_db: T,
    pub mean_rx_power_dbm: T,
}

/// Where blockage counts come from: a plain list or a spatial index.
pub trait Obstacles<T> {
    fn blockages(&self, tx: Point3<T>, rx: Point3<T>) -> usize;
}

impl<T: Scalar> Obstacles<T> for [Building<T>] {
    fn blockages(&self, tx: Point3<T>, rx: Point3<T>) -> usize {
        count_blockages(tx, rx, self)
    }
}

impl<T: Scalar> Obstacles<T> for Vec<Building<T>> {
    fn blockages(&self, tx: Point3<T>, rx: Point3<T>) -> usize {
        count_blockages(tx, rx, self)
    }
}

impl<T: Scalar> Obstacles<T> for BuildingIndex<T> {
    fn blockages(&self, tx: Point3<T>, rx: Point3<T>) -> usize {
        self.count_blockages(tx, rx)
    }
}

/// Budget of the link from `sector` of `wap` to a user at `user_xy`.
///
/// Path loss is evaluated at the 3D distance; gains use the clamped geometry.
pub fn link_budget<T: Scalar, O: Obstacles<T> + ?Sized>(
    wap: &Wap<T>,
    sector: &Sector<T>,
    user_xy: Point2<T>,
    obstacles: &O,
    propagation: &Propagation<T>,
) -> LinkBudget<T> {
    let geometry = link_geometry(wap, sector, user_xy, propagation.user_height_m);
    let blockages = obstacles.blockages(
        wap.antenna_position(),
        user_xy.with_height(propagation.user_height_m),
    );
    let gain_dbi = sector.pattern.total_gain_dbi(
        geometry.azimuth_offset_deg,
        geometry.elevation_deg,
        sector.downtilt_deg,
    );
    let path_loss_db = propagation
        .path_loss(wap.tier)
        .loss_db(geometry.distance_3d_m / T::lit(1000.0));
    LinkBudget {
        geometry,
        blockages,
        gain_dbi,
        path_loss_db,
        mean_rx_power_dbm: wap.tx_power_dbm + gain_dbi - path_loss_db
            + shadow_db(blockages, propagation.building_attenuation_db),
    }
}

/// Fading-averaged received power in dBm.
pub fn mean_rx_power_dbm<T: Scalar, O: Obstacles<T> + ?Sized>(
    wap: &Wap<T>,
    sector: &Sector<T>,
    user_xy: Point2<T>,
    obstacles: &O,
    propagation: &Propagation<T>,
) -> T {
    link_budget(wap, sector, user_xy, obstacles, propagation).mean_rx_power_dbm
}
