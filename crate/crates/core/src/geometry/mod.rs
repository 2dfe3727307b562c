//! Node placement and link geometry.
//!
//! Horizontal positions and every length are in meters; densities are per
//! square kilometer. Azimuths are counter-clockwise from the +x axis.

mod blockage;
mod index;

pub use blockage::{count_blockages, path_blocked_by};
pub use index::BuildingIndex;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::antenna::AntennaPattern;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Shortest horizontal link distance used for angles and path loss.
pub const MIN_DISTANCE_M: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Point2 { x, y }
    }

    pub fn origin() -> Self {
        Point2::new(T::zero(), T::zero())
    }

    pub fn distance(self, other: Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn with_height(self, z: T) -> Point3<T> {
        Point3 {
            x: self.x,
            y: self.y,
            z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Point3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Point3 { x, y, z }
    }

    pub fn xy(self) -> Point2<T> {
        Point2::new(self.x, self.y)
    }
}

/// Disc-shaped simulation window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region<T> {
    center: Point2<T>,
    radius_m: T,
}

impl<T: Scalar> Region<T> {
    pub fn disc(center: Point2<T>, radius_m: T) -> Result<Self> {
        if !(radius_m > T::zero() && radius_m.is_finite()) {
            return Err(Error::invalid(
                "radius",
                format!("region radius {radius_m} m must be positive"),
            ));
        }
        Ok(Region { center, radius_m })
    }

    pub fn center(&self) -> Point2<T> {
        self.center
    }

    pub fn radius_m(&self) -> T {
        self.radius_m
    }

    pub fn area_km2(&self) -> T {
        let r_km = self.radius_m / T::lit(1000.0);
        T::PI() * r_km * r_km
    }

    /// Uniform point in the disc.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2<T> {
        let r = self.radius_m.as_f64() * rng.random::<f64>().sqrt();
        let a = core::f64::consts::TAU * rng.random::<f64>();
        Point2::new(
            self.center.x + T::lit(r * a.cos()),
            self.center.y + T::lit(r * a.sin()),
        )
    }
}

/// Homogeneous Poisson point process of `density_per_km2` restricted to `region`.
pub fn sample_ppp<T: Scalar, R: Rng + ?Sized>(
    density_per_km2: T,
    region: &Region<T>,
    rng: &mut R,
) -> Result<Vec<Point2<T>>> {
    if !(density_per_km2 >= T::zero() && density_per_km2.is_finite()) {
        return Err(Error::invalid(
            "density",
            format!("density {density_per_km2} must be ≥ 0"),
        ));
    }
    let mean = (density_per_km2 * region.area_km2()).as_f64();
    if mean == 0.0 {
        return Ok(Vec::new());
    }
    let count = Poisson::new(mean)
        .map_err(|e| Error::invalid("density", e.to_string()))?
        .sample(rng) as usize;
    Ok((0..count).map(|_| region.sample_point(rng)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tier {
    Macro,
    Metro,
}

impl Tier {
    pub fn name(self) -> &'static str {
        match self {
            Tier::Macro => "macro",
            Tier::Metro => "metro",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sector<T> {
    /// Boresight azimuth in radians, in `[0, 2π)`.
    pub boresight_azimuth: T,
    pub pattern: AntennaPattern<T>,
    pub downtilt_deg: T,
}

impl<T: Scalar> Sector<T> {
    pub fn new(boresight_azimuth: T, pattern: AntennaPattern<T>, downtilt_deg: T) -> Result<Self> {
        if !(boresight_azimuth >= T::zero() && boresight_azimuth < T::TAU()) {
            return Err(Error::invalid(
                "boresight_azimuth",
                format!("{boresight_azimuth} rad outside [0, 2π)"),
            ));
        }
        if !(downtilt_deg >= T::zero() && downtilt_deg < T::lit(90.0)) {
            return Err(Error::invalid(
                "downtilt_deg",
                format!("{downtilt_deg}° outside [0°, 90°)"),
            ));
        }
        Ok(Sector {
            boresight_azimuth,
            pattern,
            downtilt_deg,
        })
    }
}

/// A placed wireless access point.
#[derive(Debug, Clone, PartialEq)]
pub struct Wap<T> {
    pub tier: Tier,
    pub position: Point2<T>,
    pub height_m: T,
    pub tx_power_dbm: T,
    pub sectors: Vec<Sector<T>>,
}

impl<T: Scalar> Wap<T> {
    /// Three-sector macro site; siblings sit at +120° and +240° from the first.
    pub fn macro_site(
        position: Point2<T>,
        height_m: T,
        tx_power_dbm: T,
        first_azimuth: T,
        pattern: AntennaPattern<T>,
        downtilt_deg: T,
    ) -> Result<Self> {
        check_height(height_m)?;
        let step = T::TAU() / T::lit(3.0);
        let sectors = (0..3)
            .map(|k| {
                let mut az = first_azimuth + step * T::lit(k as f64);
                if az >= T::TAU() {
                    az = az - T::TAU();
                }
                Sector::new(az, pattern, downtilt_deg)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Wap {
            tier: Tier::Macro,
            position,
            height_m,
            tx_power_dbm,
            sectors,
        })
    }

    pub fn metro_site(
        position: Point2<T>,
        height_m: T,
        tx_power_dbm: T,
        pattern: AntennaPattern<T>,
        downtilt_deg: T,
    ) -> Result<Self> {
        check_height(height_m)?;
        if !pattern.is_omni() {
            return Err(Error::invalid(
                "pattern",
                "metro sites use a horizontally omnidirectional pattern",
            ));
        }
        Ok(Wap {
            tier: Tier::Metro,
            position,
            height_m,
            tx_power_dbm,
            sectors: vec![Sector::new(T::zero(), pattern, downtilt_deg)?],
        })
    }

    pub fn antenna_position(&self) -> Point3<T> {
        self.position.with_height(self.height_m)
    }
}

fn check_height<T: Scalar>(h: T) -> Result<()> {
    if !(h > T::zero() && h.is_finite()) {
        return Err(Error::invalid(
            "height_m",
            format!("antenna height {h} m must be positive"),
        ));
    }
    Ok(())
}

/// A building reduced to a vertical wall: a footprint segment with a height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Building<T> {
    pub center: Point2<T>,
    pub length_m: T,
    /// Direction of the footprint in radians, in `[0, π)`.
    pub orientation: T,
    pub height_m: T,
}

impl<T: Scalar> Building<T> {
    pub fn new(center: Point2<T>, length_m: T, orientation: T, height_m: T) -> Result<Self> {
        if !(length_m > T::zero()) {
            return Err(Error::invalid(
                "length_m",
                "building length must be positive",
            ));
        }
        if !(height_m > T::zero()) {
            return Err(Error::invalid(
                "height_m",
                "building height must be positive",
            ));
        }
        Ok(Building {
            center,
            length_m,
            orientation,
            height_m,
        })
    }

    /// End points of the footprint segment.
    pub fn endpoints(&self) -> (Point2<T>, Point2<T>) {
        let half = self.length_m / T::lit(2.0);
        let (s, c) = self.orientation.sin_cos();
        (
            Point2::new(self.center.x - half * c, self.center.y - half * s),
            Point2::new(self.center.x + half * c, self.center.y + half * s),
        )
    }
}

/// Geometry of one sector-to-user link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry<T> {
    pub distance_2d_m: T,
    pub distance_3d_m: T,
    /// Azimuth of the user relative to the sector boresight, in `(−180°, 180°]`.
    pub azimuth_offset_deg: T,
    /// Depression angle of the user seen from the antenna, positive downward.
    pub elevation_deg: T,
}

/// Wraps an angle in degrees into `(−180°, 180°]`.
pub fn wrap_degrees<T: Scalar>(deg: T) -> T {
    let full = T::lit(360.0);
    let half = T::lit(180.0);
    let mut w = deg % full;
    if w > half {
        w = w - full;
    } else if w <= -half {
        w = w + full;
    }
    w
}

pub fn link_geometry<T: Scalar>(
    wap: &Wap<T>,
    sector: &Sector<T>,
    user_xy: Point2<T>,
    user_height_m: T,
) -> LinkGeometry<T> {
    let dx = user_xy.x - wap.position.x;
    let dy = user_xy.y - wap.position.y;
    let d2 = dx.hypot(dy).max(T::lit(MIN_DISTANCE_M));
    let dh = wap.height_m - user_height_m;
    let bearing = dy.atan2(dx).to_degrees();
    LinkGeometry {
        distance_2d_m: d2,
        distance_3d_m: d2.hypot(dh),
        azimuth_offset_deg: wrap_degrees(bearing - sector.boresight_azimuth.to_degrees()),
        elevation_deg: (dh / d2).atan().to_degrees(),
    }
}
