use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ground distance of the outer half-power edge of a tilted main beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellRadius<T> {
    Bounded(T),
    /// The outer half-power ray points at or above the horizon.
    Unbounded,
}

impl<T: Scalar> CellRadius<T> {
    pub fn meters(self) -> Option<T> {
        match self {
            CellRadius::Bounded(r) => Some(r),
            CellRadius::Unbounded => None,
        }
    }
}

/// Radius at which the upper −3 dB edge of the beam meets the user plane.
pub fn cell_radius<T: Scalar>(
    height_m: T,
    user_height_m: T,
    downtilt_deg: T,
    vert_hpbw_deg: T,
) -> Result<CellRadius<T>> {
    if !(height_m > user_height_m) {
        return Err(Error::invalid(
            "height_m",
            format!("antenna height {height_m} m must exceed user height {user_height_m} m"),
        ));
    }
    if !(downtilt_deg >= T::zero() && downtilt_deg < T::lit(90.0)) {
        return Err(Error::invalid(
            "downtilt_deg",
            format!("{downtilt_deg}° outside [0°, 90°)"),
        ));
    }
    if !(vert_hpbw_deg > T::zero() && vert_hpbw_deg < T::lit(180.0)) {
        return Err(Error::invalid(
            "vert_hpbw_deg",
            format!("{vert_hpbw_deg}° outside (0°, 180°)"),
        ));
    }
    let edge = downtilt_deg - vert_hpbw_deg / T::lit(2.0);
    if edge <= T::zero() {
        return Ok(CellRadius::Unbounded);
    }
    Ok(CellRadius::Bounded(
        (height_m - user_height_m) / edge.to_radians().tan(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(tilt: f64, hpbw: f64) -> f64 {
        cell_radius(5.0, 0.0, tilt, hpbw).unwrap().meters().unwrap()
    }

    #[test]
    fn published_radii() {
        assert!((r(10.0, 19.5) - 1145.9).abs() < 0.1);
        assert!((r(20.0, 14.0) - 21.7).abs() < 0.1);
    }

    #[test]
    fn unbounded_when_edge_above_horizon() {
        assert_eq!(
            cell_radius(5.0, 0.0, 5.0, 14.0).unwrap(),
            CellRadius::Unbounded
        );
        assert_eq!(
            cell_radius(5.0, 0.0, 7.0, 14.0).unwrap(),
            CellRadius::Unbounded
        );
    }

    #[test]
    fn errors() {
        assert!(cell_radius(5.0, 5.0, 10.0, 14.0).is_err());
        assert!(cell_radius(5.0, 0.0, 90.0, 14.0).is_err());
    }

    #[test]
    fn monotone_in_tilt_and_beamwidth() {
        let mut last = f64::INFINITY;
        for tilt in [10.0, 15.0, 20.0, 30.0, 40.0, 60.0] {
            let v = r(tilt, 14.0);
            assert!(v < last);
            last = v;
        }
        assert!(r(30.0, 19.5) > r(30.0, 14.0));
    }
}
