//! Parametric 3D antenna patterns with electrical downtilt.
//!
//! Gains are composed in dB as horizontal + vertical + peak gain. All angles
//! at this interface are in degrees: `phi` is the azimuth offset from the
//! sector boresight and `theta` is the depression angle below the horizon
//! (positive when the transmitter is above the receiver).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `10·log10(2)`, the exact half-power level in dB.
pub const HALF_POWER_DB: f64 = core::f64::consts::LOG10_2 * 10.0;

/// Floor for dipole patterns that carry no side-lobe level, standing in for
/// the null at ±90° off boresight.
pub const DIPOLE_FLOOR_DB: f64 = -250.0;

/// Horizontal roll-off coefficient of the sector pattern (dB at one HPBW).
const HORIZONTAL_ROLLOFF_DB: f64 = 12.0;

/// Vertical parabolic roll-off, scaled so the lobe is at exact half power
/// at ±HPBW/2.
const VERTICAL_ROLLOFF_DB: f64 = 4.0 * HALF_POWER_DB;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AntennaPattern<T> {
    /// Three-sector macro pattern with parabolic horizontal and vertical lobes.
    Sector3gpp {
        horiz_hpbw_deg: T,
        fbr_db: T,
        vert_hpbw_deg: T,
        sll_db: T,
        max_gain_dbi: T,
    },
    /// Horizontally omnidirectional dipole array with a `|cos|^n` vertical lobe.
    Dipole {
        vert_hpbw_deg: T,
        exponent: T,
        sll_db: Option<T>,
        max_gain_dbi: T,
    },
    /// Horizontally omnidirectional panel array with a parabolic vertical lobe.
    QuasiOmni {
        vert_hpbw_deg: T,
        sll_db: T,
        max_gain_dbi: T,
    },
}

fn check_hpbw<T: Scalar>(name: &'static str, hpbw: T) -> Result<()> {
    if !(hpbw > T::zero() && hpbw < T::lit(180.0)) {
        return Err(Error::invalid(
            name,
            format!("HPBW {hpbw}° outside (0°, 180°)"),
        ));
    }
    Ok(())
}

fn check_sll<T: Scalar>(sll: T) -> Result<()> {
    if !(sll <= T::zero()) {
        return Err(Error::invalid(
            "sll_db",
            format!("side-lobe level {sll} dB must be ≤ 0"),
        ));
    }
    Ok(())
}

fn check_gain<T: Scalar>(gain: T) -> Result<()> {
    if !gain.is_finite() {
        return Err(Error::invalid("max_gain_dbi", "must be finite"));
    }
    Ok(())
}

/// Exponent `n` for which `|cos x|^n` is at exact half power at `x = ±hpbw/2`.
pub fn dipole_exponent<T: Scalar>(vert_hpbw_deg: T) -> Result<T> {
    check_hpbw("vert_hpbw_deg", vert_hpbw_deg)?;
    let half = (vert_hpbw_deg / T::lit(2.0)).to_radians();
    Ok(T::LN_2() / -half.cos().ln())
}

impl<T: Scalar> AntennaPattern<T> {
    pub fn sector_3gpp(
        horiz_hpbw_deg: T,
        fbr_db: T,
        vert_hpbw_deg: T,
        sll_db: T,
        max_gain_dbi: T,
    ) -> Result<Self> {
        check_hpbw("horiz_hpbw_deg", horiz_hpbw_deg)?;
        check_hpbw("vert_hpbw_deg", vert_hpbw_deg)?;
        if !(fbr_db >= T::zero()) {
            return Err(Error::invalid(
                "fbr_db",
                format!("front-to-back ratio {fbr_db} dB must be ≥ 0"),
            ));
        }
        check_sll(sll_db)?;
        check_gain(max_gain_dbi)?;
        Ok(AntennaPattern::Sector3gpp {
            horiz_hpbw_deg,
            fbr_db,
            vert_hpbw_deg,
            sll_db,
            max_gain_dbi,
        })
    }

    /// Dipole array; the exponent is derived from the vertical HPBW.
    pub fn dipole(vert_hpbw_deg: T, sll_db: Option<T>, max_gain_dbi: T) -> Result<Self> {
        let exponent = dipole_exponent(vert_hpbw_deg)?;
        if let Some(sll) = sll_db {
            check_sll(sll)?;
        }
        check_gain(max_gain_dbi)?;
        Ok(AntennaPattern::Dipole {
            vert_hpbw_deg,
            exponent,
            sll_db,
            max_gain_dbi,
        })
    }

    pub fn quasi_omni(vert_hpbw_deg: T, sll_db: T, max_gain_dbi: T) -> Result<Self> {
        check_hpbw("vert_hpbw_deg", vert_hpbw_deg)?;
        check_sll(sll_db)?;
        check_gain(max_gain_dbi)?;
        Ok(AntennaPattern::QuasiOmni {
            vert_hpbw_deg,
            sll_db,
            max_gain_dbi,
        })
    }

    pub fn max_gain_dbi(&self) -> T {
        match *self {
            AntennaPattern::Sector3gpp { max_gain_dbi, .. }
            | AntennaPattern::Dipole { max_gain_dbi, .. }
            | AntennaPattern::QuasiOmni { max_gain_dbi, .. } => max_gain_dbi,
        }
    }

    pub fn vert_hpbw_deg(&self) -> T {
        match *self {
            AntennaPattern::Sector3gpp { vert_hpbw_deg, .. }
            | AntennaPattern::Dipole { vert_hpbw_deg, .. }
            | AntennaPattern::QuasiOmni { vert_hpbw_deg, .. } => vert_hpbw_deg,
        }
    }

    /// Lowest value the vertical pattern can take, in dB.
    pub fn vertical_floor_db(&self) -> T {
        match *self {
            AntennaPattern::Sector3gpp { sll_db, .. }
            | AntennaPattern::QuasiOmni { sll_db, .. } => sll_db,
            AntennaPattern::Dipole { sll_db, .. } => sll_db.unwrap_or(T::lit(DIPOLE_FLOOR_DB)),
        }
    }

    pub fn is_omni(&self) -> bool {
        !matches!(self, AntennaPattern::Sector3gpp { .. })
    }

    /// Normalized horizontal gain at azimuth offset `phi_deg` ∈ [−180°, 180°].
    pub fn horizontal_gain_db(&self, phi_deg: T) -> T {
        match *self {
            AntennaPattern::Sector3gpp {
                horiz_hpbw_deg,
                fbr_db,
                ..
            } => {
                let x = phi_deg / horiz_hpbw_deg;
                -(T::lit(HORIZONTAL_ROLLOFF_DB) * x * x).min(fbr_db)
            }
            AntennaPattern::Dipole { .. } | AntennaPattern::QuasiOmni { .. } => T::zero(),
        }
    }

    /// Normalized vertical gain at depression angle `theta_deg` with the beam
    /// electrically tilted down by `tilt_deg`.
    pub fn vertical_gain_db(&self, theta_deg: T, tilt_deg: T) -> T {
        let off = theta_deg - tilt_deg;
        match *self {
            AntennaPattern::Sector3gpp {
                vert_hpbw_deg,
                sll_db,
                ..
            }
            | AntennaPattern::QuasiOmni {
                vert_hpbw_deg,
                sll_db,
                ..
            } => {
                let x = off / vert_hpbw_deg;
                (-T::lit(VERTICAL_ROLLOFF_DB) * x * x).max(sll_db)
            }
            AntennaPattern::Dipole {
                exponent, sll_db, ..
            } => {
                let c = off.to_radians().cos().abs();
                let lobe = T::lit(10.0) * exponent * c.log10();
                lobe.max(sll_db.unwrap_or(T::lit(DIPOLE_FLOOR_DB)))
                    .max(T::lit(DIPOLE_FLOOR_DB))
            }
        }
    }

    /// Total gain in dBi: horizontal + vertical + peak gain.
    pub fn total_gain_dbi(&self, phi_deg: T, theta_deg: T, tilt_deg: T) -> T {
        self.horizontal_gain_db(phi_deg)
            + self.vertical_gain_db(theta_deg, tilt_deg)
            + self.max_gain_dbi()
    }
}

/// The metro-cell antennas compared in the study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetroAntenna {
    Dipole1,
    Dipole2,
    Dipole4,
    QuasiOmni,
}

impl MetroAntenna {
    pub const ALL: [MetroAntenna; 4] = [
        MetroAntenna::Dipole1,
        MetroAntenna::Dipole2,
        MetroAntenna::Dipole4,
        MetroAntenna::QuasiOmni,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetroAntenna::Dipole1 => "dipole1",
            MetroAntenna::Dipole2 => "dipole2",
            MetroAntenna::Dipole4 => "dipole4",
            MetroAntenna::QuasiOmni => "quasi_omni",
        }
    }

    pub fn vert_hpbw_deg(self) -> f64 {
        match self {
            MetroAntenna::Dipole1 => 78.0,
            MetroAntenna::Dipole2 => 39.0,
            MetroAntenna::Dipole4 => 19.5,
            MetroAntenna::QuasiOmni => 14.0,
        }
    }

    pub fn sll_db(self) -> Option<f64> {
        match self {
            MetroAntenna::Dipole1 => None,
            MetroAntenna::Dipole2 => Some(-10.0),
            MetroAntenna::Dipole4 => Some(-12.0),
            MetroAntenna::QuasiOmni => Some(-16.0),
        }
    }

    pub fn max_gain_dbi(self) -> f64 {
        match self {
            MetroAntenna::Dipole1 => 2.15,
            MetroAntenna::Dipole2 => 5.15,
            MetroAntenna::Dipole4 => 8.15,
            MetroAntenna::QuasiOmni => 10.2,
        }
    }

    /// The single-element dipole has no electrical tilt.
    pub fn is_tiltable(self) -> bool {
        self != MetroAntenna::Dipole1
    }

    pub fn pattern<T: Scalar>(self) -> AntennaPattern<T> {
        let hpbw = T::lit(self.vert_hpbw_deg());
        let gain = T::lit(self.max_gain_dbi());
        let built = match self {
            MetroAntenna::QuasiOmni => AntennaPattern::quasi_omni(hpbw, T::lit(-16.0), gain),
            _ => AntennaPattern::dipole(hpbw, self.sll_db().map(T::lit), gain),
        };
        built.expect("built-in metro antenna parameters are valid")
    }
}

impl fmt::Display for MetroAntenna {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetroAntenna {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MetroAntenna::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown metro antenna `{s}` (expected one of dipole1, dipole2, dipole4, quasi_omni)"
                ))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn macro_pattern() -> AntennaPattern<f64> {
        AntennaPattern::sector_3gpp(65.0, 25.0, 7.0, -18.0, 18.0).unwrap()
    }

    #[test]
    fn dipole_exponents_match_published_values() {
        for (hpbw, n) in [(78.0, 2.75), (39.0, 11.73), (19.5, 47.64)] {
            let got = dipole_exponent::<f64>(hpbw).unwrap();
            assert!((got - n).abs() < 0.01, "hpbw {hpbw}: {got}");
        }
        assert!(dipole_exponent(0.0).is_err());
        assert!(dipole_exponent(180.0).is_err());
        assert!(dipole_exponent(f64::NAN).is_err());
    }

    #[test]
    fn horizontal_sector_gain() {
        let p = macro_pattern();
        assert_eq!(p.horizontal_gain_db(0.0), 0.0);
        assert!((p.horizontal_gain_db(32.5) + 3.0).abs() < 1e-12);
        assert_eq!(p.horizontal_gain_db(180.0), -25.0);
        assert_eq!(p.horizontal_gain_db(-180.0), -25.0);
        assert_eq!(
            MetroAntenna::QuasiOmni
                .pattern::<f64>()
                .horizontal_gain_db(123.0),
            0.0
        );
    }

    #[test]
    fn vertical_examples() {
        let q = MetroAntenna::QuasiOmni.pattern::<f64>();
        assert_eq!(q.vertical_gain_db(8.0, 8.0), 0.0);
        assert!((q.vertical_gain_db(15.0, 8.0) + HALF_POWER_DB).abs() < 1e-12);

        let d2 = AntennaPattern::dipole(39.0, Some(-10.0), 5.15).unwrap();
        // 10·n·log10(cos 60°) ≈ −35.3 dB, floored at the side-lobe level.
        assert_eq!(d2.vertical_gain_db(60.0, 0.0), -10.0);

        assert_eq!(macro_pattern().vertical_gain_db(40.0, 10.0), -18.0);
    }

    #[test]
    fn single_dipole_reaches_numeric_floor_at_null() {
        let d1 = MetroAntenna::Dipole1.pattern::<f64>();
        let g = d1.vertical_gain_db(90.0, 0.0);
        assert_eq!(g, DIPOLE_FLOOR_DB);
        assert!(g.is_finite());
    }

    #[test]
    fn total_gain_examples() {
        assert!(
            (MetroAntenna::QuasiOmni
                .pattern::<f64>()
                .total_gain_dbi(0.0, 3.0, 3.0)
                - 10.2)
                .abs()
                < 1e-12
        );
        assert!(
            (MetroAntenna::Dipole4
                .pattern::<f64>()
                .total_gain_dbi(77.0, 0.0, 0.0)
                - 8.15)
                .abs()
                < 1e-12
        );
        // Half power in both planes, vertical at the exact −3.0103 dB level.
        let g = macro_pattern().total_gain_dbi(32.5, 13.5, 10.0);
        assert!((g - 12.0).abs() < 0.02, "{g}");
        assert!((g - (18.0 - 3.0 - HALF_POWER_DB)).abs() < 1e-12);
    }

    #[test]
    fn element_doubling_adds_three_db() {
        let g: Vec<f64> = [
            MetroAntenna::Dipole1,
            MetroAntenna::Dipole2,
            MetroAntenna::Dipole4,
        ]
        .iter()
        .map(|a| a.pattern::<f64>().max_gain_dbi())
        .collect();
        assert!((g[1] - g[0] - 3.0).abs() < 1e-12);
        assert!((g[2] - g[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(AntennaPattern::<f64>::sector_3gpp(65.0, -1.0, 7.0, -18.0, 18.0).is_err());
        assert!(AntennaPattern::<f64>::quasi_omni(14.0, 3.0, 10.2).is_err());
        assert!(AntennaPattern::<f64>::dipole(39.0, None, f64::INFINITY).is_err());
    }

    #[test]
    fn f32_matches_f64() {
        let p32 = MetroAntenna::Dipole4.pattern::<f32>();
        let p64 = MetroAntenna::Dipole4.pattern::<f64>();
        for x in [-30.0, -9.75, 0.0, 4.0, 12.5] {
            let a = p32.vertical_gain_db(x as f32, 0.0) as f64;
            let b = p64.vertical_gain_db(x, 0.0);
            assert!((a - b).abs() < 1e-3, "{x}: {a} vs {b}");
        }
    }

    #[test]
    fn metro_antenna_names_parse() {
        for a in MetroAntenna::ALL {
            assert_eq!(a.name().parse::<MetroAntenna>().unwrap(), a);
        }
        assert!("dipole3".parse::<MetroAntenna>().is_err());
    }
}
