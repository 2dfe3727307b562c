//! Biased average-signal-to-average-interference (ASAIR) association.
//!
//! 1. Pick the macro sector with the highest mean received power.
//! 2. Pick the metro cell with the highest mean received power.
//! 3. Serve from the metro cell if its ASAIR is at least the macro ASAIR
//!    minus the bias β (dB), otherwise from the macro sector.
//!
//! Means are averaged over small-scale fading only; antenna gain, path loss
//! and building shadowing are kept. Every sector other than the candidate,
//! including co-sited sectors, counts as interference.

use crate::channel::{mean_rx_power_dbm, Obstacles, Propagation};
use crate::error::{Error, Result};
use crate::geometry::{Point2, Tier, Wap};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociationDecision<T> {
    pub tier: Tier,
    pub wap_index: usize,
    /// Always 0 for metro cells.
    pub sector_index: usize,
    pub serving_asair_db: T,
}

/// Mean received power of one sector at the user, in linear units (mW).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorPower<T> {
    pub tier: Tier,
    pub wap_index: usize,
    pub sector_index: usize,
    pub mean_mw: T,
}

/// Step 3 of the association rule.
pub fn prefers_metro<T: Scalar>(macro_asair_db: T, metro_asair_db: T, bias_db: T) -> bool {
    metro_asair_db >= macro_asair_db - bias_db
}

/// Strongest sector of a tier; ties keep the earliest (wap, sector).
fn strongest<T: Scalar>(powers: &[SectorPower<T>], tier: Tier) -> Option<&SectorPower<T>> {
    powers
        .iter()
        .filter(|p| p.tier == tier)
        .fold(None, |best, p| match best {
            Some(b) if p.mean_mw <= b.mean_mw => Some(b),
            _ => Some(p),
        })
}

/// ASAIR in dB of `candidate` given the per-tier totals of mean power.
fn asair_from_totals<T: Scalar>(
    candidate: &SectorPower<T>,
    macro_total: T,
    metro_total: T,
) -> Result<T> {
    let others = match candidate.tier {
        Tier::Macro => (macro_total - candidate.mean_mw) + metro_total,
        Tier::Metro => (metro_total - candidate.mean_mw) + macro_total,
    };
    if !(others > T::zero()) {
        return Err(Error::Degenerate(
            "no interfering sector in the window".into(),
        ));
    }
    Ok(T::linear_to_db(candidate.mean_mw / others))
}

/// Applies the three association steps to precomputed mean powers.
pub fn associate_powers<T: Scalar>(
    powers: &[SectorPower<T>],
    bias_db: T,
) -> Result<AssociationDecision<T>> {
    let total = |tier| {
        powers
            .iter()
            .filter(|p| p.tier == tier)
            .map(|p| p.mean_mw)
            .sum::<T>()
    };
    decide(
        strongest(powers, Tier::Macro).copied(),
        strongest(powers, Tier::Metro).copied(),
        total(Tier::Macro),
        total(Tier::Metro),
        bias_db,
    )
}

/// Step 3 given each tier's strongest sector and per-tier mean-power totals.
pub(crate) fn decide<T: Scalar>(
    macro_best: Option<SectorPower<T>>,
    metro_best: Option<SectorPower<T>>,
    macro_total: T,
    metro_total: T,
    bias_db: T,
) -> Result<AssociationDecision<T>> {
    let pick = |p: SectorPower<T>, asair: T| AssociationDecision {
        tier: p.tier,
        wap_index: p.wap_index,
        sector_index: p.sector_index,
        serving_asair_db: asair,
    };
    match (macro_best, metro_best) {
        (Some(m1), Some(m2)) => {
            let rho1 = asair_from_totals(&m1, macro_total, metro_total)?;
            let rho2 = asair_from_totals(&m2, macro_total, metro_total)?;
            Ok(if prefers_metro(rho1, rho2, bias_db) {
                pick(m2, rho2)
            } else {
                pick(m1, rho1)
            })
        }
        (Some(only), None) | (None, Some(only)) => Ok(pick(
            only,
            asair_from_totals(&only, macro_total, metro_total)?,
        )),
        (None, None) => Err(Error::Degenerate("no access point in the window".into())),
    }
}

/// Mean power of every sector of every WAP, in WAP then sector order.
pub fn sector_powers<T: Scalar, O: Obstacles<T> + ?Sized>(
    waps: &[Wap<T>],
    user_xy: Point2<T>,
    obstacles: &O,
    propagation: &Propagation<T>,
) -> Vec<SectorPower<T>> {
    waps.iter()
        .enumerate()
        .flat_map(|(wi, wap)| {
            wap.sectors
                .iter()
                .enumerate()
                .map(move |(si, sector)| SectorPower {
                    tier: wap.tier,
                    wap_index: wi,
                    sector_index: si,
                    mean_mw: T::db_to_linear(mean_rx_power_dbm(
                        wap,
                        sector,
                        user_xy,
                        obstacles,
                        propagation,
                    )),
                })
        })
        .collect()
}

/// ASAIR in dB of sector `sector_index` of `waps[wap_index]`, summing the
/// interference of every other sector directly.
pub fn asair_db<T: Scalar, O: Obstacles<T> + ?Sized>(
    wap_index: usize,
    sector_index: usize,
    waps: &[Wap<T>],
    user_xy: Point2<T>,
    obstacles: &O,
    propagation: &Propagation<T>,
) -> Result<T> {
    let powers = sector_powers(waps, user_xy, obstacles, propagation);
    let desired = powers
        .iter()
        .find(|p| p.wap_index == wap_index && p.sector_index == sector_index)
        .ok_or_else(|| {
            Error::invalid(
                "candidate",
                format!("no sector {sector_index} at WAP {wap_index}"),
            )
        })?;
    let interferers: Vec<T> = powers
        .iter()
        .filter(|p| !(p.wap_index == wap_index && p.sector_index == sector_index))
        .map(|p| p.mean_mw)
        .collect();
    if interferers.is_empty() {
        return Err(Error::Degenerate(
            "no interfering sector in the window".into(),
        ));
    }
    let interference: T = interferers.into_iter().sum();
    Ok(T::linear_to_db(desired.mean_mw / interference))
}

/// Associates the user at `user_xy` with a macro sector or metro cell.
pub fn associate<T: Scalar, O: Obstacles<T> + ?Sized>(
    user_xy: Point2<T>,
    waps: &[Wap<T>],
    obstacles: &O,
    propagation: &Propagation<T>,
    bias_db: T,
) -> Result<AssociationDecision<T>> {
    associate_powers(
        &sector_powers(waps, user_xy, obstacles, propagation),
        bias_db,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antenna::{AntennaPattern, MetroAntenna};
    use crate::channel::PathLossModel;
    use crate::geometry::Building;

    fn propagation() -> Propagation<f64> {
        Propagation {
            macro_path_loss: PathLossModel::macro_urban(),
            metro_path_loss: PathLossModel::metro_urban(),
            building_attenuation_db: -40.0,
            user_height_m: 0.0,
        }
    }

    fn macro_pattern() -> AntennaPattern<f64> {
        AntennaPattern::sector_3gpp(65.0, 25.0, 7.0, -18.0, 18.0).unwrap()
    }

    fn metro(x: f64, y: f64, p: f64) -> Wap<f64> {
        Wap::metro_site(
            Point2::new(x, y),
            5.0,
            p,
            MetroAntenna::QuasiOmni.pattern(),
            0.0,
        )
        .unwrap()
    }

    const NONE: [Building<f64>; 0] = [];

    #[test]
    fn bias_boundary_goes_to_metro() {
        assert!(prefers_metro(10.0, 4.0, 6.0));
        assert!(!prefers_metro(10.0, 3.999, 6.0));
        assert!(prefers_metro(-2.0, -8.0, 6.0));
    }

    #[test]
    fn symmetric_pair_has_zero_asair() {
        let waps = vec![metro(50.0, 0.0, 33.0), metro(-50.0, 0.0, 33.0)];
        let a = asair_db(0, 0, &waps, Point2::origin(), &NONE[..], &propagation()).unwrap();
        assert!(a.abs() < 1e-9);
    }

    #[test]
    fn single_interferer_forty_db_down() {
        let waps = vec![metro(100.0, 0.0, 33.0), metro(-100.0, 0.0, 33.0)];
        let wall = [Building::new(Point2::new(-50.0, 0.0), 20.0, 1.5, 15.0).unwrap()];
        let a = asair_db(0, 0, &waps, Point2::origin(), &wall[..], &propagation()).unwrap();
        assert!((a - 40.0).abs() < 1e-9, "{a}");
    }

    #[test]
    fn asair_invariant_to_common_power_offset() {
        let pattern = macro_pattern();
        let mut waps = vec![
            Wap::macro_site(Point2::new(400.0, 100.0), 30.0, 46.0, 3.0, pattern, 10.0).unwrap(),
            metro(80.0, -30.0, 33.0),
            metro(-200.0, 150.0, 33.0),
        ];
        let before = asair_db(1, 0, &waps, Point2::origin(), &NONE[..], &propagation()).unwrap();
        for w in &mut waps {
            w.tx_power_dbm += 10.0;
        }
        let after = asair_db(1, 0, &waps, Point2::origin(), &NONE[..], &propagation()).unwrap();
        assert!((before - after).abs() < 1e-9);
    }

    #[test]
    fn lone_sector_is_degenerate() {
        let waps = vec![metro(10.0, 0.0, 33.0)];
        assert!(asair_db(0, 0, &waps, Point2::origin(), &NONE[..], &propagation()).is_err());
        assert!(associate(Point2::origin(), &waps, &NONE[..], &propagation(), 6.0).is_err());
        assert!(
            associate::<f64, _>(Point2::origin(), &[], &NONE[..], &propagation(), 6.0).is_err()
        );
    }

    #[test]
    fn macro_only_scenario_picks_macro() {
        let waps = vec![
            Wap::macro_site(
                Point2::new(300.0, 0.0),
                30.0,
                46.0,
                0.5,
                macro_pattern(),
                10.0,
            )
            .unwrap(),
            Wap::macro_site(
                Point2::new(-900.0, 200.0),
                30.0,
                46.0,
                2.5,
                macro_pattern(),
                10.0,
            )
            .unwrap(),
        ];
        let d = associate(Point2::origin(), &waps, &NONE[..], &propagation(), 6.0).unwrap();
        assert_eq!(d.tier, Tier::Macro);
        // The co-sited sectors still interfere, so the ASAIR is finite.
        assert!(d.serving_asair_db.is_finite());
    }

    #[test]
    fn metro_only_scenario_picks_nearest_metro() {
        let waps = vec![
            metro(300.0, 0.0, 33.0),
            metro(40.0, 10.0, 33.0),
            metro(-90.0, 0.0, 33.0),
        ];
        let d = associate(Point2::origin(), &waps, &NONE[..], &propagation(), 6.0).unwrap();
        assert_eq!((d.tier, d.wap_index, d.sector_index), (Tier::Metro, 1, 0));
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let powers = [
            SectorPower {
                tier: Tier::Metro,
                wap_index: 0,
                sector_index: 0,
                mean_mw: 1.0,
            },
            SectorPower {
                tier: Tier::Metro,
                wap_index: 1,
                sector_index: 0,
                mean_mw: 2.0,
            },
            SectorPower {
                tier: Tier::Metro,
                wap_index: 2,
                sector_index: 0,
                mean_mw: 2.0,
            },
        ];
        let d = associate_powers(&powers, 6.0).unwrap();
        assert_eq!(d.wap_index, 1);
    }

    #[test]
    fn extreme_bias_forces_tier() {
        let waps = vec![
            Wap::macro_site(
                Point2::new(300.0, 0.0),
                30.0,
                46.0,
                3.0,
                macro_pattern(),
                10.0,
            )
            .unwrap(),
            metro(250.0, 40.0, 33.0),
        ];
        let prop = propagation();
        assert_eq!(
            associate(Point2::origin(), &waps, &NONE[..], &prop, -1e6)
                .unwrap()
                .tier,
            Tier::Macro
        );
        assert_eq!(
            associate(Point2::origin(), &waps, &NONE[..], &prop, 1e6)
                .unwrap()
                .tier,
            Tier::Metro
        );
    }
}
