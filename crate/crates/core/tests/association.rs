//! Association against an exhaustive per-sector ASAIR enumeration.

use hetsim_core::association::{asair_db, associate, prefers_metro};
use hetsim_core::channel::{PathLossModel, Propagation};
use hetsim_core::geometry::{Building, BuildingIndex, Point2, Tier, Wap};
use hetsim_core::{AntennaPattern, MetroAntenna};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BIAS_DB: f64 = 6.0;

fn propagation() -> Propagation<f64> {
    Propagation {
        macro_path_loss: PathLossModel::macro_urban(),
        metro_path_loss: PathLossModel::metro_urban(),
        building_attenuation_db: -40.0,
        user_height_m: 0.0,
    }
}

fn scene(rng: &mut ChaCha8Rng) -> (Vec<Wap<f64>>, Vec<Building<f64>>) {
    let macro_pattern = AntennaPattern::sector_3gpp(65.0, 25.0, 7.0, -18.0, 18.0).unwrap();
    let n = rng.random_range(1..=10);
    let mut waps = Vec::new();
    let mut sectors = 0;
    while waps.len() < n || sectors < 2 {
        let pos = Point2::new(
            rng.random_range(-600.0..600.0),
            rng.random_range(-600.0..600.0),
        );
        let w = if rng.random_bool(0.3) {
            Wap::macro_site(
                pos,
                30.0,
                46.0,
                rng.random_range(0.0..6.28),
                macro_pattern,
                10.0,
            )
        } else {
            let a = MetroAntenna::ALL[rng.random_range(0..4)];
            let tilt = if a.is_tiltable() {
                rng.random_range(0.0..30.0)
            } else {
                0.0
            };
            Wap::metro_site(pos, 5.0, 33.0, a.pattern(), tilt)
        }
        .unwrap();
        sectors += w.sectors.len();
        waps.push(w);
    }
    let buildings = (0..rng.random_range(0..30))
        .map(|_| {
            Building::new(
                Point2::new(
                    rng.random_range(-600.0..600.0),
                    rng.random_range(-600.0..600.0),
                ),
                rng.random_range(20.0..30.0),
                rng.random_range(0.0..std::f64::consts::PI),
                rng.random_range(10.0..20.0),
            )
            .unwrap()
        })
        .collect();
    (waps, buildings)
}

#[test]
fn matches_enumeration_on_random_scenes() {
    let mut rng = ChaCha8Rng::seed_from_u64(314);
    let prop = propagation();
    let user = Point2::new(0.0, 0.0);
    let mut metro_wins = 0;
    for _ in 0..500 {
        let (waps, buildings) = scene(&mut rng);
        // (tier, wap, sector, asair) for every sector, in index order.
        let mut all = Vec::new();
        for (wi, w) in waps.iter().enumerate() {
            for si in 0..w.sectors.len() {
                let rho = asair_db(wi, si, &waps, user, &buildings, &prop).unwrap();
                all.push((w.tier, wi, si, rho));
            }
        }
        let best = |tier| {
            all.iter()
                .filter(|c| c.0 == tier)
                .fold(None::<&(Tier, usize, usize, f64)>, |b, c| match b {
                    Some(b) if c.3 <= b.3 => Some(b),
                    _ => Some(c),
                })
        };
        let expected = match (best(Tier::Macro), best(Tier::Metro)) {
            (Some(m), Some(s)) => {
                if prefers_metro(m.3, s.3, BIAS_DB) {
                    s
                } else {
                    m
                }
            }
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => unreachable!(),
        };
        let got = associate(user, &waps, &buildings, &prop, BIAS_DB).unwrap();
        assert_eq!(
            (got.tier, got.wap_index, got.sector_index),
            (expected.0, expected.1, expected.2)
        );
        assert!((got.serving_asair_db - expected.3).abs() < 1e-9);
        let indexed =
            associate(user, &waps, &BuildingIndex::new(buildings), &prop, BIAS_DB).unwrap();
        assert_eq!(indexed, got);
        if got.tier == Tier::Metro {
            metro_wins += 1;
        }
    }
    assert!(metro_wins > 50 && metro_wins < 450, "{metro_wins}");
}

#[test]
fn larger_bias_never_moves_users_off_metro() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let prop = propagation();
    for _ in 0..200 {
        let (waps, buildings) = scene(&mut rng);
        let mut last_metro = false;
        for bias in [-20.0, -6.0, 0.0, 3.0, 6.0, 12.0, 40.0] {
            let d = associate(Point2::origin(), &waps, &buildings, &prop, bias).unwrap();
            let metro = d.tier == Tier::Metro;
            assert!(
                metro || !last_metro,
                "bias {bias} moved a user back to macro"
            );
            last_metro = metro;
        }
    }
}
