use super::drop::DropResult;
use crate::geometry::Tier;

/// Network-level performance estimated from typical-user drops.
///
/// `r1`/`r2` are mean spectral efficiencies of macro- and metro-served drops.
/// Area spectral efficiency counts three sectors per macro site:
/// `ase = 3·λ1·r1 + λ2·r2`; the average user rate mixes the tiers by the
/// served fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkMetrics {
    pub ase: f64,
    pub ase_stderr: f64,
    pub avg_user_rate: f64,
    pub rate_stderr: f64,
    pub metro_fraction: f64,
    pub metro_fraction_stderr: f64,
    pub r1: f64,
    pub r2: f64,
    pub macro_drops: usize,
    pub metro_drops: usize,
    pub macro_density_per_km2: f64,
    pub metro_density_per_km2: f64,
    /// Tiers that served no drop; their conditional mean is taken as 0.
    pub empty_tiers: Vec<Tier>,
}

impl NetworkMetrics {
    pub fn drops(&self) -> usize {
        self.macro_drops + self.metro_drops
    }
}

#[derive(Default)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Squared standard error of the mean.
    fn mean_variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64 / self.n as f64
        }
    }
}

/// Aggregates drops in the given order.
pub fn aggregate(
    results: &[DropResult],
    macro_density_per_km2: f64,
    metro_density_per_km2: f64,
) -> NetworkMetrics {
    let mut macro_tier = Moments::default();
    let mut metro_tier = Moments::default();
    let mut all = Moments::default();
    for r in results {
        match r.tier {
            Tier::Macro => macro_tier.push(r.spectral_efficiency),
            Tier::Metro => metro_tier.push(r.spectral_efficiency),
        }
        all.push(r.spectral_efficiency);
    }

    let mut empty_tiers = Vec::new();
    if macro_tier.n == 0 {
        empty_tiers.push(Tier::Macro);
    }
    if metro_tier.n == 0 {
        empty_tiers.push(Tier::Metro);
    }

    let total = results.len();
    let metro_fraction = if total == 0 {
        0.0
    } else {
        metro_tier.n as f64 / total as f64
    };
    let (r1, r2) = (macro_tier.mean, metro_tier.mean);
    let w1 = 3.0 * macro_density_per_km2;
    let w2 = metro_density_per_km2;
    NetworkMetrics {
        ase: w1 * r1 + w2 * r2,
        ase_stderr: (w1 * w1 * macro_tier.mean_variance() + w2 * w2 * metro_tier.mean_variance())
            .sqrt(),
        avg_user_rate: r1 * (1.0 - metro_fraction) + r2 * metro_fraction,
        rate_stderr: all.mean_variance().sqrt(),
        metro_fraction,
        metro_fraction_stderr: if total == 0 {
            0.0
        } else {
            (metro_fraction * (1.0 - metro_fraction) / total as f64).sqrt()
        },
        r1,
        r2,
        macro_drops: macro_tier.n,
        metro_drops: metro_tier.n,
        macro_density_per_km2,
        metro_density_per_km2,
        empty_tiers,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drop_with(tier: Tier, se: f64) -> DropResult {
        DropResult {
            tier,
            wap_index: 0,
            sector_index: 0,
            spectral_efficiency: se,
            sir_db: 0.0,
            asair_db: 0.0,
            blockage_count_serving: 0,
        }
    }

    #[test]
    fn two_drop_example() {
        let m = aggregate(
            &[drop_with(Tier::Macro, 2.0), drop_with(Tier::Metro, 4.0)],
            2.05,
            30.75,
        );
        assert!((m.ase - 135.3).abs() < 1e-9);
        assert!((m.avg_user_rate - 3.0).abs() < 1e-12);
        assert_eq!(m.metro_fraction, 0.5);
        assert!(m.empty_tiers.is_empty());
    }

    #[test]
    fn all_macro() {
        let rs = [drop_with(Tier::Macro, 1.0), drop_with(Tier::Macro, 3.0)];
        let m = aggregate(&rs, 2.05, 30.75);
        assert!((m.ase - 3.0 * 2.05 * 2.0).abs() < 1e-12);
        assert_eq!(m.metro_fraction, 0.0);
        assert_eq!(m.empty_tiers, vec![Tier::Metro]);
    }

    #[test]
    fn duplication_keeps_point_estimates() {
        let rs = vec![
            drop_with(Tier::Macro, 1.0),
            drop_with(Tier::Metro, 5.0),
            drop_with(Tier::Macro, 0.5),
            drop_with(Tier::Metro, 2.5),
            drop_with(Tier::Macro, 3.0),
        ];
        let twice: Vec<_> = rs.iter().chain(rs.iter()).copied().collect();
        let a = aggregate(&rs, 2.05, 30.75);
        let b = aggregate(&twice, 2.05, 30.75);
        assert!((a.ase - b.ase).abs() < 1e-12);
        assert!((a.avg_user_rate - b.avg_user_rate).abs() < 1e-12);
        assert_eq!(a.metro_fraction, b.metro_fraction);
        assert!(b.ase_stderr < a.ase_stderr);
    }

    #[test]
    fn invariants_hold_on_stored_fields() {
        let rs: Vec<_> = (0..37)
            .map(|k| {
                drop_with(
                    if k % 3 == 0 { Tier::Metro } else { Tier::Macro },
                    (k as f64 * 0.37).sin().abs() * 5.0,
                )
            })
            .collect();
        let m = aggregate(&rs, 2.05, 30.75);
        assert_eq!(
            m.ase,
            3.0 * m.macro_density_per_km2 * m.r1 + m.metro_density_per_km2 * m.r2
        );
        assert_eq!(
            m.avg_user_rate,
            m.r1 * (1.0 - m.metro_fraction) + m.r2 * m.metro_fraction
        );
        let overall = rs.iter().map(|r| r.spectral_efficiency).sum::<f64>() / rs.len() as f64;
        assert!((m.avg_user_rate - overall).abs() < 1e-12);
    }
}
