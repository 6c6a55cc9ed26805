//! Classical post-processing of outcome distributions.
//!
//! Three dependence measures are reported side by side: mutual information
//! (total dependence in bits), conditional min-entropy (how well the best
//! guesser does given the other side), and agreement probability under a
//! fixed pairing. All logarithms are base 2; terms with probability at or
//! below 1e-15 contribute exactly zero.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::sim::PROB_FLOOR;

fn log2(x: f64) -> f64 {
    libm::log2(x)
}

/// Shannon entropy of a probability vector, in bits.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    let mut h = 0.0;
    for &p in probs {
        if p > PROB_FLOOR {
            h -= p * log2(p);
        }
    }
    h
}

/// Marginalization axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Joint distribution of two discrete variables, row-major over (x, y).
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateDistribution {
    x_dim: usize,
    y_dim: usize,
    probs: Vec<f64>,
}

impl BivariateDistribution {
    /// Validates nonnegativity and normalization (sum within 1e-12 of 1).
    /// Entries at or below 1e-15 are snapped to zero.
    pub fn new(x_dim: usize, y_dim: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != x_dim * y_dim {
            return Err(Error::DimensionMismatch { expected: x_dim * y_dim, got: probs.len() });
        }
        let mut clean = probs;
        let mut sum = 0.0;
        for (i, p) in clean.iter_mut().enumerate() {
            if !p.is_finite() || *p < -PROB_FLOOR {
                return Err(Error::NonFiniteEntry { index: i });
            }
            if *p <= PROB_FLOOR {
                *p = 0.0;
            }
            sum += *p;
        }
        if libm::fabs(sum - 1.0) > 1e-12 {
            return Err(Error::ZeroStateNorm);
        }
        Ok(Self { x_dim, y_dim, probs: clean })
    }

    pub fn x_dim(&self) -> usize {
        self.x_dim
    }

    pub fn y_dim(&self) -> usize {
        self.y_dim
    }

    pub fn probability(&self, x: usize, y: usize) -> f64 {
        self.probs[x * self.y_dim + y]
    }

    /// The same distribution with the axes swapped.
    pub fn transpose(&self) -> BivariateDistribution {
        let mut probs = vec![0.0; self.probs.len()];
        for x in 0..self.x_dim {
            for y in 0..self.y_dim {
                probs[y * self.x_dim + x] = self.probability(x, y);
            }
        }
        BivariateDistribution { x_dim: self.y_dim, y_dim: self.x_dim, probs }
    }

    /// Row or column sums.
    pub fn marginal(&self, axis: Axis) -> Vec<f64> {
        match axis {
            Axis::X => {
                let mut out = vec![0.0; self.x_dim];
                for x in 0..self.x_dim {
                    for y in 0..self.y_dim {
                        out[x] += self.probability(x, y);
                    }
                }
                out
            }
            Axis::Y => {
                let mut out = vec![0.0; self.y_dim];
                for x in 0..self.x_dim {
                    for y in 0..self.y_dim {
                        out[y] += self.probability(x, y);
                    }
                }
                out
            }
        }
    }

    /// I(X;Y) = sum p(x,y) log2 [ p(x,y) / (p(x) p(y)) ], clamped to >= 0.
    pub fn mutual_information(&self) -> f64 {
        let px = self.marginal(Axis::X);
        let py = self.marginal(Axis::Y);
        let mut mi = 0.0;
        for x in 0..self.x_dim {
            for y in 0..self.y_dim {
                let pxy = self.probability(x, y);
                if pxy > PROB_FLOOR {
                    mi += pxy * log2(pxy / (px[x] * py[y]));
                }
            }
        }
        if mi < 0.0 {
            0.0
        } else {
            mi
        }
    }

    /// Conditional min-entropy H_min(X|Y) = -log2 sum_y max_x p(x,y), in
    /// bits. The max is over values, so ties carry no index dependence.
    pub fn min_entropy_given_y(&self) -> f64 {
        let mut p_guess = 0.0;
        for y in 0..self.y_dim {
            let mut best = 0.0;
            for x in 0..self.x_dim {
                let p = self.probability(x, y);
                if p > best {
                    best = p;
                }
            }
            p_guess += best;
        }
        if p_guess <= 0.0 {
            return 0.0;
        }
        let h = -log2(p_guess);
        if h < 0.0 {
            0.0
        } else {
            h
        }
    }

    /// P[y = pairing(x)] under the joint distribution.
    pub fn agreement_probability(&self, pairing: &[usize]) -> Result<f64> {
        if self.x_dim != self.y_dim || pairing.len() != self.x_dim {
            return Err(Error::DimensionMismatch { expected: self.x_dim, got: self.y_dim });
        }
        let mut agree = 0.0;
        for x in 0..self.x_dim {
            agree += self.probability(x, pairing[x]);
        }
        Ok(agree)
    }
}

/// Pearson chi-square independence statistic over observed pairs, with
/// expected counts from the empirical marginals. Returns
/// (statistic, degrees of freedom); no p-value is attached.
pub fn chi_square_independence(samples: &[(usize, usize)]) -> Result<(f64, usize)> {
    if samples.is_empty() {
        return Err(Error::DegenerateSamples);
    }
    let mut x_counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut y_counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cell_counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(x, y) in samples {
        *x_counts.entry(x).or_default() += 1;
        *y_counts.entry(y).or_default() += 1;
        *cell_counts.entry((x, y)).or_default() += 1;
    }
    if x_counts.len() < 2 || y_counts.len() < 2 {
        return Err(Error::DegenerateSamples);
    }
    let n = samples.len() as f64;
    let mut statistic = 0.0;
    for (&x, &nx) in &x_counts {
        for (&y, &ny) in &y_counts {
            let expected = nx as f64 * ny as f64 / n;
            let observed = cell_counts.get(&(x, y)).copied().unwrap_or(0) as f64;
            let d = observed - expected;
            statistic += d * d / expected;
        }
    }
    let dof = (x_counts.len() - 1) * (y_counts.len() - 1);
    Ok((statistic, dof))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_diagonal_2x2() -> BivariateDistribution {
        BivariateDistribution::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap()
    }

    fn product_uniform_2x2() -> BivariateDistribution {
        BivariateDistribution::new(2, 2, vec![0.25; 4]).unwrap()
    }

    #[test]
    fn marginal_of_correlated_uniform() {
        let d = uniform_diagonal_2x2();
        assert_eq!(d.marginal(Axis::X), vec![0.5, 0.5]);
        assert_eq!(d.marginal(Axis::Y), vec![0.5, 0.5]);
    }

    #[test]
    fn marginal_of_point_mass() {
        let d = BivariateDistribution::new(2, 2, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(d.marginal(Axis::X), vec![1.0, 0.0]);
        assert_eq!(d.marginal(Axis::Y), vec![1.0, 0.0]);
    }

    #[test]
    fn mutual_information_of_product_is_zero() {
        assert_eq!(product_uniform_2x2().mutual_information(), 0.0);
    }

    #[test]
    fn mutual_information_of_perfect_correlation_is_one_bit() {
        assert!(libm::fabs(uniform_diagonal_2x2().mutual_information() - 1.0) < 1e-12);
    }

    #[test]
    fn mutual_information_of_4x4_diagonal_is_two_bits() {
        let mut probs = vec![0.0; 16];
        for i in 0..4 {
            probs[i * 4 + i] = 0.25;
        }
        let d = BivariateDistribution::new(4, 4, probs).unwrap();
        assert!(libm::fabs(d.mutual_information() - 2.0) < 1e-12);
    }

    #[test]
    fn min_entropy_of_perfect_correlation_is_zero() {
        assert!(libm::fabs(uniform_diagonal_2x2().min_entropy_given_y()) < 1e-12);
    }

    #[test]
    fn min_entropy_of_product_uniform_is_one_bit() {
        assert!(libm::fabs(product_uniform_2x2().min_entropy_given_y() - 1.0) < 1e-12);
    }

    #[test]
    fn min_entropy_of_l_shaped_support() {
        // Uniform 1/3 on (0,0), (0,1), (1,1): p_guess = 2/3.
        let third = 1.0 / 3.0;
        let d = BivariateDistribution::new(2, 2, vec![third, third, 0.0, third]).unwrap();
        let expected = -log2(2.0 / 3.0);
        assert!(libm::fabs(d.min_entropy_given_y() - expected) < 1e-12);
        assert!(libm::fabs(expected - 0.584_962_500_721_156_2) < 1e-12);
    }

    #[test]
    fn agreement_probability_cases() {
        let diag = uniform_diagonal_2x2();
        assert!(libm::fabs(diag.agreement_probability(&[0, 1]).unwrap() - 1.0) < 1e-15);
        assert!(libm::fabs(diag.agreement_probability(&[1, 0]).unwrap()) < 1e-15);
        let prod = product_uniform_2x2();
        assert!(libm::fabs(prod.agreement_probability(&[0, 1]).unwrap() - 0.5) < 1e-15);
    }

    #[test]
    fn agreement_probability_requires_square_table() {
        let d = BivariateDistribution::new(1, 2, vec![0.5, 0.5]).unwrap();
        assert!(d.agreement_probability(&[0]).is_err());
    }

    #[test]
    fn chi_square_of_perfect_correlation() {
        let samples: Vec<(usize, usize)> =
            (0..1000).map(|i| if i % 2 == 0 { (0, 0) } else { (1, 1) }).collect();
        let (stat, dof) = chi_square_independence(&samples).unwrap();
        assert!(libm::fabs(stat - 1000.0) < 1e-9);
        assert_eq!(dof, 1);
    }

    #[test]
    fn chi_square_rejects_degenerate_input() {
        assert!(matches!(chi_square_independence(&[]), Err(Error::DegenerateSamples)));
        let one_sided = vec![(0usize, 0usize); 10];
        assert!(matches!(chi_square_independence(&one_sided), Err(Error::DegenerateSamples)));
    }

    #[test]
    fn chi_square_of_independent_fair_coins_frozen() {
        // Coin pairs drawn from the crate's fixed PRNG (seed 2024), frozen
        // after one oracle run; guards both the statistic and the stream.
        use rand_core::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(2024);
        let samples: Vec<(usize, usize)> = (0..100_000)
            .map(|_| {
                let bits = rng.next_u64();
                ((bits & 1) as usize, ((bits >> 1) & 1) as usize)
            })
            .collect();
        let (stat, dof) = chi_square_independence(&samples).unwrap();
        assert_eq!(dof, 1);
        // Frozen from the run recorded in this test's first execution.
        assert!(libm::fabs(stat - CHI_SQUARE_FROZEN) < 1e-9, "statistic drifted: {stat}");
        // Independent coins: the statistic should be small (chi^2_1 scale).
        assert!(stat < 15.0);
    }

    // Frozen oracle value; drift shows up as a single-line diff.
    const CHI_SQUARE_FROZEN: f64 = 0.045_143_782_198_361_82;

    #[test]
    fn transpose_swaps_axes() {
        let d = BivariateDistribution::new(1, 2, vec![0.25, 0.75]).unwrap();
        let t = d.transpose();
        assert_eq!(t.x_dim(), 2);
        assert_eq!(t.probability(1, 0), 0.75);
    }

    #[test]
    fn entropy_of_uniform_vector() {
        assert!(libm::fabs(entropy_bits(&[0.25; 4]) - 2.0) < 1e-12);
        assert_eq!(entropy_bits(&[1.0, 0.0]), 0.0);
    }
}
