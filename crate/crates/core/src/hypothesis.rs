//! Distance-symmetry and path-symmetry hypothesis tests.
//!
//! The distance test compares two estimated truncated hitting times against
//! the threshold `θ_sym = ((L-1)/√(2N)) · t_{α/2, N-1}`. The path test
//! compares member signature counts through the statistic
//! `Q = Σ_λ Σ_j (c̄_λ - c_λ^(j))²`, whose null distribution is approximated
//! by a gamma law with matched mean and variance.

use crate::error::{Error, Result};
use crate::hypergraph::NodeId;
use crate::scalar::Scalar;
use crate::special::{gamma_inverse_survival, t_inverse_survival};
use crate::walk::{PathSignature, WalkStats};

/// `((L-1)/√(2N)) · t_{α/2, N-1}`. Infinite when `N < 2` and `L > 1`.
pub fn theta_sym<T: Scalar>(alpha: T, length: usize, n_walks: u64) -> T {
    if length <= 1 {
        return T::zero();
    }
    if n_walks < 2 {
        return T::infinity();
    }
    let half = alpha / T::lit(2.0);
    let t = t_inverse_survival(half, (n_walks - 1) as usize);
    T::of_usize(length - 1) / (T::lit(2.0) * T::of_u64(n_walks)).sqrt() * t
}

pub fn distance_symmetric<T: Scalar>(h_j: T, h_k: T, theta: T) -> bool {
    (h_j - h_k).abs() <= theta
}

/// Counts of one cluster over categories `0..K`, where category 0 is the
/// null path `c_0 = N - Σ_{λ≥1} c_λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterCounts {
    n_walks: u64,
    categories: usize,
    /// Row-major `[member][category]`, null column included.
    counts: Vec<u64>,
}

impl ClusterCounts {
    /// `rows[j]` holds member `j`'s non-null counts; every row must have
    /// the same length and sum to at most `n_walks`.
    pub fn new(n_walks: u64, rows: &[Vec<u64>]) -> Result<Self> {
        let width = rows.first().map_or(0, Vec::len);
        let mut counts = Vec::with_capacity(rows.len() * (width + 1));
        for row in rows {
            if row.len() != width {
                return Err(Error::InvalidConfig("count rows differ in length".into()));
            }
            let total: u64 = row.iter().sum();
            if total > n_walks {
                return Err(Error::InvalidConfig(format!("counts sum to {total}, more than N = {n_walks}")));
            }
            counts.push(n_walks - total);
            counts.extend_from_slice(row);
        }
        Ok(Self {
            n_walks,
            categories: width + 1,
            counts,
        })
    }

    pub fn members(&self) -> usize {
        self.counts.len() / self.categories
    }

    /// Number of categories including the null one.
    pub fn categories(&self) -> usize {
        self.categories
    }

    pub fn n_walks(&self) -> u64 {
        self.n_walks
    }

    pub fn count(&self, member: usize, category: usize) -> u64 {
        self.counts[member * self.categories + category]
    }

    /// Cluster mean `c̄_λ` per category.
    pub fn means<T: Scalar>(&self) -> Vec<T> {
        let m = self.members();
        let mut sums = vec![T::zero(); self.categories];
        for row in self.counts.chunks(self.categories) {
            for (s, &c) in sums.iter_mut().zip(row) {
                *s = *s + T::of_u64(c);
            }
        }
        sums.into_iter().map(|s| s / T::of_usize(m.max(1))).collect()
    }
}

pub fn q_statistic<T: Scalar>(cc: &ClusterCounts) -> T {
    if cc.members() < 2 {
        return T::zero();
    }
    let means = cc.means::<T>();
    cc.counts
        .chunks(cc.categories)
        .map(|row| {
            row.iter()
                .zip(&means)
                .map(|(&c, &m)| {
                    let d = m - T::of_u64(c);
                    d * d
                })
                .sum::<T>()
        })
        .sum()
}

/// Gamma law matched to the mean and variance of the null distribution of Q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaApprox<T> {
    pub mu: T,
    pub sigma2: T,
}

impl<T: Scalar> GammaApprox<T> {
    pub fn is_degenerate(&self) -> bool {
        !(self.mu > T::zero() && self.sigma2 > T::zero())
    }

    pub fn shape(&self) -> T {
        self.mu * self.mu / self.sigma2
    }

    pub fn rate(&self) -> T {
        self.mu / self.sigma2
    }
}

/// `μ = (|B|-1) Σ_λ Σ_λλ` and `σ² = 2(|B|-1) Σ_{λ,λ'} Σ²_λλ'`, with
/// `Σ_λλ = Nπ_λ(1-π_λ)`, `Σ_λλ' = -Nπ_λπ_λ'` and `π_λ = c̄_λ/N`.
pub fn gamma_approx_params<T: Scalar>(cc: &ClusterCounts) -> GammaApprox<T> {
    let m = cc.members();
    if m < 2 || cc.n_walks == 0 {
        return GammaApprox {
            mu: T::zero(),
            sigma2: T::zero(),
        };
    }
    let n = T::of_u64(cc.n_walks);
    let pi: Vec<T> = cc.means::<T>().into_iter().map(|c| c / n).collect();
    let trace: T = pi.iter().map(|&p| n * p * (T::one() - p)).sum();
    let diag_sq: T = pi
        .iter()
        .map(|&p| {
            let d = n * p * (T::one() - p);
            d * d
        })
        .sum();
    let s2: T = pi.iter().map(|&p| p * p).sum();
    let s4: T = pi.iter().map(|&p| p * p * p * p).sum();
    let off_sq = n * n * (s2 * s2 - s4).max(T::zero());
    let factor = T::of_usize(m - 1);
    GammaApprox {
        mu: factor * trace,
        sigma2: T::lit(2.0) * factor * (diag_sq + off_sq),
    }
}

/// `x` with `P(X > x) = alpha` for `X ~ Gamma(shape, rate)`.
pub fn gamma_critical_value<T: Scalar>(g: &GammaApprox<T>, alpha: T) -> Result<T> {
    if g.is_degenerate() {
        return Err(Error::Degenerate("gamma approximation needs positive mean and variance"));
    }
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::InvalidConfig(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(gamma_inverse_survival(alpha, g.shape(), g.rate(), T::lit(T::SOLVER_TOL)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathTestConfig<T> {
    pub alpha: T,
    /// Categories whose cluster-mean count is below this join the null one.
    pub min_expected_count: T,
}

impl<T: Scalar> PathTestConfig<T> {
    pub fn new(alpha: T) -> Self {
        Self {
            alpha,
            min_expected_count: T::lit(5.0),
        }
    }
}

/// Result of the test at one exact path length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthTest<T> {
    pub length: usize,
    pub q: T,
    /// `None` when the test passed without a usable gamma approximation.
    pub critical: Option<T>,
    pub passed: bool,
}

/// Tests one cluster-count table: passes when `Q` does not exceed the gamma
/// critical value, or when the approximation is degenerate.
pub fn test_cluster_counts<T: Scalar>(cc: &ClusterCounts, alpha: T) -> Result<(T, Option<T>, bool)> {
    let q = q_statistic::<T>(cc);
    let g = gamma_approx_params::<T>(cc);
    if g.is_degenerate() {
        return Ok((q, None, true));
    }
    let crit = gamma_critical_value(&g, alpha)?;
    Ok((q, Some(crit), q <= crit))
}

/// Dense signature counts for a fixed list of items (nodes), with columns
/// grouped by signature length.
#[derive(Debug, Clone, PartialEq)]
pub struct PathCounts {
    n_walks: u64,
    max_length: usize,
    /// Column indices per length; `by_length[ℓ]`.
    by_length: Vec<Vec<usize>>,
    columns: usize,
    rows: Vec<Vec<u64>>,
}

impl PathCounts {
    /// Counts of `members` w.r.t. the source of `stats`.
    pub fn from_stats(stats: &WalkStats, members: &[NodeId]) -> Self {
        let mut universe: Vec<&PathSignature> = members
            .iter()
            .flat_map(|&v| stats.signature_counts(v).keys())
            .collect();
        universe.sort();
        universe.dedup();
        let lengths: Vec<usize> = universe.iter().map(|s| s.len()).collect();
        let rows = members
            .iter()
            .map(|&v| {
                let sc = stats.signature_counts(v);
                universe.iter().map(|s| sc.get(*s).copied().unwrap_or(0)).collect()
            })
            .collect();
        Self::from_rows(stats.n_walks(), stats.length(), &lengths, rows)
    }

    /// `lengths[c]` is the signature length of column `c`, in `1..=max_length`.
    pub fn from_rows(n_walks: u64, max_length: usize, lengths: &[usize], rows: Vec<Vec<u64>>) -> Self {
        let mut by_length = vec![Vec::new(); max_length + 1];
        for (c, &l) in lengths.iter().enumerate() {
            assert!(l >= 1 && l <= max_length, "column length {l} outside 1..={max_length}");
            by_length[l].push(c);
        }
        for row in &rows {
            assert_eq!(row.len(), lengths.len(), "row width must match column count");
        }
        Self {
            n_walks,
            max_length,
            by_length,
            columns: lengths.len(),
            rows,
        }
    }

    pub fn n_walks(&self) -> u64 {
        self.n_walks
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i]
    }

    /// Cluster counts of `subset` at exact length `len`. Only columns seen
    /// by some member are kept, and those with mean count below
    /// `min_expected` are folded into the null category.
    pub fn cluster_counts<T: Scalar>(&self, subset: &[usize], len: usize, min_expected: T) -> ClusterCounts {
        let m = T::of_usize(subset.len().max(1));
        let kept: Vec<usize> = self.by_length[len]
            .iter()
            .copied()
            .filter(|&c| {
                let total: u64 = subset.iter().map(|&i| self.rows[i][c]).sum();
                total > 0 && T::of_u64(total) / m >= min_expected
            })
            .collect();
        let rows: Vec<Vec<u64>> = subset
            .iter()
            .map(|&i| kept.iter().map(|&c| self.rows[i][c]).collect())
            .collect();
        ClusterCounts::new(self.n_walks, &rows).expect("walk counts never exceed N")
    }

    /// Runs the length-`ℓ` test for `ℓ = L, L-1, …, 1`, stopping at the
    /// first failure. Sets of fewer than two items pass without testing.
    pub fn test_subset<T: Scalar>(&self, subset: &[usize], cfg: &PathTestConfig<T>) -> Result<Vec<LengthTest<T>>> {
        let mut out = Vec::new();
        if subset.len() < 2 {
            return Ok(out);
        }
        for len in (1..=self.max_length).rev() {
            let cc = self.cluster_counts(subset, len, cfg.min_expected_count);
            let (q, critical, passed) = test_cluster_counts(&cc, cfg.alpha)?;
            out.push(LengthTest {
                length: len,
                q,
                critical,
                passed,
            });
            if !passed {
                break;
            }
        }
        Ok(out)
    }

    pub fn subset_passes<T: Scalar>(&self, subset: &[usize], cfg: &PathTestConfig<T>) -> Result<bool> {
        Ok(self.test_subset(subset, cfg)?.iter().all(|t| t.passed))
    }
}

/// Outcome of [`path_symmetric`]: per-length results from `L` downwards.
#[derive(Debug, Clone, PartialEq)]
pub struct PathTestOutcome<T> {
    pub passed: bool,
    pub lengths: Vec<LengthTest<T>>,
}

/// Whether `members` are path-symmetric w.r.t. the source of `stats` at
/// every length `ℓ ∈ {L, …, 1}`.
pub fn path_symmetric<T: Scalar>(
    stats: &WalkStats,
    members: &[NodeId],
    cfg: &PathTestConfig<T>,
) -> Result<PathTestOutcome<T>> {
    let pc = PathCounts::from_stats(stats, members);
    let all: Vec<usize> = (0..members.len()).collect();
    let lengths = pc.test_subset(&all, cfg)?;
    Ok(PathTestOutcome {
        passed: lengths.iter().all(|t| t.passed),
        lengths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_examples() {
        assert_eq!(theta_sym(0.01, 1, 1000), 0.0);
        let t: f64 = theta_sym(0.01, 5, 1000);
        assert!((t - 0.2308).abs() < 5e-4, "{t}");
        assert!(theta_sym(0.01, 5, 2000) < t);
    }

    #[test]
    fn distance_examples() {
        assert!(distance_symmetric(2.0, 2.0, 0.0));
        assert!(!distance_symmetric(1.0, 1.5, 0.23));
    }

    #[test]
    fn q_hand_computation() {
        let cc = ClusterCounts::new(1000, &[vec![10], vec![14]]).unwrap();
        assert_eq!(q_statistic::<f64>(&cc), 16.0);
        let same = ClusterCounts::new(1000, &[vec![3, 4], vec![3, 4]]).unwrap();
        assert_eq!(q_statistic::<f64>(&same), 0.0);
        let single = ClusterCounts::new(10, &[vec![3]]).unwrap();
        assert_eq!(q_statistic::<f64>(&single), 0.0);
    }

    #[test]
    fn gamma_params_two_by_two() {
        let cc = ClusterCounts::new(100, &[vec![50], vec![50]]).unwrap();
        let g = gamma_approx_params::<f64>(&cc);
        assert!((g.mu - 50.0).abs() < 1e-12);
        assert!((g.sigma2 - 5000.0).abs() < 1e-9);
        let single = ClusterCounts::new(100, &[vec![50]]).unwrap();
        assert!(gamma_approx_params::<f64>(&single).is_degenerate());
        assert!(gamma_critical_value(&gamma_approx_params::<f64>(&single), 0.05).is_err());
    }

    #[test]
    fn exponential_critical_value() {
        let g = GammaApprox { mu: 1.0, sigma2: 1.0 };
        let x = gamma_critical_value(&g, 0.05).unwrap();
        assert!((x - (1.0f64 / 0.05).ln()).abs() < 1e-7);
    }

    #[test]
    fn overfull_rows_rejected() {
        assert!(ClusterCounts::new(5, &[vec![3, 3]]).is_err());
        assert!(ClusterCounts::new(5, &[vec![1], vec![1, 1]]).is_err());
    }

    #[test]
    fn low_counts_merge_into_null() {
        let pc = PathCounts::from_rows(100, 1, &[1, 1], vec![vec![50, 1], vec![50, 3]]);
        let cc = pc.cluster_counts::<f64>(&[0, 1], 1, 5.0);
        assert_eq!(cc.categories(), 2);
        assert_eq!(cc.count(0, 0), 50);
        assert_eq!(cc.count(1, 0), 50);
    }

    #[test]
    fn clearly_different_members_fail() {
        let pc = PathCounts::from_rows(1000, 1, &[1, 1], vec![vec![500, 100], vec![100, 500]]);
        let cfg = PathTestConfig::new(0.01);
        assert!(!pc.subset_passes::<f64>(&[0, 1], &cfg).unwrap());
        assert!(pc.subset_passes::<f64>(&[0], &cfg).unwrap());
    }
}
