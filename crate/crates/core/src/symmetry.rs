//! Grouping of the nodes reached from a source into distance-symmetric sets
//! and their refinement into path-symmetric sets (abstract concepts).

use rayon::prelude::*;

use crate::error::Result;
use crate::hypergraph::NodeId;
use crate::hypothesis::{theta_sym, LengthTest, PathCounts, PathTestConfig};
use crate::linalg::{top_eigenpairs, SymMatrix};
use crate::scalar::Scalar;
use crate::walk::WalkStats;

/// Nodes whose THT estimates chain together within `θ_sym`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSet<T> {
    pub members: Vec<NodeId>,
    /// Mean THT estimate of the members.
    pub tht: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistancePartition<T> {
    /// Ordered by increasing THT.
    pub sets: Vec<DistanceSet<T>>,
    /// Nodes never hit by any walk.
    pub unreached: Vec<NodeId>,
    pub theta: T,
}

/// Sorts reached nodes by `ĥ` and opens a new set wherever the gap between
/// neighbours exceeds `θ_sym(α, L, N)`.
pub fn partition_distance_symmetric<T: Scalar>(stats: &WalkStats, alpha: T) -> DistancePartition<T> {
    let theta = theta_sym(alpha, stats.length(), stats.n_walks());
    let mut reached: Vec<(T, NodeId)> = stats
        .reached()
        .into_iter()
        .map(|v| (stats.tht_estimate::<T>(v), v))
        .collect();
    reached.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal).then(a.1.cmp(&b.1)));

    let mut groups: Vec<Vec<(T, NodeId)>> = Vec::new();
    let mut last: Option<T> = None;
    for item in reached {
        match last {
            Some(prev) if item.0 - prev <= theta => groups.last_mut().expect("open group").push(item),
            _ => groups.push(vec![item]),
        }
        last = Some(item.0);
    }
    let sets = groups
        .into_iter()
        .map(|g| {
            let tht = g.iter().map(|x| x.0).sum::<T>() / T::of_usize(g.len());
            let mut members: Vec<NodeId> = g.into_iter().map(|x| x.1).collect();
            members.sort_unstable();
            DistanceSet { members, tht }
        })
        .collect();
    DistancePartition {
        sets,
        unreached: stats.unreached(),
        theta,
    }
}

/// Z-scores every column (dropping those with variance below `1e-12`) and
/// projects onto the top `d` principal components. Missing components are
/// zero.
pub fn standardize_and_project<T: Scalar>(rows: &[Vec<T>], d: usize) -> Vec<Vec<T>> {
    let n = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    if n < 2 {
        return vec![vec![T::zero(); d]; n];
    }
    let nf = T::of_usize(n);
    let mut z: Vec<Vec<T>> = vec![Vec::new(); n];
    for c in 0..width {
        let mean = rows.iter().map(|r| r[c]).sum::<T>() / nf;
        let var = rows.iter().map(|r| (r[c] - mean) * (r[c] - mean)).sum::<T>() / (nf - T::one());
        if var < T::lit(1e-12) {
            continue;
        }
        let sd = var.sqrt();
        for (zr, r) in z.iter_mut().zip(rows) {
            zr.push((r[c] - mean) / sd);
        }
    }
    let k = z[0].len();
    if k == 0 {
        return vec![vec![T::zero(); d]; n];
    }

    let mut cov = SymMatrix::<T>::zeros(k);
    for a in 0..k {
        for b in a..k {
            let s = z.iter().map(|r| r[a] * r[b]).sum::<T>() / (nf - T::one());
            cov.set(a, b, s);
        }
    }
    let pcs = top_eigenpairs(&cov, d.min(k), T::lit(T::SOLVER_TOL), 10_000);
    z.iter()
        .map(|r| {
            let mut p: Vec<T> = pcs.iter().map(|pc| crate::linalg::dot(r, &pc.vector)).collect();
            p.resize(d, T::zero());
            p
        })
        .collect()
}

fn dist2<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum()
}

/// 2-means of `points` (indexed by position) seeded with an approximate
/// farthest pair: the point farthest from the centroid, then the point
/// farthest from it. Runs at most 100 Lloyd iterations; distance ties go
/// to the cluster seeded by the lower index. When all points coincide the
/// split is by halves. Both returned sets are non-empty and sorted, and the
/// one containing index 0 comes first.
pub fn binary_split<T: Scalar>(points: &[Vec<T>]) -> (Vec<usize>, Vec<usize>) {
    let n = points.len();
    assert!(n >= 2, "binary_split needs at least two points");
    if n == 2 {
        return (vec![0], vec![1]);
    }
    let dim = points[0].len();
    let nf = T::of_usize(n);
    let centroid: Vec<T> = (0..dim).map(|c| points.iter().map(|p| p[c]).sum::<T>() / nf).collect();
    let farthest = |from: &[T]| {
        let mut best = (T::neg_infinity(), 0);
        for (i, p) in points.iter().enumerate() {
            let d = dist2(p, from);
            if d > best.0 {
                best = (d, i);
            }
        }
        best
    };
    let (_, a) = farthest(&centroid);
    let (dab, b) = farthest(&points[a]);
    if !(dab > T::zero()) {
        let half = n / 2;
        return ((0..half).collect(), (half..n).collect());
    }
    let (s0, s1) = if a < b { (a, b) } else { (b, a) };
    let mut centers = [points[s0].clone(), points[s1].clone()];
    let mut assign = vec![0u8; n];
    for iter in 0..100 {
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let c = u8::from(dist2(p, &centers[1]) < dist2(p, &centers[0]));
            if c != assign[i] {
                assign[i] = c;
                changed = true;
            }
        }
        if iter > 0 && !changed {
            break;
        }
        let mut sums = [vec![T::zero(); dim], vec![T::zero(); dim]];
        let mut sizes = [0usize; 2];
        for (p, &c) in points.iter().zip(&assign) {
            sizes[c as usize] += 1;
            for (s, &x) in sums[c as usize].iter_mut().zip(p) {
                *s = *s + x;
            }
        }
        if sizes[0] == 0 || sizes[1] == 0 {
            break;
        }
        for k in 0..2 {
            let m = T::of_usize(sizes[k]);
            centers[k] = sums[k].iter().map(|&s| s / m).collect();
        }
    }
    let first: Vec<usize> = (0..n).filter(|&i| assign[i] == 0).collect();
    let second: Vec<usize> = (0..n).filter(|&i| assign[i] == 1).collect();
    if first.is_empty() || second.is_empty() {
        let half = n / 2;
        return ((0..half).collect(), (half..n).collect());
    }
    if first[0] < second[0] {
        (first, second)
    } else {
        (second, first)
    }
}

/// Splits the rows of `counts` into path-symmetric groups.
///
/// If the whole set passes it is returned as is. Otherwise the counts are
/// standardized and projected to `proj_dim` dimensions once, and a worklist
/// of 2-means splits runs until every group passes or is a singleton.
/// Groups are sorted and listed by smallest index.
pub fn prism_paths_counts<T: Scalar>(counts: &PathCounts, cfg: &PathTestConfig<T>, proj_dim: usize) -> Result<Vec<Vec<usize>>> {
    let all: Vec<usize> = (0..counts.len()).collect();
    if counts.subset_passes(&all, cfg)? {
        return Ok(if all.is_empty() { Vec::new() } else { vec![all] });
    }
    let rows: Vec<Vec<T>> = (0..counts.len())
        .map(|i| counts.row(i).iter().map(|&c| T::of_u64(c)).collect())
        .collect();
    let points = standardize_and_project(&rows, proj_dim);

    let mut partition = Vec::new();
    let mut remaining = vec![all];
    while let Some(set) = remaining.pop() {
        let sub: Vec<Vec<T>> = set.iter().map(|&i| points[i].clone()).collect();
        let (a, b) = binary_split(&sub);
        for side in [a, b] {
            let members: Vec<usize> = side.into_iter().map(|i| set[i]).collect();
            if members.len() == 1 || counts.subset_passes(&members, cfg)? {
                partition.push(members);
            } else {
                remaining.push(members);
            }
        }
    }
    partition.sort_by_key(|s| s[0]);
    Ok(partition)
}

/// Path-symmetric refinement of `members` w.r.t. the source of `stats`.
pub fn prism_paths<T: Scalar>(
    members: &[NodeId],
    stats: &WalkStats,
    cfg: &PathTestConfig<T>,
    proj_dim: usize,
) -> Result<Vec<Vec<NodeId>>> {
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    let counts = PathCounts::from_stats(stats, &sorted);
    Ok(prism_paths_counts(&counts, cfg, proj_dim)?
        .into_iter()
        .map(|g| g.into_iter().map(|i| sorted[i]).collect())
        .collect())
}

/// A path-symmetric set and the distance set it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Concept<T> {
    pub members: Vec<NodeId>,
    /// Index into [`SymmetryPartition::distance_sets`].
    pub parent: usize,
    /// Per-length test results for the final set, from `L` down.
    pub tests: Vec<LengthTest<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryPartition<T> {
    pub source: NodeId,
    pub distance_sets: Vec<DistanceSet<T>>,
    pub unreached: Vec<NodeId>,
    pub theta: T,
    /// Ordered by smallest member.
    pub concepts: Vec<Concept<T>>,
}

/// Distance partition followed by [`prism_paths`] on every distance set.
pub fn symmetry_clustering<T: Scalar>(
    stats: &WalkStats,
    cfg: &PathTestConfig<T>,
    proj_dim: usize,
) -> Result<SymmetryPartition<T>> {
    let dp = partition_distance_symmetric(stats, cfg.alpha);
    let per_set: Vec<Vec<Concept<T>>> = dp
        .sets
        .par_iter()
        .enumerate()
        .map(|(parent, set)| {
            let counts = PathCounts::from_stats(stats, &set.members);
            prism_paths_counts(&counts, cfg, proj_dim)?
                .into_iter()
                .map(|g| {
                    let tests = counts.test_subset(&g, cfg)?;
                    Ok(Concept {
                        members: g.into_iter().map(|i| set.members[i]).collect(),
                        parent,
                        tests,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut concepts: Vec<Concept<T>> = per_set.into_iter().flatten().collect();
    concepts.sort_by_key(|c| c.members[0]);
    Ok(SymmetryPartition {
        source: stats.source(),
        distance_sets: dp.sets,
        unreached: dp.unreached,
        theta: dp.theta,
        concepts,
    })
}
