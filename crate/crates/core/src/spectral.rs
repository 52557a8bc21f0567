//! Hierarchical spectral clustering of hypergraphs.
//!
//! The hypergraph is clique-expanded into a weighted graph, which is then
//! bipartitioned recursively by Cheeger sweep cuts along the second
//! eigenvector of the symmetric normalized Laplacian
//! `L_sym = I - D^{-1/2} W D^{-1/2}`. Recursion stops once a subgraph is
//! well connected (`λ2 > lambda2_max`) or a cut would leave a side with
//! fewer than `n_min` nodes. Leaf node sets are turned back into
//! sub-hypergraphs by majority rule.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::hypergraph::{majority_subhypergraph, to_weighted_graph, LabeledHypergraph, NodeId};
use crate::linalg::{canonical_sign, dot, norm, project_out, start_vector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig<T> {
    /// Subgraphs whose `λ2` exceeds this are not split further.
    pub lambda2_max: T,
    /// Smallest side a cut may leave.
    pub n_min: usize,
    /// Residual target `‖L v - λ v‖` for the eigensolver.
    pub eig_tolerance: T,
    pub eig_max_iters: usize,
}

impl<T: Scalar> Default for SpectralConfig<T> {
    fn default() -> Self {
        Self {
            lambda2_max: T::lit(0.8),
            n_min: 8,
            eig_tolerance: T::lit(T::SOLVER_TOL),
            eig_max_iters: 10_000,
        }
    }
}

impl<T: Scalar> SpectralConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda2_max > T::zero() && self.lambda2_max <= T::lit(2.0)) {
            return Err(Error::InvalidConfig(format!(
                "lambda2_max must lie in (0, 2], got {}",
                self.lambda2_max
            )));
        }
        if self.n_min < 2 {
            return Err(Error::InvalidConfig(format!("n_min must be at least 2, got {}", self.n_min)));
        }
        if !(self.eig_tolerance > T::zero()) || self.eig_max_iters == 0 {
            return Err(Error::InvalidConfig("eigensolver tolerance and iteration cap must be positive".into()));
        }
        Ok(())
    }
}

/// Second-smallest eigenpair of `L_sym`.
///
/// Power iteration on `2I - L_sym`, whose spectrum lies in `[0, 2]`, with
/// the trivial eigenvector `D^{1/2} 1` projected out. The returned vector
/// is unit length, orthogonal to `D^{1/2} 1`, and its first non-negligible
/// entry is positive.
pub fn second_eigenpair<T: Scalar>(g: &WeightedGraph<T>, cfg: &SpectralConfig<T>) -> Result<(T, Vec<T>)> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::InvalidConfig(format!("need at least two nodes, got {n}")));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let inv_sqrt_deg: Vec<T> = g.degrees().into_iter().map(|d| d.sqrt().recip()).collect();
    let mut trivial: Vec<T> = inv_sqrt_deg.iter().map(|&s| s.recip()).collect();
    let tn = norm(&trivial);
    trivial.iter_mut().for_each(|x| *x = *x / tn);

    // (2I - L_sym) v = v + D^{-1/2} W D^{-1/2} v
    let apply = |v: &[T], out: &mut [T]| {
        for (i, o) in out.iter_mut().enumerate() {
            let s: T = g
                .neighbors(i)
                .iter()
                .map(|&(j, w)| w * inv_sqrt_deg[j] * v[j])
                .sum();
            *o = v[i] + inv_sqrt_deg[i] * s;
        }
    };

    let mut v = start_vector::<T>(n, 0x5EED_0002);
    project_out(&mut v, &trivial);
    let nv = norm(&v);
    v.iter_mut().for_each(|x| *x = *x / nv);
    let mut w = vec![T::zero(); n];
    let mut residual = T::infinity();
    for _ in 0..cfg.eig_max_iters {
        apply(&v, &mut w);
        project_out(&mut w, &trivial);
        let mu = dot(&v, &w);
        residual = w
            .iter()
            .zip(&v)
            .map(|(&wi, &vi)| (wi - mu * vi) * (wi - mu * vi))
            .sum::<T>()
            .sqrt();
        if residual <= cfg.eig_tolerance {
            canonical_sign(&mut v, T::lit(1e-9));
            return Ok((T::lit(2.0) - mu, v));
        }
        let nw = norm(&w);
        v.iter_mut().zip(&w).for_each(|(x, &y)| *x = y / nw);
    }
    Err(Error::NonConvergence {
        iterations: cfg.eig_max_iters,
        residual: residual.to_f64_lossy(),
    })
}

/// Result of a sweep cut: the chosen prefix, its complement (both sorted)
/// and the conductance of the split.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCut<T> {
    pub side: Vec<usize>,
    pub complement: Vec<usize>,
    pub conductance: T,
}

/// Best of the `n - 1` prefix cuts of the nodes ordered by `v2`.
///
/// Ties in `v2` are ordered by node index and ties in conductance keep the
/// shorter prefix.
pub fn cheeger_sweep_cut<T: Scalar>(g: &WeightedGraph<T>, v2: &[T]) -> SweepCut<T> {
    let n = g.node_count();
    assert!(n >= 2, "sweep cut needs at least two nodes");
    assert_eq!(v2.len(), n, "vector length must match node count");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| v2[a].partial_cmp(&v2[b]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));

    let degrees = g.degrees();
    let vol: T = degrees.iter().copied().sum();
    let mut in_set = vec![false; n];
    let mut cut = T::zero();
    let mut vol_s = T::zero();
    let mut best = (T::infinity(), 1);
    for (k, &v) in order.iter().enumerate().take(n - 1) {
        for &(u, w) in g.neighbors(v) {
            cut = if in_set[u] { cut - w } else { cut + w };
        }
        in_set[v] = true;
        vol_s = vol_s + degrees[v];
        let denom = vol_s.min(vol - vol_s);
        let phi = if denom > T::zero() { cut / denom } else { T::infinity() };
        if phi < best.0 {
            best = (phi, k + 1);
        }
    }

    let mut side = order[..best.1].to_vec();
    let mut complement = order[best.1..].to_vec();
    side.sort_unstable();
    complement.sort_unstable();
    SweepCut {
        side,
        complement,
        conductance: best.0,
    }
}

/// Recursive spectral bipartition. Returns leaf node sets, each sorted,
/// ordered by smallest member.
///
/// Disconnected (sub)graphs are first split into their components, which
/// are then clustered independently.
pub fn get_clusters<T: Scalar>(g: &WeightedGraph<T>, cfg: &SpectralConfig<T>) -> Result<Vec<Vec<usize>>> {
    cfg.validate()?;
    if g.node_count() == 0 {
        return Ok(Vec::new());
    }
    let mut leaves = split(g, (0..g.node_count()).collect(), cfg)?;
    leaves.sort_by_key(|c| c[0]);
    Ok(leaves)
}

fn split<T: Scalar>(root: &WeightedGraph<T>, nodes: Vec<usize>, cfg: &SpectralConfig<T>) -> Result<Vec<Vec<usize>>> {
    if nodes.len() < 2 {
        return Ok(vec![nodes]);
    }
    let sub = root.induced(&nodes);
    let comps = sub.components();
    if comps.len() > 1 {
        let parts: Vec<Vec<usize>> = comps
            .into_iter()
            .map(|c| c.into_iter().map(|i| nodes[i]).collect())
            .collect();
        let mut out = Vec::new();
        for part in parts {
            out.extend(split(root, part, cfg)?);
        }
        return Ok(out);
    }

    let (lambda2, v2) = second_eigenpair(&sub, cfg)?;
    if lambda2 > cfg.lambda2_max {
        return Ok(vec![nodes]);
    }
    let cut = cheeger_sweep_cut(&sub, &v2);
    if cut.side.len() < cfg.n_min || cut.complement.len() < cfg.n_min {
        return Ok(vec![nodes]);
    }
    let left: Vec<usize> = cut.side.iter().map(|&i| nodes[i]).collect();
    let right: Vec<usize> = cut.complement.iter().map(|&i| nodes[i]).collect();
    let (a, b) = rayon::join(|| split(root, left, cfg), || split(root, right, cfg));
    let mut out = a?;
    out.extend(b?);
    Ok(out)
}

/// Clique-expands `h`, clusters the graph and rebuilds one sub-hypergraph
/// per leaf cluster. Every node and edge of `h` lands in some output.
pub fn hcluster<T: Scalar>(h: &LabeledHypergraph, cfg: &SpectralConfig<T>) -> Result<Vec<LabeledHypergraph>> {
    cfg.validate()?;
    if h.node_count() < 2 {
        return Ok(vec![h.clone()]);
    }
    let g = to_weighted_graph::<T>(h);
    let parts: Vec<Vec<NodeId>> = get_clusters(&g, cfg)?
        .into_iter()
        .map(|c| c.into_iter().map(NodeId::new).collect())
        .collect();
    majority_subhypergraph(h, &parts)
}
