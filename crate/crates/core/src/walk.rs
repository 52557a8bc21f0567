//! Truncated random walks on labeled hypergraphs.
//!
//! From a node `v` a step picks one incident hyperedge uniformly, then moves
//! to a uniformly chosen member of that edge other than `v`. A hyperedge
//! with a single member is a self-loop. Walks record, for every node, the
//! step at which it was first hit and the label sequence walked so far.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::{LabelId, LabeledHypergraph, NodeId};
use crate::scalar::Scalar;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.5772156649;

/// Largest walk count the estimators accept.
pub const MAX_WALKS: u64 = 1 << 48;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xCBF2_9CE4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Seed of the random stream for walks started at the node called `name`.
///
/// Keyed on the node name rather than its index so that the same source
/// gets the same stream in any sub-hypergraph it belongs to.
pub fn stream_seed(seed: u64, name: &str) -> u64 {
    seed ^ splitmix64(fnv1a(name.as_bytes()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkConfig {
    pub epsilon: f64,
    /// Walk length `L`.
    pub length: usize,
    /// Walk count `N`.
    pub n_walks: u64,
    pub k_top: usize,
    pub seed: u64,
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidConfig(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        if self.length == 0 || self.n_walks == 0 || self.k_top == 0 {
            return Err(Error::InvalidConfig("walk length, walk count and k must be positive".into()));
        }
        if self.n_walks > MAX_WALKS {
            return Err(Error::WalkCountOverflow(self.n_walks as f64));
        }
        Ok(())
    }
}

/// Label sequence of a walk prefix. The empty signature is the null path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PathSignature(pub Vec<LabelId>);

impl PathSignature {
    pub fn null() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_null(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[LabelId] {
        &self.0
    }
}

/// First-hit statistics for one target node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TargetStats {
    pub hits: u64,
    pub time_sum: u64,
    pub time_sq_sum: u64,
    /// Counts per non-null signature; they sum to `hits`.
    pub signatures: BTreeMap<PathSignature, u64>,
}

/// Outcome of `N` walks of length `L` from one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkStats {
    source: NodeId,
    n_walks: u64,
    length: usize,
    targets: Vec<TargetStats>,
}

impl WalkStats {
    pub fn from_parts(source: NodeId, n_walks: u64, length: usize, targets: Vec<TargetStats>) -> Self {
        Self {
            source,
            n_walks,
            length,
            targets,
        }
    }

    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn n_walks(&self) -> u64 {
        self.n_walks
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn node_count(&self) -> usize {
        self.targets.len()
    }

    pub fn target(&self, v: NodeId) -> &TargetStats {
        &self.targets[v.index()]
    }

    pub fn hits(&self, v: NodeId) -> u64 {
        self.targets[v.index()].hits
    }

    /// `ĥ = (Σ first-hit times + (N - hits)·L) / N`; zero for the source.
    pub fn tht_estimate<T: Scalar>(&self, v: NodeId) -> T {
        if v == self.source {
            return T::zero();
        }
        let t = &self.targets[v.index()];
        let misses = self.n_walks - t.hits;
        (T::of_u64(t.time_sum) + T::of_u64(misses) * T::of_usize(self.length)) / T::of_u64(self.n_walks)
    }

    /// Unbiased standard deviation of the `N` truncated hitting-time samples.
    pub fn tht_sample_sd<T: Scalar>(&self, v: NodeId) -> T {
        if v == self.source || self.n_walks < 2 {
            return T::zero();
        }
        let t = &self.targets[v.index()];
        let misses = T::of_u64(self.n_walks - t.hits);
        let l = T::of_usize(self.length);
        let n = T::of_u64(self.n_walks);
        let sum = T::of_u64(t.time_sum) + misses * l;
        let sq = T::of_u64(t.time_sq_sum) + misses * l * l;
        let var = (sq - sum * sum / n) / (n - T::one());
        var.max(T::zero()).sqrt()
    }

    pub fn signature_counts(&self, v: NodeId) -> &BTreeMap<PathSignature, u64> {
        &self.targets[v.index()].signatures
    }

    /// Marginal counts `Ĉ|ℓ`: signatures of length exactly `len`.
    pub fn marginal_counts(&self, v: NodeId, len: usize) -> impl Iterator<Item = (&PathSignature, u64)> + '_ {
        self.targets[v.index()]
            .signatures
            .iter()
            .filter(move |(s, _)| s.len() == len)
            .map(|(s, &c)| (s, c))
    }

    /// Non-source nodes hit at least once, in id order.
    pub fn reached(&self) -> Vec<NodeId> {
        (0..self.targets.len())
            .map(NodeId::new)
            .filter(|&v| v != self.source && self.targets[v.index()].hits > 0)
            .collect()
    }

    /// Non-source nodes never hit, in id order.
    pub fn unreached(&self) -> Vec<NodeId> {
        (0..self.targets.len())
            .map(NodeId::new)
            .filter(|&v| v != self.source && self.targets[v.index()].hits == 0)
            .collect()
    }
}

/// Upper bound `P* = 1 + e(e^L - 1)/(e - 1)` on the number of signatures of
/// length at most `L` over `e` labels; `1 + L` when `e = 1`.
pub fn p_star(e: usize, length: usize) -> f64 {
    if e <= 1 {
        return 1.0 + length as f64;
    }
    let e = e as f64;
    1.0 + e * (e.powi(length as i32) - 1.0) / (e - 1.0)
}

fn check_count_args(epsilon: f64, e: usize, length: usize) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidConfig(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if e == 0 || length == 0 {
        return Err(Error::InvalidConfig("label count and walk length must be positive".into()));
    }
    Ok(())
}

fn finish_count(n: f64) -> Result<u64> {
    if !n.is_finite() || n > MAX_WALKS as f64 {
        return Err(Error::WalkCountOverflow(n));
    }
    Ok((n as u64).max(1))
}

fn tht_term(epsilon: f64, length: usize) -> f64 {
    let l1 = (length - 1) as f64;
    (l1 * l1 / (4.0 * epsilon * epsilon)).ceil()
}

/// Walk count making THT and all path-probability estimates ε-uncertain:
/// `⌈max{(L-1)²/(4ε²), P*(γ + ln P*)/ε²}⌉`.
pub fn optimal_walk_count(epsilon: f64, e: usize, length: usize) -> Result<u64> {
    check_count_args(epsilon, e, length)?;
    let p = p_star(e, length);
    let paths = (p * (EULER_GAMMA + p.ln()) / (epsilon * epsilon)).ceil();
    finish_count(paths.max(tht_term(epsilon, length)))
}

/// Walk count making the `k` most probable signatures ε-uncertain:
/// `max(⌈((k+1)(γ + ln P*) - 1)/ε²⌉, ⌈(L-1)²/(4ε²)⌉)`.
pub fn topk_walk_count(epsilon: f64, e: usize, length: usize, k: usize) -> Result<u64> {
    check_count_args(epsilon, e, length)?;
    if k == 0 {
        return Err(Error::InvalidConfig("k must be positive".into()));
    }
    let p = p_star(e, length);
    let paths = (((k + 1) as f64 * (EULER_GAMMA + p.ln()) - 1.0) / (epsilon * epsilon)).ceil();
    finish_count(paths.max(tht_term(epsilon, length)))
}

/// Runs `cfg.n_walks` walks of `cfg.length` steps from `source`.
///
/// Walks run sequentially on one ChaCha8 stream seeded by
/// [`stream_seed`], so the result depends only on the hypergraph, the
/// source name and `cfg`.
pub fn run_walks(h: &LabeledHypergraph, source: NodeId, cfg: &WalkConfig) -> Result<WalkStats> {
    cfg.validate()?;
    let n = h.node_count();
    if source.index() >= n {
        return Err(Error::InvalidConfig(format!("source {} is not a node", source.index())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, h.node_name(source)));
    let mut targets = vec![TargetStats::default(); n];
    let mut raw: Vec<HashMap<Vec<LabelId>, u64>> = vec![HashMap::new(); n];
    let mut last_seen = vec![0u64; n];
    let mut path: Vec<LabelId> = Vec::with_capacity(cfg.length);

    for walk in 1..=cfg.n_walks {
        last_seen[source.index()] = walk;
        path.clear();
        let mut v = source;
        for step in 1..=cfg.length {
            let inc = h.incident(v);
            if inc.is_empty() {
                break;
            }
            let e = h.edge(inc[rng.random_range(0..inc.len())]);
            let members = e.nodes();
            if members.len() > 1 {
                let pick = rng.random_range(0..members.len() - 1);
                let pos = members.binary_search(&v).expect("walker sits on the edge");
                v = members[pick + usize::from(pick >= pos)];
            }
            path.push(e.label());
            if last_seen[v.index()] != walk {
                last_seen[v.index()] = walk;
                let t = &mut targets[v.index()];
                t.hits += 1;
                t.time_sum += step as u64;
                t.time_sq_sum += (step * step) as u64;
                *raw[v.index()].entry(path.clone()).or_insert(0) += 1;
            }
        }
    }

    for (t, counts) in targets.iter_mut().zip(raw) {
        t.signatures = counts.into_iter().map(|(k, c)| (PathSignature(k), c)).collect();
    }
    Ok(WalkStats::from_parts(source, cfg.n_walks, cfg.length, targets))
}

/// [`run_walks`] from every node, in parallel. Element `i` has source `i`.
pub fn run_walks_all(h: &LabeledHypergraph, cfg: &WalkConfig) -> Result<Vec<WalkStats>> {
    (0..h.node_count())
        .into_par_iter()
        .map(|i| run_walks(h, NodeId::new(i), cfg))
        .collect()
}

/// Sparse one-step transition probabilities, `out[v] = [(k, p_vk)]`.
pub fn transition_lists<T: Scalar>(h: &LabeledHypergraph) -> Vec<Vec<(usize, T)>> {
    h.nodes()
        .map(|v| {
            let inc = h.incident(v);
            let mut probs: BTreeMap<usize, T> = BTreeMap::new();
            let pe = T::one() / T::of_usize(inc.len().max(1));
            for &e in inc {
                let members = h.edge(e).nodes();
                if members.len() == 1 {
                    let p = probs.entry(v.index()).or_insert_with(T::zero);
                    *p = *p + pe;
                    continue;
                }
                let pk = pe / T::of_usize(members.len() - 1);
                for &k in members.iter().filter(|&&k| k != v) {
                    let p = probs.entry(k.index()).or_insert_with(T::zero);
                    *p = *p + pk;
                }
            }
            probs.into_iter().collect()
        })
        .collect()
}

/// Exact truncated hitting times from `source` to every node, by the
/// recursion `h^ℓ(v) = 1 + Σ_k p_vk h^{ℓ-1}(k)` with `h^0 = 0` and
/// `h(target) = 0`. Unreachable targets get `L`.
pub fn exact_tht<T: Scalar>(h: &LabeledHypergraph, source: NodeId, length: usize) -> Vec<T> {
    let n = h.node_count();
    let trans = transition_lists::<T>(h);
    let mut prev = vec![T::zero(); n];
    let mut cur = vec![T::zero(); n];
    (0..n)
        .map(|target| {
            if target == source.index() {
                return T::zero();
            }
            prev.iter_mut().for_each(|x| *x = T::zero());
            for _ in 0..length {
                for (v, out) in cur.iter_mut().enumerate() {
                    *out = if v == target {
                        T::zero()
                    } else if trans[v].is_empty() {
                        T::one() + prev[v]
                    } else {
                        T::one() + trans[v].iter().map(|&(k, p)| p * prev[k]).sum::<T>()
                    };
                }
                std::mem::swap(&mut prev, &mut cur);
            }
            prev[source.index()]
        })
        .collect()
}
