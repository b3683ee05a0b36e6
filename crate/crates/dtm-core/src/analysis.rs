//! Discrimination pipeline: pairwise L1 distance matrices, average-linkage
//! (UPGMA) clustering with dendrogram output, and k-NN hold-out
//! classification of labeled density estimates.

use crate::error::{Error, Result};
use crate::exec;
use crate::kde::{l1_distance, DensityEstimate};
use crate::synth::RngSeed;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

/// Symmetric pairwise-distance matrix with row/column labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub labels: Vec<String>,
    entries: Vec<f64>,
    size: usize,
}

impl DistanceMatrix {
    /// Build from a full row-major entry buffer. Checks symmetry, zero
    /// diagonal and non-negativity.
    pub fn new(labels: Vec<String>, entries: Vec<f64>) -> Result<Self> {
        let size = labels.len();
        if entries.len() != size * size {
            return Err(Error::InsufficientInput {
                message: format!("matrix needs {size}x{size} entries, got {}", entries.len()),
            });
        }
        for i in 0..size {
            if entries[i * size + i] != 0.0 {
                return Err(Error::InsufficientInput { message: "non-zero diagonal".into() });
            }
            for j in 0..i {
                let a = entries[i * size + j];
                let b = entries[j * size + i];
                if (a - b).abs() > 1e-12 || a < 0.0 {
                    return Err(Error::InsufficientInput {
                        message: format!("asymmetric or negative entry at ({i},{j})"),
                    });
                }
            }
        }
        Ok(DistanceMatrix { labels, entries, size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    /// CSV with a label header row and a label column.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for label in &self.labels {
            let _ = write!(out, ",{label}");
        }
        out.push('\n');
        for i in 0..self.size {
            let _ = write!(out, "{}", self.labels[i]);
            for j in 0..self.size {
                let _ = write!(out, ",{}", self.get(i, j));
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        crate::write_atomic(path.as_ref(), self.to_csv().as_bytes())
    }
}

fn pairwise_l1_impl(
    estimates: &[DensityEstimate],
    labels: &[String],
    parallel: bool,
) -> Result<DistanceMatrix> {
    let n = estimates.len();
    if n < 2 {
        return Err(Error::InsufficientInput {
            message: format!("need at least 2 estimates, got {n}"),
        });
    }
    if labels.len() != n {
        return Err(Error::InsufficientInput {
            message: format!("{} labels for {n} estimates", labels.len()),
        });
    }
    // upper triangle, one l1 evaluation per unordered pair
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let eval = |p: usize| {
        let (i, j) = pairs[p];
        l1_distance(&estimates[i], &estimates[j])
    };
    let dists = if parallel {
        exec::map_indexed(pairs.len(), eval)
    } else {
        exec::map_indexed_seq(pairs.len(), eval)
    };
    let mut entries = vec![0.0; n * n];
    for (p, &(i, j)) in pairs.iter().enumerate() {
        entries[i * n + j] = dists[p];
        entries[j * n + i] = dists[p];
    }
    DistanceMatrix::new(labels.to_vec(), entries)
}

/// Pairwise L1 distances between density estimates, parallel over cells.
pub fn pairwise_l1(estimates: &[DensityEstimate], labels: &[String]) -> Result<DistanceMatrix> {
    pairwise_l1_impl(estimates, labels, cfg!(feature = "parallel"))
}

/// Sequential twin of [`pairwise_l1`]; same result bit for bit.
pub fn pairwise_l1_seq(estimates: &[DensityEstimate], labels: &[String]) -> Result<DistanceMatrix> {
    pairwise_l1_impl(estimates, labels, false)
}

/// One agglomeration step: clusters `a` and `b` merged at `height` into a
/// cluster of `size` leaves. Cluster ids follow the usual convention:
/// 0..N-1 are leaves, N+t is the cluster created by step t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub height: f64,
    pub size: usize,
}

/// A stepwise dendrogram: exactly N-1 merges with non-decreasing heights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub labels: Vec<String>,
    pub merges: Vec<Merge>,
}

/// UPGMA (size-weighted average linkage) clustering of a distance matrix.
///
/// Each step merges the pair of active clusters with minimal average
/// inter-cluster distance; distances to the merged cluster are the
/// size-weighted averages of the previous ones. Ties are broken by the
/// lexicographically smallest (i, j) pair of cluster ids, so the dendrogram
/// is deterministic.
pub fn average_linkage(matrix: &DistanceMatrix) -> Dendrogram {
    let n = matrix.size();
    // dist keyed by active cluster ids
    let mut active: Vec<usize> = (0..n).collect();
    let mut sizes: Vec<usize> = vec![1; n];
    let mut dist: Vec<Vec<f64>> = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            dist[i][j] = matrix.get(i, j);
        }
    }
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    while active.len() > 1 {
        let mut best = (f64::INFINITY, usize::MAX, usize::MAX);
        for (ai, &i) in active.iter().enumerate() {
            for &j in &active[ai + 1..] {
                let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                let d = dist[lo][hi];
                if d < best.0 || (d == best.0 && (lo, hi) < (best.1, best.2)) {
                    best = (d, lo, hi);
                }
            }
        }
        let (height, i, j) = best;
        let new_id = n + merges.len();
        let new_size = sizes[i] + sizes[j];
        for &k in &active {
            if k == i || k == j {
                continue;
            }
            let d = (sizes[i] as f64 * dist[k.min(i)][k.max(i)]
                + sizes[j] as f64 * dist[k.min(j)][k.max(j)])
                / new_size as f64;
            dist[k][new_id] = d;
            dist[new_id][k] = d;
        }
        active.retain(|&k| k != i && k != j);
        active.push(new_id);
        sizes.push(new_size);
        merges.push(Merge { a: i, b: j, height, size: new_size });
    }
    Dendrogram { labels: matrix.labels.clone(), merges }
}

impl Dendrogram {
    pub fn len_leaves(&self) -> usize {
        self.labels.len()
    }

    /// Cut into `k` clusters by undoing the last k-1 merges. Assignment
    /// ids are ordered by the smallest leaf index in each cluster.
    pub fn cut(&self, k: usize) -> Result<Vec<usize>> {
        let n = self.len_leaves();
        if k == 0 || k > n {
            return Err(Error::InvalidK { k, max: n });
        }
        // union-find over the first n-k merges
        let mut parent: Vec<usize> = (0..n + self.merges.len()).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (t, merge) in self.merges.iter().take(n - k).enumerate() {
            let root = n + t;
            let ra = find(&mut parent, merge.a);
            let rb = find(&mut parent, merge.b);
            parent[ra] = root;
            parent[rb] = root;
        }
        let mut cluster_of_root: Vec<(usize, usize)> = Vec::new(); // (smallest leaf, root)
        let mut roots = vec![usize::MAX; n];
        for leaf in 0..n {
            let r = find(&mut parent, leaf);
            roots[leaf] = r;
            if !cluster_of_root.iter().any(|&(_, root)| root == r) {
                cluster_of_root.push((leaf, r));
            }
        }
        cluster_of_root.sort_unstable();
        let mut assignment = vec![0; n];
        for (leaf, &root) in roots.iter().enumerate() {
            let id = cluster_of_root.iter().position(|&(_, r)| r == root).expect("present");
            assignment[leaf] = id;
        }
        Ok(assignment)
    }

    /// Newick text with branch lengths equal to height differences between
    /// a cluster and its parent merge.
    pub fn to_newick(&self) -> String {
        if self.merges.is_empty() {
            return format!("{};", self.labels.first().map(String::as_str).unwrap_or(""));
        }
        fn node(dend: &Dendrogram, id: usize, parent_height: f64, out: &mut String) {
            let leaves = dend.len_leaves();
            if id < leaves {
                let _ = write!(out, "{}:{}", dend.labels[id], parent_height);
            } else {
                let merge = dend.merges[id - leaves];
                out.push('(');
                node(dend, merge.a, merge.height, out);
                out.push(',');
                node(dend, merge.b, merge.height, out);
                let _ = write!(out, "):{}", parent_height - merge.height);
            }
        }
        let root = self.merges.last().expect("non-empty");
        let mut out = String::from("(");
        node(self, root.a, root.height, &mut out);
        out.push(',');
        node(self, root.b, root.height, &mut out);
        out.push_str(");");
        out
    }
}

/// Density estimates with parallel class labels.
#[derive(Debug, Clone)]
pub struct LabeledDensities {
    pub estimates: Vec<DensityEstimate>,
    pub labels: Vec<String>,
}

impl LabeledDensities {
    pub fn new(estimates: Vec<DensityEstimate>, labels: Vec<String>) -> Result<Self> {
        if estimates.len() != labels.len() {
            return Err(Error::InsufficientInput {
                message: format!("{} estimates but {} labels", estimates.len(), labels.len()),
            });
        }
        Ok(LabeledDensities { estimates, labels })
    }

    pub fn len(&self) -> usize {
        self.estimates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.estimates.is_empty()
    }
}

// majority vote among the k nearest of `dists`; vote ties resolved by the
// smaller summed distance, then by the lexicographically smaller label
fn classify_by_distances(dists: &[(f64, usize)], labels: &[String], k: usize) -> String {
    let mut order: Vec<usize> = (0..dists.len()).collect();
    order.sort_by(|&a, &b| {
        dists[a].0.partial_cmp(&dists[b].0).expect("finite").then(dists[a].1.cmp(&dists[b].1))
    });
    let top = &order[..k];
    let mut tally: Vec<(&str, usize, f64)> = Vec::new(); // label, votes, summed distance
    for &o in top {
        let label = labels[dists[o].1].as_str();
        match tally.iter_mut().find(|(l, _, _)| *l == label) {
            Some(entry) => {
                entry.1 += 1;
                entry.2 += dists[o].0;
            }
            None => tally.push((label, 1, dists[o].0)),
        }
    }
    tally
        .into_iter()
        .min_by(|a, b| {
            b.1.cmp(&a.1)
                .then(a.2.partial_cmp(&b.2).expect("finite"))
                .then(a.0.cmp(b.0))
        })
        .expect("k >= 1")
        .0
        .to_string()
}

/// Classify `query` by the majority label among its `k` nearest training
/// estimates under the L1 distance.
pub fn knn_classify(train: &LabeledDensities, query: &DensityEstimate, k: usize) -> Result<String> {
    let n = train.len();
    if k == 0 {
        return Err(Error::InvalidK { k, max: n });
    }
    if k > n {
        return Err(Error::InsufficientPoints { needed: k, have: n });
    }
    let dists: Vec<(f64, usize)> = (0..n)
        .map(|i| (l1_distance(&train.estimates[i], query), i))
        .collect();
    Ok(classify_by_distances(&dists, &train.labels, k))
}

/// Hold-out misclassification report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HoldoutReport {
    pub k: usize,
    pub train_fraction: f64,
    pub reps: usize,
    pub rate: f64,
}

/// Repeated stratified hold-out k-NN classification.
///
/// Per repetition, ceil(train_fraction * class size) items per class are
/// drawn without replacement from the seeded stream as the training set and
/// all remaining items are classified; the returned rate is total
/// misclassifications over total classifications across repetitions. Items
/// are canonically ordered by (label, original index) before sampling, so
/// permuting the input order does not change the result.
pub fn holdout_experiment(
    data: &LabeledDensities,
    train_fraction: f64,
    k: usize,
    reps: usize,
    seed: RngSeed,
) -> Result<HoldoutReport> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidConfig {
            message: format!("train fraction {train_fraction} must lie in (0, 1)"),
        });
    }
    if reps == 0 {
        return Err(Error::InvalidConfig { message: "reps must be >= 1".into() });
    }
    let n = data.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| data.labels[a].cmp(&data.labels[b]).then(a.cmp(&b)));

    // class slices in canonical order
    let mut classes: Vec<(String, Vec<usize>)> = Vec::new();
    for &i in &order {
        match classes.last_mut() {
            Some((label, members)) if *label == data.labels[i] => members.push(i),
            _ => classes.push((data.labels[i].clone(), vec![i])),
        }
    }
    if classes.len() < 2 {
        return Err(Error::InsufficientInput {
            message: "classification needs at least 2 distinct labels".into(),
        });
    }
    let train_total: usize = classes
        .iter()
        .map(|(_, members)| (train_fraction * members.len() as f64).ceil() as usize)
        .sum();
    if k > train_total {
        return Err(Error::InsufficientPoints { needed: k, have: train_total });
    }
    for (label, members) in &classes {
        let picked = (train_fraction * members.len() as f64).ceil() as usize;
        if picked >= members.len() {
            return Err(Error::InsufficientInput {
                message: format!("class '{label}' has no test items left after training draw"),
            });
        }
    }

    // all distances are reused across repetitions
    let full = pairwise_l1(&data.estimates, &data.labels)?;

    let mut rng = seed.rng();
    let mut errors = 0usize;
    let mut total = 0usize;
    for _ in 0..reps {
        let mut in_train = vec![false; n];
        for (_, members) in &classes {
            let picked = (train_fraction * members.len() as f64).ceil() as usize;
            // partial Fisher-Yates over a scratch copy
            let mut pool = members.clone();
            for slot in 0..picked {
                let j = rng.gen_range(slot..pool.len());
                pool.swap(slot, j);
                in_train[pool[slot]] = true;
            }
        }
        let train_items: Vec<usize> = order.iter().copied().filter(|&i| in_train[i]).collect();
        for &q in order.iter().filter(|&&i| !in_train[i]) {
            let dists: Vec<(f64, usize)> =
                train_items.iter().map(|&t| (full.get(t, q), t)).collect();
            let got = classify_by_distances(&dists, &data.labels, k);
            if got != data.labels[q] {
                errors += 1;
            }
            total += 1;
        }
    }
    Ok(HoldoutReport { k, train_fraction, reps, rate: errors as f64 / total as f64 })
}
