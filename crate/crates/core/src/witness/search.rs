//! Maximum top eigenvalue over all `r x r` principal submatrices.
//!
//! The exhaustive search visits every index subset. The pruned search is a
//! best-first branch and bound over lexicographic subset prefixes; a prefix
//! `C` with remaining candidates `R` is discarded once an upper bound on
//! `lambda_max(G[S, S])` for every `C <= S <= C u R` falls to the incumbent.
//! Bounds used, cheapest first:
//!
//! * `lambda_max(G)` for the whole matrix (interlacing),
//! * the trace of the best completion (valid for PSD `G`),
//! * a Gershgorin row-sum bound over the best completion,
//! * `lambda_max(G[C u R, C u R])` (interlacing again).

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::linalg::principal_max_eigenvalue;

/// Subsets evaluated in parallel once the count exceeds this.
const PARALLEL_MIN_SUBSETS: usize = 256;
/// Dimension above which the superset eigenvalue bound is skipped.
const SUPERSET_BOUND_MAX: usize = 96;

pub(crate) fn exhaustive(g: &DMatrix<Complex64>, r: usize) -> f64 {
    let d = g.nrows();
    if binomial(d, r) < PARALLEL_MIN_SUBSETS {
        return (0..d)
            .combinations(r)
            .map(|s| principal_max_eigenvalue(g, &s))
            .fold(f64::NEG_INFINITY, f64::max);
    }
    (0..d)
        .combinations(r)
        .par_bridge()
        .map(|s| principal_max_eigenvalue(g, &s))
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Precomputed data shared by every node of one pruned search.
pub(crate) struct Pruner<'a> {
    g: &'a DMatrix<Complex64>,
    diag: Vec<f64>,
    abs: Vec<Vec<f64>>,
    /// `lambda_max(G)`.
    cap: f64,
    /// Slack for slightly indefinite input in the trace bound.
    neg_slack: f64,
}

#[derive(Debug)]
struct Node {
    bound: f64,
    chosen: Vec<usize>,
    next: usize,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on bound; deeper nodes first on ties, then lexicographic
        self.bound
            .total_cmp(&other.bound)
            .then(self.chosen.len().cmp(&other.chosen.len()))
            .then_with(|| other.chosen.cmp(&self.chosen))
    }
}

impl<'a> Pruner<'a> {
    pub(crate) fn new(g: &'a DMatrix<Complex64>, cap: f64, min_eigenvalue: f64) -> Self {
        let d = g.nrows();
        Pruner {
            g,
            diag: (0..d).map(|i| g[(i, i)].re).collect(),
            abs: (0..d).map(|i| (0..d).map(|j| g[(i, j)].norm()).collect()).collect(),
            cap,
            neg_slack: (-min_eigenvalue).max(0.0),
        }
    }

    /// `max lambda_max(G[S, S])` over `|S| = r`, never reported below
    /// `floor` (a value already known to be attainable).
    pub(crate) fn search(&self, r: usize, floor: f64) -> f64 {
        let d = self.g.nrows();
        let mut best = floor.max(self.greedy(r));
        let done = |best: f64| best >= self.cap - 1e-13;
        if done(best) {
            return best;
        }

        let mut heap = BinaryHeap::new();
        heap.push(Node { bound: self.cap, chosen: Vec::new(), next: 0 });
        while let Some(node) = heap.pop() {
            if node.bound <= best {
                break;
            }
            let need = r - node.chosen.len();
            // last admissible position for the next pick
            for j in node.next..=(d - need) {
                let mut chosen = node.chosen.clone();
                chosen.push(j);
                if need == 1 {
                    let v = principal_max_eigenvalue(self.g, &chosen);
                    if v > best {
                        best = v;
                    }
                    continue;
                }
                let bound = self.bound(&chosen, j + 1, r, best);
                if bound > best {
                    heap.push(Node { bound, chosen, next: j + 1 });
                }
            }
            if done(best) {
                break;
            }
        }
        best
    }

    fn bound(&self, chosen: &[usize], next: usize, r: usize, best: f64) -> f64 {
        let d = self.g.nrows();
        let need = r - chosen.len();
        let rest: Vec<usize> = (next..d).collect();
        let mut bound = self.cap;

        let chosen_trace: f64 = chosen.iter().map(|&i| self.diag[i]).sum();
        let mut rest_diag: Vec<f64> = rest.iter().map(|&i| self.diag[i]).collect();
        rest_diag.sort_by(|a, b| b.total_cmp(a));
        let trace = chosen_trace + rest_diag.iter().take(need).sum::<f64>() + r as f64 * self.neg_slack;
        bound = bound.min(trace);
        if bound <= best {
            return bound;
        }

        bound = bound.min(self.gershgorin(chosen, &rest, need));
        if bound <= best {
            return bound;
        }

        let pool = chosen.len() + rest.len();
        if pool <= SUPERSET_BOUND_MAX {
            let all: Vec<usize> = chosen.iter().copied().chain(rest).collect();
            bound = bound.min(principal_max_eigenvalue(self.g, &all));
        }
        bound
    }

    fn gershgorin(&self, chosen: &[usize], rest: &[usize], need: usize) -> f64 {
        let mut top = Vec::with_capacity(rest.len());
        let top_sum = |i: usize, k: usize, top: &mut Vec<f64>| -> f64 {
            top.clear();
            top.extend(rest.iter().filter(|&&j| j != i).map(|&j| self.abs[i][j]));
            top.sort_by(|a, b| b.total_cmp(a));
            top.iter().take(k).sum()
        };
        let mut worst = f64::NEG_INFINITY;
        for &i in chosen {
            let fixed: f64 = chosen.iter().filter(|&&j| j != i).map(|&j| self.abs[i][j]).sum();
            worst = worst.max(self.diag[i] + fixed + top_sum(i, need, &mut top));
        }
        for &i in rest {
            let fixed: f64 = chosen.iter().map(|&j| self.abs[i][j]).sum();
            worst = worst.max(self.diag[i] + fixed + top_sum(i, need - 1, &mut top));
        }
        worst
    }

    /// Grow a subset one index at a time, always taking the index that
    /// raises `lambda_max` the most.
    fn greedy(&self, r: usize) -> f64 {
        let d = self.g.nrows();
        let start = (0..d).max_by(|&a, &b| self.diag[a].total_cmp(&self.diag[b]).then(b.cmp(&a))).unwrap_or(0);
        let mut chosen = vec![start];
        let mut value = self.diag[start];
        while chosen.len() < r {
            let mut pick = None;
            let mut pick_value = f64::NEG_INFINITY;
            for j in (0..d).filter(|j| !chosen.contains(j)) {
                let mut trial = chosen.clone();
                trial.push(j);
                trial.sort_unstable();
                let v = principal_max_eigenvalue(self.g, &trial);
                if v > pick_value {
                    pick_value = v;
                    pick = Some(j);
                }
            }
            let Some(j) = pick else { break };
            chosen.push(j);
            chosen.sort_unstable();
            value = pick_value;
        }
        value
    }
}
