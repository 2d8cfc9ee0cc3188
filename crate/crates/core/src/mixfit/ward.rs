//! Ward-linkage agglomerative clustering used to initialize the EM
//! algorithm. Nearest-neighbour-chain construction with the Lance-Williams
//! update on squared Euclidean distances; the full merge sequence is kept so
//! one build can be cut at every candidate component count.

use nalgebra::DMatrix;

/// Merge sequence of a Ward agglomeration over `n` items.
pub(crate) struct WardTree {
    n: usize,
    /// `(keep, gone)` slot pairs in merge order; `gone` is absorbed by `keep`.
    merges: Vec<(usize, usize)>,
}

impl WardTree {
    pub(crate) fn build(x: &DMatrix<f64>) -> WardTree {
        let n = x.nrows();
        if n <= 1 {
            return WardTree { n, merges: Vec::new() };
        }

        let idx = |i: usize, j: usize| -> usize {
            debug_assert!(i < j);
            i * (2 * n - i - 1) / 2 + (j - i - 1)
        };
        let mut dist = vec![0.0f64; n * (n - 1) / 2];
        for i in 0..n {
            for j in (i + 1)..n {
                let mut d = 0.0;
                for c in 0..x.ncols() {
                    let t = x[(i, c)] - x[(j, c)];
                    d += t * t;
                }
                dist[idx(i, j)] = d;
            }
        }

        let mut active = vec![true; n];
        let mut sizes = vec![1.0f64; n];
        let mut merges = Vec::with_capacity(n - 1);
        let mut chain: Vec<usize> = Vec::new();

        while merges.len() < n - 1 {
            if chain.is_empty() {
                let first = active.iter().position(|&a| a).unwrap();
                chain.push(first);
            }
            loop {
                let a = *chain.last().unwrap();
                let prev = chain.len().checked_sub(2).map(|i| chain[i]);
                let mut best = usize::MAX;
                let mut best_d = f64::INFINITY;
                for c in 0..n {
                    if c == a || !active[c] {
                        continue;
                    }
                    let d = dist[if c < a { idx(c, a) } else { idx(a, c) }];
                    // Prefer the previous chain element on ties so reciprocal
                    // nearest neighbours are always detected.
                    if d < best_d || (d == best_d && Some(c) == prev) {
                        best_d = d;
                        best = c;
                    }
                }
                if Some(best) == prev {
                    let b = best;
                    let (keep, gone) = if a < b { (a, b) } else { (b, a) };
                    let d_ab = dist[idx(keep, gone)];
                    let (sa, sb) = (sizes[keep], sizes[gone]);
                    for c in 0..n {
                        if c == keep || c == gone || !active[c] {
                            continue;
                        }
                        let sc = sizes[c];
                        let d_ac = dist[if c < keep { idx(c, keep) } else { idx(keep, c) }];
                        let d_bc = dist[if c < gone { idx(c, gone) } else { idx(gone, c) }];
                        let updated = ((sa + sc) * d_ac + (sb + sc) * d_bc - sc * d_ab)
                            / (sa + sb + sc);
                        let slot = if c < keep { idx(c, keep) } else { idx(keep, c) };
                        dist[slot] = updated;
                    }
                    active[gone] = false;
                    sizes[keep] = sa + sb;
                    merges.push((keep, gone));
                    chain.truncate(chain.len().saturating_sub(2));
                    break;
                }
                chain.push(best);
            }
        }
        WardTree { n, merges }
    }

    /// Hard assignment into `g` clusters, labelled 0..g-1 in order of first
    /// appearance along the original row order.
    pub(crate) fn cut(&self, g: usize) -> Vec<usize> {
        let g = g.clamp(1, self.n.max(1));
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for &(keep, gone) in self.merges.iter().take(self.n - g) {
            let rk = find(&mut parent, keep);
            let rg = find(&mut parent, gone);
            parent[rg] = rk;
        }
        let mut label_of_root = vec![usize::MAX; self.n];
        let mut next = 0usize;
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let r = find(&mut parent, i);
            if label_of_root[r] == usize::MAX {
                label_of_root[r] = next;
                next += 1;
            }
            out.push(label_of_root[r]);
        }
        out
    }
}
