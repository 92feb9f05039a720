//! Sparse symmetric pairwise weights.
//!
//! [`EdgeSimilarity`] stores only the nonzero entries of a symmetric
//! nonnegative matrix over a set of elements, row-compressed in both
//! directions, with the per-element row sums cached. The elements are graph
//! edges for the main problem and nodes or edges for the baselines.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSimilarity {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    values: Vec<f64>,
    totals: Vec<f64>,
    pair_sum: f64,
    s_min_nonzero: Option<f64>,
    s_max: Option<f64>,
}

impl EdgeSimilarity {
    /// An all-zero similarity over `element_count` elements.
    pub fn empty(element_count: usize) -> Self {
        Self {
            offsets: vec![0; element_count + 1],
            targets: Vec::new(),
            values: Vec::new(),
            totals: vec![0.0; element_count],
            pair_sum: 0.0,
            s_min_nonzero: None,
            s_max: None,
        }
    }

    /// Builds the map from unordered pairs. Zero values are dropped; each
    /// pair may appear at most once in either orientation.
    pub fn from_pairs(
        element_count: usize,
        pairs: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut entries: Vec<(u32, u32, f64)> = Vec::new();
        for (a, b, value) in pairs {
            if a >= element_count
                || b >= element_count
                || a == b
                || !value.is_finite()
                || value < 0.0
            {
                return Err(Error::InvalidSimilarity { a, b, value });
            }
            if value == 0.0 {
                continue;
            }
            let (lo, hi) = (a.min(b) as u32, a.max(b) as u32);
            entries.push((lo, hi, value));
        }
        entries.sort_unstable_by_key(|&(a, b, _)| (a, b));
        if let Some(w) = entries
            .windows(2)
            .find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
        {
            return Err(Error::DuplicatePair(w[0].0 as usize, w[0].1 as usize));
        }

        let mut degree = vec![0usize; element_count];
        for &(a, b, _) in &entries {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(element_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let nnz = *offsets.last().unwrap();
        let mut targets = vec![0u32; nnz];
        let mut values = vec![0.0; nnz];
        let mut cursor = offsets[..element_count].to_vec();
        // Rows come out sorted: entries are sorted by (lo, hi), so every row
        // first receives its smaller neighbours (as `hi`) in increasing order
        // and then its larger neighbours (as `lo`) in increasing order.
        for &(a, b, w) in &entries {
            let (a, b) = (a as usize, b as usize);
            targets[cursor[b]] = a as u32;
            values[cursor[b]] = w;
            cursor[b] += 1;
        }
        for &(a, b, w) in &entries {
            let (a, b) = (a as usize, b as usize);
            targets[cursor[a]] = b as u32;
            values[cursor[a]] = w;
            cursor[a] += 1;
        }

        let totals = (0..element_count)
            .map(|e| values[offsets[e]..offsets[e + 1]].iter().sum())
            .collect();
        let pair_sum = entries.iter().map(|&(_, _, w)| w).sum();
        let s_min_nonzero = entries.iter().map(|&(_, _, w)| w).reduce(f64::min);
        let s_max = entries.iter().map(|&(_, _, w)| w).reduce(f64::max);
        Ok(Self {
            offsets,
            targets,
            values,
            totals,
            pair_sum,
            s_min_nonzero,
            s_max,
        })
    }

    pub fn element_count(&self) -> usize {
        self.totals.len()
    }

    /// Number of stored (nonzero) unordered pairs.
    pub fn pair_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// `s(a, b)`; zero for unstored pairs and on the diagonal.
    pub fn value(&self, a: usize, b: usize) -> f64 {
        let (targets, values) = self.row(a);
        match targets.binary_search(&(b as u32)) {
            Ok(i) => values[i],
            Err(_) => 0.0,
        }
    }

    /// Neighbours of `e` (sorted) with their similarity values.
    pub fn row(&self, e: usize) -> (&[u32], &[f64]) {
        let range = self.offsets[e]..self.offsets[e + 1];
        (&self.targets[range.clone()], &self.values[range])
    }

    pub fn neighbors(&self, e: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (t, v) = self.row(e);
        t.iter().zip(v).map(|(&t, &v)| (t as usize, v))
    }

    /// Cached `s_total(e, E)`.
    pub fn total(&self, e: usize) -> f64 {
        self.totals[e]
    }

    pub fn totals(&self) -> &[f64] {
        &self.totals
    }

    /// Sum of `s` over all unordered pairs.
    pub fn pair_sum(&self) -> f64 {
        self.pair_sum
    }

    /// Smallest stored value, `None` when nothing is stored.
    pub fn s_min_nonzero(&self) -> Option<f64> {
        self.s_min_nonzero
    }

    pub fn s_max(&self) -> Option<f64> {
        self.s_max
    }

    /// Stored unordered pairs `(a, b, s)` with `a < b`, in increasing order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.element_count()).flat_map(move |a| {
            self.neighbors(a)
                .filter(move |&(b, _)| b > a)
                .map(move |(b, w)| (a, b, w))
        })
    }

    /// Sum of `s` over unordered pairs inside the set marked by `mask`.
    pub fn pair_sum_within(&self, members: &[usize], mask: &[bool]) -> f64 {
        let twice: f64 = members
            .iter()
            .map(|&e| {
                self.neighbors(e)
                    .filter(|&(d, _)| mask[d])
                    .map(|(_, w)| w)
                    .sum::<f64>()
            })
            .sum();
        twice / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stores_symmetric_sparse_values() {
        let s = EdgeSimilarity::from_pairs(4, [(2, 0, 0.5), (0, 1, 0.25), (1, 3, 0.0)]).unwrap();
        assert_eq!(s.pair_count(), 2);
        assert_eq!(s.value(0, 2), 0.5);
        assert_eq!(s.value(2, 0), 0.5);
        assert_eq!(s.value(1, 3), 0.0);
        assert_eq!(s.value(1, 1), 0.0);
        assert_eq!(s.total(0), 0.75);
        assert_eq!(s.totals(), &[0.75, 0.25, 0.5, 0.0]);
        assert_eq!(s.pair_sum(), 0.75);
        assert_eq!(s.s_min_nonzero(), Some(0.25));
        assert_eq!(s.s_max(), Some(0.5));
        let pairs: Vec<_> = s.pairs().collect();
        assert_eq!(pairs, vec![(0, 1, 0.25), (0, 2, 0.5)]);
    }

    #[test]
    fn rows_are_sorted() {
        let s = EdgeSimilarity::from_pairs(5, [(4, 2, 1.0), (0, 2, 1.0), (2, 3, 1.0), (1, 2, 1.0)])
            .unwrap();
        assert_eq!(s.row(2).0, &[0, 1, 3, 4]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(EdgeSimilarity::from_pairs(2, [(0, 0, 1.0)]).is_err());
        assert!(EdgeSimilarity::from_pairs(2, [(0, 1, -1.0)]).is_err());
        assert!(EdgeSimilarity::from_pairs(2, [(0, 2, 1.0)]).is_err());
        assert!(matches!(
            EdgeSimilarity::from_pairs(2, [(0, 1, 1.0), (1, 0, 0.5)]),
            Err(Error::DuplicatePair(0, 1))
        ));
    }

    #[test]
    fn empty_has_no_extremes() {
        let s = EdgeSimilarity::empty(3);
        assert_eq!(s.s_min_nonzero(), None);
        assert_eq!(s.pair_sum(), 0.0);
    }
}
