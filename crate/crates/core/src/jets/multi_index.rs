use std::fmt;

/// Symmetric multi-index: a sorted tuple of 0-based base indices.
///
/// The derived ordering is lexicographic on the sorted tuples, which is the
/// serialization order of derivative maps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(mut indices: Vec<usize>) -> MultiIndex {
        indices.sort_unstable();
        MultiIndex(indices)
    }

    pub fn empty() -> MultiIndex {
        MultiIndex(Vec::new())
    }

    pub fn single(i: usize) -> MultiIndex {
        MultiIndex(vec![i])
    }

    pub fn pair(i: usize, j: usize) -> MultiIndex {
        MultiIndex::new(vec![i, j])
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// `(σ, λ)`, re-sorted.
    pub fn with(&self, i: usize) -> MultiIndex {
        let pos = self.0.partition_point(|&x| x <= i);
        let mut v = self.0.clone();
        v.insert(pos, i);
        MultiIndex(v)
    }

    /// Drop the largest entry; returns it with the remainder.
    pub fn split_last(&self) -> Option<(MultiIndex, usize)> {
        let (&last, rest) = self.0.split_last()?;
        Some((MultiIndex(rest.to_vec()), last))
    }

    /// All multi-indices of exactly `order` over `0..n`, lexicographically.
    pub fn of_order(n: usize, order: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(order);
        fn rec(n: usize, order: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if current.len() == order {
                out.push(MultiIndex(current.clone()));
                return;
            }
            for i in start..n {
                current.push(i);
                rec(n, order, i, current, out);
                current.pop();
            }
        }
        rec(n, order, 0, &mut current, &mut out);
        out
    }

    /// All multi-indices with `1 ≤ |σ| ≤ r` over `0..n`, lexicographically.
    pub fn up_to(n: usize, r: usize) -> Vec<MultiIndex> {
        let mut out: Vec<MultiIndex> = (1..=r).flat_map(|k| MultiIndex::of_order(n, k)).collect();
        out.sort();
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concatenation_resorts() {
        assert_eq!(MultiIndex::new(vec![2, 0]).with(1), MultiIndex::new(vec![0, 1, 2]));
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let all = MultiIndex::up_to(2, 2);
        let flat: Vec<&[usize]> = all.iter().map(|m| m.indices()).collect();
        assert_eq!(flat, vec![&[0][..], &[0, 0], &[0, 1], &[1], &[1, 1]]);
        // C(n + k - 1, k)
        assert_eq!(MultiIndex::of_order(3, 3).len(), 10);
    }
}
