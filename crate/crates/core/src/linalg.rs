//! Minimal exact linear algebra: incremental rank of sparse rational rows.

use std::collections::BTreeMap;

use num::Zero;

use crate::algebra::Scalar;

/// An incrementally built row space over the rationals, with columns indexed
/// by an arbitrary ordered key type. Rows are kept reduced against each
/// other's leading columns, so the number of stored rows is the rank.
#[derive(Clone, Debug, Default)]
pub struct RowSpace<K: Ord + Clone> {
    // pivot column -> reduced row whose leading entry (at that column) is 1
    rows: BTreeMap<K, BTreeMap<K, Scalar>>,
}

impl<K: Ord + Clone> RowSpace<K> {
    pub fn new() -> Self {
        RowSpace {
            rows: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the stored rows; the remainder is zero exactly
    /// when `row` lies in the current span.
    pub fn reduce(&self, mut row: BTreeMap<K, Scalar>) -> BTreeMap<K, Scalar> {
        row.retain(|_, c| !c.is_zero());
        loop {
            let Some(pivot) = row.keys().next().cloned() else {
                return row;
            };
            let Some(existing) = self.rows.get(&pivot) else {
                return row;
            };
            let lead = row.remove(&pivot).expect("pivot entry present");
            for (k, v) in existing {
                if k == &pivot {
                    continue;
                }
                let entry = row.entry(k.clone()).or_insert_with(Scalar::zero);
                *entry -= lead.clone() * v;
                if entry.is_zero() {
                    row.remove(k);
                }
            }
        }
    }

    /// Inserts `row` if it is independent of the rows already stored.
    /// Returns `true` when the rank grew.
    pub fn insert(&mut self, row: BTreeMap<K, Scalar>) -> bool {
        let mut rem = self.reduce(row);
        let Some(pivot) = rem.keys().next().cloned() else {
            return false;
        };
        let lead = rem.get(&pivot).expect("pivot entry present").clone();
        for v in rem.values_mut() {
            *v /= lead.clone();
        }
        self.rows.insert(pivot, rem);
        true
    }

    pub fn contains(&self, row: BTreeMap<K, Scalar>) -> bool {
        self.reduce(row).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar;

    fn row(entries: &[(u32, i64)]) -> BTreeMap<u32, Scalar> {
        entries
            .iter()
            .map(|&(k, v)| (k, scalar::int(v)))
            .collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let mut space = RowSpace::new();
        assert!(space.insert(row(&[(0, 1), (1, 2)])));
        assert!(space.insert(row(&[(1, 1), (2, 1)])));
        // (1, 0, -2) = (1, 2, 0) - 2 (0, 1, 1)  ... dependent triple
        assert!(!space.insert(row(&[(0, 1), (2, -2)])));
        assert_eq!(space.rank(), 2);
        assert!(space.insert(row(&[(2, 5)])));
        assert_eq!(space.rank(), 3);
    }

    #[test]
    fn membership_after_reduction() {
        let mut space = RowSpace::new();
        space.insert(row(&[(0, 2), (1, 4)]));
        assert!(space.contains(row(&[(0, 1), (1, 2)])));
        assert!(!space.contains(row(&[(0, 1), (1, 3)])));
        assert!(space.contains(BTreeMap::new()));
    }
}
