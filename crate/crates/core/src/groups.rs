//! Distinct-marginal grouping.
//!
//! Rows (columns) with equal target sums share one multiplier at the optimum,
//! so the dual only needs one variable per distinct value. For binary data
//! the number of distinct row sums is at most `min(m, n + 1, d_max + 1)`, and
//! `k` distinct sums need at least `0 + 1 + … + (k − 1)` ones, so there are at
//! most `√(2s)` distinct nonzero sums (one more if some row is empty). This is
//! what makes fitting and sampling scale with `s` rather than `mn`.

use alloc::vec;
use alloc::vec::Vec;

use crate::matrix::Marginals;

/// Relative tolerance under which two fractional targets are considered equal.
pub const GROUP_TOLERANCE: f64 = 1e-12;

/// Lines (rows or columns) sharing one target value.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    /// Target sum shared by the members (their mean, for fractional targets).
    pub value: f64,
    /// Sorted member indices.
    pub members: Vec<usize>,
}

impl Group {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

/// Groups for one axis, plus the reverse map from line index to group.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AxisGroups {
    groups: Vec<Group>,
    group_of: Vec<Option<usize>>,
}

impl AxisGroups {
    /// Groups every line of `values`.
    pub fn from_values(values: &[f64]) -> Self {
        let all: Vec<usize> = (0..values.len()).collect();
        Self::from_subset(values, &all)
    }

    /// Groups only the listed lines; others map to no group.
    pub fn from_subset(values: &[f64], subset: &[usize]) -> Self {
        let mut order: Vec<usize> = subset.to_vec();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

        let mut groups: Vec<Group> = Vec::new();
        let mut start_value = f64::NAN;
        for &idx in &order {
            let v = values[idx];
            let same = match groups.last() {
                Some(_) => {
                    v == start_value
                        || crate::math::abs(v - start_value)
                            <= GROUP_TOLERANCE
                                * crate::math::abs(v).max(crate::math::abs(start_value))
                }
                None => false,
            };
            if same {
                groups.last_mut().unwrap().members.push(idx);
            } else {
                start_value = v;
                groups.push(Group {
                    value: v,
                    members: vec![idx],
                });
            }
        }
        for g in &mut groups {
            g.members.sort_unstable();
            if g.members.len() > 1 {
                let total: f64 = g.members.iter().map(|&i| values[i]).sum();
                let first = values[g.members[0]];
                // exact duplicates keep their value bit-for-bit
                if g.members.iter().any(|&i| values[i] != first) {
                    g.value = total / g.members.len() as f64;
                }
            }
        }

        let mut group_of = vec![None; values.len()];
        for (k, g) in groups.iter().enumerate() {
            for &i in &g.members {
                group_of[i] = Some(k);
            }
        }
        AxisGroups { groups, group_of }
    }

    /// Reassembles groups from explicit member lists (model files).
    pub fn from_groups(n_lines: usize, groups: Vec<Group>) -> Option<Self> {
        let mut group_of = vec![None; n_lines];
        for (k, g) in groups.iter().enumerate() {
            for &i in &g.members {
                if i >= n_lines || group_of[i].is_some() {
                    return None;
                }
                group_of[i] = Some(k);
            }
        }
        Some(AxisGroups { groups, group_of })
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn n_lines(&self) -> usize {
        self.group_of.len()
    }

    pub fn group_of(&self, line: usize) -> Option<usize> {
        self.group_of[line]
    }

    pub fn multiplicities(&self) -> impl Iterator<Item = usize> + '_ {
        self.groups.iter().map(Group::multiplicity)
    }
}

/// Row and column groups of a marginal vector pair.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MarginalGroups {
    pub rows: AxisGroups,
    pub cols: AxisGroups,
}

impl MarginalGroups {
    pub fn new(marginals: &Marginals) -> Self {
        MarginalGroups {
            rows: AxisGroups::from_values(&marginals.row_sums),
            cols: AxisGroups::from_values(&marginals.col_sums),
        }
    }
}

/// Groups both axes of `marginals`.
pub fn group(marginals: &Marginals) -> MarginalGroups {
    MarginalGroups::new(marginals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_row_sums_share_a_group() {
        let g = AxisGroups::from_values(&[2.0, 2.0, 3.0]);
        assert_eq!(g.len(), 2);
        assert_eq!(g.groups()[0].value, 2.0);
        assert_eq!(g.groups()[0].members, vec![0, 1]);
        assert_eq!(g.groups()[1].value, 3.0);
        assert_eq!(g.groups()[1].members, vec![2]);
        assert_eq!(g.group_of(2), Some(1));
    }

    #[test]
    fn groups_are_sorted_ascending_and_cover_all_lines() {
        let g = AxisGroups::from_values(&[5.0, 0.0, 5.0, 1.0, 0.0]);
        let values: Vec<f64> = g.groups().iter().map(|g| g.value).collect();
        assert_eq!(values, vec![0.0, 1.0, 5.0]);
        let mut all: Vec<usize> = g.groups().iter().flat_map(|g| g.members.clone()).collect();
        all.sort();
        assert_eq!(all, vec![0, 1, 2, 3, 4]);
        assert_eq!(g.multiplicities().sum::<usize>(), 5);
    }

    #[test]
    fn near_equal_fractional_targets_merge() {
        let a = 2.5;
        let b = 2.5 * (1.0 + 1e-14);
        let g = AxisGroups::from_values(&[a, b, 2.6]);
        assert_eq!(g.len(), 2);
        assert_eq!(g.groups()[0].members, vec![0, 1]);
        let g = AxisGroups::from_values(&[2.5, 2.5 * (1.0 + 1e-9)]);
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn subset_leaves_others_ungrouped() {
        let g = AxisGroups::from_subset(&[1.0, 1.0, 4.0], &[0, 2]);
        assert_eq!(g.group_of(1), None);
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn from_groups_rejects_overlap() {
        let groups = vec![
            Group {
                value: 1.0,
                members: vec![0, 1],
            },
            Group {
                value: 2.0,
                members: vec![1],
            },
        ];
        assert!(AxisGroups::from_groups(2, groups).is_none());
    }
}
