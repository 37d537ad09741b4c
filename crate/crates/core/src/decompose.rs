//! Group-wise decomposition of a pooled transmission.
//!
//! With groups g of n_g cases out of N,
//!
//! ```text
//! T_pooled = Σ_g (n_g / N) · T_g + T_between
//! ```
//!
//! where `T_between` is the residual. Groups are reported sorted by label
//! and the weighted sum is accumulated in that order.

use crate::dims::{Dim, DimSet};
use crate::error::{Error, Result};
use crate::infocalc::transmission;
use crate::ingest::Dataset;
use crate::tables::ContingencyTable;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupContribution {
    pub group_label: String,
    pub n_cases: u64,
    /// n_g / N.
    pub weight: f64,
    /// Transmission within the group, in bits.
    pub t_group: f64,
    /// weight · t_group, in bits.
    pub contribution: f64,
}

impl GroupContribution {
    /// The contribution to the reduction of uncertainty: `-contribution`.
    pub fn reduction(&self) -> f64 {
        -self.contribution
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionResult {
    #[serde(serialize_with = "display")]
    pub subset: DimSet,
    pub groups: Vec<GroupContribution>,
    pub t_pooled: f64,
    pub t_between: f64,
}

fn display<S: serde::Serializer>(s: &DimSet, ser: S) -> Result<S::Ok, S::Error> {
    ser.collect_str(s)
}

impl DecompositionResult {
    pub fn n_cases(&self) -> u64 {
        self.groups.iter().map(|g| g.n_cases).sum()
    }

    pub fn within(&self) -> f64 {
        self.groups.iter().map(|g| g.contribution).sum()
    }

    /// |t_pooled - (t_between + Σ contributions)|.
    pub fn reconstruction_error(&self) -> f64 {
        (self.t_pooled - (self.t_between + self.within())).abs()
    }
}

fn check_subset(table: &ContingencyTable, subset: DimSet) -> Result<()> {
    subset.check_in_range(table.arity())?;
    if subset.len() < 2 {
        return Err(Error::SubsetSize {
            subset,
            len: subset.len(),
            expected: "at least 2",
        });
    }
    Ok(())
}

/// Splits by the label on `group_dim` and decomposes T(subset).
pub fn decompose_by_dimension(
    dataset: &Dataset,
    group_dim: Dim,
    subset: DimSet,
) -> Result<DecompositionResult> {
    decompose_table_by_dimension(&ContingencyTable::from_dataset(dataset), group_dim, subset)
}

/// As [`decompose_by_dimension`], from an already-built table.
pub fn decompose_table_by_dimension(
    table: &ContingencyTable,
    group_dim: Dim,
    subset: DimSet,
) -> Result<DecompositionResult> {
    if subset.contains(group_dim) {
        return Err(Error::GroupDimInSubset(group_dim));
    }
    check_subset(table, subset)?;
    let groups = table.split_by(group_dim)?;
    assemble(table, groups, subset)
}

/// Decomposes over externally supplied groups, e.g. one file per region.
/// The pooled table is the merge of all groups.
pub fn decompose_external<S: AsRef<str>>(
    groups: &[(S, Dataset)],
    subset: DimSet,
) -> Result<DecompositionResult> {
    let tables = groups
        .iter()
        .map(|(label, ds)| (label.as_ref().to_owned(), ContingencyTable::from_dataset(ds)))
        .collect();
    decompose_tables(tables, subset)
}

/// Decomposes over `(label, table)` groups of uniform arity.
pub fn decompose_tables(
    mut groups: Vec<(String, ContingencyTable)>,
    subset: DimSet,
) -> Result<DecompositionResult> {
    let arity = groups.first().ok_or(Error::EmptyTable)?.1.arity();
    let mut pooled = ContingencyTable::empty(arity);
    for (_, t) in &groups {
        if t.is_empty() {
            return Err(Error::EmptyTable);
        }
        pooled = pooled.merge(t)?;
    }
    check_subset(&pooled, subset)?;
    groups.sort_by(|a, b| a.0.cmp(&b.0));
    assemble(&pooled, groups, subset)
}

fn assemble(
    pooled: &ContingencyTable,
    groups: Vec<(String, ContingencyTable)>,
    subset: DimSet,
) -> Result<DecompositionResult> {
    let n = pooled.total() as f64;
    let contribution = |(label, t): (String, ContingencyTable)| -> Result<GroupContribution> {
        let t_group = transmission(&t, subset)?;
        let weight = t.total() as f64 / n;
        Ok(GroupContribution {
            group_label: label,
            n_cases: t.total(),
            weight,
            t_group,
            contribution: weight * t_group,
        })
    };

    #[cfg(feature = "parallel")]
    let groups: Vec<GroupContribution> = {
        use rayon::prelude::*;
        groups.into_par_iter().map(contribution).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let groups: Vec<GroupContribution> =
        groups.into_iter().map(contribution).collect::<Result<_>>()?;

    let t_pooled = transmission(pooled, subset)?;
    let mut result = DecompositionResult {
        subset,
        groups,
        t_pooled,
        t_between: 0.0,
    };
    result.t_between = t_pooled - result.within();
    debug_assert!(result.reconstruction_error() <= 1e-12);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::parse_dataset;

    fn table1() -> Dataset {
        parse_dataset(
            [
                r#""id1", "1", "b", "region1", "2""#,
                r#""id2", "2", "a", "region2", "1""#,
                r#""id3", "1", "a", "region2", "2""#,
                r#""id4", "1", "b", "region5", "1""#,
            ],
            "table1",
        )
        .unwrap()
    }

    fn s(name: &str) -> DimSet {
        name.parse().unwrap()
    }

    #[test]
    fn group_by_x() {
        let r = decompose_by_dimension(&table1(), Dim::X, s("wyz")).unwrap();
        let labels: Vec<&str> = r.groups.iter().map(|g| g.group_label.as_str()).collect();
        assert_eq!(labels, ["a", "b"]);
        for g in &r.groups {
            assert_eq!(g.n_cases, 2);
            assert_eq!(g.weight, 0.5);
            // Two cases per group: every subset entropy is 1 bit, so T = 3 - 3 + 1 - 1 = 0.
            assert!(g.t_group.abs() < 1e-12);
        }
        assert!((r.t_pooled + 0.188_721_875_540_867).abs() < 1e-12);
        assert!((r.t_between - r.t_pooled).abs() < 1e-12);
    }

    #[test]
    fn single_group_has_no_between_term() {
        let ds = parse_dataset(["a,r,1,2", "b,r,2,2", "c,r,2,1", "d,r,1,1", "e,r,1,2"], "t").unwrap();
        let r = decompose_by_dimension(&ds, Dim::W, s("xy")).unwrap();
        assert_eq!(r.groups.len(), 1);
        assert_eq!(r.groups[0].weight, 1.0);
        assert!(r.t_between.abs() < 1e-12);
    }

    #[test]
    fn singleton_groups_leave_everything_between() {
        let ds = parse_dataset(["a,1,1,2", "b,2,2,2", "c,3,2,1", "d,4,1,1"], "t").unwrap();
        let r = decompose_by_dimension(&ds, Dim::W, s("xy")).unwrap();
        assert!(r.groups.iter().all(|g| g.t_group == 0.0));
        assert_eq!(r.t_between, r.t_pooled);
    }

    #[test]
    fn usage_errors() {
        assert!(matches!(
            decompose_by_dimension(&table1(), Dim::X, s("wxy")),
            Err(Error::GroupDimInSubset(Dim::X))
        ));
        assert!(matches!(
            decompose_by_dimension(&table1(), Dim::X, s("w")),
            Err(Error::SubsetSize { .. })
        ));
        let t3 = parse_dataset(["a,1,2,3"], "t").unwrap();
        assert!(matches!(
            decompose_external(&[("a", table1()), ("b", t3)], s("wx")),
            Err(Error::ArityMismatch { .. })
        ));
        let none: [(&str, Dataset); 0] = [];
        assert!(decompose_external(&none, s("wx")).is_err());
    }

    #[test]
    fn external_matches_by_dimension() {
        let ds = table1();
        let by_dim = decompose_by_dimension(&ds, Dim::Y, s("wxz")).unwrap();
        let mut parts: Vec<(String, Dataset)> = Vec::new();
        for label in ["region5", "region1", "region2"] {
            let recs = ds
                .records()
                .iter()
                .filter(|r| r.label(Dim::Y) == Some(label))
                .cloned()
                .collect();
            parts.push((label.to_string(), Dataset::new(label, recs).unwrap()));
        }
        let ext = decompose_external(&parts, s("wxz")).unwrap();
        assert_eq!(by_dim, ext);
        let weights: Vec<f64> = ext.groups.iter().map(|g| g.weight).collect();
        assert_eq!(weights, [0.25, 0.5, 0.25]);
    }

    #[test]
    fn reduction_negates() {
        let r = decompose_by_dimension(&table1(), Dim::W, s("xyz")).unwrap();
        for g in &r.groups {
            assert_eq!(g.reduction(), -g.contribution);
        }
    }
}
