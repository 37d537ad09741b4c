//! Entropies and transmissions, in bits.
//!
//! The transmission among a set of dimensions S is the signed
//! inclusion-exclusion sum
//!
//! ```text
//! T(S) = Σ_{∅ ≠ U ⊆ S} (-1)^(|U|+1) H(U)
//! ```
//!
//! which gives mutual information for two dimensions and the (possibly
//! negative) interaction information for three and four.
//!
//! Entropies are summed over cell counts sorted ascending, so every value is
//! a deterministic function of the multiset of counts. Two tables with the
//! same counts produce bit-identical reports however they were built.

use crate::dims::{Arity, Dim, DimSet};
use crate::error::{Error, Result};
use crate::tables::ContingencyTable;
use serde::ser::{Serialize, SerializeMap, Serializer};

/// Plug-in Shannon entropy, in bits, of a list of counts summing to `total`.
pub(crate) fn entropy_of_counts(mut counts: Vec<u64>, total: u64) -> f64 {
    counts.sort_unstable();
    let n = total as f64;
    counts
        .into_iter()
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// H(subset) in bits.
pub fn entropy(table: &ContingencyTable, subset: DimSet) -> Result<f64> {
    subset.check_in_range(table.arity())?;
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    Ok(entropy_of_counts(table.marginal_counts(subset), table.total()))
}

/// Signed inclusion-exclusion over the non-empty subsets of `subset`.
fn inclusion_exclusion(subset: DimSet, mut h: impl FnMut(DimSet) -> Result<f64>) -> Result<f64> {
    let mut t = 0.0;
    for u in subset.subsets() {
        let hu = h(u)?;
        if u.len() % 2 == 1 {
            t += hu;
        } else {
            t -= hu;
        }
    }
    Ok(t)
}

fn check_transmission_subset(table: &ContingencyTable, subset: DimSet) -> Result<()> {
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

/// T(subset) in bits; `subset` must hold two to four dimensions.
pub fn transmission(table: &ContingencyTable, subset: DimSet) -> Result<f64> {
    check_transmission_subset(table, subset)?;
    inclusion_exclusion(subset, |u| entropy(table, u))
}

/// T(a,b | given) = H(a,given) + H(b,given) - H(given) - H(a,b,given).
pub fn conditional_transmission(
    table: &ContingencyTable,
    a: Dim,
    b: Dim,
    given: Dim,
) -> Result<f64> {
    if a == b || a == given || b == given {
        return Err(Error::DimensionsNotDistinct);
    }
    let h = |dims: &[Dim]| entropy(table, DimSet::of(dims));
    Ok(h(&[a, given])? + h(&[b, given])? - h(&[given])? - h(&[a, b, given])?)
}

/// Every entropy and transmission of a table.
///
/// The layout is always the four-variable one: 15 entropies and 11
/// transmissions. For three-variable input every entry involving `z` is
/// zero.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyReport {
    arity: Arity,
    n_cases: u64,
    h: [f64; 15],
    t: [f64; 11],
}

impl EntropyReport {
    /// Transmission subsets, in report order: every subset of size ≥ 2.
    pub fn transmission_order() -> impl Iterator<Item = DimSet> + Clone {
        DimSet::report_order().iter().copied().filter(|s| s.len() >= 2)
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn n_cases(&self) -> u64 {
        self.n_cases
    }

    pub fn h(&self, subset: DimSet) -> Option<f64> {
        let i = DimSet::report_order().iter().position(|s| *s == subset)?;
        Some(self.h[i])
    }

    pub fn t(&self, subset: DimSet) -> Option<f64> {
        let i = Self::transmission_order().position(|s| s == subset)?;
        Some(self.t[i])
    }

    /// `(subset, H)` in report order.
    pub fn entropies(&self) -> impl Iterator<Item = (DimSet, f64)> + '_ {
        DimSet::report_order().iter().copied().zip(self.h)
    }

    /// `(subset, T)` in report order.
    pub fn transmissions(&self) -> impl Iterator<Item = (DimSet, f64)> + '_ {
        Self::transmission_order().zip(self.t)
    }
}

impl Serialize for EntropyReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Named<I>(I);
        impl<I: Iterator<Item = (DimSet, f64)> + Clone> Serialize for Named<I> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(None)?;
                for (k, v) in self.0.clone() {
                    m.serialize_entry(&k.to_string(), &v)?;
                }
                m.end()
            }
        }
        let mut m = serializer.serialize_map(Some(4))?;
        m.serialize_entry("arity", &self.arity)?;
        m.serialize_entry("n_cases", &self.n_cases)?;
        m.serialize_entry("h", &Named(DimSet::report_order().iter().copied().zip(self.h)))?;
        m.serialize_entry("t", &Named(Self::transmission_order().zip(self.t)))?;
        m.end()
    }
}

/// Computes every entry of the report.
pub fn full_report(table: &ContingencyTable) -> Result<EntropyReport> {
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    let present = table.arity().dims();
    let order = DimSet::report_order();
    let entropy_at = |s: DimSet| {
        if s.is_subset_of(present) {
            entropy_of_counts(table.marginal_counts(s), table.total())
        } else {
            0.0
        }
    };

    #[cfg(feature = "parallel")]
    let h: Vec<f64> = {
        use rayon::prelude::*;
        order.par_iter().map(|&s| entropy_at(s)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let h: Vec<f64> = order.iter().map(|&s| entropy_at(s)).collect();

    let h: [f64; 15] = h.try_into().expect("fifteen subsets");
    let lookup = |u: DimSet| -> Result<f64> {
        Ok(h[order.iter().position(|s| *s == u).expect("non-empty subset")])
    };
    let mut t = [0.0; 11];
    for (slot, s) in t.iter_mut().zip(EntropyReport::transmission_order()) {
        if s.is_subset_of(present) {
            *slot = inclusion_exclusion(s, lookup)?;
        }
    }
    Ok(EntropyReport {
        arity: table.arity(),
        n_cases: table.total(),
        h,
        t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::parse_dataset;

    fn table(lines: &[&str]) -> ContingencyTable {
        ContingencyTable::from_dataset(&parse_dataset(lines, "t").unwrap())
    }

    fn table1() -> ContingencyTable {
        table(&[
            r#""id1", "1", "b", "region1", "2""#,
            r#""id2", "2", "a", "region2", "1""#,
            r#""id3", "1", "a", "region2", "2""#,
            r#""id4", "1", "b", "region5", "1""#,
        ])
    }

    fn s(name: &str) -> DimSet {
        name.parse().unwrap()
    }

    #[test]
    fn entropy_of_w_is_0_8113() {
        let h = entropy(&table1(), s("w")).unwrap();
        let expected = -(0.75f64 * 0.75f64.log2()) - 0.25 * 0.25f64.log2();
        assert!((h - expected).abs() < 1e-15);
        assert!((h - 0.811278).abs() < 1e-6);
    }

    #[test]
    fn table1_spot_values() {
        let t = table1();
        assert_eq!(entropy(&t, s("y")).unwrap(), 1.5);
        assert_eq!(entropy(&t, s("wxyz")).unwrap(), 2.0);
        assert!((transmission(&t, s("wx")).unwrap() - 0.311278).abs() < 1e-6);
        assert!(transmission(&t, s("xz")).unwrap().abs() < 1e-12);
        assert!((transmission(&t, s("wxz")).unwrap() + 0.188722).abs() < 1e-6);
        assert!((transmission(&t, s("wxyz")).unwrap() + 0.188722).abs() < 1e-6);
    }

    #[test]
    fn conditional_w_x_given_z() {
        let v = conditional_transmission(&table1(), Dim::W, Dim::X, Dim::Z).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn constant_dimension_has_zero_entropy() {
        let t = table(&["a,k,1,2", "b,k,2,2", "c,k,3,1"]);
        assert_eq!(entropy(&t, s("w")).unwrap(), 0.0);
    }

    #[test]
    fn all_constant_table_is_all_zero() {
        let r = full_report(&table(&["a,k,k,k,k"; 3])).unwrap();
        assert!(r.entropies().all(|(_, v)| v == 0.0));
        assert!(r.transmissions().all(|(_, v)| v == 0.0));
    }

    #[test]
    fn usage_errors() {
        let t = table1();
        assert!(matches!(entropy(&t, DimSet::EMPTY), Err(Error::EmptySubset)));
        assert!(matches!(transmission(&t, s("w")), Err(Error::SubsetSize { .. })));
        assert!(matches!(
            conditional_transmission(&t, Dim::W, Dim::W, Dim::Z),
            Err(Error::DimensionsNotDistinct)
        ));
        let t3 = table(&["a,1,2,3"]);
        assert!(matches!(
            transmission(&t3, s("wz")),
            Err(Error::DimensionOutOfRange { dim: Dim::Z, .. })
        ));
        assert!(matches!(
            full_report(&ContingencyTable::empty(Arity::Three)),
            Err(Error::EmptyTable)
        ));
    }

    #[test]
    fn report_matches_standalone_operations() {
        let t = table1();
        let r = full_report(&t).unwrap();
        for (subset, h) in r.entropies() {
            assert_eq!(h.to_bits(), entropy(&t, subset).unwrap().to_bits());
        }
        for (subset, v) in r.transmissions() {
            assert_eq!(v.to_bits(), transmission(&t, subset).unwrap().to_bits());
        }
    }

    #[test]
    fn arity_three_report_zeroes_z() {
        let t = table(&["a,1,2,3", "b,1,3,3", "c,2,2,4"]);
        let r = full_report(&t).unwrap();
        assert_eq!(r.arity(), Arity::Three);
        for (subset, v) in r.entropies().chain(r.transmissions()) {
            if subset.contains(Dim::Z) {
                assert_eq!(v, 0.0, "{subset}");
            }
        }
        assert!(r.h(s("wxy")).unwrap() > 0.0);
    }

    #[test]
    fn json_shape() {
        let r = full_report(&table1()).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["arity"], 4);
        assert_eq!(v["n_cases"], 4);
        assert_eq!(v["h"]["WXYZ"], 2.0);
        assert_eq!(v["t"].as_object().unwrap().len(), 11);
        assert_eq!(v["h"].as_object().unwrap().len(), 15);
    }
}
