//! Sparse contingency tables over nominal labels.
//!
//! Labels are interned per dimension into `u32` codes in first-observation
//! order; a cell is the fixed-width array of codes, with unused trailing
//! positions held at zero. Only non-zero cells are stored.

use crate::dims::{Arity, Dim, DimSet, MAX_ARITY};
use crate::error::{Error, Result};
use crate::ingest::{CaseRecord, Dataset};
use indexmap::IndexSet;
use std::collections::{BTreeMap, HashMap};

pub(crate) type Cell = [u32; MAX_ARITY];

/// Joint frequencies of label tuples.
#[derive(Clone, Debug)]
pub struct ContingencyTable {
    arity: Arity,
    alphabets: Vec<IndexSet<String>>,
    counts: HashMap<Cell, u64>,
    total: u64,
}

impl ContingencyTable {
    /// A table with no cases. This is the identity for [`merge`](Self::merge).
    pub fn empty(arity: Arity) -> Self {
        ContingencyTable {
            arity,
            alphabets: vec![IndexSet::new(); arity.get()],
            counts: HashMap::new(),
            total: 0,
        }
    }

    pub fn from_dataset(dataset: &Dataset) -> Self {
        Self::from_records(dataset.records()).expect("datasets are non-empty and uniform")
    }

    /// Counts `records`, in parallel when the `parallel` feature is on.
    pub fn from_records(records: &[CaseRecord]) -> Result<Self> {
        #[cfg(feature = "parallel")]
        {
            Self::from_records_parallel(records)
        }
        #[cfg(not(feature = "parallel"))]
        {
            Self::from_records_sequential(records)
        }
    }

    pub fn from_records_sequential(records: &[CaseRecord]) -> Result<Self> {
        let arity = first_arity(records)?;
        let mut builder = TableBuilder::new(arity);
        for r in records {
            builder.push_record(r)?;
        }
        Ok(builder.finish())
    }

    /// Builds one table per `shard_len` records and merges them left to right.
    pub fn from_records_sharded(records: &[CaseRecord], shard_len: usize) -> Result<Self> {
        let arity = first_arity(records)?;
        records
            .chunks(shard_len.max(1))
            .map(Self::from_records_sequential)
            .try_fold(Self::empty(arity), |acc, t| acc.merge(&t?))
    }

    /// Shards across the rayon pool; shards are merged in input order, so
    /// alphabets come out exactly as in a sequential build.
    #[cfg(feature = "parallel")]
    pub fn from_records_parallel(records: &[CaseRecord]) -> Result<Self> {
        use rayon::prelude::*;

        let arity = first_arity(records)?;
        let shard_len = (records.len() / (rayon::current_num_threads() * 4)).max(4096);
        records
            .par_chunks(shard_len)
            .map(Self::from_records_sequential)
            .try_reduce(|| Self::empty(arity), |a, b| a.merge(&b))
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    /// Number of cases, N.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Number of distinct non-zero cells.
    pub fn distinct_cells(&self) -> usize {
        self.counts.len()
    }

    /// Distinct labels of `dim` in first-observation order.
    pub fn alphabet(&self, dim: Dim) -> Option<&IndexSet<String>> {
        self.alphabets.get(dim.index())
    }

    /// Count of one label tuple; zero if unseen or of the wrong length.
    pub fn count(&self, labels: &[&str]) -> u64 {
        if labels.len() != self.arity.get() {
            return 0;
        }
        self.encode(labels)
            .and_then(|cell| self.counts.get(&cell).copied())
            .unwrap_or(0)
    }

    /// All non-zero cells keyed by their labels, in sorted order.
    pub fn labelled_counts(&self) -> BTreeMap<Vec<&str>, u64> {
        self.counts
            .iter()
            .map(|(cell, &c)| (self.decode(cell, self.arity.dims()), c))
            .collect()
    }

    /// Projects onto `subset` by summing out the other dimensions.
    pub fn marginal(&self, subset: DimSet) -> Result<MarginalTable<'_>> {
        subset.check_in_range(self.arity)?;
        Ok(MarginalTable {
            table: self,
            subset,
            counts: self.project_cells(subset),
        })
    }

    /// Cellwise sum. Labels new to `self` are appended to its alphabets in
    /// `other`'s order.
    pub fn merge(mut self, other: &ContingencyTable) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                left: self.arity.get(),
                right: other.arity.get(),
            });
        }
        let remap: Vec<Vec<u32>> = self
            .alphabets
            .iter_mut()
            .zip(&other.alphabets)
            .map(|(mine, theirs)| {
                theirs
                    .iter()
                    .map(|label| intern(mine, label))
                    .collect()
            })
            .collect();
        self.counts.reserve(other.counts.len());
        for (cell, &c) in &other.counts {
            let mut mapped = [0; MAX_ARITY];
            for (d, codes) in remap.iter().enumerate() {
                mapped[d] = codes[cell[d] as usize];
            }
            *self.counts.entry(mapped).or_insert(0) += c;
        }
        self.total += other.total;
        Ok(self)
    }

    /// A three-variable table over the dimensions of `subset`, renamed to
    /// `w, x, y` in ascending order.
    pub fn project3(&self, subset: DimSet) -> Result<ContingencyTable> {
        subset.check_in_range(self.arity)?;
        if subset.len() != 3 {
            return Err(Error::SubsetSize {
                subset,
                len: subset.len(),
                expected: "exactly 3",
            });
        }
        let dims: Vec<Dim> = subset.iter().collect();
        let mut cells: Vec<(Cell, u64)> = self
            .project_cells(subset)
            .into_iter()
            .map(|(cell, c)| {
                let mut out = [0; MAX_ARITY];
                for (i, d) in dims.iter().enumerate() {
                    out[i] = cell[d.index()];
                }
                (out, c)
            })
            .collect();
        cells.sort_unstable();
        let sources: Vec<&IndexSet<String>> =
            dims.iter().map(|d| &self.alphabets[d.index()]).collect();
        Ok(Self::from_coded_cells(Arity::Three, &sources, cells))
    }

    /// Splits the table by the label on `dim`, one sub-table per label,
    /// sorted by label.
    pub fn split_by(&self, dim: Dim) -> Result<Vec<(String, ContingencyTable)>> {
        DimSet::of(&[dim]).check_in_range(self.arity)?;
        let mut groups: HashMap<u32, Vec<(Cell, u64)>> = HashMap::new();
        for (cell, &c) in &self.counts {
            groups.entry(cell[dim.index()]).or_default().push((*cell, c));
        }
        let sources: Vec<&IndexSet<String>> = self.alphabets.iter().collect();
        let mut out: Vec<(String, ContingencyTable)> = groups
            .into_iter()
            .map(|(code, mut cells)| {
                cells.sort_unstable();
                let label = self.alphabets[dim.index()][code as usize].clone();
                (label, Self::from_coded_cells(self.arity, &sources, cells))
            })
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// Cell counts of the projection onto `subset`.
    pub(crate) fn project_cells(&self, subset: DimSet) -> HashMap<Cell, u64> {
        if subset == self.arity.dims() {
            return self.counts.clone();
        }
        let mut mask = [0u32; MAX_ARITY];
        for d in subset.iter() {
            mask[d.index()] = u32::MAX;
        }
        let mut out = HashMap::with_capacity(self.counts.len());
        for (cell, &c) in &self.counts {
            let key = std::array::from_fn(|i| cell[i] & mask[i]);
            *out.entry(key).or_insert(0) += c;
        }
        out
    }

    /// Just the counts of the projection onto `subset`, in no particular order.
    pub(crate) fn marginal_counts(&self, subset: DimSet) -> Vec<u64> {
        if subset == self.arity.dims() {
            return self.counts.values().copied().collect();
        }
        self.project_cells(subset).into_values().collect()
    }

    pub(crate) fn cells(&self) -> impl Iterator<Item = (&Cell, u64)> + '_ {
        self.counts.iter().map(|(k, &v)| (k, v))
    }

    /// Rebuilds a table from cells coded against `sources`, re-interning so
    /// that only labels actually present end up in the alphabets.
    fn from_coded_cells(
        arity: Arity,
        sources: &[&IndexSet<String>],
        cells: Vec<(Cell, u64)>,
    ) -> ContingencyTable {
        let mut table = ContingencyTable::empty(arity);
        for (cell, c) in cells {
            let mut coded = [0; MAX_ARITY];
            for d in 0..arity.get() {
                coded[d] = intern(&mut table.alphabets[d], &sources[d][cell[d] as usize]);
            }
            *table.counts.entry(coded).or_insert(0) += c;
            table.total += c;
        }
        table
    }

    fn encode(&self, labels: &[&str]) -> Option<Cell> {
        let mut cell = [0; MAX_ARITY];
        for (d, label) in labels.iter().enumerate() {
            cell[d] = self.alphabets[d].get_index_of(*label)? as u32;
        }
        Some(cell)
    }

    fn decode(&self, cell: &Cell, subset: DimSet) -> Vec<&str> {
        subset
            .iter()
            .map(|d| self.alphabets[d.index()][cell[d.index()] as usize].as_str())
            .collect()
    }
}

/// Tables compare by their label-level contents; alphabet order is ignored.
impl PartialEq for ContingencyTable {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity
            && self.total == other.total
            && self.counts.len() == other.counts.len()
            && self
                .alphabets
                .iter()
                .zip(&other.alphabets)
                .all(|(a, b)| a.len() == b.len() && a.iter().all(|l| b.contains(l)))
            && self.counts.iter().all(|(cell, &c)| {
                let labels = self.decode(cell, self.arity.dims());
                other.count(&labels) == c
            })
    }
}

fn intern(alphabet: &mut IndexSet<String>, label: &str) -> u32 {
    match alphabet.get_index_of(label) {
        Some(i) => i as u32,
        None => alphabet.insert_full(label.to_owned()).0 as u32,
    }
}

fn first_arity(records: &[CaseRecord]) -> Result<Arity> {
    records
        .first()
        .map(CaseRecord::arity)
        .ok_or_else(|| Error::EmptyDataset("records".into()))
}

/// Incremental counting, one case at a time.
#[derive(Debug)]
pub struct TableBuilder {
    table: ContingencyTable,
}

impl TableBuilder {
    pub fn new(arity: Arity) -> Self {
        TableBuilder {
            table: ContingencyTable::empty(arity),
        }
    }

    pub fn push<S: AsRef<str>>(&mut self, labels: &[S]) -> Result<()> {
        let t = &mut self.table;
        if labels.len() != t.arity.get() {
            return Err(Error::ArityMismatch {
                left: t.arity.get(),
                right: labels.len(),
            });
        }
        let mut cell = [0; MAX_ARITY];
        for (d, label) in labels.iter().enumerate() {
            cell[d] = intern(&mut t.alphabets[d], label.as_ref());
        }
        *t.counts.entry(cell).or_insert(0) += 1;
        t.total += 1;
        Ok(())
    }

    pub fn push_record(&mut self, record: &CaseRecord) -> Result<()> {
        self.push(record.labels())
    }

    pub fn total(&self) -> u64 {
        self.table.total
    }

    pub fn finish(self) -> ContingencyTable {
        self.table
    }
}

/// A projection of a table onto a subset of its dimensions.
#[derive(Clone, Debug)]
pub struct MarginalTable<'a> {
    table: &'a ContingencyTable,
    subset: DimSet,
    counts: HashMap<Cell, u64>,
}

impl<'a> MarginalTable<'a> {
    pub fn subset(&self) -> DimSet {
        self.subset
    }

    pub fn total(&self) -> u64 {
        self.table.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Count for labels given in ascending dimension order of the subset.
    pub fn count(&self, labels: &[&str]) -> u64 {
        if labels.len() != self.subset.len() {
            return 0;
        }
        let mut cell = [0; MAX_ARITY];
        for (d, label) in self.subset.iter().zip(labels) {
            match self.table.alphabets[d.index()].get_index_of(*label) {
                Some(i) => cell[d.index()] = i as u32,
                None => return 0,
            }
        }
        self.counts.get(&cell).copied().unwrap_or(0)
    }

    pub fn labelled_counts(&self) -> BTreeMap<Vec<&'a str>, u64> {
        self.counts
            .iter()
            .map(|(cell, &c)| (self.table.decode(cell, self.subset), c))
            .collect()
    }

    /// Further projection onto `subset`, which must lie within this one.
    pub fn marginal(&self, subset: DimSet) -> Result<MarginalTable<'a>> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        if let Some(dim) = subset.iter().find(|d| !self.subset.contains(*d)) {
            return Err(Error::DimensionOutOfRange {
                dim,
                arity: self.subset.len(),
            });
        }
        let mut counts = HashMap::new();
        for (cell, &c) in &self.counts {
            let key = std::array::from_fn(|i| {
                if subset.contains(Dim::ALL[i]) {
                    cell[i]
                } else {
                    0
                }
            });
            *counts.entry(key).or_insert(0) += c;
        }
        Ok(MarginalTable {
            table: self.table,
            subset,
            counts,
        })
    }
}
