#![allow(dead_code)]

use synergy_core::{parse_dataset, ContingencyTable, Dataset, DimSet};
use synergy_testkit::{to_lines, Row};

pub fn dataset(rows: &[Row]) -> Dataset {
    parse_dataset(to_lines(rows), "generated").unwrap()
}

pub fn table(rows: &[Row]) -> ContingencyTable {
    ContingencyTable::from_dataset(&dataset(rows))
}

pub fn indices(s: DimSet) -> Vec<usize> {
    s.iter().map(|d| d.index()).collect()
}

pub fn set(name: &str) -> DimSet {
    name.parse().unwrap()
}
