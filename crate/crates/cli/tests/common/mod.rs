#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use synergy_testkit::{to_lines, Row};

pub const TABLE1: &str = "\"id1\", \"1\", \"b\", \"region1\", \"2\"\n\
                          \"id2\", \"2\", \"a\", \"region2\", \"1\"\n\
                          \"id3\", \"1\", \"a\", \"region2\", \"2\"\n\
                          \"id4\", \"1\", \"b\", \"region5\", \"1\"\n";

pub const TABLE3: &str = "\"4\", \"1901\", \"5\", \"3\"\n\
                          \"5\", \"1901\", \"5\", \"5\"\n\
                          \"6\", \"1901\", \"11\", \"1\"\n\
                          \"7\", \"1901\", \"11\", \"2\"\n\
                          \"8\", \"1901\", \"11\", \"2\"\n\
                          \"9\", \"1901\", \"11\", \"2\"\n";

/// Values of the worked example in listing order, to two decimals.
pub const TABLE1_LISTING: [(&str, f64); 26] = [
    ("H(W)", 0.81),
    ("H(X)", 1.00),
    ("H(Y)", 1.50),
    ("H(Z)", 1.00),
    ("H(WX)", 1.50),
    ("H(WY)", 2.00),
    ("H(WZ)", 1.50),
    ("H(XY)", 1.50),
    ("H(XZ)", 2.00),
    ("H(YZ)", 2.00),
    ("H(WXY)", 2.00),
    ("H(WXZ)", 2.00),
    ("H(WYZ)", 2.00),
    ("H(XYZ)", 2.00),
    ("H(WXYZ)", 2.00),
    ("T(WX)", 0.31),
    ("T(WY)", 0.31),
    ("T(WZ)", 0.31),
    ("T(XY)", 1.00),
    ("T(XZ)", 0.00),
    ("T(YZ)", 0.50),
    ("T(WXY)", 0.31),
    ("T(WXZ)", -0.19),
    ("T(WYZ)", -0.19),
    ("T(XYZ)", 0.00),
    ("T(WXYZ)", -0.19),
];

pub fn th4(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_th4"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn th4")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

pub fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, content).unwrap();
    p
}

pub fn write_rows(dir: &Path, name: &str, rows: &[Row]) -> PathBuf {
    let mut text = to_lines(rows).join("\n");
    text.push('\n');
    write(dir, name, &text)
}

/// `NAME<TAB>value` lines of a listing or summary.
pub fn listing(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once('\t'))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

pub fn value(text: &str, key: &str) -> String {
    listing(text)
        .into_iter()
        .find(|(k, _)| k == key)
        .unwrap_or_else(|| panic!("no {key} in:\n{text}"))
        .1
}

/// Rows of a results file as (header, records).
pub fn results(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}
