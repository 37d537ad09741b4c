//! Synthetic datasets.

use crate::Row;
use rand::Rng;

/// `n` rows with labels drawn uniformly from per-dimension alphabets of the
/// given sizes. Labels look like `d0_3`.
pub fn random_rows<R: Rng>(rng: &mut R, alphabet_sizes: &[usize], n: usize) -> Vec<Row> {
    (0..n)
        .map(|_| {
            alphabet_sizes
                .iter()
                .enumerate()
                .map(|(d, &k)| format!("d{d}_{}", rng.gen_range(0..k)))
                .collect()
        })
        .collect()
}

/// Rows drawn from a random, skewed joint: each cell of the cross-product
/// gets a weight in `0..max_weight` copies.
pub fn random_weighted_rows<R: Rng>(
    rng: &mut R,
    alphabet_sizes: &[usize],
    max_weight: usize,
) -> Vec<Row> {
    let mut rows = Vec::new();
    for cell in cross_product(alphabet_sizes) {
        let copies = rng.gen_range(0..max_weight);
        for _ in 0..copies {
            rows.push(labels(&cell));
        }
    }
    if rows.is_empty() {
        rows.push(labels(&vec![0; alphabet_sizes.len()]));
    }
    rows
}

/// Like [`random_weighted_rows`] but every cell occurs at least once.
pub fn random_positive_rows<R: Rng>(
    rng: &mut R,
    alphabet_sizes: &[usize],
    max_weight: usize,
) -> Vec<Row> {
    let mut rows = Vec::new();
    for cell in cross_product(alphabet_sizes) {
        for _ in 0..rng.gen_range(1..=max_weight) {
            rows.push(labels(&cell));
        }
    }
    rows
}

/// An exact product table: cell `(i, j, ...)` occurs
/// `counts[0][i] * counts[1][j] * ...` times.
pub fn product_rows(counts: &[Vec<usize>]) -> Vec<Row> {
    let sizes: Vec<usize> = counts.iter().map(Vec::len).collect();
    let mut rows = Vec::new();
    for cell in cross_product(&sizes) {
        let copies: usize = cell.iter().zip(counts).map(|(&i, c)| c[i]).product();
        for _ in 0..copies {
            rows.push(labels(&cell));
        }
    }
    rows
}

/// Uniform over the even-parity cells of `{0,1}^3`.
pub fn parity_rows(copies: usize) -> Vec<Row> {
    let mut rows = Vec::new();
    for cell in cross_product(&[2, 2, 2]) {
        if cell.iter().sum::<usize>() % 2 == 0 {
            for _ in 0..copies {
                rows.push(labels(&cell));
            }
        }
    }
    rows
}

/// Firm-like records with a planted three-way interaction. Region and
/// sector are independent and uniform over `regions` and `sectors` labels;
/// the size class is their parity `(region + sector) mod 2` with
/// probability `1 - noise`, otherwise uniform over five size classes.
pub fn planted_synergy_rows<R: Rng>(
    rng: &mut R,
    n: usize,
    regions: usize,
    sectors: usize,
    noise: f64,
) -> Vec<Row> {
    (0..n)
        .map(|_| {
            let region = rng.gen_range(0..regions);
            let sector = rng.gen_range(0..sectors);
            let size = if rng.gen::<f64>() < noise {
                rng.gen_range(0..5)
            } else {
                (region + sector) % 2
            };
            vec![
                format!("{}", 1900 + region),
                format!("nace{sector}"),
                format!("size{size}"),
            ]
        })
        .collect()
}

/// Each row repeated `k` times, block by block.
#[allow(clippy::manual_repeat_n)]
pub fn replicate(rows: &[Row], k: usize) -> Vec<Row> {
    rows.iter()
        .flat_map(|r| std::iter::repeat(r.clone()).take(k))
        .collect()
}

/// Reorders the columns: output column `i` is input column `perm[i]`.
pub fn permute_columns(rows: &[Row], perm: &[usize]) -> Vec<Row> {
    rows.iter()
        .map(|r| perm.iter().map(|&p| r[p].clone()).collect())
        .collect()
}

fn labels(cell: &[usize]) -> Row {
    cell.iter()
        .enumerate()
        .map(|(d, i)| format!("d{d}_{i}"))
        .collect()
}

/// Every index tuple of a grid, last dimension fastest.
pub fn cross_product(sizes: &[usize]) -> Vec<Vec<usize>> {
    sizes.iter().fold(vec![vec![]], |acc, &k| {
        acc.into_iter()
            .flat_map(|prefix| {
                (0..k).map(move |i| {
                    let mut v = prefix.clone();
                    v.push(i);
                    v
                })
            })
            .collect()
    })
}
