//! Reference computations for tests.
//!
//! Everything here works directly on label rows (`Vec<String>` per case)
//! and shares no code with `synergy-core`: probabilities are counted with
//! `BTreeMap`s and every information quantity is computed from its
//! definition rather than by inclusion-exclusion over entropies.

pub mod generate;

use std::collections::BTreeMap;

/// One case: its labels, one per dimension.
pub type Row = Vec<String>;

fn key(row: &Row, dims: &[usize]) -> Vec<String> {
    dims.iter().map(|&d| row[d].clone()).collect()
}

/// Relative frequencies of the projection onto `dims`.
pub fn distribution(rows: &[Row], dims: &[usize]) -> BTreeMap<Vec<String>, f64> {
    let mut counts: BTreeMap<Vec<String>, usize> = BTreeMap::new();
    for r in rows {
        *counts.entry(key(r, dims)).or_default() += 1;
    }
    let n = rows.len() as f64;
    counts.into_iter().map(|(k, c)| (k, c as f64 / n)).collect()
}

/// H(dims) = -Σ p log2 p.
pub fn entropy(rows: &[Row], dims: &[usize]) -> f64 {
    distribution(rows, dims)
        .values()
        .map(|&p| -p * p.log2())
        .sum()
}

/// I(a;b) = Σ p(ab) log2[p(ab) / (p(a) p(b))].
pub fn mutual_information(rows: &[Row], a: usize, b: usize) -> f64 {
    let pa = distribution(rows, &[a]);
    let pb = distribution(rows, &[b]);
    distribution(rows, &[a, b])
        .iter()
        .map(|(k, &pab)| {
            let qa = pa[&vec![k[0].clone()]];
            let qb = pb[&vec![k[1].clone()]];
            pab * (pab / (qa * qb)).log2()
        })
        .sum()
}

/// I(a;b|c) = Σ p(abc) log2[p(c) p(abc) / (p(ac) p(bc))].
pub fn conditional_mutual_information(rows: &[Row], a: usize, b: usize, c: usize) -> f64 {
    let pc = distribution(rows, &[c]);
    let pac = distribution(rows, &[a, c]);
    let pbc = distribution(rows, &[b, c]);
    distribution(rows, &[a, b, c])
        .iter()
        .map(|(k, &pabc)| {
            let (la, lb, lc) = (&k[0], &k[1], &k[2]);
            let qc = pc[&vec![lc.clone()]];
            let qac = pac[&vec![la.clone(), lc.clone()]];
            let qbc = pbc[&vec![lb.clone(), lc.clone()]];
            pabc * (qc * pabc / (qac * qbc)).log2()
        })
        .sum()
}

/// Co-information by McGill's recursion,
/// I(d1..dn) = I(d1..dn-1) - I(d1..dn-1 | dn), with the conditional term
/// averaged over the slices of dn. Two dimensions bottom out in
/// [`mutual_information`].
pub fn co_information(rows: &[Row], dims: &[usize]) -> f64 {
    match dims.len() {
        0 | 1 => panic!("co-information needs at least two dimensions"),
        2 => mutual_information(rows, dims[0], dims[1]),
        n => {
            let (head, last) = (&dims[..n - 1], dims[n - 1]);
            let mut slices: BTreeMap<&str, Vec<Row>> = BTreeMap::new();
            for r in rows {
                slices.entry(r[last].as_str()).or_default().push(r.clone());
            }
            let total = rows.len() as f64;
            let conditional: f64 = slices
                .values()
                .map(|s| s.len() as f64 / total * co_information(s, head))
                .sum();
            co_information(rows, head) - conditional
        }
    }
}

/// Weighted within-group co-information and the residual, grouping on
/// `group_dim`. Returns `(pooled, [(label, n, weight, t_g)], between)`.
#[allow(clippy::type_complexity)]
pub fn decomposition(
    rows: &[Row],
    group_dim: usize,
    dims: &[usize],
) -> (f64, Vec<(String, usize, f64, f64)>, f64) {
    let mut groups: BTreeMap<String, Vec<Row>> = BTreeMap::new();
    for r in rows {
        groups.entry(r[group_dim].clone()).or_default().push(r.clone());
    }
    let n = rows.len() as f64;
    let pooled = co_information(rows, dims);
    let parts: Vec<(String, usize, f64, f64)> = groups
        .into_iter()
        .map(|(label, g)| {
            let w = g.len() as f64 / n;
            let t = co_information(&g, dims);
            (label, g.len(), w, t)
        })
        .collect();
    let within: f64 = parts.iter().map(|(_, _, w, t)| w * t).sum();
    (pooled, parts, pooled - within)
}

/// Naive iterative proportional fitting over label triples, on the full
/// cross-product of observed labels. Returns the fitted joint after the
/// margins agree to `tolerance` or `max_cycles` cycles pass.
pub fn brute_ipf(
    rows: &[Row],
    tolerance: f64,
    max_cycles: usize,
) -> BTreeMap<(String, String, String), f64> {
    let alpha: Vec<Vec<String>> = (0..3)
        .map(|d| distribution(rows, &[d]).into_keys().map(|k| k[0].clone()).collect())
        .collect();
    let p_ab = distribution(rows, &[0, 1]);
    let p_ac = distribution(rows, &[0, 2]);
    let p_bc = distribution(rows, &[1, 2]);
    let get = |m: &BTreeMap<Vec<String>, f64>, x: &str, y: &str| {
        m.get(&vec![x.to_string(), y.to_string()]).copied().unwrap_or(0.0)
    };

    let mut q: BTreeMap<(String, String, String), f64> = BTreeMap::new();
    for a in &alpha[0] {
        for b in &alpha[1] {
            for c in &alpha[2] {
                let allowed = get(&p_ab, a, b) > 0.0 && get(&p_ac, a, c) > 0.0 && get(&p_bc, b, c) > 0.0;
                q.insert((a.clone(), b.clone(), c.clone()), if allowed { 1.0 } else { 0.0 });
            }
        }
    }
    let z: f64 = q.values().sum();
    q.values_mut().for_each(|v| *v /= z);

    type Proj = fn(&(String, String, String)) -> (String, String);
    let projections: [(Proj, &BTreeMap<Vec<String>, f64>); 3] = [
        (|k| (k.0.clone(), k.1.clone()), &p_ab),
        (|k| (k.0.clone(), k.2.clone()), &p_ac),
        (|k| (k.1.clone(), k.2.clone()), &p_bc),
    ];
    let margin = |q: &BTreeMap<(String, String, String), f64>, proj: Proj| {
        let mut m: BTreeMap<(String, String), f64> = BTreeMap::new();
        for (k, v) in q {
            *m.entry(proj(k)).or_default() += v;
        }
        m
    };
    for _ in 0..max_cycles {
        let err = projections
            .iter()
            .flat_map(|(proj, target)| {
                margin(&q, *proj)
                    .into_iter()
                    .map(|((x, y), v)| (v - get(target, &x, &y)).abs())
                    .collect::<Vec<_>>()
            })
            .fold(0.0, f64::max);
        if err <= tolerance {
            break;
        }
        for (proj, target) in &projections {
            let m = margin(&q, *proj);
            for (k, v) in q.iter_mut() {
                let (x, y) = proj(k);
                let cur = m[&(x.clone(), y.clone())];
                *v = if cur > 0.0 { *v * get(target, &x, &y) / cur } else { 0.0 };
            }
        }
    }
    q
}

/// KL(observed ‖ fitted) in bits for a fitted joint from [`brute_ipf`].
pub fn kl_to_fit(rows: &[Row], fitted: &BTreeMap<(String, String, String), f64>) -> f64 {
    distribution(rows, &[0, 1, 2])
        .iter()
        .map(|(k, &p)| {
            let q = fitted[&(k[0].clone(), k[1].clone(), k[2].clone())];
            p * (p / q).log2()
        })
        .sum()
}

/// Renders rows as unquoted input lines with sequential ids.
pub fn to_lines(rows: &[Row]) -> Vec<String> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| format!("id{i},{}", r.join(",")))
        .collect()
}

/// The four cases of the worked example, labels only.
pub fn table1_rows() -> Vec<Row> {
    [
        ["1", "b", "region1", "2"],
        ["2", "a", "region2", "1"],
        ["1", "a", "region2", "2"],
        ["1", "b", "region5", "1"],
    ]
    .iter()
    .map(|r| r.iter().map(|s| s.to_string()).collect())
    .collect()
}

/// Six firm records: region, NACE code, size class.
pub fn table3_rows() -> Vec<Row> {
    [
        ["1901", "5", "3"],
        ["1901", "5", "5"],
        ["1901", "11", "1"],
        ["1901", "11", "2"],
        ["1901", "11", "2"],
        ["1901", "11", "2"],
    ]
    .iter()
    .map(|r| r.iter().map(|s| s.to_string()).collect())
    .collect()
}
