//! Maximum-entropy fit under all two-way margins, and the information
//! added by the three-way interaction.
//!
//! The fitted joint p̂ is found by iterative proportional fitting: start from
//! a uniform distribution over the alphabet cross-product and repeatedly
//! rescale it to the observed AB, AC and BC margins. The interaction
//! measure is the divergence KL(p ‖ p̂) in bits, which is non-negative and
//! zero exactly when the observed joint has no three-way interaction.
//!
//! Cells whose two-way margins contain a zero are structural zeros and start
//! at zero. Sparse tables whose fit lies on the boundary of the simplex
//! converge slowly; such fits report `converged == false`.

use crate::dims::{Arity, Dim, DimSet};
use crate::error::{Error, Result};
use crate::infocalc::{entropy, transmission};
use crate::tables::ContingencyTable;
use serde::Serialize;

/// Largest alphabet cross-product the dense fitter will allocate.
pub const MAX_CELLS: usize = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IpfOptions {
    /// Bound on the largest absolute margin deviation, in probability.
    pub tolerance: f64,
    /// Full AB, AC, BC rescaling cycles.
    pub max_iterations: usize,
}

impl Default for IpfOptions {
    fn default() -> Self {
        IpfOptions {
            tolerance: 1e-10,
            max_iterations: 1000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IpfResult {
    #[serde(skip)]
    alphabets: [Vec<String>; 3],
    #[serde(skip)]
    fitted: Vec<f64>,
    pub iterations: usize,
    pub max_margin_error: f64,
    pub converged: bool,
    /// KL(observed ‖ fitted) in bits.
    pub interaction_bits: f64,
}

impl IpfResult {
    pub fn shape(&self) -> [usize; 3] {
        [
            self.alphabets[0].len(),
            self.alphabets[1].len(),
            self.alphabets[2].len(),
        ]
    }

    /// Fitted probability of one cell; `None` for unknown labels.
    pub fn fitted(&self, labels: [&str; 3]) -> Option<f64> {
        let mut idx = [0; 3];
        for (i, label) in labels.iter().enumerate() {
            idx[i] = self.alphabets[i].iter().position(|l| l == label)?;
        }
        Some(self.fitted[self.flat(idx)])
    }

    /// Every cell of the cross-product with its fitted probability.
    pub fn iter_fitted(&self) -> impl Iterator<Item = ([&str; 3], f64)> + '_ {
        let [na, nb, nc] = self.shape();
        (0..na).flat_map(move |a| {
            (0..nb).flat_map(move |b| {
                (0..nc).map(move |c| {
                    (
                        [
                            self.alphabets[0][a].as_str(),
                            self.alphabets[1][b].as_str(),
                            self.alphabets[2][c].as_str(),
                        ],
                        self.fitted[self.flat([a, b, c])],
                    )
                })
            })
        })
    }

    /// Entropy of the fitted joint, in bits.
    pub fn fitted_entropy(&self) -> f64 {
        let mut ps: Vec<f64> = self.fitted.iter().copied().filter(|&p| p > 0.0).collect();
        ps.sort_unstable_by(f64::total_cmp);
        ps.into_iter().map(|p| -p * p.log2()).sum()
    }

    fn flat(&self, [a, b, c]: [usize; 3]) -> usize {
        let [_, nb, nc] = self.shape();
        (a * nb + b) * nc + c
    }
}

/// Dense working copy of a three-variable table.
struct Dense {
    shape: [usize; 3],
    p: Vec<f64>,
    ab: Vec<f64>,
    ac: Vec<f64>,
    bc: Vec<f64>,
}

impl Dense {
    fn new(table: &ContingencyTable) -> Result<Self> {
        let shape: [usize; 3] =
            std::array::from_fn(|i| table.alphabet(Dim::ALL[i]).map_or(0, |a| a.len()));
        let cells = shape.iter().map(|&n| n as u128).product::<u128>();
        if cells > MAX_CELLS as u128 {
            return Err(Error::TooManyCells {
                cells,
                limit: MAX_CELLS,
            });
        }
        let [na, nb, nc] = shape;
        let n = table.total() as f64;
        let mut p = vec![0.0; na * nb * nc];
        for (cell, c) in table.cells() {
            let [a, b, cc] = [cell[0] as usize, cell[1] as usize, cell[2] as usize];
            p[(a * nb + b) * nc + cc] = c as f64 / n;
        }
        let (ab, ac, bc) = margins(shape, &p);
        Ok(Dense {
            shape,
            p,
            ab,
            ac,
            bc,
        })
    }
}

fn margins([na, nb, nc]: [usize; 3], q: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut ab = vec![0.0; na * nb];
    let mut ac = vec![0.0; na * nc];
    let mut bc = vec![0.0; nb * nc];
    for a in 0..na {
        for b in 0..nb {
            for c in 0..nc {
                let v = q[(a * nb + b) * nc + c];
                ab[a * nb + b] += v;
                ac[a * nc + c] += v;
                bc[b * nc + c] += v;
            }
        }
    }
    (ab, ac, bc)
}

fn max_abs_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Which pair of dimensions a rescaling step targets.
#[derive(Clone, Copy)]
enum Pair {
    Ab,
    Ac,
    Bc,
}

fn rescale(shape: [usize; 3], q: &mut [f64], target: &[f64], pair: Pair) {
    let [na, nb, nc] = shape;
    let key = |a: usize, b: usize, c: usize| match pair {
        Pair::Ab => a * nb + b,
        Pair::Ac => a * nc + c,
        Pair::Bc => b * nc + c,
    };
    let mut current = vec![0.0; target.len()];
    for a in 0..na {
        for b in 0..nb {
            for c in 0..nc {
                current[key(a, b, c)] += q[(a * nb + b) * nc + c];
            }
        }
    }
    let factor: Vec<f64> = target
        .iter()
        .zip(&current)
        .map(|(&t, &m)| if m > 0.0 { t / m } else { 0.0 })
        .collect();
    for a in 0..na {
        for b in 0..nb {
            for c in 0..nc {
                q[(a * nb + b) * nc + c] *= factor[key(a, b, c)];
            }
        }
    }
}

/// KL(p ‖ q) in bits over cells with p > 0.
fn kl_bits(p: &[f64], q: &[f64]) -> f64 {
    let mut terms: Vec<f64> = p
        .iter()
        .zip(q)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &qi)| {
            assert!(qi > 0.0, "observed cell fitted to zero probability");
            pi * (pi / qi).log2()
        })
        .collect();
    terms.sort_unstable_by(f64::total_cmp);
    terms.into_iter().sum()
}

/// Fits the maximum-entropy joint matching all two-way margins of a
/// three-variable table.
pub fn ipf_fit(table: &ContingencyTable, options: IpfOptions) -> Result<IpfResult> {
    if table.arity() != Arity::Three {
        return Err(Error::ArityMismatch {
            left: 3,
            right: table.arity().get(),
        });
    }
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    let dense = Dense::new(table)?;
    let shape = dense.shape;
    let [na, nb, nc] = shape;

    let mut q = vec![0.0; dense.p.len()];
    for a in 0..na {
        for b in 0..nb {
            for c in 0..nc {
                if dense.ab[a * nb + b] > 0.0 && dense.ac[a * nc + c] > 0.0 && dense.bc[b * nc + c] > 0.0
                {
                    q[(a * nb + b) * nc + c] = 1.0;
                }
            }
        }
    }
    let live = q.iter().filter(|&&v| v > 0.0).count() as f64;
    q.iter_mut().for_each(|v| *v /= live);

    let margin_error = |q: &[f64]| {
        let (ab, ac, bc) = margins(shape, q);
        max_abs_diff(&ab, &dense.ab)
            .max(max_abs_diff(&ac, &dense.ac))
            .max(max_abs_diff(&bc, &dense.bc))
    };

    let mut iterations = 0;
    let mut err = margin_error(&q);
    while err > options.tolerance && iterations < options.max_iterations {
        rescale(shape, &mut q, &dense.ab, Pair::Ab);
        rescale(shape, &mut q, &dense.ac, Pair::Ac);
        rescale(shape, &mut q, &dense.bc, Pair::Bc);
        iterations += 1;
        err = margin_error(&q);
    }

    let alphabets = std::array::from_fn(|i| {
        table
            .alphabet(Dim::ALL[i])
            .map(|a| a.iter().cloned().collect())
            .unwrap_or_default()
    });
    Ok(IpfResult {
        alphabets,
        interaction_bits: kl_bits(&dense.p, &q),
        fitted: q,
        iterations,
        max_margin_error: err,
        converged: err <= options.tolerance,
    })
}

/// Projects `table` onto three dimensions and fits.
pub fn ipf_fit_subset(
    table: &ContingencyTable,
    subset: DimSet,
    options: IpfOptions,
) -> Result<IpfResult> {
    ipf_fit(&table.project3(subset)?, options)
}

fn require_converged(ipf: &IpfResult) -> Result<()> {
    if ipf.converged {
        Ok(())
    } else {
        Err(Error::NotConverged {
            iterations: ipf.iterations,
            max_margin_error: ipf.max_margin_error,
        })
    }
}

/// KL(observed ‖ fitted) in bits, recomputed from the table. Refuses a
/// non-converged fit.
pub fn krippendorff_interaction(table: &ContingencyTable, ipf: &IpfResult) -> Result<f64> {
    require_converged(ipf)?;
    let n = table.total() as f64;
    let mut terms = Vec::with_capacity(table.distinct_cells());
    for (labels, c) in table.labelled_counts() {
        let p = c as f64 / n;
        let q = ipf
            .fitted([labels[0], labels[1], labels[2]])
            .ok_or(Error::ArityMismatch { left: 3, right: labels.len() })?;
        assert!(q > 0.0, "observed cell fitted to zero probability");
        terms.push(p * (p / q).log2());
    }
    terms.sort_unstable_by(f64::total_cmp);
    Ok(terms.into_iter().sum())
}

/// H(p̂) - H(p); equals the KL form once the margins match.
pub fn interaction_entropy_difference(table: &ContingencyTable, ipf: &IpfResult) -> Result<f64> {
    require_converged(ipf)?;
    Ok(ipf.fitted_entropy() - entropy(table, table.arity().dims())?)
}

/// Experimental: interaction bits minus the three-way transmission.
pub fn redundancy_bits(table: &ContingencyTable, ipf: &IpfResult) -> Result<f64> {
    Ok(krippendorff_interaction(table, ipf)? - transmission(table, table.arity().dims())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::parse_dataset;

    fn table(lines: &[String]) -> ContingencyTable {
        ContingencyTable::from_dataset(&parse_dataset(lines, "t").unwrap())
    }

    fn parity() -> ContingencyTable {
        let mut lines = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    if (a + b + c) % 2 == 0 {
                        lines.push(format!("r,{a},{b},{c}"));
                    }
                }
            }
        }
        table(&lines)
    }

    #[test]
    fn parity_table_has_one_bit_of_interaction() {
        let t = parity();
        let fit = ipf_fit(&t, IpfOptions::default()).unwrap();
        assert!(fit.converged);
        assert_eq!(fit.shape(), [2, 2, 2]);
        for (_, p) in fit.iter_fitted() {
            assert!((p - 0.125).abs() < 1e-12);
        }
        assert!((fit.interaction_bits - 1.0).abs() < 1e-6);
        assert!((krippendorff_interaction(&t, &fit).unwrap() - 1.0).abs() < 1e-6);
        assert!((interaction_entropy_difference(&t, &fit).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn product_table_has_none() {
        // counts a*b*c for a in 1..=2, b in 1..=3, c in 1..=2
        let mut lines = Vec::new();
        for a in 1..=2 {
            for b in 1..=3 {
                for c in 1..=2 {
                    for _ in 0..a * b * c {
                        lines.push(format!("r,a{a},b{b},c{c}"));
                    }
                }
            }
        }
        let t = table(&lines);
        let fit = ipf_fit(&t, IpfOptions::default()).unwrap();
        assert!(fit.converged);
        assert!(fit.iterations <= 2);
        assert!(fit.interaction_bits.abs() < 1e-9);
        let total: f64 = fit.iter_fitted().map(|(_, p)| p).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn structural_zeros_start_at_zero() {
        let lines: Vec<String> = ["r,1,b,r1", "r,2,a,r2", "r,1,a,r2", "r,1,b,r5"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let t = table(&lines);
        let fit = ipf_fit(&t, IpfOptions::default()).unwrap();
        assert!(fit.converged);
        assert_eq!(fit.iterations, 0);
        assert_eq!(fit.fitted(["2", "b", "r1"]), Some(0.0));
        assert_eq!(fit.fitted(["1", "b", "r1"]), Some(0.25));
        assert_eq!(fit.fitted(["9", "b", "r1"]), None);
        assert!(fit.interaction_bits.abs() < 1e-12);
    }

    #[test]
    fn non_convergence_is_flagged_and_refused() {
        let t = parity();
        let mut lines: Vec<String> = Vec::new();
        for (i, cell) in ["0,0,0", "0,1,1", "1,0,1", "1,1,0", "0,0,1"].iter().enumerate() {
            for _ in 0..=i {
                lines.push(format!("r,{cell}"));
            }
        }
        let skewed = table(&lines);
        let fit = ipf_fit(
            &skewed,
            IpfOptions {
                tolerance: 1e-15,
                max_iterations: 1,
            },
        )
        .unwrap();
        assert!(!fit.converged);
        assert_eq!(fit.iterations, 1);
        assert!(matches!(
            krippendorff_interaction(&skewed, &fit),
            Err(Error::NotConverged { iterations: 1, .. })
        ));
        assert!(ipf_fit(&t, IpfOptions::default()).unwrap().converged);
    }

    #[test]
    fn rejects_four_variables() {
        let t = table(&["r,1,2,3,4".to_string()]);
        assert!(matches!(
            ipf_fit(&t, IpfOptions::default()),
            Err(Error::ArityMismatch { left: 3, right: 4 })
        ));
        let fit = ipf_fit_subset(&t, "wxz".parse().unwrap(), IpfOptions::default()).unwrap();
        assert!(fit.converged);
    }

    #[test]
    fn redundancy_of_parity() {
        // T(abc) of the parity table is -1 bit.
        let t = parity();
        let fit = ipf_fit(&t, IpfOptions::default()).unwrap();
        let r = redundancy_bits(&t, &fit).unwrap();
        assert!((r - 2.0).abs() < 1e-6);
    }
}
