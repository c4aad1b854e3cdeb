//! Component screening: fold per-component indicator vectors into
//! suspicion decisions by majority vote or by PRIDIT, a principal
//! component weighting of RIDIT-transformed indicators.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Binary indicator outcomes for every screened component, one row per
/// component and one column per indicator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndicatorMatrix {
    pub component_ids: Vec<String>,
    pub indicator_names: Vec<String>,
    /// Row-major, `component_ids.len()` rows by `indicator_names.len()`
    /// columns, entries 0 or 1.
    pub values: Vec<Vec<u8>>,
}

impl IndicatorMatrix {
    pub fn validate(&self) -> Result<()> {
        if self.component_ids.is_empty() || self.indicator_names.is_empty() {
            return Err(Error::EmptyIndicatorMatrix);
        }
        assert_eq!(self.values.len(), self.component_ids.len());
        for row in &self.values {
            assert_eq!(row.len(), self.indicator_names.len());
            assert!(row.iter().all(|&v| v <= 1));
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.component_ids.len()
    }

    pub fn cols(&self) -> usize {
        self.indicator_names.len()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PriditResult {
    pub component_ids: Vec<String>,
    pub indicator_names: Vec<String>,
    /// RIDIT transform of the indicator matrix, row-major.
    pub ridit: Vec<Vec<f64>>,
    /// Frequencies of indicator value 1, per column.
    pub freq_one: Vec<f64>,
    /// Unit-norm ensemble weights.
    pub weights: Vec<f64>,
    /// Per-component ensemble scores, ridit * weights.
    pub scores: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// RIDIT score of component c on indicator i: the frequency of the
/// opposite outcome, signed toward suspicion. An indicator that is 1
/// scores +p̂⁰ (rarer suspicion scores higher), a 0 scores −p̂¹.
pub fn ridit_scores(m: &IndicatorMatrix) -> Result<Vec<Vec<f64>>> {
    m.validate()?;
    let n = m.rows() as f64;
    let freq_one: Vec<f64> = (0..m.cols())
        .map(|i| m.values.iter().map(|row| row[i] as f64).sum::<f64>() / n)
        .collect();
    Ok(m.values
        .iter()
        .map(|row| {
            row.iter()
                .zip(&freq_one)
                .map(|(&v, &p1)| if v == 1 { 1.0 - p1 } else { -p1 })
                .collect()
        })
        .collect())
}

pub const DEFAULT_PRIDIT_TOL: f64 = 1e-10;
pub const DEFAULT_PRIDIT_MAX_ITER: usize = 1000;

/// Repeated W <- normalize(Rt R W); None when the start is annihilated.
fn power_iteration(
    ridit: &[Vec<f64>],
    start: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> Option<(Vec<f64>, usize, bool)> {
    let cols = start.len();
    let norm0 = start.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm0 == 0.0 {
        return None;
    }
    let mut w: Vec<f64> = start.iter().map(|x| x / norm0).collect();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let s: Vec<f64> = ridit
            .iter()
            .map(|row| row.iter().zip(&w).map(|(r, wi)| r * wi).sum())
            .collect();
        let mut next = vec![0.0; cols];
        for (row, &sv) in ridit.iter().zip(&s) {
            for (i, &r) in row.iter().enumerate() {
                next[i] += r * sv;
            }
        }
        let norm = next.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return None;
        }
        for x in &mut next {
            *x /= norm;
        }
        // Sign-insensitive distance keeps even-period flips from
        // masking convergence.
        let direct: f64 = next.iter().zip(&w).map(|(a, b)| (a - b) * (a - b)).sum();
        let flipped: f64 = next.iter().zip(&w).map(|(a, b)| (a + b) * (a + b)).sum();
        let delta = direct.min(flipped).sqrt();
        w = next;
        if delta < tol {
            converged = true;
            break;
        }
    }
    Some((w, iterations, converged))
}

fn rayleigh(ridit: &[Vec<f64>], w: &[f64]) -> f64 {
    ridit
        .iter()
        .map(|row| {
            let s: f64 = row.iter().zip(w).map(|(r, wi)| r * wi).sum();
            s * s
        })
        .sum()
}

/// Power iteration on the RIDIT matrix: W ← normalize(Rᵀ R W) starting
/// from all-ones weights, converging to the first principal component
/// of Rᵀ R. Sign is fixed so the largest-magnitude weight is positive.
pub fn pridit(m: &IndicatorMatrix, tol: f64, max_iter: usize) -> Result<PriditResult> {
    let ridit = ridit_scores(m)?;
    let (rows, cols) = (m.rows(), m.cols());
    let n = rows as f64;
    let freq_one: Vec<f64> = (0..cols)
        .map(|i| m.values.iter().map(|row| row[i] as f64).sum::<f64>() / n)
        .collect();

    if ridit.iter().flatten().all(|&x| x == 0.0) {
        return Err(Error::ZeroRiditMatrix);
    }

    // The all-ones start can coincide with a minor eigenvector (e.g.
    // two equally frequent, anti-correlated indicators), so fall back
    // to other deterministic starts and keep the weights carrying the
    // largest Rayleigh quotient.
    let starts: [Vec<f64>; 3] = [
        vec![1.0; cols],
        (0..cols).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect(),
        (0..cols).map(|i| (i == 0) as u8 as f64).collect(),
    ];
    let mut best: Option<(f64, Vec<f64>, usize, bool)> = None;
    for start in starts {
        let Some((w, iters, conv)) = power_iteration(&ridit, start, tol, max_iter) else {
            continue;
        };
        let quotient = rayleigh(&ridit, &w);
        if best.as_ref().is_none_or(|b| quotient > b.0 * (1.0 + 1e-12)) {
            best = Some((quotient, w, iters, conv));
        }
    }
    let Some((_, mut w, iterations, converged)) = best else {
        return Err(Error::ZeroRiditMatrix);
    };

    let (top, _) = w
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
        .unwrap();
    if w[top] < 0.0 {
        for x in &mut w {
            *x = -*x;
        }
    }

    let scores: Vec<f64> = ridit
        .iter()
        .map(|row| row.iter().zip(&w).map(|(r, wi)| r * wi).sum())
        .collect();

    Ok(PriditResult {
        component_ids: m.component_ids.clone(),
        indicator_names: m.indicator_names.clone(),
        ridit,
        freq_one,
        weights: w,
        scores,
        iterations,
        converged,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "policy")]
pub enum SelectionPolicy {
    /// Every component scoring at least zero.
    NonnegScore,
    /// Highest scorers until ceil(f * component count) are picked.
    TopFraction { fraction: f64 },
    /// Highest scorers until their collisions first reach fraction f of
    /// all collisions. Counts are aligned with the component id order.
    TopCollisionFraction { fraction: f64, collision_counts: Vec<usize> },
}

pub fn select_suspicious(res: &PriditResult, policy: &SelectionPolicy) -> BTreeSet<String> {
    let mut order: Vec<usize> = (0..res.scores.len()).collect();
    order.sort_by(|&a, &b| {
        res.scores[b]
            .partial_cmp(&res.scores[a])
            .unwrap()
            .then(res.component_ids[a].cmp(&res.component_ids[b]))
    });
    match policy {
        SelectionPolicy::NonnegScore => res
            .component_ids
            .iter()
            .zip(&res.scores)
            .filter(|(_, &s)| s >= 0.0)
            .map(|(id, _)| id.clone())
            .collect(),
        SelectionPolicy::TopFraction { fraction } => {
            assert!(*fraction > 0.0 && *fraction <= 1.0);
            let take = ((fraction * res.scores.len() as f64).ceil() as usize)
                .min(res.scores.len());
            order[..take]
                .iter()
                .map(|&i| res.component_ids[i].clone())
                .collect()
        }
        SelectionPolicy::TopCollisionFraction { fraction, collision_counts } => {
            assert!(*fraction > 0.0 && *fraction <= 1.0);
            assert_eq!(collision_counts.len(), res.component_ids.len());
            let total: usize = collision_counts.iter().sum();
            let goal = fraction * total as f64;
            let mut picked = BTreeSet::new();
            let mut covered = 0usize;
            for &i in &order {
                if covered as f64 >= goal {
                    break;
                }
                picked.insert(res.component_ids[i].clone());
                covered += collision_counts[i];
            }
            picked
        }
    }
}

/// Majority voter: a component is suspicious when at least half of the
/// indicators fire.
pub fn majority_select(m: &IndicatorMatrix) -> BTreeSet<String> {
    let half = m.cols() as f64 / 2.0;
    m.component_ids
        .iter()
        .zip(&m.values)
        .filter(|(_, row)| row.iter().map(|&v| v as f64).sum::<f64>() >= half)
        .map(|(id, _)| id.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(values: Vec<Vec<u8>>) -> IndicatorMatrix {
        let cols = values[0].len();
        IndicatorMatrix {
            component_ids: (0..values.len()).map(|i| format!("c{i}")).collect(),
            indicator_names: (0..cols).map(|i| format!("ind{i}")).collect(),
            values,
        }
    }

    #[test]
    fn ridit_rare_suspicion_scores_high() {
        // 19 of 20 components fire the indicator: p1 = 0.95.
        let mut vals = vec![vec![1u8]; 19];
        vals.push(vec![0]);
        let r = ridit_scores(&matrix(vals)).unwrap();
        assert!((r[0][0] - 0.05).abs() < 1e-12);
        assert!((r[19][0] + 0.95).abs() < 1e-12);
    }

    #[test]
    fn ridit_half_split_symmetric() {
        let r = ridit_scores(&matrix(vec![vec![1], vec![0]])).unwrap();
        assert!((r[0][0] - 0.5).abs() < 1e-12);
        assert!((r[1][0] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn ridit_columns_sum_to_zero() {
        let m = matrix(vec![
            vec![1, 0, 1, 1],
            vec![0, 0, 1, 1],
            vec![1, 1, 0, 1],
            vec![0, 0, 0, 1],
            vec![1, 0, 1, 1],
        ]);
        let r = ridit_scores(&m).unwrap();
        for i in 0..4 {
            let s: f64 = r.iter().map(|row| row[i]).sum();
            assert!(s.abs() < 1e-9, "column {i} sums to {s}");
        }
    }

    #[test]
    fn ridit_degenerate_columns() {
        // All-1 column: p0 = 0, every score 0. All-0: every score -0 = 0.
        let r = ridit_scores(&matrix(vec![vec![1, 0], vec![1, 0]])).unwrap();
        assert!(r.iter().all(|row| row[0] == 0.0 && row[1] == 0.0));
    }

    #[test]
    fn ridit_empty_matrix_errors() {
        let m = IndicatorMatrix {
            component_ids: vec![],
            indicator_names: vec![],
            values: vec![],
        };
        assert!(ridit_scores(&m).is_err());
    }

    #[test]
    fn pridit_single_indicator() {
        let m = matrix(vec![vec![1], vec![0], vec![1]]);
        let res = pridit(&m, DEFAULT_PRIDIT_TOL, DEFAULT_PRIDIT_MAX_ITER).unwrap();
        assert!(res.converged);
        assert!((res.weights[0] - 1.0).abs() < 1e-9);
        let r = ridit_scores(&m).unwrap();
        for (s, row) in res.scores.iter().zip(&r) {
            assert!((s - row[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn pridit_identical_columns_equal_weights() {
        let m = matrix(vec![vec![1, 1], vec![0, 0], vec![1, 1], vec![0, 0], vec![1, 1]]);
        let res = pridit(&m, DEFAULT_PRIDIT_TOL, DEFAULT_PRIDIT_MAX_ITER).unwrap();
        let e = 1.0 / 2f64.sqrt();
        assert!((res.weights[0] - e).abs() < 1e-9);
        assert!((res.weights[1] - e).abs() < 1e-9);
    }

    #[test]
    fn pridit_unit_norm_and_fixed_point() {
        let m = matrix(vec![
            vec![1, 0, 1],
            vec![0, 1, 1],
            vec![1, 1, 0],
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
        ]);
        let res = pridit(&m, 1e-10, 1000).unwrap();
        let norm: f64 = res.weights.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-9);
        // w should satisfy w = normalize(RtR w).
        let r = &res.ridit;
        let s: Vec<f64> = r
            .iter()
            .map(|row| row.iter().zip(&res.weights).map(|(a, b)| a * b).sum())
            .collect();
        let mut rtrw = vec![0.0; 3];
        for (row, &sv) in r.iter().zip(&s) {
            for (i, &v) in row.iter().enumerate() {
                rtrw[i] += v * sv;
            }
        }
        let nn: f64 = rtrw.iter().map(|x| x * x).sum::<f64>().sqrt();
        let resid: f64 = res
            .weights
            .iter()
            .zip(&rtrw)
            .map(|(w, x)| (w - x / nn).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(resid < 1e-9, "fixed point residual {resid}");
    }

    #[test]
    fn pridit_zero_matrix_errors() {
        // Degenerate columns only: RIDIT matrix is identically zero.
        let m = matrix(vec![vec![1, 0], vec![1, 0]]);
        assert!(matches!(pridit(&m, 1e-10, 100), Err(Error::ZeroRiditMatrix)));
    }

    #[test]
    fn pridit_sign_convention() {
        let m = matrix(vec![vec![1, 0], vec![0, 1], vec![1, 0], vec![1, 1], vec![0, 0]]);
        let res = pridit(&m, 1e-10, 1000).unwrap();
        let top = res
            .weights
            .iter()
            .cloned()
            .max_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
            .unwrap();
        assert!(top > 0.0);
    }

    #[test]
    fn select_nonneg_and_fractions() {
        let res = PriditResult {
            component_ids: vec!["a".into(), "b".into(), "c".into()],
            indicator_names: vec!["i".into()],
            ridit: vec![],
            freq_one: vec![],
            weights: vec![1.0],
            scores: vec![0.3, -0.1, 0.0],
            iterations: 1,
            converged: true,
        };
        let sel = select_suspicious(&res, &SelectionPolicy::NonnegScore);
        assert_eq!(sel, ["a", "c"].iter().map(|s| s.to_string()).collect());
        let all = select_suspicious(&res, &SelectionPolicy::TopFraction { fraction: 1.0 });
        assert_eq!(all.len(), 3);
        let one = select_suspicious(&res, &SelectionPolicy::TopFraction { fraction: 0.3 });
        assert_eq!(one, ["a"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn select_top_collision_fraction_minimal_prefix() {
        let res = PriditResult {
            component_ids: vec!["a".into(), "b".into(), "c".into(), "d".into()],
            indicator_names: vec!["i".into()],
            ridit: vec![],
            freq_one: vec![],
            weights: vec![1.0],
            scores: vec![0.9, 0.5, 0.2, -0.3],
            iterations: 1,
            converged: true,
        };
        // 100 collisions total; need 4% = 4. "a" alone holds 3, so the
        // prefix must extend to "b".
        let sel = select_suspicious(
            &res,
            &SelectionPolicy::TopCollisionFraction {
                fraction: 0.04,
                collision_counts: vec![3, 5, 90, 2],
            },
        );
        assert_eq!(sel, ["a", "b"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn nonneg_is_prefix_of_sorted_order() {
        let res = PriditResult {
            component_ids: (0..6).map(|i| format!("c{i}")).collect(),
            indicator_names: vec!["i".into()],
            ridit: vec![],
            freq_one: vec![],
            weights: vec![1.0],
            scores: vec![0.4, -0.2, 0.1, 0.0, -0.5, 0.2],
            iterations: 1,
            converged: true,
        };
        let nonneg = select_suspicious(&res, &SelectionPolicy::NonnegScore);
        let prefix = select_suspicious(
            &res,
            &SelectionPolicy::TopFraction { fraction: nonneg.len() as f64 / 6.0 },
        );
        assert_eq!(nonneg, prefix);
    }

    #[test]
    fn majority_vote_half_boundary() {
        // 9 indicators: 5 set is in, 4 set is out.
        let mut five = vec![0u8; 9];
        five[..5].fill(1);
        let mut four = vec![0u8; 9];
        four[..4].fill(1);
        let m = matrix(vec![five, four, vec![0; 9]]);
        let sel = majority_select(&m);
        assert_eq!(sel, ["c0"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn majority_all_zero_empty() {
        let m = matrix(vec![vec![0, 0], vec![0, 0]]);
        assert!(majority_select(&m).is_empty());
    }

    #[test]
    fn majority_even_count_exact_half() {
        let m = matrix(vec![vec![1, 0], vec![0, 0]]);
        let sel = majority_select(&m);
        assert_eq!(sel, ["c0"].iter().map(|s| s.to_string()).collect());
    }
}
