//! Corpus-level statistics: the region-by-method contingency table with its
//! Pearson chi-square statistic, and the modified-vs-unmodified rating
//! contrast (Welch's t and Bartlett's test statistic).
//!
//! Only test statistics and degrees of freedom are computed; p-values are
//! out of scope.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{Corpus, Region};
use crate::ingredients::extract_methods;
use crate::rules::MethodLexicon;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("no region-labeled recipes in corpus")]
    NoRegionLabels,
    #[error("rating group has fewer than 2 values")]
    GroupTooSmall,
    #[error("both rating groups have zero variance; contrast undefined")]
    ZeroVariance,
}

/// Counts of region-labeled recipes using each method, plus the Pearson
/// chi-square statistic of the table.
#[derive(Debug, Clone)]
pub struct MethodRegionTable {
    pub regions: Vec<Region>,
    pub methods: Vec<String>,
    /// `counts[r][m]` = number of recipes labeled `regions[r]` whose
    /// directions use `methods[m]`.
    pub counts: Vec<Vec<u64>>,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
}

/// Build the region x method contingency table over region-labeled recipes.
///
/// A recipe contributes one count per method it uses. Regions or methods
/// with no observations are dropped before the chi-square computation.
pub fn method_region_table(
    corpus: &Corpus,
    methods: &BTreeSet<String>,
    lexicon: &MethodLexicon,
) -> Result<MethodRegionTable, StatsError> {
    let mut regions: Vec<Region> = Vec::new();
    let mut counts: Vec<Vec<u64>> = Vec::new();
    let method_list: Vec<String> = methods.iter().cloned().collect();
    let mut any_labeled = false;
    for recipe in corpus.recipes() {
        let Some(region) = recipe.region else {
            continue;
        };
        any_labeled = true;
        let row = match regions.iter().position(|r| *r == region) {
            Some(i) => i,
            None => {
                regions.push(region);
                counts.push(vec![0; method_list.len()]);
                regions.len() - 1
            }
        };
        let used = extract_methods(&recipe.directions, lexicon);
        for (m, name) in method_list.iter().enumerate() {
            if used.contains(name) {
                counts[row][m] += 1;
            }
        }
    }
    if !any_labeled {
        return Err(StatsError::NoRegionLabels);
    }

    // Sort rows by region for stable output.
    let mut order: Vec<usize> = (0..regions.len()).collect();
    order.sort_by_key(|&i| regions[i]);
    let regions: Vec<Region> = order.iter().map(|&i| regions[i]).collect();
    let mut counts: Vec<Vec<u64>> = order.into_iter().map(|i| counts[i].clone()).collect();

    // Drop all-zero columns (methods never observed) and their labels.
    let mut methods_kept = Vec::new();
    let mut col_kept = Vec::new();
    for (m, name) in method_list.iter().enumerate() {
        if counts.iter().any(|row| row[m] > 0) {
            methods_kept.push(name.clone());
            col_kept.push(m);
        }
    }
    counts = counts
        .iter()
        .map(|row| col_kept.iter().map(|&m| row[m]).collect())
        .collect();

    let (chi_square, degrees_of_freedom) = chi_square(&counts);
    Ok(MethodRegionTable {
        regions,
        methods: methods_kept,
        counts,
        chi_square,
        degrees_of_freedom,
    })
}

/// Pearson chi-square statistic and degrees of freedom of a contingency
/// table. All-zero rows and columns are ignored; df = (rows-1)(cols-1).
pub fn chi_square(counts: &[Vec<u64>]) -> (f64, usize) {
    let n_cols = counts.first().map_or(0, |r| r.len());
    let row_totals: Vec<u64> = counts.iter().map(|r| r.iter().sum()).collect();
    let col_totals: Vec<u64> = (0..n_cols)
        .map(|c| counts.iter().map(|r| r[c]).sum())
        .collect();
    let grand: u64 = row_totals.iter().sum();
    if grand == 0 {
        return (0.0, 0);
    }
    let live_rows = row_totals.iter().filter(|&&t| t > 0).count();
    let live_cols = col_totals.iter().filter(|&&t| t > 0).count();
    let mut statistic = 0.0;
    for (i, row) in counts.iter().enumerate() {
        if row_totals[i] == 0 {
            continue;
        }
        for (j, &observed) in row.iter().enumerate() {
            if col_totals[j] == 0 {
                continue;
            }
            let expected = row_totals[i] as f64 * col_totals[j] as f64 / grand as f64;
            let diff = observed as f64 - expected;
            statistic += diff * diff / expected;
        }
    }
    let df = live_rows.saturating_sub(1) * live_cols.saturating_sub(1);
    (statistic, df)
}

/// Group means plus Welch's t and Bartlett's equal-variance statistic.
#[derive(Debug, Clone, Copy)]
pub struct RatingContrast {
    pub mean_a: f64,
    pub mean_b: f64,
    pub welch_t: f64,
    /// Bartlett's test statistic; `+inf` when exactly one group has zero
    /// variance (the test diverges there).
    pub bartlett: f64,
}

/// Compare two rating groups: Welch's t statistic for the mean difference
/// and Bartlett's statistic for equality of variances.
pub fn rating_contrast(group_a: &[f64], group_b: &[f64]) -> Result<RatingContrast, StatsError> {
    if group_a.len() < 2 || group_b.len() < 2 {
        return Err(StatsError::GroupTooSmall);
    }
    let (na, nb) = (group_a.len() as f64, group_b.len() as f64);
    let mean_a = group_a.iter().sum::<f64>() / na;
    let mean_b = group_b.iter().sum::<f64>() / nb;
    let var_a = sample_variance(group_a, mean_a);
    let var_b = sample_variance(group_b, mean_b);
    if var_a == 0.0 && var_b == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let welch_t = (mean_a - mean_b) / (var_a / na + var_b / nb).sqrt();

    // Bartlett with k = 2 groups.
    let df_total = na + nb - 2.0;
    let pooled = ((na - 1.0) * var_a + (nb - 1.0) * var_b) / df_total;
    let numerator =
        df_total * pooled.ln() - ((na - 1.0) * var_a.ln() + (nb - 1.0) * var_b.ln());
    let denominator = 1.0 + (1.0 / (na - 1.0) + 1.0 / (nb - 1.0) - 1.0 / df_total) / 3.0;
    let bartlett = numerator / denominator;

    Ok(RatingContrast {
        mean_a,
        mean_b,
        welch_t,
        bartlett,
    })
}

fn sample_variance(values: &[f64], mean: f64) -> f64 {
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (values.len() as f64 - 1.0)
}

#[cfg(test)]
mod tests {
    use super::super::testutil::recipe;
    use super::*;
    use crate::rules::RuleSet;

    // Independent oracle: Pearson chi-square straight from the definition.
    fn chi_square_oracle(counts: &[Vec<u64>]) -> f64 {
        let rows = counts.len();
        let cols = counts[0].len();
        let n: f64 = counts.iter().flatten().map(|&c| c as f64).sum();
        let mut stat = 0.0;
        for i in 0..rows {
            for j in 0..cols {
                let ri: f64 = counts[i].iter().map(|&c| c as f64).sum();
                let cj: f64 = counts.iter().map(|r| r[j] as f64).sum();
                let e = ri * cj / n;
                let d = counts[i][j] as f64 - e;
                stat += d * d / e;
            }
        }
        stat
    }

    #[test]
    fn uniform_table_has_zero_statistic() {
        let (stat, df) = chi_square(&[vec![10, 10], vec![10, 10]]);
        assert_eq!(stat, 0.0);
        assert_eq!(df, 1);
    }

    #[test]
    fn skewed_table_matches_hand_oracle() {
        let table = vec![vec![20, 10], vec![10, 20]];
        let (stat, df) = chi_square(&table);
        assert!((stat - 20.0 / 3.0).abs() < 1e-12, "stat = {stat}");
        assert!((stat - chi_square_oracle(&table)).abs() < 1e-12);
        assert_eq!(df, 1);
    }

    #[test]
    fn chi_square_invariant_under_permutation() {
        let table = vec![vec![5, 9, 2], vec![7, 1, 12], vec![3, 8, 4]];
        let (base, _) = chi_square(&table);
        let row_perm = vec![table[2].clone(), table[0].clone(), table[1].clone()];
        let (permuted, _) = chi_square(&row_perm);
        assert!((base - permuted).abs() < 1e-9);
        let col_perm: Vec<Vec<u64>> = table
            .iter()
            .map(|r| vec![r[1], r[2], r[0]])
            .collect();
        let (permuted, _) = chi_square(&col_perm);
        assert!((base - permuted).abs() < 1e-9);
    }

    #[test]
    fn region_table_requires_labels() {
        let corpus = Corpus::new(vec![recipe("a", &["salt"])], vec![]).unwrap();
        let rules = RuleSet::builtin();
        let methods: BTreeSet<String> = ["bake".to_string()].into_iter().collect();
        assert!(matches!(
            method_region_table(&corpus, &methods, &rules.methods),
            Err(StatsError::NoRegionLabels)
        ));
    }

    #[test]
    fn region_table_counts_methods_per_recipe() {
        let mut r1 = recipe("a", &["salt"]);
        r1.region = Some(Region::South);
        r1.directions = vec!["Bake at 350, then grill.".into()];
        let mut r2 = recipe("b", &["salt"]);
        r2.region = Some(Region::Midwest);
        r2.directions = vec!["Boil briskly.".into()];
        let corpus = Corpus::new(vec![r1, r2], vec![]).unwrap();
        let rules = RuleSet::builtin();
        let methods: BTreeSet<String> = ["bake", "boil", "grill"]
            .into_iter()
            .map(String::from)
            .collect();
        let table = method_region_table(&corpus, &methods, &rules.methods).unwrap();
        assert_eq!(table.regions, vec![Region::Midwest, Region::South]);
        assert_eq!(table.methods, vec!["bake", "boil", "grill"]);
        assert_eq!(table.counts, vec![vec![0, 1, 0], vec![1, 0, 1]]);
    }

    // Oracle: direct transcription of the Welch and Bartlett formulas.
    fn contrast_oracle(a: &[f64], b: &[f64]) -> (f64, f64) {
        let (na, nb) = (a.len() as f64, b.len() as f64);
        let ma = a.iter().sum::<f64>() / na;
        let mb = b.iter().sum::<f64>() / nb;
        let va = a.iter().map(|x| (x - ma).powi(2)).sum::<f64>() / (na - 1.0);
        let vb = b.iter().map(|x| (x - mb).powi(2)).sum::<f64>() / (nb - 1.0);
        let t = (ma - mb) / (va / na + vb / nb).sqrt();
        let sp = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
        let num = (na + nb - 2.0) * sp.ln() - ((na - 1.0) * va.ln() + (nb - 1.0) * vb.ln());
        let den = 1.0 + (1.0 / (na - 1.0) + 1.0 / (nb - 1.0) - 1.0 / (na + nb - 2.0)) / 3.0;
        (t, num / den)
    }

    #[test]
    fn identical_groups_give_zero_t() {
        let g = [5.0, 4.0, 5.0, 4.0];
        let contrast = rating_contrast(&g, &g).unwrap();
        assert_eq!(contrast.welch_t, 0.0);
        assert!(contrast.bartlett.abs() < 1e-12);
    }

    #[test]
    fn contrast_matches_formula_oracle() {
        let a = [5.0, 5.0, 4.0, 4.0];
        let b = [3.0, 3.0, 2.0, 2.0];
        let contrast = rating_contrast(&a, &b).unwrap();
        let (t, bartlett) = contrast_oracle(&a, &b);
        assert!((contrast.welch_t - t).abs() < 1e-12);
        assert!((contrast.bartlett - bartlett).abs() < 1e-12);
        // Equal variances: Welch t = 2 * sqrt(6), Bartlett = 0.
        assert!((contrast.welch_t - 2.0 * 6.0_f64.sqrt()).abs() < 1e-12);
        assert!(contrast.bartlett.abs() < 1e-12);
        assert_eq!(contrast.mean_a, 4.5);
        assert_eq!(contrast.mean_b, 2.5);
    }

    #[test]
    fn welch_t_negates_when_groups_swap() {
        let a = [5.0, 4.0, 3.0, 5.0];
        let b = [2.0, 3.0, 1.0];
        let ab = rating_contrast(&a, &b).unwrap();
        let ba = rating_contrast(&b, &a).unwrap();
        assert!((ab.welch_t + ba.welch_t).abs() < 1e-12);
        assert!((ab.bartlett - ba.bartlett).abs() < 1e-12);
    }

    #[test]
    fn small_group_rejected() {
        assert!(matches!(
            rating_contrast(&[5.0], &[4.0, 3.0]),
            Err(StatsError::GroupTooSmall)
        ));
    }

    #[test]
    fn double_zero_variance_rejected() {
        assert!(matches!(
            rating_contrast(&[4.0, 4.0], &[3.0, 3.0]),
            Err(StatsError::ZeroVariance)
        ));
    }

    #[test]
    fn single_zero_variance_diverges() {
        let contrast = rating_contrast(&[4.0, 4.0], &[3.0, 5.0]).unwrap();
        assert!(contrast.bartlett.is_infinite());
        assert!(contrast.welch_t.is_finite());
    }
}
