//! Ordinary least squares for the weighted-linear baseline.
//!
//! The criterion is regressed on an intercept plus every cue with a modified
//! Gram-Schmidt QR (two orthogonalisation passes per column). A column whose
//! residual after projection is below `1e-10` of its own norm is dependent on
//! the columns before it. The intercept is dropped from the returned weights:
//! it cancels in every pairwise comparison.

use super::Environment;
use crate::heuristics::WeightVector;
use crate::{Error, Result};

const DEPENDENCE_TOLERANCE: f64 = 1e-10;

struct Fit {
    weights: Vec<f64>,
    dependent: Vec<usize>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn solve(columns: &[Vec<f64>], y: &[f64]) -> Fit {
    let p = columns.len();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    // r[k] is the row of R belonging to basis vector k; pivots[k] its column.
    let mut r: Vec<Vec<f64>> = Vec::new();
    let mut pivots = Vec::new();
    let mut dependent = Vec::new();

    for (j, col) in columns.iter().enumerate() {
        let norm0 = dot(col, col).sqrt();
        let mut v = col.clone();
        let mut coeffs = vec![0.0; basis.len()];
        for _ in 0..2 {
            for (k, q) in basis.iter().enumerate() {
                let c = dot(q, &v);
                coeffs[k] += c;
                v.iter_mut().zip(q).for_each(|(vi, qi)| *vi -= c * qi);
            }
        }
        let nv = dot(&v, &v).sqrt();
        if norm0 == 0.0 || nv <= DEPENDENCE_TOLERANCE * norm0 {
            dependent.push(j);
            continue;
        }
        for (k, c) in coeffs.into_iter().enumerate() {
            r[k][j] = c;
        }
        v.iter_mut().for_each(|x| *x /= nv);
        let mut row = vec![0.0; p];
        row[j] = nv;
        r.push(row);
        basis.push(v);
        pivots.push(j);
    }

    let qty: Vec<f64> = basis.iter().map(|q| dot(q, y)).collect();
    let mut weights = vec![0.0; p];
    for k in (0..basis.len()).rev() {
        let j = pivots[k];
        let tail: f64 = pivots[k + 1..].iter().map(|&l| r[k][l] * weights[l]).sum();
        weights[j] = (qty[k] - tail) / r[k][j];
    }
    Fit { weights, dependent }
}

fn design(env: &Environment) -> (Vec<String>, Vec<Vec<f64>>, Vec<f64>) {
    let names = env.cue_names();
    let mut columns = vec![vec![1.0; env.len()]];
    for name in &names {
        columns.push(env.objects().iter().map(|o| o.cues[name]).collect());
    }
    let y = env.objects().iter().map(|o| o.criterion).collect();
    (names, columns, y)
}

fn to_weights(names: Vec<String>, fit: &Fit) -> Result<WeightVector> {
    WeightVector::new(
        names
            .into_iter()
            .zip(fit.weights[1..].iter().copied())
            .collect(),
    )
}

/// Least-squares cue weights. Fails when there are fewer objects than
/// parameters or when some cue is a linear combination of the intercept and
/// the cues before it.
pub fn fit_linear_weights(env: &Environment) -> Result<WeightVector> {
    let (names, columns, y) = design(env);
    if env.len() < columns.len() {
        return Err(Error::TooFewObjects {
            needed: columns.len(),
            got: env.len(),
        });
    }
    let fit = solve(&columns, &y);
    if !fit.dependent.is_empty() {
        return Err(Error::RankDeficient(
            fit.dependent
                .iter()
                .map(|&j| names[j - 1].clone())
                .collect(),
        ));
    }
    to_weights(names, &fit)
}

/// Like [`fit_linear_weights`], but dependent cues get weight 0 instead of
/// failing the fit. Returns the names of the dropped cues. Used on small
/// training samples where a cue can be constant by chance.
pub fn fit_linear_weights_reduced(env: &Environment) -> Result<(WeightVector, Vec<String>)> {
    let (names, columns, y) = design(env);
    let fit = solve(&columns, &y);
    let dropped = fit
        .dependent
        .iter()
        .map(|&j| names[j - 1].clone())
        .collect();
    Ok((to_weights(names, &fit)?, dropped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecology::{generate_gaussian_environment, EnvObject};
    use crate::indicators::Direction;
    use std::collections::BTreeMap;

    fn env(rows: &[(f64, &[f64])]) -> Environment {
        let k = rows[0].1.len();
        let objects = rows
            .iter()
            .enumerate()
            .map(|(i, (c, xs))| EnvObject {
                id: format!("o{i}"),
                criterion: *c,
                cues: xs
                    .iter()
                    .enumerate()
                    .map(|(j, x)| (format!("cue{}", j + 1), *x))
                    .collect(),
            })
            .collect();
        let dirs: BTreeMap<_, _> = (0..k)
            .map(|j| (format!("cue{}", j + 1), Direction::HigherIsBetter))
            .collect();
        Environment::new(objects, dirs).unwrap()
    }

    /// Reference solver: normal equations X'X b = X'y by Gaussian elimination
    /// with partial pivoting.
    fn normal_equations(env: &Environment) -> Vec<f64> {
        let names = env.cue_names();
        let rows: Vec<Vec<f64>> = env
            .objects()
            .iter()
            .map(|o| {
                std::iter::once(1.0)
                    .chain(names.iter().map(|n| o.cues[n]))
                    .collect()
            })
            .collect();
        let p = names.len() + 1;
        let mut a = vec![vec![0.0; p + 1]; p];
        for (row, o) in rows.iter().zip(env.objects()) {
            for i in 0..p {
                for j in 0..p {
                    a[i][j] += row[i] * row[j];
                }
                a[i][p] += row[i] * o.criterion;
            }
        }
        for col in 0..p {
            let piv = (col..p)
                .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                .unwrap();
            a.swap(col, piv);
            let pivot = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != col {
                    let f = row[col] / pivot[col];
                    for (x, y) in row[col..].iter_mut().zip(&pivot[col..]) {
                        *x -= f * y;
                    }
                }
            }
        }
        (1..p).map(|i| a[i][p] / a[i][i]).collect()
    }

    #[test]
    fn exact_recovery() {
        let e = env(&[
            (3.0, &[1.0, 5.0]),
            (6.0, &[2.0, 1.0]),
            (0.0, &[0.0, 2.0]),
            (12.0, &[4.0, 4.0]),
            (-3.0, &[-1.0, 0.0]),
        ]);
        let w = fit_linear_weights(&e).unwrap();
        assert!((w.get("cue1").unwrap() - 3.0).abs() < 1e-9);
        assert!(w.get("cue2").unwrap().abs() < 1e-9);
    }

    #[test]
    fn single_cue_identity() {
        let e = env(&[(1.0, &[1.0]), (2.0, &[2.0]), (7.5, &[7.5])]);
        let w = fit_linear_weights(&e).unwrap();
        assert!((w.get("cue1").unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn matches_normal_equations_on_fixture() {
        let e = env(&[
            (2.3, &[1.0, 0.5]),
            (1.1, &[0.2, 1.7]),
            (4.0, &[2.5, 2.0]),
            (0.4, &[-0.3, 0.1]),
            (3.3, &[1.9, -0.8]),
        ]);
        let w = fit_linear_weights(&e).unwrap();
        let reference = normal_equations(&e);
        for (got, want) in w.iter().map(|(_, v)| v).zip(&reference) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn matches_normal_equations_on_noisy_environment() {
        let targets = vec![
            ("a".to_owned(), 0.8),
            ("b".to_owned(), 0.4),
            ("c".to_owned(), -0.2),
        ];
        let e = generate_gaussian_environment(&targets, 60, 17).unwrap();
        let w = fit_linear_weights(&e).unwrap();
        let reference = normal_equations(&e);
        for (got, want) in w.iter().map(|(_, v)| v).zip(&reference) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn rank_deficiency_names_the_dependent_cue() {
        let e = env(&[
            (1.0, &[1.0, 2.0]),
            (2.0, &[2.0, 4.0]),
            (3.0, &[3.0, 6.0]),
            (5.0, &[4.0, 8.0]),
        ]);
        match fit_linear_weights(&e) {
            Err(Error::RankDeficient(cues)) => assert_eq!(cues, ["cue2"]),
            other => panic!("unexpected {other:?}"),
        }
        let constant = env(&[(1.0, &[1.0]), (2.0, &[1.0]), (3.0, &[1.0])]);
        assert!(
            matches!(fit_linear_weights(&constant), Err(Error::RankDeficient(c)) if c == ["cue1"])
        );
        let (w, dropped) = fit_linear_weights_reduced(&e).unwrap();
        assert_eq!(dropped, ["cue2"]);
        assert_eq!(w.get("cue2"), Some(0.0));
        assert!((w.get("cue1").unwrap() - 1.3).abs() < 1e-9);
    }

    #[test]
    fn too_few_objects() {
        let e = env(&[(1.0, &[1.0, 0.0]), (2.0, &[0.0, 1.0])]);
        assert!(matches!(
            fit_linear_weights(&e),
            Err(Error::TooFewObjects { needed: 3, got: 2 })
        ));
    }
}
