//! Property tests for the regression kernel: agreement with an
//! independent normal-equations solver, invariances OLS must satisfy,
//! and range guarantees for the derived statistics.

use growthlaw_core::{durbin_watson, ols_fit, significance_flag_with, DesignMatrix};
use proptest::prelude::*;

/// Solves the normal equations (X'X) b = X'y by Gauss-Jordan with
/// partial pivoting. Returns None when a pivot collapses, which the
/// properties treat as "discard this draw".
fn normal_equations(cols: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let k = cols.len();
    let mut a = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = cols[i].iter().zip(&cols[j]).map(|(u, v)| u * v).sum();
        }
        a[i][k] = cols[i].iter().zip(y).map(|(u, v)| u * v).sum();
    }
    let scale = a
        .iter()
        .flat_map(|row| row.iter().map(|v| v.abs()))
        .fold(0.0, f64::max);
    for col in 0..k {
        let (pivot_row, pivot) = (col..k)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))?;
        if pivot < 1e-9 * scale.max(1.0) {
            return None;
        }
        a.swap(col, pivot_row);
        let p = a[col][col];
        for v in &mut a[col] {
            *v /= p;
        }
        let pivot_row_values = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col {
                let f = row[col];
                for (v, p) in row.iter_mut().zip(&pivot_row_values) {
                    *v -= f * p;
                }
            }
        }
    }
    Some((0..k).map(|i| a[i][k]).collect())
}

fn design_strategy() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>, bool)> {
    (1usize..=3, 8usize..=24, any::<bool>()).prop_flat_map(|(k, n, with_const)| {
        let col = proptest::collection::vec(-3.0f64..3.0, n);
        let cols = proptest::collection::vec(col.clone(), k);
        (cols, col, Just(with_const)).prop_map(move |(mut cols, y, with_const)| {
            if with_const {
                cols.insert(0, vec![1.0; n]);
            }
            (cols, y, with_const)
        })
    })
}

fn named(cols: Vec<Vec<f64>>) -> DesignMatrix {
    let names: Vec<String> = (0..cols.len()).map(|j| format!("x{j}")).collect();
    DesignMatrix::new(names, cols).unwrap()
}

proptest! {
    #[test]
    fn qr_agrees_with_the_normal_equations((cols, y, _) in design_strategy()) {
        let reference = normal_equations(&cols, &y);
        prop_assume!(reference.is_some());
        let reference = reference.unwrap();
        let fit = ols_fit(&named(cols), &y);
        prop_assume!(fit.is_ok());
        let fit = fit.unwrap();
        for (qr, ne) in fit.coefficients.iter().zip(&reference) {
            prop_assert!(
                (qr - ne).abs() <= 1e-6 * (1.0 + ne.abs()),
                "qr {qr} vs normal equations {ne}"
            );
        }
    }

    #[test]
    fn residuals_are_orthogonal_to_the_design((cols, y, _) in design_strategy()) {
        let fit = ols_fit(&named(cols.clone()), &y);
        prop_assume!(fit.is_ok());
        let fit = fit.unwrap();
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
        for col in &cols {
            let dot: f64 = col.iter().zip(&fit.residuals).map(|(x, e)| x * e).sum();
            prop_assert!(dot.abs() < 1e-7 * norm, "X'e = {dot}");
        }
    }

    #[test]
    fn scaling_y_scales_coefficients_and_keeps_r_squared(
        (cols, y, _) in design_strategy(),
        c in prop_oneof![Just(-3.0f64), Just(0.5), Just(7.0)],
    ) {
        let base = ols_fit(&named(cols.clone()), &y);
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        prop_assume!(base.r_squared.is_finite());
        let scaled_y: Vec<f64> = y.iter().map(|v| c * v).collect();
        let scaled = ols_fit(&named(cols), &scaled_y).unwrap();
        for (b0, b1) in base.coefficients.iter().zip(&scaled.coefficients) {
            prop_assert!((c * b0 - b1).abs() <= 1e-8 * (1.0 + (c * b0).abs()));
        }
        prop_assert!((base.r_squared - scaled.r_squared).abs() < 1e-8);
    }

    #[test]
    fn rescaling_a_column_rescales_its_coefficient((cols, y, _) in design_strategy()) {
        let base = ols_fit(&named(cols.clone()), &y);
        prop_assume!(base.is_ok());
        let base = base.unwrap();
        let mut scaled_cols = cols;
        let last = scaled_cols.len() - 1;
        for v in &mut scaled_cols[last] {
            *v *= 4.0;
        }
        let scaled = ols_fit(&named(scaled_cols), &y);
        prop_assume!(scaled.is_ok());
        let scaled = scaled.unwrap();
        let b0 = base.coefficients[last];
        let b1 = scaled.coefficients[last];
        prop_assert!((b0 / 4.0 - b1).abs() <= 1e-7 * (1.0 + b0.abs()));
        // The t statistic is invariant to the units of the regressor.
        let t0 = base.t_stats[last];
        let t1 = scaled.t_stats[last];
        prop_assume!(t0.is_finite() && t0.abs() < 1e6);
        prop_assert!((t0 - t1).abs() <= 1e-5 * (1.0 + t0.abs()));
    }

    #[test]
    fn r_squared_stays_in_the_unit_interval((cols, y, _) in design_strategy()) {
        let fit = ols_fit(&named(cols), &y);
        prop_assume!(fit.is_ok());
        let fit = fit.unwrap();
        prop_assume!(fit.r_squared.is_finite());
        prop_assert!(fit.r_squared >= -1e-10 && fit.r_squared <= 1.0 + 1e-10);
    }

    #[test]
    fn durbin_watson_is_bounded(values in proptest::collection::vec(-10.0f64..10.0, 2..200)) {
        match durbin_watson(&values) {
            Ok(dw) => prop_assert!((0.0..=4.0).contains(&dw)),
            Err(_) => prop_assert!(values.iter().all(|v| *v == 0.0)),
        }
    }

    #[test]
    fn significance_never_weakens_as_t_grows(
        t_small in 0.0f64..12.0,
        extra in 0.0f64..12.0,
        df in 1usize..200,
    ) {
        let f_small = significance_flag_with(t_small, df, 0.05, 0.10).unwrap();
        let f_large = significance_flag_with(t_small + extra, df, 0.05, 0.10).unwrap();
        prop_assert!(f_large >= f_small);
        // Two-sided: the sign of t never matters.
        let f_neg = significance_flag_with(-(t_small + extra), df, 0.05, 0.10).unwrap();
        prop_assert!(f_neg == f_large);
    }
}
