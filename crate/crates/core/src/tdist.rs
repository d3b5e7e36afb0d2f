//! Student-t distribution: CDF and quantile function.
//!
//! The CDF is evaluated through the regularized incomplete beta function
//! I_x(a, b), computed with a Lentz-style continued fraction; quantiles are
//! obtained by bisecting the CDF. Quantiles are accurate to well below 1e-8
//! over the degrees of freedom this crate uses, which is checked in the
//! tests against a high-precision table.

use crate::error::{Error, Result};

/// ln Γ(x) for x > 0, Lanczos approximation (g = 7, n = 9).
fn ln_gamma(x: f64) -> f64 {
    // Published coefficients, kept at source precision.
    #[allow(clippy::excessive_precision)]
    const COEF: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Continued fraction for the incomplete beta function (Lentz's algorithm).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 1e-16;
    const TINY: f64 = 1e-300;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;

    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;

    for m in 1..=MAX_ITER {
        let m_f = m as f64;
        let m2 = 2.0 * m_f;

        let aa = m_f * (b - m_f) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let aa = -(a + m_f) * (qab + m_f) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;

        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function I_x(a, b) for x in [0, 1].
pub fn inc_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    // The continued fraction converges fastest for x < (a+1)/(a+b+2);
    // otherwise use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    }
}

/// CDF of Student's t with `df` degrees of freedom.
pub fn cdf(t: f64, df: f64) -> f64 {
    debug_assert!(df > 0.0);
    let x = df / (df + t * t);
    let tail = 0.5 * inc_beta(0.5 * df, 0.5, x);
    if t >= 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Quantile (inverse CDF) of Student's t with `df` degrees of freedom.
///
/// Bisection on the CDF: monotone, and the bracket shrinks below 1e-12 in
/// roughly 60 iterations, far past the 1e-8 accuracy target.
pub fn quantile(p: f64, df: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::InvalidConfig(format!(
            "quantile probability must lie in [0,1], got {p}"
        )));
    }
    if df <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "degrees of freedom must be positive, got {df}"
        )));
    }
    if p == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if p == 1.0 {
        return Ok(f64::INFINITY);
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    // Symmetry: solve in the upper tail only.
    if p < 0.5 {
        return Ok(-quantile(1.0 - p, df)?);
    }
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    while cdf(hi, df) < p {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Ok(f64::INFINITY);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid, df) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * (1.0 + hi.abs()) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference quantiles computed with an independent high-precision
    // implementation; frozen to full double precision.
    const TABLE: &[(f64, f64, f64)] = &[
        (1.0, 0.90, 3.0776835372078066),
        (1.0, 0.95, 6.313751514800932),
        (1.0, 0.975, 12.706204736432095),
        (1.0, 0.995, 63.65674116287399),
        (2.0, 0.90, 1.8856180831641507),
        (2.0, 0.95, 2.919985580355516),
        (2.0, 0.975, 4.302652729696142),
        (2.0, 0.995, 9.92484320091807),
        (3.0, 0.90, 1.6377443536962095),
        (3.0, 0.95, 2.3533634348018264),
        (3.0, 0.975, 3.182446305284263),
        (3.0, 0.995, 5.840909309733352),
        (5.0, 0.90, 1.4758840488558216),
        (5.0, 0.95, 2.0150483733330233),
        (5.0, 0.975, 2.570581835636314),
        (5.0, 0.995, 4.032142983557536),
        (8.0, 0.90, 1.396815309743419),
        (8.0, 0.95, 1.8595480375228424),
        (8.0, 0.975, 2.306004135204166),
        (8.0, 0.995, 3.3553873313333957),
        (11.0, 0.90, 1.3634303180205214),
        (11.0, 0.95, 1.7958848187036691),
        (11.0, 0.975, 2.200985160082949),
        (11.0, 0.995, 3.1058065155392804),
        (24.0, 0.90, 1.3178359336731498),
        (24.0, 0.95, 1.7108820799094275),
        (24.0, 0.975, 2.0638985616280205),
        (24.0, 0.995, 2.796939504772804),
        (120.0, 0.90, 1.2886462336537166),
        (120.0, 0.95, 1.6576508993473795),
        (120.0, 0.975, 1.9799304050527766),
        (120.0, 0.995, 2.617421145106866),
    ];

    #[test]
    fn quantile_matches_reference_table() {
        for &(df, p, expected) in TABLE {
            let got = quantile(p, df).unwrap();
            assert!(
                (got - expected).abs() < 1e-8 * (1.0 + expected.abs()),
                "df={df} p={p}: got {got}, expected {expected}"
            );
        }
    }

    #[test]
    fn cdf_round_trips_quantile() {
        for &(df, p, _) in TABLE {
            let t = quantile(p, df).unwrap();
            assert!((cdf(t, df) - p).abs() < 1e-10, "df={df} p={p}");
        }
    }

    #[test]
    fn symmetry_about_zero() {
        for df in [1.0, 4.0, 11.0, 50.0] {
            assert!((cdf(0.0, df) - 0.5).abs() < 1e-14);
            for t in [0.3, 1.7, 4.2] {
                assert!((cdf(-t, df) - (1.0 - cdf(t, df))).abs() < 1e-14);
            }
            let q = quantile(0.25, df).unwrap();
            let q2 = quantile(0.75, df).unwrap();
            assert!((q + q2).abs() < 1e-12);
        }
    }

    #[test]
    fn quantile_rejects_bad_inputs() {
        assert!(quantile(-0.1, 5.0).is_err());
        assert!(quantile(1.1, 5.0).is_err());
        assert!(quantile(0.5, 0.0).is_err());
        assert!(quantile(0.5, -2.0).is_err());
    }

    #[test]
    fn extreme_probabilities() {
        assert_eq!(quantile(0.0, 5.0).unwrap(), f64::NEG_INFINITY);
        assert_eq!(quantile(1.0, 5.0).unwrap(), f64::INFINITY);
        assert_eq!(quantile(0.5, 5.0).unwrap(), 0.0);
    }
}
