//! Reference distributions. The Student t tail uses the regularized
//! incomplete beta function; above a million degrees of freedom the normal
//! tail is used instead.

use statrs::function::beta::beta_reg;
use statrs::function::erf::erfc;

const NORMAL_DF_CUTOFF: f64 = 1e6;

/// 97.5% quantile of the standard normal.
pub const Z_975: f64 = 1.959_963_984_540_054;

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

pub fn normal_two_sided_p(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    erfc(z.abs() / std::f64::consts::SQRT_2).min(1.0)
}

/// Two-sided p-value of a t statistic with `df` degrees of freedom.
pub fn t_two_sided_p(t: f64, df: f64) -> f64 {
    if t.is_nan() || df.is_nan() || df <= 0.0 {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    if df > NORMAL_DF_CUTOFF {
        return normal_two_sided_p(t);
    }
    let x = df / (df + t * t);
    beta_reg(df / 2.0, 0.5, x).clamp(0.0, 1.0)
}
