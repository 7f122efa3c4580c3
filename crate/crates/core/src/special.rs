//! Modified Bessel functions of the first kind on a single argument.

use crate::scalar::Real;

/// `e^{-x} I_n(x)` for `n = 0..=n_max`, `x >= 0`.
///
/// Miller's backward recurrence `I_{n-1} = I_{n+1} + (2n/x) I_n`, normalized with
/// `e^x = I_0(x) + 2 Σ_{n≥1} I_n(x)`. Running values are rescaled whenever they
/// approach overflow, so the routine is safe in `f32` as well.
pub fn bessel_i_scaled<T: Real>(x: T, n_max: usize) -> Vec<T> {
    assert!(x >= T::zero() && x.is_finite(), "argument must be finite and non-negative");
    let mut out = vec![T::zero(); n_max + 1];
    if x == T::zero() {
        out[0] = T::one();
        return out;
    }
    let xf = x.to_f64_lossy();
    let start = n_max.max(xf.ceil() as usize) + (10.0 * (xf + 1.0).sqrt()).ceil() as usize + 40;
    let big = T::max_value().sqrt();
    let two_over_x = T::lit(2.0) / x;

    let mut above = T::zero(); // I_{n+1}
    let mut here = T::min_positive_value().sqrt(); // I_n, arbitrary seed
    let mut norm = T::zero();
    for n in (1..=start).rev() {
        if n <= n_max {
            out[n] = here;
        }
        norm += here;
        let below = above + two_over_x * T::from_usize_lossy(n) * here;
        above = here;
        here = below;
        if here > big {
            let s = T::one() / here;
            for v in out.iter_mut() {
                *v *= s;
            }
            norm *= s;
            above *= s;
            here = T::one();
        }
    }
    out[0] = here;
    let total = here + T::lit(2.0) * norm;
    for v in out.iter_mut() {
        *v /= total;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // Power series, only valid for modest x.
    fn series(n: u32, x: f64) -> f64 {
        let mut term = (x / 2.0).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
        let mut sum = 0.0;
        for k in 0..200 {
            sum += term;
            term *= (x / 2.0).powi(2) / ((k + 1) as f64 * (k + 1 + n) as f64);
        }
        sum
    }

    #[test]
    fn matches_power_series() {
        for &x in &[0.05, 0.5, 1.0, 2.0, 7.5] {
            let v = bessel_i_scaled(x, 6);
            for (n, vn) in v.iter().enumerate() {
                let want = series(n as u32, x) * (-x).exp();
                assert!((vn - want).abs() < 1e-14 * want.max(1e-300) + 1e-300, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn known_values() {
        let v = bessel_i_scaled(2.0_f64, 1);
        let e2 = 2.0_f64.exp();
        assert!((v[0] * e2 - 2.279_585_302_336_067).abs() < 1e-13);
        assert!((v[1] * e2 - 1.590_636_854_637_329).abs() < 1e-13);
    }

    #[test]
    fn large_argument_is_finite() {
        let v = bessel_i_scaled(5000.0_f64, 3);
        // I_n(x) e^{-x} ~ 1/sqrt(2 pi x) for n << x
        let asym = 1.0 / (2.0 * std::f64::consts::PI * 5000.0).sqrt();
        assert!((v[0] / asym - 1.0).abs() < 1e-4);
        let vf = bessel_i_scaled(300.0_f32, 2);
        assert!(vf.iter().all(|x| x.is_finite() && *x > 0.0));
    }

    #[test]
    fn zero_argument() {
        assert_eq!(bessel_i_scaled(0.0_f64, 2), vec![1.0, 0.0, 0.0]);
    }
}
