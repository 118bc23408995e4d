use errorfunctions::RealErrorFunctions;

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    RealErrorFunctions::erfc(x)
}

/// Dawson function D(x) = e^{-x^2} int_0^x e^{t^2} dt.
pub fn dawson(x: f64) -> f64 {
    RealErrorFunctions::dawson(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// erfc from the Taylor series of erf, accurate for small |x|.
    fn erfc_series(x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        for k in 1..200 {
            term *= -x * x / k as f64;
            sum += term / (2 * k + 1) as f64;
        }
        1.0 - 2.0 / std::f64::consts::PI.sqrt() * sum
    }

    #[test]
    fn erfc_values() {
        assert_eq!(erfc(0.0), 1.0);
        assert!((erfc(1.0) - 0.157_299_207_050_285_13).abs() < 1e-15);
        for &x in &[0.1, 0.5, 1.0, 1.7, 2.5] {
            assert!((erfc(x) - erfc_series(x)).abs() < 1e-13, "x={x}");
        }
        for i in 0..=100 {
            let x = -10.0 + 0.2 * i as f64;
            assert!((erfc(-x) - (2.0 - erfc(x))).abs() <= 1e-15 * 2.0);
        }
    }

    #[test]
    fn erfc_tail_relative_accuracy() {
        // asymptotic series e^{-x^2}/(x sqrt(pi)) (1 - 1/(2x^2) + 3/(4x^4) - 15/(8x^6) + 105/(16 x^8))
        for x in [6.0f64, 8.0, 10.0] {
            let y = 1.0 / (2.0 * x * x);
            let s = 1.0 - y + 3.0 * y * y - 15.0 * y.powi(3) + 105.0 * y.powi(4) - 945.0 * y.powi(5);
            let asym = (-x * x).exp() / (x * std::f64::consts::PI.sqrt()) * s;
            let truncation = 10395.0 * y.powi(6);
            assert!(
                ((erfc(x) - asym) / asym).abs() < 2.0 * truncation + 1e-12,
                "x={x}"
            );
        }
    }

    #[test]
    fn dawson_values() {
        // D(1) from tables; D'(0) = 1; odd.
        assert!((dawson(1.0) - 0.538_079_506_912_768_4).abs() < 1e-14);
        assert!((dawson(1e-8) - 1e-8).abs() < 1e-22);
        assert_eq!(dawson(-0.7), -dawson(0.7));
    }
}
