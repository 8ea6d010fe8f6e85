//! Numerical quadrature used by the verification harness.
//!
//! These routines serve as independent oracles for closed-form bounds: the
//! bound formulas never call into here, and the quadrature never calls into
//! the bound formulas.

/// Adaptive Simpson integration of `f` over `[a, b]`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
                + rec(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    rec(f, a, fa, b, fb, whole, m, fm, tol, 48)
}

/// Trapezoid rule over uniformly spaced samples with step `h`.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    h * (0.5 * values[0] + inner + 0.5 * values[values.len() - 1])
}

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Upper tail Pr{Z >= a} of a standard normal, by quadrature.
///
/// Integrates the density over [a, a + 40]; the remainder beyond 40 sigma is
/// far below the 1e-12 tolerance used here.
pub fn std_normal_upper_tail(a: f64) -> f64 {
    if a < 0.0 {
        return 1.0 - std_normal_upper_tail(-a);
    }
    adaptive_simpson(&std_normal_pdf, a, a + 40.0, 1e-13)
}

/// E exp(lambda Z^2) for Z ~ N(0,1), by quadrature; requires lambda < 1/2.
pub fn gaussian_square_mgf_quadrature(lambda: f64) -> f64 {
    assert!(lambda < 0.5, "mgf of Z^2 diverges for lambda >= 1/2");
    let decay = 1.0 - 2.0 * lambda.max(0.0);
    let half_width = (40.0 / decay).sqrt().max(10.0);
    let f = |x: f64| (lambda * x * x).exp() * std_normal_pdf(x);
    adaptive_simpson(&f, -half_width, half_width, 1e-13)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_polynomials_exactly() {
        let f = |x: f64| 3.0 * x * x;
        assert!((adaptive_simpson(&f, 0.0, 2.0, 1e-12) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn normal_tail_matches_erfc_reference() {
        // Reference values from the complementary error function.
        let cases = [(0.0, 0.5), (1.0, 0.15865525393145707), (3.0, 0.0013498980316300957)];
        for (a, want) in cases {
            assert!((std_normal_upper_tail(a) - want).abs() < 1e-11, "a = {a}");
        }
    }

    #[test]
    fn trapezoid_handles_linear_functions() {
        let h = 0.25;
        let values: Vec<f64> = (0..5).map(|i| 2.0 * (i as f64) * h).collect();
        assert!((trapezoid(&values, h) - 1.0).abs() < 1e-12);
    }
}
