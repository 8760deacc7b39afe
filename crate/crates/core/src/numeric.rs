//! Small numerical kernels shared across modules: compensated summation,
//! Bernoulli numbers and the complex log-gamma function.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Neumaier-compensated running sum. Addition order is the caller's order.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// B_2, B_4, ..., B_24.
pub const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Analytic branch of log Γ(z) for Re z > 0: continuous in z, real on the
/// positive axis. Stirling series after an upward shift.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate().take(10) {
        let n = 2.0 * (k as f64 + 1.0);
        series += pow * (b / (n * (n - 1.0)));
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - shift
}

/// True when `z` is a pole of Γ (a nonpositive integer).
pub fn is_gamma_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// log Γ(z). For Re z ≥ 1/2 this is the continuous analytic branch; to the
/// left of that it is computed through the reflection formula and its
/// imaginary part is only determined mod 2π.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        ln_gamma_right(z)
    } else {
        // Γ(z) Γ(1−z) = π / sin(πz)
        let s = (z * PI).sin();
        Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_right(1.0 - z)
    }
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// Unwraps a sequence of imaginary parts so that neighbours differ by at
/// most π.
pub fn unwrap_phases(values: &mut [Complex64]) {
    for i in 1..values.len() {
        let prev = values[i - 1].im;
        let mut cur = values[i].im;
        let k = ((cur - prev) / (2.0 * PI)).round();
        cur -= k * 2.0 * PI;
        values[i].im = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..10 {
            acc.add(1e-16);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-15).abs() < 1e-30);
    }

    #[test]
    fn gamma_integer_values() {
        let mut fact = 1.0;
        for n in 1..15 {
            let g = gamma(Complex64::new(n as f64, 0.0));
            assert!((g.re - fact).abs() < 1e-13 * fact, "Γ({n})");
            assert!(g.im.abs() < 1e-13 * fact);
            fact *= n as f64;
        }
    }

    #[test]
    fn gamma_half_and_reflection() {
        let g = gamma(Complex64::new(0.5, 0.0));
        assert!((g.re - PI.sqrt()).abs() < 1e-14);
        let g = gamma(Complex64::new(-0.5, 0.0));
        assert!((g.re + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn gamma_recurrence_off_axis() {
        for &(x, y) in &[(0.3, 4.0), (2.5, -7.0), (0.25, 100.0), (-2.3, 1.5)] {
            let z = Complex64::new(x, y);
            let lhs = gamma(z + 1.0);
            let rhs = z * gamma(z);
            assert!((lhs - rhs).norm() < 1e-12 * lhs.norm(), "z = {z}");
        }
    }

    #[test]
    fn ln_gamma_modulus_on_vertical_line() {
        // |Γ(1/2 + iy)|² = π / cosh(πy)
        for y in [0.0, 1.0, 5.0, 20.0] {
            let lg = ln_gamma(Complex64::new(0.5, y));
            let expect = 0.5 * (PI / (PI * y).cosh()).ln();
            assert!((lg.re - expect).abs() < 1e-12, "y = {y}");
        }
    }

    #[test]
    fn poles() {
        assert!(is_gamma_pole(Complex64::new(0.0, 0.0)));
        assert!(is_gamma_pole(Complex64::new(-3.0, 0.0)));
        assert!(!is_gamma_pole(Complex64::new(-3.0, 1e-9)));
        assert!(!is_gamma_pole(Complex64::new(1.0, 0.0)));
    }
}
