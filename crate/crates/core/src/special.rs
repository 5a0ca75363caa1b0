//! Gamma-family special functions used by the distribution fits.

use crate::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos approximation).
pub fn ln_gamma<T: Real>(x: T) -> T {
    if x < T::lit(0.5) {
        // reflection
        let pi = T::PI();
        return (pi / (pi * x).sin()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS[0]);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::lit(k as f64));
    }
    let t = x + T::lit(LANCZOS_G + 0.5);
    T::lit(0.5) * T::lit(std::f64::consts::TAU).ln() + (x + T::lit(0.5)) * t.ln() - t + acc.ln()
}

/// Digamma `ψ(x) = d/dx ln Γ(x)` for `x > 0`.
pub fn digamma<T: Real>(mut x: T) -> T {
    let mut acc = T::zero();
    while x < T::lit(12.0) {
        acc = acc - x.recip();
        x = x + T::one();
    }
    let inv = x.recip();
    let inv2 = inv * inv;
    let series = inv2
        * (T::lit(1.0 / 12.0)
            - inv2 * (T::lit(1.0 / 120.0) - inv2 * (T::lit(1.0 / 252.0) - inv2 * (T::lit(1.0 / 240.0) - inv2 * T::lit(1.0 / 132.0)))));
    acc + x.ln() - T::lit(0.5) * inv - series
}

/// Trigamma `ψ'(x)` for `x > 0`.
pub fn trigamma<T: Real>(mut x: T) -> T {
    let mut acc = T::zero();
    while x < T::lit(12.0) {
        acc = acc + (x * x).recip();
        x = x + T::one();
    }
    let inv = x.recip();
    let inv2 = inv * inv;
    let series = inv
        + inv2 / T::lit(2.0)
        + inv * inv2 * (T::lit(1.0 / 6.0) - inv2 * (T::lit(1.0 / 30.0) - inv2 * (T::lit(1.0 / 42.0) - inv2 * T::lit(1.0 / 30.0))));
    acc + series
}

/// `ln B(a, b)`.
pub fn ln_beta<T: Real>(a: T, b: T) -> T {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}
