//! Gamma function for positive arguments (Lanczos, g = 7, 9 terms).

use std::f64::consts::PI;

const G: f64 = 7.0;
const COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(x)` for `x > 0`. Returns NaN otherwise.
pub fn gamma(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let z = x - 1.0;
    let mut acc = COEFFS[0];
    for (i, c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integers_and_integers() {
        let sqrt_pi = PI.sqrt();
        let cases = [
            (1.0, 1.0),
            (1.5, 0.5 * sqrt_pi),
            (2.0, 1.0),
            (2.5, 0.75 * sqrt_pi),
            (3.0, 2.0),
            (0.5, sqrt_pi),
            (5.0, 24.0),
        ];
        for (x, want) in cases {
            let got = gamma(x);
            assert!(((got - want) / want).abs() <= 1e-13, "Γ({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn recurrence_on_unit_interval() {
        for i in 1..100 {
            let x = 1.0 + i as f64 / 50.0;
            let lhs = gamma(x + 1.0);
            let rhs = x * gamma(x);
            assert!(((lhs - rhs) / rhs).abs() <= 1e-13);
        }
    }
}
