//! Floating-point Hamilton quaternions.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// `w + x i + y j + z k`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };
    pub const I: Quaternion = Quaternion { w: 0.0, x: 1.0, y: 0.0, z: 0.0 };
    pub const J: Quaternion = Quaternion { w: 0.0, x: 0.0, y: 1.0, z: 0.0 };
    pub const K: Quaternion = Quaternion { w: 0.0, x: 0.0, y: 0.0, z: 1.0 };

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn from_slice(s: &[f64]) -> Self {
        Quaternion::new(s[0], s[1], s[2], s[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn norm_squared(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// `exp(a i + b j + c k) = cos s + sin s (a i + b j + c k) / s`, `s = |(a, b, c)|`.
    pub fn exp_imaginary(a: f64, b: f64, c: f64) -> Self {
        let s = (a * a + b * b + c * c).sqrt();
        if s == 0.0 {
            return Quaternion::ONE;
        }
        // sin(s)/s via the series near zero keeps the map smooth.
        let sinc = if s < 1e-8 { 1.0 - s * s / 6.0 } else { s.sin() / s };
        Quaternion::new(s.cos(), a * sinc, b * sinc, c * sinc)
    }
}

pub fn quat_mul(a: Quaternion, b: Quaternion) -> Quaternion {
    Quaternion::new(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )
}

pub fn quat_exp(a: f64, b: f64, c: f64) -> Quaternion {
    Quaternion::exp_imaginary(a, b, c)
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        quat_mul(self, rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn hamilton_relations() {
        use Quaternion as Q;
        assert_eq!(Q::I * Q::J, Q::K);
        assert_eq!(Q::J * Q::K, Q::I);
        assert_eq!(Q::K * Q::I, Q::J);
        assert_eq!(Q::J * Q::I, -Q::K);
        assert_eq!(Q::I * Q::I, -Q::ONE);
    }

    #[test]
    fn exp_special_values() {
        assert_eq!(quat_exp(0.0, 0.0, 0.0), Quaternion::ONE);
        assert!(close(quat_exp(FRAC_PI_2, 0.0, 0.0), Quaternion::I, 1e-15));
        assert!(close(quat_exp(0.0, 0.0, std::f64::consts::PI), -Quaternion::ONE, 1e-15));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn exp_has_unit_norm(a in -20.0f64..20.0, b in -20.0f64..20.0, c in -20.0f64..20.0) {
            prop_assert!((quat_exp(a, b, c).norm() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn exp_is_one_parameter_group(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, s in -2.0f64..2.0, t in -2.0f64..2.0) {
            let lhs = quat_exp(a * s, b * s, c * s) * quat_exp(a * t, b * t, c * t);
            let rhs = quat_exp(a * (s + t), b * (s + t), c * (s + t));
            prop_assert!(close(lhs, rhs, 1e-12));
        }
    }
}
