use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Laurent polynomial in a single variable (ω, or q after passing to the
/// q-subalgebra) with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OmegaScalar {
    coeffs: BTreeMap<i64, i64>,
}

impl OmegaScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `c · ω^k`
    pub fn monomial(c: i64, k: i64) -> Self {
        let mut s = Self::zero();
        s.add_term(k, c);
        s
    }

    pub fn omega_pow(k: i64) -> Self {
        Self::monomial(1, k)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut s = Self::zero();
        for (k, c) in terms {
            s.add_term(k, c);
        }
        s
    }

    pub fn add_term(&mut self, k: i64, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.coeffs.entry(k).or_insert(0);
        *e = e.checked_add(c).expect("coefficient overflow");
        if *e == 0 {
            self.coeffs.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0) == Some(&1)
    }

    pub fn coeff(&self, k: i64) -> i64 {
        self.coeffs.get(&k).copied().unwrap_or(0)
    }

    /// Terms `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiply by ω^k.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, &v)| (e, v.checked_mul(c).expect("coefficient overflow")))
                .collect(),
        }
    }

    /// ω ↦ ω^{-1}.
    pub fn invert_variable(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }

    /// Value at ω = 1.
    pub fn classical(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// `Some(k)` iff the scalar is exactly ω^k.
    pub fn as_unit_power(&self) -> Option<i64> {
        match self.coeffs.iter().next() {
            Some((&k, &1)) if self.coeffs.len() == 1 => Some(k),
            _ => None,
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|&c| c > 0)
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// All exponents divisible by `d`.
    pub fn exponents_divisible_by(&self, d: i64) -> bool {
        self.coeffs.keys().all(|k| k.rem_euclid(d) == 0)
    }

    /// Substitute ω^k ↦ t^{k/d}; requires divisibility.
    pub fn divide_exponents(&self, d: i64) -> Self {
        debug_assert!(self.exponents_divisible_by(d));
        Self {
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k / d, c)).collect(),
        }
    }

    pub fn multiply_exponents(&self, d: i64) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k * d, c)))
    }
}

impl Add for &OmegaScalar {
    type Output = OmegaScalar;
    fn add(self, rhs: &OmegaScalar) -> OmegaScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for OmegaScalar {
    type Output = OmegaScalar;
    fn add(mut self, rhs: OmegaScalar) -> OmegaScalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&OmegaScalar> for OmegaScalar {
    fn add_assign(&mut self, rhs: &OmegaScalar) {
        for (k, c) in rhs.terms() {
            self.add_term(k, c);
        }
    }
}

impl Neg for &OmegaScalar {
    type Output = OmegaScalar;
    fn neg(self) -> OmegaScalar {
        self.scale(-1)
    }
}

impl Neg for OmegaScalar {
    type Output = OmegaScalar;
    fn neg(self) -> OmegaScalar {
        self.scale(-1)
    }
}

impl Sub for &OmegaScalar {
    type Output = OmegaScalar;
    fn sub(self, rhs: &OmegaScalar) -> OmegaScalar {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, -c);
        }
        out
    }
}

impl Sub for OmegaScalar {
    type Output = OmegaScalar;
    fn sub(self, rhs: OmegaScalar) -> OmegaScalar {
        &self - &rhs
    }
}

impl Mul for &OmegaScalar {
    type Output = OmegaScalar;
    fn mul(self, rhs: &OmegaScalar) -> OmegaScalar {
        let mut out = OmegaScalar::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                out.add_term(a + b, ca.checked_mul(cb).expect("coefficient overflow"));
            }
        }
        out
    }
}

impl Mul for OmegaScalar {
    type Output = OmegaScalar;
    fn mul(self, rhs: OmegaScalar) -> OmegaScalar {
        &self * &rhs
    }
}

impl OmegaScalar {
    /// Render with the given variable name, highest power first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (k, c)) in self.terms().rev().enumerate() {
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            match (k, mag) {
                (0, m) => out.push_str(&m.to_string()),
                (k, 1) => out.push_str(&format!("{var}^{k}")),
                (k, m) => out.push_str(&format!("{m}*{var}^{k}")),
            }
        }
        out
    }
}

impl fmt::Display for OmegaScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("w"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_ops() {
        let a = OmegaScalar::from_terms([(1, 2), (-1, 1)]);
        let b = OmegaScalar::from_terms([(1, -2), (3, 1)]);
        assert_eq!(&a + &b, OmegaScalar::from_terms([(-1, 1), (3, 1)]));
        assert_eq!(&a * &b, &b * &a);
        assert!((&a - &a).is_zero());
        assert_eq!(a.classical(), 3);
    }

    #[test]
    fn unit_power_detection() {
        assert_eq!(OmegaScalar::omega_pow(-5).as_unit_power(), Some(-5));
        assert_eq!(OmegaScalar::monomial(2, 1).as_unit_power(), None);
        assert_eq!(OmegaScalar::zero().as_unit_power(), None);
    }

    #[test]
    fn rendering() {
        let a = OmegaScalar::from_terms([(4, 1), (-4, -1), (0, 3)]);
        assert_eq!(a.render("q"), "q^4 + 3 - q^-4");
    }
}
