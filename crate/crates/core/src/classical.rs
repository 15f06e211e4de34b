//! Classical side: turn-matrix monodromy, Chebyshev polynomials and the
//! classical canonical map.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lamination::{trace_word, CurveWord, IntegralLamination, Turn};
use crate::qtorus::{EpsilonForm, OmegaScalar, QLaurent};
use crate::surface::IdealTriangulation;

/// Univariate integer polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: i64) -> Self {
        Self::new(vec![c])
    }

    /// `t^k`.
    pub fn power(k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = 1;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn eval(&self, t: i64) -> i64 {
        self.coeffs.iter().rev().fold(0i64, |acc, &c| {
            acc.checked_mul(t).and_then(|v| v.checked_add(c)).expect("integer overflow in polynomial evaluation")
        })
    }

    /// Horner evaluation at an element of a quantum torus.
    pub fn eval_laurent(&self, x: &QLaurent) -> QLaurent {
        let mut acc = QLaurent::zero(x.eps().clone()).with_generators(x.generators());
        let one = QLaurent::one(x.eps().clone()).with_generators(x.generators());
        for &c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + &one.scale(&OmegaScalar::monomial(c, 0));
        }
        acc
    }

    /// `self(other(t))`.
    pub fn compose(&self, other: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::default(), |acc, &c| &(&acc * other) + &Self::constant(c))
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &rhs.scale(-1)
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::default();
        }
        let mut c = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPolynomial::new(c)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => f.write_str("t")?,
                (1, _) => write!(f, "{a}t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{a}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// `F_k` with `F_0 = 2`, `F_1 = t`, `F_{k+1} = t F_k − F_{k−1}`.
pub fn chebyshev(k: usize) -> IntPolynomial {
    let t = IntPolynomial::power(1);
    let (mut prev, mut cur) = (IntPolynomial::constant(2), t.clone());
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = &(&cur * &t) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `F_k(x)` for an element of a quantum torus.
pub fn chebyshev_eval(k: usize, x: &QLaurent) -> QLaurent {
    let two = QLaurent::one(x.eps().clone()).with_generators(x.generators()).scale(&OmegaScalar::monomial(2, 0));
    if k == 0 {
        return two;
    }
    let (mut prev, mut cur) = (two, x.clone());
    for _ in 1..k {
        let next = &(&cur * x) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Inverse Chebyshev polynomial `F̃_k = Σ c_{k,i} t^i`, so that
/// `t^k = c_{k,0} + Σ_{i≥1} c_{k,i} F_i(t)`.
pub fn inverse_chebyshev(k: usize) -> Result<IntPolynomial> {
    if k < 1 {
        return Err(Error::InvalidCurve("inverse Chebyshev degree must be at least 1".into()));
    }
    let mut c = IntPolynomial::power(1);
    for j in 1..k {
        let mut next = vec![0i64; j + 2];
        next[j + 1] = 1;
        next[j] = c.coeff(j - 1);
        for (i, slot) in next.iter_mut().enumerate().take(j).skip(1) {
            *slot = c.coeff(i - 1) + c.coeff(i + 1);
        }
        next[0] = 2 * c.coeff(1);
        c = IntPolynomial::new(next);
    }
    Ok(c)
}

/// 2×2 matrix over commutative Laurent polynomials in the `Z_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommMatrix2 {
    pub entries: [[QLaurent; 2]; 2],
}

impl CommMatrix2 {
    pub fn identity(n: usize) -> Self {
        let eps = Arc::new(EpsilonForm::zero(n));
        let one = QLaurent::one(eps.clone());
        let zero = QLaurent::zero(eps);
        Self { entries: [[one.clone(), zero.clone()], [zero, one]] }
    }

    pub fn trace(&self) -> QLaurent {
        &self.entries[0][0] + &self.entries[1][1]
    }

    pub fn determinant(&self) -> QLaurent {
        let e = &self.entries;
        &(&e[0][0] * &e[1][1]) - &(&e[0][1] * &e[1][0])
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let a = &self.entries;
        let b = &rhs.entries;
        let cell = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        Self { entries: [[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]] }
    }
}

fn unit(n: usize, i: usize, p: i64) -> QLaurent {
    let mut e = vec![0; n];
    e[i] = p;
    QLaurent::from_scalar_term(Arc::new(EpsilonForm::zero(n)), e, OmegaScalar::one())
}

/// Turn matrix for crossing edge `i` then turning.
pub fn turn_matrix(n: usize, i: usize, turn: Turn) -> CommMatrix2 {
    let z = unit(n, i, 1);
    let zi = unit(n, i, -1);
    let zero = QLaurent::zero(z.eps().clone());
    let entries = match turn {
        Turn::Left => [[z.clone(), z], [zero, zi]],
        Turn::Right => [[z, zero], [zi.clone(), zi]],
    };
    CommMatrix2 { entries }
}

/// Ordered product of turn matrices along the word.
pub fn monodromy(n: usize, word: &CurveWord) -> CommMatrix2 {
    word.0.iter().fold(CommMatrix2::identity(n), |acc, &(e, t)| acc.mul(&turn_matrix(n, e, t)))
}

/// Trace of the monodromy of a validated curve word.
pub fn curve_trace(tri: &IdealTriangulation, word: &CurveWord) -> Result<QLaurent> {
    trace_word(tri, word)?;
    Ok(monodromy(tri.num_edges(), word).trace())
}

/// Classical canonical map on a lamination, as a commutative polynomial.
pub fn classical_i(tri: &IdealTriangulation, l: &IntegralLamination) -> Result<QLaurent> {
    let n = tri.num_edges();
    let mut acc = CommMatrix2::identity(n).entries[0][0].clone();
    for c in l.components() {
        let factor = match c.peripheral {
            Some(_) => {
                let m = monodromy(n, &c.word);
                let eig = &m.entries[0][0];
                let exps = eig.terms().next().expect("monomial eigenvalue").0.iter().map(|p| p * c.weight).collect();
                QLaurent::from_scalar_term(eig.eps().clone(), exps, OmegaScalar::one())
            }
            None => chebyshev_eval(c.weight as usize, &curve_trace(tri, &c.word)?),
        };
        acc = &acc * &factor;
    }
    Ok(acc)
}
