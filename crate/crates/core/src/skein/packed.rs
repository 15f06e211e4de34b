//! Polynomials in the triangle algebras used during state-sum contraction.

use std::sync::Arc;

use crate::qtorus::{EpsilonForm, OmegaScalar, QLaurent, QMonomial};

/// Running product of arc monomials, multiplied on the right.
pub(crate) trait StatePoly: Clone {
    /// Right multiplication by `ω^power Z^p` with `p` supported on triangle `t`.
    fn mul_arc(&self, t: usize, p: [i64; 3], power: i64) -> Self;
    fn add_assign(&mut self, other: &Self);
    fn scale(&self, c: &OmegaScalar) -> Self;
}

impl StatePoly for QLaurent {
    fn mul_arc(&self, t: usize, p: [i64; 3], power: i64) -> Self {
        let mut e = vec![0i64; self.n()];
        e[3 * t..3 * t + 3].copy_from_slice(&p);
        self * &QLaurent::from_monomial(self.eps().clone(), &QMonomial::new(power, e))
    }

    fn add_assign(&mut self, other: &Self) {
        for (e, c) in other.terms() {
            self.add_term(e.clone(), c);
        }
    }

    fn scale(&self, c: &OmegaScalar) -> Self {
        QLaurent::scale(self, c)
    }
}

/// Largest triangle count whose side exponents fit in one `u128`.
pub(crate) const MAX_PACKED_TRIANGLES: usize = 5;
/// Largest side exponent magnitude representable in a biased byte.
pub(crate) const MAX_PACKED_EXPONENT: i64 = 127;

/// Sorted list of `(side exponents, ω power, coefficient)` with each side
/// exponent stored as a byte biased by 128.
#[derive(Clone, Debug, Default)]
pub(crate) struct Packed(Vec<(u128, i64, i64)>);

const BIAS: i64 = 128;

fn byte(key: u128, i: usize) -> i64 {
    ((key >> (8 * (15 - i))) & 0xff) as i64 - BIAS
}

fn set_byte(key: u128, i: usize, v: i64) -> u128 {
    assert!((-BIAS..BIAS).contains(&v), "side exponent {v} out of packed range");
    let shift = 8 * (15 - i);
    (key & !(0xffu128 << shift)) | (((v + BIAS) as u128) << shift)
}

impl Packed {
    pub(crate) fn one(sides: usize) -> Self {
        assert!(sides <= 16);
        let key = (0..16).fold(0u128, |k, i| set_byte(k, i, 0));
        Packed(vec![(key, 0, 1)])
    }

    fn normalize(mut terms: Vec<(u128, i64, i64)>) -> Self {
        terms.sort_unstable_by_key(|&(k, p, _)| (k, p));
        let mut out: Vec<(u128, i64, i64)> = Vec::with_capacity(terms.len());
        for (k, p, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == k && last.1 == p => {
                    last.2 = last.2.checked_add(c).expect("coefficient overflow");
                }
                _ => out.push((k, p, c)),
            }
        }
        out.retain(|t| t.2 != 0);
        Packed(out)
    }

    pub(crate) fn to_laurent(&self, eps: Arc<EpsilonForm>) -> QLaurent {
        let n = eps.n();
        let mut out = QLaurent::zero(eps);
        for &(k, p, c) in &self.0 {
            let e: Vec<i64> = (0..n).map(|i| byte(k, i)).collect();
            out.add_term(e, &OmegaScalar::monomial(c, p));
        }
        out
    }
}

impl StatePoly for Packed {
    fn mul_arc(&self, t: usize, p: [i64; 3], power: i64) -> Self {
        // Adding a fixed vector bytewise preserves the sort order.
        let terms = self
            .0
            .iter()
            .map(|&(k, w, c)| {
                let x = [byte(k, 3 * t), byte(k, 3 * t + 1), byte(k, 3 * t + 2)];
                // 2 Σ_{i>j} ε_ij x_i p_j within one triangle.
                let phase = 2 * (-x[1] * p[0] + x[2] * p[0] - x[2] * p[1]);
                let mut key = k;
                for i in 0..3 {
                    key = set_byte(key, 3 * t + i, x[i] + p[i]);
                }
                (key, w + power + phase, c)
            })
            .collect();
        Packed(terms)
    }

    fn add_assign(&mut self, other: &Self) {
        let (a, b) = (std::mem::take(&mut self.0), &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let (ka, kb) = ((a[i].0, a[i].1), (b[j].0, b[j].1));
            if ka < kb {
                out.push(a[i]);
                i += 1;
            } else if kb < ka {
                out.push(b[j]);
                j += 1;
            } else {
                let c = a[i].2.checked_add(b[j].2).expect("coefficient overflow");
                if c != 0 {
                    out.push((ka.0, ka.1, c));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        self.0 = out;
    }

    fn scale(&self, c: &OmegaScalar) -> Self {
        let mut terms = Vec::with_capacity(self.0.len() * c.len());
        for &(k, w, v) in &self.0 {
            for (s, x) in c.terms() {
                terms.push((k, w + s, v.checked_mul(x).expect("coefficient overflow")));
            }
        }
        Packed::normalize(terms)
    }
}
