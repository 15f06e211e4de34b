use super::{Generators, OmegaScalar, QLaurent};
use crate::error::{Error, Result};

/// Dense integer polynomial, lowest degree first.
type Dense = Vec<i64>;

fn trim(mut p: Dense) -> Dense {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

/// Exact division by a monic polynomial; panics on a nonzero remainder.
fn exact_div(num: &Dense, den: &Dense) -> Dense {
    let (q, r) = div_rem(num, den);
    assert!(r.is_empty(), "inexact cyclotomic division");
    q
}

fn div_rem(num: &Dense, den: &Dense) -> (Dense, Dense) {
    let den = trim(den.clone());
    assert_eq!(den.last(), Some(&1), "divisor must be monic");
    let mut r = trim(num.clone());
    if r.len() < den.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![0; r.len() - den.len() + 1];
    while r.len() >= den.len() {
        let shift = r.len() - den.len();
        let c = *r.last().expect("nonempty");
        q[shift] = c;
        for (i, &d) in den.iter().enumerate() {
            r[shift + i] -= c * d;
        }
        r = trim(r);
    }
    (trim(q), r)
}

/// Φ_N as a dense coefficient list.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = exact_div(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

/// Reduce a Laurent polynomial in q into ℤ[q]/(Φ_N) using q^N = 1 first.
pub fn reduce_scalar_mod_cyclotomic(c: &OmegaScalar, n: i64) -> Result<OmegaScalar> {
    if n < 1 || n % 2 == 0 {
        return Err(Error::InvalidRootOrder(n));
    }
    let mut dense = vec![0i64; n as usize];
    for (k, v) in c.terms() {
        dense[k.rem_euclid(n) as usize] += v;
    }
    let (_, r) = div_rem(&dense, &cyclotomic_polynomial(n as u64));
    Ok(OmegaScalar::from_terms(r.into_iter().enumerate().map(|(k, v)| (k as i64, v))))
}

/// Coefficientwise reduction of a q-form polynomial modulo Φ_N.
pub fn reduce_mod_cyclotomic(f: &QLaurent, n: i64) -> Result<QLaurent> {
    if n < 1 || n % 2 == 0 {
        return Err(Error::InvalidRootOrder(n));
    }
    assert_eq!(f.generators(), Generators::X, "expects a q-form polynomial");
    let mut out = QLaurent::zero(f.eps().clone()).with_generators(Generators::X);
    for (e, c) in f.terms() {
        out.add_term(e.clone(), &reduce_scalar_mod_cyclotomic(c, n)?);
    }
    Ok(out)
}
