//! Exact arithmetic in the square-root Chekhov-Fock algebra.
//!
//! Elements are noncommutative Laurent polynomials in `Z_1..Z_n` with
//! `Z_i Z_j = ω^{2ε_ij} Z_j Z_i`, stored in standard form
//! `c(ω) · Z_1^{p_1} ⋯ Z_n^{p_n}`. The q-subalgebra uses the same storage
//! with generators `X_i = Z_i²` and scalars in `q = ω⁴`.

mod cyclotomic;
mod scalar;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};

pub use cyclotomic::{cyclotomic_polynomial, reduce_mod_cyclotomic, reduce_scalar_mod_cyclotomic};
pub use scalar::OmegaScalar;

/// Skew-symmetric integer form governing the commutation relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsilonForm {
    n: usize,
    eps: Vec<i64>,
}

impl EpsilonForm {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        let mut eps = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            eps.extend_from_slice(row);
        }
        let form = Self { n, eps };
        for i in 0..n {
            for j in 0..n {
                if form.get(i, j) != -form.get(j, i) {
                    return Err(Error::Parse(format!("epsilon not skew-symmetric at ({i},{j})")));
                }
            }
        }
        Ok(form)
    }

    pub fn zero(n: usize) -> Self {
        Self { n, eps: vec![0; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.eps[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.eps.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    /// `aᵀ ε b`.
    pub fn pairing(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                s += ai * self.get(i, j) * bj;
            }
        }
        s
    }

    /// `Σ_{i<j} ε_ij p_i p_j`.
    pub fn upper_form(&self, p: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                s += self.get(i, j) * p[i] * p[j];
            }
        }
        s
    }

    /// `ε · a` as a column vector.
    pub fn apply(&self, a: &[i64]) -> Vec<i64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * a[j]).sum()).collect()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.n, found: len })
        }
    }
}

/// `ω^N Z_1^{p_1} ⋯ Z_n^{p_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMonomial {
    pub omega_power: i64,
    pub exponents: Vec<i64>,
}

impl QMonomial {
    pub fn new(omega_power: i64, exponents: Vec<i64>) -> Self {
        Self { omega_power, exponents }
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut exponents = vec![0; n];
        exponents[i] = 1;
        Self { omega_power: 0, exponents }
    }
}

/// Standard form of `a · b`.
pub fn mono_mul(a: &QMonomial, b: &QMonomial, eps: &EpsilonForm) -> Result<QMonomial> {
    eps.check_len(a.exponents.len())?;
    eps.check_len(b.exponents.len())?;
    let phase = reorder_phase(&a.exponents, &b.exponents, eps);
    Ok(QMonomial {
        omega_power: a.omega_power + b.omega_power + phase,
        exponents: a.exponents.iter().zip(&b.exponents).map(|(x, y)| x + y).collect(),
    })
}

/// ω-power picked up by `Z^a Z^b = ω^{phase} Z^{a+b}`: `2 Σ_{i>j} ε_ij a_i b_j`.
fn reorder_phase(a: &[i64], b: &[i64], eps: &EpsilonForm) -> i64 {
    let mut s = 0;
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(i) {
            s += eps.get(i, j) * ai * bj;
        }
    }
    2 * s
}

/// `[Z^p] = ω^{-Σ_{i<j} ε_ij p_i p_j} Z^p`.
pub fn weyl_order(p: &[i64], eps: &EpsilonForm) -> QMonomial {
    QMonomial { omega_power: -eps.upper_form(p), exponents: p.to_vec() }
}

/// Residue class `(N mod 4, p mod 2)`.
pub fn parity_of(m: &QMonomial) -> (u8, Vec<u8>) {
    (
        m.omega_power.rem_euclid(4) as u8,
        m.exponents.iter().map(|p| p.rem_euclid(2) as u8).collect(),
    )
}

/// Generator family of a polynomial: square roots `Z_i` over `ω`, or
/// `X_i = Z_i²` over `q = ω⁴`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generators {
    Z,
    X,
}

impl Generators {
    fn scalar_var(self) -> &'static str {
        match self {
            Generators::Z => "w",
            Generators::X => "q",
        }
    }

    fn gen_name(self) -> &'static str {
        match self {
            Generators::Z => "Z",
            Generators::X => "X",
        }
    }
}

/// One term of a polynomial: scalar coefficient times a standard-form monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub exponents: Vec<i64>,
    pub coeff: OmegaScalar,
}

impl Term {
    /// The term as `ω^N Z^p` when its coefficient is a single unit power.
    pub fn monomial(&self) -> Option<QMonomial> {
        self.coeff.as_unit_power().map(|k| QMonomial::new(k, self.exponents.clone()))
    }
}

/// Noncommutative Laurent polynomial in standard form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QLaurent {
    eps: Arc<EpsilonForm>,
    gens: Generators,
    terms: BTreeMap<Vec<i64>, OmegaScalar>,
}

impl QLaurent {
    pub fn zero(eps: Arc<EpsilonForm>) -> Self {
        Self { eps, gens: Generators::Z, terms: BTreeMap::new() }
    }

    pub fn one(eps: Arc<EpsilonForm>) -> Self {
        let n = eps.n();
        Self::from_scalar_term(eps, vec![0; n], OmegaScalar::one())
    }

    pub fn from_monomial(eps: Arc<EpsilonForm>, m: &QMonomial) -> Self {
        Self::from_scalar_term(eps, m.exponents.clone(), OmegaScalar::omega_pow(m.omega_power))
    }

    pub fn from_scalar_term(eps: Arc<EpsilonForm>, exponents: Vec<i64>, coeff: OmegaScalar) -> Self {
        assert_eq!(exponents.len(), eps.n(), "exponent vector length");
        let mut f = Self::zero(eps);
        f.add_term(exponents, &coeff);
        f
    }

    /// `[Z^p]` as a polynomial.
    pub fn weyl(eps: Arc<EpsilonForm>, p: &[i64]) -> Self {
        let m = weyl_order(p, &eps);
        Self::from_monomial(eps, &m)
    }

    pub fn generator(eps: Arc<EpsilonForm>, i: usize) -> Self {
        let n = eps.n();
        Self::from_monomial(eps, &QMonomial::generator(n, i))
    }

    pub fn with_generators(mut self, gens: Generators) -> Self {
        self.gens = gens;
        self
    }

    pub fn generators(&self) -> Generators {
        self.gens
    }

    pub fn eps(&self) -> &Arc<EpsilonForm> {
        &self.eps
    }

    pub fn n(&self) -> usize {
        self.eps.n()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exponents: Vec<i64>, coeff: &OmegaScalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exponents) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&exponents);
                }
            }
            None => {
                self.terms.insert(exponents, coeff.clone());
            }
        }
    }

    pub fn coeff(&self, exponents: &[i64]) -> OmegaScalar {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<i64>, &OmegaScalar)> {
        self.terms.iter()
    }

    /// Terms in the canonical display order (descending lex).
    pub fn canonical_terms(&self) -> Vec<Term> {
        self.terms
            .iter()
            .rev()
            .map(|(e, c)| Term { exponents: e.clone(), coeff: c.clone() })
            .collect()
    }

    fn same_algebra(&self, other: &Self) {
        assert!(
            self.gens == other.gens && (Arc::ptr_eq(&self.eps, &other.eps) || self.eps == other.eps),
            "operands live in different algebras"
        );
    }

    pub fn scale(&self, c: &OmegaScalar) -> Self {
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).filter(|(_, v)| !v.is_zero()).collect();
        Self { eps: self.eps.clone(), gens: self.gens, terms }
    }

    /// Multiply on the left by the scalar-free monomial `Z^p`.
    pub fn left_mul_monomial(&self, p: &[i64]) -> Self {
        self.left_mul_shifted(p, 0)
    }

    /// Multiply on the left by the Weyl-ordered monomial `[Z^p]`.
    pub fn weyl_left_mul(&self, p: &[i64]) -> Self {
        self.left_mul_shifted(p, -self.eps.upper_form(p))
    }

    fn left_mul_shifted(&self, p: &[i64], shift: i64) -> Self {
        // reorder_phase(p, e) = 2 Σ_{i>j} ε_ij p_i e_j = v · e.
        let n = self.n();
        let v: Vec<i64> = (0..n).map(|j| 2 * (j + 1..n).map(|i| self.eps.get(i, j) * p[i]).sum::<i64>()).collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let phase: i64 = v.iter().zip(e).map(|(x, y)| x * y).sum();
                (p.iter().zip(e).map(|(a, b)| a + b).collect(), c.shift(phase + shift))
            })
            .collect();
        Self { eps: self.eps.clone(), gens: self.gens, terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.eps.clone()).with_generators(self.gens);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `f·g − g·f`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Antiautomorphism fixing each generator and inverting the scalar variable.
    pub fn star(&self) -> Self {
        let mut out = Self { eps: self.eps.clone(), gens: self.gens, terms: BTreeMap::new() };
        for (e, v) in &self.terms {
            let shift = -2 * self.eps.upper_form(e);
            out.add_term(e.clone(), &v.invert_variable().shift(shift));
        }
        out
    }

    /// Evaluate the scalar variable at 1; the result is commutative.
    pub fn classical_limit(&self) -> Self {
        let eps = Arc::new(EpsilonForm::zero(self.n()));
        let mut out = Self { eps, gens: self.gens, terms: BTreeMap::new() };
        for (e, v) in &self.terms {
            out.add_term(e.clone(), &OmegaScalar::monomial(v.classical(), 0));
        }
        out
    }

    /// Reinterpret over a different commutation form with the same exponents
    /// and coefficients.
    pub fn rebase(&self, eps: Arc<EpsilonForm>) -> Self {
        assert_eq!(eps.n(), self.n());
        Self { eps, gens: self.gens, terms: self.terms.clone() }
    }

    /// Componentwise-dominating term.
    pub fn highest_term(&self) -> Result<Term> {
        let (cand, coeff) = self.terms.iter().next_back().ok_or(Error::ZeroPolynomial)?;
        // The lex-maximum is the only possible dominating vector.
        for e in self.terms.keys() {
            if e.iter().zip(cand).any(|(x, y)| x > y) {
                return Err(Error::NoHighestTerm);
            }
        }
        Ok(Term { exponents: cand.clone(), coeff: coeff.clone() })
    }

    /// Lex-maximal term for the variable priority `order` (0-based indices).
    pub fn lex_highest_term(&self, order: &[usize]) -> Result<Term> {
        if self.terms.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let key = |e: &Vec<i64>| order.iter().map(|&i| e[i]).collect::<Vec<_>>();
        let (e, c) = self.terms.iter().max_by(|a, b| key(a.0).cmp(&key(b.0))).expect("nonempty");
        Ok(Term { exponents: e.clone(), coeff: c.clone() })
    }

    /// Split into parity-homogeneous pieces keyed by `(N mod 4, p mod 2)`.
    pub fn parity_decompose(&self) -> BTreeMap<(u8, Vec<u8>), QLaurent> {
        let mut out: BTreeMap<(u8, Vec<u8>), QLaurent> = BTreeMap::new();
        for (e, v) in &self.terms {
            for (k, c) in v.terms() {
                let key = parity_of(&QMonomial::new(k, e.clone()));
                out.entry(key)
                    .or_insert_with(|| Self { eps: self.eps.clone(), gens: self.gens, terms: BTreeMap::new() })
                    .add_term(e.clone(), &OmegaScalar::monomial(c, k));
            }
        }
        out
    }

    /// Rewrite `ω^{4k} Z^{2a}` as `q^k X^a`.
    pub fn to_q_form(&self) -> Result<Self> {
        assert_eq!(self.gens, Generators::Z, "already in q-form");
        let mut terms = BTreeMap::new();
        for (e, v) in &self.terms {
            if e.iter().any(|p| p.rem_euclid(2) != 0) || !v.exponents_divisible_by(4) {
                return Err(Error::NotInQSubalgebra(render_term(Generators::Z, e, v)));
            }
            terms.insert(e.iter().map(|p| p / 2).collect(), v.divide_exponents(4));
        }
        Ok(Self { eps: self.eps.clone(), gens: Generators::X, terms })
    }

    /// Inverse of [`QLaurent::to_q_form`].
    pub fn from_q_form(&self) -> Self {
        assert_eq!(self.gens, Generators::X);
        let mut out = Self { eps: self.eps.clone(), gens: Generators::Z, terms: BTreeMap::new() };
        for (e, v) in &self.terms {
            out.add_term(e.iter().map(|p| 2 * p).collect(), &v.multiply_exponents(4));
        }
        out
    }

    /// Substitute every generator by its `k`-th power (classical polynomials).
    pub fn scale_exponents(&self, k: i64) -> Self {
        let mut out = Self { eps: self.eps.clone(), gens: self.gens, terms: BTreeMap::new() };
        for (e, v) in &self.terms {
            out.add_term(e.iter().map(|p| p * k).collect(), v);
        }
        out
    }

    pub fn map_coefficients<F: Fn(&OmegaScalar) -> OmegaScalar>(&self, f: F) -> Self {
        let mut out = Self { eps: self.eps.clone(), gens: self.gens, terms: BTreeMap::new() };
        for (e, v) in &self.terms {
            out.add_term(e.clone(), &f(v));
        }
        out
    }

    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.terms.values().all(|c| c.is_nonnegative())
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (e, v) in self.terms.iter().rev() {
            for (k, c) in v.terms().rev() {
                let atom = render_atom(self.gens, e, k, c.abs());
                if first {
                    if c < 0 {
                        out.push('-');
                    }
                    first = false;
                } else {
                    out.push_str(if c < 0 { " - " } else { " + " });
                }
                out.push_str(&atom);
            }
        }
        out
    }

    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let var = match self.gens {
            Generators::Z => "\\omega",
            Generators::X => "q",
        };
        let mut out = String::new();
        let mut first = true;
        for (e, v) in self.terms.iter().rev() {
            for (k, c) in v.terms().rev() {
                if first {
                    if c < 0 {
                        out.push('-');
                    }
                    first = false;
                } else {
                    out.push_str(if c < 0 { " - " } else { " + " });
                }
                let mut parts: Vec<String> = Vec::new();
                if c.abs() != 1 {
                    parts.push(c.abs().to_string());
                }
                if k != 0 {
                    parts.push(format!("{var}^{{{k}}}"));
                }
                for (i, &p) in e.iter().enumerate() {
                    match p {
                        0 => {}
                        1 => parts.push(format!("{}_{{{}}}", self.gens.gen_name(), i + 1)),
                        p => parts.push(format!("{}_{{{}}}^{{{}}}", self.gens.gen_name(), i + 1, p)),
                    }
                }
                if parts.is_empty() {
                    parts.push("1".to_string());
                }
                out.push_str(&parts.join(" "));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .rev()
            .map(|(e, v)| {
                let coeff: Vec<[i64; 2]> = v.terms().rev().map(|(k, c)| [k, c]).collect();
                json!({ "exponents": e, "coefficient": coeff })
            })
            .collect();
        json!({
            "generators": self.gens.gen_name(),
            "scalar": self.gens.scalar_var(),
            "n": self.n(),
            "terms": terms,
        })
    }
}

fn render_monomial(gens: Generators, e: &[i64]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &p)| p != 0)
        .map(|(i, &p)| {
            if p == 1 {
                format!("{}{}", gens.gen_name(), i + 1)
            } else {
                format!("{}{}^{}", gens.gen_name(), i + 1, p)
            }
        })
        .collect();
    parts.join("*")
}

fn render_atom(gens: Generators, e: &[i64], k: i64, mag: i64) -> String {
    let mono = render_monomial(gens, e);
    let mut scalar = String::new();
    if mag != 1 {
        scalar.push_str(&mag.to_string());
    }
    if k != 0 {
        if !scalar.is_empty() {
            scalar.push('*');
        }
        scalar.push_str(&format!("{}^{}", gens.scalar_var(), k));
    }
    match (scalar.is_empty(), mono.is_empty()) {
        (true, true) => "1".to_string(),
        (true, false) => mono,
        (false, true) => scalar,
        (false, false) => format!("{scalar} * {mono}"),
    }
}

fn render_term(gens: Generators, e: &[i64], v: &OmegaScalar) -> String {
    format!("({}) * {}", v.render(gens.scalar_var()), render_monomial(gens, e))
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        self.same_algebra(rhs);
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), v);
        }
        out
    }
}

impl Sub for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        self.same_algebra(rhs);
        let mut out = self.clone();
        for (e, v) in &rhs.terms {
            out.add_term(e.clone(), &-v);
        }
        out
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        self.scale(&OmegaScalar::monomial(-1, 0))
    }
}

impl Mul for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        self.same_algebra(rhs);
        let n = self.n();
        let mut acc: HashMap<Vec<i64>, OmegaScalar> = HashMap::with_capacity(self.terms.len().max(rhs.terms.len()));
        for (a, ca) in &self.terms {
            // reorder_phase(a, b) = u · b with u_j = 2 Σ_{i>j} ε_ij a_i.
            let u: Vec<i64> = (0..n).map(|j| 2 * (j + 1..n).map(|i| self.eps.get(i, j) * a[i]).sum::<i64>()).collect();
            for (b, cb) in &rhs.terms {
                let phase: i64 = u.iter().zip(b).map(|(x, y)| x * y).sum();
                let e: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let slot = acc.entry(e).or_default();
                for (ka, va) in ca.terms() {
                    for (kb, vb) in cb.terms() {
                        slot.add_term(ka + kb + phase, va.checked_mul(vb).expect("coefficient overflow"));
                    }
                }
            }
        }
        let terms: BTreeMap<Vec<i64>, OmegaScalar> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        QLaurent { eps: self.eps.clone(), gens: self.gens, terms }
    }
}

impl Add for QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: QLaurent) -> QLaurent {
        &self + &rhs
    }
}

impl Sub for QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: QLaurent) -> QLaurent {
        &self - &rhs
    }
}

impl Mul for QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: QLaurent) -> QLaurent {
        &self * &rhs
    }
}
