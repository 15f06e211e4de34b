//! The canonical maps from integral laminations into the quantum torus, the
//! structure constants of their products, and checks of their defining laws.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::classical::{chebyshev_eval, classical_i};
use crate::error::{Error, Result};
use crate::lamination::{format_coords, from_coords, CurveWord, IntegralLamination};
use crate::qtorus::{reduce_mod_cyclotomic, Generators, OmegaScalar, QLaurent};
use crate::skein::quantum_trace;
use crate::surface::IdealTriangulation;

/// Upper bound on peeling steps before declaring a failure.
const MAX_PEEL_STEPS: usize = 1_000_000;

/// Engine bound to one triangulation, caching curve traces and their products.
pub struct Duality {
    tri: IdealTriangulation,
    traces: Mutex<HashMap<CurveWord, QLaurent>>,
    products: Mutex<HashMap<Vec<(CurveWord, i64)>, Arc<QLaurent>>>,
}

impl Duality {
    pub fn new(tri: IdealTriangulation) -> Self {
        Self {
            tri,
            traces: Mutex::new(HashMap::new()),
            products: Mutex::new(HashMap::new()),
        }
    }

    pub fn triangulation(&self) -> &IdealTriangulation {
        &self.tri
    }

    fn trace(&self, word: &CurveWord) -> Result<QLaurent> {
        if let Some(q) = self.traces.lock().expect("trace cache").get(word) {
            return Ok(q.clone());
        }
        let q = quantum_trace(&self.tri, word)?;
        self.traces.lock().expect("trace cache").insert(word.clone(), q.clone());
        Ok(q)
    }

    /// Image of a canonical lamination in the square-root quantum torus.
    pub fn i_omega(&self, l: &IntegralLamination) -> Result<QLaurent> {
        let curves: Vec<(CurveWord, i64)> =
            l.components().iter().filter(|c| c.peripheral.is_none()).map(|c| (c.word.clone(), c.weight)).collect();
        let core = self.curve_product(&curves)?;
        // Peripheral images are central Weyl monomials; their product is the Weyl monomial of the sum.
        let mut p = vec![0i64; self.tri.num_edges()];
        for c in l.components().iter().filter(|c| c.peripheral.is_some()) {
            for (x, m) in p.iter_mut().zip(&c.mu) {
                *x += m * c.weight;
            }
        }
        Ok(core.weyl_left_mul(&p))
    }

    /// Product of `F_k` of the quantum traces of disjoint nonperipheral curves.
    fn curve_product(&self, curves: &[(CurveWord, i64)]) -> Result<Arc<QLaurent>> {
        if let Some(q) = self.products.lock().expect("product cache").get(curves) {
            return Ok(q.clone());
        }
        // Disjoint curves have commuting images, so the order is immaterial.
        let factors: Vec<QLaurent> = curves
            .par_iter()
            .map(|(w, k)| Ok(chebyshev_eval(*k as usize, &self.trace(w)?)))
            .collect::<Result<_>>()?;
        let q = Arc::new(factors.iter().fold(QLaurent::one(self.tri.epsilon()), |acc, f| &acc * f));
        self.products.lock().expect("product cache").insert(curves.to_vec(), q.clone());
        Ok(q)
    }

    /// Image of an integral-coordinate lamination, written in `q` and `X_i = Z_i²`.
    pub fn i_hat_q(&self, l: &IntegralLamination) -> Result<QLaurent> {
        l.integral_coords()?;
        self.i_omega(l)?
            .to_q_form()
            .map_err(|e| Error::InternalParityViolation(format!("({}): {e}", l.coords_string())))
    }

    /// `q^{-Σ_{i<j} ε_ij a_i a_j} X^a`.
    pub fn weyl_x(&self, a: &[i64]) -> QLaurent {
        let eps = self.tri.epsilon();
        let phase = -eps.upper_form(a);
        QLaurent::from_scalar_term(eps, a.to_vec(), OmegaScalar::monomial(1, phase)).with_generators(Generators::X)
    }

    /// Expand `Î^q(ℓ)Î^q(ℓ′)` in the basis `Î^q(ℓ″)` by peeling lex-highest terms.
    pub fn product_expand(&self, l1: &IntegralLamination, l2: &IntegralLamination) -> Result<StructureConstantTable> {
        let n = self.tri.num_edges();
        let order: Vec<usize> = (0..n).collect();
        let key = |e: &[i64]| order.iter().map(|&i| e[i]).collect::<Vec<_>>();
        let mut rest = &self.i_hat_q(l1)? * &self.i_hat_q(l2)?;
        let mut rows = Vec::new();
        let mut last: Option<Vec<i64>> = None;
        while !rest.is_zero() {
            if rows.len() >= MAX_PEEL_STEPS {
                return Err(Error::PeelFailure("too many peeling steps".into()));
            }
            let top = rest.lex_highest_term(&order)?;
            if let Some(prev) = &last {
                if key(&top.exponents) >= key(prev) {
                    return Err(Error::PeelFailure(format!("lex-highest term did not decrease at {:?}", top.exponents)));
                }
            }
            let mu: Vec<i64> = top.exponents.iter().map(|a| 2 * a).collect();
            let l = from_coords(&self.tri, &mu).map_err(|e| Error::PeelFailure(format!("exponent {:?}: {e}", top.exponents)))?;
            let image = self.i_hat_q(&l)?;
            let lead = image.coeff(&top.exponents).as_unit_power().ok_or_else(|| {
                Error::PeelFailure(format!("leading coefficient of {} is not a unit", l.coords_string()))
            })?;
            let c = top.coeff.shift(-lead);
            rest = &rest - &image.scale(&c);
            last = Some(top.exponents);
            rows.push((l, c));
        }
        Ok(StructureConstantTable { rows })
    }

    /// `Σ c·Î^q(ℓ″)` over a table.
    pub fn reconstruct(&self, table: &StructureConstantTable) -> Result<QLaurent> {
        let mut acc = QLaurent::zero(self.tri.epsilon()).with_generators(Generators::X);
        for (l, c) in &table.rows {
            acc = &acc + &self.i_hat_q(l)?.scale(c);
        }
        Ok(acc)
    }

    /// Compares `Î^q(Nℓ)` with `Î¹(ℓ)(X^N)` in `ℤ[q]/(Φ_N)`.
    pub fn frobenius_check(&self, l: &IntegralLamination, root: i64) -> Result<bool> {
        let (lhs, rhs) = self.frobenius_sides(l, root)?;
        Ok(lhs == rhs)
    }

    /// Both sides of the Frobenius identity, reduced modulo `Φ_N`.
    pub fn frobenius_sides(&self, l: &IntegralLamination, root: i64) -> Result<(QLaurent, QLaurent)> {
        if root < 1 || root % 2 == 0 {
            return Err(Error::InvalidRootOrder(root));
        }
        l.integral_coords()?;
        let lhs = reduce_mod_cyclotomic(&self.i_hat_q(&l.scale(root))?, root)?;
        let classical = classical_i(&self.tri, l)?
            .to_q_form()
            .map_err(|e| Error::InternalParityViolation(format!("classical image: {e}")))?;
        let rhs = reduce_mod_cyclotomic(&classical.rebase(self.tri.epsilon()).scale_exponents(root), root)?;
        Ok((lhs, rhs))
    }

    /// Checks `Î^q(ℓ + a) = q^{-Σ_{i<j} ε_ij a_i a_j} X^a Î^q(ℓ)` for a kernel vector `a`,
    /// and that `a` is an integer combination of peripheral coordinate vectors.
    pub fn peripheral_shift_check(&self, l: &IntegralLamination, a: &[i64]) -> Result<bool> {
        let n = self.tri.num_edges();
        if a.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: a.len() });
        }
        let image = self.tri.epsilon().apply(a);
        if image.iter().any(|&x| x != 0) {
            return Err(Error::KernelViolation(image));
        }
        let mu: Vec<i64> = l.coords_doubled().iter().zip(a).map(|(m, x)| m + 2 * x).collect();
        let shifted = from_coords(&self.tri, &mu)?;
        let lhs = self.i_hat_q(&shifted)?;
        let rhs = &self.weyl_x(a) * &self.i_hat_q(l)?;
        Ok(lhs == rhs && self.peripheral_combination(a)?.is_some())
    }

    /// Integers `c_p` with `2a = Σ c_p μ_p`, if they exist.
    pub fn peripheral_combination(&self, a: &[i64]) -> Result<Option<Vec<i64>>> {
        let cols: Vec<Vec<i64>> =
            (0..self.tri.num_punctures()).map(|p| self.tri.peripheral_vector(p)).collect::<Result<_>>()?;
        let target: Vec<i64> = a.iter().map(|x| 2 * x).collect();
        Ok(solve_integral(&cols, &target))
    }

    /// Runs the four structural checks on `Î^q(ℓ)` and reports each outcome.
    pub fn verify_bundle(&self, l: &IntegralLamination) -> VerifyReport {
        let start = Instant::now();
        let mut checks = Vec::new();
        let mut highest = None;
        let mut positive = None;
        let coords = l.coords_string();
        let fail = |name: &'static str, e: &Error| PropertyCheck { name, passed: false, detail: e.to_string() };

        match (self.i_omega(l), classical_i(&self.tri, l)) {
            (Ok(q), Ok(c)) => {
                let ok = q.classical_limit() == c;
                checks.push(PropertyCheck { name: "classical-limit", passed: ok, detail: c.to_text() });
            }
            (Err(e), _) | (_, Err(e)) => checks.push(fail("classical-limit", &e)),
        }
        match l.integral_coords() {
            Err(e) => {
                for name in ["highest-term", "q-coefficients", "star-invariance"] {
                    checks.push(fail(name, &e));
                }
            }
            Ok(a) => match self.i_hat_q(l) {
                Err(e) => {
                    for name in ["highest-term", "q-coefficients", "star-invariance"] {
                        checks.push(fail(name, &e));
                    }
                }
                Ok(q) => {
                    let expect = self.weyl_x(&a);
                    match q.highest_term() {
                        Ok(h) => {
                            let got = QLaurent::from_scalar_term(self.tri.epsilon(), h.exponents, h.coeff)
                                .with_generators(Generators::X);
                            highest = Some(got.to_text());
                            checks.push(PropertyCheck { name: "highest-term", passed: got == expect, detail: got.to_text() });
                        }
                        Err(e) => checks.push(fail("highest-term", &e)),
                    }
                    checks.push(PropertyCheck { name: "q-coefficients", passed: true, detail: format!("{} terms", q.len()) });
                    let star = q.from_q_form().star() == q.from_q_form();
                    checks.push(PropertyCheck { name: "star-invariance", passed: star, detail: String::new() });
                    positive = Some(q.all_coefficients_nonnegative());
                }
            },
        }
        VerifyReport { coords, checks, highest, positive, elapsed: start.elapsed() }
    }
}

/// Rows `(ℓ″, c)` of a product expansion, in peeling order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstantTable {
    pub rows: Vec<(IntegralLamination, OmegaScalar)>,
}

impl StructureConstantTable {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (l, c) in &self.rows {
            writeln!(out, "({})\t{}", l.coords_string(), c.render("q")).expect("string write");
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("lamination,coefficient\n");
        for (l, c) in &self.rows {
            writeln!(out, "\"{}\",\"{}\"", l.coords_string(), c.render("q")).expect("string write");
        }
        out
    }

    pub fn to_latex(&self) -> String {
        let mut out = String::from("\\begin{tabular}{ll}\n");
        for (l, c) in &self.rows {
            writeln!(out, "$({})$ & ${}$ \\\\", l.coords_string(), c.render("q")).expect("string write");
        }
        out.push_str("\\end{tabular}\n");
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|(l, c)| {
                let coeff: Vec<[i64; 2]> = c.terms().rev().map(|(k, v)| [k, v]).collect();
                json!({ "lamination": format_coords(&l.coords_doubled()), "coefficient": coeff, "text": c.render("q") })
            })
            .collect();
        json!({ "rows": rows })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub coords: String,
    pub checks: Vec<PropertyCheck>,
    pub highest: Option<String>,
    /// Observed sign of the coefficients; never asserted.
    pub positive: Option<bool>,
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.checks.len()
    }

    pub fn to_text(&self, timing: bool) -> String {
        let mut out = format!("lamination ({})\n", self.coords);
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(out, "  {status}  {}", c.name).expect("string write");
            } else {
                writeln!(out, "  {status}  {}: {}", c.name, c.detail).expect("string write");
            }
        }
        if let Some(p) = self.positive {
            writeln!(out, "  note  coefficients nonnegative: {p}").expect("string write");
        }
        writeln!(out, "{}/{} pass", self.passed(), self.checks.len()).expect("string write");
        if timing {
            writeln!(out, "elapsed {:.3} ms", self.elapsed.as_secs_f64() * 1e3).expect("string write");
        }
        out
    }

    pub fn to_json(&self, timing: bool) -> Value {
        let checks: Vec<Value> =
            self.checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect();
        let mut v = json!({
            "lamination": self.coords,
            "checks": checks,
            "highest_term": self.highest,
            "coefficients_nonnegative": self.positive,
            "passed": self.passed(),
            "total": self.checks.len(),
        });
        if timing {
            v["elapsed_ms"] = json!(self.elapsed.as_secs_f64() * 1e3);
        }
        v
    }
}

/// Integer solution `x` of `Σ x_j cols[j] = target`, found by exact rational elimination.
fn solve_integral(cols: &[Vec<i64>], target: &[i64]) -> Option<Vec<i64>> {
    let rows = target.len();
    let k = cols.len();
    // Augmented matrix over ℚ as (numerator, denominator) with positive denominators.
    let mut m: Vec<Vec<(i128, i128)>> =
        (0..rows).map(|i| (0..k).map(|j| (cols[j][i] as i128, 1)).chain([(target[i] as i128, 1)]).collect()).collect();
    let norm = |(p, q): (i128, i128)| {
        let g = gcd(p.abs(), q.abs()).max(1);
        let s = if q < 0 { -1 } else { 1 };
        (s * p / g, s * q / g)
    };
    let sub = |a: (i128, i128), b: (i128, i128)| norm((a.0 * b.1 - b.0 * a.1, a.1 * b.1));
    let mul = |a: (i128, i128), b: (i128, i128)| norm((a.0 * b.0, a.1 * b.1));
    let div = |a: (i128, i128), b: (i128, i128)| norm((a.0 * b.1, a.1 * b.0));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..rows).find(|&i| m[i][c].0 != 0) else { continue };
        m.swap(r, p);
        let pv = m[r][c];
        for j in 0..=k {
            m[r][j] = div(m[r][j], pv);
        }
        for i in 0..rows {
            if i != r && m[i][c].0 != 0 {
                let f = m[i][c];
                for j in 0..=k {
                    m[i][j] = sub(m[i][j], mul(f, m[r][j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| row[k].0 != 0) {
        return None;
    }
    let mut x = vec![0i64; k];
    for (i, &c) in pivots.iter().enumerate() {
        let (p, q) = m[i][k];
        if p % q != 0 {
            return None;
        }
        x[c] = (p / q) as i64;
    }
    Some(x)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests;
