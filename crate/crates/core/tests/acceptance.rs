//! Acceptance criteria 1 to 10. Prints one line per criterion and exits
//! nonzero if any fails. All comparisons are exact.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qduality::classical::{chebyshev, curve_trace, inverse_chebyshev, IntPolynomial};
use qduality::duality::Duality;
use qduality::lamination::{coords, from_coords, peripheral_word, trace_word, CurveWord, IntegralLamination};
use qduality::qtorus::{Generators, OmegaScalar, QLaurent};
use qduality::skein::{peripheral_good_position, quantum_trace, quantum_trace_from, state_sum};
use qduality::surface::IdealTriangulation;
use qduality::Error;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    passed: bool,
    detail: String,
}

fn surfaces() -> Vec<(&'static str, IdealTriangulation)> {
    vec![("punctured_torus", IdealTriangulation::punctured_torus()), ("sphere_4", IdealTriangulation::sphere_4())]
}

/// All vectors of length `n` with entries in `lo..=hi`, first entry fastest.
fn box_vectors(n: usize, lo: i64, hi: i64) -> impl Iterator<Item = Vec<i64>> {
    let base = (hi - lo + 1) as usize;
    (0..base.pow(n as u32)).map(move |mut code| {
        (0..n)
            .map(|_| {
                let d = (code % base) as i64 + lo;
                code /= base;
                d
            })
            .collect()
    })
}

/// Simple closed curves (weight-one single components) with at most `max` crossings.
fn curves_up_to(tri: &IdealTriangulation, max: i64) -> Vec<CurveWord> {
    box_vectors(tri.num_edges(), 0, max)
        .filter(|mu| mu.iter().sum::<i64>() <= max)
        .filter_map(|mu| from_coords(tri, &mu).ok())
        .filter_map(|l| match l.components() {
            [c] if c.weight == 1 => Some(c.word.clone()),
            _ => None,
        })
        .collect()
}

fn lam(tri: &IdealTriangulation, a: &[i64]) -> IntegralLamination {
    let mu: Vec<i64> = a.iter().map(|x| 2 * x).collect();
    from_coords(tri, &mu).expect("realizable")
}

/// `Σ_{i<j} ε_ij a_i b_j` read directly off the exchange matrix.
fn upper(tri: &IdealTriangulation, a: &[i64]) -> i64 {
    let eps = tri.epsilon_matrix().rows();
    let n = a.len();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| eps[i][j] * a[i] * a[j]).sum()
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration, bool) {
    let t = Instant::now();
    let out = f();
    let elapsed = t.elapsed();
    let in_time = limit.map_or(true, |l| elapsed < l);
    (out, elapsed, in_time)
}

fn criterion_1() -> Outcome {
    let mut count = 0;
    let mut bad = Vec::new();
    for (name, tri) in surfaces() {
        for w in curves_up_to(&tri, 8) {
            count += 1;
            let q = quantum_trace(&tri, &w).expect("trace");
            if q.classical_limit() != curve_trace(&tri, &w).expect("classical trace") {
                bad.push(format!("{name}:{w}"));
            }
        }
    }
    Outcome { passed: bad.is_empty() && count > 0, detail: format!("{count} curves, mismatches {bad:?}") }
}

/// Criteria 2 to 4 share one pass over the lamination box.
fn criteria_2_to_4() -> [Outcome; 3] {
    let (mut n_lam, mut bad2, mut bad3, mut bad4) = (0, Vec::new(), Vec::new(), Vec::new());
    for (name, tri) in surfaces() {
        let d = Duality::new(tri.clone());
        let n = tri.num_edges();
        for a in box_vectors(n, 0, 3) {
            n_lam += 1;
            let l = lam(&tri, &a);
            let z = d.i_omega(&l).expect("image");
            let tag = format!("{name}:{a:?}");
            // Criterion 3: star invariance and a single parity class (0, 0).
            let classes: Vec<_> = z.parity_decompose().into_keys().collect();
            if z.star() != z || classes != vec![(0u8, vec![0u8; n])] {
                bad3.push(tag.clone());
            }
            // Criterion 4 and then criterion 2 on the q-form.
            match z.to_q_form() {
                Err(_) => bad4.push(tag.clone()),
                Ok(q) => {
                    let ok = q.generators() == Generators::X
                        && q.highest_term().is_ok_and(|h| h.exponents == a && h.coeff == OmegaScalar::monomial(1, -upper(&tri, &a)));
                    if !ok {
                        bad2.push(tag);
                    }
                }
            }
        }
    }
    let out = |bad: Vec<String>| Outcome { passed: bad.is_empty(), detail: format!("{n_lam} laminations, failures {bad:?}") };
    [out(bad2), out(bad3), out(bad4)]
}

fn criterion_5() -> Outcome {
    let mut pairs: Vec<(IdealTriangulation, Vec<i64>, Vec<i64>)> = Vec::new();
    let pt = IdealTriangulation::punctured_torus();
    for a in box_vectors(3, 0, 1) {
        for b in box_vectors(3, 0, 1) {
            pairs.push((pt.clone(), a.clone(), b));
        }
    }
    let s4 = IdealTriangulation::sphere_4();
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..12 {
        let a: Vec<i64> = (0..6).map(|_| rng.gen_range(0..=1)).collect();
        let b: Vec<i64> = (0..6).map(|_| rng.gen_range(0..=1)).collect();
        pairs.push((s4.clone(), a, b));
    }
    let mut bad = Vec::new();
    let mut rows = 0;
    for (tri, a, b) in &pairs {
        let d = Duality::new(tri.clone());
        let (l1, l2) = (lam(tri, a), lam(tri, b));
        let ok = match d.product_expand(&l1, &l2) {
            Err(_) => false,
            Ok(t) => {
                rows += t.rows.len();
                let integral = t.rows.iter().all(|(l, c)| l.integral_coords().is_ok() && !c.is_zero());
                let classical = t.rows.iter().all(|(_, c)| c.classical() >= 0);
                let prod = &d.i_hat_q(&l1).unwrap() * &d.i_hat_q(&l2).unwrap();
                integral && classical && d.reconstruct(&t).is_ok_and(|r| r == prod)
            }
        };
        if !ok {
            bad.push(format!("{a:?}*{b:?}"));
        }
    }
    Outcome { passed: bad.is_empty() && pairs.len() >= 20, detail: format!("{} pairs, {rows} rows, failures {bad:?}", pairs.len()) }
}

fn criterion_6() -> Outcome {
    let tri = IdealTriangulation::punctured_torus();
    let d = Duality::new(tri.clone());
    let mut bad = Vec::new();
    // Doubled curve, peripheral loop, and curve plus peripheral loop.
    for a in [[0, 1, 1], [1, 1, 1], [1, 2, 2]] {
        let l = lam(&tri, &a);
        for n in [1, 3, 5] {
            if !d.frobenius_check(&l, n).unwrap_or(false) {
                bad.push(format!("{a:?} N={n}"));
            }
        }
    }
    let two = lam(&tri, &[1, 2, 2]).components().len() == 2;
    Outcome { passed: bad.is_empty() && two, detail: format!("9 checks, failures {bad:?}") }
}

fn criterion_7() -> Outcome {
    let mut bad = Vec::new();
    let mut kernel = 0;
    for (name, tri) in surfaces() {
        let eps = tri.epsilon();
        let d = Duality::new(tri.clone());
        for p in 0..tri.num_punctures() {
            let mu = tri.peripheral_vector(p).unwrap();
            let neg: Vec<i64> = mu.iter().map(|x| -x).collect();
            let mono = |v: &[i64]| QLaurent::from_scalar_term(eps.clone(), v.to_vec(), OmegaScalar::omega_pow(-upper(&tri, v)));
            let expect = &mono(&mu) + &mono(&neg);
            let w = peripheral_word(&tri, p).unwrap();
            if state_sum(&tri, &peripheral_good_position(&tri, &w).unwrap()).unwrap() != expect {
                bad.push(format!("{name}: two-term law at puncture {p}"));
            }
            let image = d.i_omega(&from_coords(&tri, &mu).unwrap()).unwrap();
            if (0..tri.num_edges()).any(|i| !image.commutator(&QLaurent::generator(eps.clone(), i)).is_zero()) {
                bad.push(format!("{name}: puncture {p} not central"));
            }
        }
        let base = curves_up_to(&tri, 6).into_iter().find(|w| {
            trace_word(&tri, w).is_ok() && qduality::lamination::is_peripheral(&tri, w).unwrap().is_none()
        });
        let base = base.map(|w| w.crossings(tri.num_edges())).expect("a nonperipheral curve");
        let l = from_coords(&tri, &base.iter().map(|x| 2 * x).collect::<Vec<_>>()).unwrap();
        let rows = tri.epsilon_matrix().rows();
        for a in box_vectors(tri.num_edges(), -2, 2) {
            let in_kernel = rows.iter().all(|r| r.iter().zip(&a).map(|(x, y)| x * y).sum::<i64>() == 0);
            match d.peripheral_shift_check(&l, &a) {
                Ok(true) if in_kernel => kernel += 1,
                Err(Error::KernelViolation(_)) if !in_kernel => {}
                other => bad.push(format!("{name}: shift {a:?} gave {other:?}")),
            }
        }
    }
    Outcome { passed: bad.is_empty() && kernel > 2, detail: format!("{kernel} kernel shifts, failures {bad:?}") }
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    let mut rng = StdRng::seed_from_u64(8);
    let mul = |a: [[i64; 2]; 2], b: [[i64; 2]; 2]| {
        let mut c = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        c
    };
    for m in 0..200 {
        // Products of elementary matrices have determinant one.
        let mut x = [[1, 0], [0, 1]];
        for _ in 0..3 {
            let k = rng.gen_range(-2..=2);
            let e = if rng.gen_bool(0.5) { [[1, k], [0, 1]] } else { [[1, 0], [k, 1]] };
            x = mul(x, e);
        }
        let tr = x[0][0] + x[1][1];
        let mut p = [[1, 0], [0, 1]];
        for k in 0..=6 {
            if p[0][0] + p[1][1] != chebyshev(k).eval(tr) {
                bad.push(format!("matrix {m} power {k}"));
            }
            p = mul(p, x);
        }
    }
    for s in 1..=4 {
        for t in 1..=4 {
            if chebyshev(s).compose(&chebyshev(t)) != chebyshev(s * t) {
                bad.push(format!("F_{s} o F_{t}"));
            }
        }
    }
    for k in 1..=10 {
        let c = inverse_chebyshev(k).unwrap();
        let mut sum = IntPolynomial::constant(c.coeff(0));
        for i in 1..=k {
            sum = &sum + &chebyshev(i).scale(c.coeff(i));
        }
        if sum != IntPolynomial::power(k) || c.coeff(k) != 1 {
            bad.push(format!("inverse k={k}"));
        }
    }
    Outcome { passed: bad.is_empty(), detail: format!("failures {bad:?}") }
}

/// Independent realizability test: every triangle has an even crossing total.
/// Negative corner counts are absorbed by negative peripheral weights.
fn parity_ok(tri: &IdealTriangulation, mu: &[i64]) -> bool {
    tri.triangles().iter().all(|t| (mu[t[0]] + mu[t[1]] + mu[t[2]]).rem_euclid(2) == 0)
}

fn criterion_9() -> Outcome {
    let mut bad = Vec::new();
    let mut counts = BTreeMap::new();
    for (name, tri) in surfaces() {
        let (mut ok, mut rejected) = (0u64, 0u64);
        for mu in box_vectors(tri.num_edges(), -6, 6) {
            match from_coords(&tri, &mu) {
                Ok(l) if coords(&l) == mu && parity_ok(&tri, &mu) => ok += 1,
                Err(Error::NonRealizable(_)) if !parity_ok(&tri, &mu) => rejected += 1,
                other => {
                    if bad.len() < 5 {
                        bad.push(format!("{name}:{mu:?} -> {:?}", other.map(|l| coords(&l))));
                    }
                }
            }
        }
        counts.insert(name, (ok, rejected));
    }
    let detail = counts
        .iter()
        .map(|(n, (ok, r))| format!("{n}: {ok} round trips, {r} odd-parity rejections"))
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { passed: bad.is_empty(), detail: format!("{detail}; failures {bad:?}") }
}

fn criterion_10() -> Outcome {
    let mut bad = Vec::new();
    let mut rotations = 0;
    for (name, tri) in surfaces() {
        for w in curves_up_to(&tri, 6) {
            let q = quantum_trace(&tri, &w).unwrap();
            let s = trace_word(&tri, &w).unwrap().passages.len();
            for start in 0..s {
                rotations += 1;
                if quantum_trace_from(&tri, &w, start).unwrap() != q {
                    bad.push(format!("{name}:{w} start {start}"));
                }
            }
        }
    }
    let bin = env!("CARGO_BIN_EXE_qduality");
    let invocations: [&[&str]; 6] = [
        &["trace", "--coords", "0,1/2,1/2"],
        &["dual", "--coords", "1,2,1", "--format", "json"],
        &["product", "--l1", "0,1,1", "--l2", "1,0,1", "--format", "csv"],
        &["verify", "--coords", "0,1,1"],
        &["frobenius", "--coords", "0,1,1", "--root", "3"],
        &["dual", "--surface", "sphere_4", "--coords", "1,1,0,1,1,0", "--format", "latex"],
    ];
    let mut cli_runs = 0;
    for args in invocations {
        let outputs: Vec<Vec<u8>> = ["1", "1", "4"]
            .iter()
            .map(|t| {
                cli_runs += 1;
                let out = Command::new(bin).args(args).args(["--threads", t]).output().expect("run cli");
                assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
                out.stdout
            })
            .collect();
        if outputs.windows(2).any(|w| w[0] != w[1]) || outputs[0].is_empty() {
            bad.push(format!("cli {args:?}"));
        }
    }
    Outcome { passed: bad.is_empty(), detail: format!("{rotations} rotations, {cli_runs} cli runs, failures {bad:?}") }
}

fn report(number: usize, title: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let (out, elapsed, in_time) = timed(limit, f);
    print_line(number, title, &out, elapsed, limit, in_time)
}

fn print_line(number: usize, title: &str, out: &Outcome, elapsed: Duration, limit: Option<Duration>, in_time: bool) -> bool {
    let passed = out.passed && in_time;
    let budget = limit.map_or(String::new(), |l| format!(" / limit {} s", l.as_secs()));
    println!(
        "criterion {number:>2}: {}  {title} ({:.2} s{budget}) {}",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        out.detail
    );
    passed
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let mut all = true;
    all &= report(1, "classical limit equals turn-matrix trace", secs(5), criterion_1);

    let t = Instant::now();
    let [c2, c3, c4] = criteria_2_to_4();
    let elapsed = t.elapsed();
    let in_time = elapsed < Duration::from_secs(60);
    all &= print_line(2, "highest term is the Weyl-ordered leading monomial", &c2, elapsed, secs(60), in_time);
    all &= print_line(3, "star invariance and single parity class", &c3, elapsed, None, true);
    all &= print_line(4, "images lie in the q-subalgebra", &c4, elapsed, None, true);

    all &= report(5, "product expansion peels and reconstructs exactly", secs(300), criterion_5);
    all &= report(6, "Frobenius identity for N = 1, 3, 5", secs(60), criterion_6);
    all &= report(7, "peripheral two-term law, centrality, kernel shifts", None, criterion_7);
    all &= report(8, "Chebyshev identities", secs(1), criterion_8);
    all &= report(9, "coordinate bijection on the half-integer box", secs(60), criterion_9);
    all &= report(10, "start-point invariance and deterministic CLI output", None, criterion_10);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
