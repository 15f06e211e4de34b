//! Integral laminations: normal curves, curve words and edge coordinates.
//!
//! Coordinates are stored doubled (`μ = 2a`) so everything stays integral.
//! A normal multicurve is described by its corner counts: `m(t,k)` arcs cut
//! off corner `k` of triangle `t`, with `μ_{side k} = m(t,k-1) + m(t,k)`.
//!
//! Along side `k` of `t`, read clockwise, the first `m(t,k-1)` points belong
//! to corner `k-1` arcs (innermost first) and the remaining `m(t,k)` points to
//! corner `k` arcs (innermost last). Entering through side `k` and leaving
//! through side `k+1` is a left turn; leaving through side `k-1` is a right turn.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::surface::IdealTriangulation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Turn {
    Left,
    Right,
}

impl Turn {
    pub fn flip(self) -> Self {
        match self {
            Turn::Left => Turn::Right,
            Turn::Right => Turn::Left,
        }
    }
}

/// Cyclic sequence of (edge crossed, turn taken in the triangle entered next).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveWord(pub Vec<(usize, Turn)>);

impl CurveWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rotate(&self, r: usize) -> Self {
        let mut w = self.0.clone();
        if !w.is_empty() {
            let s = w.len();
            w.rotate_left(r % s);
        }
        CurveWord(w)
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self) -> Self {
        let s = self.0.len();
        CurveWord(
            (0..s)
                .map(|i| {
                    let e = self.0[s - 1 - i].0;
                    let t = self.0[(2 * s - 2 - i) % s].1.flip();
                    (e, t)
                })
                .collect(),
        )
    }

    /// Lexicographically least rotation of the word or its reversal.
    pub fn canonical(&self) -> Self {
        let rev = self.reversed();
        (0..self.len().max(1))
            .flat_map(|r| [self.rotate(r), rev.rotate(r)])
            .min()
            .unwrap_or_else(|| self.clone())
    }

    /// Doubled coordinates of the curve with weight one.
    pub fn crossings(&self, n: usize) -> Vec<i64> {
        let mut mu = vec![0; n];
        for &(e, _) in &self.0 {
            mu[e] += 1;
        }
        mu
    }

    /// Parse `"2L,3R"` with 1-based edge ids.
    pub fn parse(text: &str) -> Result<Self> {
        text.parse()
    }
}

impl FromStr for CurveWord {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let mut out = Vec::new();
        for tok in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (num, turn) = tok.split_at(tok.len() - 1);
            let turn = match turn {
                "L" | "l" => Turn::Left,
                "R" | "r" => Turn::Right,
                _ => return Err(Error::Parse(format!("bad curve token '{tok}': expected <edge>L or <edge>R"))),
            };
            let e: usize = num
                .parse()
                .map_err(|_| Error::Parse(format!("bad curve token '{tok}': edge id is not a positive integer")))?;
            if e == 0 {
                return Err(Error::Parse(format!("bad curve token '{tok}': edge ids are 1-based")));
            }
            out.push((e - 1, turn));
        }
        Ok(CurveWord(out))
    }
}

impl fmt::Display for CurveWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(e, t)| format!("{}{}", e + 1, if t == Turn::Left { 'L' } else { 'R' }))
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// One crossing of a traced curve with an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Passage {
    pub edge: usize,
    /// Position along the edge in its canonical direction, `0..μ_e`.
    pub position: usize,
    /// Triangle entered after crossing and the side crossed.
    pub triangle: usize,
    pub side: usize,
    pub turn: Turn,
}

/// A connected normal curve given by its passages in traversal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracedCurve {
    pub passages: Vec<Passage>,
}

impl TracedCurve {
    pub fn word(&self) -> CurveWord {
        CurveWord(self.passages.iter().map(|p| (p.edge, p.turn)).collect())
    }

    /// Corner counts of this curve alone.
    pub fn corner_counts(&self, tri: &IdealTriangulation) -> Vec<[i64; 3]> {
        let mut m = vec![[0i64; 3]; tri.num_triangles()];
        for p in &self.passages {
            let c = match p.turn {
                Turn::Left => p.side,
                Turn::Right => (p.side + 2) % 3,
            };
            m[p.triangle][c] += 1;
        }
        m
    }
}

/// Corner counts from doubled coordinates; fails when a triangle has odd total.
pub fn corner_counts(tri: &IdealTriangulation, mu: &[i64]) -> Result<Vec<[i64; 3]>> {
    if mu.len() != tri.num_edges() {
        return Err(Error::DimensionMismatch { expected: tri.num_edges(), found: mu.len() });
    }
    let mut out = Vec::with_capacity(tri.num_triangles());
    for (t, sides) in tri.triangles().iter().enumerate() {
        let mut m = [0i64; 3];
        for k in 0..3 {
            let twice = mu[sides[k]] + mu[sides[(k + 1) % 3]] - mu[sides[(k + 2) % 3]];
            if twice % 2 != 0 {
                return Err(Error::NonRealizable(format!("triangle {} has odd crossing total", t + 1)));
            }
            m[k] = twice / 2;
        }
        out.push(m);
    }
    Ok(out)
}

/// Side lengths implied by corner counts.
fn side_lengths(counts: &[[i64; 3]]) -> Vec<[i64; 3]> {
    counts.iter().map(|m| [0, 1, 2].map(|k| m[(k + 2) % 3] + m[k])).collect()
}

/// Follow the arc entering `(t, k)` at clockwise position `j`; returns the
/// exit side, its clockwise position, and the turn.
fn step(counts: &[[i64; 3]], len: &[[i64; 3]], t: usize, k: usize, j: i64) -> (usize, i64, Turn) {
    let m = counts[t];
    if j < m[(k + 2) % 3] {
        let out = (k + 2) % 3;
        (out, len[t][out] - 1 - j, Turn::Right)
    } else {
        let d = len[t][k] - 1 - j;
        ((k + 1) % 3, d, Turn::Left)
    }
}

fn canonical_position(tri: &IdealTriangulation, t: usize, k: usize, j: i64, len: i64) -> usize {
    if tri.is_canonical_side(t, k) {
        j as usize
    } else {
        (len - 1 - j) as usize
    }
}

/// Trace a curve starting at canonical point `position` of `edge`, entering
/// the given side slot.
fn trace_from(
    tri: &IdealTriangulation,
    counts: &[[i64; 3]],
    len: &[[i64; 3]],
    edge: usize,
    position: usize,
    entry: (usize, usize),
) -> TracedCurve {
    let (mut t, mut k) = entry;
    let mu = len[t][k];
    let mut j = if tri.is_canonical_side(t, k) { position as i64 } else { mu - 1 - position as i64 };
    let mut passages = Vec::new();
    loop {
        let e = tri.edge(t, k);
        let pos = canonical_position(tri, t, k, j, len[t][k]);
        if !passages.is_empty() && e == edge && pos == position && (t, k) == entry {
            break;
        }
        let (out, jo, turn) = step(counts, len, t, k, j);
        passages.push(Passage { edge: e, position: pos, triangle: t, side: k, turn });
        let (u, m) = tri.opposite(t, out);
        j = len[t][out] - 1 - jo;
        t = u;
        k = m;
        assert!(passages.len() <= 4 * len.iter().flatten().sum::<i64>() as usize + 4, "runaway trace");
    }
    TracedCurve { passages }
}

/// Decompose a nonnegative normal multicurve into connected components,
/// each starting at its first point in (edge, position) order.
pub fn trace_components(tri: &IdealTriangulation, counts: &[[i64; 3]]) -> Vec<TracedCurve> {
    let len = side_lengths(counts);
    let mut seen: Vec<Vec<bool>> = (0..tri.num_edges())
        .map(|e| {
            let (t, k) = tri.edge_sides(e)[0];
            vec![false; len[t][k].max(0) as usize]
        })
        .collect();
    let mut out = Vec::new();
    for e in 0..tri.num_edges() {
        for pos in 0..seen[e].len() {
            if seen[e][pos] {
                continue;
            }
            let curve = trace_from(tri, counts, &len, e, pos, tri.edge_sides(e)[0]);
            for p in &curve.passages {
                seen[p.edge][p.position] = true;
            }
            out.push(curve);
        }
    }
    out
}

/// Traced representative of a curve word, validating that it describes one
/// simple closed normal curve.
pub fn trace_word(tri: &IdealTriangulation, word: &CurveWord) -> Result<TracedCurve> {
    let s = word.len();
    if s < 2 {
        return Err(Error::InvalidCurve(format!("word '{word}' has fewer than two crossings")));
    }
    let n = tri.num_edges();
    if let Some(&(e, _)) = word.0.iter().find(|(e, _)| *e >= n) {
        return Err(Error::InvalidCurve(format!("edge {} does not exist", e + 1)));
    }
    let mut last_err = None;
    for entry in tri.edge_sides(word.0[0].0) {
        let (mut t, mut k) = entry;
        let mut counts = vec![[0i64; 3]; tri.num_triangles()];
        let mut ok = true;
        for i in 0..s {
            let (e, turn) = word.0[i];
            if tri.edge(t, k) != e {
                ok = false;
                break;
            }
            let (out, corner) = match turn {
                Turn::Left => ((k + 1) % 3, k),
                Turn::Right => ((k + 2) % 3, (k + 2) % 3),
            };
            counts[t][corner] += 1;
            if tri.edge(t, out) != word.0[(i + 1) % s].0 {
                ok = false;
                break;
            }
            (t, k) = tri.opposite(t, out);
        }
        if !ok || (t, k) != entry {
            last_err = Some(Error::InvalidCurve(format!("word '{word}' does not follow the triangulation")));
            continue;
        }
        let comps = trace_components(tri, &counts);
        if comps.len() != 1 {
            last_err = Some(Error::InvalidCurve(format!("word '{word}' is not a simple closed curve")));
            continue;
        }
        let traced = comps.into_iter().next().expect("one component");
        if traced.word().canonical() != word.canonical() {
            last_err = Some(Error::InvalidCurve(format!("word '{word}' is not a simple closed curve")));
            continue;
        }
        return Ok(traced);
    }
    Err(last_err.expect("at least one attempt"))
}

/// Puncture encircled by the word, if every turn has the same direction.
pub fn is_peripheral(tri: &IdealTriangulation, word: &CurveWord) -> Result<Option<usize>> {
    let traced = trace_word(tri, word)?;
    let first = traced.passages[0].turn;
    if traced.passages.iter().any(|p| p.turn != first) {
        return Ok(None);
    }
    let p = &traced.passages[0];
    let corner = match first {
        Turn::Left => p.side,
        Turn::Right => (p.side + 2) % 3,
    };
    Ok(Some(tri.corner(p.triangle, corner)))
}

/// Word of the loop around puncture `p`, oriented so that it turns right.
pub fn peripheral_word(tri: &IdealTriangulation, p: usize) -> Result<CurveWord> {
    let mu = tri.peripheral_vector(p)?;
    let counts = corner_counts(tri, &mu)?;
    let comps = trace_components(tri, &counts);
    debug_assert_eq!(comps.len(), 1);
    let w = comps[0].word();
    let w = if w.0[0].1 == Turn::Right { w } else { w.reversed() };
    Ok(w)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Component {
    pub word: CurveWord,
    pub weight: i64,
    pub peripheral: Option<usize>,
    /// Doubled coordinates of the weight-one curve.
    pub mu: Vec<i64>,
}

/// Weighted multicurve in canonical form: one component per homotopy class,
/// nonzero weights, components sorted by coordinate vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegralLamination {
    n: usize,
    components: Vec<Component>,
}

impl IntegralLamination {
    pub fn empty(n: usize) -> Self {
        Self { n, components: Vec::new() }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn num_edges(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Doubled coordinates `μ = 2a`.
    pub fn coords_doubled(&self) -> Vec<i64> {
        let mut mu = vec![0i64; self.n];
        for c in &self.components {
            for (m, x) in mu.iter_mut().zip(&c.mu) {
                *m += c.weight * x;
            }
        }
        mu
    }

    /// Integer coordinates `a`, when every entry is integral.
    pub fn integral_coords(&self) -> Result<Vec<i64>> {
        let mu = self.coords_doubled();
        if let Some((i, &d)) = mu.iter().enumerate().find(|(_, d)| **d % 2 != 0) {
            return Err(Error::NotInALattice { index: i, doubled: d });
        }
        Ok(mu.iter().map(|d| d / 2).collect())
    }

    /// Every weight multiplied by `k ≥ 0`.
    pub fn scale(&self, k: i64) -> Self {
        assert!(k >= 0);
        if k == 0 {
            return Self::empty(self.n);
        }
        let components = self.components.iter().map(|c| Component { weight: c.weight * k, ..c.clone() }).collect();
        Self { n: self.n, components }
    }

    /// Render coordinates as `a1,a2,...` with half-integers as `p/2`.
    pub fn coords_string(&self) -> String {
        format_coords(&self.coords_doubled())
    }
}

pub fn format_coords(mu: &[i64]) -> String {
    mu.iter()
        .map(|&m| if m % 2 == 0 { (m / 2).to_string() } else { format!("{m}/2") })
        .collect::<Vec<_>>()
        .join(",")
}

/// Parse `a1,a2,...` where each entry is an integer or `p/2`; returns `2a`.
pub fn parse_coords(text: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for tok in text.split(',').map(str::trim) {
        let bad = || Error::Parse(format!("bad coordinate '{tok}': expected an integer or p/2"));
        let v = match tok.split_once('/') {
            Some((p, "2")) => p.trim().parse::<i64>().map_err(|_| bad())?,
            Some(_) => return Err(bad()),
            None => 2 * tok.parse::<i64>().map_err(|_| bad())?,
        };
        out.push(v);
    }
    Ok(out)
}

/// Doubled coordinates of a lamination.
pub fn coords(l: &IntegralLamination) -> Vec<i64> {
    l.coords_doubled()
}

/// The unique lamination with doubled coordinates `mu`.
pub fn from_coords(tri: &IdealTriangulation, mu: &[i64]) -> Result<IntegralLamination> {
    let mut counts = corner_counts(tri, mu)?;
    let mut curves: Vec<(CurveWord, i64)> = Vec::new();
    for p in 0..tri.num_punctures() {
        let at = tri.corners_at(p);
        let k = at.iter().map(|&(t, c)| counts[t][c]).min().expect("puncture has corners");
        if k != 0 {
            for &(t, c) in &at {
                counts[t][c] -= k;
            }
            curves.push((peripheral_word(tri, p)?, k));
        }
    }
    for curve in trace_components(tri, &counts) {
        curves.push((curve.word(), 1));
    }
    canonical_decompose(tri, curves)
}

/// Merge homotopic curves, drop zero weights and sort components.
pub fn canonical_decompose(tri: &IdealTriangulation, curves: Vec<(CurveWord, i64)>) -> Result<IntegralLamination> {
    let n = tri.num_edges();
    let mut classes: BTreeMap<Vec<i64>, Component> = BTreeMap::new();
    for (word, weight) in curves {
        let peripheral = is_peripheral(tri, &word)?;
        let mu = word.crossings(n);
        let word = match peripheral {
            Some(p) => peripheral_word(tri, p)?,
            None => word.canonical(),
        };
        classes
            .entry(mu.clone())
            .and_modify(|c| c.weight += weight)
            .or_insert(Component { word, weight, peripheral, mu });
    }
    let mut components = Vec::new();
    for (_, c) in classes {
        if c.weight == 0 {
            continue;
        }
        if c.weight < 0 && c.peripheral.is_none() {
            return Err(Error::NegativeNonPeripheral(c.weight));
        }
        components.push(c);
    }
    Ok(IntegralLamination { n, components })
}

/// Sum in the coordinate ℤ-module.
pub fn module_add(tri: &IdealTriangulation, a: &IntegralLamination, b: &IntegralLamination) -> Result<IntegralLamination> {
    let mu: Vec<i64> = a.coords_doubled().iter().zip(b.coords_doubled()).map(|(x, y)| x + y).collect();
    from_coords(tri, &mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt() -> IdealTriangulation {
        IdealTriangulation::punctured_torus()
    }

    fn s4() -> IdealTriangulation {
        IdealTriangulation::sphere_4()
    }

    #[test]
    fn pt_basic_curve() {
        let t = pt();
        let l = from_coords(&t, &[0, 1, 1]).unwrap();
        assert_eq!(l.components().len(), 1);
        let c = &l.components()[0];
        assert_eq!(c.weight, 1);
        assert_eq!(c.peripheral, None);
        assert_eq!(c.word, CurveWord::parse("2L,3R").unwrap().canonical());
        assert_eq!(l.coords_string(), "0,1/2,1/2");
        assert_eq!(from_coords(&t, &[0, 2, 2]).unwrap().components()[0].weight, 2);
    }

    #[test]
    fn pt_peripheral() {
        let t = pt();
        let l = from_coords(&t, &[2, 2, 2]).unwrap();
        assert_eq!(l.components().len(), 1);
        assert_eq!(l.components()[0].peripheral, Some(0));
        assert_eq!(l.components()[0].word.len(), 6);
        assert!(l.components()[0].word.0.iter().all(|&(_, t)| t == Turn::Right));
        let neg = from_coords(&t, &[-2, -2, -2]).unwrap();
        assert_eq!(neg.components()[0].weight, -1);
        assert_eq!(neg.coords_doubled(), vec![-2, -2, -2]);
    }

    #[test]
    fn empty_and_errors() {
        let t = pt();
        assert!(from_coords(&t, &[0, 0, 0]).unwrap().is_empty());
        assert!(matches!(from_coords(&t, &[1, 0, 0]), Err(Error::NonRealizable(_))));
        assert!(matches!(CurveWord::parse("2L,x"), Err(Error::Parse(_))));
        assert!(trace_word(&t, &CurveWord::parse("2L").unwrap()).is_err());
        assert!(trace_word(&t, &CurveWord::parse("2L,3L").unwrap()).is_err());
    }

    #[test]
    fn peripheral_detection() {
        let t = pt();
        assert_eq!(is_peripheral(&t, &CurveWord::parse("2L,3R").unwrap()).unwrap(), None);
        let w = peripheral_word(&t, 0).unwrap();
        assert_eq!(is_peripheral(&t, &w).unwrap(), Some(0));
        let s = s4();
        for p in 0..4 {
            let w = peripheral_word(&s, p).unwrap();
            assert_eq!(is_peripheral(&s, &w).unwrap(), Some(p));
            let l = from_coords(&s, &w.crossings(6)).unwrap();
            assert_eq!(l.components()[0].peripheral, Some(p));
        }
    }

    #[test]
    fn decompose_examples() {
        let t = pt();
        let c = CurveWord::parse("2L,3R").unwrap();
        let l = canonical_decompose(&t, vec![(c.clone(), 2), (c.clone(), 3)]).unwrap();
        assert_eq!(l.components()[0].weight, 5);
        assert!(canonical_decompose(&t, vec![(c.clone(), 0)]).unwrap().is_empty());
        assert_eq!(canonical_decompose(&t, vec![(c.clone(), -1)]), Err(Error::NegativeNonPeripheral(-1)));
        assert_eq!(canonical_decompose(&t, vec![(c.reversed(), 1)]).unwrap(), from_coords(&t, &[0, 1, 1]).unwrap());
    }

    #[test]
    fn module_examples() {
        let t = pt();
        let c = from_coords(&t, &[0, 1, 1]).unwrap();
        let p = from_coords(&t, &[2, 2, 2]).unwrap();
        assert_eq!(module_add(&t, &c, &IntegralLamination::empty(3)).unwrap(), c);
        assert_eq!(module_add(&t, &c, &c).unwrap(), c.scale(2));
        let s = module_add(&t, &c, &p).unwrap();
        assert_eq!(s.coords_string(), "1,3/2,3/2");
        assert_eq!(s.components().len(), 2);
    }

    #[test]
    fn parse_coordinates() {
        assert_eq!(parse_coords("0,1/2,-3/2,2").unwrap(), vec![0, 1, -3, 4]);
        assert!(parse_coords("0,1/3").is_err());
        assert!(parse_coords("a").is_err());
    }

    fn mu_strategy(n: usize) -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-6i64..=6, n)
    }

    proptest! {
        #[test]
        fn round_trip_torus(mu in mu_strategy(3)) {
            round_trip(&pt(), &mu)?;
        }

        #[test]
        fn round_trip_sphere(mu in mu_strategy(6)) {
            round_trip(&s4(), &mu)?;
        }
    }

    fn round_trip(t: &IdealTriangulation, mu: &[i64]) -> std::result::Result<(), TestCaseError> {
        match from_coords(t, mu) {
            Ok(l) => {
                prop_assert_eq!(l.coords_doubled(), mu.to_vec());
                let words: Vec<(CurveWord, i64)> = l.components().iter().map(|c| (c.word.clone(), c.weight)).collect();
                prop_assert_eq!(canonical_decompose(t, words).unwrap(), l.clone());
                for c in l.components() {
                    prop_assert!(c.weight > 0 || c.peripheral.is_some());
                    let rev = canonical_decompose(t, vec![(c.word.reversed(), 1)]).unwrap();
                    prop_assert_eq!(rev.coords_doubled(), c.mu.clone());
                }
            }
            Err(Error::NonRealizable(_)) => {
                let odd = t.triangles().iter().any(|s| (mu[s[0]] + mu[s[1]] + mu[s[2]]) % 2 != 0);
                prop_assert!(odd);
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
        Ok(())
    }
}
