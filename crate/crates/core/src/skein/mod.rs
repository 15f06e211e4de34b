//! Quantum trace of simple closed curves through the split triangulation.
//!
//! A curve is cut into constant-elevation arcs inside triangles, joined by
//! strands across the biangles. Each biangle is drawn with both sides pointing
//! along the canonical edge direction; endpoints are first slid along the
//! sides so their heights follow elevation, which produces two collar braids.
//! Biangle traces are evaluated strip by strip and the triangle factors are
//! Weyl-ordered monomials multiplied in increasing elevation.

pub mod biangle;
mod packed;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lamination::{is_peripheral, trace_word, CurveWord, Passage, Turn};
use crate::qtorus::{weyl_order, EpsilonForm, OmegaScalar, QLaurent, QMonomial};
use crate::surface::IdealTriangulation;
use packed::{Packed, StatePoly, MAX_PACKED_EXPONENT, MAX_PACKED_TRIANGLES};

pub use biangle::{
    biangle_trace, kauffman_resolve, left_return, loop_value, right_return, transfer_matrix, BiangleDiagram, Crossing,
    Endpoint, Over, PlanarTangle,
};

/// One constant-elevation arc inside a triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcPiece {
    pub triangle: usize,
    /// Entry and exit side indices within the triangle.
    pub sides: [usize; 2],
    /// Canonical positions of the two endpoints along their edges.
    pub positions: [usize; 2],
    pub elevation: i64,
}

/// Arc indices at the two ends of a biangle strand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Strand {
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodPosition {
    pub arcs: Vec<ArcPiece>,
    /// Strands of each biangle, indexed by canonical position.
    pub strands: Vec<Vec<Strand>>,
    /// Edge whose biangle carries the ascending strand, if any.
    pub ascent: Option<usize>,
}

impl GoodPosition {
    pub fn empty(tri: &IdealTriangulation) -> Self {
        Self { arcs: Vec::new(), strands: vec![Vec::new(); tri.num_edges()], ascent: None }
    }

    /// Assemble biangle strands from arcs; every edge point must be hit once
    /// from each side.
    pub fn from_arcs(tri: &IdealTriangulation, arcs: Vec<ArcPiece>, ascent: Option<usize>) -> Self {
        let mut ends: Vec<BTreeMap<usize, [Option<usize>; 2]>> = vec![BTreeMap::new(); tri.num_edges()];
        for (a, arc) in arcs.iter().enumerate() {
            for i in 0..2 {
                let k = arc.sides[i];
                let e = tri.edge(arc.triangle, k);
                let slot = usize::from(tri.is_canonical_side(arc.triangle, k));
                let entry = ends[e].entry(arc.positions[i]).or_default();
                assert!(entry[slot].is_none(), "edge point used twice");
                entry[slot] = Some(a);
            }
        }
        let strands = ends
            .into_iter()
            .map(|m| {
                m.into_iter()
                    .enumerate()
                    .map(|(i, (p, [l, r]))| {
                        assert_eq!(i, p, "edge positions must be contiguous");
                        Strand { left: l.expect("left end"), right: r.expect("right end") }
                    })
                    .collect()
            })
            .collect();
        Self { arcs, strands, ascent }
    }

    /// Biangle tangle of edge `e` in picture convention: the minimal diagram
    /// when a single strand changes elevation rank, the collar braids otherwise.
    pub fn biangle_diagram(&self, e: usize) -> BiangleDiagram {
        self.single_mover_diagram(e).unwrap_or_else(|| self.collar_diagram(e))
    }

    fn elevation_orders(&self, e: usize) -> (Vec<usize>, Vec<usize>, Vec<i64>, Vec<i64>) {
        let st = &self.strands[e];
        let left_elev: Vec<i64> = st.iter().map(|s| self.arcs[s.left].elevation).collect();
        let right_elev: Vec<i64> = st.iter().map(|s| self.arcs[s.right].elevation).collect();
        let by = |key: &[i64]| {
            let mut v: Vec<usize> = (0..st.len()).collect();
            v.sort_by_key(|&i| key[i]);
            v
        };
        (by(&left_elev), by(&right_elev), left_elev, right_elev)
    }

    /// Endpoints slid along both sides into elevation order, through the
    /// geometric order in the middle.
    pub fn collar_diagram(&self, e: usize) -> BiangleDiagram {
        let (lo, ro, left_elev, right_elev) = self.elevation_orders(e);
        let geometric: Vec<usize> = (0..lo.len()).collect();
        let mut crossings = biangle::sorting_braid(&lo, &geometric, &left_elev);
        crossings.extend(biangle::sorting_braid(&geometric, &ro, &right_elev));
        BiangleDiagram { width: lo.len(), crossings }
    }

    /// One strand moves through the others, crossing each once and passing
    /// over exactly the strands geometrically above it.
    ///
    /// With elevations interpolated linearly across the biangle, the mover
    /// meets strand `j` in elevation at `x*_j`; at that point the picture
    /// order must be the geometric order, which pins each crossing to one
    /// side of `x*_j`. Returns `None` when no increasing choice of crossing
    /// points satisfies all of these.
    fn single_mover_diagram(&self, e: usize) -> Option<BiangleDiagram> {
        let (lo, ro, left_elev, right_elev) = self.elevation_orders(e);
        let w = lo.len();
        let rest = |o: &[usize], s: usize| o.iter().copied().filter(|&x| x != s).collect::<Vec<_>>();
        let mover = (0..w).find(|&s| rest(&lo, s) == rest(&ro, s))?;
        let from = lo.iter().position(|&x| x == mover).expect("mover");
        let to = ro.iter().position(|&x| x == mover).expect("mover");
        // x*_j as a fraction with positive denominator.
        let meet = |j: usize| -> (i128, i128) {
            let num = i128::from(left_elev[j] - left_elev[mover]);
            let den = i128::from((right_elev[mover] - left_elev[mover]) - (right_elev[j] - left_elev[j]));
            if den < 0 {
                (-num, -den)
            } else {
                (num, den)
            }
        };
        let less = |a: (i128, i128), b: (i128, i128)| a.0 * b.1 < b.0 * a.1;
        let mut cur = lo.clone();
        let mut crossings = Vec::new();
        let mut bound: Option<(i128, i128)> = None;
        let mut h = from;
        while h != to {
            let rising = to > h;
            let j = if rising { cur[h + 1] } else { cur[h - 1] };
            let before_meet = rising == (mover > j);
            let x = meet(j);
            if before_meet {
                if bound.is_some_and(|b| !less(b, x)) {
                    return None;
                }
            } else if bound.map_or(true, |b| less(b, x)) {
                bound = Some(x);
            }
            let mover_over = mover < j;
            let over = if rising == mover_over { Over::Rising } else { Over::Falling };
            let at = if rising { h } else { h - 1 };
            crossings.push(Crossing { height: at, over });
            cur.swap(at, at + 1);
            h = if rising { h + 1 } else { h - 1 };
        }
        Some(BiangleDiagram { width: w, crossings })
    }

    /// Whether elevation order agrees on both sides of the biangle, so its
    /// collar braids cancel.
    pub fn is_trivial_biangle(&self, e: usize) -> bool {
        let st = &self.strands[e];
        let l = |i: usize| self.arcs[st[i].left].elevation;
        let r = |i: usize| self.arcs[st[i].right].elevation;
        (0..st.len()).all(|i| (0..i).all(|j| (l(i) < l(j)) == (r(i) < r(j))))
    }

    /// Crossings after cancelling collar braids in trivial biangles.
    pub fn crossing_count(&self) -> usize {
        (0..self.strands.len())
            .filter(|&e| !self.is_trivial_biangle(e))
            .map(|e| reduced_crossings(&self.biangle_diagram(e)))
            .sum()
    }

    /// Arc table per triangle and braid word per nontrivial biangle.
    pub fn dump(&self, tri: &IdealTriangulation) -> String {
        let mut out = String::new();
        for t in 0..tri.num_triangles() {
            let _ = writeln!(out, "triangle {}", t + 1);
            let mut arcs: Vec<&ArcPiece> = self.arcs.iter().filter(|a| a.triangle == t).collect();
            arcs.sort_by_key(|a| a.elevation);
            for a in arcs {
                let _ = writeln!(
                    out,
                    "  elev {:>4}  edge {}@{} -> edge {}@{}",
                    a.elevation,
                    tri.edge(t, a.sides[0]) + 1,
                    a.positions[0],
                    tri.edge(t, a.sides[1]) + 1,
                    a.positions[1]
                );
            }
        }
        for e in 0..self.strands.len() {
            if self.strands[e].is_empty() {
                continue;
            }
            let d = self.biangle_diagram(e);
            let word: Vec<String> = if self.is_trivial_biangle(e) {
                Vec::new()
            } else {
                d.crossings
                    .iter()
                    .map(|c| format!("{}{}", if c.over == Over::Rising { "s" } else { "S" }, c.height + 1))
                    .collect()
            };
            let mark = if self.ascent == Some(e) { " (ascent)" } else { "" };
            let _ = writeln!(out, "biangle {}{}: {} strands [{}]", e + 1, mark, d.width, word.join(" "));
        }
        out
    }
}

/// Crossing count after cancelling adjacent inverse pairs.
fn reduced_crossings(d: &BiangleDiagram) -> usize {
    let mut stack: Vec<Crossing> = Vec::new();
    for &c in &d.crossings {
        match stack.last() {
            Some(&top) if top.height == c.height && top.over != c.over => {
                stack.pop();
            }
            _ => stack.push(c),
        }
    }
    stack.len()
}

/// Local commutation form of the disjoint union of triangle algebras;
/// side `k` of triangle `t` is generator `3t + k`.
pub fn triangle_epsilon(m: usize) -> EpsilonForm {
    let mut rows = vec![vec![0i64; 3 * m]; 3 * m];
    for t in 0..m {
        for k in 0..3 {
            let (i, j) = (3 * t + k, 3 * t + (k + 1) % 3);
            rows[i][j] = 1;
            rows[j][i] = -1;
        }
    }
    EpsilonForm::new(rows).expect("skew by construction")
}

/// Trace of a single arc joining sides `sides[0]` and `sides[1]` of one
/// triangle, as a monomial in that triangle's algebra; `None` when zero.
pub fn triangle_arc_trace(sides: [usize; 2], states: [i8; 2]) -> Option<QMonomial> {
    let (a, b) = (sides[0] % 3, sides[1] % 3);
    assert_ne!(a, b, "arc must join distinct sides");
    // (σ_k, σ_{k+1}) = (−, +) vanishes.
    let (lo, hi) = if (a + 1) % 3 == b { (states[0], states[1]) } else { (states[1], states[0]) };
    if lo < 0 && hi > 0 {
        return None;
    }
    let mut p = vec![0i64; 3];
    p[a] += i64::from(states[0]);
    p[b] += i64::from(states[1]);
    Some(weyl_order(&p, &triangle_epsilon(1)))
}

/// Good position with the ascent placed at passage `start` of the traced
/// curve; elevation drops by one along each later arc.
pub fn good_position_from(tri: &IdealTriangulation, passages: &[Passage], start: usize) -> GoodPosition {
    let s = passages.len();
    let arcs = (0..s)
        .map(|m| {
            let q = passages[(start + m) % s];
            let next = passages[(start + m + 1) % s];
            let (t, out) = tri.opposite(next.triangle, next.side);
            assert_eq!(t, q.triangle, "consecutive passages share a triangle");
            ArcPiece { triangle: t, sides: [q.side, out], positions: [q.position, next.position], elevation: -(m as i64) }
        })
        .collect();
    GoodPosition::from_arcs(tri, arcs, Some(passages[start % s].edge))
}

/// Default ascent: position 0 on the least-crossed edge, lowest id on ties.
pub fn default_start(passages: &[Passage]) -> usize {
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for p in passages {
        *count.entry(p.edge).or_default() += 1;
    }
    let (&edge, _) = count.iter().min_by_key(|(&e, &c)| (c, e)).expect("nonempty curve");
    passages.iter().position(|p| p.edge == edge && p.position == 0).expect("position 0 exists")
}

pub fn good_position(tri: &IdealTriangulation, word: &CurveWord) -> Result<GoodPosition> {
    let traced = trace_word(tri, word)?;
    let start = default_start(&traced.passages);
    Ok(good_position_from(tri, &traced.passages, start))
}

/// Crossing-free good position of a peripheral loop, from edge orientations
/// chosen by walking the loop and orienting each new edge into the puncture.
pub fn peripheral_good_position(tri: &IdealTriangulation, word: &CurveWord) -> Result<GoodPosition> {
    if is_peripheral(tri, word)?.is_none() {
        return Err(Error::NotPeripheral);
    }
    let mut traced = trace_word(tri, word)?;
    if traced.passages[0].turn == Turn::Left {
        traced = trace_word(tri, &word.reversed())?;
    }
    let ps = &traced.passages;
    let s = ps.len();
    for start in 0..s {
        // `true` means the edge points along its canonical direction.
        let mut orient: BTreeMap<usize, bool> = BTreeMap::new();
        for m in 1..=s {
            let q = ps[(start + m) % s];
            let toward_head = q.turn == Turn::Left;
            orient.entry(q.edge).or_insert(toward_head == tri.is_canonical_side(q.triangle, q.side));
        }
        let mut arcs: Vec<ArcPiece> = (0..s)
            .map(|m| {
                let q = ps[m];
                let next = ps[(m + 1) % s];
                let (t, out) = tri.opposite(next.triangle, next.side);
                ArcPiece { triangle: t, sides: [q.side, out], positions: [q.position, next.position], elevation: 0 }
            })
            .collect();
        if let Some(ranks) = orientation_elevations(tri, &arcs, &orient) {
            for (a, r) in arcs.iter_mut().zip(ranks) {
                *a = ArcPiece { elevation: (a.triangle * s) as i64 + r, ..*a };
            }
            return Ok(GoodPosition::from_arcs(tri, arcs, None));
        }
    }
    Err(Error::InternalParityViolation("no acyclic edge orientation for peripheral loop".into()))
}

/// Per-triangle elevation ranks increasing along each oriented edge, or
/// `None` when some triangle is cyclically constrained.
fn orientation_elevations(tri: &IdealTriangulation, arcs: &[ArcPiece], orient: &BTreeMap<usize, bool>) -> Option<Vec<i64>> {
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); arcs.len()];
    let mut on_side: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (a, arc) in arcs.iter().enumerate() {
        for i in 0..2 {
            on_side.entry((arc.triangle, arc.sides[i])).or_default().push((arc.positions[i], a));
        }
    }
    for ((t, k), mut pts) in on_side {
        pts.sort();
        if !orient[&tri.edge(t, k)] {
            pts.reverse();
        }
        for w in pts.windows(2) {
            below[w[1].1].push(w[0].1);
        }
    }
    let mut rank = vec![-1i64; arcs.len()];
    let mut placed = 0;
    let mut next_rank = vec![0i64; tri.num_triangles()];
    while placed < arcs.len() {
        let ready = (0..arcs.len()).find(|&a| rank[a] < 0 && below[a].iter().all(|&b| rank[b] >= 0))?;
        let t = arcs[ready].triangle;
        rank[ready] = next_rank[t];
        next_rank[t] += 1;
        placed += 1;
    }
    Some(rank)
}

/// Sum over compatible states of biangle scalars times triangle monomials.
///
/// Nontrivial biangles are first resolved into crossingless tangles; each
/// tangle contributes through strands, which identify state variables, and
/// turnbacks, which become two-variable factors.
pub fn state_sum(tri: &IdealTriangulation, gp: &GoodPosition) -> Result<QLaurent> {
    let max_side = gp.strands.iter().map(Vec::len).max().unwrap_or(0) as i64;
    let packed = tri.num_triangles() <= MAX_PACKED_TRIANGLES && max_side <= MAX_PACKED_EXPONENT;
    state_sum_with(tri, gp, packed)
}

/// [`state_sum`] with an explicit choice of polynomial representation.
fn state_sum_with(tri: &IdealTriangulation, gp: &GoodPosition, packed: bool) -> Result<QLaurent> {
    let local = Arc::new(triangle_epsilon(tri.num_triangles()));
    let n_arcs = gp.arcs.len();
    // One sign variable per arc endpoint.
    let mut parent: Vec<usize> = (0..2 * n_arcs).collect();
    let endpoint_var = |arc: usize, which: usize| 2 * arc + which;
    let arc_end = |a: usize, e: usize, pos: usize| -> usize {
        let arc = &gp.arcs[a];
        (0..2)
            .find(|&i| tri.edge(arc.triangle, arc.sides[i]) == e && arc.positions[i] == pos)
            .expect("arc touches strand")
    };
    // Nontrivial biangles: endpoint variables by height on each side, and their resolutions.
    let mut resolved: Vec<(Vec<usize>, Vec<usize>, Vec<(OmegaScalar, PlanarTangle)>)> = Vec::new();
    for e in 0..tri.num_edges() {
        let st = &gp.strands[e];
        if st.is_empty() {
            continue;
        }
        if gp.is_trivial_biangle(e) {
            for (pos, s) in st.iter().enumerate() {
                let a = find(&mut parent, endpoint_var(s.left, arc_end(s.left, e, pos)));
                let b = find(&mut parent, endpoint_var(s.right, arc_end(s.right, e, pos)));
                parent[a] = b;
            }
        } else {
            let mut lo: Vec<usize> = (0..st.len()).collect();
            lo.sort_by_key(|&i| gp.arcs[st[i].left].elevation);
            let mut ro: Vec<usize> = (0..st.len()).collect();
            ro.sort_by_key(|&i| gp.arcs[st[i].right].elevation);
            let left = lo.iter().map(|&i| endpoint_var(st[i].left, arc_end(st[i].left, e, i))).collect();
            let right = ro.iter().map(|&i| endpoint_var(st[i].right, arc_end(st[i].right, e, i))).collect();
            resolved.push((left, right, kauffman_resolve(&gp.biangle_diagram(e))));
        }
    }

    let mut total = QLaurent::zero(local.clone());
    let mut choice = vec![0usize; resolved.len()];
    loop {
        let mut uf = parent.clone();
        let mut weight = OmegaScalar::one();
        let mut factors: Vec<Factor> = Vec::new();
        for ((left, right, options), &c) in resolved.iter().zip(&choice) {
            let (coeff, tangle) = &options[c];
            weight = &weight * coeff;
            for _ in 0..tangle.loops {
                weight = &weight * &loop_value();
            }
            for &(x, y) in &tangle.pairs {
                match (x, y) {
                    (Endpoint::Left(i), Endpoint::Right(j)) => {
                        let (a, b) = (find(&mut uf, left[i]), find(&mut uf, right[j]));
                        uf[a] = b;
                    }
                    (Endpoint::Left(i), Endpoint::Left(j)) => {
                        let (top, bottom) = (left[i.max(j)], left[i.min(j)]);
                        factors.push(Factor::pair([top, bottom], left_return));
                    }
                    (Endpoint::Right(i), Endpoint::Right(j)) => {
                        let (top, bottom) = (right[i.max(j)], right[i.min(j)]);
                        factors.push(Factor::pair([top, bottom], right_return));
                    }
                    (Endpoint::Right(_), Endpoint::Left(_)) => unreachable!("pairs are ordered"),
                }
            }
        }
        let roots: Vec<usize> = (0..2 * n_arcs).map(|v| find(&mut uf, v)).collect();
        for f in &mut factors {
            for v in &mut f.vars {
                *v = roots[*v];
            }
        }
        let part = if packed {
            contract(gp, Packed::one(3 * tri.num_triangles()), &roots, &factors).to_laurent(local.clone())
        } else {
            contract(gp, QLaurent::one(local.clone()), &roots, &factors)
        };
        total.add_assign(&part.scale(&weight));

        // Next combination of resolutions.
        let mut i = 0;
        while i < choice.len() {
            choice[i] += 1;
            if choice[i] < resolved[i].2.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            break;
        }
    }
    to_edge_algebra(tri, &total)
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    p[x] = r;
    r
}

/// Scalar weight on a few state variables, indexed by bits (set bit means `−`).
struct Factor {
    vars: Vec<usize>,
    table: Vec<OmegaScalar>,
}

impl Factor {
    fn pair(vars: [usize; 2], value: fn(i8, i8) -> OmegaScalar) -> Self {
        let table = (0..4).map(|bits| value(sign_bit(bits, 0), sign_bit(bits, 1))).collect();
        Self { vars: vars.to_vec(), table }
    }
}

fn sign_bit(bits: usize, h: usize) -> i8 {
    if bits >> h & 1 == 1 {
        -1
    } else {
        1
    }
}

/// Contract arc monomials in elevation order against the factors, with
/// state variables identified according to `roots`.
fn contract<P: StatePoly>(gp: &GoodPosition, one: P, roots: &[usize], factors: &[Factor]) -> P {
    let n_arcs = gp.arcs.len();
    let mut remaining: HashMap<usize, usize> = HashMap::new();
    for &r in roots {
        *remaining.entry(r).or_default() += 1;
    }
    let mut factor_of: HashMap<usize, Vec<usize>> = HashMap::new();
    for (f, fac) in factors.iter().enumerate() {
        for &v in &fac.vars {
            factor_of.entry(v).or_default().push(f);
        }
    }
    let mut order: Vec<usize> = (0..n_arcs).collect();
    order.sort_by_key(|&a| (gp.arcs[a].elevation, a));

    let mut open: Vec<usize> = Vec::new();
    let mut frontier: HashMap<Vec<i8>, P> = HashMap::new();
    frontier.insert(Vec::new(), one.clone());
    let mut applied = vec![false; factors.len()];

    for &a in &order {
        let arc = gp.arcs[a];
        let vars = [roots[2 * a], roots[2 * a + 1]];
        let mut fresh: Vec<usize> = Vec::new();
        for v in vars {
            if !open.contains(&v) && !fresh.contains(&v) {
                fresh.push(v);
            }
        }
        open.extend(&fresh);
        let idx = |v: usize, open: &[usize]| open.iter().position(|&x| x == v).expect("open variable");
        let (i0, i1) = (idx(vars[0], &open), idx(vars[1], &open));
        let mut next: HashMap<Vec<i8>, P> = HashMap::new();
        for (key, poly) in &frontier {
            for bits in 0..1usize << fresh.len() {
                let mut k = key.clone();
                k.extend((0..fresh.len()).map(|j| sign_bit(bits, j)));
                let Some(mono) = triangle_arc_trace(arc.sides, [k[i0], k[i1]]) else { continue };
                let p = [mono.exponents[0], mono.exponents[1], mono.exponents[2]];
                let term = poly.mul_arc(arc.triangle, p, mono.omega_power);
                match next.get_mut(&k) {
                    Some(acc) => acc.add_assign(&term),
                    None => {
                        next.insert(k, term);
                    }
                }
            }
        }
        frontier = next;
        for v in vars {
            *remaining.get_mut(&v).expect("counted") -= 1;
        }
        // Apply factors whose variables are all assigned.
        for (f, fac) in factors.iter().enumerate() {
            if applied[f] || !fac.vars.iter().all(|v| open.contains(v)) {
                continue;
            }
            applied[f] = true;
            let ix: Vec<usize> = fac.vars.iter().map(|&v| idx(v, &open)).collect();
            frontier = frontier
                .into_iter()
                .filter_map(|(k, poly)| {
                    let bits = ix.iter().enumerate().fold(0usize, |b, (h, &i)| b | (usize::from(k[i] < 0) << h));
                    let c = &fac.table[bits];
                    (!c.is_zero()).then(|| (k, StatePoly::scale(&poly, c)))
                })
                .collect();
        }
        // Close variables that no longer matter.
        let closable: Vec<usize> = open
            .iter()
            .copied()
            .filter(|v| remaining[v] == 0 && factor_of.get(v).map_or(true, |fs| fs.iter().all(|&f| applied[f])))
            .collect();
        if !closable.is_empty() {
            let keep: Vec<usize> = (0..open.len()).filter(|&i| !closable.contains(&open[i])).collect();
            let mut merged: HashMap<Vec<i8>, P> = HashMap::new();
            for (k, poly) in frontier {
                let nk: Vec<i8> = keep.iter().map(|&i| k[i]).collect();
                match merged.get_mut(&nk) {
                    Some(acc) => acc.add_assign(&poly),
                    None => {
                        merged.insert(nk, poly);
                    }
                }
            }
            frontier = merged;
            open = keep.iter().map(|&i| open[i]).collect();
        }
    }
    assert!(open.is_empty(), "all state variables closed");
    frontier.remove(&Vec::new()).unwrap_or_else(|| one.scale(&OmegaScalar::zero()))
}

/// Map a tensor-algebra polynomial whose two sides of every edge agree onto
/// the edge generators.
fn to_edge_algebra(tri: &IdealTriangulation, f: &QLaurent) -> Result<QLaurent> {
    let eps = tri.epsilon();
    let mut out = QLaurent::zero(eps.clone());
    for (pt, c) in f.terms() {
        let mut p = vec![0i64; tri.num_edges()];
        for (e, slot) in p.iter_mut().enumerate() {
            let [(ta, ka), (tb, kb)] = tri.edge_sides(e);
            let (x, y) = (pt[3 * ta + ka], pt[3 * tb + kb]);
            if x != y {
                return Err(Error::InternalParityViolation(format!("edge {} sides carry exponents {x} and {y}", e + 1)));
            }
            *slot = x;
        }
        let shift = f.eps().upper_form(pt) - eps.upper_form(&p);
        out.add_term(p, &c.shift(shift));
    }
    Ok(out)
}

/// Quantum trace of a weight-one simple closed curve.
pub fn quantum_trace(tri: &IdealTriangulation, word: &CurveWord) -> Result<QLaurent> {
    state_sum(tri, &good_position(tri, word)?)
}

/// Quantum trace with the ascent at an explicit passage of the traced curve.
pub fn quantum_trace_from(tri: &IdealTriangulation, word: &CurveWord, start: usize) -> Result<QLaurent> {
    let traced = trace_word(tri, word)?;
    state_sum(tri, &good_position_from(tri, &traced.passages, start))
}
