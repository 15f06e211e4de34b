//! Biangle tangles drawn with both sides oriented upward.
//!
//! Endpoints on each side are indexed by height, `0` at the bottom; with the
//! picture convention a larger height means a larger elevation. A tangle is a
//! braid word: each crossing swaps the strands at heights `i` and `i+1`
//! while moving from left to right.

use std::collections::BTreeMap;

use crate::qtorus::OmegaScalar;

/// Which strand passes over at a crossing, read left to right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Over {
    /// The strand moving from height `i` up to `i+1` is on top.
    Rising,
    /// The strand moving from height `i+1` down to `i` is on top.
    Falling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Crossing {
    pub height: usize,
    pub over: Over,
}

/// Braid-like tangle with `width` endpoints on each side.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiangleDiagram {
    pub width: usize,
    pub crossings: Vec<Crossing>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Left(usize),
    Right(usize),
}

/// Crossing-free tangle: a planar matching of endpoints plus closed loops.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanarTangle {
    pub width: usize,
    /// Each pair is ordered so the smaller endpoint comes first.
    pub pairs: Vec<(Endpoint, Endpoint)>,
    pub loops: usize,
}

/// Scalar weights of the two smoothings `(identity, turnback)`.
pub fn crossing_weights(over: Over) -> (OmegaScalar, OmegaScalar) {
    match over {
        Over::Rising => (OmegaScalar::omega_pow(2), OmegaScalar::omega_pow(-2)),
        Over::Falling => (OmegaScalar::omega_pow(-2), OmegaScalar::omega_pow(2)),
    }
}

/// A component with both ends on the left side, states given top then bottom.
pub fn left_return(top: i8, bottom: i8) -> OmegaScalar {
    match (top, bottom) {
        (1, -1) => OmegaScalar::monomial(-1, -5),
        (-1, 1) => OmegaScalar::omega_pow(-1),
        _ => OmegaScalar::zero(),
    }
}

/// A component with both ends on the right side, states given top then bottom.
pub fn right_return(top: i8, bottom: i8) -> OmegaScalar {
    match (top, bottom) {
        (-1, 1) => OmegaScalar::monomial(-1, 5),
        (1, -1) => OmegaScalar::omega_pow(1),
        _ => OmegaScalar::zero(),
    }
}

/// Value of a trivial loop, `−ω⁴ − ω⁻⁴`.
pub fn loop_value() -> OmegaScalar {
    OmegaScalar::from_terms([(4, -1), (-4, -1)])
}

/// Expand every crossing by the Kauffman relation and merge equal tangles.
pub fn kauffman_resolve(d: &BiangleDiagram) -> Vec<(OmegaScalar, PlanarTangle)> {
    let c = d.crossings.len();
    assert!(c < 31, "too many crossings for exhaustive resolution");
    let mut merged: BTreeMap<PlanarTangle, OmegaScalar> = BTreeMap::new();
    for mask in 0u32..(1u32 << c) {
        let mut coeff = OmegaScalar::one();
        let mut turnback = Vec::with_capacity(c);
        for (i, x) in d.crossings.iter().enumerate() {
            let (id, tb) = crossing_weights(x.over);
            let e = mask >> i & 1 == 1;
            coeff = &coeff * if e { &tb } else { &id };
            turnback.push(e);
        }
        let tangle = planar_tangle(d, &turnback);
        *merged.entry(tangle).or_default() += &coeff;
    }
    merged.into_iter().filter(|(_, v)| !v.is_zero()).map(|(t, v)| (v, t)).collect()
}

/// Connectivity of a resolved braid word.
fn planar_tangle(d: &BiangleDiagram, turnback: &[bool]) -> PlanarTangle {
    let w = d.width;
    let cols = d.crossings.len() + 1;
    let node = |c: usize, h: usize| c * w + h;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); cols * w];
    let link = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
        adj[a].push(b);
        adj[b].push(a);
    };
    for (c, x) in d.crossings.iter().enumerate() {
        for h in 0..w {
            if h != x.height && h != x.height + 1 {
                link(node(c, h), node(c + 1, h), &mut adj);
            }
        }
        let (i, j) = (x.height, x.height + 1);
        if turnback[c] {
            link(node(c, i), node(c, j), &mut adj);
            link(node(c + 1, i), node(c + 1, j), &mut adj);
        } else {
            link(node(c, i), node(c + 1, i), &mut adj);
            link(node(c, j), node(c + 1, j), &mut adj);
        }
    }
    let endpoint = |v: usize| -> Option<Endpoint> {
        let (c, h) = (v / w, v % w);
        if c == 0 {
            Some(Endpoint::Left(h))
        } else if c == cols - 1 {
            Some(Endpoint::Right(h))
        } else {
            None
        }
    };
    let mut seen = vec![false; cols * w];
    let mut pairs = Vec::new();
    let mut loops = 0;
    if cols == 1 {
        pairs.extend((0..w).map(|h| (Endpoint::Left(h), Endpoint::Right(h))));
        seen.iter_mut().for_each(|s| *s = true);
    }
    // Interior nodes have degree two and boundary nodes degree one.
    for start in (0..cols * w).filter(|&v| endpoint(v).is_some()) {
        if seen[start] {
            continue;
        }
        let (mut prev, mut cur) = (usize::MAX, start);
        seen[cur] = true;
        while let Some(n) = adj[cur].iter().copied().find(|&n| n != prev) {
            prev = cur;
            cur = n;
            seen[cur] = true;
            if endpoint(cur).is_some() {
                break;
            }
        }
        let (a, b) = (endpoint(start).expect("boundary"), endpoint(cur).expect("boundary"));
        pairs.push(if a <= b { (a, b) } else { (b, a) });
    }
    for v in 0..cols * w {
        if seen[v] {
            continue;
        }
        loops += 1;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if !seen[u] {
                seen[u] = true;
                stack.extend(adj[u].iter().copied());
            }
        }
    }
    pairs.sort();
    PlanarTangle { width: w, pairs, loops }
}

/// Trace of a crossing-free tangle with the given endpoint states.
pub fn biangle_trace(t: &PlanarTangle, left: &[i8], right: &[i8]) -> OmegaScalar {
    let mut value = OmegaScalar::one();
    for &(a, b) in &t.pairs {
        let factor = match (a, b) {
            (Endpoint::Left(i), Endpoint::Right(j)) => {
                if left[i] == right[j] {
                    OmegaScalar::one()
                } else {
                    OmegaScalar::zero()
                }
            }
            (Endpoint::Left(i), Endpoint::Left(j)) => left_return(left[i.max(j)], left[i.min(j)]),
            (Endpoint::Right(i), Endpoint::Right(j)) => right_return(right[i.max(j)], right[i.min(j)]),
            (Endpoint::Right(_), Endpoint::Left(_)) => unreachable!("pairs are ordered"),
        };
        if factor.is_zero() {
            return factor;
        }
        value = &value * &factor;
    }
    for _ in 0..t.loops {
        value = &value * &loop_value();
    }
    value
}

/// Sign vector for a bit pattern: bit `h` set means `−` at height `h`.
pub fn signs_of(bits: usize, width: usize) -> Vec<i8> {
    (0..width).map(|h| if bits >> h & 1 == 1 { -1 } else { 1 }).collect()
}

/// Full trace table `W[left bits][right bits]` computed strip by strip.
pub fn transfer_matrix(d: &BiangleDiagram) -> Vec<Vec<OmegaScalar>> {
    let w = d.width;
    let size = 1usize << w;
    let mut rows: Vec<Vec<OmegaScalar>> = (0..size)
        .map(|i| {
            let mut row = vec![OmegaScalar::zero(); size];
            row[i] = OmegaScalar::one();
            row
        })
        .collect();
    for x in &d.crossings {
        let (id, tb) = crossing_weights(x.over);
        let (i, j) = (x.height, x.height + 1);
        let sign = |bits: usize, h: usize| if bits >> h & 1 == 1 { -1i8 } else { 1 };
        for row in rows.iter_mut() {
            let mut next = vec![OmegaScalar::zero(); size];
            for (mid, v) in row.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                next[mid] += &(v * &id);
                let b = left_return(sign(mid, j), sign(mid, i));
                if b.is_zero() {
                    continue;
                }
                let base = mid & !(1 << i) & !(1 << j);
                for out in [base | 1 << i, base | 1 << j] {
                    let c = right_return(sign(out, j), sign(out, i));
                    next[out] += &(&(v * &tb) * &(&b * &c));
                }
            }
            *row = next;
        }
    }
    rows
}

/// Braid word that carries heights ordered by `from` to heights ordered by
/// `to`; `over_key` decides which strand is on top at each swap.
pub fn sorting_braid(from: &[usize], to: &[usize], over_key: &[i64]) -> Vec<Crossing> {
    let target: BTreeMap<usize, usize> = to.iter().enumerate().map(|(h, &s)| (s, h)).collect();
    let mut cur = from.to_vec();
    let mut out = Vec::new();
    let n = cur.len();
    for pass in 0..n {
        for h in 0..n.saturating_sub(1 + pass) {
            let (a, b) = (cur[h], cur[h + 1]);
            if target[&a] > target[&b] {
                let over = if over_key[a] > over_key[b] { Over::Rising } else { Over::Falling };
                out.push(Crossing { height: h, over });
                cur.swap(h, h + 1);
            }
        }
    }
    debug_assert_eq!(cur, to);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagram(width: usize, xs: &[(usize, Over)]) -> BiangleDiagram {
        BiangleDiagram { width, crossings: xs.iter().map(|&(height, over)| Crossing { height, over }).collect() }
    }

    fn check_transfer(d: &BiangleDiagram) {
        let w = transfer_matrix(d);
        let res = kauffman_resolve(d);
        for l in 0..1usize << d.width {
            for r in 0..1usize << d.width {
                let (ls, rs) = (signs_of(l, d.width), signs_of(r, d.width));
                let mut direct = OmegaScalar::zero();
                for (c, t) in &res {
                    direct += &(c * &biangle_trace(t, &ls, &rs));
                }
                assert_eq!(w[l][r], direct, "left {ls:?} right {rs:?}");
            }
        }
    }

    #[test]
    fn resolution_counts() {
        let d0 = diagram(2, &[]);
        assert_eq!(kauffman_resolve(&d0).len(), 1);
        let d1 = diagram(2, &[(0, Over::Rising)]);
        let r1 = kauffman_resolve(&d1);
        assert_eq!(r1.len(), 2);
        let through = r1.iter().find(|(_, t)| t.pairs.iter().all(|(a, b)| matches!((a, b), (Endpoint::Left(_), Endpoint::Right(_))))).unwrap();
        assert_eq!(through.0, OmegaScalar::omega_pow(2));
        let d2 = diagram(3, &[(0, Over::Rising), (1, Over::Rising)]);
        let r2 = kauffman_resolve(&d2);
        assert!(r2.len() <= 4);
        for (c, _) in r2 {
            assert!([-4, 0, 4].contains(&c.as_unit_power().unwrap()));
        }
    }

    #[test]
    fn local_values() {
        let through = PlanarTangle { width: 1, pairs: vec![(Endpoint::Left(0), Endpoint::Right(0))], loops: 0 };
        assert!(biangle_trace(&through, &[1], &[1]).is_one());
        assert!(biangle_trace(&through, &[1], &[-1]).is_zero());
        let cap = PlanarTangle { width: 2, pairs: vec![(Endpoint::Left(0), Endpoint::Left(1))], loops: 0 };
        assert_eq!(biangle_trace(&cap, &[-1, 1], &[]), OmegaScalar::monomial(-1, -5));
        let lp = PlanarTangle { width: 0, pairs: vec![], loops: 1 };
        assert_eq!(biangle_trace(&lp, &[], &[]), loop_value());
    }

    #[test]
    fn transfer_matches_resolution() {
        check_transfer(&diagram(2, &[(0, Over::Rising)]));
        check_transfer(&diagram(2, &[(0, Over::Falling), (0, Over::Falling)]));
        check_transfer(&diagram(3, &[(0, Over::Rising), (1, Over::Falling), (0, Over::Rising)]));
        check_transfer(&diagram(4, &[(1, Over::Rising), (0, Over::Falling), (2, Over::Rising), (1, Over::Falling), (2, Over::Rising)]));
    }

    #[test]
    fn reidemeister_moves() {
        let id = transfer_matrix(&diagram(3, &[]));
        assert_eq!(transfer_matrix(&diagram(3, &[(1, Over::Rising), (1, Over::Falling)])), id);
        assert_eq!(transfer_matrix(&diagram(3, &[(0, Over::Falling), (0, Over::Rising)])), id);
        let lhs = transfer_matrix(&diagram(3, &[(0, Over::Rising), (1, Over::Rising), (0, Over::Rising)]));
        let rhs = transfer_matrix(&diagram(3, &[(1, Over::Rising), (0, Over::Rising), (1, Over::Rising)]));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn sorting_braid_permutes() {
        let xs = sorting_braid(&[2, 0, 1], &[0, 1, 2], &[5, 3, 9]);
        assert_eq!(xs.len(), 2);
        assert!(sorting_braid(&[0, 1], &[0, 1], &[0, 0]).is_empty());
    }
}
