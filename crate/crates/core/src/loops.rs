//! Loop decomposition of a toroidal pattern.
//!
//! Each vertex has exactly one out-edge per axis, so "continue on the other
//! axis" is a permutation of the `2MN` directed edges. Its orbits are the
//! loops.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::pattern::{Dir, DirectedEdge, Symmetry, ToroidalPattern, Vertex};

/// Handedness of the corner formed by `from` followed by `to`.
/// `E->N`, `N->W`, `W->S`, `S->E` are counterclockwise; their reverses are
/// clockwise. Straight continuations cannot occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Turn {
    Clockwise,
    Counterclockwise,
}

pub fn turn(from: Dir, to: Dir) -> Turn {
    use Dir::*;
    match (from, to) {
        (E, N) | (N, W) | (W, S) | (S, E) => Turn::Counterclockwise,
        (E, S) | (S, W) | (W, N) | (N, E) => Turn::Clockwise,
        _ => panic!("edges {from:?} -> {to:?} do not alternate"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loop {
    m: usize,
    n: usize,
    /// Cyclic edge sequence starting at the least edge.
    pub edges: Vec<DirectedEdge>,
    pub dx: i64,
    pub dy: i64,
    pub cw_turns: usize,
    pub ccw_turns: usize,
}

impl Loop {
    fn from_cycle(p: &ToroidalPattern, mut edges: Vec<DirectedEdge>) -> Loop {
        let start = edges
            .iter()
            .enumerate()
            .min_by_key(|(_, e)| **e)
            .map(|(k, _)| k)
            .unwrap_or(0);
        edges.rotate_left(start);
        let (mut dx, mut dy) = (0, 0);
        for e in &edges {
            let (ddx, ddy) = e.dir.delta();
            dx += ddx;
            dy += ddy;
        }
        let (mut cw, mut ccw) = (0, 0);
        for k in 0..edges.len() {
            match turn(edges[k].dir, edges[(k + 1) % edges.len()].dir) {
                Turn::Clockwise => cw += 1,
                Turn::Counterclockwise => ccw += 1,
            }
        }
        Loop {
            m: p.m(),
            n: p.n(),
            edges,
            dx,
            dy,
            cw_turns: cw,
            ccw_turns: ccw,
        }
    }

    pub fn start(&self) -> DirectedEdge {
        self.edges[0]
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `(dx / M, dy / N)`, refusing to truncate.
    pub fn homology(&self) -> Result<(i64, i64)> {
        let (m, n) = (self.m as i64, self.n as i64);
        if self.dx % m != 0 || self.dy % n != 0 {
            return Err(Error::DivisibilityViolation {
                dx: self.dx,
                dy: self.dy,
                m: self.m,
                n: self.n,
            });
        }
        Ok((self.dx / m, self.dy / n))
    }

    /// Homology class; panics on a divisibility failure, which would mean
    /// the tracer is broken.
    pub fn class(&self) -> (i64, i64) {
        self.homology()
            .expect("loop displacement must be a period multiple")
    }

    pub fn is_trivial(&self) -> bool {
        self.dx == 0 && self.dy == 0
    }

    /// `(#clockwise - #counterclockwise) / 4`.
    pub fn turning(&self) -> i64 {
        let d = self.cw_turns as i64 - self.ccw_turns as i64;
        debug_assert_eq!(d % 4, 0);
        d / 4
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.edges.iter().map(|e| e.tail)
    }

    pub fn visits_vertex_twice(&self) -> bool {
        let mut seen: Vec<Vertex> = self.vertices().collect();
        seen.sort_unstable();
        seen.windows(2).any(|w| w[0] == w[1])
    }
}

pub fn homology(l: &Loop) -> Result<(i64, i64)> {
    l.homology()
}

pub fn turning_number(l: &Loop) -> i64 {
    l.turning()
}

/// The successor of `e`: the out-edge of its head on the other axis.
pub fn next_edge(p: &ToroidalPattern, e: &DirectedEdge) -> Result<DirectedEdge> {
    if !p.is_valid_edge(e) {
        return Err(Error::InvalidEdge(*e));
    }
    Ok(step(p, e))
}

#[inline]
fn step(p: &ToroidalPattern, e: &DirectedEdge) -> DirectedEdge {
    p.out_edge(p.head(e), e.axis().other())
}

/// The loop through `e`, canonicalized at its least edge.
pub fn trace_from(p: &ToroidalPattern, e: &DirectedEdge) -> Result<Loop> {
    if !p.is_valid_edge(e) {
        return Err(Error::InvalidEdge(*e));
    }
    let mut edges = vec![*e];
    let mut cur = step(p, e);
    while cur != *e {
        edges.push(cur);
        cur = step(p, &cur);
    }
    Ok(Loop::from_cycle(p, edges))
}

#[derive(Debug, Clone)]
pub struct LoopDecomposition {
    pub pattern: ToroidalPattern,
    /// Sorted by starting edge.
    pub loops: Vec<Loop>,
}

impl LoopDecomposition {
    pub fn total_length(&self) -> usize {
        self.loops.iter().map(Loop::len).sum()
    }

    pub fn homology_sum(&self) -> (i64, i64) {
        self.loops.iter().fold((0, 0), |(a, b), l| {
            let (u, v) = l.class();
            (a + u, b + v)
        })
    }

    pub fn summary(&self) -> CountSummary {
        summarize(self)
    }

    /// Index of the loop containing each edge, by [`ToroidalPattern::edge_index`].
    pub fn edge_owner(&self) -> Vec<usize> {
        let mut owner = vec![usize::MAX; self.pattern.num_edges()];
        for (k, l) in self.loops.iter().enumerate() {
            for e in &l.edges {
                owner[self.pattern.edge_index(e)] = k;
            }
        }
        owner
    }
}

pub fn decompose(p: &ToroidalPattern) -> LoopDecomposition {
    let mut seen = vec![false; p.num_edges()];
    let mut loops = Vec::new();
    for e in p.edges() {
        if seen[p.edge_index(&e)] {
            continue;
        }
        let mut edges = Vec::new();
        let mut cur = e;
        loop {
            seen[p.edge_index(&cur)] = true;
            edges.push(cur);
            cur = step(p, &cur);
            if cur == e {
                break;
            }
        }
        // `e` is the first unvisited edge in canonical order, hence the least
        // edge of its orbit; `from_cycle` keeps it in front.
        loops.push(Loop::from_cycle(p, edges));
    }
    LoopDecomposition {
        pattern: p.clone(),
        loops,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CountSummary {
    pub total: usize,
    pub trivial: usize,
    pub nontrivial: usize,
    pub class_multiset: BTreeMap<(i64, i64), usize>,
    pub cw_trivial: usize,
    pub ccw_trivial: usize,
}

pub fn summarize(d: &LoopDecomposition) -> CountSummary {
    let mut s = CountSummary::default();
    for l in &d.loops {
        s.total += 1;
        *s.class_multiset.entry(l.class()).or_default() += 1;
        if l.is_trivial() {
            s.trivial += 1;
            match l.turning() {
                1 => s.cw_trivial += 1,
                -1 => s.ccw_trivial += 1,
                t => panic!("trivial loop with turning number {t}"),
            }
        } else {
            s.nontrivial += 1;
        }
    }
    s
}

impl CountSummary {
    pub fn nontrivial_classes(&self) -> impl Iterator<Item = ((i64, i64), usize)> + '_ {
        self.class_multiset
            .iter()
            .filter(|(c, _)| **c != (0, 0))
            .map(|(c, k)| (*c, *k))
    }
}

/// Reflection about the x-axis: `Cloth_{M,N}(x°, -y)` with `x°_k = x_{-k}`.
pub fn reflect_x(p: &ToroidalPattern) -> ToroidalPattern {
    Symmetry::ReflectX.apply(p)
}

/// Image of loop `l` of `p` in `sym.apply(p)`. The loop is re-traced in the
/// target pattern and checked edge-by-edge against the mapped edges.
pub fn carry_loop(p: &ToroidalPattern, l: &Loop, sym: Symmetry) -> Result<Loop> {
    let q = sym.apply(p);
    let start = sym.map_edge(&l.start(), p.m(), p.n());
    let image = trace_from(&q, &start)?;
    let mut mapped: Vec<DirectedEdge> = l
        .edges
        .iter()
        .map(|e| sym.map_edge(e, p.m(), p.n()))
        .collect();
    let mut traced = image.edges.clone();
    mapped.sort_unstable();
    traced.sort_unstable();
    if mapped != traced {
        return Err(Error::InvalidEdge(start));
    }
    Ok(image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{Axis, SignString};

    fn pat(x: &str, y: &str) -> ToroidalPattern {
        ToroidalPattern::parse(x, y).unwrap()
    }

    fn eight_by_eight() -> ToroidalPattern {
        pat("---+++++", "---+++++")
    }

    #[test]
    fn next_edge_examples() {
        let p = eight_by_eight();
        let e = DirectedEdge::new((0, 7), Dir::E);
        assert_eq!(
            next_edge(&p, &e).unwrap(),
            DirectedEdge::new((1, 7), Dir::S)
        );
        let plus = pat("+++", "+++");
        assert_eq!(
            next_edge(&plus, &DirectedEdge::new((0, 0), Dir::E)).unwrap(),
            DirectedEdge::new((1, 0), Dir::N)
        );
        assert_eq!(
            next_edge(&plus, &DirectedEdge::new((0, 0), Dir::W)),
            Err(Error::InvalidEdge(DirectedEdge::new((0, 0), Dir::W)))
        );
    }

    #[test]
    fn successor_is_a_bijection_on_all_4x4_patterns() {
        for x in SignString::enumerate(4) {
            for y in SignString::enumerate(4) {
                let p = ToroidalPattern::from_strings(x.clone(), y).unwrap();
                let mut hit = vec![0; p.num_edges()];
                for e in p.edges() {
                    hit[p.edge_index(&next_edge(&p, &e).unwrap())] += 1;
                }
                assert!(hit.iter().all(|&h| h == 1));
            }
        }
    }

    #[test]
    fn reference_loop_counts() {
        assert_eq!(decompose(&eight_by_eight()).loops.len(), 8);
        assert_eq!(decompose(&pat("++--", "++--")).loops.len(), 4);
        assert_eq!(decompose(&pat("++--", "+-+-")).loops.len(), 6);
    }

    #[test]
    fn reference_homology_classes() {
        let d = decompose(&eight_by_eight());
        let nontrivial: Vec<_> = d.loops.iter().filter(|l| !l.is_trivial()).collect();
        assert_eq!(nontrivial.len(), 2);
        assert!(nontrivial.iter().all(|l| l.class() == (1, 1)));

        let d = decompose(&pat("--+++++", "---++++"));
        let nontrivial: Vec<_> = d.loops.iter().filter(|l| !l.is_trivial()).collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(nontrivial[0].class(), (3, 1));
        assert_eq!(turning_number(nontrivial[0]), 0);
    }

    #[test]
    fn unit_square_loops() {
        // "+-" rows with "-+" columns give 4-cycles: E at row 0, then N at
        // column 1, W at row 1, S at column 0.
        let p = pat("+-+-", "-+-+");
        let d = decompose(&p);
        let sq = d.loops.iter().find(|l| l.len() == 4).unwrap();
        assert_eq!(sq.class(), (0, 0));
        assert_eq!(sq.turning().abs(), 1);
        let ccw = trace_from(&p, &DirectedEdge::new((0, 0), Dir::E)).unwrap();
        assert_eq!(ccw.len(), 4);
        assert_eq!(ccw.turning(), -1);
        let cw = trace_from(&p, &DirectedEdge::new((2, 1), Dir::W)).unwrap();
        assert_eq!(cw.len(), 4);
        assert_eq!(cw.turning(), 1);
    }

    #[test]
    fn clockwise_and_counterclockwise_turns_balance() {
        for x in SignString::enumerate(4) {
            for y in SignString::enumerate(4) {
                let p = ToroidalPattern::from_strings(x.clone(), y).unwrap();
                let d = decompose(&p);
                let cw: usize = d.loops.iter().map(|l| l.cw_turns).sum();
                let ccw: usize = d.loops.iter().map(|l| l.ccw_turns).sum();
                assert_eq!(cw, ccw);
                assert_eq!(cw, p.num_vertices());
            }
        }
    }

    #[test]
    fn mod_four_residue_pair() {
        let a = decompose(&pat("+-++--++", "+-++--++")).summary();
        let b = decompose(&pat("+-++--++", "+-++-+-+")).summary();
        assert_eq!(a.total % 4, 0);
        assert_eq!(b.total % 4, 2);
    }

    #[test]
    fn eight_by_eight_summary() {
        let s = decompose(&eight_by_eight()).summary();
        assert_eq!((s.total, s.trivial, s.nontrivial), (8, 6, 2));
        assert_eq!(s.class_multiset.get(&(1, 1)), Some(&2));
        assert_eq!(s.cw_trivial, s.ccw_trivial);
    }

    #[test]
    fn divisibility_is_checked() {
        let mut l = decompose(&eight_by_eight()).loops[0].clone();
        l.dx += 1;
        assert!(matches!(
            l.homology(),
            Err(Error::DivisibilityViolation { .. })
        ));
    }

    #[test]
    fn reflection_carries_loops() {
        let p = pat("--+++++", "---++++");
        let q = reflect_x(&p);
        assert_eq!(q.x(), &p.x().index_reversed());
        assert_eq!(q.y(), &p.y().negated());
        let d = decompose(&p);
        let l = d.loops.iter().find(|l| !l.is_trivial()).unwrap();
        let img = carry_loop(&p, l, Symmetry::ReflectX).unwrap();
        assert_eq!(img.class(), (3, -1));
        assert_eq!(img.len(), l.len());
    }

    #[test]
    fn reflect_twice_preserves_length_and_class_magnitudes() {
        for m in 3..=5 {
            for n in 3..=5 {
                for (xb, yb) in [(0b101u64, 0b011u64), (0b1110, 0b1), (0b10011, 0b1101)] {
                    let x = SignString::from_bits(xb, n);
                    let y = SignString::from_bits(yb, m);
                    let p = ToroidalPattern::new(m, n, x, y).unwrap();
                    let twice = reflect_x(&reflect_x(&p));
                    let key = |p: &ToroidalPattern| {
                        let mut v: Vec<_> = decompose(p)
                            .loops
                            .iter()
                            .map(|l| (l.len(), l.class().0.abs(), l.class().1.abs()))
                            .collect();
                        v.sort();
                        v
                    };
                    assert_eq!(key(&p), key(&twice));
                    assert_eq!(key(&p), key(&reflect_x(&p)));
                }
            }
        }
    }

    #[test]
    fn all_plus_reflection_flips_mu() {
        let p = pat("+++", "+++");
        let q = reflect_x(&p);
        assert_eq!(q.y().k(), -3);
        for l in decompose(&q).loops.iter().filter(|l| !l.is_trivial()) {
            assert_eq!(l.class(), (1, -1));
        }
    }

    #[test]
    fn out_edges_never_violate_orientation() {
        let p = pat("-+-+-", "++-");
        for i in 0..p.m() {
            for j in 0..p.n() {
                for a in [Axis::Horizontal, Axis::Vertical] {
                    assert!(p.is_valid_edge(&p.out_edge((i, j), a)));
                }
            }
        }
    }
}
