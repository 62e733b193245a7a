//! Height functions on the regions of a planar lift.
//!
//! Region `(i, j)` is the unit square with lower-left corner `(i, j)`. Its
//! height is `X(j + 1) - Y(i + 1)`, where `X`, `Y` are the signed partial
//! sums of the lifted strings (`X(t) = sum_{0 <= k < t} x~_k`, and
//! `-sum_{t <= k < 0} x~_k` for negative `t`). Crossing any oriented edge from
//! right to left raises the height by exactly one, which forces the minus
//! sign on the column term. Region `(-1, -1)` has height 0.

use crate::error::{Error, Result};
use crate::loops::Loop;
use crate::pattern::{Axis, Dir, PlanarLift, PlanarVertex, ToroidalPattern, Vertex};

pub type Region = (i64, i64);

/// Regions to the left and right of the planar edge leaving `tail` in `dir`.
pub fn edge_regions(tail: PlanarVertex, dir: Dir) -> (Region, Region) {
    let (a, b) = tail;
    match dir {
        Dir::E => ((a, b), (a, b - 1)),
        Dir::W => ((a - 1, b - 1), (a - 1, b)),
        Dir::N => ((a - 1, b), (a, b)),
        Dir::S => ((a, b - 1), (a - 1, b - 1)),
    }
}

pub fn region_height(lift: &PlanarLift, i: i64, j: i64) -> i64 {
    lift.x_partial(j + 1) - lift.y_partial(i + 1)
}

/// Doubled height of a planar edge: the sum of its two region heights.
pub fn edge_height2(lift: &PlanarLift, tail: PlanarVertex, dir: Dir) -> Result<i64> {
    let (l, r) = edge_regions(tail, dir);
    let hl = region_height(lift, l.0, l.1);
    let hr = region_height(lift, r.0, r.1);
    if hl != hr + 1 {
        return Err(Error::OrientationViolation {
            a: tail.0,
            b: tail.1,
            dir: dir.as_char(),
        });
    }
    Ok(hl + hr)
}

/// Height data of a pattern; on a balanced torus the region heights are
/// periodic and the field is read modulo the periods.
#[derive(Debug, Clone)]
pub struct HeightField {
    lift: PlanarLift,
    balanced: bool,
}

impl HeightField {
    pub fn planar(lift: PlanarLift) -> Self {
        let balanced = lift.base().kx() == 0 && lift.base().ky() == 0;
        HeightField { lift, balanced }
    }

    pub fn torus(p: &ToroidalPattern) -> Result<Self> {
        if p.kx() != 0 || p.ky() != 0 {
            return Err(Error::NotBalanced {
                kx: p.kx(),
                ky: p.ky(),
            });
        }
        Ok(HeightField::planar(p.lift()))
    }

    pub fn lift(&self) -> &PlanarLift {
        &self.lift
    }

    pub fn is_periodic(&self) -> bool {
        self.balanced
    }

    pub fn region(&self, i: i64, j: i64) -> i64 {
        region_height(&self.lift, i, j)
    }

    pub fn edge2(&self, tail: PlanarVertex, dir: Dir) -> Result<i64> {
        edge_height2(&self.lift, tail, dir)
    }

    /// Doubled height of a torus edge, lifted to the fundamental domain.
    pub fn torus_edge2(&self, tail: Vertex, dir: Dir) -> Result<i64> {
        self.edge2((tail.0 as i64, tail.1 as i64), dir)
    }
}

/// The common doubled height of the edges of a loop in a balanced pattern.
pub fn loop_height2(p: &ToroidalPattern, l: &Loop) -> Result<i64> {
    let field = HeightField::torus(p)?;
    let first = field.torus_edge2(l.start().tail, l.start().dir)?;
    for e in &l.edges[1..] {
        let h = field.torus_edge2(e.tail, e.dir)?;
        if h != first {
            return Err(Error::InconsistentHeight {
                first,
                other: h,
                at: e.tail,
            });
        }
    }
    Ok(first)
}

/// Whether `h(i + M, j) = h(i, j + N) = h(i, j)` on the window of
/// `periods` fundamental domains in each direction around the origin.
pub fn descends_to_torus(lift: &PlanarLift, periods: i64) -> bool {
    let m = lift.base().m() as i64;
    let n = lift.base().n() as i64;
    for i in -periods * m..periods * m {
        for j in -periods * n..periods * n {
            let h = region_height(lift, i, j);
            if region_height(lift, i + m, j) != h || region_height(lift, i, j + n) != h {
                return false;
            }
        }
    }
    true
}

/// Doubled heights of the first `steps` edges of the lifted path that
/// leaves `start` along `axis`.
pub fn path_heights(
    lift: &PlanarLift,
    start: PlanarVertex,
    axis: Axis,
    steps: usize,
) -> Result<Vec<i64>> {
    let mut v = start;
    let mut axis = axis;
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let d = lift.out_dir(v, axis);
        out.push(edge_height2(lift, v, d)?);
        let (dx, dy) = d.delta();
        v = (v.0 + dx, v.1 + dy);
        axis = axis.other();
    }
    Ok(out)
}

/// For a balanced pattern, rotate both strings so that every partial sum
/// is `<= 0`. Returns the rotated pattern and the two offsets.
pub fn nonpositive_rotation(p: &ToroidalPattern) -> Result<(ToroidalPattern, usize, usize)> {
    if p.kx() != 0 || p.ky() != 0 {
        return Err(Error::NotBalanced {
            kx: p.kx(),
            ky: p.ky(),
        });
    }
    let rx = p
        .x()
        .nonpositive_rotation()
        .expect("balanced string has a rotation");
    let ry = p
        .y()
        .nonpositive_rotation()
        .expect("balanced string has a rotation");
    let q = ToroidalPattern::new(p.m(), p.n(), p.x().rotated(rx), p.y().rotated(ry))?;
    Ok((q, rx, ry))
}

/// Doubled heights of the horizontal edges `{(-1, j), (0, j)}` for
/// `j in 0..N` and of the vertical edges `{(i, -1), (i, 0)}` for `i in 0..M`.
/// The sign of the edge height does not depend on its orientation, so each
/// edge is measured in whichever direction the pattern orients it.
pub fn axis_edge_heights(lift: &PlanarLift) -> (Vec<i64>, Vec<i64>) {
    let m = lift.base().m() as i64;
    let n = lift.base().n() as i64;
    let horizontal = (0..n)
        .map(|j| {
            let tail = if lift.x_at(j).is_plus() {
                (-1, j)
            } else {
                (0, j)
            };
            edge_height2(lift, tail, lift.out_dir(tail, Axis::Horizontal))
                .expect("edge taken from the lift orientation")
        })
        .collect();
    let vertical = (0..m)
        .map(|i| {
            let tail = if lift.y_at(i).is_plus() {
                (i, -1)
            } else {
                (i, 0)
            };
            edge_height2(lift, tail, lift.out_dir(tail, Axis::Vertical))
                .expect("edge taken from the lift orientation")
        })
        .collect();
    (horizontal, vertical)
}

/// After the nonpositive rotation of a balanced pattern, every horizontal
/// edge crossing the line `x = -1/2` lies strictly below every vertical edge
/// crossing `y = -1/2`, so no loop can meet both lines.
pub fn axis_edges_separated(p: &ToroidalPattern) -> Result<bool> {
    let (q, _, _) = nonpositive_rotation(p)?;
    let (h, v) = axis_edge_heights(&q.lift());
    let hmax = h.iter().max().copied().unwrap_or(i64::MIN);
    let vmin = v.iter().min().copied().unwrap_or(i64::MAX);
    Ok(hmax < vmin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loops::decompose;
    use crate::pattern::SignString;
    use std::collections::{BTreeMap, VecDeque};

    fn pat(x: &str, y: &str) -> ToroidalPattern {
        ToroidalPattern::parse(x, y).unwrap()
    }

    #[test]
    fn anchor_and_small_values() {
        let plus = pat("+++", "+++").lift();
        assert_eq!(region_height(&plus, -1, -1), 0);
        assert_eq!(region_height(&plus, 0, 0), 0);
        assert_eq!(region_height(&plus, 0, -1), -1);
        assert_eq!(region_height(&plus, -1, 0), 1);
        let eight_by_eight = pat("---+++++", "---+++++").lift();
        assert_eq!(region_height(&eight_by_eight, -1, -1), 0);
        assert_eq!(region_height(&eight_by_eight, 0, 0), 0);
        assert_eq!(region_height(&eight_by_eight, 0, -1), 1);
    }

    #[test]
    fn all_plus_e_edge() {
        let lift = pat("+++", "+++").lift();
        let h = edge_height2(&lift, (0, 0), Dir::E).unwrap();
        let (_, r) = edge_regions((0, 0), Dir::E);
        assert_eq!(h, 2 * region_height(&lift, r.0, r.1) + 1);
        assert!(matches!(
            edge_height2(&lift, (0, 0), Dir::W),
            Err(Error::OrientationViolation { .. })
        ));
    }

    #[test]
    fn summing_both_axes_with_one_sign_breaks_the_rule() {
        // h(i, j) = X(j+1) + Y(i+1) fails left = right + 1 on vertical edges.
        let lift = pat("+++", "+++").lift();
        let naive = |i: i64, j: i64| lift.x_partial(j + 1) + lift.y_partial(i + 1);
        let (l, r) = edge_regions((0, 0), Dir::N);
        assert_ne!(naive(l.0, l.1), naive(r.0, r.1) + 1);
        let (l, r) = edge_regions((0, 0), Dir::N);
        assert_eq!(
            region_height(&lift, l.0, l.1),
            region_height(&lift, r.0, r.1) + 1
        );
    }

    fn small_patterns() -> impl Iterator<Item = ToroidalPattern> {
        (3..=5).flat_map(|m| {
            (3..=5).flat_map(move |n| {
                SignString::enumerate(n).flat_map(move |x| {
                    SignString::enumerate(m)
                        .map(move |y| ToroidalPattern::new(m, n, x.clone(), y).unwrap())
                })
            })
        })
    }

    #[test]
    fn left_right_rule_on_windows() {
        for p in small_patterns().step_by(7) {
            let lift = p.lift();
            let (m, n) = (p.m() as i64, p.n() as i64);
            for a in -m..2 * m {
                for b in -n..2 * n {
                    for axis in [Axis::Horizontal, Axis::Vertical] {
                        let d = lift.out_dir((a, b), axis);
                        assert!(edge_height2(&lift, (a, b), d).is_ok());
                    }
                }
            }
        }
    }

    #[test]
    fn path_height_is_constant() {
        for p in small_patterns().step_by(5) {
            let lift = p.lift();
            for start in [(0, 0), (-3, 2), (4, -1)] {
                for axis in [Axis::Horizontal, Axis::Vertical] {
                    let hs = path_heights(&lift, start, axis, 200).unwrap();
                    assert!(hs.windows(2).all(|w| w[0] == w[1]), "{p} {start:?}");
                }
            }
        }
    }

    /// Flood fill over regions, joining two diagonal squares through a vertex
    /// whenever neither path at that vertex separates them.
    fn flood_components(lift: &PlanarLift, lo: i64, hi: i64) -> BTreeMap<Region, usize> {
        let mut comp: BTreeMap<Region, usize> = BTreeMap::new();
        let mut next = 0;
        for si in lo..hi {
            for sj in lo..hi {
                if comp.contains_key(&(si, sj)) {
                    continue;
                }
                comp.insert((si, sj), next);
                let mut queue = VecDeque::from([(si, sj)]);
                while let Some((i, j)) = queue.pop_front() {
                    // The four corners of square (i, j).
                    for (a, b) in [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)] {
                        for (u, w) in joined_quadrants(lift, (a, b)) {
                            for (s, t) in [(u, w), (w, u)] {
                                if s == (i, j)
                                    && (lo..hi).contains(&t.0)
                                    && (lo..hi).contains(&t.1)
                                    && !comp.contains_key(&t)
                                {
                                    comp.insert(t, next);
                                    queue.push_back(t);
                                }
                            }
                        }
                    }
                }
                next += 1;
            }
        }
        comp
    }

    /// The diagonal pair of squares at vertex `v` not cut off by either
    /// path through `v`.
    fn joined_quadrants(lift: &PlanarLift, v: PlanarVertex) -> Vec<(Region, Region)> {
        let (a, b) = v;
        let h = lift.out_dir(v, Axis::Horizontal);
        let vert = lift.out_dir(v, Axis::Vertical);
        let quad =
            |east: bool, north: bool| (if east { a } else { a - 1 }, if north { b } else { b - 1 });
        let out_e = h == Dir::E;
        let out_n = vert == Dir::N;
        vec![(quad(!out_e, !out_n), quad(out_e, out_n))]
    }

    #[test]
    fn unseparated_regions_share_height() {
        for p in small_patterns().step_by(11) {
            let lift = p.lift();
            let comp = flood_components(&lift, -6, 6);
            let mut height_of: BTreeMap<usize, i64> = BTreeMap::new();
            for (r, c) in &comp {
                let h = region_height(&lift, r.0, r.1);
                assert_eq!(*height_of.entry(*c).or_insert(h), h, "{p} {r:?}");
            }
        }
    }

    #[test]
    fn torus_descent_iff_balanced() {
        for p in small_patterns().step_by(3) {
            let balanced = p.kx() == 0 && p.ky() == 0;
            assert_eq!(descends_to_torus(&p.lift(), 2), balanced, "{p}");
        }
    }

    #[test]
    fn loop_heights_on_balanced_patterns() {
        let p = pat("+-+-", "+-+-");
        let d = decompose(&p);
        for l in &d.loops {
            loop_height2(&p, l).unwrap();
        }
        assert!(matches!(
            loop_height2(
                &pat("++-", "+-+-"),
                &decompose(&pat("++-", "+-+-")).loops[0]
            ),
            Err(Error::NotBalanced { .. })
        ));
    }

    #[test]
    fn loops_meeting_at_a_vertex_differ_by_one() {
        // The two paths through a vertex bound the two cut-off corners, so
        // their doubled heights are 2h + 1 and 2h - 1. Equal-height loops are
        // therefore vertex-disjoint, and no loop revisits a vertex.
        for x in SignString::enumerate(4).filter(SignString::is_balanced) {
            for y in SignString::enumerate(4).filter(SignString::is_balanced) {
                let p = ToroidalPattern::from_strings(x.clone(), y).unwrap();
                let d = decompose(&p);
                let hs: Vec<i64> = d
                    .loops
                    .iter()
                    .map(|l| loop_height2(&p, l).unwrap())
                    .collect();
                for (a, la) in d.loops.iter().enumerate() {
                    assert!(!la.visits_vertex_twice());
                    let va: Vec<_> = la.vertices().collect();
                    for (b, lb) in d.loops.iter().enumerate().skip(a + 1) {
                        let shared = lb.vertices().any(|v| va.contains(&v));
                        if hs[a] == hs[b] {
                            assert!(!shared, "{p}");
                        }
                        if shared {
                            assert_eq!((hs[a] - hs[b]).abs(), 2, "{p}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn axis_edge_separation_exhaustive() {
        for m in 3..=6 {
            for n in 3..=6 {
                for x in SignString::enumerate(n).filter(SignString::is_balanced) {
                    for y in SignString::enumerate(m).filter(SignString::is_balanced) {
                        let p = ToroidalPattern::new(m, n, x.clone(), y).unwrap();
                        assert!(axis_edges_separated(&p).unwrap(), "{p}");
                    }
                }
            }
        }
    }
}
