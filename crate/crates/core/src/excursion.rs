//! Lifting nontrivial loops to the plane and cutting the lifts into
//! excursions whose lengths have fixed residues mod 8.

use std::fmt;

use crate::error::{Error, Result};
use crate::loops::{carry_loop, decompose, Loop};
use crate::pattern::{Dir, DirectedEdge, PlanarLift, PlanarVertex, Symmetry, ToroidalPattern};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarPath {
    pub vertices: Vec<PlanarVertex>,
}

impl PlanarPath {
    pub fn new(vertices: Vec<PlanarVertex>) -> Self {
        PlanarPath { vertices }
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn first(&self) -> PlanarVertex {
        self.vertices[0]
    }

    pub fn last(&self) -> PlanarVertex {
        *self.vertices.last().expect("nonempty path")
    }

    pub fn dirs(&self) -> Option<Vec<Dir>> {
        self.vertices
            .windows(2)
            .map(|w| Dir::from_delta((w[1].0 - w[0].0, w[1].1 - w[0].1)))
            .collect()
    }

    /// Consecutive vertices are adjacent and the edges alternate axes.
    pub fn is_alternating(&self) -> bool {
        match self.dirs() {
            None => false,
            Some(ds) => ds.windows(2).all(|w| w[0].axis() != w[1].axis()),
        }
    }

    /// Every edge agrees with the orientation of `lift`.
    pub fn is_oriented(&self, lift: &PlanarLift) -> bool {
        match self.dirs() {
            None => false,
            Some(ds) => self
                .vertices
                .iter()
                .zip(ds)
                .all(|(v, d)| lift.is_oriented(*v, d)),
        }
    }
}

/// A nontrivial loop's lift, `v_t = v_{t mod L} + floor(t / L) * shift`.
#[derive(Debug, Clone)]
pub struct LiftedLoop {
    base: Vec<PlanarVertex>,
    shift: (i64, i64),
}

impl LiftedLoop {
    pub fn new(l: &Loop) -> Self {
        let start = l.start().tail;
        let mut v = (start.0 as i64, start.1 as i64);
        let mut base = Vec::with_capacity(l.len());
        for e in &l.edges {
            base.push(v);
            let (dx, dy) = e.dir.delta();
            v = (v.0 + dx, v.1 + dy);
        }
        LiftedLoop {
            base,
            shift: (l.dx, l.dy),
        }
    }

    pub fn period(&self) -> usize {
        self.base.len()
    }

    pub fn shift(&self) -> (i64, i64) {
        self.shift
    }

    pub fn vertex(&self, t: i64) -> PlanarVertex {
        let l = self.base.len() as i64;
        let k = t.div_euclid(l);
        let v = self.base[t.rem_euclid(l) as usize];
        (v.0 + k * self.shift.0, v.1 + k * self.shift.1)
    }

    pub fn window(&self, from: i64, to: i64) -> PlanarPath {
        PlanarPath::new((from..=to).map(|t| self.vertex(t)).collect())
    }
}

/// A window of `reps * length` edges of the lift, starting from the
/// canonical start vertex in the fundamental domain.
pub fn lift_loop(p: &ToroidalPattern, l: &Loop, reps: usize) -> PlanarPath {
    let path = LiftedLoop::new(l).window(0, (reps * l.len()) as i64);
    debug_assert!(path.is_oriented(&p.lift()));
    path
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AExcursion {
    pub a: i64,
    pub i: i64,
    pub j: i64,
    pub body: PlanarPath,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ABExcursion {
    pub a: i64,
    pub b: i64,
    pub p: i64,
    pub q: i64,
    pub kc: i64,
    pub body: PlanarPath,
}

pub fn is_a_excursion(path: &PlanarPath, a: i64) -> bool {
    let n = path.vertices.len();
    if n < 3 || !path.is_alternating() {
        return false;
    }
    let (s, t) = (path.first(), path.last());
    s.0 == a - 1 && t.0 == a - 1 && t.1 > s.1 && path.vertices[1..n - 1].iter().all(|v| v.0 >= a)
}

pub fn is_ab_excursion(path: &PlanarPath, a: i64, b: i64) -> bool {
    let n = path.vertices.len();
    if n < 2 || !path.is_alternating() {
        return false;
    }
    let (s, t) = (path.first(), path.last());
    s.1 == b - 1
        && s.0 >= a
        && t.0 == a - 1
        && t.1 >= b
        && path.vertices[1..n - 1].iter().all(|v| v.0 >= a && v.1 >= b)
}

/// Residue mod 8 predicted for an a-excursion from `(a-1, i)` to `(a-1, j)`.
pub fn a_residue(i: i64, j: i64) -> i64 {
    (2 * (j - i) + 1).rem_euclid(8)
}

/// Residue mod 8 predicted for an (a,b)-excursion from `(p, b-1)` to `(a-1, q)`.
pub fn ab_residue(a: i64, b: i64, p: i64, q: i64, kc: i64) -> i64 {
    (2 * (q - b - p + a + kc)).rem_euclid(8)
}

/// `-sum_{k=b}^{q} x~_k`.
pub fn k_c(lift: &PlanarLift, b: i64, q: i64) -> i64 {
    -(lift.x_partial(q + 1) - lift.x_partial(b))
}

fn require_class(
    p: &ToroidalPattern,
    l: &Loop,
    ok: bool,
    expected: &'static str,
) -> Result<(i64, i64)> {
    if !p.is_valid_edge(&l.start()) {
        return Err(Error::InvalidEdge(l.start()));
    }
    let (lambda, mu) = l.homology()?;
    if !ok_class(lambda, mu, ok) {
        return Err(Error::WrongHomology {
            lambda,
            mu,
            expected,
        });
    }
    Ok((lambda, mu))
}

fn ok_class(lambda: i64, mu: i64, vertical: bool) -> bool {
    if vertical {
        lambda == 0 && mu > 0
    } else {
        lambda < 0 && mu > 0
    }
}

#[derive(Debug, Clone)]
pub struct VerticalDecomposition {
    pub a: i64,
    pub excursions: Vec<AExcursion>,
    /// Tails and directions of the lift's edges on the line `x = a - 1`,
    /// over one period.
    pub cut_edges: Vec<(PlanarVertex, Dir)>,
}

impl VerticalDecomposition {
    pub fn cuts_point_up(&self) -> bool {
        self.cut_edges.iter().all(|(_, d)| *d == Dir::N)
    }

    /// `sum (length + 1)` over the excursions of one period.
    pub fn period_length(&self) -> usize {
        self.excursions.iter().map(|e| e.body.len() + 1).sum()
    }
}

/// Cut the lift of a `(0, mu > 0)` loop along its edges on `x = a - 1`.
pub fn decompose_vertical(p: &ToroidalPattern, l: &Loop) -> Result<VerticalDecomposition> {
    require_class(p, l, true, "lambda = 0 and mu > 0")?;
    let lift = LiftedLoop::new(l);
    let len = lift.period() as i64;
    let a = 1
        + (0..len)
            .map(|t| lift.vertex(t).0)
            .min()
            .expect("nonempty loop");
    let on_line = |t: i64| lift.vertex(t).0 == a - 1 && lift.vertex(t + 1).0 == a - 1;
    let cuts: Vec<i64> = (0..len).filter(|&t| on_line(t)).collect();
    let cut_edges = cuts
        .iter()
        .map(|&t| {
            let (u, v) = (lift.vertex(t), lift.vertex(t + 1));
            (
                u,
                Dir::from_delta((v.0 - u.0, v.1 - u.1)).expect("adjacent"),
            )
        })
        .collect();
    let mut excursions = Vec::new();
    for (k, &t) in cuts.iter().enumerate() {
        let next = if k + 1 < cuts.len() {
            cuts[k + 1]
        } else {
            cuts[0] + len
        };
        let body = lift.window(t + 1, next);
        excursions.push(AExcursion {
            a,
            i: body.first().1,
            j: body.last().1,
            body,
        });
    }
    Ok(VerticalDecomposition {
        a,
        excursions,
        cut_edges,
    })
}

/// Indices `i < 0 < j` of the lift of a `(lambda < 0, mu > 0)` loop such that
/// `v_i .. v_j` is an (a,b)-excursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbWindow {
    pub a: i64,
    pub b: i64,
    pub i: i64,
    pub j: i64,
}

pub fn find_ab_excursion(p: &ToroidalPattern, l: &Loop) -> Result<AbWindow> {
    require_class(p, l, false, "lambda < 0 and mu > 0")?;
    let lift = LiftedLoop::new(l);
    Ok(scan_ab_window(&lift))
}

fn scan_ab_window(lift: &LiftedLoop) -> AbWindow {
    let len = lift.period() as i64;
    // Later vertices only rise and earlier ones only move right, so each
    // infimum over a half-line is attained within one period.
    let i = (1..)
        .map(|s: i64| -s)
        .find(|&i| {
            let bi = lift.vertex(i).1;
            (i + 1..=i + len).all(|n| lift.vertex(n).1 > bi)
        })
        .expect("the lift rises without bound");
    let j = (1..)
        .find(|&j: &i64| {
            let aj = lift.vertex(j).0;
            (j - len..j).all(|n| lift.vertex(n).0 > aj)
        })
        .expect("the lift moves left without bound");
    AbWindow {
        a: lift.vertex(j).0 + 1,
        b: lift.vertex(i).1 + 1,
        i,
        j,
    }
}

pub fn ab_excursion_at(lift: &PlanarLift, loop_lift: &LiftedLoop, i: i64, j: i64) -> ABExcursion {
    let body = loop_lift.window(i, j);
    let (s, t) = (body.first(), body.last());
    let (a, b) = (t.0 + 1, s.1 + 1);
    ABExcursion {
        a,
        b,
        p: s.0,
        q: t.1,
        kc: k_c(lift, b, t.1),
        body,
    }
}

/// Starting abscissae of the horizontal edges of an (a,b)-excursion lying on
/// `y = b`, in path order.
pub fn bottom_row_starts(e: &ABExcursion) -> Vec<i64> {
    e.body
        .vertices
        .windows(2)
        .filter(|w| w[0].1 == e.b && w[1].1 == e.b)
        .map(|w| w[0].0)
        .collect()
}

/// The crossing sequence on `y = b` is strictly monotone (decreasing when
/// `x~_b = -1`, increasing otherwise) and of constant parity.
pub fn bottom_row_monotone(lift: &PlanarLift, e: &ABExcursion) -> bool {
    let ps = bottom_row_starts(e);
    if ps.first() != Some(&e.p) {
        return false;
    }
    let down = !lift.x_at(e.b).is_plus();
    let monotone = ps
        .windows(2)
        .all(|w| if down { w[0] > w[1] } else { w[0] < w[1] });
    let parity = ps.iter().all(|q| (q - ps[0]).rem_euclid(2) == 0);
    monotone && parity
}

/// Symmetry taking a nontrivial class to `(lambda < 0, mu > 0)` or
/// `(0, mu > 0)`; `None` for the trivial class.
pub fn canonical_symmetry(class: (i64, i64)) -> Option<Symmetry> {
    let (l, m) = class;
    Some(match (l.signum(), m.signum()) {
        (0, 0) => return None,
        (-1, 1) | (0, 1) => Symmetry::Identity,
        (0, -1) | (-1, -1) => Symmetry::ReflectX,
        (1, 1) => Symmetry::ReflectY,
        (1, -1) => Symmetry::Rotate180,
        (1, 0) => Symmetry::Transpose,
        (-1, 0) => Symmetry::TransposeReflectX,
        _ => unreachable!(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExcursionKind {
    A,
    AB,
}

/// One harvested excursion. For a-excursions `p`, `q` hold the start and end
/// ordinates `i`, `j`, and `b`, `kc` are absent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct HarvestRecord {
    pub pattern: String,
    pub loop_index: usize,
    pub loop_start: DirectedEdge,
    pub transform: Symmetry,
    pub kind: ExcursionKind,
    pub a: i64,
    pub b: Option<i64>,
    pub p: i64,
    pub q: i64,
    pub kc: Option<i64>,
    pub length: usize,
    pub predicted: i64,
}

impl HarvestRecord {
    pub const HEADER: &'static str =
        "#harvest v1: kind pattern loop start transform a b p q kc length predicted";

    pub fn holds(&self) -> bool {
        (self.length as i64).rem_euclid(8) == self.predicted
    }
}

impl fmt::Display for HarvestRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<i64>| v.map_or("-".to_string(), |v| v.to_string());
        write!(
            f,
            "{} {} {} {} {} {} {} {} {} {} {} {}",
            match self.kind {
                ExcursionKind::A => "a",
                ExcursionKind::AB => "ab",
            },
            self.pattern,
            self.loop_index,
            self.loop_start,
            self.transform.name(),
            self.a,
            opt(self.b),
            self.p,
            self.q,
            opt(self.kc),
            self.length,
            self.predicted
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct LoopHarvest {
    pub records: Vec<HarvestRecord>,
    /// Structural failures: downward cut edges, broken windows, period
    /// bookkeeping, non-monotone bottom rows.
    pub anomalies: Vec<String>,
}

impl LoopHarvest {
    pub fn residue_failures(&self) -> impl Iterator<Item = &HarvestRecord> {
        self.records.iter().filter(|r| !r.holds())
    }

    fn merge(&mut self, other: LoopHarvest) {
        self.records.extend(other.records);
        self.anomalies.extend(other.anomalies);
    }
}

/// Harvest the excursions of one nontrivial loop, after moving it into a
/// canonical class by a grid symmetry.
pub fn harvest_loop(p: &ToroidalPattern, index: usize, l: &Loop) -> Result<LoopHarvest> {
    let Some(sym) = canonical_symmetry(l.homology()?) else {
        return Ok(LoopHarvest::default());
    };
    let q = sym.apply(p);
    let image = carry_loop(p, l, sym)?;
    let (lambda, mu) = image.homology()?;
    let mut out = LoopHarvest::default();
    let tag = |kind, a, b, pp, qq, kc, length, predicted| HarvestRecord {
        pattern: p.id(),
        loop_index: index,
        loop_start: l.start(),
        transform: sym,
        kind,
        a,
        b,
        p: pp,
        q: qq,
        kc,
        length,
        predicted,
    };
    let where_ = format!("{} loop {} via {}", p.id(), index, sym.name());

    let loop_lift = LiftedLoop::new(&image);
    let len = loop_lift.period() as i64;
    let shift = (lambda * q.m() as i64, mu * q.n() as i64);
    if loop_lift.shift() != shift
        || (-len..len).any(|t| {
            let (u, v) = (loop_lift.vertex(t), loop_lift.vertex(t + len));
            (v.0 - u.0, v.1 - u.1) != shift
        })
    {
        out.anomalies
            .push(format!("{where_}: period shift is not (lM, mN)"));
    }
    let planar = q.lift();
    if !loop_lift.window(-len, 2 * len).is_oriented(&planar) {
        out.anomalies
            .push(format!("{where_}: lift disagrees with orientation"));
    }

    if lambda == 0 {
        let dec = decompose_vertical(&q, &image)?;
        if !dec.cuts_point_up() {
            out.anomalies
                .push(format!("{where_}: downward cut edge on x = a - 1"));
        }
        if dec.period_length() != image.len() {
            out.anomalies
                .push(format!("{where_}: excursion lengths do not sum to L"));
        }
        for e in &dec.excursions {
            if !is_a_excursion(&e.body, e.a) {
                out.anomalies.push(format!(
                    "{where_}: segment from {:?} is not an a-excursion",
                    e.body.first()
                ));
            }
            out.records.push(tag(
                ExcursionKind::A,
                e.a,
                None,
                e.i,
                e.j,
                None,
                e.body.len(),
                a_residue(e.i, e.j),
            ));
        }
    } else {
        let w = scan_ab_window(&loop_lift);
        for k in 0..=2 {
            for ell in 0..=2 {
                let (i, j) = (w.i - k * len, w.j + ell * len);
                let e = ab_excursion_at(&planar, &loop_lift, i, j);
                if !is_ab_excursion(&e.body, e.a, e.b) {
                    out.anomalies.push(format!(
                        "{where_}: window [{i}, {j}] is not an (a,b)-excursion"
                    ));
                    continue;
                }
                if !bottom_row_monotone(&planar, &e) {
                    out.anomalies.push(format!(
                        "{where_}: bottom row of [{i}, {j}] is not monotone"
                    ));
                }
                out.records.push(tag(
                    ExcursionKind::AB,
                    e.a,
                    Some(e.b),
                    e.p,
                    e.q,
                    Some(e.kc),
                    e.body.len(),
                    ab_residue(e.a, e.b, e.p, e.q, e.kc),
                ));
            }
        }
    }
    Ok(out)
}

/// Harvest every nontrivial loop of a pattern.
pub fn harvest_pattern(p: &ToroidalPattern) -> Result<LoopHarvest> {
    let d = decompose(p);
    let mut out = LoopHarvest::default();
    for (k, l) in d.loops.iter().enumerate() {
        if !l.is_trivial() {
            out.merge(harvest_loop(p, k, l)?);
        }
    }
    Ok(out)
}

/// Whether a planar path starting on the canonical axis is closed.
pub fn is_closed(path: &PlanarPath) -> bool {
    path.first() == path.last()
}
