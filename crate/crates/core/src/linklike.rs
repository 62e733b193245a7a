//! Link-like graphs as oriented 4-regular plane maps. Seifert circles
//! come from smoothing every crossing; triple point moves rewire triangles.
//!
//! A crossing `c` owns half-edges `4c .. 4c + 4` in counterclockwise order;
//! opposite slots `s` and `s + 2` carry one strand straight through. `arc`
//! is the fixed-point-free involution pairing half-edges into edges.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::pattern::SignString;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkLikeGraph {
    arc: Vec<usize>,
    out: Vec<bool>,
    strand: Vec<usize>,
    /// Grid position of each crossing when built from a pattern.
    labels: Vec<Option<(usize, usize)>>,
}

#[inline]
fn crossing_of(h: usize) -> usize {
    h / 4
}

#[inline]
fn slot_of(h: usize) -> usize {
    h % 4
}

#[inline]
fn rot(h: usize, k: usize) -> usize {
    4 * crossing_of(h) + (slot_of(h) + k) % 4
}

const W: usize = 0;
const S: usize = 1;
const E: usize = 2;
const N: usize = 3;

impl LinkLikeGraph {
    pub fn from_parts(
        arc: Vec<usize>,
        out: Vec<bool>,
        strand: Vec<usize>,
        labels: Vec<Option<(usize, usize)>>,
    ) -> Result<Self> {
        let g = LinkLikeGraph {
            arc,
            out,
            strand,
            labels,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn num_crossings(&self) -> usize {
        self.arc.len() / 4
    }

    pub fn num_edges(&self) -> usize {
        self.arc.len() / 2
    }

    pub fn arc(&self, h: usize) -> usize {
        self.arc[h]
    }

    pub fn is_out(&self, h: usize) -> bool {
        self.out[h]
    }

    pub fn strand(&self, h: usize) -> usize {
        self.strand[h]
    }

    pub fn label(&self, c: usize) -> Option<(usize, usize)> {
        self.labels[c]
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.arc.len();
        if !n.is_multiple_of(4)
            || self.out.len() != n
            || self.strand.len() != n
            || self.labels.len() != n / 4
        {
            return Err(Error::InvalidMap("table lengths disagree".into()));
        }
        for h in 0..n {
            let g = self.arc[h];
            if g >= n || g == h || self.arc[g] != h {
                return Err(Error::InvalidMap(format!(
                    "arc of half-edge {h} is not an involution"
                )));
            }
            if self.out[g] == self.out[h] {
                return Err(Error::InvalidMap(format!("edge {h}-{g} is not directed")));
            }
            if self.strand[g] != self.strand[h] {
                return Err(Error::InvalidMap(format!("edge {h}-{g} changes strand")));
            }
            let opp = rot(h, 2);
            if self.out[opp] == self.out[h] || self.strand[opp] != self.strand[h] {
                return Err(Error::InvalidMap(format!(
                    "crossing {} does not carry a strand straight through slot {}",
                    crossing_of(h),
                    slot_of(h)
                )));
            }
        }
        Ok(())
    }

    /// The annulus graph of `Cloth_{N,N}(x, x)` with the diagonal bends
    /// absorbed. Crossing `(i, j)` (`i != j`) has slots `W, S, E, N`; its row
    /// slots belong to strand `j` and its column slots to strand `i`.
    pub fn from_symmetric_pattern(x: &SignString) -> Result<Self> {
        let n = x.len();
        if n < 3 {
            return Err(Error::SizeTooSmall { m: n, n });
        }
        let mut id = vec![usize::MAX; n * n];
        let mut labels = Vec::with_capacity(n * (n - 1));
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    id[i * n + j] = labels.len();
                    labels.push(Some((i, j)));
                }
            }
        }
        let he = |i: usize, j: usize, s: usize| 4 * id[i * n + j] + s;
        let v = labels.len();
        let mut arc = vec![usize::MAX; 4 * v];
        let mut out = vec![false; 4 * v];
        let mut strand = vec![0; 4 * v];
        let mut link = |a: usize, b: usize| {
            arc[a] = b;
            arc[b] = a;
        };
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (ie, jn) = ((i + 1) % n, (j + 1) % n);
                if ie == j {
                    // Through the bend at (j, j): west side to north side.
                    link(he(i, j, E), he(j, jn, S));
                } else {
                    link(he(i, j, E), he(ie, j, W));
                }
                if jn == i {
                    // Through the bend at (i, i): south side to east side.
                    link(he(i, j, N), he(ie, i, W));
                } else {
                    link(he(i, j, N), he(i, jn, S));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let row = x.get(j).is_plus();
                let col = x.get(i).is_plus();
                out[he(i, j, E)] = row;
                out[he(i, j, W)] = !row;
                out[he(i, j, N)] = col;
                out[he(i, j, S)] = !col;
                strand[he(i, j, W)] = j;
                strand[he(i, j, E)] = j;
                strand[he(i, j, S)] = i;
                strand[he(i, j, N)] = i;
            }
        }
        let g = LinkLikeGraph::from_parts(arc, out, strand, labels)?;
        if !g.has_diagonal_symmetry() {
            return Err(Error::InvalidMap(
                "annulus graph lost its diagonal symmetry".into(),
            ));
        }
        Ok(g)
    }

    /// The involution `(i, j) -> (j, i)`, `W <-> S`, `E <-> N` is an
    /// automorphism preserving directions and strands.
    pub fn has_diagonal_symmetry(&self) -> bool {
        let v = self.num_crossings();
        let mut image = vec![usize::MAX; v];
        for c in 0..v {
            let Some((i, j)) = self.labels[c] else {
                return false;
            };
            match (0..v).find(|&d| self.labels[d] == Some((j, i))) {
                Some(d) => image[c] = d,
                None => return false,
            }
        }
        let sigma = |h: usize| 4 * image[crossing_of(h)] + (slot_of(h) ^ 1);
        (0..4 * v).all(|h| {
            self.arc[sigma(h)] == sigma(self.arc[h])
                && self.out[sigma(h)] == self.out[h]
                && self.strand[sigma(h)] == self.strand[h]
        })
    }

    /// Face successor: arrive through `arc[h]`, leave through the next slot
    /// clockwise. Faces are traced with the face on the left.
    #[inline]
    pub fn face_next(&self, h: usize) -> usize {
        rot(self.arc[h], 3)
    }

    /// Faces as dart cycles, each starting at its least half-edge.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let n = self.arc.len();
        let mut seen = vec![false; n];
        let mut faces = Vec::new();
        for h in 0..n {
            if seen[h] {
                continue;
            }
            let mut f = Vec::new();
            let mut cur = h;
            while !seen[cur] {
                seen[cur] = true;
                f.push(cur);
                cur = self.face_next(cur);
            }
            faces.push(f);
        }
        faces
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_crossings() as i64 - self.num_edges() as i64 + self.faces().len() as i64
    }

    /// The out-slot adjacent to the in-slot `h`.
    fn smoothing(&self, h: usize) -> Result<usize> {
        let (a, b) = (rot(h, 1), rot(h, 3));
        match (self.out[a], self.out[b]) {
            (true, false) => Ok(a),
            (false, true) => Ok(b),
            _ => Err(Error::InvalidMap(format!(
                "crossing {} has no unique smoothing at slot {}",
                crossing_of(h),
                slot_of(h)
            ))),
        }
    }

    /// Seifert circles as cycles of outgoing half-edges.
    pub fn seifert_circles(&self) -> Result<Vec<SeifertCircle>> {
        let n = self.arc.len();
        let mut seen = vec![false; n];
        let mut circles = Vec::new();
        for h in 0..n {
            if !self.out[h] || seen[h] {
                continue;
            }
            let mut c = Vec::new();
            let mut cur = h;
            while !seen[cur] {
                seen[cur] = true;
                c.push(cur);
                cur = self.smoothing(self.arc[cur])?;
            }
            if cur != h {
                return Err(Error::InvalidMap("smoothing is not a permutation".into()));
            }
            circles.push(SeifertCircle { out_half_edges: c });
        }
        Ok(circles)
    }

    pub fn seifert_count(&self) -> Result<usize> {
        Ok(self.seifert_circles()?.len())
    }

    pub fn triangle_faces(&self) -> Vec<TriangleFace> {
        self.faces()
            .into_iter()
            .filter(|f| f.len() == 3)
            .filter_map(|f| TriangleFace::new(self, [f[0], f[1], f[2]]).ok())
            .collect()
    }

    pub fn relabel_strands(&self, perm: impl Fn(usize) -> usize) -> Self {
        let mut g = self.clone();
        for s in g.strand.iter_mut() {
            *s = perm(*s);
        }
        g
    }

    /// Renumber crossings by `perm[old] = new`; the map is unchanged.
    pub fn relabel_crossings(&self, perm: &[usize]) -> Self {
        let v = self.num_crossings();
        let map = |h: usize| 4 * perm[crossing_of(h)] + slot_of(h);
        let mut arc = vec![0; 4 * v];
        let mut out = vec![false; 4 * v];
        let mut strand = vec![0; 4 * v];
        let mut labels = vec![None; v];
        for h in 0..4 * v {
            arc[map(h)] = map(self.arc[h]);
            out[map(h)] = self.out[h];
            strand[map(h)] = self.strand[h];
        }
        for c in 0..v {
            labels[perm[c]] = self.labels[c];
        }
        LinkLikeGraph {
            arc,
            out,
            strand,
            labels,
        }
    }

    fn code_from(&self, root: usize) -> Vec<usize> {
        let v = self.num_crossings();
        let mut order = vec![usize::MAX; v];
        let mut offset = vec![0; v];
        let mut queue = VecDeque::new();
        order[crossing_of(root)] = 0;
        offset[crossing_of(root)] = slot_of(root);
        queue.push_back(crossing_of(root));
        let mut next = 1;
        let mut code = Vec::with_capacity(12 * v);
        while let Some(c) = queue.pop_front() {
            for k in 0..4 {
                let h = 4 * c + (offset[c] + k) % 4;
                let g = self.arc[h];
                let d = crossing_of(g);
                if order[d] == usize::MAX {
                    order[d] = next;
                    offset[d] = slot_of(g);
                    next += 1;
                    queue.push_back(d);
                }
                code.push(order[d]);
                code.push((slot_of(g) + 4 - offset[d]) % 4);
                code.push(usize::from(self.out[h]) * (1 << 20) + self.strand[h]);
            }
        }
        if next < v {
            // Disconnected maps are compared component-blind; mark them.
            code.push(usize::MAX);
        }
        code
    }

    /// Canonical form up to orientation-preserving relabeling of crossings
    /// and rotation of slots. Strand labels and directions are kept.
    pub fn canonical_code(&self) -> Vec<usize> {
        (0..self.arc.len())
            .map(|r| self.code_from(r))
            .min()
            .unwrap_or_default()
    }

    pub fn is_isomorphic(&self, other: &LinkLikeGraph) -> bool {
        if self.arc.len() != other.arc.len() {
            return false;
        }
        let mine = self.code_from(0);
        (0..other.arc.len()).any(|r| other.code_from(r) == mine)
    }

    pub fn dump(&self) -> String {
        let mut s = String::new();
        writeln!(s, "#linklike v1 {}", self.num_crossings()).unwrap();
        for c in 0..self.num_crossings() {
            write!(s, "{c}").unwrap();
            for k in 0..4 {
                let g = self.arc[4 * c + k];
                write!(s, " {}.{}", crossing_of(g), slot_of(g)).unwrap();
            }
            s.push(' ');
            for k in 0..4 {
                s.push(if self.out[4 * c + k] { 'o' } else { 'i' });
            }
            for k in 0..4 {
                write!(s, " {}", self.strand[4 * c + k]).unwrap();
            }
            match self.labels[c] {
                Some((i, j)) => writeln!(s, " {i},{j}").unwrap(),
                None => writeln!(s, " -").unwrap(),
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidMap(m.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("empty input"))?;
        let v: usize = header
            .strip_prefix("#linklike v1 ")
            .and_then(|t| t.trim().parse().ok())
            .ok_or_else(|| bad("missing #linklike v1 header"))?;
        let mut arc = vec![usize::MAX; 4 * v];
        let mut out = vec![false; 4 * v];
        let mut strand = vec![0; 4 * v];
        let mut labels = vec![None; v];
        let mut seen = vec![false; v];
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 11 {
                return Err(bad(&format!("malformed record: {line}")));
            }
            let c: usize = f[0].parse().map_err(|_| bad("bad crossing id"))?;
            if c >= v || seen[c] {
                return Err(bad(&format!("duplicate or out-of-range crossing {c}")));
            }
            seen[c] = true;
            for k in 0..4 {
                let (d, s) = f[1 + k]
                    .split_once('.')
                    .ok_or_else(|| bad("bad half-edge"))?;
                let d: usize = d.parse().map_err(|_| bad("bad half-edge"))?;
                let s: usize = s.parse().map_err(|_| bad("bad half-edge"))?;
                if s >= 4 {
                    return Err(bad("slot out of range"));
                }
                arc[4 * c + k] = 4 * d + s;
            }
            let dirs: Vec<char> = f[5].chars().collect();
            if dirs.len() != 4 || dirs.iter().any(|&ch| ch != 'i' && ch != 'o') {
                return Err(bad("bad direction field"));
            }
            for k in 0..4 {
                out[4 * c + k] = dirs[k] == 'o';
                strand[4 * c + k] = f[6 + k].parse().map_err(|_| bad("bad strand"))?;
            }
            labels[c] = match f[10] {
                "-" => None,
                t => {
                    let (i, j) = t.split_once(',').ok_or_else(|| bad("bad label"))?;
                    Some((
                        i.parse().map_err(|_| bad("bad label"))?,
                        j.parse().map_err(|_| bad("bad label"))?,
                    ))
                }
            };
        }
        if seen.iter().any(|s| !s) {
            return Err(bad("missing crossing records"));
        }
        LinkLikeGraph::from_parts(arc, out, strand, labels)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertCircle {
    pub out_half_edges: Vec<usize>,
}

impl SeifertCircle {
    pub fn crossings(&self) -> impl Iterator<Item = usize> + '_ {
        self.out_half_edges.iter().map(|&h| crossing_of(h))
    }

    pub fn visits_crossing_twice(&self) -> bool {
        let mut cs: Vec<usize> = self.crossings().collect();
        cs.sort_unstable();
        cs.windows(2).any(|w| w[0] == w[1])
    }
}

/// A 3-sided face. `darts[t]` leaves corner `t` toward corner `t + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TriangleFace {
    pub darts: [usize; 3],
}

impl TriangleFace {
    pub fn new(g: &LinkLikeGraph, darts: [usize; 3]) -> Result<Self> {
        for t in 0..3 {
            if g.face_next(darts[t]) != darts[(t + 1) % 3] {
                return Err(Error::NotATriangle);
            }
        }
        let cs = darts.map(crossing_of);
        if cs[0] == cs[1] || cs[1] == cs[2] || cs[0] == cs[2] {
            return Err(Error::NotATriangle);
        }
        let k = (0..3).min_by_key(|&t| darts[t]).unwrap_or(0);
        Ok(TriangleFace {
            darts: [darts[k], darts[(k + 1) % 3], darts[(k + 2) % 3]],
        })
    }

    pub fn corners(&self) -> [usize; 3] {
        self.darts.map(crossing_of)
    }

    /// The six boundary ports in counterclockwise order around the face:
    /// corner `t` contributes `Q[2t]` and `Q[2t + 1]`.
    fn ports(&self, g: &LinkLikeGraph) -> [usize; 6] {
        let mut q = [0; 6];
        for t in 0..3 {
            let arrival = g.arc[self.darts[(t + 2) % 3]];
            q[2 * t] = rot(arrival, 1);
            q[2 * t + 1] = rot(arrival, 2);
        }
        q
    }

    /// The dart whose side avoids corner crossing `c`.
    pub fn side_opposite(&self, c: usize) -> Option<usize> {
        (0..3)
            .find(|&t| crossing_of(self.darts[(t + 2) % 3]) == c)
            .map(|t| self.darts[t])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrientationType {
    Adjacent,
    Alternating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Configuration {
    I,
    II,
    III,
}

impl Configuration {
    pub fn delta(self) -> i64 {
        match self {
            Configuration::I => -2,
            Configuration::II => 0,
            Configuration::III => 2,
        }
    }

    fn from_delta(d: i64) -> Option<Self> {
        match d {
            -2 => Some(Configuration::I),
            0 => Some(Configuration::II),
            2 => Some(Configuration::III),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveRecord {
    pub corners: [usize; 3],
    pub orientation: OrientationType,
    pub configuration: Option<Configuration>,
    pub predicted_delta: i64,
    pub before: usize,
    pub after: usize,
}

impl MoveRecord {
    pub fn delta(&self) -> i64 {
        self.after as i64 - self.before as i64
    }
}

/// Chord `u` joins ports `u` and `u + 3`. Corner `t` is where chords
/// `2t mod 3` and `2t + 1 mod 3` cross.
fn chord_corner(u: usize, v: usize) -> usize {
    (0..3)
        .find(|&t| {
            let pair = [(2 * t) % 3, (2 * t + 1) % 3];
            pair.contains(&u) && pair.contains(&v) && u != v
        })
        .expect("distinct chords")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Arrangement {
    Current,
    Moved,
}

/// The three-crossing disk with terminals. Local half-edges `4t + k` for
/// corner `t`, slot `k` ordered by sorted port; terminal `p` is `12 + p`.
struct LocalDisk {
    arc: [usize; 18],
    out: [bool; 12],
}

impl LocalDisk {
    fn new(arrangement: Arrangement, enters: [bool; 6]) -> Self {
        let first_partner = |p: usize| -> usize {
            let step_up = p.is_multiple_of(2) == (arrangement == Arrangement::Current);
            if step_up {
                (p + 1) % 6
            } else {
                (p + 5) % 6
            }
        };
        let facing = |t: usize, port: usize| -> usize {
            let (u, v) = ((2 * t) % 3, (2 * t + 1) % 3);
            let mut ps = [u, v, u + 3, v + 3];
            ps.sort_unstable();
            4 * t + ps.iter().position(|&x| x == port).expect("port on corner")
        };
        let mut arc = [usize::MAX; 18];
        let mut out = [false; 12];
        let mut link = |a: usize, b: usize| {
            arc[a] = b;
            arc[b] = a;
        };
        for u in 0..3 {
            let w = u + 3;
            let k1 = chord_corner(u, first_partner(u) % 3);
            let k2 = chord_corner(u, first_partner(w) % 3);
            debug_assert_ne!(k1, k2);
            link(12 + u, facing(k1, u));
            link(facing(k1, w), facing(k2, u));
            link(facing(k2, w), 12 + w);
            let forward = enters[u];
            out[facing(k1, u)] = !forward;
            out[facing(k1, w)] = forward;
            out[facing(k2, u)] = !forward;
            out[facing(k2, w)] = forward;
        }
        LocalDisk { arc, out }
    }

    fn smoothing(&self, h: usize) -> usize {
        let (a, b) = (rot(h, 1), rot(h, 3));
        if self.out[a] {
            debug_assert!(!self.out[b]);
            a
        } else {
            b
        }
    }

    /// Entering port -> leaving port along local Seifert arcs, and the
    /// number of closed local circles.
    fn smoothing_pairs(&self, enters: [bool; 6]) -> ([usize; 6], usize) {
        let mut pair = [usize::MAX; 6];
        let mut used = [false; 12];
        for p in (0..6).filter(|&p| enters[p]) {
            let mut h = self.arc[12 + p];
            loop {
                let o = self.smoothing(h);
                used[o] = true;
                let nxt = self.arc[o];
                if nxt >= 12 {
                    pair[p] = nxt - 12;
                    break;
                }
                h = nxt;
            }
        }
        let mut closed = 0;
        for start in 0..12 {
            if !self.out[start] || used[start] {
                continue;
            }
            closed += 1;
            let mut o = start;
            while !used[o] {
                used[o] = true;
                o = self.smoothing(self.arc[o]);
            }
        }
        (pair, closed)
    }
}

struct MovePlan {
    ports: [usize; 6],
    enters: [bool; 6],
    /// Leaving port -> entering port along Seifert paths outside the face.
    outside: [usize; 6],
}

impl MovePlan {
    fn new(g: &LinkLikeGraph, f: &TriangleFace) -> Result<Self> {
        let ports = f.ports(g);
        let enters = ports.map(|q| !g.out[q]);
        let mut outside = [usize::MAX; 6];
        for p in (0..6).filter(|&p| !enters[p]) {
            let mut cur = ports[p];
            let mut steps = 0;
            loop {
                let nxt = g.arc[cur];
                if let Some(v) = ports.iter().position(|&q| q == nxt) {
                    outside[p] = v;
                    break;
                }
                cur = g.smoothing(nxt)?;
                steps += 1;
                if steps > g.arc.len() {
                    return Err(Error::InvalidMap("Seifert path never returns".into()));
                }
            }
        }
        Ok(MovePlan {
            ports,
            enters,
            outside,
        })
    }

    fn orientation(&self) -> OrientationType {
        if (0..6).all(|p| self.enters[p] != self.enters[(p + 1) % 6]) {
            OrientationType::Alternating
        } else {
            OrientationType::Adjacent
        }
    }

    /// Circles through the face plus closed local circles.
    fn local_count(&self, arrangement: Arrangement) -> i64 {
        let disk = LocalDisk::new(arrangement, self.enters);
        let (inside, closed) = disk.smoothing_pairs(self.enters);
        let mut seen = [false; 6];
        let mut cycles = 0;
        for p in (0..6).filter(|&p| self.enters[p]) {
            if seen[p] {
                continue;
            }
            cycles += 1;
            let mut cur = p;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.outside[inside[cur]];
            }
        }
        (cycles + closed) as i64
    }

    fn predicted_delta(&self) -> i64 {
        self.local_count(Arrangement::Moved) - self.local_count(Arrangement::Current)
    }
}

pub fn orientation_type(g: &LinkLikeGraph, f: &TriangleFace) -> Result<OrientationType> {
    TriangleFace::new(g, f.darts)?;
    Ok(MovePlan::new(g, f)?.orientation())
}

/// Configuration of an alternating face, named by the change in the
/// Seifert count the move will cause.
pub fn configuration_type(g: &LinkLikeGraph, f: &TriangleFace) -> Result<Configuration> {
    TriangleFace::new(g, f.darts)?;
    let plan = MovePlan::new(g, f)?;
    if plan.orientation() != OrientationType::Alternating {
        return Err(Error::NotAlternating);
    }
    Configuration::from_delta(plan.predicted_delta()).ok_or_else(|| {
        Error::InvalidMap(format!(
            "predicted delta {} out of range",
            plan.predicted_delta()
        ))
    })
}

/// Pass the side of `f` opposite each corner across that corner.
pub fn apply_triple_move(
    g: &LinkLikeGraph,
    f: &TriangleFace,
) -> Result<(LinkLikeGraph, MoveRecord)> {
    let f = TriangleFace::new(g, f.darts)?;
    let plan = MovePlan::new(g, &f)?;
    let corners = f.corners();
    let before = g.seifert_count()?;
    let predicted = plan.predicted_delta();
    let orientation = plan.orientation();

    let disk = LocalDisk::new(Arrangement::Moved, plan.enters);
    let real = |h: usize| 4 * corners[h / 4] + h % 4;
    let mut chord_strand = [0; 3];
    for (u, s) in chord_strand.iter_mut().enumerate() {
        *s = g.strand[plan.ports[u]];
        if g.strand[plan.ports[u + 3]] != *s {
            return Err(Error::InvalidMap("face chord changes strand".into()));
        }
    }
    let external: Vec<usize> = plan.ports.iter().map(|&q| g.arc[q]).collect();

    let mut h2 = g.clone();
    for h in 0..12 {
        let r = real(h);
        h2.out[r] = disk.out[h];
        h2.strand[r] = chord_strand[port_chord_of_local(h)];
        let partner = disk.arc[h];
        if partner < 12 {
            h2.arc[r] = real(partner);
        } else {
            let p = partner - 12;
            match plan.ports.iter().position(|&q| q == external[p]) {
                Some(v) => h2.arc[r] = real(disk.arc[12 + v]),
                None => {
                    h2.arc[r] = external[p];
                    h2.arc[external[p]] = r;
                }
            }
        }
    }
    h2.validate()?;
    let after = h2.seifert_count()?;
    let configuration = match orientation {
        OrientationType::Alternating => Configuration::from_delta(predicted),
        OrientationType::Adjacent => None,
    };
    let rec = MoveRecord {
        corners,
        orientation,
        configuration,
        predicted_delta: predicted,
        before,
        after,
    };
    if rec.delta() != predicted {
        return Err(Error::InvalidMap(format!(
            "move at {corners:?} predicted delta {predicted}, observed {}",
            rec.delta()
        )));
    }
    Ok((h2, rec))
}

/// Chord carried by local half-edge `4t + k`: the `k`-th sorted port of
/// corner `t`, reduced mod 3.
fn port_chord_of_local(h: usize) -> usize {
    let t = h / 4;
    let (u, v) = ((2 * t) % 3, (2 * t + 1) % 3);
    let mut ps = [u, v, u + 3, v + 3];
    ps.sort_unstable();
    ps[h % 4] % 3
}

/// Crossing of `G'(x)` with grid label `(i, j)`.
pub fn crossing_at(g: &LinkLikeGraph, i: usize, j: usize) -> Option<usize> {
    (0..g.num_crossings()).find(|&c| g.labels[c] == Some((i, j)))
}

/// The triangle containing crossing `c` whose side opposite `c` runs
/// along strand `s`.
pub fn triangle_across(g: &LinkLikeGraph, c: usize, s: usize) -> Option<TriangleFace> {
    g.triangle_faces()
        .into_iter()
        .find(|f| f.corners().contains(&c) && f.side_opposite(c).is_some_and(|d| g.strand[d] == s))
}

#[derive(Debug, Clone)]
pub struct SwapOutcome {
    pub graph: LinkLikeGraph,
    pub moves: Vec<MoveRecord>,
}

impl SwapOutcome {
    /// Consecutive move pairs, one per strand crossed.
    pub fn pairs(&self) -> impl Iterator<Item = (&MoveRecord, &MoveRecord)> {
        self.moves.chunks(2).map(|c| (&c[0], &c[1]))
    }
}

/// Pass strand 0 of `G'(x)` across both crossings of strand 1 with each
/// strand `k = 2 .. N-1`, in the order `(k, 1)` then `(1, k)`.
pub fn swap_first_strands(g: &LinkLikeGraph) -> Result<SwapOutcome> {
    let n = (1..)
        .find(|&n| n * (n - 1) == g.num_crossings())
        .filter(|&n| n >= 3)
        .ok_or_else(|| Error::MoveScheduleFailure("not an annulus graph".into()))?;
    let mut cur = g.clone();
    let mut moves = Vec::with_capacity(2 * (n - 2));
    for k in 2..n {
        for (i, j) in [(k, 1), (1, k)] {
            let c = crossing_at(&cur, i, j)
                .ok_or_else(|| Error::MoveScheduleFailure(format!("no crossing ({i},{j})")))?;
            let f = triangle_across(&cur, c, 0).ok_or_else(|| {
                Error::MoveScheduleFailure(format!(
                    "no triangle carries strand 0 across crossing ({i},{j})"
                ))
            })?;
            let (next, rec) = apply_triple_move(&cur, &f)?;
            cur = next;
            moves.push(rec);
        }
    }
    Ok(SwapOutcome { graph: cur, moves })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loops::decompose;
    use crate::pattern::ToroidalPattern;

    fn gp(x: &str) -> LinkLikeGraph {
        LinkLikeGraph::from_symmetric_pattern(&x.parse().unwrap()).unwrap()
    }

    fn loop_count(x: &SignString) -> usize {
        decompose(&ToroidalPattern::symmetric(x.clone()).unwrap())
            .loops
            .len()
    }

    /// A one-crossing curl: arcs `0-1` and `2-3`.
    fn curl() -> LinkLikeGraph {
        LinkLikeGraph::from_parts(
            vec![1, 0, 3, 2],
            vec![false, true, true, false],
            vec![0; 4],
            vec![None],
        )
        .unwrap()
    }

    #[test]
    fn annulus_sizes() {
        let g = gp("+-++-");
        assert_eq!(g.num_crossings(), 20);
        assert_eq!(g.num_edges(), 40);
        assert_eq!(g.faces().len(), 22);
        assert_eq!(g.euler_characteristic(), 2);
        assert!(g.has_diagonal_symmetry());
        assert_eq!(g.triangle_faces().len(), 10);
    }

    #[test]
    fn seifert_counts_match_loops() {
        for n in 3..=7 {
            for x in SignString::enumerate(n) {
                let g = LinkLikeGraph::from_symmetric_pattern(&x).unwrap();
                assert_eq!(g.euler_characteristic(), 2);
                let circles = g.seifert_circles().unwrap();
                assert_eq!(circles.len(), loop_count(&x), "{x}");
                assert!(circles.iter().all(|c| !c.visits_crossing_twice()));
            }
        }
        assert_eq!(gp("++---+++").seifert_count().unwrap(), 8);
    }

    #[test]
    fn two_block_strings_have_n_circles() {
        for n in 3..=9 {
            for x in SignString::enumerate(n).filter(SignString::is_two_block) {
                let g = LinkLikeGraph::from_symmetric_pattern(&x).unwrap();
                assert_eq!(g.seifert_count().unwrap(), n);
            }
        }
    }

    #[test]
    fn curl_has_two_circles_and_no_triangle() {
        let g = curl();
        assert_eq!(g.seifert_count().unwrap(), 2);
        assert_eq!(g.euler_characteristic(), 2);
        assert!(g.triangle_faces().is_empty());
    }

    #[test]
    fn rejects_broken_maps() {
        let r = LinkLikeGraph::from_parts(
            vec![1, 0, 3, 2],
            vec![false, true, false, true],
            vec![0; 4],
            vec![None],
        );
        assert!(matches!(r, Err(Error::InvalidMap(_))));
        assert!(matches!(
            LinkLikeGraph::from_symmetric_pattern(&"+-".parse().unwrap()),
            Err(Error::SizeTooSmall { .. })
        ));
    }

    #[test]
    fn dump_round_trip() {
        let g = gp("+-++-");
        let text = g.dump();
        let back = LinkLikeGraph::parse(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.dump(), text);
        assert!(LinkLikeGraph::parse("#linklike v1 1\n0 0.1 0.0 0.3 0.2 iooi 0 0 0 0\n").is_err());
    }

    #[test]
    fn triangle_count_stable_under_relabeling() {
        let g = gp("++-+-+");
        let v = g.num_crossings();
        let perm: Vec<usize> = (0..v).map(|c| (c * 7 + 3) % v).collect();
        let h = g.relabel_crossings(&perm);
        assert_eq!(h.triangle_faces().len(), g.triangle_faces().len());
        assert!(g.is_isomorphic(&h));
        assert_eq!(g.canonical_code(), h.canonical_code());
    }

    #[test]
    fn orientation_invariant_under_corner_rotation() {
        let g = gp("+-++-");
        for f in g.triangle_faces() {
            let t = orientation_type(&g, &f).unwrap();
            let [a, b, c] = f.darts;
            for d in [[b, c, a], [c, a, b]] {
                assert_eq!(orientation_type(&g, &TriangleFace { darts: d }).unwrap(), t);
            }
        }
    }

    #[test]
    fn moves_change_counts_as_predicted_and_reverse() {
        let mut tally = std::collections::BTreeMap::new();
        for n in 3..=6 {
            for x in SignString::enumerate(n) {
                let g = LinkLikeGraph::from_symmetric_pattern(&x).unwrap();
                for f in g.triangle_faces() {
                    let (h, rec) = apply_triple_move(&g, &f).unwrap();
                    *tally
                        .entry((rec.orientation, rec.configuration))
                        .or_insert(0) += 1;
                    assert_eq!(h.euler_characteristic(), 2);
                    assert!([-2, 0, 2].contains(&rec.delta()));
                    if rec.orientation == OrientationType::Adjacent {
                        assert_eq!(rec.delta(), 0);
                        assert!(configuration_type(&g, &f).is_err());
                    } else {
                        assert_eq!(configuration_type(&g, &f).unwrap().delta(), rec.delta());
                    }
                    let back = h
                        .triangle_faces()
                        .into_iter()
                        .find(|t| {
                            let mut a = t.corners();
                            let mut b = f.corners();
                            a.sort_unstable();
                            b.sort_unstable();
                            a == b
                        })
                        .expect("the moved triangle is a face again");
                    assert_eq!(orientation_type(&h, &back).unwrap(), rec.orientation);
                    if let Some(c) = rec.configuration {
                        let c2 = configuration_type(&h, &back).unwrap();
                        match c {
                            Configuration::II => assert_eq!(c2, Configuration::II),
                            Configuration::I => assert_eq!(c2, Configuration::III),
                            Configuration::III => assert_eq!(c2, Configuration::I),
                        }
                    }
                    let (g2, rec2) = apply_triple_move(&h, &back).unwrap();
                    assert_eq!(rec2.after, rec.before);
                    assert!(g2.is_isomorphic(&g));
                }
            }
        }
        // Every orientation type and configuration occurs.
        assert_eq!(tally.len(), 4, "{tally:?}");
    }

    #[test]
    fn swap_example() {
        let x: SignString = "+-++-".parse().unwrap();
        let g = LinkLikeGraph::from_symmetric_pattern(&x).unwrap();
        let out = swap_first_strands(&g).unwrap();
        assert_eq!(out.moves.len(), 6);
        let x2 = x.swapped(0, 1);
        assert_eq!(x2.to_string(), "-+++-");
        assert_eq!(out.graph.seifert_count().unwrap(), loop_count(&x2));
        let expected = LinkLikeGraph::from_symmetric_pattern(&x2)
            .unwrap()
            .relabel_strands(|s| match s {
                0 => 1,
                1 => 0,
                s => s,
            });
        assert!(out.graph.is_isomorphic(&expected));
        for (a, b) in out.pairs() {
            assert_eq!(a.orientation, b.orientation);
            assert_eq!((a.delta() + b.delta()).rem_euclid(4), 0);
        }
    }

    #[test]
    fn swap_all_small() {
        for n in 3..=6 {
            for x in SignString::enumerate(n) {
                let g = LinkLikeGraph::from_symmetric_pattern(&x).unwrap();
                let out = swap_first_strands(&g).unwrap();
                let x2 = x.swapped(0, 1);
                assert_eq!(out.graph.seifert_count().unwrap(), loop_count(&x2), "{x}");
                for (a, b) in out.pairs() {
                    assert_eq!(a.orientation, b.orientation, "{x}");
                }
                if x.get(0) == x.get(1) {
                    assert_eq!(out.graph.seifert_count().unwrap(), loop_count(&x));
                }
            }
        }
    }
}
