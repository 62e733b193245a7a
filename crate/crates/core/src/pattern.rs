//! Toroidal patterns over sign strings, and their periodic planar lifts.
//!
//! Vertices of `Cloth_{M,N}` are pairs `(i, j)` with `i` the horizontal
//! coordinate mod `M` and `j` the vertical coordinate mod `N`. The row string
//! `x` is indexed by `j` and orients every horizontal edge of row `j`; the
//! column string `y` is indexed by `i` and orients every vertical edge of
//! column `i`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A torus vertex `(i, j)`, `0 <= i < M`, `0 <= j < N`.
pub type Vertex = (usize, usize);

/// A vertex of the universal-cover grid `Z x Z`.
pub type PlanarVertex = (i64, i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A non-empty string over `{+1, -1}`.
///
/// Parses from either the `+`/`-` alphabet or the `1`/`0` alphabet
/// (`1` is `+1`, `0` is `-1`); a single string may not mix the two.
/// Displays in the `+`/`-` alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignString(Vec<Sign>);

impl SignString {
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::Parse {
                input: String::new(),
                reason: "empty string",
            });
        }
        Ok(SignString(signs))
    }

    /// Bit `k` of `bits` set means entry `k` is `+1`.
    pub fn from_bits(bits: u64, len: usize) -> Self {
        assert!((1..=64).contains(&len));
        SignString(
            (0..len)
                .map(|k| {
                    if bits >> k & 1 == 1 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                })
                .collect(),
        )
    }

    pub fn all_plus(len: usize) -> Self {
        SignString(vec![Sign::Plus; len.max(1)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn get(&self, k: usize) -> Sign {
        self.0[k]
    }

    /// Entry at `k` read cyclically, for any integer `k`.
    pub fn at(&self, k: i64) -> Sign {
        self.0[k.rem_euclid(self.0.len() as i64) as usize]
    }

    /// Number of `+1` entries minus number of `-1` entries.
    pub fn k(&self) -> i64 {
        self.0.iter().map(|s| s.value()).sum()
    }

    pub fn is_balanced(&self) -> bool {
        self.k() == 0
    }

    /// `s'_t = s_{(t + r) mod n}`: the string read starting at offset `r`.
    pub fn rotated(&self, r: usize) -> Self {
        let n = self.len();
        SignString((0..n).map(|t| self.0[(t + r) % n]).collect())
    }

    /// `s°_t = s_{(-t) mod n}`.
    pub fn index_reversed(&self) -> Self {
        let n = self.len();
        SignString((0..n).map(|t| self.0[(n - t) % n]).collect())
    }

    pub fn negated(&self) -> Self {
        SignString(self.0.iter().map(|s| s.flip()).collect())
    }

    /// Exchange entries `a` and `b`.
    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut v = self.0.clone();
        v.swap(a, b);
        SignString(v)
    }

    /// Prefix sums `P(t) = sum_{k < t} s_k` for `t = 0..=n`.
    pub fn prefix_sums(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut acc = 0;
        out.push(0);
        for s in &self.0 {
            acc += s.value();
            out.push(acc);
        }
        out
    }

    /// True when the string is a cyclic rotation of `(+1)^a (-1)^b`,
    /// i.e. it has at most two cyclic blocks.
    pub fn is_two_block(&self) -> bool {
        let n = self.len();
        let changes = (0..n).filter(|&t| self.0[t] != self.0[(t + 1) % n]).count();
        changes <= 2
    }

    /// Least `r` such that every prefix sum of `rotated(r)` is `<= 0`.
    /// Exists exactly when `k() <= 0`.
    pub fn nonpositive_rotation(&self) -> Option<usize> {
        if self.k() > 0 {
            return None;
        }
        (0..self.len()).find(|&r| self.rotated(r).prefix_sums().iter().all(|&p| p <= 0))
    }

    /// Least `r` such that every nonempty prefix sum of `rotated(r)` is `> 0`.
    /// Exists exactly when `k() > 0`.
    pub fn positive_rotation(&self) -> Option<usize> {
        if self.k() <= 0 {
            return None;
        }
        (0..self.len()).find(|&r| self.rotated(r).prefix_sums()[1..].iter().all(|&p| p > 0))
    }

    /// All `2^len` strings of length `len`, in bit order.
    pub fn enumerate(len: usize) -> impl Iterator<Item = SignString> {
        assert!(len < 63);
        (0..1u64 << len).map(move |bits| SignString::from_bits(bits, len))
    }
}

impl fmt::Display for SignString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for SignString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason| Error::Parse {
            input: s.to_string(),
            reason,
        };
        if s.is_empty() {
            return Err(err("empty string"));
        }
        let pm = s.chars().all(|c| c == '+' || c == '-');
        let bits = s.chars().all(|c| c == '0' || c == '1');
        if !pm && !bits {
            if s.chars().all(|c| matches!(c, '+' | '-' | '0' | '1')) {
                return Err(err("mixed +/- and 0/1 alphabets"));
            }
            return Err(err("characters outside [+-01]"));
        }
        Ok(SignString(
            s.chars()
                .map(|c| match c {
                    '+' | '1' => Sign::Plus,
                    _ => Sign::Minus,
                })
                .collect(),
        ))
    }
}

/// `gcd(|a|, |b|)` with `gcd(0, a) = |a|`.
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn gcd_xy(x: &SignString, y: &SignString) -> i64 {
    gcd(x.k(), y.k())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    Horizontal,
    Vertical,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::Horizontal => Axis::Vertical,
            Axis::Vertical => Axis::Horizontal,
        }
    }
}

/// Compass direction of a directed edge. The declaration order gives the
/// canonical edge order: horizontal before vertical, then `E < W`, `N < S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    E,
    W,
    N,
    S,
}

impl Dir {
    pub fn axis(self) -> Axis {
        match self {
            Dir::E | Dir::W => Axis::Horizontal,
            Dir::N | Dir::S => Axis::Vertical,
        }
    }

    pub fn delta(self) -> (i64, i64) {
        match self {
            Dir::E => (1, 0),
            Dir::W => (-1, 0),
            Dir::N => (0, 1),
            Dir::S => (0, -1),
        }
    }

    pub fn reverse(self) -> Dir {
        match self {
            Dir::E => Dir::W,
            Dir::W => Dir::E,
            Dir::N => Dir::S,
            Dir::S => Dir::N,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Dir::E => 'E',
            Dir::W => 'W',
            Dir::N => 'N',
            Dir::S => 'S',
        }
    }

    pub fn from_char(c: char) -> Option<Dir> {
        match c {
            'E' => Some(Dir::E),
            'W' => Some(Dir::W),
            'N' => Some(Dir::N),
            'S' => Some(Dir::S),
            _ => None,
        }
    }

    pub fn from_delta(d: (i64, i64)) -> Option<Dir> {
        match d {
            (1, 0) => Some(Dir::E),
            (-1, 0) => Some(Dir::W),
            (0, 1) => Some(Dir::N),
            (0, -1) => Some(Dir::S),
            _ => None,
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedEdge {
    pub tail: Vertex,
    pub dir: Dir,
}

impl DirectedEdge {
    pub fn new(tail: Vertex, dir: Dir) -> Self {
        DirectedEdge { tail, dir }
    }

    pub fn axis(&self) -> Axis {
        self.dir.axis()
    }
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.tail.0, self.tail.1, self.dir)
    }
}

/// `Cloth_{M,N}(x, y)`: the orientation of the `M x N` torus grid in which
/// row `j` points east iff `x_j = +1` and column `i` points north iff
/// `y_i = +1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ToroidalPattern {
    m: usize,
    n: usize,
    x: SignString,
    y: SignString,
}

impl ToroidalPattern {
    pub fn new(m: usize, n: usize, x: SignString, y: SignString) -> Result<Self> {
        if m < 3 || n < 3 {
            return Err(Error::SizeTooSmall { m, n });
        }
        if x.len() != n {
            return Err(Error::LengthMismatch {
                name: "x",
                expected: n,
                actual: x.len(),
            });
        }
        if y.len() != m {
            return Err(Error::LengthMismatch {
                name: "y",
                expected: m,
                actual: y.len(),
            });
        }
        Ok(ToroidalPattern { m, n, x, y })
    }

    /// Sizes are taken from the string lengths.
    pub fn from_strings(x: SignString, y: SignString) -> Result<Self> {
        Self::new(y.len(), x.len(), x, y)
    }

    pub fn symmetric(x: SignString) -> Result<Self> {
        let n = x.len();
        Self::new(n, n, x.clone(), x)
    }

    pub fn parse(x: &str, y: &str) -> Result<Self> {
        Self::from_strings(x.parse()?, y.parse()?)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &SignString {
        &self.x
    }

    pub fn y(&self) -> &SignString {
        &self.y
    }

    pub fn kx(&self) -> i64 {
        self.x.k()
    }

    pub fn ky(&self) -> i64 {
        self.y.k()
    }

    pub fn is_symmetric(&self) -> bool {
        self.m == self.n && self.x == self.y
    }

    pub fn num_vertices(&self) -> usize {
        self.m * self.n
    }

    pub fn num_edges(&self) -> usize {
        2 * self.m * self.n
    }

    /// Stable textual id, `MxN:x/y`.
    pub fn id(&self) -> String {
        format!("{}x{}:{}/{}", self.m, self.n, self.x, self.y)
    }

    /// The unique out-edge of `v` on `axis`.
    pub fn out_edge(&self, v: Vertex, axis: Axis) -> DirectedEdge {
        let (i, j) = v;
        let dir = match axis {
            Axis::Horizontal => {
                if self.x.get(j).is_plus() {
                    Dir::E
                } else {
                    Dir::W
                }
            }
            Axis::Vertical => {
                if self.y.get(i).is_plus() {
                    Dir::N
                } else {
                    Dir::S
                }
            }
        };
        DirectedEdge::new(v, dir)
    }

    pub fn is_valid_edge(&self, e: &DirectedEdge) -> bool {
        let (i, j) = e.tail;
        i < self.m && j < self.n && self.out_edge(e.tail, e.axis()).dir == e.dir
    }

    pub fn head(&self, e: &DirectedEdge) -> Vertex {
        let (i, j) = e.tail;
        let (m, n) = (self.m, self.n);
        match e.dir {
            Dir::E => ((i + 1) % m, j),
            Dir::W => ((i + m - 1) % m, j),
            Dir::N => (i, (j + 1) % n),
            Dir::S => (i, (j + n - 1) % n),
        }
    }

    /// All `2MN` directed edges in canonical order `(i, j, axis)`.
    pub fn edges(&self) -> impl Iterator<Item = DirectedEdge> + '_ {
        (0..self.m).flat_map(move |i| {
            (0..self.n).flat_map(move |j| {
                [Axis::Horizontal, Axis::Vertical]
                    .into_iter()
                    .map(move |a| self.out_edge((i, j), a))
            })
        })
    }

    /// Dense index of a valid edge, consistent with the order of [`edges`](Self::edges).
    pub fn edge_index(&self, e: &DirectedEdge) -> usize {
        let (i, j) = e.tail;
        let a = match e.axis() {
            Axis::Horizontal => 0,
            Axis::Vertical => 1,
        };
        (i * self.n + j) * 2 + a
    }

    /// The pattern seen through the translation `(i, j) -> (i, j - r)`:
    /// the new row string is `x` rotated by `r`.
    pub fn rotate_rows(&self, r: usize) -> Self {
        ToroidalPattern {
            m: self.m,
            n: self.n,
            x: self.x.rotated(r % self.n),
            y: self.y.clone(),
        }
    }

    /// The pattern seen through `(i, j) -> (i - r, j)`.
    pub fn rotate_columns(&self, r: usize) -> Self {
        ToroidalPattern {
            m: self.m,
            n: self.n,
            x: self.x.clone(),
            y: self.y.rotated(r % self.m),
        }
    }

    pub fn lift(&self) -> PlanarLift {
        PlanarLift::new(self.clone())
    }
}

impl fmt::Display for ToroidalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

/// Grid symmetries used to carry loops between patterns. Each variant is a
/// vertex map of the torus together with the pattern that receives the
/// image of every oriented edge with its orientation preserved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symmetry {
    Identity,
    /// `(i, j) -> (i, -j)`, pattern `(x°, -y)`, class `(l, m) -> (l, -m)`.
    ReflectX,
    /// `(i, j) -> (-i, j)`, pattern `(-x, y°)`, class `(l, m) -> (-l, m)`.
    ReflectY,
    /// `(i, j) -> (-i, -j)`, pattern `(-x°, -y°)`, class `-(l, m)`.
    Rotate180,
    /// `(i, j) -> (j, i)`, pattern `Cloth_{N,M}(y, x)`, class `(m, l)`.
    Transpose,
    /// Transpose followed by `ReflectX`: `(i, j) -> (j, -i)`, class `(m, -l)`.
    TransposeReflectX,
}

impl Symmetry {
    pub const ALL: [Symmetry; 6] = [
        Symmetry::Identity,
        Symmetry::ReflectX,
        Symmetry::ReflectY,
        Symmetry::Rotate180,
        Symmetry::Transpose,
        Symmetry::TransposeReflectX,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Symmetry::Identity => "id",
            Symmetry::ReflectX => "reflect-x",
            Symmetry::ReflectY => "reflect-y",
            Symmetry::Rotate180 => "rotate-180",
            Symmetry::Transpose => "transpose",
            Symmetry::TransposeReflectX => "transpose-reflect-x",
        }
    }

    pub fn apply(self, p: &ToroidalPattern) -> ToroidalPattern {
        let (m, n, x, y) = (p.m, p.n, &p.x, &p.y);
        let (m2, n2, x2, y2) = match self {
            Symmetry::Identity => (m, n, x.clone(), y.clone()),
            Symmetry::ReflectX => (m, n, x.index_reversed(), y.negated()),
            Symmetry::ReflectY => (m, n, x.negated(), y.index_reversed()),
            Symmetry::Rotate180 => (
                m,
                n,
                x.index_reversed().negated(),
                y.index_reversed().negated(),
            ),
            Symmetry::Transpose => (n, m, y.clone(), x.clone()),
            Symmetry::TransposeReflectX => (n, m, y.index_reversed(), x.negated()),
        };
        ToroidalPattern {
            m: m2,
            n: n2,
            x: x2,
            y: y2,
        }
    }

    /// Image of a vertex of a pattern with periods `(m, n)`.
    pub fn map_vertex(self, v: Vertex, m: usize, n: usize) -> Vertex {
        let (i, j) = v;
        let neg_i = (m - i) % m;
        let neg_j = (n - j) % n;
        match self {
            Symmetry::Identity => (i, j),
            Symmetry::ReflectX => (i, neg_j),
            Symmetry::ReflectY => (neg_i, j),
            Symmetry::Rotate180 => (neg_i, neg_j),
            Symmetry::Transpose => (j, i),
            Symmetry::TransposeReflectX => (j, neg_i),
        }
    }

    pub fn map_dir(self, d: Dir) -> Dir {
        use Dir::*;
        match (self, d) {
            (Symmetry::Identity, d) => d,
            (Symmetry::ReflectX, E | W) => d,
            (Symmetry::ReflectX, d) => d.reverse(),
            (Symmetry::ReflectY, N | S) => d,
            (Symmetry::ReflectY, d) => d.reverse(),
            (Symmetry::Rotate180, d) => d.reverse(),
            (Symmetry::Transpose, E) => N,
            (Symmetry::Transpose, W) => S,
            (Symmetry::Transpose, N) => E,
            (Symmetry::Transpose, S) => W,
            (Symmetry::TransposeReflectX, E) => S,
            (Symmetry::TransposeReflectX, W) => N,
            (Symmetry::TransposeReflectX, N) => E,
            (Symmetry::TransposeReflectX, S) => W,
        }
    }

    pub fn map_edge(self, e: &DirectedEdge, m: usize, n: usize) -> DirectedEdge {
        DirectedEdge::new(self.map_vertex(e.tail, m, n), self.map_dir(e.dir))
    }

    pub fn map_class(self, class: (i64, i64)) -> (i64, i64) {
        let (l, m) = class;
        match self {
            Symmetry::Identity => (l, m),
            Symmetry::ReflectX => (l, -m),
            Symmetry::ReflectY => (-l, m),
            Symmetry::Rotate180 => (-l, -m),
            Symmetry::Transpose => (m, l),
            Symmetry::TransposeReflectX => (m, -l),
        }
    }
}

/// The periodic pattern `Cloth_Z(x~, y~)` covering a toroidal pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarLift {
    base: ToroidalPattern,
    x_prefix: Vec<i64>,
    y_prefix: Vec<i64>,
}

impl PlanarLift {
    pub fn new(base: ToroidalPattern) -> Self {
        let x_prefix = base.x.prefix_sums();
        let y_prefix = base.y.prefix_sums();
        PlanarLift {
            base,
            x_prefix,
            y_prefix,
        }
    }

    pub fn base(&self) -> &ToroidalPattern {
        &self.base
    }

    /// `x~_k = x_{k mod N}`.
    pub fn x_at(&self, k: i64) -> Sign {
        self.base.x.at(k)
    }

    /// `y~_k = y_{k mod M}`.
    pub fn y_at(&self, k: i64) -> Sign {
        self.base.y.at(k)
    }

    /// `sum_{0 <= k < t} x~_k` for `t >= 0`, and `-sum_{t <= k < 0} x~_k` for `t < 0`.
    pub fn x_partial(&self, t: i64) -> i64 {
        let n = self.base.n as i64;
        t.div_euclid(n) * self.base.kx() + self.x_prefix[t.rem_euclid(n) as usize]
    }

    pub fn y_partial(&self, t: i64) -> i64 {
        let m = self.base.m as i64;
        t.div_euclid(m) * self.base.ky() + self.y_prefix[t.rem_euclid(m) as usize]
    }

    pub fn out_dir(&self, v: PlanarVertex, axis: Axis) -> Dir {
        match axis {
            Axis::Horizontal => {
                if self.x_at(v.1).is_plus() {
                    Dir::E
                } else {
                    Dir::W
                }
            }
            Axis::Vertical => {
                if self.y_at(v.0).is_plus() {
                    Dir::N
                } else {
                    Dir::S
                }
            }
        }
    }

    /// Whether the planar edge leaving `tail` in direction `dir` agrees
    /// with the orientation.
    pub fn is_oriented(&self, tail: PlanarVertex, dir: Dir) -> bool {
        self.out_dir(tail, dir.axis()) == dir
    }

    pub fn project(&self, v: PlanarVertex) -> Vertex {
        (
            v.0.rem_euclid(self.base.m as i64) as usize,
            v.1.rem_euclid(self.base.n as i64) as usize,
        )
    }
}
