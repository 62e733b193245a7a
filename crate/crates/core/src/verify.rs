//! Exhaustive and sampled sweeps binding each theorem to a mechanical check.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::excursion::{harvest_pattern, HarvestRecord};
use crate::height::path_heights;
use crate::linklike::{swap_first_strands, LinkLikeGraph, OrientationType};
use crate::loops::{decompose, LoopDecomposition};
use crate::oracle::{brute_oracle, decomposition_as_brute};
use crate::pattern::{gcd, Sign, SignString, ToroidalPattern};

pub const SYMMETRIC_CEILING: usize = 14;
pub const GENERAL_SUM_CEILING: usize = 16;
pub const CEILING_ENV: &str = "HITOMEZASHI_CEILING_OVERRIDE";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Symmetric,
    General,
    LinkLike,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StringFilter {
    All,
    Balanced,
    TwoBlock,
    Sample { count: usize, seed: u64 },
}

impl StringFilter {
    fn keeps(&self, s: &SignString) -> bool {
        match self {
            StringFilter::All | StringFilter::Sample { .. } => true,
            StringFilter::Balanced => s.is_balanced(),
            StringFilter::TwoBlock => s.is_two_block(),
        }
    }

    pub fn is_exhaustive(&self) -> bool {
        !matches!(self, StringFilter::Sample { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub mode: SweepMode,
    pub n_min: usize,
    pub n_max: usize,
    /// Horizontal period range; ignored outside `General`.
    pub m_min: usize,
    pub m_max: usize,
    pub filter: StringFilter,
}

impl SweepSpec {
    pub fn symmetric(n_max: usize) -> Self {
        SweepSpec {
            mode: SweepMode::Symmetric,
            n_min: 3,
            n_max,
            m_min: 3,
            m_max: n_max,
            filter: StringFilter::All,
        }
    }

    pub fn general(m_max: usize, n_max: usize) -> Self {
        SweepSpec {
            mode: SweepMode::General,
            n_min: 3,
            n_max,
            m_min: 3,
            m_max,
            filter: StringFilter::All,
        }
    }

    pub fn linklike(n_max: usize) -> Self {
        SweepSpec {
            mode: SweepMode::LinkLike,
            ..SweepSpec::symmetric(n_max)
        }
    }

    pub fn with_filter(mut self, filter: StringFilter) -> Self {
        self.filter = filter;
        self
    }

    pub fn seed(&self) -> Option<u64> {
        match self.filter {
            StringFilter::Sample { seed, .. } => Some(seed),
            _ => None,
        }
    }

    /// Exhaustive sweeps are capped; sampled sweeps are not.
    pub fn check_ceilings(&self, force: bool) -> Result<()> {
        if self.n_min < 3 || self.n_min > self.n_max {
            return Err(Error::SizeTooSmall {
                m: self.m_min,
                n: self.n_min,
            });
        }
        if self.mode == SweepMode::General && (self.m_min < 3 || self.m_min > self.m_max) {
            return Err(Error::SizeTooSmall {
                m: self.m_min,
                n: self.n_min,
            });
        }
        if force || !self.filter.is_exhaustive() {
            return Ok(());
        }
        match self.mode {
            SweepMode::Symmetric | SweepMode::LinkLike if self.n_max > SYMMETRIC_CEILING => {
                Err(Error::CeilingExceeded(format!(
                    "symmetric N <= {SYMMETRIC_CEILING}, requested {}",
                    self.n_max
                )))
            }
            SweepMode::General if self.m_max + self.n_max > GENERAL_SUM_CEILING => {
                Err(Error::CeilingExceeded(format!(
                    "general M + N <= {GENERAL_SUM_CEILING}, requested {}",
                    self.m_max + self.n_max
                )))
            }
            _ => Ok(()),
        }
    }

    fn strings(&self, len: usize) -> Vec<SignString> {
        SignString::enumerate(len)
            .filter(|s| self.filter.keeps(s))
            .collect()
    }

    /// The patterns of the sweep, in a fixed order.
    pub fn patterns(&self) -> Vec<ToroidalPattern> {
        let symmetric = self.mode != SweepMode::General;
        if let StringFilter::Sample { count, seed } = self.filter {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            return (0..count)
                .map(|_| {
                    let n = rng.random_range(self.n_min..=self.n_max);
                    let x = random_string(&mut rng, n);
                    if symmetric {
                        ToroidalPattern::symmetric(x).expect("n >= 3")
                    } else {
                        let m = rng.random_range(self.m_min..=self.m_max);
                        let y = random_string(&mut rng, m);
                        ToroidalPattern::new(m, n, x, y).expect("m, n >= 3")
                    }
                })
                .collect();
        }
        let mut out = Vec::new();
        for n in self.n_min..=self.n_max {
            let xs = self.strings(n);
            if symmetric {
                out.extend(
                    xs.into_iter()
                        .map(|x| ToroidalPattern::symmetric(x).expect("n >= 3")),
                );
                continue;
            }
            for m in self.m_min..=self.m_max {
                let ys = self.strings(m);
                for x in &xs {
                    for y in &ys {
                        out.push(
                            ToroidalPattern::new(m, n, x.clone(), y.clone()).expect("m, n >= 3"),
                        );
                    }
                }
            }
        }
        out
    }
}

fn random_string(rng: &mut ChaCha8Rng, len: usize) -> SignString {
    let signs = (0..len)
        .map(|_| {
            if rng.random::<bool>() {
                Sign::Plus
            } else {
                Sign::Minus
            }
        })
        .collect();
    SignString::new(signs).expect("len >= 3")
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub theorem: String,
    pub pattern: String,
    pub loop_key: String,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "violation {} {} {} expected={} actual={}",
            self.theorem, self.pattern, self.loop_key, self.expected, self.actual
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TheoremReport {
    pub theorem: String,
    pub instances: usize,
    pub violations: Vec<Violation>,
    /// Counts of observed phenomena, e.g. move types.
    pub tallies: BTreeMap<String, u64>,
    /// Required triangles that were absent during a move schedule.
    pub schedule_failures: Vec<String>,
    pub seed: Option<u64>,
    pub wall_time: Duration,
}

impl TheoremReport {
    pub fn new(theorem: &str) -> Self {
        TheoremReport {
            theorem: theorem.to_string(),
            ..Default::default()
        }
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.schedule_failures.is_empty()
    }

    fn fail(
        &mut self,
        pattern: &str,
        loop_key: &str,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) {
        self.violations.push(Violation {
            theorem: self.theorem.clone(),
            pattern: pattern.to_string(),
            loop_key: loop_key.to_string(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }

    fn check<T: PartialEq + fmt::Debug>(
        &mut self,
        pattern: &str,
        loop_key: &str,
        expected: T,
        actual: T,
    ) {
        if expected != actual {
            self.fail(
                pattern,
                loop_key,
                format!("{expected:?}"),
                format!("{actual:?}"),
            );
        }
    }

    fn tally(&mut self, key: &str, by: u64) {
        *self.tallies.entry(key.to_string()).or_insert(0) += by;
    }

    /// Associative merge; order is restored by [`TheoremReport::finish`].
    pub fn merge(mut self, other: TheoremReport) -> TheoremReport {
        if self.theorem.is_empty() {
            self.theorem = other.theorem.clone();
        }
        self.instances += other.instances;
        self.violations.extend(other.violations);
        for (k, v) in other.tallies {
            *self.tallies.entry(k).or_insert(0) += v;
        }
        self.schedule_failures.extend(other.schedule_failures);
        self.seed = self.seed.or(other.seed);
        self
    }

    fn finish(mut self, seed: Option<u64>, started: Instant) -> Self {
        self.violations.sort();
        self.violations.dedup();
        self.schedule_failures.sort();
        self.seed = seed;
        self.wall_time = started.elapsed();
        self
    }

    /// Report lines; timing, when included, is the final line on its own.
    pub fn lines(&self, with_time: bool) -> Vec<String> {
        let mut out = vec![format!(
            "theorem {} instances {} violations {} schedule_failures {} seed {}",
            self.theorem,
            self.instances,
            self.violations.len(),
            self.schedule_failures.len(),
            self.seed.map_or("-".to_string(), |s| s.to_string())
        )];
        out.extend(
            self.tallies
                .iter()
                .map(|(k, v)| format!("tally {} {k} {v}", self.theorem)),
        );
        out.extend(self.violations.iter().map(|v| v.to_string()));
        out.extend(
            self.schedule_failures
                .iter()
                .map(|w| format!("schedule_failure {} {w}", self.theorem)),
        );
        if with_time {
            out.push(format!(
                "time {} {:.3}",
                self.theorem,
                self.wall_time.as_secs_f64()
            ));
        }
        out
    }
}

fn sweep<F>(theorem: &str, spec: &SweepSpec, per_pattern: F) -> TheoremReport
where
    F: Fn(&ToroidalPattern, &mut TheoremReport) + Sync,
{
    let started = Instant::now();
    spec.patterns()
        .par_iter()
        .map(|p| {
            let mut r = TheoremReport::new(theorem);
            r.instances = 1;
            per_pattern(p, &mut r);
            r
        })
        .reduce(|| TheoremReport::new(theorem), TheoremReport::merge)
        .finish(spec.seed(), started)
}

/// Partition and homology-sum audit run by every sweep.
fn audit_sums(p: &ToroidalPattern, d: &LoopDecomposition, r: &mut TheoremReport) {
    let id = p.id();
    r.check(&id, "sum-length", 2 * p.m() * p.n(), d.total_length());
    r.check(&id, "sum-class", (p.kx(), p.ky()), d.homology_sum());
}

fn loop_key(k: usize, d: &LoopDecomposition) -> String {
    format!("#{k}@{}", d.loops[k].start())
}

pub fn verify_homology(spec: &SweepSpec) -> TheoremReport {
    sweep("homology", spec, |p, r| {
        let d = decompose(p);
        audit_sums(p, &d, r);
        let id = p.id();
        let (kx, ky) = (p.kx(), p.ky());
        let nontrivial: Vec<(usize, (i64, i64))> = d
            .loops
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_trivial())
            .map(|(k, l)| (k, l.class()))
            .collect();
        for &(k, (l, m)) in &nontrivial {
            let key = loop_key(k, &d);
            if gcd(l, m) != 1 {
                r.fail(&id, &key, "coprime class", format!("({l},{m})"));
            }
            if p.is_symmetric() {
                let want = if kx > 0 {
                    "(1, 1)"
                } else if kx < 0 {
                    "(-1, -1)"
                } else {
                    "no nontrivial loop"
                };
                let ok = (kx > 0 && (l, m) == (1, 1)) || (kx < 0 && (l, m) == (-1, -1));
                if !ok {
                    r.fail(&id, &key, want, format!("({l},{m})"));
                }
            }
            let ok = match (kx != 0, ky != 0) {
                (true, true) => {
                    let g = gcd(kx, ky);
                    (l, m) == (kx / g, ky / g)
                }
                (false, true) => l == 0 && m.abs() == 1,
                (true, false) => m == 0 && l.abs() == 1,
                (false, false) => (l == 0 && m.abs() == 1) || (m == 0 && l.abs() == 1),
            };
            if !ok {
                r.fail(
                    &id,
                    &key,
                    format!("table cell for k=({kx},{ky})"),
                    format!("({l},{m})"),
                );
            }
        }
        // All nontrivial classes are one class up to sign.
        if let Some(&(_, first)) = nontrivial.first() {
            for &(k, c) in &nontrivial {
                if c != first && c != (-first.0, -first.1) {
                    r.fail(
                        &id,
                        &loop_key(k, &d),
                        format!("±{first:?}"),
                        format!("{c:?}"),
                    );
                }
            }
        }
        r.tally("nontrivial_loops", nontrivial.len() as u64);
    })
}

pub fn verify_length(spec: &SweepSpec) -> TheoremReport {
    sweep("length", spec, |p, r| {
        let d = decompose(p);
        audit_sums(p, &d, r);
        let id = p.id();
        let (m, n, kx, ky) = (p.m() as i64, p.n() as i64, p.kx(), p.ky());
        for (k, l) in d.loops.iter().enumerate() {
            let key = loop_key(k, &d);
            let len = (l.len() as i64).rem_euclid(8);
            let (lambda, mu) = l.class();
            if l.is_trivial() {
                r.check(&id, &key, 4, len);
                r.tally("trivial_loops", 1);
                continue;
            }
            r.tally("nontrivial_loops", 1);
            if p.is_symmetric() {
                r.check(&id, &key, (2 * kx.abs()).rem_euclid(8), len);
            }
            r.check(
                &id,
                &key,
                (2 * (mu * n + lambda * m - mu * kx)).rem_euclid(8),
                len,
            );
            if mu * kx != lambda * ky {
                r.fail(
                    &id,
                    &key,
                    format!("mu*k(x) = lambda*k(y), k=({kx},{ky})"),
                    format!("{} vs {}", mu * kx, lambda * ky),
                );
            }
        }
    })
}

pub fn verify_counts(spec: &SweepSpec) -> TheoremReport {
    let mut report = sweep("counts", spec, |p, r| {
        let d = decompose(p);
        audit_sums(p, &d, r);
        let s = d.summary();
        let id = p.id();
        let (kx, ky) = (p.kx(), p.ky());
        if kx != 0 && ky != 0 {
            r.check(&id, "nontrivial", gcd(kx, ky) as usize, s.nontrivial);
        }
        r.check(&id, "trivial-parity", 0, s.trivial % 2);
        r.check(&id, "cw-ccw", s.cw_trivial, s.ccw_trivial);
        if p.is_symmetric() {
            let n = p.n();
            r.check(&id, "total-mod-4", n % 4, s.total % 4);
            if s.total < n {
                r.fail(&id, "total-min", format!(">= {n}"), s.total);
            }
            if p.x().is_two_block() {
                r.check(&id, "two-block-total", n, s.total);
            }
            r.tally(&format!("min_total_n{n:02}"), 0);
        }
    });
    // The minimum over all strings is attained, exactly when the sweep
    // saw every string of each length.
    if spec.mode != SweepMode::General && spec.filter == StringFilter::All {
        for n in spec.n_min..=spec.n_max {
            let min = SignString::enumerate(n)
                .map(|x| {
                    decompose(&ToroidalPattern::symmetric(x).expect("n >= 3"))
                        .loops
                        .len()
                })
                .min()
                .unwrap_or(0);
            report.check(&format!("N={n}"), "min-total", n, min);
            report.tally(&format!("min_total_n{n:02}"), min as u64);
        }
        report.violations.sort();
    }
    report
}

pub fn verify_excursions(spec: &SweepSpec) -> (TheoremReport, Vec<HarvestRecord>) {
    let started = Instant::now();
    let (report, mut records) = spec
        .patterns()
        .par_iter()
        .map(|p| {
            let mut r = TheoremReport::new("excursions");
            r.instances = 1;
            let id = p.id();
            match harvest_pattern(p) {
                Ok(h) => {
                    for a in &h.anomalies {
                        r.fail(&id, "structure", "excursion structure", a);
                    }
                    for rec in &h.records {
                        let kind = match rec.kind {
                            crate::excursion::ExcursionKind::A => "a_excursions",
                            crate::excursion::ExcursionKind::AB => "ab_excursions",
                        };
                        r.tally(kind, 1);
                        if !rec.holds() {
                            r.fail(
                                &id,
                                &format!("#{}@{}", rec.loop_index, rec.loop_start),
                                rec.predicted,
                                (rec.length as i64).rem_euclid(8),
                            );
                        }
                    }
                    (r, h.records)
                }
                Err(e) => {
                    r.fail(&id, "harvest", "ok", e);
                    (r, Vec::new())
                }
            }
        })
        .reduce(
            || (TheoremReport::new("excursions"), Vec::new()),
            |(a, mut ra), (b, rb)| {
                ra.extend(rb);
                (a.merge(b), ra)
            },
        );
    records.sort();
    (report.finish(spec.seed(), started), records)
}

pub fn verify_seifert(spec: &SweepSpec) -> TheoremReport {
    sweep("seifert", spec, |p, r| {
        let id = p.id();
        let g = match LinkLikeGraph::from_symmetric_pattern(p.x()) {
            Ok(g) => g,
            Err(e) => return r.fail(&id, "build", "annulus graph", e),
        };
        r.check(&id, "euler", 2, g.euler_characteristic());
        match g.seifert_circles() {
            Ok(cs) => {
                r.check(&id, "count", decompose(p).loops.len(), cs.len());
                if cs.iter().any(|c| c.visits_crossing_twice()) {
                    r.fail(&id, "revisit", "each crossing at most once", "repeat");
                }
            }
            Err(e) => r.fail(&id, "smoothing", "valid map", e),
        }
    })
}

fn symmetric_loop_count(x: &SignString) -> usize {
    decompose(&ToroidalPattern::symmetric(x.clone()).expect("n >= 3"))
        .loops
        .len()
}

/// Triple point move rules along every adjacent transposition, reached by rotating `x`.
pub fn verify_moves(spec: &SweepSpec) -> TheoremReport {
    sweep("moves", spec, |p, r| {
        let x = p.x();
        let n = x.len();
        let base = symmetric_loop_count(x);
        for t in 0..n {
            let key = format!("swap{t},{}", (t + 1) % n);
            let id = p.id();
            let xr = x.rotated(t);
            let g = match LinkLikeGraph::from_symmetric_pattern(&xr) {
                Ok(g) => g,
                Err(e) => return r.fail(&id, &key, "annulus graph", e),
            };
            let out = match swap_first_strands(&g) {
                Ok(o) => o,
                Err(Error::MoveScheduleFailure(w)) => {
                    r.schedule_failures.push(format!("{id} {key} {w}"));
                    continue;
                }
                Err(e) => {
                    r.fail(&id, &key, "valid move", e);
                    continue;
                }
            };
            r.check(&id, &key, 2 * (n - 2), out.moves.len());
            for m in &out.moves {
                let d = m.delta();
                if ![-2, 0, 2].contains(&d) {
                    r.fail(&id, &key, "delta in {-2,0,2}", d);
                }
                match m.orientation {
                    OrientationType::Adjacent => {
                        r.tally("adjacent_moves", 1);
                        if d == 0 {
                            r.tally("adjacent_delta_zero", 1);
                        } else {
                            r.fail(&id, &key, "adjacent delta 0", d);
                        }
                    }
                    OrientationType::Alternating => {
                        let c = match m.configuration {
                            Some(c) => format!("{c:?}"),
                            None => "none".into(),
                        };
                        r.tally(&format!("alternating_config_{c}"), 1);
                    }
                }
            }
            for (a, b) in out.pairs() {
                if a.orientation != b.orientation {
                    r.fail(
                        &id,
                        &key,
                        format!("{:?} pair", a.orientation),
                        format!("{:?}", b.orientation),
                    );
                }
                if (a.delta() + b.delta()).rem_euclid(4) != 0 {
                    r.fail(&id, &key, "pair delta 0 mod 4", a.delta() + b.delta());
                }
                r.tally("pairs", 1);
            }
            let swapped = x.swapped(t, (t + 1) % n);
            let expected = symmetric_loop_count(&swapped);
            match out.graph.seifert_count() {
                Ok(c) => {
                    r.check(&id, &key, expected, c);
                    r.check(&id, &format!("{key}-mod4"), base % 4, c % 4);
                }
                Err(e) => r.fail(&id, &key, "valid result", e),
            }
            let target = LinkLikeGraph::from_symmetric_pattern(&xr.swapped(0, 1)).map(|h| {
                h.relabel_strands(|s| match s {
                    0 => 1,
                    1 => 0,
                    s => s,
                })
            });
            match target {
                Ok(h) if out.graph.is_isomorphic(&h) => r.tally("isomorphic_results", 1),
                Ok(_) => r.fail(&id, &key, "isomorphic to G'(x')", "not isomorphic"),
                Err(e) => r.fail(&id, &key, "G'(x')", e),
            }
        }
    })
}

/// The brute tracer against `decompose` on seeded random patterns.
pub fn verify_oracle_sample(count: usize, seed: u64, max: usize) -> TheoremReport {
    verify_oracle(&SweepSpec::general(max, max).with_filter(StringFilter::Sample { count, seed }))
}

/// The brute tracer against `decompose` on every pattern of `spec`.
/// Sizes must satisfy `M * N <= 400`.
pub fn verify_oracle(spec: &SweepSpec) -> TheoremReport {
    sweep("oracle", spec, |p, r| {
        let d = decompose(p);
        let (summary, loops) = brute_oracle(p);
        let id = p.id();
        r.check(&id, "summary", summary, d.summary());
        r.check(&id, "loops", loops, decomposition_as_brute(&d));
    })
}

/// Structural invariants: partition, homology sum, turning numbers,
/// vertex revisits and path-height constancy over three periods.
pub fn verify_invariants(spec: &SweepSpec) -> TheoremReport {
    sweep("invariants", spec, |p, r| {
        let d = decompose(p);
        audit_sums(p, &d, r);
        let id = p.id();
        let mut seen = vec![0u8; p.num_edges()];
        let lift = p.lift();
        for (k, l) in d.loops.iter().enumerate() {
            let key = loop_key(k, &d);
            for e in &l.edges {
                seen[p.edge_index(e)] += 1;
            }
            let alternating =
                (0..l.len()).all(|t| l.edges[t].axis() != l.edges[(t + 1) % l.len()].axis());
            if !alternating {
                r.fail(&id, &key, "alternating axes", "repeat");
            }
            let expected_turning = if l.is_trivial() { 1 } else { 0 };
            r.check(&id, &key, expected_turning, l.turning().abs());
            if p.m() % 2 == 0 && p.n() % 2 == 0 && l.visits_vertex_twice() {
                r.fail(&id, &key, "no vertex revisit", "revisit");
            }
            let start = l.start();
            let v = (start.tail.0 as i64, start.tail.1 as i64);
            match path_heights(&lift, v, start.axis(), 3 * l.len()) {
                Ok(hs) => {
                    if hs.windows(2).any(|w| w[0] != w[1]) {
                        r.fail(
                            &id,
                            &key,
                            "constant height",
                            format!("{:?}", &hs[..4.min(hs.len())]),
                        );
                    }
                }
                Err(e) => r.fail(&id, &key, "oriented lift", e),
            }
        }
        if seen.iter().any(|&c| c != 1) {
            r.fail(&id, "partition", "each edge once", "overlap or gap");
        }
    })
}
