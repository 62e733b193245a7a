//! A deliberately naive second tracer, written straight from the
//! definition and sharing nothing with `loops` except the input pattern.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::loops::{CountSummary, LoopDecomposition};
use crate::pattern::ToroidalPattern;

type Edge = (usize, usize, char);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BruteLoop {
    /// Least edge under `(i, j, horizontal-first, E/W/N/S)`.
    pub start: (usize, usize, char),
    pub length: usize,
    pub class: (i64, i64),
    pub turning: i64,
}

fn order_key(e: &Edge) -> (usize, usize, u8, u8) {
    let (axis, dir) = match e.2 {
        'E' => (0, 0),
        'W' => (0, 1),
        'N' => (1, 2),
        'S' => (1, 3),
        _ => unreachable!(),
    };
    (e.0, e.1, axis, dir)
}

fn vector(d: char) -> (i64, i64) {
    match d {
        'E' => (1, 0),
        'W' => (-1, 0),
        'N' => (0, 1),
        'S' => (0, -1),
        _ => unreachable!(),
    }
}

/// Trace all loops of `p` through an explicit successor table.
pub fn brute_oracle(p: &ToroidalPattern) -> (CountSummary, Vec<BruteLoop>) {
    let (m, n) = (p.m(), p.n());
    assert!(m * n <= 400, "brute oracle limited to M*N <= 400");
    let plus_row = |j: usize| p.x().get(j).is_plus();
    let plus_col = |i: usize| p.y().get(i).is_plus();
    let mut edges: Vec<Edge> = Vec::new();
    for i in 0..m {
        for j in 0..n {
            for d in ['E', 'W', 'N', 'S'] {
                let ok = match d {
                    'E' => plus_row(j),
                    'W' => !plus_row(j),
                    'N' => plus_col(i),
                    _ => !plus_col(i),
                };
                if ok {
                    edges.push((i, j, d));
                }
            }
        }
    }
    let valid: BTreeSet<Edge> = edges.iter().copied().collect();
    let mut succ: HashMap<Edge, Edge> = HashMap::new();
    for &(i, j, d) in &edges {
        let (dx, dy) = vector(d);
        let hi = (i as i64 + dx).rem_euclid(m as i64) as usize;
        let hj = (j as i64 + dy).rem_euclid(n as i64) as usize;
        let candidates: &[char] = if dx != 0 { &['N', 'S'] } else { &['E', 'W'] };
        let next: Vec<Edge> = candidates
            .iter()
            .map(|&c| (hi, hj, c))
            .filter(|e| valid.contains(e))
            .collect();
        assert_eq!(next.len(), 1);
        succ.insert((i, j, d), next[0]);
    }

    let mut done: BTreeSet<Edge> = BTreeSet::new();
    let mut loops = Vec::new();
    let mut sorted = edges.clone();
    sorted.sort_by_key(order_key);
    for e in sorted {
        if done.contains(&e) {
            continue;
        }
        let mut cycle = vec![e];
        done.insert(e);
        let mut cur = succ[&e];
        while cur != e {
            done.insert(cur);
            cycle.push(cur);
            cur = succ[&cur];
        }
        let (mut sx, mut sy, mut winding) = (0i64, 0i64, 0i64);
        for k in 0..cycle.len() {
            let a = vector(cycle[k].2);
            let b = vector(cycle[(k + 1) % cycle.len()].2);
            sx += a.0;
            sy += a.1;
            // Positive cross product is a left (counterclockwise) turn.
            winding += a.0 * b.1 - a.1 * b.0;
        }
        assert!(sx % m as i64 == 0 && sy % n as i64 == 0);
        let start = cycle.iter().min_by_key(|e| order_key(e)).copied().unwrap();
        loops.push(BruteLoop {
            start,
            length: cycle.len(),
            class: (sx / m as i64, sy / n as i64),
            turning: -winding / 4,
        });
    }
    loops.sort();

    let mut s = CountSummary::default();
    let mut classes = BTreeMap::new();
    for l in &loops {
        s.total += 1;
        *classes.entry(l.class).or_insert(0) += 1;
        if l.class == (0, 0) {
            s.trivial += 1;
            if l.turning > 0 {
                s.cw_trivial += 1;
            } else {
                s.ccw_trivial += 1;
            }
        } else {
            s.nontrivial += 1;
        }
    }
    s.class_multiset = classes;
    (s, loops)
}

/// The same loop data read off a decomposition, for comparison.
pub fn decomposition_as_brute(d: &LoopDecomposition) -> Vec<BruteLoop> {
    let mut v: Vec<BruteLoop> = d
        .loops
        .iter()
        .map(|l| {
            let e = l.start();
            BruteLoop {
                start: (e.tail.0, e.tail.1, e.dir.as_char()),
                length: l.len(),
                class: l.class(),
                turning: l.turning(),
            }
        })
        .collect();
    v.sort();
    v
}
