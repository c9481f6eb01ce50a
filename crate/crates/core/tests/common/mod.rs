//! Brute-force path oracles shared by the detector tests.
#![allow(dead_code)]

use std::collections::HashSet;

use backbone::arms::ArmQuery;
use backbone::lattice::{Axial, Coloring, Region};

/// Vertex sets of all simple monochromatic paths whose only source is the
/// first site and only target the last.
pub fn minimal_paths(q: &ArmQuery, c: &Coloring) -> Vec<u32> {
    let want = q.color.is_black();
    let ok = |v: u32| c.get(v) == want && q.forbidden != Some(v);
    let is_src: HashSet<u32> = q.sources.iter().copied().collect();
    let mut out = HashSet::new();
    fn walk(
        v: u32,
        mask: u32,
        q: &ArmQuery,
        ok: &dyn Fn(u32) -> bool,
        is_src: &HashSet<u32>,
        out: &mut HashSet<u32>,
    ) {
        for &w in q.region.neighbor_ids(v) {
            if w == u32::MAX || mask >> w & 1 == 1 || !ok(w) || is_src.contains(&w) {
                continue;
            }
            if q.is_target(w) {
                out.insert(mask | 1 << w);
            } else {
                walk(w, mask | 1 << w, q, ok, is_src, out);
            }
        }
    }
    for &s in &q.sources {
        if !ok(s) {
            continue;
        }
        if q.is_target(s) {
            out.insert(1 << s);
        } else {
            walk(s, 1 << s, q, &ok, &is_src, &mut out);
        }
    }
    out.into_iter().collect()
}

/// Largest family of pairwise disjoint paths, by branching on sources.
pub fn packing(paths: &[u32], q: &ArmQuery, cap: usize) -> usize {
    let by_source: Vec<Vec<u32>> = q
        .sources
        .iter()
        .map(|&s| paths.iter().copied().filter(|p| p >> s & 1 == 1).collect())
        .collect();
    fn go(i: usize, used: u32, by: &[Vec<u32>], cap: usize) -> usize {
        if i == by.len() || cap == 0 {
            return 0;
        }
        let mut best = go(i + 1, used, by, cap);
        for &p in &by[i] {
            if p & used == 0 {
                best = best.max(1 + go(i + 1, used | p, by, cap - 1));
                if best == cap {
                    break;
                }
            }
        }
        best
    }
    go(0, 0, &by_source, cap)
}

/// Whether some path survives removing `skip` (or nothing).
pub fn connected(q: &ArmQuery, c: &Coloring, skip: Option<u32>) -> bool {
    let want = q.color.is_black();
    let ok = |v: u32| c.get(v) == want && q.forbidden != Some(v) && Some(v) != skip;
    let mut seen: HashSet<u32> = q.sources.iter().copied().filter(|&s| ok(s)).collect();
    let mut stack: Vec<u32> = seen.iter().copied().collect();
    while let Some(v) = stack.pop() {
        if q.is_target(v) {
            return true;
        }
        for &w in q.region.neighbor_ids(v) {
            if w != u32::MAX && ok(w) && seen.insert(w) {
                stack.push(w);
            }
        }
    }
    false
}

pub fn strip(cols: i32, rows: i32) -> (Region, Vec<u32>, Vec<u32>) {
    let coords: Vec<Axial> = (0..rows).flat_map(|y| (0..cols).map(move |x| Axial::new(x, y))).collect();
    let reg = Region::custom(&coords).unwrap();
    let col = |x: i32| (0..rows).map(|y| reg.index_of(Axial::new(x, y)).unwrap()).collect::<Vec<_>>();
    let (l, r) = (col(0), col(cols - 1));
    (reg, l, r)
}
