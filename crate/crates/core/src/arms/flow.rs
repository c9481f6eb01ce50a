//! Vertex-disjoint monochromatic paths as unit-capacity max flow.
//!
//! Every admissible site v is split into v_in → v_out with capacity one; the
//! residual graph is never materialised. Flow is stored as, per site, whether
//! it carries a path (`through`), where that path comes from (`pred`) and where
//! it goes (`succ`). All per-site arrays are reused across trials and reset
//! only where a trial touched them.

use super::ArmQuery;
use crate::lattice::{ColorSource, NO_SITE};

const NONE: u32 = u32::MAX;
/// `pred` marker: the path starts at this site.
const FROM_SOURCE: u32 = u32::MAX - 1;
/// `succ` marker: the path ends at this site.
const TO_SINK: u32 = u32::MAX - 1;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    In,
    Out,
}

#[inline]
fn node(v: u32, side: Side) -> u32 {
    (v << 1) | (side == Side::Out) as u32
}

#[inline]
fn split(n: u32) -> (u32, Side) {
    (n >> 1, if n & 1 == 1 { Side::Out } else { Side::In })
}

/// Reusable scratch space for arm searches over one region size.
#[derive(Debug, Clone)]
pub struct ArmDetector {
    through: Vec<bool>,
    pred: Vec<u32>,
    succ: Vec<u32>,
    touched: Vec<u32>,
    /// Per split node: visit stamp in the high half, parent node in the low.
    seen: Vec<u64>,
    epoch: u32,
    queue: Vec<u32>,
}

impl ArmDetector {
    pub fn new(sites: usize) -> Self {
        ArmDetector {
            through: vec![false; sites],
            pred: vec![NONE; sites],
            succ: vec![NONE; sites],
            touched: Vec::new(),
            seen: vec![0; 2 * sites],
            epoch: 0,
            queue: Vec::new(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.through.len()
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.seen.fill(0);
            self.epoch = 1;
        }
        self.epoch
    }

    fn new_query(&mut self) {
        for &v in &self.touched {
            let v = v as usize;
            self.through[v] = false;
            self.pred[v] = NONE;
            self.succ[v] = NONE;
        }
        self.touched.clear();
    }

    #[inline]
    fn admissible<C: ColorSource>(q: &ArmQuery, colors: &mut C, v: u32) -> bool {
        colors.is_black(v) == q.color.is_black() && q.forbidden != Some(v)
    }

    #[inline]
    fn stamped(&self, n: u32, ep: u32) -> bool {
        (self.seen[n as usize] >> 32) as u32 == ep
    }

    #[inline]
    fn parent(&self, n: u32) -> u32 {
        self.seen[n as usize] as u32
    }

    /// Whether a single path of the query colour joins a source to a target
    /// (depth-first, stopping at the first target).
    pub fn has_one_arm<C: ColorSource>(&mut self, q: &ArmQuery, colors: &mut C) -> bool {
        assert!(q.region.len() <= self.capacity(), "detector smaller than region");
        self.new_query();
        let ep = self.next_epoch();
        let mark = (ep as u64) << 32;
        self.queue.clear();
        for &s in &q.sources {
            if Self::admissible(q, colors, s) && !self.stamped(s, ep) {
                if q.is_target(s) {
                    return true;
                }
                self.seen[s as usize] = mark;
                self.queue.push(s);
            }
        }
        while let Some(v) = self.queue.pop() {
            for &w in q.region.neighbor_ids(v) {
                if w == NO_SITE || self.stamped(w, ep) || !Self::admissible(q, colors, w) {
                    continue;
                }
                if q.is_target(w) {
                    return true;
                }
                self.seen[w as usize] = mark;
                self.queue.push(w);
            }
        }
        false
    }

    /// Number of vertex-disjoint source→target paths of the query colour,
    /// stopping once `q.required_count` are found.
    pub fn max_disjoint_arms<C: ColorSource>(&mut self, q: &ArmQuery, colors: &mut C) -> usize {
        assert!(q.region.len() <= self.capacity(), "detector smaller than region");
        self.new_query();
        let mut found = 0;
        while found < q.required_count && self.augment(q, colors) {
            found += 1;
        }
        found
    }

    fn touch(&mut self, v: u32) {
        self.touched.push(v);
    }

    #[inline]
    fn visit(&mut self, n: u32, from: u32, ep: u32) {
        if !self.stamped(n, ep) {
            self.seen[n as usize] = ((ep as u64) << 32) | from as u64;
            self.queue.push(n);
        }
    }

    /// One augmentation in the residual graph. Search order is depth-first:
    /// any augmenting path will do at unit capacity, and a stack reaches the
    /// rim long before a breadth-first sweep of the cluster would.
    fn augment<C: ColorSource>(&mut self, q: &ArmQuery, colors: &mut C) -> bool {
        let ep = self.next_epoch();
        self.queue.clear();
        for &s in &q.sources {
            if self.pred[s as usize] != FROM_SOURCE && Self::admissible(q, colors, s) {
                self.visit(node(s, Side::In), NONE, ep);
            }
        }
        while let Some(n) = self.queue.pop() {
            let (v, side) = split(n);
            let vi = v as usize;
            match side {
                Side::In => {
                    if !self.through[vi] {
                        self.visit(node(v, Side::Out), n, ep);
                    }
                    let p = self.pred[vi];
                    if p != NONE && p != FROM_SOURCE {
                        // undo the flow p → v
                        self.visit(node(p, Side::Out), n, ep);
                    }
                }
                Side::Out => {
                    if q.is_target(v) && self.succ[vi] != TO_SINK {
                        self.apply(n);
                        return true;
                    }
                    if self.through[vi] {
                        self.visit(node(v, Side::In), n, ep);
                    }
                    let out = self.succ[vi];
                    for &w in q.region.neighbor_ids(v) {
                        if w == NO_SITE || w == out || !Self::admissible(q, colors, w) {
                            continue;
                        }
                        self.visit(node(w, Side::In), n, ep);
                    }
                }
            }
        }
        false
    }

    /// Pushes one unit along the parent chain ending at `last` (an out-node
    /// joined to the sink).
    fn apply(&mut self, last: u32) {
        let (t, _) = split(last);
        self.succ[t as usize] = TO_SINK;
        self.touch(t);
        let mut cur = last;
        loop {
            let prev = self.parent(cur);
            let (v, vs) = split(cur);
            if prev == NONE {
                debug_assert!(vs == Side::In);
                self.pred[v as usize] = FROM_SOURCE;
                self.touch(v);
                break;
            }
            let (u, us) = split(prev);
            match (us, vs) {
                (Side::In, Side::Out) if u == v => self.through[v as usize] = true,
                (Side::Out, Side::In) if u == v => self.through[v as usize] = false,
                (Side::Out, Side::In) => {
                    self.succ[u as usize] = v;
                    self.pred[v as usize] = u;
                    self.touch(u);
                    self.touch(v);
                }
                (Side::In, Side::Out) => {
                    // cancelled flow v → u
                    if self.succ[v as usize] == u {
                        self.succ[v as usize] = NONE;
                    }
                    if self.pred[u as usize] == v {
                        self.pred[u as usize] = NONE;
                    }
                }
                _ => unreachable!("residual arcs join opposite sides"),
            }
            cur = prev;
        }
    }
}
