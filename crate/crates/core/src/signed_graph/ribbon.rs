//! 4-regular ribbon graphs with twisted edges.
//!
//! Every vertex is a cross with slots `0..4` in counter-clockwise order;
//! slots `s` and `s+2` are opposite. Straight cycles (rings) continue
//! through opposite slots. A vertex switch reverses one rotation and
//! toggles the twist of its non-loop edges; canonical codes are invariant
//! under switches and relabelings.

use super::{EdgeEnd, GraphError, SignedGraph};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RibbonError {
    #[error("slot {slot} of vertex {vertex} is not matched by exactly one edge")]
    UnmatchedSlot { vertex: usize, slot: u8 },
    #[error("edge {edge} names vertex {vertex} or slot {slot} out of range")]
    OutOfRange { edge: usize, vertex: usize, slot: u8 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RibbonEnd {
    pub vertex: usize,
    pub slot: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonEdge {
    pub a: RibbonEnd,
    pub b: RibbonEnd,
    pub twisted: bool,
}

/// What sits across one slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Link {
    pub vertex: usize,
    pub slot: u8,
    pub twisted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RibbonSpec")]
pub struct RibbonGraph {
    pub num_vertices: usize,
    pub edges: Vec<RibbonEdge>,
    #[serde(skip)]
    links: Vec<[Link; 4]>,
}

#[derive(Deserialize)]
struct RibbonSpec {
    num_vertices: usize,
    edges: Vec<RibbonEdge>,
}

impl TryFrom<RibbonSpec> for RibbonGraph {
    type Error = RibbonError;
    fn try_from(s: RibbonSpec) -> Result<Self, RibbonError> {
        RibbonGraph::new(s.num_vertices, s.edges)
    }
}

/// A ring: the crosses visited with their entry slots, and its twist count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StraightCycle {
    pub crosses: Vec<(usize, u8)>,
    pub twists: usize,
}

/// A boundary component: the corners it runs past, `(vertex, c)` meaning
/// the corner between slots `c` and `c+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryWalk {
    pub corners: Vec<(usize, u8)>,
    pub length: usize,
}

impl RibbonGraph {
    pub fn new(num_vertices: usize, edges: Vec<RibbonEdge>) -> Result<Self, RibbonError> {
        let none = Link { vertex: usize::MAX, slot: 0, twisted: false };
        let mut links = vec![[none; 4]; num_vertices];
        for (id, e) in edges.iter().enumerate() {
            for (x, y) in [(e.a, e.b), (e.b, e.a)] {
                if x.vertex >= num_vertices || x.slot >= 4 {
                    return Err(RibbonError::OutOfRange { edge: id, vertex: x.vertex, slot: x.slot });
                }
                let cell = &mut links[x.vertex][x.slot as usize];
                if cell.vertex != usize::MAX {
                    return Err(RibbonError::UnmatchedSlot { vertex: x.vertex, slot: x.slot });
                }
                *cell = Link { vertex: y.vertex, slot: y.slot, twisted: e.twisted };
            }
            if e.a == e.b {
                return Err(RibbonError::UnmatchedSlot { vertex: e.a.vertex, slot: e.a.slot });
            }
        }
        for (v, row) in links.iter().enumerate() {
            if let Some(s) = row.iter().position(|l| l.vertex == usize::MAX) {
                return Err(RibbonError::UnmatchedSlot { vertex: v, slot: s as u8 });
            }
        }
        Ok(RibbonGraph { num_vertices, edges, links })
    }

    pub fn link(&self, v: usize, slot: u8) -> Link {
        self.links[v][(slot & 3) as usize]
    }

    /// Each ring once, starting at its lowest (vertex, slot pair).
    pub fn straight_cycles(&self) -> Vec<StraightCycle> {
        let mut seen = vec![[false; 2]; self.num_vertices];
        let mut out = Vec::new();
        for v in 0..self.num_vertices {
            for p in 0..2u8 {
                if seen[v][p as usize] {
                    continue;
                }
                let (mut x, mut k) = (v, p);
                let mut crosses = Vec::new();
                let mut twists = 0;
                loop {
                    seen[x][(k & 1) as usize] = true;
                    crosses.push((x, k));
                    let l = self.link(x, k + 2);
                    twists += usize::from(l.twisted);
                    x = l.vertex;
                    k = l.slot;
                    if (x, k) == (v, p) {
                        break;
                    }
                }
                out.push(StraightCycle { crosses, twists });
            }
        }
        out
    }

    /// Boundary components of the thickened surface.
    pub fn boundaries(&self) -> Vec<BoundaryWalk> {
        let nv = self.num_vertices;
        // state index: (vertex * 4 + slot) * 2 + (d == -1)
        let mut seen = vec![false; nv * 8];
        let mut faces: Vec<BoundaryWalk> = Vec::new();
        let mut keys: Vec<Vec<(usize, u8)>> = Vec::new();
        for start in 0..nv * 8 {
            if seen[start] {
                continue;
            }
            let mut state = start;
            let mut corners = Vec::new();
            loop {
                seen[state] = true;
                let (s, back) = ((state / 2 % 4) as u8, state % 2 == 1);
                let l = self.link(state / 8, s);
                let back2 = back ^ l.twisted;
                let (out_slot, corner) = if back2 { ((l.slot + 3) % 4, (l.slot + 3) % 4) } else { ((l.slot + 1) % 4, l.slot) };
                corners.push((l.vertex, corner));
                state = (l.vertex * 4 + out_slot as usize) * 2 + usize::from(back2);
                if state == start {
                    break;
                }
            }
            let mut key = corners.clone();
            key.sort_unstable();
            if !keys.contains(&key) {
                keys.push(key);
                let length = corners.len();
                faces.push(BoundaryWalk { corners, length });
            }
        }
        faces
    }

    /// Sorted boundary lengths.
    pub fn boundary_profile(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.boundaries().iter().map(|b| b.length).collect();
        p.sort_unstable();
        p
    }

    /// `V − E + F` of the closed surface obtained by capping boundaries.
    pub fn euler_characteristic(&self) -> i64 {
        self.boundaries().len() as i64 - self.num_vertices as i64
    }

    fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.num_vertices];
        let mut out = Vec::new();
        for s in 0..self.num_vertices {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            let mut members = vec![s];
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                i += 1;
                for l in &self.links[u] {
                    if comp[l.vertex] == usize::MAX {
                        comp[l.vertex] = id;
                        members.push(l.vertex);
                    }
                }
            }
            out.push(members);
        }
        out
    }

    fn rooted_code(&self, root: usize, s0: u8, rev0: bool) -> Vec<u32> {
        let nv = self.num_vertices;
        let mut label = vec![usize::MAX; nv];
        let mut entry = vec![0u8; nv];
        let mut rev = vec![false; nv];
        let mut order = vec![root];
        label[root] = 0;
        entry[root] = s0;
        rev[root] = rev0;
        let slot_at = |e: u8, r: bool, k: u8| if r { (e + 4 - k) % 4 } else { (e + k) % 4 };
        let mut code = Vec::with_capacity(nv * 12);
        let mut idx = 0;
        while idx < order.len() {
            let x = order[idx];
            idx += 1;
            for k in 0..4 {
                let l = self.link(x, slot_at(entry[x], rev[x], k));
                if label[l.vertex] == usize::MAX {
                    label[l.vertex] = order.len();
                    order.push(l.vertex);
                    entry[l.vertex] = l.slot;
                    rev[l.vertex] = rev[x] ^ l.twisted;
                }
            }
        }
        for &x in &order {
            for k in 0..4 {
                let l = self.link(x, slot_at(entry[x], rev[x], k));
                let y = l.vertex;
                let off = if rev[y] { (entry[y] + 4 - l.slot) % 4 } else { (l.slot + 4 - entry[y]) % 4 };
                code.push(label[y] as u32);
                code.push(u32::from(off));
                code.push(u32::from(l.twisted ^ rev[x] ^ rev[y]));
            }
        }
        code
    }

    /// Complete invariant under vertex switches and relabelings.
    pub fn canonical_code(&self) -> Vec<u32> {
        let mut parts: Vec<Vec<u32>> = self
            .components()
            .iter()
            .map(|c| {
                let mut best: Option<Vec<u32>> = None;
                for &v in c {
                    for s in 0..4 {
                        for r in [false, true] {
                            let code = self.rooted_code(v, s, r);
                            if best.as_ref().is_none_or(|b| code < *b) {
                                best = Some(code);
                            }
                        }
                    }
                }
                best.unwrap_or_default()
            })
            .collect();
        parts.sort();
        let mut out = Vec::new();
        for p in parts {
            out.push(p.len() as u32);
            out.extend(p);
        }
        out
    }

    pub fn is_isomorphic(&self, other: &RibbonGraph) -> bool {
        self.num_vertices == other.num_vertices && self.canonical_code() == other.canonical_code()
    }
}

impl SignedGraph {
    /// One cross per edge; consecutive edge-ends at a vertex are joined
    /// (right of the first to left of the second), twisted where the sign
    /// between them is negative.
    ///
    /// Edge end 0 owns slots 0 (left) and 2 (right); end 1 owns 1 and 3.
    pub fn to_ribbon(&self) -> Result<RibbonGraph, RibbonError> {
        self.validate()?;
        let mut edges = Vec::with_capacity(2 * self.num_edges());
        let which = |v: usize, s: usize| -> (usize, u8) {
            let e = self.vertices[v].cyclic[s];
            (e, u8::from(self.edges[e][0] != EdgeEnd(v, s)))
        };
        for (u, rec) in self.vertices.iter().enumerate() {
            let d = rec.cyclic.len();
            for i in 0..d {
                let (ea, wa) = which(u, i);
                let (eb, wb) = which(u, (i + 1) % d);
                edges.push(RibbonEdge {
                    a: RibbonEnd { vertex: ea, slot: 2 + wa },
                    b: RibbonEnd { vertex: eb, slot: wb },
                    twisted: rec.signs[i] < 0,
                });
            }
        }
        RibbonGraph::new(self.num_edges(), edges)
    }
}

/// One isomorphism class of `n = 2` ribbon graphs on `V` crosses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct N2Class {
    pub representative: RibbonGraph,
    /// Closure labels in this class.
    pub closures: Vec<String>,
    pub boundary_profile: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct N2Classification {
    pub v: usize,
    pub classes: Vec<N2Class>,
}

/// The four ways to close a chain of `V` crosses into a ring of rings.
///
/// Cross `i` has slots `0: toward i+1`, `1: toward i−1` and their opposites
/// `2`, `3`. Consecutive crosses are joined by an untwisted `0–1` edge and a
/// twisted `2–3` edge; the last pair is closed straight (`P1`) or crossed
/// (`P2`), with the twist on either of the two closing edges.
pub fn n2_closures(v: usize) -> Result<Vec<(String, RibbonGraph)>, RibbonError> {
    if v < 1 {
        return Err(GraphError::Malformed("V must be at least 1".into()).into());
    }
    let end = |vertex: usize, slot: u8| RibbonEnd { vertex, slot };
    let mut chain = Vec::new();
    for i in 1..v {
        chain.push(RibbonEdge { a: end(i - 1, 0), b: end(i, 1), twisted: false });
        chain.push(RibbonEdge { a: end(i - 1, 2), b: end(i, 3), twisted: true });
    }
    let last = v - 1;
    let mut out = Vec::new();
    for (name, targets) in [("P1", [1u8, 3]), ("P2", [3u8, 1])] {
        for tw in 0..2 {
            let mut edges = chain.clone();
            edges.push(RibbonEdge { a: end(last, 0), b: end(0, targets[0]), twisted: tw == 0 });
            edges.push(RibbonEdge { a: end(last, 2), b: end(0, targets[1]), twisted: tw == 1 });
            out.push((format!("{name}{}", if tw == 0 { "a" } else { "b" }), RibbonGraph::new(v, edges)?));
        }
    }
    Ok(out)
}

/// Isomorphism classes among the closures of [`n2_closures`].
pub fn n2_classify(v: usize) -> Result<N2Classification, RibbonError> {
    let mut classes: Vec<(Vec<u32>, N2Class)> = Vec::new();
    for (name, g) in n2_closures(v)? {
        let code = g.canonical_code();
        if let Some((_, c)) = classes.iter_mut().find(|(k, _)| *k == code) {
            c.closures.push(name);
        } else {
            let boundary_profile = g.boundary_profile();
            classes.push((code, N2Class { representative: g, closures: vec![name], boundary_profile }));
        }
    }
    Ok(N2Classification { v, classes: classes.into_iter().map(|(_, c)| c).collect() })
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn switch(g: &RibbonGraph, x: usize) -> RibbonGraph {
        let m = |e: RibbonEnd| if e.vertex == x { RibbonEnd { vertex: x, slot: (4 - e.slot) % 4 } } else { e };
        let edges = g
            .edges
            .iter()
            .map(|e| {
                let touches = (e.a.vertex == x) != (e.b.vertex == x);
                RibbonEdge { a: m(e.a), b: m(e.b), twisted: e.twisted ^ touches }
            })
            .collect();
        RibbonGraph::new(g.num_vertices, edges).unwrap()
    }

    #[test]
    fn bolza_ribbon() {
        let g = SignedGraph::from_edges_signed(1, 2, &[(0, 1)], vec![vec![-1], vec![-1]]).unwrap();
        let r = g.to_ribbon().unwrap();
        let rings = r.straight_cycles();
        assert_eq!(rings.len(), 2);
        assert!(rings.iter().all(|c| c.crosses.len() == 1 && c.twists % 2 == 1));
        let corners: usize = r.boundaries().iter().map(|b| b.length).sum();
        assert_eq!(corners, 4);
    }

    #[test]
    fn rings_have_n_crosses_and_odd_twist() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for base in [k4(), petersen(), theta([1, 1, -1]), cycle(7)] {
            let mut g = base.clone();
            for rec in &mut g.vertices {
                let d = rec.cyclic.len();
                let mut s: Vec<i8> = (0..d).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
                if s.iter().map(|&x| i32::from(x)).product::<i32>() != -1 {
                    s[0] *= -1;
                }
                rec.signs = s;
            }
            let r = g.to_ribbon().unwrap();
            let rings = r.straight_cycles();
            assert_eq!(rings.len(), g.num_vertices());
            for c in &rings {
                assert_eq!(c.crosses.len(), g.n);
                assert_eq!(c.twists % 2, 1);
            }
            let total: usize = r.boundaries().iter().map(|b| b.length).sum();
            assert_eq!(total, 4 * r.num_vertices);
        }
    }

    #[test]
    fn flips_give_switch_equivalent_ribbons() {
        let g = petersen();
        let r0 = g.to_ribbon().unwrap().canonical_code();
        for v in 0..10 {
            assert_eq!(g.vertex_flip(v).to_ribbon().unwrap().canonical_code(), r0);
        }
    }

    #[test]
    fn switches_preserve_code_and_boundaries() {
        for (_, g) in n2_closures(6).unwrap() {
            let c = g.canonical_code();
            let p = g.boundary_profile();
            for x in 0..6 {
                let h = switch(&g, x);
                assert_eq!(h.canonical_code(), c);
                assert_eq!(h.boundary_profile(), p);
            }
        }
    }

    #[test]
    fn n2_class_counts() {
        for v in 3..=15 {
            let cls = n2_classify(v).unwrap();
            let mut profiles: Vec<Vec<usize>> = cls.classes.iter().map(|c| c.boundary_profile.clone()).collect();
            profiles.sort();
            if v % 3 == 0 {
                assert_eq!(profiles, vec![vec![v, v, v, v], vec![2 * v, 2 * v]], "V={v}");
            } else {
                assert_eq!(profiles, vec![vec![v, 3 * v]], "V={v}");
            }
        }
    }

    #[test]
    fn signed_cycles_land_in_n2_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for v in [6usize, 7, 12] {
            let codes: Vec<Vec<u32>> =
                n2_classify(v).unwrap().classes.iter().map(|c| c.representative.canonical_code()).collect();
            for _ in 0..20 {
                let mut g = cycle(v);
                for rec in &mut g.vertices {
                    rec.signs = if rng.gen_bool(0.5) { vec![1, -1] } else { vec![-1, 1] };
                }
                let r = g.to_ribbon().unwrap();
                assert!(codes.contains(&r.canonical_code()), "V={v}");
            }
        }
    }

    #[test]
    fn json_rebuilds_links() {
        let (_, g) = n2_closures(5).unwrap().remove(0);
        let s = serde_json::to_string(&g).unwrap();
        let back: RibbonGraph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        let bad = r#"{"num_vertices":1,"edges":[{"a":{"vertex":0,"slot":0},"b":{"vertex":0,"slot":2},"twisted":true}]}"#;
        assert!(serde_json::from_str::<RibbonGraph>(bad).is_err());
    }
}
