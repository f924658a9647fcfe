//! Signed graphs: cyclic orders and signs at every vertex, vertex flips,
//! girth, and isomorphism modulo flips and relabelings.
//!
//! Each vertex carries its incident edge-ends in cyclic order (slots
//! `0..deg`) and one sign per consecutive pair: `signs[i]` sits between
//! slots `i` and `i+1 mod deg`. A valid signed graph is `n`-regular with
//! sign product `−1` at every vertex. Loops and parallel edges are allowed.
//!
//! JSON shape:
//! `{"n": 3, "vertices": [{"cyclic": [0, 1, 2], "signs": [1, 1, -1]}, …],
//!   "edges": [[[0, 0], [1, 0]], …]}` where an edge lists its two
//! `[vertex, slot]` ends.

mod ribbon;

pub use ribbon::{
    n2_classify, n2_closures, BoundaryWalk, Link, N2Classification, RibbonEdge, RibbonEnd, RibbonError,
    RibbonGraph, StraightCycle,
};

use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    DegreeError { vertex: usize, degree: usize, expected: usize },
    #[error("sign product at vertex {vertex} is not -1")]
    SignProductError { vertex: usize },
    #[error("edge {edge} end {end} does not match any vertex slot")]
    DanglingEdgeEnd { edge: usize, end: usize },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("malformed graph: {0}")]
    Malformed(String),
}

/// `(vertex, slot)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeEnd(pub usize, pub usize);

impl EdgeEnd {
    pub fn vertex(self) -> usize {
        self.0
    }
    pub fn slot(self) -> usize {
        self.1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    /// Edge ids in slot order.
    pub cyclic: Vec<usize>,
    /// Empty for an unsigned (underlying) graph.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub signs: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedGraph {
    pub n: usize,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<[EdgeEnd; 2]>,
}

/// A relabeling plus the flips that carry one signed graph onto another.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoWitness {
    /// `vertex_map[v]` is the image in the second graph of vertex `v`.
    pub vertex_map: Vec<usize>,
    /// Vertices of the first graph to flip before relabeling.
    pub flips: Vec<usize>,
}

impl SignedGraph {
    /// Builds a graph from an edge list; slots follow order of appearance.
    ///
    /// Signs default to `[-1, +1, …, +1]` at every vertex.
    pub fn from_edges(n: usize, num_vertices: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut vertices = vec![VertexRecord { cyclic: Vec::new(), signs: Vec::new() }; num_vertices];
        let mut out = Vec::with_capacity(edges.len());
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= num_vertices || v >= num_vertices {
                return Err(GraphError::Malformed(format!("edge {id} uses a vertex out of range")));
            }
            let su = vertices[u].cyclic.len();
            vertices[u].cyclic.push(id);
            let sv = vertices[v].cyclic.len();
            vertices[v].cyclic.push(id);
            out.push([EdgeEnd(u, su), EdgeEnd(v, sv)]);
        }
        for rec in &mut vertices {
            let d = rec.cyclic.len();
            rec.signs = (0..d).map(|i| if i == 0 { -1 } else { 1 }).collect();
        }
        Ok(SignedGraph { n, vertices, edges: out })
    }

    /// Same as [`from_edges`](Self::from_edges) with explicit signs per vertex.
    pub fn from_edges_signed(
        n: usize,
        num_vertices: usize,
        edges: &[(usize, usize)],
        signs: Vec<Vec<i8>>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::from_edges(n, num_vertices, edges)?;
        if signs.len() != num_vertices {
            return Err(GraphError::SizeMismatch("one sign list per vertex required".into()));
        }
        for (rec, s) in g.vertices.iter_mut().zip(signs) {
            rec.signs = s;
        }
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertices[v].cyclic.len()
    }

    pub fn is_signed(&self) -> bool {
        self.vertices.iter().any(|r| !r.signs.is_empty())
    }

    /// The edge-end across the edge sitting at `(v, slot)`.
    pub fn far(&self, v: usize, slot: usize) -> EdgeEnd {
        let [a, b] = self.edges[self.vertices[v].cyclic[slot]];
        if a == EdgeEnd(v, slot) {
            b
        } else {
            a
        }
    }

    /// Checks cross-references between edges and vertex slots.
    fn check_incidence(&self) -> Result<(), GraphError> {
        let mut seen: Vec<Vec<bool>> = self.vertices.iter().map(|r| vec![false; r.cyclic.len()]).collect();
        for (id, ends) in self.edges.iter().enumerate() {
            for (k, &EdgeEnd(v, s)) in ends.iter().enumerate() {
                let ok = v < self.vertices.len()
                    && s < self.vertices[v].cyclic.len()
                    && self.vertices[v].cyclic[s] == id
                    && !seen[v][s];
                if !ok {
                    return Err(GraphError::DanglingEdgeEnd { edge: id, end: k });
                }
                seen[v][s] = true;
            }
        }
        for (v, row) in seen.iter().enumerate() {
            if let Some(s) = row.iter().position(|&b| !b) {
                let edge = self.vertices[v].cyclic[s];
                if edge >= self.edges.len() {
                    return Err(GraphError::Malformed(format!("vertex {v} slot {s} names missing edge {edge}")));
                }
                return Err(GraphError::DanglingEdgeEnd { edge, end: 0 });
            }
        }
        Ok(())
    }

    fn check_signs(&self) -> Result<(), GraphError> {
        for (v, rec) in self.vertices.iter().enumerate() {
            if rec.signs.len() != rec.cyclic.len() {
                return Err(GraphError::Malformed(format!("vertex {v} needs {} signs", rec.cyclic.len())));
            }
            if rec.signs.iter().any(|&s| s != 1 && s != -1) {
                return Err(GraphError::Malformed(format!("vertex {v} has a sign other than ±1")));
            }
            if rec.signs.iter().map(|&s| i32::from(s)).product::<i32>() != -1 {
                return Err(GraphError::SignProductError { vertex: v });
            }
        }
        Ok(())
    }

    /// A valid signed graph: `n`-regular, consistent, sign product `−1`.
    pub fn validate(&self) -> Result<(), GraphError> {
        self.validate_underlying()?;
        self.check_signs()
    }

    /// Signs and incidence only; any vertex degrees (used for trees).
    pub fn validate_structure(&self) -> Result<(), GraphError> {
        self.check_incidence()?;
        self.check_signs()
    }

    /// `n`-regular and consistent; signs are not inspected.
    pub fn validate_underlying(&self) -> Result<(), GraphError> {
        if self.n == 0 {
            return Err(GraphError::Malformed("n must be at least 1".into()));
        }
        for (v, rec) in self.vertices.iter().enumerate() {
            if rec.cyclic.len() != self.n {
                return Err(GraphError::DegreeError { vertex: v, degree: rec.cyclic.len(), expected: self.n });
            }
        }
        self.check_incidence()
    }

    /// Reverses the cyclic order at `x` and negates, at the far end of each
    /// edge-end of `x`, the two signs adjacent to that end.
    pub fn vertex_flip(&self, x: usize) -> SignedGraph {
        let mut g = self.clone();
        for s in 0..self.degree(x) {
            let EdgeEnd(y, q) = self.far(x, s);
            let d = self.degree(y);
            g.vertices[y].signs[(q + d - 1) % d] *= -1;
            g.vertices[y].signs[q] *= -1;
        }
        // slot i -> (deg - i) mod deg; sign between new i, i+1 is old sign[-i-1]
        let d = self.degree(x);
        let old = g.vertices[x].clone();
        for i in 0..d {
            g.vertices[x].cyclic[i] = old.cyclic[(d - i) % d];
            g.vertices[x].signs[i] = old.signs[(2 * d - i - 1) % d];
        }
        for ends in &mut g.edges {
            for end in ends.iter_mut() {
                if end.0 == x {
                    end.1 = (d - end.1) % d;
                }
            }
        }
        g
    }

    /// Applies the flips at every vertex in `set`.
    pub fn flip_set(&self, set: &[usize]) -> SignedGraph {
        set.iter().fold(self.clone(), |g, &v| g.vertex_flip(v))
    }

    /// Permutes the slots at `v` (new slot `i` holds old slot `order[i]`)
    /// and replaces its signs.
    pub fn reorder_vertex(&self, v: usize, order: &[usize], signs: Vec<i8>) -> SignedGraph {
        let mut h = self.clone();
        let old = &self.vertices[v].cyclic;
        h.vertices[v].cyclic = order.iter().map(|&i| old[i]).collect();
        h.vertices[v].signs = signs;
        for (new_slot, &old_slot) in order.iter().enumerate() {
            let e = old[old_slot];
            let k = usize::from(self.edges[e][0] != EdgeEnd(v, old_slot));
            h.edges[e][k] = EdgeEnd(v, new_slot);
        }
        h
    }

    /// Shortest cycle length; `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for ends in &self.edges {
            if ends[0].0 == ends[1].0 {
                return Some(1);
            }
        }
        let mut pairs: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|e| (e[0].0.min(e[1].0), e[0].0.max(e[1].0)))
            .collect();
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0] == w[1]) {
            return Some(2);
        }
        let nv = self.num_vertices();
        let mut dist = vec![usize::MAX; nv];
        let mut via = vec![usize::MAX; nv];
        for src in 0..nv {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[src] = 0;
            via[src] = usize::MAX;
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[u] + 1 >= b {
                        break;
                    }
                }
                for s in 0..self.degree(u) {
                    let e = self.vertices[u].cyclic[s];
                    if e == via[u] {
                        continue;
                    }
                    let w = self.far(u, s).0;
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        via[w] = e;
                        queue.push_back(w);
                    } else {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Connected components as vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let nv = self.num_vertices();
        let mut comp = vec![usize::MAX; nv];
        let mut out = Vec::new();
        for s in 0..nv {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                i += 1;
                for slot in 0..self.degree(u) {
                    let w = self.far(u, slot).0;
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Effective sign between slots `i` and `i+1` at `v` under flip state `f`.
    fn eff_sign(&self, v: usize, i: usize, f: &[bool]) -> i8 {
        let d = self.degree(v);
        let s = self.vertices[v].signs[i];
        let a = f[self.far(v, i).0];
        let b = f[self.far(v, (i + 1) % d).0];
        if a ^ b {
            -s
        } else {
            s
        }
    }

    /// Gauge-fixed BFS from a rooted start; returns the code and the labelling.
    fn rooted_code(&self, root: usize, s0: usize, f0: bool, f1: bool) -> RootedCode {
        let nv = self.num_vertices();
        let mut label = vec![usize::MAX; nv];
        let mut entry = vec![0usize; nv];
        let mut f = vec![false; nv];
        let mut order = vec![root];
        label[root] = 0;
        entry[root] = s0;
        f[root] = f0;
        let mut idx = 0;
        while idx < order.len() {
            let v = order[idx];
            idx += 1;
            let d = self.degree(v);
            let ev = entry[v];
            let slot_at = |k: usize, fv: bool| if fv { (ev + d - k % d) % d } else { (ev + k) % d };
            for k in 0..d {
                let p = slot_at(k, f[v]);
                let EdgeEnd(y, q) = self.far(v, p);
                if label[y] != usize::MAX {
                    continue;
                }
                label[y] = order.len();
                order.push(y);
                entry[y] = q;
                if k == 0 {
                    f[y] = f1;
                } else {
                    let prev = slot_at(k - 1, f[v]);
                    let w = self.far(v, prev).0;
                    let idx_sign = if f[v] { p } else { prev };
                    f[y] = f[w] ^ (self.vertices[v].signs[idx_sign] < 0);
                }
            }
        }
        let mut code = Vec::with_capacity(order.len() * (1 + 3 * self.n));
        for &v in &order {
            let d = self.degree(v);
            code.push(d as u32);
            for k in 0..d {
                let p = if f[v] { (entry[v] + d - k) % d } else { (entry[v] + k) % d };
                let EdgeEnd(y, q) = self.far(v, p);
                let dy = self.degree(y);
                let off = if f[y] { (entry[y] + dy - q) % dy } else { (q + dy - entry[y]) % dy };
                code.push(label[y] as u32);
                code.push(off as u32);
                let idx_sign = if f[v] { (p + d - 1) % d } else { p };
                code.push(u32::from(self.eff_sign(v, idx_sign, &f) < 0));
            }
        }
        RootedCode { code, order, flips: f }
    }

    fn best_rooted(&self, component: &[usize]) -> RootedCode {
        let mut best: Option<RootedCode> = None;
        for &v in component {
            for s in 0..self.degree(v) {
                let loop_root = self.far(v, s).0 == v;
                for f0 in [false, true] {
                    for f1 in [false, true] {
                        if loop_root && f1 != f0 {
                            continue;
                        }
                        let rc = self.rooted_code(v, s, f0, f1);
                        if best.as_ref().is_none_or(|b| rc.code < b.code) {
                            best = Some(rc);
                        }
                    }
                }
            }
        }
        best.unwrap_or(RootedCode { code: Vec::new(), order: component.to_vec(), flips: vec![false; self.num_vertices()] })
    }

    /// Complete invariant under flips and relabelings.
    pub fn canonical_code(&self) -> Vec<u32> {
        let mut parts: Vec<Vec<u32>> = self.components().iter().map(|c| self.best_rooted(c).code).collect();
        parts.sort();
        let mut out = Vec::new();
        for p in parts {
            out.push(p.len() as u32);
            out.extend(p);
        }
        out
    }
}

struct RootedCode {
    code: Vec<u32>,
    order: Vec<usize>,
    flips: Vec<bool>,
}

/// Isomorphism modulo vertex flips and relabelings, with a witness.
pub fn is_isomorphic(g1: &SignedGraph, g2: &SignedGraph) -> Result<Option<IsoWitness>, GraphError> {
    if g1.n != g2.n || g1.num_vertices() != g2.num_vertices() || g1.num_edges() != g2.num_edges() {
        return Err(GraphError::SizeMismatch(format!(
            "(n, V, E) = ({}, {}, {}) vs ({}, {}, {})",
            g1.n,
            g1.num_vertices(),
            g1.num_edges(),
            g2.n,
            g2.num_vertices(),
            g2.num_edges()
        )));
    }
    let mut c1: Vec<RootedCode> = g1.components().iter().map(|c| g1.best_rooted(c)).collect();
    let mut c2: Vec<RootedCode> = g2.components().iter().map(|c| g2.best_rooted(c)).collect();
    if c1.len() != c2.len() {
        return Ok(None);
    }
    c1.sort_by(|a, b| a.code.cmp(&b.code));
    c2.sort_by(|a, b| a.code.cmp(&b.code));
    let nv = g1.num_vertices();
    let mut vertex_map = vec![usize::MAX; nv];
    let mut flips = Vec::new();
    for (a, b) in c1.iter().zip(&c2) {
        if a.code != b.code {
            return Ok(None);
        }
        for (&v1, &v2) in a.order.iter().zip(&b.order) {
            vertex_map[v1] = v2;
            if a.flips[v1] != b.flips[v2] {
                flips.push(v1);
            }
        }
    }
    flips.sort_unstable();
    Ok(Some(IsoWitness { vertex_map, flips }))
}

/// Independently checks a witness: after the flips, some per-vertex slot
/// rotation makes the relabelled graph equal to `g2`.
pub fn verify_witness(g1: &SignedGraph, g2: &SignedGraph, w: &IsoWitness) -> bool {
    let nv = g1.num_vertices();
    if w.vertex_map.len() != nv || g2.num_vertices() != nv {
        return false;
    }
    let mut hit = vec![false; nv];
    for &m in &w.vertex_map {
        if m >= nv || hit[m] {
            return false;
        }
        hit[m] = true;
    }
    let g = g1.flip_set(&w.flips);
    for comp in g.components() {
        let root = comp[0];
        let d = g.degree(root);
        if g2.degree(w.vertex_map[root]) != d {
            return false;
        }
        let ok = (0..d).any(|r0| {
            let mut rot = vec![usize::MAX; nv];
            rot[root] = r0;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                let mv = w.vertex_map[v];
                let dv = g.degree(v);
                if g2.degree(mv) != dv {
                    return false;
                }
                for i in 0..dv {
                    let j = (i + rot[v]) % dv;
                    if g.vertices[v].signs[i] != g2.vertices[mv].signs[j] {
                        return false;
                    }
                    let EdgeEnd(y, q) = g.far(v, i);
                    let EdgeEnd(y2, q2) = g2.far(mv, j);
                    if w.vertex_map[y] != y2 {
                        return false;
                    }
                    let dy = g.degree(y);
                    let ry = (q2 + dy - q) % dy;
                    if rot[y] == usize::MAX {
                        rot[y] = ry;
                        stack.push(y);
                    } else if rot[y] != ry {
                        return false;
                    }
                }
            }
            true
        });
        if !ok {
            return false;
        }
    }
    true
}
