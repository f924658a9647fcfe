//! Combinatorial model of the surface glued from rings, its systoles and
//! their intersection numbers.
//!
//! Every cross contributes a front and a back octagon. Each ring unrolls
//! into a strip of `2n` octagons; seam `(ring, m)` separates strip cells
//! `m−1` and `m`. Points on a seam carry an integer height key, and two
//! chords in one octagon cross when their endpoints interleave around the
//! octagon boundary. Nothing here is metric.

use crate::angle_matrix;
use crate::par::{self, Exec};
use crate::ring_solver::{self, RingError};
use crate::signed_graph::{GraphError, RibbonEdge, RibbonError, RibbonGraph, SignedGraph, StraightCycle};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// `(octagon, lo, hi)` with perimeter positions `(slot, key)`.
type Span = (usize, (u8, i64), (u8, i64));

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("ring {ring} has an even number of half twists")]
    EvenTwistRing { ring: usize },
    #[error("slot {slot} of cross {vertex} is not glued exactly once")]
    UnmatchedSlot { vertex: usize, slot: u8 },
    #[error("ring {ring} has {len} crosses, expected {n}")]
    RingLength { ring: usize, len: usize, n: usize },
    #[error("itinerary of {0} does not close up")]
    ItineraryNotClosed(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<RibbonError> for SurfaceError {
    fn from(e: RibbonError) -> Self {
        match e {
            RibbonError::UnmatchedSlot { vertex, slot } => SurfaceError::UnmatchedSlot { vertex, slot },
            RibbonError::OutOfRange { vertex, slot, .. } => SurfaceError::UnmatchedSlot { vertex, slot },
            RibbonError::Graph(g) => SurfaceError::Graph(g),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Face {
    Front,
    Back,
}

impl Face {
    fn from_bit(b: u8) -> Face {
        if b == 0 {
            Face::Front
        } else {
            Face::Back
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SideId {
    pub ring: usize,
    pub index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub side: SideId,
    pub key: i64,
}

/// One chord of a curve inside one octagon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub cross: usize,
    pub face: Face,
    pub entry: Point,
    pub exit: Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    A,
    B,
    C,
    F,
}

impl CurveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveKind::A => "a",
            CurveKind::B => "b",
            CurveKind::C => "c",
            CurveKind::F => "f",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub kind: CurveKind,
    /// `(ring, j)` for a/b-curves, `(cross, variant)` for c-curves.
    pub anchor: (usize, usize),
    pub itinerary: Vec<Step>,
    /// Seam points shared with the partner curve of the same anchor.
    pub corners: Vec<SideId>,
    /// `(octagon, lo, hi)` perimeter positions of every chord.
    #[serde(skip)]
    spans: Vec<Span>,
}

impl Curve {
    pub fn label(&self) -> String {
        format!("{}[{},{}]", self.kind.as_str(), self.anchor.0, self.anchor.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "graph", rename_all = "lowercase")]
pub enum Source {
    Signed(SignedGraph),
    Ribbon(RibbonGraph),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Cell {
    cross: usize,
    face: u8,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceModel {
    pub n: usize,
    pub num_crosses: usize,
    pub gluings: Vec<RibbonEdge>,
    pub genus: usize,
    pub rings: Vec<StraightCycle>,
    pub source: Source,
    #[serde(skip)]
    strips: Vec<Vec<Cell>>,
    /// Per octagon `2X + face`: its four sides counter-clockwise, each with
    /// whether the side's height key increases in that direction.
    #[serde(skip)]
    sides: Vec<[(SideId, bool); 4]>,
}

/// Builds the surface of a valid signed graph.
pub fn build_surface(g: &SignedGraph) -> Result<SurfaceModel, SurfaceError> {
    g.validate()?;
    let r = g.to_ribbon()?;
    from_ribbon(g.n, &r, Source::Signed(g.clone()))
}

/// Builds the surface of a ribbon graph whose rings all have `n` crosses.
pub fn build_surface_from_ribbon(n: usize, r: &RibbonGraph) -> Result<SurfaceModel, SurfaceError> {
    from_ribbon(n, r, Source::Ribbon(r.clone()))
}

fn from_ribbon(n: usize, r: &RibbonGraph, source: Source) -> Result<SurfaceModel, SurfaceError> {
    if n == 0 {
        return Err(SurfaceError::InvalidInput("n must be at least 1".into()));
    }
    let rings = r.straight_cycles();
    let mut strips = Vec::with_capacity(rings.len());
    let nx = r.num_vertices;
    let mut seen: Vec<Vec<(usize, usize, u8)>> = vec![Vec::new(); 2 * nx];
    for (ri, ring) in rings.iter().enumerate() {
        if ring.crosses.len() != n {
            return Err(SurfaceError::RingLength { ring: ri, len: ring.crosses.len(), n });
        }
        if ring.twists % 2 == 0 {
            return Err(SurfaceError::EvenTwistRing { ring: ri });
        }
        let mut par = 0u8;
        let mut cells = Vec::with_capacity(2 * n);
        for m in 0..2 * n {
            let (x, k) = ring.crosses[m % n];
            let face = par ^ (k & 1);
            cells.push(Cell { cross: x, face });
            seen[2 * x + face as usize].push((ri, m, k));
            let tw = u8::from(r.link(x, k + 2).twisted);
            par ^= tw ^ (k & 1) ^ (ring.crosses[(m + 1) % n].1 & 1);
        }
        if par != 0 {
            return Err(SurfaceError::ItineraryNotClosed(format!("strip of ring {ri}")));
        }
        strips.push(cells);
    }
    let mut sides = Vec::with_capacity(2 * nx);
    for (o, list) in seen.iter().enumerate() {
        if list.len() != 2 {
            return Err(SurfaceError::UnmatchedSlot { vertex: o / 2, slot: 0 });
        }
        let mut info = [None; 4];
        for &(ri, m, k) in list {
            info[k as usize] = Some((SideId { ring: ri, index: m }, false));
            info[(k as usize + 2) % 4] = Some((SideId { ring: ri, index: (m + 1) % (2 * n) }, true));
        }
        let order = if o % 2 == 0 { [0, 1, 2, 3] } else { [0, 3, 2, 1] };
        let mut row = [(SideId { ring: 0, index: 0 }, false); 4];
        for (i, s) in order.iter().enumerate() {
            row[i] = info[*s].ok_or(SurfaceError::UnmatchedSlot { vertex: o / 2, slot: *s as u8 })?;
        }
        sides.push(row);
    }
    Ok(SurfaceModel { n, num_crosses: nx, gluings: r.edges.clone(), genus: nx + 1, rings, source, strips, sides })
}

impl SurfaceModel {
    fn q4(&self) -> i64 {
        4 * (2 * self.n as i64 + 2)
    }

    fn height(&self) -> i64 {
        self.n as i64 * self.q4()
    }

    fn cell(&self, ring: usize, m: i64) -> Cell {
        self.strips[ring][m.rem_euclid(2 * self.n as i64) as usize]
    }

    fn seam(&self, ring: usize, m: i64) -> SideId {
        SideId { ring, index: m.rem_euclid(2 * self.n as i64) as usize }
    }

    fn step(&self, c: Cell, entry: Point, exit: Point) -> Step {
        Step { cross: c.cross, face: Face::from_bit(c.face), entry, exit }
    }

    fn perimeter(&self, oct: usize, p: Point) -> Option<(u8, i64)> {
        let h = self.height();
        self.sides[oct]
            .iter()
            .position(|(s, _)| *s == p.side)
            .map(|i| (i as u8, if self.sides[oct][i].1 { p.key } else { 4 * h - p.key }))
    }

    fn finish(&self, kind: CurveKind, anchor: (usize, usize), itinerary: Vec<Step>, corners: Vec<SideId>) -> Result<Curve, SurfaceError> {
        let mut spans = Vec::with_capacity(itinerary.len());
        let label = || format!("{}[{},{}]", kind.as_str(), anchor.0, anchor.1);
        for st in &itinerary {
            let oct = 2 * st.cross + usize::from(st.face == Face::Back);
            let a = self.perimeter(oct, st.entry).ok_or_else(|| SurfaceError::ItineraryNotClosed(label()))?;
            let b = self.perimeter(oct, st.exit).ok_or_else(|| SurfaceError::ItineraryNotClosed(label()))?;
            spans.push((oct, a.min(b), a.max(b)));
        }
        Ok(Curve { kind, anchor, itinerary, corners, spans })
    }

    fn ab_curve(&self, kind: CurveKind, ring: usize, j: usize) -> Result<Curve, SurfaceError> {
        let (n, q4) = (self.n as i64, self.q4());
        let j = j as i64;
        let mut it = Vec::with_capacity(self.n);
        for k in 0..n {
            let st = match kind {
                CurveKind::A => self.step(
                    self.cell(ring, j + k),
                    Point { side: self.seam(ring, j + k), key: k * q4 + 1 },
                    Point { side: self.seam(ring, j + k + 1), key: (k + 1) * q4 + 1 },
                ),
                _ => self.step(
                    self.cell(ring, j - 1 - k),
                    Point { side: self.seam(ring, j - k), key: k * q4 + 2 },
                    Point { side: self.seam(ring, j - 1 - k), key: (k + 1) * q4 + 2 },
                ),
            };
            it.push(st);
        }
        let label = format!("{}[{ring},{j}]", kind.as_str());
        for w in it.windows(2) {
            if w[0].exit != w[1].entry {
                return Err(SurfaceError::ItineraryNotClosed(label));
            }
        }
        // the last point comes back onto the first seam one strip-half later
        let (first, last) = (it[0].entry, it[self.n - 1].exit);
        let shift = (first.side.index as i64 - last.side.index as i64).rem_euclid(2 * n);
        if last.key - first.key != self.height() || shift != n % (2 * n) {
            return Err(SurfaceError::ItineraryNotClosed(label));
        }
        self.finish(kind, (ring, j as usize), it, vec![self.seam(ring, j)])
    }

    /// Arc hugging one side of the strip next to a seam of the central octagon.
    fn arc(&self, side: SideId, ascending: bool, top: bool) -> (Vec<Point>, Vec<Cell>) {
        let n = self.n as i64;
        let x = if ascending { side.index as i64 - 1 } else { side.index as i64 - n };
        let key = |s: i64| if top { self.height() - 4 * s } else { 4 * s };
        let pts = (1..=n).map(|s| Point { side: self.seam(side.ring, x + s), key: key(s) }).collect();
        let cells = (1..n).map(|s| self.cell(side.ring, x + s)).collect();
        (pts, cells)
    }

    fn c_curve(&self, cross: usize, variant: usize) -> Result<Curve, SurfaceError> {
        let label = || format!("c[{cross},{variant}]");
        let front = self.sides[2 * cross];
        let back = self.sides[2 * cross + 1];
        let (sa, asc_a) = front[variant];
        let (sb, asc_b) = front[(variant + 1) % 4];
        // arc a reaches the central octagon at its far end, arc b leaves from its near end
        let (pa, oa) = self.arc(sa, asc_a, asc_a);
        let (pb, ob) = self.arc(sb, asc_b, !asc_b);
        let n = self.n;
        // orient each arc to start at the central octagon
        let a_near_first = pa[0].side == sa;
        let b_near_first = pb[0].side == sb;
        if !(a_near_first || pa[n - 1].side == sa) || !(b_near_first || pb[n - 1].side == sb) {
            return Err(SurfaceError::ItineraryNotClosed(label()));
        }
        let walk = |pts: &[Point], cells: &[Cell], forward: bool| -> Vec<Step> {
            let mut st: Vec<Step> = (0..cells.len()).map(|i| self.step(cells[i], pts[i], pts[i + 1])).collect();
            if !forward {
                st.reverse();
                for s in &mut st {
                    std::mem::swap(&mut s.entry, &mut s.exit);
                }
            }
            st
        };
        let near_a = if a_near_first { pa[0] } else { pa[n - 1] };
        let far_a = if a_near_first { pa[n - 1] } else { pa[0] };
        let near_b = if b_near_first { pb[0] } else { pb[n - 1] };
        let far_b = if b_near_first { pb[n - 1] } else { pb[0] };
        if !back.iter().any(|(s, _)| *s == far_a.side) || !back.iter().any(|(s, _)| *s == far_b.side) {
            return Err(SurfaceError::ItineraryNotClosed(label()));
        }
        let mut it = vec![self.step(Cell { cross, face: 0 }, near_a, near_b)];
        it.extend(walk(&pb, &ob, b_near_first));
        it.push(self.step(Cell { cross, face: 1 }, far_b, far_a));
        it.extend(walk(&pa, &oa, !a_near_first));
        for i in 0..it.len() {
            if it[i].exit != it[(i + 1) % it.len()].entry {
                return Err(SurfaceError::ItineraryNotClosed(label()));
            }
        }
        self.finish(CurveKind::C, (cross, variant), it, Vec::new())
    }

    /// All systoles: `8g−8` a/b-curves and `4g−4` c-curves; for `n = 1`
    /// two f-curves and two c-curves without itineraries.
    pub fn enumerate_systoles(&self, exec: Exec) -> Result<Vec<Curve>, SurfaceError> {
        let two_n = 2 * self.n;
        let mut jobs: Vec<(CurveKind, usize, usize)> = Vec::new();
        for kind in [CurveKind::A, CurveKind::B] {
            for ring in 0..self.rings.len() {
                jobs.extend((0..two_n).map(|j| (kind, ring, j)));
            }
        }
        if self.n >= 2 {
            for x in 0..self.num_crosses {
                jobs.extend((0..4).map(|v| (CurveKind::C, x, v)));
            }
        }
        let built = par::map(exec, &jobs, |&(kind, p, q)| match kind {
            CurveKind::C => self.c_curve(p, q),
            _ => self.ab_curve(kind, p, q),
        });
        let mut out = built.into_iter().collect::<Result<Vec<_>, _>>()?;
        if self.n == 1 {
            for (kind, anchor) in [(CurveKind::F, (0, 0)), (CurveKind::F, (1, 0)), (CurveKind::C, (0, 0)), (CurveKind::C, (0, 1))] {
                out.push(Curve { kind, anchor, itinerary: Vec::new(), corners: Vec::new(), spans: Vec::new() });
            }
        }
        Ok(out)
    }
}

/// Number of crossings between two curves of the same surface.
pub fn intersection_number(s: &SurfaceModel, c1: &Curve, c2: &Curve) -> Result<u32, SurfaceError> {
    for c in [c1, c2] {
        if c.kind == CurveKind::F || (s.n == 1 && c.kind == CurveKind::C) {
            return Err(SurfaceError::Unsupported(format!("intersections of {} on the genus-2 surface", c.label())));
        }
    }
    if c1.kind == c2.kind && c1.anchor == c2.anchor {
        return Ok(0);
    }
    let mut count = 0;
    for &(o1, a1, b1) in &c1.spans {
        for &(o2, a2, b2) in &c2.spans {
            if o1 == o2 && ((a1 < a2 && a2 < b1) != (a1 < b2 && b2 < b1)) {
                count += 1;
            }
        }
    }
    for p in &c1.corners {
        count += c2.corners.iter().filter(|q| *q == p).count() as u32;
    }
    Ok(count)
}

/// Full symmetric table of intersection numbers, rows computed in parallel.
pub fn intersection_table(s: &SurfaceModel, curves: &[Curve], exec: Exec) -> Result<Vec<Vec<u32>>, SurfaceError> {
    let rows = par::map_range(exec, curves.len(), |i| {
        curves.iter().map(|c| intersection_number(s, &curves[i], c)).collect::<Result<Vec<u32>, _>>()
    });
    rows.into_iter().collect()
}

/// `kind -> set of "number of other systoles met"` over curves of that kind.
pub fn intersection_profiles(curves: &[Curve], table: &[Vec<u32>]) -> BTreeMap<String, BTreeSet<usize>> {
    let mut out: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    for (i, c) in curves.iter().enumerate() {
        let met = table[i].iter().enumerate().filter(|&(j, &x)| j != i && x > 0).count();
        out.entry(c.kind.as_str().to_string()).or_default().insert(met);
    }
    out
}

/// a/b-curves meeting `i` or `j`, counting `i` and `j` themselves.
pub fn pair_reach(curves: &[Curve], table: &[Vec<u32>], i: usize, j: usize) -> usize {
    (0..curves.len())
        .filter(|&k| matches!(curves[k].kind, CurveKind::A | CurveKind::B))
        .filter(|&k| k == i || k == j || table[i][k] > 0 || table[j][k] > 0)
        .count()
}

/// `pair_reach` values over all seam-symmetric pairs `(a_j, b_j)`.
pub fn symmetric_pair_reach(curves: &[Curve], table: &[Vec<u32>]) -> BTreeSet<usize> {
    let index: BTreeMap<(CurveKind, (usize, usize)), usize> =
        curves.iter().enumerate().map(|(i, c)| ((c.kind, c.anchor), i)).collect();
    let mut out = BTreeSet::new();
    for (i, c) in curves.iter().enumerate() {
        if c.kind == CurveKind::A {
            if let Some(&j) = index.get(&(CurveKind::B, c.anchor)) {
                out.insert(pair_reach(curves, table, i, j));
            }
        }
    }
    out
}

#[derive(Serialize)]
struct CurveRow<'a> {
    kind: &'a str,
    anchor_0: usize,
    anchor_1: usize,
    itinerary_length: usize,
}

/// CSV with columns `kind, anchor_0, anchor_1, itinerary_length`.
pub fn curves_csv<W: std::io::Write>(curves: &[Curve], w: W) -> Result<(), SurfaceError> {
    let mut wr = csv::Writer::from_writer(w);
    for c in curves {
        wr.serialize(CurveRow {
            kind: c.kind.as_str(),
            anchor_0: c.anchor.0,
            anchor_1: c.anchor.1,
            itinerary_length: c.itinerary.len(),
        })?;
    }
    wr.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub source: String,
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub failing: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    pub graph: GraphSummary,
    pub t_n: f64,
    #[serde(rename = "L_n")]
    pub l_n: f64,
    pub genus: usize,
    pub systole_count: usize,
    /// `None` for a forest.
    pub girth: Option<usize>,
    pub girth_threshold: f64,
    pub gersh_margin: f64,
    pub da_dt: f64,
    pub dc_dt: f64,
    pub angle_slack: f64,
    pub verdict: Verdict,
}

/// Local-maximum certificate for the surface of a signed graph.
pub fn certify(n: usize, g: &SignedGraph) -> Result<Certificate, SurfaceError> {
    if g.n != n {
        return Err(SurfaceError::InvalidInput(format!("graph is {}-regular, n = {n} requested", g.n)));
    }
    let s = build_surface(g)?;
    let summary = GraphSummary { source: "signed".into(), vertices: g.num_vertices(), edges: g.num_edges() };
    certify_surface(&s, g.girth(), summary)
}

/// Certificate for an `n = 2` ribbon class on `V` crosses; the underlying
/// graph is the `V`-cycle.
pub fn certify_ribbon(r: &RibbonGraph) -> Result<Certificate, SurfaceError> {
    let s = build_surface_from_ribbon(2, r)?;
    let summary = GraphSummary { source: "ribbon".into(), vertices: r.num_vertices, edges: r.num_vertices };
    certify_surface(&s, Some(r.num_vertices), summary)
}

fn certify_surface(s: &SurfaceModel, girth: Option<usize>, graph: GraphSummary) -> Result<Certificate, SurfaceError> {
    let n = s.n as u64;
    let tn = ring_solver::solve_tn(n)?;
    let cm = angle_matrix::build_matrices(n)?;
    let slack = angle_matrix::angle_inequalities(n)?.lemma_angles_slack;
    let systole_count = s.enumerate_systoles(Exec::Parallel)?.len();
    let g = &tn.geometry;
    let mut failing = Vec::new();
    if let Some(w) = girth {
        if (w as f64) <= tn.girth_threshold {
            failing.push(format!("girth {w} <= threshold {:.6}", tn.girth_threshold));
        }
    }
    if cm.gersh_margin <= 0.0 {
        failing.push(format!("gershgorin margin {:.3e} <= 0", cm.gersh_margin));
    }
    if n >= 2 {
        if g.da_dt <= 0.0 {
            failing.push("da/dt <= 0".into());
        }
        if g.dc_dt >= 0.0 {
            failing.push("dc/dt >= 0".into());
        }
        if slack <= 0.0 {
            failing.push(format!("angle slack {slack:.3e} <= 0"));
        }
    }
    let status = if failing.is_empty() { VerdictStatus::Pass } else { VerdictStatus::Fail };
    Ok(Certificate {
        n: s.n,
        graph,
        t_n: tn.t_n,
        l_n: tn.l_n,
        genus: s.genus,
        systole_count,
        girth,
        girth_threshold: tn.girth_threshold,
        gersh_margin: cm.gersh_margin,
        da_dt: g.da_dt,
        dc_dt: g.dc_dt,
        angle_slack: slack,
        verdict: Verdict { status, failing },
    })
}
