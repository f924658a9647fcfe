//! Census of small regular graphs and the counting asymptotics.
//!
//! Generation covers connected simple graphs: vertices are saturated in
//! label order, new neighbours are taken in increasing order and only the
//! lowest untouched vertex may be opened, so every graph appears with a
//! breadth-first labelling. Duplicates are removed by a canonical form
//! (colour refinement plus individualization, minimum adjacency over all
//! leaves). The number of leaves reaching the minimum is the order of the
//! automorphism group.

use crate::hyptrig::LogReal;
use crate::par::{self, Exec};
use crate::ring_solver::{self, RingError};
use crate::signed_graph::{EdgeEnd, SignedGraph};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use thiserror::Error;

/// Labelled graphs examined before generation gives up.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("budget of {budget} labelled graphs exceeded ({distinct} distinct graphs so far)")]
    BudgetExceeded { budget: u64, distinct: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Clone)]
struct State {
    rows: Vec<u64>,
    deg: Vec<usize>,
}

struct Gen<'a> {
    n: usize,
    v: usize,
    girth: usize,
    budget: u64,
    leaves: &'a AtomicU64,
    stop: &'a AtomicBool,
}

impl Gen<'_> {
    /// Whether adding `a–b` keeps every cycle at least `girth` long.
    fn far_enough(&self, st: &State, a: usize, b: usize) -> bool {
        // a cycle through the new edge has length dist(a, b) + 1
        let need = self.girth - 1;
        let mut seen = 1u64 << a;
        let mut frontier = 1u64 << a;
        for _ in 1..need {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let x = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= st.rows[x];
            }
            next &= !seen;
            if next >> b & 1 == 1 {
                return false;
            }
            seen |= next;
            frontier = next;
            if frontier == 0 {
                break;
            }
        }
        true
    }

    fn children(&self, st: &State) -> Option<Vec<State>> {
        let x = (0..self.v).find(|&x| st.deg[x] < self.n)?;
        if st.deg[x] == 0 && x > 0 {
            return Some(Vec::new());
        }
        let low = (64 - st.rows[x].leading_zeros() as usize).max(x + 1);
        let fresh = (x + 1..self.v).find(|&y| st.deg[y] == 0);
        let mut out = Vec::new();
        for y in low..self.v {
            if st.deg[y] >= self.n || st.rows[x] >> y & 1 == 1 {
                continue;
            }
            if st.deg[y] == 0 && Some(y) != fresh {
                continue;
            }
            if !self.far_enough(st, x, y) {
                continue;
            }
            let mut c = st.clone();
            c.rows[x] |= 1 << y;
            c.rows[y] |= 1 << x;
            c.deg[x] += 1;
            c.deg[y] += 1;
            out.push(c);
        }
        Some(out)
    }

    fn dfs(&self, st: &State, found: &mut BTreeMap<Vec<u64>, u64>) {
        if self.stop.load(Ordering::Relaxed) {
            return;
        }
        match self.children(st) {
            None => {
                if self.leaves.fetch_add(1, Ordering::Relaxed) + 1 > self.budget {
                    self.stop.store(true, Ordering::Relaxed);
                    return;
                }
                let (code, aut) = canonical_rows(&st.rows);
                found.entry(code).or_insert(aut);
            }
            Some(kids) => {
                for k in &kids {
                    self.dfs(k, found);
                }
            }
        }
    }
}

/// A generated graph with its automorphism group order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusGraph {
    pub graph: SignedGraph,
    pub automorphisms: u64,
}

/// Connected simple `n`-regular graphs on `v` vertices with girth at least
/// `min_girth`, one per isomorphism class, sorted by canonical form.
pub fn generate_regular(n: usize, v: usize, min_girth: usize, exec: Exec) -> Result<Vec<CensusGraph>, CensusError> {
    generate_regular_with_budget(n, v, min_girth, DEFAULT_BUDGET, exec)
}

pub fn generate_regular_with_budget(
    n: usize,
    v: usize,
    min_girth: usize,
    budget: u64,
    exec: Exec,
) -> Result<Vec<CensusGraph>, CensusError> {
    if n == 0 || v == 0 || v > 64 {
        return Err(CensusError::InvalidInput(format!("need n >= 1 and 1 <= V <= 64, got n={n}, V={v}")));
    }
    if !(n * v).is_multiple_of(2) {
        return Err(CensusError::InvalidInput(format!("n*V = {} is odd", n * v)));
    }
    if n >= v {
        return Ok(Vec::new());
    }
    let leaves = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let gen = Gen { n, v, girth: min_girth.max(3), budget, leaves: &leaves, stop: &stop };
    // breadth-first split into enough independent branches
    let mut frontier = vec![State { rows: vec![0; v], deg: vec![0; v] }];
    let mut done: Vec<State> = Vec::new();
    while !frontier.is_empty() && frontier.len() < 256 {
        let mut next = Vec::new();
        for st in &frontier {
            match gen.children(st) {
                None => done.push(st.clone()),
                Some(k) => next.extend(k),
            }
        }
        frontier = next;
    }
    frontier.extend(done);
    let parts = par::map(exec, &frontier, |st| {
        let mut found = BTreeMap::new();
        gen.dfs(st, &mut found);
        found
    });
    let mut all: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for p in parts {
        all.extend(p);
    }
    if stop.load(Ordering::Relaxed) {
        return Err(CensusError::BudgetExceeded { budget, distinct: all.len() });
    }
    Ok(all
        .into_iter()
        .map(|(rows, automorphisms)| CensusGraph { graph: graph_from_rows(n, &rows), automorphisms })
        .collect())
}

/// Unsigned graph (underlying-graph mode) from adjacency bit rows.
fn graph_from_rows(n: usize, rows: &[u64]) -> SignedGraph {
    let edges: Vec<(usize, usize)> = (0..rows.len())
        .flat_map(|a| (a + 1..rows.len()).filter(move |&b| rows[a] >> b & 1 == 1).map(move |b| (a, b)))
        .collect();
    let mut g = SignedGraph::from_edges(n, rows.len(), &edges).expect("edges are in range");
    for rec in &mut g.vertices {
        rec.signs.clear();
    }
    g
}

fn rows_of(g: &SignedGraph) -> Option<Vec<u64>> {
    let v = g.num_vertices();
    if v > 64 {
        return None;
    }
    let mut rows = vec![0u64; v];
    for [EdgeEnd(a, _), EdgeEnd(b, _)] in &g.edges {
        if a == b || rows[*a] >> b & 1 == 1 {
            return None;
        }
        rows[*a] |= 1 << b;
        rows[*b] |= 1 << a;
    }
    Some(rows)
}

fn refine(rows: &[u64], colors: &mut [u32]) {
    let v = rows.len();
    let mut cells = {
        let mut c = colors.to_vec();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..v)
            .map(|x| {
                let mut nb: Vec<u32> = (0..v).filter(|&y| rows[x] >> y & 1 == 1).map(|y| colors[y]).collect();
                nb.sort_unstable();
                (colors[x], nb)
            })
            .collect();
        let mut uniq = sigs.clone();
        uniq.sort();
        uniq.dedup();
        for x in 0..v {
            colors[x] = uniq.binary_search(&sigs[x]).unwrap() as u32;
        }
        if uniq.len() == cells {
            return;
        }
        cells = uniq.len();
    }
}

fn search(rows: &[u64], mut colors: Vec<u32>, best: &mut Option<Vec<u64>>, count: &mut u64) {
    refine(rows, &mut colors);
    let v = rows.len();
    let mut size = vec![0usize; v];
    for &c in &colors {
        size[c as usize] += 1;
    }
    match (0..v).find(|&c| size[c] > 1) {
        None => {
            let mut code = vec![0u64; v];
            for x in 0..v {
                let mut r = 0u64;
                for (y, &cy) in colors.iter().enumerate() {
                    if rows[x] >> y & 1 == 1 {
                        r |= 1 << cy;
                    }
                }
                code[colors[x] as usize] = r;
            }
            match best {
                Some(b) if code > *b => {}
                Some(b) if code == *b => *count += 1,
                _ => {
                    *best = Some(code);
                    *count = 1;
                }
            }
        }
        Some(cell) => {
            for x in (0..v).filter(|&x| colors[x] as usize == cell) {
                let c2: Vec<u32> = (0..v)
                    .map(|y| 2 * colors[y] + u32::from(colors[y] as usize == cell && y != x))
                    .collect();
                search(rows, c2, best, count);
            }
        }
    }
}

/// Canonical adjacency rows and automorphism group order.
fn canonical_rows(rows: &[u64]) -> (Vec<u64>, u64) {
    let mut best = None;
    let mut count = 0;
    search(rows, vec![0; rows.len()], &mut best, &mut count);
    (best.unwrap_or_default(), count)
}

/// Order of the vertex automorphism group of a simple graph; `None` for
/// graphs with loops or parallel edges.
pub fn automorphism_order(g: &SignedGraph) -> Option<u64> {
    rows_of(g).map(|r| canonical_rows(&r).1)
}

/// Trivial automorphism group. Loops and parallel edges always admit a
/// non-trivial edge symmetry, so such multigraphs are never asymmetric.
pub fn automorphism_trivial(g: &SignedGraph) -> bool {
    automorphism_order(g) == Some(1)
}

/// Canonical form of the underlying simple graph.
pub fn canonical_graph(g: &SignedGraph) -> Option<Vec<u64>> {
    rows_of(g).map(|r| canonical_rows(&r).0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedCount {
    /// `ln(2^((n−2)V) · ((n−1)!)^V)`.
    pub log_count: f64,
    /// Exact number of signed graphs on this underlying graph up to flips
    /// and automorphisms, for `V ≤ 6`.
    pub exact_small: Option<u64>,
}

fn ln_factorial(k: f64) -> f64 {
    ln_gamma(k + 1.0)
}

/// Signed structures carried by one `n`-regular graph.
pub fn count_signed_structures(g: &SignedGraph, exec: Exec) -> Result<SignedCount, CensusError> {
    g.validate_underlying().map_err(|e| CensusError::InvalidInput(e.to_string()))?;
    let (n, v) = (g.n as f64, g.num_vertices() as f64);
    let log_count = (n - 2.0) * v * std::f64::consts::LN_2 + v * ln_factorial(n - 1.0);
    let exact_small = if g.num_vertices() <= 6 { Some(exact_orbits(g, exec)) } else { None };
    Ok(SignedCount { log_count, exact_small })
}

fn permutations(xs: &[usize]) -> Vec<Vec<usize>> {
    if xs.len() <= 1 {
        return vec![xs.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..xs.len() {
        let mut rest = xs.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Every (cyclic order, sign pattern) choice at one vertex of degree `d`.
fn local_choices(d: usize) -> Vec<(Vec<usize>, Vec<i8>)> {
    let tails = permutations(&(1..d).collect::<Vec<_>>());
    let mut out = Vec::new();
    for t in tails {
        let order: Vec<usize> = std::iter::once(0).chain(t).collect();
        for mask in 0u32..(1 << d) {
            let signs: Vec<i8> = (0..d).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            if mask.count_ones() % 2 == 1 {
                out.push((order.clone(), signs));
            }
        }
    }
    out
}

fn exact_orbits(g: &SignedGraph, exec: Exec) -> u64 {
    let choices: Vec<Vec<(Vec<usize>, Vec<i8>)>> = (0..g.num_vertices()).map(|v| local_choices(g.degree(v))).collect();
    let total: usize = choices.iter().map(|c| c.len()).product();
    let codes = par::map_range(exec, total, |mut idx| {
        let mut h = g.clone();
        for (v, ch) in choices.iter().enumerate() {
            let (order, signs) = &ch[idx % ch.len()];
            idx /= ch.len();
            h = h.reorder_vertex(v, order, signs.clone());
        }
        h.canonical_code()
    });
    let mut codes = codes;
    codes.sort_unstable();
    codes.dedup();
    codes.len() as u64
}

/// `ln Σ_{i=1}^{w} q^i / (2i)` for `w ≥ 1` (not necessarily an exact integer
/// when astronomically large).
fn ln_census_sum(q: f64, w: f64) -> f64 {
    if w < 1.0 {
        return f64::NEG_INFINITY;
    }
    if q <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if q == 1.0 {
        // harmonic case
        let h = if w <= 1e6 {
            (1..=w as u64).map(|i| 1.0 / i as f64).sum::<f64>()
        } else {
            w.ln() + 0.577_215_664_901_532_9 + 0.5 / w - 1.0 / (12.0 * w * w)
        };
        return (0.5 * h).ln();
    }
    if w <= 2000.0 && w * q.ln() < 600.0 {
        let s: f64 = (1..=w as u64).map(|i| q.powi(i as i32) / (2.0 * i as f64)).sum();
        return s.ln();
    }
    // factor out the last term: Σ_j q^{-j} w/(w−j)
    let mut tail = 0.0;
    let mut j = 0.0;
    while j < w && j < 200.0 {
        let term = (-j * q.ln()).exp() * w / (w - j);
        tail += term;
        if term < 1e-18 * tail {
            break;
        }
        j += 1.0;
    }
    w * q.ln() - (2.0 * w).ln() + tail.ln()
}

/// `ln α = −Σ_{i=1}^{w−1} (n−1)^i / (2i)` as a log-domain value.
pub fn alpha_log(n: usize, w: f64) -> LogReal {
    let s = ln_census_sum(n as f64 - 1.0, (w - 1.0).floor());
    if s == f64::NEG_INFINITY {
        LogReal::ZERO
    } else {
        LogReal::from_parts(-1, s)
    }
}

/// `−Σ_{i=3}^{w−1} (n−1)^i / (2i)`.
pub fn girth_factor_log(n: usize, w: f64) -> LogReal {
    if w <= 3.0 {
        return LogReal::ZERO;
    }
    alpha_log(n, w).sub(alpha_log(n, 3.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub n: usize,
    #[serde(rename = "E")]
    pub e: u64,
    #[serde(rename = "V")]
    pub v: u64,
    pub w: u64,
    pub exact_graph_count: Option<u64>,
    pub asymmetric_count: Option<u64>,
    pub signed_structures_per_graph_log: f64,
    /// Bollobás main term, when it fits in a double.
    pub u_asymptotic: Option<f64>,
    pub u_asymptotic_log: f64,
    pub girth_factor_log: LogReal,
    pub s_lower_log: LogReal,
    pub alpha_log: LogReal,
}

/// Graph counts for `V` up to this size are generated exactly in reports.
pub const EXACT_REPORT_MAX_V: u64 = 10;

/// The counting formulas at `(n, E, w)` plus exact counts for small `V`.
pub fn asymptotic_bounds(n: usize, e: u64, w: u64, exec: Exec) -> Result<CountReport, CensusError> {
    if n < 3 {
        return Err(CensusError::InvalidInput("n must be at least 3".into()));
    }
    if !(2 * e).is_multiple_of(n as u64) {
        return Err(CensusError::InvalidInput(format!("2E = {} is not divisible by n = {n}", 2 * e)));
    }
    let v = 2 * e / n as u64;
    let (nf, ef, vf) = (n as f64, e as f64, v as f64);
    let q = nf - 1.0;
    let ln2 = std::f64::consts::LN_2;
    let ln_main = ln_factorial(2.0 * ef) - ef * ln2 - ln_factorial(ef) - ln_factorial(vf) - vf * ln_factorial(nf);
    let u_asymptotic_log = -(q / 2.0 + q * q / 4.0) + ln_main;
    let u = u_asymptotic_log.exp();
    let alpha = alpha_log(n, w as f64);
    let counting = ln_factorial(2.0 * ef) + ef * ln2 - ln_factorial(ef) - ln_factorial(vf) - vf * (4.0 * nf).ln();
    let (exact_graph_count, asymmetric_count) = if v <= EXACT_REPORT_MAX_V {
        match generate_regular(n, v as usize, w as usize, exec) {
            Ok(gs) => (Some(gs.len() as u64), Some(gs.iter().filter(|g| g.automorphisms == 1).count() as u64)),
            Err(_) => (None, None),
        }
    } else {
        (None, None)
    };
    Ok(CountReport {
        n,
        e,
        v,
        w,
        exact_graph_count,
        asymmetric_count,
        signed_structures_per_graph_log: (nf - 2.0) * vf * ln2 + vf * ln_factorial(nf - 1.0),
        u_asymptotic: u.is_finite().then_some(u),
        u_asymptotic_log,
        girth_factor_log: girth_factor_log(n, w as f64),
        s_lower_log: alpha.add(LogReal::from_f64(counting)),
        alpha_log: alpha,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremBBound {
    pub n: usize,
    pub g: u64,
    pub beta: f64,
    /// Smallest admissible girth used for `α_n`.
    pub w: f64,
    pub alpha_log: LogReal,
    /// `(1 − 2/n) g ln(β g)`.
    pub growth_log: f64,
    /// `ln α_n + growth_log`.
    pub total_log: LogReal,
}

fn admissible_girth(n: usize) -> Result<f64, CensusError> {
    let th = ring_solver::girth_threshold(n as u64)?;
    Ok(match th.w_n {
        Some(w) => w as f64,
        None => th.threshold.floor() + 1.0,
    })
}

/// Lower bound `ln(α_n (β g)^((1−2/n) g))` for the number of local maxima.
/// `β` is not determined and must be supplied.
pub fn theorem_b_lower_log(n: usize, g: u64, beta: f64) -> Result<TheoremBBound, CensusError> {
    if n < 3 || g < 2 {
        return Err(CensusError::InvalidInput("need n >= 3 and g >= 2".into()));
    }
    if !(2 * (g - 1)).is_multiple_of(n as u64) {
        return Err(CensusError::InvalidInput(format!("2(g−1) = {} is not divisible by n = {n}", 2 * (g - 1))));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(CensusError::InvalidInput("beta must be positive".into()));
    }
    let w = admissible_girth(n)?;
    let alpha = alpha_log(n, w);
    let gf = g as f64;
    let growth_log = (1.0 - 2.0 / n as f64) * gf * (beta * gf).ln();
    Ok(TheoremBBound { n, g, beta, w, alpha_log: alpha, growth_log, total_log: alpha.add(LogReal::from_f64(growth_log)) })
}

/// `ln ln ln(1/α_n) / (n ln(1+√2))`.
pub fn alpha_triple_log_ratio(n: usize) -> Result<f64, CensusError> {
    let w = admissible_girth(n)?;
    let ln_s = alpha_log(n, w).log_abs;
    Ok(ln_s.ln() / (n as f64 * ring_solver::LAMBDA))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn count(n: usize, v: usize, g: usize) -> usize {
        generate_regular(n, v, g, Exec::Parallel).unwrap().len()
    }

    #[test]
    fn small_examples() {
        assert_eq!(count(3, 4, 3), 1);
        assert_eq!(count(3, 10, 5), 1);
        assert_eq!(count(3, 4, 5), 0);
        let k4 = &generate_regular(3, 4, 3, Exec::Sequential).unwrap()[0];
        assert_eq!(k4.automorphisms, 24);
        assert!(!automorphism_trivial(&k4.graph));
        let pet = &generate_regular(3, 10, 5, Exec::Sequential).unwrap()[0];
        assert_eq!(pet.automorphisms, 120);
        assert_eq!(pet.graph.girth(), Some(5));
    }

    /// Labelled connected n-regular graphs on v vertices, by brute force
    /// over all edge subsets.
    fn labelled_connected(n: usize, v: usize, girth: usize) -> u64 {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
        let e = n * v / 2;
        let mut total = 0;
        let mut pick = Vec::new();
        #[allow(clippy::too_many_arguments)]
        fn rec(
            pairs: &[(usize, usize)],
            start: usize,
            left: usize,
            deg: &mut Vec<usize>,
            pick: &mut Vec<(usize, usize)>,
            n: usize,
            v: usize,
            girth: usize,
            total: &mut u64,
        ) {
            if left == 0 {
                if deg.iter().all(|&d| d == n) {
                    let g = SignedGraph::from_edges(n, v, pick).unwrap();
                    if g.is_connected() && g.girth().is_none_or(|x| x >= girth) {
                        *total += 1;
                    }
                }
                return;
            }
            for i in start..pairs.len() {
                let (a, b) = pairs[i];
                if deg[a] < n && deg[b] < n {
                    deg[a] += 1;
                    deg[b] += 1;
                    pick.push((a, b));
                    rec(pairs, i + 1, left - 1, deg, pick, n, v, girth, total);
                    pick.pop();
                    deg[a] -= 1;
                    deg[b] -= 1;
                }
            }
        }
        let mut deg = vec![0; v];
        rec(&pairs, 0, e, &mut deg, &mut pick, n, v, girth, &mut total);
        total
    }

    fn brute_aut(g: &SignedGraph) -> u64 {
        let rows = rows_of(g).unwrap();
        let v = rows.len();
        permutations(&(0..v).collect::<Vec<_>>())
            .into_iter()
            .filter(|p| (0..v).all(|a| (0..v).all(|b| (rows[a] >> b & 1) == (rows[p[a]] >> p[b] & 1))))
            .count() as u64
    }

    #[test]
    fn orbit_counting_matches_labelled_brute_force() {
        // Σ V!/|Aut| over classes equals the number of labelled graphs
        for (n, v, girth) in [(3, 4, 3), (3, 6, 3), (3, 6, 4), (3, 8, 3), (3, 8, 4), (4, 6, 3), (2, 7, 3)] {
            let gs = generate_regular(n, v, girth, Exec::Parallel).unwrap();
            let fact: u64 = (1..=v as u64).product();
            let sum: u64 = gs.iter().map(|g| fact / g.automorphisms).sum();
            assert_eq!(sum, labelled_connected(n, v, girth), "(n,v,girth)=({n},{v},{girth})");
            for g in &gs {
                if v <= 8 {
                    assert_eq!(g.automorphisms, brute_aut(&g.graph));
                }
            }
        }
    }

    #[test]
    fn cubic_counts_and_asymmetry_trend() {
        // connected cubic graphs; asymmetric ones first appear at V = 12
        let mut last_frac = 0.0;
        let known = [1, 2, 5, 19, 85];
        for (i, v) in (4..=12).step_by(2).enumerate() {
            let gs = generate_regular(3, v, 3, Exec::Parallel).unwrap();
            assert_eq!(gs.len(), known[i]);
            let asym = gs.iter().filter(|g| g.automorphisms == 1).count();
            let frac = asym as f64 / gs.len() as f64;
            assert!(frac >= last_frac);
            last_frac = frac;
            for g in &gs {
                assert_eq!(g.graph.validate_underlying(), Ok(()));
                assert!(g.graph.is_connected());
                assert_eq!(automorphism_trivial(&g.graph), g.automorphisms == 1);
            }
        }
        assert!((last_frac - 5.0 / 85.0).abs() < 1e-15);
        assert_eq!(count(3, 12, 4), 22);
        assert_eq!(count(3, 12, 5), 2);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let a = generate_regular(3, 10, 4, Exec::Parallel).unwrap();
        let b = generate_regular(3, 10, 4, Exec::Sequential).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn budget_guard() {
        let r = generate_regular_with_budget(3, 12, 3, 100, Exec::Sequential);
        assert!(matches!(r, Err(CensusError::BudgetExceeded { budget: 100, .. })));
        assert!(generate_regular(3, 5, 3, Exec::Sequential).is_err());
    }

    fn count_by_union_find(g: &SignedGraph) -> u64 {
        // brute force: flips × vertex permutations × per-vertex rotations
        use crate::signed_graph::{verify_witness, IsoWitness};
        let choices: Vec<_> = (0..g.num_vertices()).map(|v| local_choices(g.degree(v))).collect();
        let total: usize = choices.iter().map(|c| c.len()).product();
        let all: Vec<SignedGraph> = (0..total)
            .map(|mut idx| {
                let mut h = g.clone();
                for (v, ch) in choices.iter().enumerate() {
                    let (o, s) = &ch[idx % ch.len()];
                    idx /= ch.len();
                    h = h.reorder_vertex(v, o, s.clone());
                }
                h
            })
            .collect();
        let v = g.num_vertices();
        let perms = permutations(&(0..v).collect::<Vec<_>>());
        let mut rep: Vec<usize> = (0..all.len()).collect();
        for i in 0..all.len() {
            if rep[i] != i {
                continue;
            }
            for j in i + 1..all.len() {
                if rep[j] != j {
                    continue;
                }
                let same = (0..1usize << v).any(|mask| {
                    let flips: Vec<usize> = (0..v).filter(|x| mask >> x & 1 == 1).collect();
                    perms.iter().any(|p| verify_witness(&all[i], &all[j], &IsoWitness { vertex_map: p.clone(), flips: flips.clone() }))
                });
                if same {
                    rep[j] = i;
                }
            }
        }
        (0..all.len()).filter(|&i| rep[i] == i).count() as u64
    }

    #[test]
    fn signed_orbits_on_theta_match_brute_force() {
        let theta = SignedGraph::from_edges(3, 2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let c = count_signed_structures(&theta, Exec::Parallel).unwrap();
        assert_eq!(c.exact_small, Some(count_by_union_find(&theta)));
        let k4 = SignedGraph::from_edges(3, 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let exact = count_signed_structures(&k4, Exec::Parallel).unwrap().exact_small.unwrap();
        // 8^4 structures, flip group of order 16, |Aut| = 24
        assert!(exact <= 4096 / 16);
        assert!(exact * 16 * 24 >= 4096);
    }

    #[test]
    fn signed_count_formula() {
        let gs = generate_regular(3, 12, 3, Exec::Parallel).unwrap();
        let asym = gs.iter().find(|g| g.automorphisms == 1).unwrap();
        let c = count_signed_structures(&asym.graph, Exec::Sequential).unwrap();
        assert!((c.log_count - 24.0 * std::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(c.exact_small, None);
    }

    #[test]
    fn bollobas_value() {
        let r = asymptotic_bounds(3, 6, 3, Exec::Parallel).unwrap();
        let direct = (-2.0f64).exp() * 479001600.0 / (64.0 * 720.0 * 24.0 * 1296.0);
        assert!((r.u_asymptotic.unwrap() - direct).abs() < 1e-12);
        assert!((r.u_asymptotic.unwrap() - 0.045_229_24).abs() < 1e-8);
        assert!(r.girth_factor_log.is_zero());
        assert_eq!(r.exact_graph_count, Some(1));
    }

    #[test]
    fn alpha_at_girth_46() {
        let direct: f64 = (1..=45).map(|i| 2f64.powi(i) / (2.0 * i as f64)).sum();
        let a = alpha_log(3, 46.0);
        assert_eq!(a.sign, -1);
        assert!((a.log_abs - direct.ln()).abs() < 1e-12);
        assert!((-direct / 8.0e11 + 1.0).abs() < 0.01);
    }

    #[test]
    fn asymptotic_sum_matches_direct() {
        for (q, w) in [(2.0, 1500.0), (5.0, 300.0), (29.0, 150.0)] {
            let direct = {
                // exact factor-out evaluation in log space term by term
                let terms: Vec<f64> = (1..=w as u64).map(|i| i as f64 * f64::ln(q) - (2.0 * i as f64).ln()).collect();
                let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
            };
            assert!((ln_census_sum(q, w) - direct).abs() < 1e-12 * direct, "q={q} w={w}");
        }
    }

    #[test]
    fn triple_log_ratio_trend() {
        let mut prev = f64::INFINITY;
        for n in 8..=30 {
            let r = alpha_triple_log_ratio(n).unwrap();
            assert!(r < prev && r > 1.0, "n={n} r={r}");
            prev = r;
        }
        assert!(prev < 1.3);
    }

    #[test]
    fn theorem_b_scaling() {
        let a = theorem_b_lower_log(3, 13, 0.5).unwrap();
        let b = theorem_b_lower_log(3, 13, 1.0).unwrap();
        let expected = (1.0 - 2.0 / 3.0) * 13.0 * std::f64::consts::LN_2;
        assert!((b.growth_log - a.growth_log - expected).abs() < 1e-12);
        assert!(theorem_b_lower_log(3, 12, 1.0).is_err());
        let mut prev = f64::NEG_INFINITY;
        for g in (16..200).step_by(3) {
            let t = theorem_b_lower_log(3, g, 1.0).unwrap().growth_log;
            assert!(t > prev);
            prev = t;
        }
    }

    proptest! {
        #[test]
        fn wormald_telescoping(n in 3usize..8, w in 3u32..40) {
            let q = n as f64 - 1.0;
            let a = girth_factor_log(n, w as f64 + 1.0);
            let b = girth_factor_log(n, w as f64);
            let diff = a.to_f64() - b.to_f64();
            let expected = -q.powi(w as i32) / (2.0 * w as f64);
            prop_assert!((diff - expected).abs() <= 1e-12 * a.to_f64().abs().max(1.0));
        }
    }
}
