//! Pile placement on the 2-D grid and the pile parent tree.
//!
//! Piles become nodes of a small hypergraph whose edge weights count the
//! dual-graph edges crossing between two parts. Placement searches every
//! connected K-cell footprint (free polyominoes, all pile-to-cell
//! assignments) for the one that realizes the most crossing weight as grid
//! adjacency; the parent tree is then a BFS tree over realized adjacencies.

use crate::error::{Error, Result};
use crate::geometry::DualGraph;
use crate::partition::BalancedPartition;
use std::collections::{HashSet, VecDeque};

/// Inter-pile connectivity: `weight[i][j]` counts dual edges between parts
/// i and j. An edge exists exactly where the weight is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    pub k: usize,
    pub weight: Vec<Vec<u32>>,
}

impl Hypergraph {
    /// (i, j, weight) triples with i < j and weight > 0.
    pub fn edges(&self) -> Vec<(u32, u32, u32)> {
        let mut out = Vec::new();
        for i in 0..self.k {
            for j in (i + 1)..self.k {
                if self.weight[i][j] > 0 {
                    out.push((i as u32, j as u32, self.weight[i][j]));
                }
            }
        }
        out
    }

    pub fn total_weight(&self) -> u64 {
        self.edges().iter().map(|&(_, _, w)| w as u64).sum()
    }
}

/// Count cross-part dual edges for every pile pair.
pub fn build_hypergraph(g: &DualGraph, p: &BalancedPartition) -> Hypergraph {
    let mut weight = vec![vec![0u32; p.k]; p.k];
    for e in &g.edges {
        let (a, b) = (p.labels[e.a as usize], p.labels[e.b as usize]);
        if a != b {
            weight[a as usize][b as usize] += 1;
            weight[b as usize][a as usize] += 1;
        }
    }
    Hypergraph { k: p.k, weight }
}

/// Grid cells assigned to piles, one cell each, footprint edge-connected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PilePlacement {
    /// pile id -> (row, col), normalized so the minimum row and column are 0.
    pub cell: Vec<(i64, i64)>,
    /// Pile pairs that are grid-adjacent and share positive weight.
    pub realized: Vec<(u32, u32)>,
    /// Total hypergraph weight over `realized`.
    pub realized_weight: u64,
}

impl PilePlacement {
    pub fn footprint_rows(&self) -> i64 {
        self.cell.iter().map(|c| c.0).max().map_or(0, |m| m + 1)
    }

    pub fn footprint_cols(&self) -> i64 {
        self.cell.iter().map(|c| c.1).max().map_or(0, |m| m + 1)
    }

    pub fn are_adjacent(&self, i: u32, j: u32) -> bool {
        let (a, b) = (self.cell[i as usize], self.cell[j as usize]);
        (a.0 - b.0).abs() + (a.1 - b.1).abs() == 1
    }
}

fn normalize(cells: &mut [(i64, i64)]) {
    let r0 = cells.iter().map(|c| c.0).min().unwrap();
    let c0 = cells.iter().map(|c| c.1).min().unwrap();
    for c in cells.iter_mut() {
        *c = (c.0 - r0, c.1 - c0);
    }
}

fn canonical_form(cells: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut best: Option<Vec<(i64, i64)>> = None;
    for transform in 0..8 {
        let mut v: Vec<(i64, i64)> = cells
            .iter()
            .map(|&(r, c)| {
                let (mut r, mut c) = (r, c);
                if transform & 4 != 0 {
                    c = -c;
                }
                for _ in 0..(transform & 3) {
                    let t = r;
                    r = c;
                    c = -t;
                }
                (r, c)
            })
            .collect();
        normalize(&mut v);
        v.sort_unstable();
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    best.unwrap()
}

/// All free polyominoes with `k` cells, each as a sorted normalized cell list.
fn free_polyominoes(k: usize) -> Vec<Vec<(i64, i64)>> {
    let mut level: HashSet<Vec<(i64, i64)>> = HashSet::new();
    level.insert(vec![(0, 0)]);
    for _ in 1..k {
        let mut next = HashSet::new();
        for shape in &level {
            for &(r, c) in shape {
                for (dr, dc) in [(0, 1), (1, 0), (0, -1), (-1, 0)] {
                    let cand = (r + dr, c + dc);
                    if shape.contains(&cand) {
                        continue;
                    }
                    let mut grown = shape.clone();
                    grown.push(cand);
                    next.insert(canonical_form(&grown));
                }
            }
        }
        level = next;
    }
    let mut shapes: Vec<Vec<(i64, i64)>> = level.into_iter().collect();
    shapes.sort();
    shapes
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Vec<u32>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                current.push(i as u32);
                rec(n, current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

fn realized_connected(k: usize, realized: &[(u32, u32)]) -> bool {
    if k == 1 {
        return true;
    }
    let mut adj = vec![Vec::new(); k];
    for &(a, b) in realized {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    let mut seen = vec![false; k];
    let mut stack = vec![0u32];
    seen[0] = true;
    let mut count = 0;
    while let Some(v) = stack.pop() {
        count += 1;
        for &o in &adj[v as usize] {
            if !seen[o as usize] {
                seen[o as usize] = true;
                stack.push(o);
            }
        }
    }
    count == k
}

/// Exhaustively place the piles on grid cells, maximizing the total weight
/// of hypergraph edges whose piles end up grid-adjacent.
///
/// Co-optimal placements tie-break toward one whose realized adjacencies
/// connect all piles, then toward the lexicographically smallest cell list.
pub fn optimal_placement(h: &Hypergraph) -> Result<PilePlacement> {
    Ok(optimal_placements(h, 1)?.remove(0))
}

/// Up to `limit` placements sharing the maximal realized weight, best
/// tie-break first, deduplicated up to grid symmetry. Downstream stages can
/// fall through co-optimal layouts when bridge resolution gets stuck.
pub fn optimal_placements(h: &Hypergraph, limit: usize) -> Result<Vec<PilePlacement>> {
    let k = h.k;
    if k == 0 || limit == 0 {
        return Err(Error::Contract("placement needs at least one pile".into()));
    }
    if k > 8 {
        return Err(Error::PlacementLimit(k));
    }
    if k == 1 {
        return Ok(vec![PilePlacement { cell: vec![(0, 0)], realized: vec![], realized_weight: 0 }]);
    }

    let shapes = free_polyominoes(k);
    let perms = permutations(k);
    let mut best_score: Option<u64> = None;
    // (connected, cell list, realized pairs) per best-scoring assignment.
    type Candidate = (bool, Vec<(i64, i64)>, Vec<(u32, u32)>);
    let mut pool: Vec<Candidate> = Vec::new();

    for shape in &shapes {
        // Adjacent cell-index pairs within this footprint.
        let mut pairs = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                let (a, b) = (shape[i], shape[j]);
                if (a.0 - b.0).abs() + (a.1 - b.1).abs() == 1 {
                    pairs.push((i, j));
                }
            }
        }
        for perm in &perms {
            // perm[cell index] = pile id
            let mut score = 0u64;
            let mut realized = Vec::with_capacity(pairs.len());
            for &(i, j) in &pairs {
                let (pi, pj) = (perm[i], perm[j]);
                let w = h.weight[pi as usize][pj as usize];
                if w > 0 {
                    score += w as u64;
                    realized.push((pi.min(pj), pi.max(pj)));
                }
            }
            if best_score.is_some_and(|b| score < b) {
                continue;
            }
            let connected = realized_connected(k, &realized);
            let mut cell = vec![(0i64, 0i64); k];
            for (ci, &pile) in perm.iter().enumerate() {
                cell[pile as usize] = shape[ci];
            }
            realized.sort_unstable();
            realized.dedup();
            if best_score != Some(score) {
                best_score = Some(score);
                pool.clear();
            }
            pool.push((connected, cell, realized));
        }
    }

    // Best tie-break first: connected before disconnected, then lex cells.
    pool.sort_by(|a, b| (!a.0, &a.1).cmp(&(!b.0, &b.1)));
    let mut out: Vec<PilePlacement> = Vec::new();
    let mut seen: HashSet<Vec<(i64, i64)>> = HashSet::new();
    let score = best_score.unwrap();
    for (_, cell, realized) in pool {
        // One representative per symmetry class; rotations and reflections
        // of a placement are explored by the caller.
        let key = canonical_assignment(&cell);
        if !seen.insert(key) {
            continue;
        }
        out.push(PilePlacement { cell, realized, realized_weight: score });
        if out.len() == limit {
            break;
        }
    }
    Ok(out)
}

/// Canonical form of a pile-to-cell map under the 8 grid symmetries.
fn canonical_assignment(cells: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut best: Option<Vec<(i64, i64)>> = None;
    for transform in 0..8 {
        let mut v: Vec<(i64, i64)> = cells
            .iter()
            .map(|&(r, c)| {
                let (mut r, mut c) = (r, c);
                if transform & 4 != 0 {
                    c = -c;
                }
                for _ in 0..(transform & 3) {
                    let t = r;
                    r = c;
                    c = -t;
                }
                (r, c)
            })
            .collect();
        normalize(&mut v);
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    best.unwrap()
}

/// Rooted tree over piles: each child hangs off a grid-adjacent pile with
/// positive crossing weight, ordered by distance from the reference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PileParentTree {
    pub reference: u32,
    /// pile id -> parent pile id; the reference maps to itself.
    pub parent: Vec<u32>,
    /// Piles in BFS order from the reference (reference first).
    pub order: Vec<u32>,
}

impl PileParentTree {
    pub fn depth(&self) -> usize {
        let mut max = 0;
        for mut p in 0..self.parent.len() as u32 {
            let mut d = 0;
            while self.parent[p as usize] != p {
                p = self.parent[p as usize];
                d += 1;
            }
            max = max.max(d);
        }
        max
    }
}

/// BFS tree over realized adjacencies from the reference pile.
pub fn parent_tree(h: &Hypergraph, placement: &PilePlacement, reference: u32) -> Result<PileParentTree> {
    let k = h.k;
    if reference as usize >= k {
        return Err(Error::Contract(format!("reference pile {reference} out of range")));
    }
    let mut adj = vec![Vec::new(); k];
    for &(a, b) in &placement.realized {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    let mut parent = vec![u32::MAX; k];
    let mut order = Vec::with_capacity(k);
    let mut queue = VecDeque::from([reference]);
    parent[reference as usize] = reference;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &o in &adj[v as usize] {
            if parent[o as usize] == u32::MAX {
                parent[o as usize] = v;
                queue.push_back(o);
            }
        }
    }
    if order.len() != k {
        return Err(Error::PlacementDisconnected);
    }
    Ok(PileParentTree { reference, parent, order })
}
