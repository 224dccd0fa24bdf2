//! Hamiltonian cycles and paths on dual graphs and their induced subgraphs.
//!
//! The solver is a seeded backtracking search: candidates are ordered
//! fewest-remaining-connections first (so forced degree-2 chains are taken
//! immediately), dead nodes and disconnected remainders prune the branch,
//! and a node-expansion budget bounds the work. A brute-force enumerator
//! validates feasibility answers on small instances.

use crate::error::{Error, Result};
use crate::geometry::DualGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Node-spanning simple path, in original node ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianPath {
    pub order: Vec<u32>,
}

/// Node-spanning simple cycle; the last node links back to the first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianCycle {
    pub order: Vec<u32>,
}

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchResult<T> {
    Found(T),
    /// No solution exists; the search space was exhausted or a parity
    /// argument rules it out.
    Proven,
    /// The expansion budget ran out first. Retryable with another seed.
    Budget,
}

impl<T> SearchResult<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchResult::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchResult::Found(_))
    }
}

/// Default node-expansion budget: 10,000 per node.
pub fn default_budget(n: usize) -> u64 {
    10_000u64.saturating_mul(n as u64)
}

/// An induced subgraph with dense local ids and a mapping back to the host
/// graph's node ids.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub global_ids: Vec<u32>,
    pub adj: Vec<Vec<u32>>,
}

impl Subgraph {
    pub fn induced(g: &DualGraph, nodes: &[u32]) -> Subgraph {
        let mut global_ids = nodes.to_vec();
        global_ids.sort_unstable();
        global_ids.dedup();
        let local = |id: u32| global_ids.binary_search(&id).ok().map(|i| i as u32);
        let mut adj = vec![Vec::new(); global_ids.len()];
        for (li, &gid) in global_ids.iter().enumerate() {
            for e in g.neighbors(gid) {
                if let Some(lo) = local(e.other(gid)) {
                    adj[li].push(lo);
                }
            }
            adj[li].sort_unstable();
        }
        Subgraph { global_ids, adj }
    }

    pub fn full(g: &DualGraph) -> Subgraph {
        let nodes: Vec<u32> = (0..g.node_count() as u32).collect();
        Subgraph::induced(g, &nodes)
    }

    pub fn len(&self) -> usize {
        self.global_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.global_ids.is_empty()
    }

    pub fn to_global(&self, local: &[u32]) -> Vec<u32> {
        local.iter().map(|&l| self.global_ids[l as usize]).collect()
    }

    pub fn to_local(&self, global: u32) -> Option<u32> {
        self.global_ids.binary_search(&global).ok().map(|i| i as u32)
    }

    pub fn is_connected(&self) -> bool {
        connected(&self.adj)
    }
}

/// Position constraints for a path search.
#[derive(Clone, Debug, Default)]
pub struct Constraints {
    /// Node required at position 0, in global ids.
    pub start: Option<u32>,
    /// (position, node) pairs that must hold, in global ids.
    pub positions: Vec<(usize, u32)>,
}

pub(crate) fn connected(adj: &[Vec<u32>]) -> bool {
    if adj.is_empty() {
        return false;
    }
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0u32];
    seen[0] = true;
    let mut count = 0;
    while let Some(n) = stack.pop() {
        count += 1;
        for &o in &adj[n as usize] {
            if !seen[o as usize] {
                seen[o as usize] = true;
                stack.push(o);
            }
        }
    }
    count == adj.len()
}

/// Two-color the graph; `None` when an odd cycle exists.
fn bipartition_sizes(adj: &[Vec<u32>]) -> Option<(usize, usize)> {
    let mut color = vec![u8::MAX; adj.len()];
    let mut counts = [0usize; 2];
    for start in 0..adj.len() {
        if color[start] != u8::MAX {
            continue;
        }
        color[start] = 0;
        counts[0] += 1;
        let mut queue = std::collections::VecDeque::from([start as u32]);
        while let Some(n) = queue.pop_front() {
            for &o in &adj[n as usize] {
                if color[o as usize] == u8::MAX {
                    color[o as usize] = 1 - color[n as usize];
                    counts[(1 - color[n as usize]) as usize] += 1;
                    queue.push_back(o);
                } else if color[o as usize] == color[n as usize] {
                    return None;
                }
            }
        }
    }
    Some((counts[0], counts[1]))
}

/// Validate that `order` is a Hamiltonian path of `adj`. Independent of the
/// solver: pure edge-membership checks.
pub fn is_valid_path(adj: &[Vec<u32>], order: &[u32]) -> bool {
    if order.len() != adj.len() {
        return false;
    }
    let mut seen = vec![false; adj.len()];
    for &n in order {
        if (n as usize) >= adj.len() || seen[n as usize] {
            return false;
        }
        seen[n as usize] = true;
    }
    order.windows(2).all(|w| adj[w[0] as usize].contains(&w[1]))
}

/// Validate a Hamiltonian cycle: a valid path whose ends are adjacent.
pub fn is_valid_cycle(adj: &[Vec<u32>], order: &[u32]) -> bool {
    if !is_valid_path(adj, order) {
        return false;
    }
    if order.len() == 1 {
        return false;
    }
    adj[order[order.len() - 1] as usize].contains(&order[0])
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Path,
    Cycle,
}

/// Cheap structural proofs that no Hamiltonian path/cycle exists: degree
/// floors, bipartite class balance, and articulation splits (a path crosses
/// a cut vertex once, so it covers at most two of the split components; a
/// cycle tolerates no cut vertex at all).
fn proven_infeasible(adj: &[Vec<u32>], mode: Mode) -> bool {
    let n = adj.len();
    if n == 0 {
        return true;
    }
    let min_deg = |d: usize| adj.iter().filter(|l| l.len() < d).count();
    match mode {
        Mode::Path => {
            if n >= 2 && adj.iter().any(|l| l.is_empty()) {
                return true;
            }
            if adj.iter().filter(|l| l.len() == 1).count() > 2 {
                return true;
            }
        }
        Mode::Cycle => {
            if min_deg(2) > 0 {
                return true;
            }
        }
    }
    if let Some((c0, c1)) = bipartition_sizes(adj) {
        let limit = if mode == Mode::Cycle { 0 } else { 1 };
        if c0.abs_diff(c1) > limit {
            return true;
        }
    }
    match articulation_split(adj) {
        Some(split) => match mode {
            Mode::Cycle => true,
            Mode::Path => split >= 3,
        },
        None => false,
    }
}

/// Largest number of components any single vertex removal creates, or None
/// when the graph has no articulation point. Iterative Tarjan.
#[allow(clippy::needless_range_loop)]
fn articulation_split(adj: &[Vec<u32>]) -> Option<usize> {
    let n = adj.len();
    if n < 3 {
        return None;
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![usize::MAX; n];
    let mut split = vec![0usize; n];
    let mut timer = 0usize;

    // (node, parent, next neighbor index)
    let mut stack: Vec<(u32, u32, usize)> = vec![(0, u32::MAX, 0)];
    disc[0] = 0;
    low[0] = 0;
    timer += 1;
    let mut root_children = 0usize;

    while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
        if *idx < adj[v as usize].len() {
            let u = adj[v as usize][*idx];
            *idx += 1;
            if disc[u as usize] == usize::MAX {
                disc[u as usize] = timer;
                low[u as usize] = timer;
                timer += 1;
                if v == 0 {
                    root_children += 1;
                }
                stack.push((u, v, 0));
            } else if u != parent {
                low[v as usize] = low[v as usize].min(disc[u as usize]);
            }
        } else {
            stack.pop();
            if let Some(&mut (p, _, _)) = stack.last_mut() {
                low[p as usize] = low[p as usize].min(low[v as usize]);
                if p != 0 && low[v as usize] >= disc[p as usize] {
                    split[p as usize] += 1;
                }
            }
        }
    }

    let mut worst = None;
    for v in 0..n {
        let parts = if v == 0 {
            if root_children >= 2 {
                root_children
            } else {
                0
            }
        } else if split[v] > 0 {
            split[v] + 1
        } else {
            0
        };
        if parts >= 2 {
            worst = Some(worst.map_or(parts, |w: usize| w.max(parts)));
        }
    }
    worst
}

/// Bounded exact backtracking: fewest-remaining-connections ordering,
/// forced degree-0 completions, dead-neighbor pruning, and periodic
/// remainder-connectivity checks. Exhausting the space proves infeasibility.
struct Dfs<'a> {
    adj: &'a [Vec<u32>],
    mode: Mode,
    /// position -> required node, u32::MAX when free
    required: Vec<u32>,
    /// node -> required position, usize::MAX when free
    required_pos: Vec<usize>,
    rank: Vec<u32>,
    budget: u64,
    expansions: u64,
    visited: Vec<bool>,
    rem_deg: Vec<u32>,
    path: Vec<u32>,
    start: u32,
    exhausted: bool,
}

impl<'a> Dfs<'a> {
    fn place(&mut self, node: u32) {
        self.visited[node as usize] = true;
        self.path.push(node);
        for &o in &self.adj[node as usize] {
            self.rem_deg[o as usize] -= 1;
        }
    }

    fn unplace(&mut self) {
        let node = self.path.pop().unwrap();
        self.visited[node as usize] = false;
        for &o in &self.adj[node as usize] {
            self.rem_deg[o as usize] += 1;
        }
    }

    /// After placing `v`, any unvisited neighbor stripped to zero remaining
    /// degree is reachable only from the tip right now; more than one such
    /// neighbor (or one while others remain) kills the branch.
    fn stranded_after(&self, v: u32) -> bool {
        let remaining = self.adj.len() - self.path.len();
        if remaining == 0 {
            return false;
        }
        let mut zeros = 0;
        for &u in &self.adj[v as usize] {
            if !self.visited[u as usize] && self.rem_deg[u as usize] == 0 {
                zeros += 1;
            }
        }
        zeros > 1 || (zeros == 1 && remaining > 1)
    }

    fn remainder_connected(&self, tip: u32) -> bool {
        let n = self.adj.len();
        let unvisited = n - self.path.len();
        if unvisited == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack: Vec<u32> = self.adj[tip as usize]
            .iter()
            .copied()
            .filter(|&u| !self.visited[u as usize])
            .collect();
        for &u in &stack {
            seen[u as usize] = true;
        }
        let mut count = stack.len();
        while let Some(u) = stack.pop() {
            for &o in &self.adj[u as usize] {
                if !self.visited[o as usize] && !seen[o as usize] {
                    seen[o as usize] = true;
                    count += 1;
                    stack.push(o);
                }
            }
        }
        count == unvisited
    }

    fn dfs(&mut self) -> bool {
        let n = self.adj.len();
        if self.path.len() == n {
            return match self.mode {
                Mode::Path => true,
                Mode::Cycle => self.adj[*self.path.last().unwrap() as usize].contains(&self.start),
            };
        }
        if self.expansions >= self.budget {
            self.exhausted = false;
            return false;
        }
        let tip = *self.path.last().unwrap();
        let pos = self.path.len();

        let mut candidates: Vec<u32> = if self.required[pos] != u32::MAX {
            let u = self.required[pos];
            if self.visited[u as usize] || !self.adj[tip as usize].contains(&u) {
                return false;
            }
            vec![u]
        } else {
            self.adj[tip as usize]
                .iter()
                .copied()
                .filter(|&u| !self.visited[u as usize] && self.required_pos[u as usize] == usize::MAX)
                .collect()
        };
        if candidates.is_empty() {
            return false;
        }

        // A candidate with no other remaining connection must be entered now.
        if candidates.len() > 1 {
            if let Some(&forced) = candidates.iter().find(|&&u| self.rem_deg[u as usize] == 0) {
                candidates = vec![forced];
            }
        }
        candidates.sort_by_key(|&u| (self.rem_deg[u as usize], self.rank[u as usize], u));

        for u in candidates {
            self.expansions += 1;
            self.place(u);
            let dead = self.stranded_after(u)
                || (self.path.len() + 2 < n
                    && self.expansions.is_multiple_of(64)
                    && !self.remainder_connected(u));
            if !dead && self.dfs() {
                return true;
            }
            self.unplace();
            if self.expansions >= self.budget {
                self.exhausted = false;
                return false;
            }
        }
        false
    }
}

/// Extension-rotation search for unconstrained instances: grow the path
/// greedily; when the tip has no fresh neighbor, pivot the path at a
/// neighbor already on it (reversing the tail) and keep growing. Very
/// effective on blobby 4-regular surface subgraphs, but proves nothing.
fn rotation_search(adj: &[Vec<u32>], mode: Mode, seed: u64, budget: u64) -> Option<Vec<u32>> {
    let n = adj.len();
    if n < 2 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut steps = 0u64;

    let mut path: Vec<u32> = Vec::with_capacity(n);
    let mut pos = vec![usize::MAX; n];
    let mut rem_deg: Vec<u32> = Vec::new();

    // Paths have to end at degree-1 nodes, so start there when they exist.
    let forced_starts: Vec<u32> =
        (0..n as u32).filter(|&u| adj[u as usize].len() == 1).collect();

    'restart: while steps < budget {
        path.clear();
        pos.iter_mut().for_each(|p| *p = usize::MAX);
        rem_deg.clear();
        rem_deg.extend(adj.iter().map(|l| l.len() as u32));
        let start = if mode == Mode::Path && !forced_starts.is_empty() {
            forced_starts[rng.random_range(0..forced_starts.len())]
        } else {
            rng.random_range(0..n as u32)
        };
        path.push(start);
        pos[start as usize] = 0;
        for &o in &adj[start as usize] {
            rem_deg[o as usize] -= 1;
        }
        let mut stagnation = 0u32;

        while steps < budget {
            steps += 1;
            let tip = *path.last().unwrap();
            if path.len() == n {
                match mode {
                    Mode::Path => return Some(path),
                    Mode::Cycle => {
                        if adj[tip as usize].contains(&path[0]) {
                            return Some(path);
                        }
                        // Pivot until the ends close up.
                        let candidates: Vec<usize> = adj[tip as usize]
                            .iter()
                            .filter_map(|&u| {
                                let i = pos[u as usize];
                                (i + 2 < path.len()).then_some(i)
                            })
                            .collect();
                        if candidates.is_empty() {
                            continue 'restart;
                        }
                        let i = candidates[rng.random_range(0..candidates.len())];
                        reverse_tail(&mut path, &mut pos, i + 1);
                        stagnation += 1;
                        if stagnation > 8 * n as u32 {
                            continue 'restart;
                        }
                        continue;
                    }
                }
            }

            // Fresh extensions, fewest-remaining-connections first with a
            // random tie-break.
            let mut best: Option<u32> = None;
            let mut best_deg = u32::MAX;
            let mut ties = 0u32;
            for &u in &adj[tip as usize] {
                if pos[u as usize] == usize::MAX {
                    let d = rem_deg[u as usize];
                    if d < best_deg {
                        best_deg = d;
                        best = Some(u);
                        ties = 1;
                    } else if d == best_deg {
                        ties += 1;
                        if rng.random_range(0..ties) == 0 {
                            best = Some(u);
                        }
                    }
                }
            }
            if let Some(u) = best {
                path.push(u);
                pos[u as usize] = path.len() - 1;
                for &o in &adj[u as usize] {
                    rem_deg[o as usize] -= 1;
                }
                stagnation = 0;
                continue;
            }

            // Stuck. If the path closes into a cycle, re-root it at any
            // node with an unvisited neighbor and extend from there.
            if adj[tip as usize].contains(&path[0]) {
                let mut rerooted = false;
                for probe in 0..path.len() {
                    let i = (probe + rng.random_range(0..path.len())) % path.len();
                    let v = path[i];
                    if adj[v as usize].iter().any(|&u| pos[u as usize] == usize::MAX) {
                        // Cut the cycle after i: new order i+1.. ++ ..=i.
                        let shift = (i + 1) % path.len();
                        path.rotate_left(shift);
                        for (j, &u) in path.iter().enumerate() {
                            pos[u as usize] = j;
                        }
                        rerooted = true;
                        break;
                    }
                }
                if rerooted {
                    stagnation += 1;
                    if stagnation > 8 * n as u32 {
                        continue 'restart;
                    }
                    continue;
                }
            }

            // Otherwise rotate about a random on-path neighbor of the tip.
            let pivots: Vec<usize> = adj[tip as usize]
                .iter()
                .filter_map(|&u| {
                    let i = pos[u as usize];
                    (i + 2 < path.len()).then_some(i)
                })
                .collect();
            if pivots.is_empty() {
                continue 'restart;
            }
            let i = pivots[rng.random_range(0..pivots.len())];
            reverse_tail(&mut path, &mut pos, i + 1);
            stagnation += 1;
            if stagnation > 8 * n as u32 {
                continue 'restart;
            }
        }
    }
    None
}

fn reverse_tail(path: &mut [u32], pos: &mut [usize], from: usize) {
    path[from..].reverse();
    for (i, &u) in path.iter().enumerate().skip(from) {
        pos[u as usize] = i;
    }
}

/// Share of the budget the exact phase gets on unconstrained instances.
fn dfs_budget(n: usize, budget: u64) -> u64 {
    (budget / 4).min(50_000 + 50 * n as u64).max(1_000)
}

fn solve(
    adj: &[Vec<u32>],
    mode: Mode,
    required: Vec<u32>,
    seed: u64,
    budget: u64,
) -> SearchResult<Vec<u32>> {
    let n = adj.len();
    if proven_infeasible(adj, mode) {
        return SearchResult::Proven;
    }
    let constrained = required.iter().any(|&r| r != u32::MAX);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rank: Vec<u32> = (0..n as u32).collect();
    rank.shuffle(&mut rng);

    let mut required_pos = vec![usize::MAX; n];
    for (pos, &node) in required.iter().enumerate() {
        if node != u32::MAX {
            required_pos[node as usize] = pos;
        }
    }

    // Seed-dependent start preference, overridden by a position-0 constraint.
    let starts: Vec<u32> = if required[0] != u32::MAX {
        vec![required[0]]
    } else {
        let mut s: Vec<u32> =
            (0..n as u32).filter(|&u| required_pos[u as usize] == usize::MAX).collect();
        // Low-degree nodes make the best path ends; the seeded rank breaks ties.
        s.sort_by_key(|&u| (adj[u as usize].len(), rank[u as usize], u));
        match mode {
            // Any cycle visits every node, so one start suffices.
            Mode::Cycle => s.truncate(1),
            Mode::Path => {}
        }
        s
    };

    let phase1_budget = if constrained { budget } else { dfs_budget(n, budget) };
    let mut expansions_used = 0u64;
    let mut all_exhausted = true;
    for start in starts {
        let mut s = Dfs {
            adj,
            mode,
            required: required.clone(),
            required_pos: required_pos.clone(),
            rank: rank.clone(),
            budget: phase1_budget.saturating_sub(expansions_used),
            expansions: 0,
            visited: vec![false; n],
            rem_deg: adj.iter().map(|l| l.len() as u32).collect(),
            path: Vec::with_capacity(n),
            start,
            exhausted: true,
        };
        s.place(start);
        if s.dfs() {
            return SearchResult::Found(s.path);
        }
        expansions_used += s.expansions;
        all_exhausted &= s.exhausted;
        if expansions_used >= phase1_budget {
            break;
        }
    }
    if all_exhausted && expansions_used < phase1_budget {
        return SearchResult::Proven;
    }
    if constrained {
        return SearchResult::Budget;
    }

    let remaining = budget.saturating_sub(expansions_used);
    match rotation_search(adj, mode, sub_seed_local(seed), remaining) {
        Some(order) => SearchResult::Found(order),
        None => SearchResult::Budget,
    }
}

fn sub_seed_local(seed: u64) -> u64 {
    crate::seed::sub_seed(seed, 0x9a7a)
}

/// Find a Hamiltonian cycle of a connected dual graph.
pub fn ham_cycle(g: &DualGraph, seed: u64, budget: Option<u64>) -> Result<SearchResult<HamiltonianCycle>> {
    let sub = Subgraph::full(g);
    if sub.len() < 3 {
        return Err(Error::Contract("cycle search needs at least 3 nodes".into()));
    }
    if !sub.is_connected() {
        return Err(Error::Contract("cycle search needs a connected graph".into()));
    }
    // Parity shortcut: a Hamiltonian cycle of a bipartite graph alternates
    // colors, so the classes must be equal (and the order even).
    if let Some((c0, c1)) = bipartition_sizes(&sub.adj) {
        if c0 != c1 {
            return Ok(SearchResult::Proven);
        }
    }
    let budget = budget.unwrap_or_else(|| default_budget(sub.len()));
    let required = vec![u32::MAX; sub.len()];
    Ok(match solve(&sub.adj, Mode::Cycle, required, seed, budget) {
        SearchResult::Found(order) => {
            debug_assert!(is_valid_cycle(&sub.adj, &order));
            SearchResult::Found(HamiltonianCycle { order: sub.to_global(&order) })
        }
        SearchResult::Proven => SearchResult::Proven,
        SearchResult::Budget => SearchResult::Budget,
    })
}

/// Break a cycle after `break_index`, yielding the path that starts just
/// past the removed edge.
pub fn ham_path_from_cycle(c: &HamiltonianCycle, break_index: usize) -> Result<HamiltonianPath> {
    let n = c.order.len();
    if break_index >= n {
        return Err(Error::Contract(format!("break index {break_index} out of range 0..{n}")));
    }
    let mut order = Vec::with_capacity(n);
    for i in 0..n {
        order.push(c.order[(break_index + 1 + i) % n]);
    }
    Ok(HamiltonianPath { order })
}

/// Find a Hamiltonian path of an induced subgraph under optional position
/// constraints. Returns global node ids.
pub fn ham_path_constrained(
    sub: &Subgraph,
    constraints: &Constraints,
    seed: u64,
    budget: Option<u64>,
) -> Result<SearchResult<HamiltonianPath>> {
    let n = sub.len();
    if n == 0 {
        return Err(Error::Contract("path search needs a non-empty subgraph".into()));
    }
    if !sub.is_connected() {
        return Err(Error::Contract("path search needs a connected subgraph".into()));
    }

    let mut required = vec![u32::MAX; n];
    let mut pin = |pos: usize, node_global: u32| -> Result<bool> {
        let local = sub
            .to_local(node_global)
            .ok_or_else(|| Error::Infeasible(format!("node {node_global} not in subgraph")))?;
        if pos >= n {
            return Err(Error::Infeasible(format!("position {pos} out of range for {n} nodes")));
        }
        if required[pos] != u32::MAX && required[pos] != local {
            return Ok(false);
        }
        if required.iter().enumerate().any(|(p, &r)| r == local && p != pos) {
            return Ok(false);
        }
        required[pos] = local;
        Ok(true)
    };
    if let Some(start) = constraints.start {
        if !pin(0, start)? {
            return Ok(SearchResult::Proven);
        }
    }
    for &(pos, node) in &constraints.positions {
        if !pin(pos, node)? {
            return Ok(SearchResult::Proven);
        }
    }
    // Constrained neighbors must actually be adjacent.
    for pos in 0..n.saturating_sub(1) {
        let (a, b) = (required[pos], required[pos + 1]);
        if a != u32::MAX && b != u32::MAX && !sub.adj[a as usize].contains(&b) {
            return Ok(SearchResult::Proven);
        }
    }
    if let Some((c0, c1)) = bipartition_sizes(&sub.adj) {
        if c0.abs_diff(c1) > 1 {
            return Ok(SearchResult::Proven);
        }
    }

    if n == 1 {
        return Ok(SearchResult::Found(HamiltonianPath { order: sub.global_ids.clone() }));
    }
    let budget = budget.unwrap_or_else(|| default_budget(n));
    Ok(match solve(&sub.adj, Mode::Path, required, seed, budget) {
        SearchResult::Found(order) => {
            debug_assert!(is_valid_path(&sub.adj, &order));
            SearchResult::Found(HamiltonianPath { order: sub.to_global(&order) })
        }
        SearchResult::Proven => SearchResult::Proven,
        SearchResult::Budget => SearchResult::Budget,
    })
}

/// Enumeration mode for the brute-force oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BruteMode {
    Path,
    Cycle,
}

/// Exhaustively enumerate Hamiltonian paths or cycles on a small graph.
///
/// Paths are deduplicated against their reversal; cycles are anchored at
/// node 0 and deduplicated against direction, so each solution appears once
/// up to rotation and reflection. Capped at 12 nodes.
pub fn brute_force_ham(adj: &[Vec<u32>], mode: BruteMode) -> Result<Vec<Vec<u32>>> {
    let n = adj.len();
    if n > 12 {
        return Err(Error::Contract(format!("brute force capped at 12 nodes, got {n}")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut solutions = Vec::new();
    let mut path = Vec::with_capacity(n);
    let mut visited = vec![false; n];

    fn recurse(
        adj: &[Vec<u32>],
        mode: BruteMode,
        path: &mut Vec<u32>,
        visited: &mut Vec<bool>,
        out: &mut Vec<Vec<u32>>,
    ) {
        let n = adj.len();
        if path.len() == n {
            match mode {
                BruteMode::Path => {
                    let rev_smaller = {
                        let rev: Vec<u32> = path.iter().rev().copied().collect();
                        rev < *path
                    };
                    if !rev_smaller {
                        out.push(path.clone());
                    }
                }
                BruteMode::Cycle => {
                    if n >= 3 && adj[path[n - 1] as usize].contains(&path[0]) && path[1] < path[n - 1] {
                        out.push(path.clone());
                    }
                }
            }
            return;
        }
        let tip = *path.last().unwrap();
        for &u in &adj[tip as usize] {
            if !visited[u as usize] {
                visited[u as usize] = true;
                path.push(u);
                recurse(adj, mode, path, visited, out);
                path.pop();
                visited[u as usize] = false;
            }
        }
    }

    let starts: Vec<u32> = match mode {
        BruteMode::Cycle => vec![0],
        BruteMode::Path => (0..n as u32).collect(),
    };
    for s in starts {
        visited[s as usize] = true;
        path.push(s);
        if n == 1 {
            solutions.push(path.clone());
        } else {
            recurse(adj, mode, &mut path, &mut visited, &mut solutions);
        }
        path.pop();
        visited[s as usize] = false;
    }
    Ok(solutions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_sheet, extract_dual_graph, Voxel, VoxelModel};

    fn octahedron() -> DualGraph {
        extract_dual_graph(&VoxelModel::from_cells([Voxel::new(0, 0, 0)])).unwrap()
    }

    #[test]
    fn cycle_on_octahedron() {
        let g = octahedron();
        let c = ham_cycle(&g, 1, None).unwrap().found().expect("octahedron has a cycle");
        assert_eq!(c.order.len(), 6);
        assert!(is_valid_cycle(&Subgraph::full(&g).adj, &c.order));
        let brute = brute_force_ham(&Subgraph::full(&g).adj, BruteMode::Cycle).unwrap();
        assert!(!brute.is_empty());
    }

    #[test]
    fn cycle_on_2x3_sheet() {
        let g = build_sheet(2, 3).unwrap();
        let c = ham_cycle(&g, 7, None).unwrap().found().expect("2x3 sheet has a cycle");
        assert_eq!(c.order.len(), 6);
    }

    #[test]
    fn no_cycle_on_3x3_sheet() {
        let g = build_sheet(3, 3).unwrap();
        assert_eq!(ham_cycle(&g, 0, None).unwrap(), SearchResult::Proven);
        let brute = brute_force_ham(&Subgraph::full(&g).adj, BruteMode::Cycle).unwrap();
        assert!(brute.is_empty());
    }

    #[test]
    fn cycle_break_examples() {
        let c = HamiltonianCycle { order: vec![0, 1, 2, 3] };
        assert_eq!(ham_path_from_cycle(&c, 3).unwrap().order, vec![0, 1, 2, 3]);
        assert_eq!(ham_path_from_cycle(&c, 1).unwrap().order, vec![2, 3, 0, 1]);
        assert!(ham_path_from_cycle(&c, 4).is_err());
    }

    #[test]
    fn all_breaks_give_distinct_valid_paths() {
        let g = build_sheet(2, 3).unwrap();
        let adj = Subgraph::full(&g).adj;
        let c = ham_cycle(&g, 3, None).unwrap().found().unwrap();
        let mut seen = std::collections::HashSet::new();
        for i in 0..c.order.len() {
            let p = ham_path_from_cycle(&c, i).unwrap();
            assert!(is_valid_path(&adj, &p.order));
            assert!(seen.insert(p.order));
        }
        assert_eq!(seen.len(), c.order.len());
    }

    #[test]
    fn constrained_two_node_path() {
        let g = build_sheet(1, 2).unwrap();
        let sub = Subgraph::full(&g);
        let cons = Constraints { start: Some(1), positions: vec![] };
        let p = ham_path_constrained(&sub, &cons, 0, None).unwrap().found().unwrap();
        assert_eq!(p.order, vec![1, 0]);
    }

    #[test]
    fn infeasible_consecutive_constraint() {
        // cells 0 and 2 of a 1x3 strip are not adjacent
        let g = build_sheet(1, 3).unwrap();
        let sub = Subgraph::full(&g);
        let cons = Constraints { start: None, positions: vec![(0, 0), (1, 2)] };
        assert_eq!(ham_path_constrained(&sub, &cons, 0, None).unwrap(), SearchResult::Proven);
    }

    #[test]
    fn quadrant_path_is_valid() {
        let g = build_sheet(12, 12).unwrap();
        let quadrant: Vec<u32> = (0..144u32)
            .filter(|&n| (n / 12) < 6 && (n % 12) < 6)
            .collect();
        let sub = Subgraph::induced(&g, &quadrant);
        assert_eq!(sub.len(), 36);
        let p = ham_path_constrained(&sub, &Constraints::default(), 11, None)
            .unwrap()
            .found()
            .expect("6x6 quadrant has a path");
        assert_eq!(p.order.len(), 36);
        let local: Vec<u32> = p.order.iter().map(|&g_| sub.to_local(g_).unwrap()).collect();
        assert!(is_valid_path(&sub.adj, &local));
    }

    #[test]
    fn determinism_per_seed() {
        let g = build_sheet(4, 4).unwrap();
        let sub = Subgraph::full(&g);
        let a = ham_path_constrained(&sub, &Constraints::default(), 42, None).unwrap();
        let b = ham_path_constrained(&sub, &Constraints::default(), 42, None).unwrap();
        assert_eq!(a, b);
        let c1 = ham_cycle(&g, 5, None).unwrap();
        let c2 = ham_cycle(&g, 5, None).unwrap();
        assert_eq!(c1, c2);
    }

    #[test]
    fn brute_force_examples() {
        let g = build_sheet(2, 2).unwrap();
        let cycles = brute_force_ham(&Subgraph::full(&g).adj, BruteMode::Cycle).unwrap();
        assert_eq!(cycles.len(), 1);

        let single = brute_force_ham(&[vec![]], BruteMode::Path).unwrap();
        assert_eq!(single, vec![vec![0]]);

        let strip = build_sheet(1, 4).unwrap();
        let none = brute_force_ham(&Subgraph::full(&strip).adj, BruteMode::Cycle).unwrap();
        assert!(none.is_empty());

        assert!(brute_force_ham(&vec![vec![]; 13], BruteMode::Path).is_err());
    }

    fn connected_subsets(n: usize, adj: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            let nodes: Vec<u32> = (0..n as u32).filter(|&i| mask & (1 << i) != 0).collect();
            let idx = |g: u32| nodes.iter().position(|&x| x == g).map(|i| i as u32);
            let sub_adj: Vec<Vec<u32>> = nodes
                .iter()
                .map(|&g| adj[g as usize].iter().filter_map(|&o| idx(o)).collect())
                .collect();
            if connected(&sub_adj) {
                out.push(nodes);
            }
        }
        out
    }

    #[test]
    fn solver_matches_brute_force_on_sheet_3x4_subgraphs() {
        let g = build_sheet(3, 4).unwrap();
        solver_matches_brute_force(&g);
    }

    #[test]
    fn solver_matches_brute_force_on_octahedron_subgraphs() {
        solver_matches_brute_force(&octahedron());
    }

    fn solver_matches_brute_force(g: &DualGraph) {
        let full = Subgraph::full(g);
        for nodes in connected_subsets(full.len(), &full.adj) {
            let sub = Subgraph::induced(g, &nodes);
            let brute_paths = brute_force_ham(&sub.adj, BruteMode::Path).unwrap();
            let solver = ham_path_constrained(&sub, &Constraints::default(), 9, None).unwrap();
            assert_eq!(
                solver.is_found(),
                !brute_paths.is_empty(),
                "path feasibility mismatch on {nodes:?}"
            );
            if nodes.len() >= 3 {
                let brute_cycles = brute_force_ham(&sub.adj, BruteMode::Cycle).unwrap();
                let solver_cycle = solve_cycle_on_subgraph(&sub);
                assert_eq!(
                    solver_cycle,
                    !brute_cycles.is_empty(),
                    "cycle feasibility mismatch on {nodes:?}"
                );
            }
        }
    }

    fn solve_cycle_on_subgraph(sub: &Subgraph) -> bool {
        if let Some((c0, c1)) = bipartition_sizes(&sub.adj) {
            if c0 != c1 {
                return false;
            }
        }
        let required = vec![u32::MAX; sub.len()];
        matches!(
            solve(&sub.adj, Mode::Cycle, required, 9, default_budget(sub.len())),
            SearchResult::Found(_)
        )
    }
}
