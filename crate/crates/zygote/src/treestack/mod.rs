//! Stacking the partitioned surface into piles and assembling the coded
//! sequence.
//!
//! Each pile stacks its panels along a Hamiltonian path of its subgraph.
//! Piles are processed outward from the reference pile: a child pile's path
//! is locally optimized until some stack height carries a dual-graph edge to
//! its parent pile whose parent-side slot actually faces the child across
//! the grid seam. One such height becomes a bridge hinge; the whole pile is
//! spun so the bridge side lines up. When two bridges are needed to free a
//! blocked side, the pile's own hinge between them is broken so the hinge
//! set stays a tree: paths + bridges - breaks = spanning tree.

mod format;
mod stacking;

pub use format::{parse_sequence, write_sequence};
pub use stacking::{dir_between, opposite_dir, GridDir, StackOrientation};

use crate::error::{Error, Result, Stage};
use crate::foldsim;
use crate::geometry::{DualGraph, FoldAngle};
use crate::hamilton::{ham_path_constrained, Constraints, SearchResult, Subgraph};
use crate::layout::{build_hypergraph, optimal_placements, parent_tree, PilePlacement, PileParentTree};
use crate::partition::balanced_partition;
use crate::seed::sub_seed;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashSet};

/// Stacking order of one pile: `path[x-1]` sits at height x, bottom = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PileOrder {
    pub pile: u32,
    pub path: Vec<u32>,
    /// Whether the bottom panel lies face-down.
    pub flip: bool,
}

/// A pile whose stacked orientation is pinned.
#[derive(Clone, Debug)]
pub struct ResolvedPile {
    pub order: PileOrder,
    /// Orientation of the panel at each height (index = height - 1).
    pub orients: Vec<StackOrientation>,
    pub cell: (i64, i64),
}

/// Heights (1-based, ascending) where a pile can bridge to its parent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchVector {
    pub heights: Vec<usize>,
}

/// An inter-pile hinge at one stack height.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bridge {
    pub height: usize,
    pub parent_node: u32,
    pub child_node: u32,
    pub parent_side: u8,
    pub child_side: u8,
}

/// Side slots already taken by committed hinges.
pub type UsedSides = HashSet<(u32, u8)>;

/// Does the dual graph join the two piles' panels at height `x`?
pub fn f_match(g: &DualGraph, child_path: &[u32], parent_path: &[u32], x: usize) -> Result<bool> {
    if x < 1 || x > child_path.len().min(parent_path.len()) {
        return Err(Error::Contract(format!("height {x} out of range")));
    }
    Ok(g.edge_between(child_path[x - 1], parent_path[x - 1]).is_some())
}

/// Is the matched edge at height `x` geometrically usable as a bridge?
///
/// The parent panel's slot on that edge must face the child pile across the
/// seam (a slot turned away is occupied by the pile's own fold at that
/// spot), and neither slot may already carry a committed hinge.
pub fn f_geo_match(
    g: &DualGraph,
    child_path: &[u32],
    parent: &ResolvedPile,
    x: usize,
    seam_to_child: GridDir,
    used: &UsedSides,
) -> Result<bool> {
    let parent_path = &parent.order.path;
    if !f_match(g, child_path, parent_path, x)? {
        return Err(Error::Contract(format!("no dual edge at height {x}")));
    }
    let (vc, vp) = (child_path[x - 1], parent_path[x - 1]);
    let e = g.edge_between(vc, vp).unwrap();
    let parent_side = e.side_of(vp);
    let child_side = e.side_of(vc);
    if parent.orients[x - 1].side_dir(parent_side) != seam_to_child {
        return Ok(false);
    }
    if used.contains(&(vp, parent_side)) || used.contains(&(vc, child_side)) {
        return Ok(false);
    }
    Ok(true)
}

/// All heights where both match functions pass, ascending.
pub fn match_vector(
    g: &DualGraph,
    child_path: &[u32],
    parent: &ResolvedPile,
    seam_to_child: GridDir,
    used: &UsedSides,
) -> MatchVector {
    let h = child_path.len().min(parent.order.path.len());
    let mut heights = Vec::new();
    for x in 1..=h {
        if f_match(g, child_path, &parent.order.path, x).unwrap()
            && f_geo_match(g, child_path, parent, x, seam_to_child, used).unwrap()
        {
            heights.push(x);
        }
    }
    MatchVector { heights }
}

fn chain_orientations(g: &DualGraph, path: &[u32], base: StackOrientation) -> Vec<StackOrientation> {
    let mut out = Vec::with_capacity(path.len());
    out.push(base);
    for w in path.windows(2) {
        let e = g.edge_between(w[0], w[1]).expect("consecutive pile panels must share a dual edge");
        let next = out.last().unwrap().fold_over(e.side_of(w[0]), e.side_of(w[1]));
        out.push(next);
    }
    out
}

/// Local-search budget: proposals per pile.
const PILE_SEARCH_MOVES: usize = 1000;

/// Find a stacking path for a pile that can bridge to its already-fixed
/// parent, maximizing the number of bridgeable heights.
///
/// Starts from a plain Hamiltonian path and hill-climbs with segment
/// reversals (end extensions are the single-ended case). Deterministic per
/// seed. Fails with `PileUnbridgeable` when no explored path reaches a
/// single bridgeable height.
/// Search budget for one pile's stacking path; restarts come cheaper than
/// deep dives on a single ordering.
fn pile_path_budget(n: usize) -> u64 {
    400 * n as u64 + 20_000
}

pub fn optimize_pile_path(
    g: &DualGraph,
    sub: &Subgraph,
    pile: u32,
    parent: &ResolvedPile,
    seam_to_child: GridDir,
    used: &UsedSides,
    seed: u64,
) -> Result<(PileOrder, MatchVector)> {
    let budget = Some(pile_path_budget(sub.len()));
    let initial = match ham_path_constrained(sub, &Constraints::default(), sub_seed(seed, 0), budget)? {
        SearchResult::Found(p) => p.order,
        SearchResult::Proven => {
            return Err(Error::Infeasible(format!("pile {pile} subgraph has no stacking path")))
        }
        SearchResult::Budget => {
            return Err(Error::BudgetExhausted { expansions: 0 })
        }
    };

    let h = initial.len().min(parent.order.path.len());
    // Bridgeable nodes per height, fixed while this pile is searched.
    let mut good: Vec<Vec<u32>> = vec![Vec::new(); h];
    for (xi, slot) in good.iter_mut().enumerate() {
        let vp = parent.order.path[xi];
        for e in g.neighbors(vp) {
            let other = e.other(vp);
            if sub.to_local(other).is_none() {
                continue;
            }
            let parent_side = e.side_of(vp);
            if parent.orients[xi].side_dir(parent_side) != seam_to_child {
                continue;
            }
            if used.contains(&(vp, parent_side)) || used.contains(&(other, e.side_of(other))) {
                continue;
            }
            slot.push(other);
        }
        slot.sort_unstable();
    }
    let score = |path: &[u32]| -> usize {
        good.iter()
            .enumerate()
            .filter(|(xi, s)| s.binary_search(&path[*xi]).is_ok())
            .count()
    };
    let open_heights: Vec<usize> = (0..h).filter(|&xi| !good[xi].is_empty()).collect();
    if open_heights.is_empty() {
        return Err(Error::PileUnbridgeable { pile: pile as usize });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, 1));
    let mut current = initial;
    let n = current.len();
    let mut pos = vec![0usize; sub.len()];
    let reindex = |path: &[u32], pos: &mut [usize]| {
        for (i, &node) in path.iter().enumerate() {
            pos[sub.to_local(node).unwrap() as usize] = i;
        }
    };
    reindex(&current, &mut pos);
    let mut current_score = score(&current);
    let mut best = current.clone();
    let mut best_score = current_score;

    let budget = PILE_SEARCH_MOVES.max(2 * n);
    if n >= 2 {
        for step in 0..budget {
            // Alternate blind reversals with ones aimed at carrying a
            // bridgeable node onto an unmatched height.
            let (i, j) = if step % 2 == 0 {
                let i = rng.random_range(0..n - 1);
                let j = rng.random_range(i + 1..n);
                (i, j)
            } else {
                let xi = open_heights[rng.random_range(0..open_heights.len())];
                if good[xi].binary_search(&current[xi]).is_ok() {
                    continue;
                }
                let u = good[xi][rng.random_range(0..good[xi].len())];
                let p = pos[sub.to_local(u).unwrap() as usize];
                // Reversing [i..=j] maps position p to i + j - p = xi.
                let sum = p + xi;
                let lo = sum.saturating_sub(n - 1);
                let hi = p.min(xi);
                if lo > hi {
                    continue;
                }
                let i = rng.random_range(lo..=hi);
                let j = sum - i;
                if i >= j || j >= n {
                    continue;
                }
                (i, j)
            };
            let head_ok = i == 0 || g.edge_between(current[i - 1], current[j]).is_some();
            let tail_ok = j == n - 1 || g.edge_between(current[i], current[j + 1]).is_some();
            if !head_ok || !tail_ok {
                continue;
            }
            current[i..=j].reverse();
            let s = score(&current);
            if s >= current_score {
                current_score = s;
                for (k, &node) in current.iter().enumerate().skip(i).take(j - i + 1) {
                    pos[sub.to_local(node).unwrap() as usize] = k;
                }
                if s > best_score {
                    best_score = s;
                    best = current.clone();
                }
            } else {
                current[i..=j].reverse();
            }
        }
    }

    if best_score < 1 {
        return Err(Error::PileUnbridgeable { pile: pile as usize });
    }
    let order = PileOrder { pile, path: best.clone(), flip: false };
    let xvec = match_vector(g, &best, parent, seam_to_child, used);
    debug_assert_eq!(xvec.heights.len(), best_score);
    Ok((order, xvec))
}

/// What `resolve_bridges` settles on: the bridges to the parent, the pile
/// hinges broken to keep the tree, and the fully oriented pile.
pub type BridgePlan = (Vec<Bridge>, Vec<(u32, u32)>, ResolvedPile);

/// Pick bridges, breaks, and the pile's stacked orientation from its match
/// vector.
///
/// A single bridge suffices whenever its two slots are free: the pile is
/// spun so the bridge side faces the parent, and the bottom panel's face is
/// set by the parent's face at that height. Interior heights are preferred
/// so the bridge panel keeps both its pile hinges (a high-degree panel).
/// When a single bridge is blocked, two consecutive matched heights are
/// bridged and the pile hinge between them broken; the two segments then
/// spin independently.
pub fn resolve_bridges(
    g: &DualGraph,
    order: &PileOrder,
    xvec: &MatchVector,
    parent: &ResolvedPile,
    seam_from_parent: GridDir,
    cell: (i64, i64),
    used: &UsedSides,
) -> Result<BridgePlan> {
    if xvec.heights.is_empty() {
        return Err(Error::Contract("resolve_bridges needs a non-empty match vector".into()));
    }
    let path = &order.path;
    let h = path.len();
    let seam_to_parent = opposite_dir(seam_from_parent);

    // The bridge lies flat, so faces pair up at the bridge height; the
    // alternation fixes the bottom face once for the whole pile.
    let x0 = xvec.heights[0];
    let flip = parent.orients[x0 - 1].face_down ^ ((x0 - 1) % 2 == 1);
    let base = chain_orientations(g, path, StackOrientation::new(0, flip));

    let bridge_at = |x: usize| -> Bridge {
        let (vc, vp) = (path[x - 1], parent.order.path[x - 1]);
        let e = g.edge_between(vc, vp).unwrap();
        Bridge {
            height: x,
            parent_node: vp,
            child_node: vc,
            parent_side: e.side_of(vp),
            child_side: e.side_of(vc),
        }
    };
    let spin_fix = |x: usize, b: &Bridge| -> u8 {
        (seam_to_parent + 4 - base[x - 1].side_dir(b.child_side)) % 4
    };
    let slots_free = |b: &Bridge, extra: Option<&Bridge>| -> bool {
        let mut ok = !used.contains(&(b.parent_node, b.parent_side))
            && !used.contains(&(b.child_node, b.child_side));
        if let Some(e) = extra {
            ok = ok
                && (b.parent_node, b.parent_side) != (e.parent_node, e.parent_side)
                && (b.child_node, b.child_side) != (e.child_node, e.child_side);
        }
        ok
    };

    // Single bridge, interior heights first so the pile gets a panel with
    // three hinges.
    let mut candidates: Vec<usize> =
        xvec.heights.iter().copied().filter(|&x| x > 1 && x < h).collect();
    candidates.extend(xvec.heights.iter().copied().filter(|&x| x == 1 || x == h));
    for x in candidates {
        let b = bridge_at(x);
        if !slots_free(&b, None) {
            continue;
        }
        let rho = spin_fix(x, &b);
        let orients: Vec<StackOrientation> = base.iter().map(|o| o.rotated(rho)).collect();
        debug_assert_eq!(orients[x - 1].side_dir(b.child_side), seam_to_parent);
        let resolved = ResolvedPile {
            order: PileOrder { flip, ..order.clone() },
            orients,
            cell,
        };
        return Ok((vec![b], vec![], resolved));
    }

    // Bridge two consecutive matched heights and break the pile hinge
    // between them; each segment spins to suit its own bridge.
    for w in xvec.heights.windows(2) {
        let (x, y) = (w[0], w[1]);
        if y != x + 1 {
            continue;
        }
        let (ba, bb) = (bridge_at(x), bridge_at(y));
        if !slots_free(&ba, Some(&bb)) || !slots_free(&bb, None) {
            continue;
        }
        let (ra, rb) = (spin_fix(x, &ba), spin_fix(y, &bb));
        let orients: Vec<StackOrientation> = base
            .iter()
            .enumerate()
            .map(|(i, o)| if i < x { o.rotated(ra) } else { o.rotated(rb) })
            .collect();
        let broken = (path[x - 1].min(path[y - 1]), path[x - 1].max(path[y - 1]));
        let resolved = ResolvedPile {
            order: PileOrder { flip, ..order.clone() },
            orients,
            cell,
        };
        return Ok((vec![ba, bb], vec![broken], resolved));
    }

    Err(Error::PileUnbridgeable { pile: order.pile as usize })
}

/// Role of a hinge in the coded sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HingeRole {
    /// Joins consecutive heights within one pile.
    Pile,
    /// Joins equal heights of two adjacent piles.
    Bridge,
}

/// One hinge of the spanning tree, directed away from the root panel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hinge {
    pub parent: u32,
    pub child: u32,
    pub parent_side: u8,
    pub child_side: u8,
    pub angle: FoldAngle,
    pub role: HingeRole,
}

/// Stacked placement of one panel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PanelRecord {
    pub pile: u32,
    pub height: u32,
    pub flip: bool,
}

/// The full coded sequence: everything needed to build the zygote stack or
/// deploy it back into the target shape.
#[derive(Clone, Debug, PartialEq)]
pub struct CodedSequence {
    pub panel_count: usize,
    pub pile_count: usize,
    /// pile id -> grid cell (row, col), normalized to start at (0, 0).
    pub footprint: Vec<(i64, i64)>,
    /// panel id -> stacked placement.
    pub panels: Vec<PanelRecord>,
    /// Spanning tree, sorted by (parent, child).
    pub hinges: Vec<Hinge>,
    /// Removed intra-pile path edges, sorted, each as (low id, high id).
    pub breaks: Vec<(u32, u32)>,
}

impl CodedSequence {
    pub fn pile_height(&self) -> usize {
        self.panel_count / self.pile_count
    }

    /// The panel that never appears as a hinge child.
    pub fn root(&self) -> u32 {
        let mut is_child = vec![false; self.panel_count];
        for h in &self.hinges {
            is_child[h.child as usize] = true;
        }
        (0..self.panel_count as u32)
            .find(|&n| !is_child[n as usize])
            .expect("a spanning tree has a root")
    }

    pub fn bridge_count(&self) -> usize {
        self.hinges.iter().filter(|h| h.role == HingeRole::Bridge).count()
    }

    /// Hinge degree of every panel.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.panel_count];
        for h in &self.hinges {
            d[h.parent as usize] += 1;
            d[h.child as usize] += 1;
        }
        d
    }

    /// Structural invariants: spanning tree of N-1 hinges, exclusive side
    /// slots, contiguous equal pile heights, and the bridge/break balance.
    pub fn validate(&self) -> Result<()> {
        let n = self.panel_count;
        let k = self.pile_count;
        if n == 0 || k == 0 || !n.is_multiple_of(k) {
            return Err(Error::Assembly(format!("bad counts N={n} K={k}")));
        }
        if self.footprint.len() != k || self.panels.len() != n {
            return Err(Error::Assembly("record counts do not match header".into()));
        }
        if self.hinges.len() != n - 1 {
            return Err(Error::Assembly(format!("{} hinges for {n} panels", self.hinges.len())));
        }

        let mut sides = HashSet::new();
        for h in &self.hinges {
            for key in [(h.parent, h.parent_side), (h.child, h.child_side)] {
                if !sides.insert(key) {
                    return Err(Error::Assembly(format!(
                        "panel {} side {} hosts two hinges", key.0, key.1
                    )));
                }
            }
        }

        // Connectivity via union-find; with n-1 edges this implies a tree.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            if p[i] != i {
                let r = find(p, p[i]);
                p[i] = r;
            }
            p[i]
        }
        for h in &self.hinges {
            let (a, b) = (find(&mut parent, h.parent as usize), find(&mut parent, h.child as usize));
            if a == b {
                return Err(Error::Assembly("hinge set contains a cycle".into()));
            }
            parent[a] = b;
        }

        let target = n / k;
        let mut seen = vec![vec![false; target]; k];
        for (id, p) in self.panels.iter().enumerate() {
            if p.pile as usize >= k || p.height as usize == 0 || p.height as usize > target {
                return Err(Error::Assembly(format!("panel {id} has bad pile/height")));
            }
            let slot = &mut seen[p.pile as usize][p.height as usize - 1];
            if *slot {
                return Err(Error::Assembly(format!(
                    "pile {} height {} assigned twice", p.pile, p.height
                )));
            }
            *slot = true;
        }

        let bridges = self.bridge_count();
        if bridges != self.breaks.len() + (k - 1) {
            return Err(Error::Assembly(format!(
                "{} bridges and {} breaks do not net K-1 = {}",
                bridges,
                self.breaks.len(),
                k - 1
            )));
        }

        // Every pile except the root's own must hang off at least one bridge.
        let root_pile = self.panels[self.root() as usize].pile;
        let mut has_bridge = vec![false; k];
        for h in &self.hinges {
            if h.role == HingeRole::Bridge {
                has_bridge[self.panels[h.parent as usize].pile as usize] = true;
                has_bridge[self.panels[h.child as usize].pile as usize] = true;
            }
        }
        for pile in 0..k as u32 {
            if pile != root_pile && !has_bridge[pile as usize] {
                return Err(Error::Assembly(format!("pile {pile} has no bridge")));
            }
        }
        Ok(())
    }
}

/// Assemble pile paths, bridges, and breaks into a coded sequence rooted at
/// the reference pile's bottom panel.
pub fn assemble_tree(
    g: &DualGraph,
    placement: &PilePlacement,
    tree: &PileParentTree,
    piles: &[ResolvedPile],
    bridges: &[Bridge],
    breaks: &[(u32, u32)],
) -> Result<CodedSequence> {
    let n = g.node_count();
    let k = piles.len();
    let broken: HashSet<(u32, u32)> = breaks.iter().copied().collect();

    // Undirected hinge set: pile paths minus breaks, plus bridges.
    let mut undirected: Vec<(u32, u32, HingeRole)> = Vec::with_capacity(n - 1);
    for pile in piles {
        for w in pile.order.path.windows(2) {
            let key = (w[0].min(w[1]), w[0].max(w[1]));
            if !broken.contains(&key) {
                undirected.push((w[0], w[1], HingeRole::Pile));
            }
        }
    }
    for b in bridges {
        undirected.push((b.parent_node, b.child_node, HingeRole::Bridge));
    }
    if undirected.len() != n - 1 {
        return Err(Error::Assembly(format!(
            "{} hinges for {n} panels before rooting", undirected.len()
        )));
    }

    // Root and direct the tree.
    let mut adj: Vec<Vec<(u32, usize)>> = vec![Vec::new(); n];
    for (i, &(a, b, _)) in undirected.iter().enumerate() {
        adj[a as usize].push((b, i));
        adj[b as usize].push((a, i));
    }
    let root = piles[tree.reference as usize].order.path[0];
    let mut visited = vec![false; n];
    let mut hinges = Vec::with_capacity(n - 1);
    let mut queue = std::collections::VecDeque::from([root]);
    visited[root as usize] = true;
    let mut reached = 0usize;
    while let Some(v) = queue.pop_front() {
        reached += 1;
        for &(o, ei) in &adj[v as usize] {
            if visited[o as usize] {
                continue;
            }
            visited[o as usize] = true;
            let (_, _, role) = undirected[ei];
            let e = g
                .edge_between(v, o)
                .ok_or_else(|| Error::Assembly(format!("hinge {v}-{o} is not a dual edge")))?;
            hinges.push(Hinge {
                parent: v,
                child: o,
                parent_side: e.side_of(v),
                child_side: e.side_of(o),
                angle: e.angle,
                role,
            });
            queue.push_back(o);
        }
    }
    if reached != n {
        return Err(Error::Assembly("hinge set is disconnected".into()));
    }
    hinges.sort_by_key(|h| (h.parent, h.child));

    let mut panels = vec![PanelRecord { pile: 0, height: 0, flip: false }; n];
    for pile in piles {
        for (i, &node) in pile.order.path.iter().enumerate() {
            panels[node as usize] = PanelRecord {
                pile: pile.order.pile,
                height: (i + 1) as u32,
                flip: pile.orients[i].face_down,
            };
        }
    }

    let mut sorted_breaks: Vec<(u32, u32)> = breaks.to_vec();
    sorted_breaks.sort_unstable();

    let cs = CodedSequence {
        panel_count: n,
        pile_count: k,
        footprint: placement.cell.clone(),
        panels,
        hinges,
        breaks: sorted_breaks,
    };
    cs.validate()?;
    Ok(cs)
}

/// Retries of path search + bridge resolution per pile before the whole
/// attempt restarts.
const PILE_TRIES: u64 = 6;
/// Partition restarts folded into each pipeline attempt.
const PARTITION_TRIES: u32 = 60;
/// Co-optimal placements kept per partition.
const CO_OPTIMAL_PLACEMENTS: usize = 4;

/// The eight dihedral images of a placement, identity first.
///
/// Every image realizes the same crossing weight, so all are co-optimal;
/// they differ in how the abstract grid lines up with the reference pile's
/// fold directions, which decides whether bridges can face their seams.
fn placement_images(p: &PilePlacement) -> Vec<PilePlacement> {
    let mut out: Vec<PilePlacement> = Vec::with_capacity(8);
    for transform in 0..8u8 {
        let mut cells: Vec<(i64, i64)> = p
            .cell
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
        let r0 = cells.iter().map(|c| c.0).min().unwrap();
        let c0 = cells.iter().map(|c| c.1).min().unwrap();
        for cell in &mut cells {
            *cell = (cell.0 - r0, cell.1 - c0);
        }
        if out.iter().any(|q| q.cell == cells) {
            continue;
        }
        out.push(PilePlacement {
            cell: cells,
            realized: p.realized.clone(),
            realized_weight: p.realized_weight,
        });
    }
    out
}

enum AttemptOutcome {
    Done(Box<CodedSequence>),
    Retry,
    /// A pile subgraph has no stacking path at all; only a new partition
    /// can help, so skip the remaining placement images.
    Doomed,
}

/// What the pipeline went through: attempts consumed and per-stage failure
/// counts across all restarts.
#[derive(Clone, Debug, Default)]
pub struct PipelineTrace {
    pub attempts: u32,
    pub failures: BTreeMap<Stage, u32>,
}

/// End-to-end: partition, place, order piles, bridge, assemble, verify.
///
/// Deterministic per (graph, K, seed). Any stage failure restarts the whole
/// pipeline under a derived sub-seed, up to `max_restarts`; the terminal
/// error carries a histogram of which stage failed how often.
pub fn stack_pipeline(g: &DualGraph, k: usize, seed: u64, max_restarts: u32) -> Result<CodedSequence> {
    stack_pipeline_traced(g, k, seed, max_restarts).0
}

/// `stack_pipeline` plus the restart bookkeeping, for run logs.
pub fn stack_pipeline_traced(
    g: &DualGraph,
    k: usize,
    seed: u64,
    max_restarts: u32,
) -> (Result<CodedSequence>, PipelineTrace) {
    let n = g.node_count();
    let early = |e: Error| (Err(e), PipelineTrace::default());
    if k == 0 {
        return early(Error::Contract("pile count must be at least 1".into()));
    }
    if k > 8 {
        return early(Error::PlacementLimit(k));
    }
    if n == 0 {
        return early(Error::EmptyModel);
    }
    if !n.is_multiple_of(k) {
        return early(Error::NotDivisible { panels: n, piles: k });
    }

    let mut failures: BTreeMap<Stage, u32> = BTreeMap::new();
    let fail = |failures: &mut BTreeMap<Stage, u32>, stage: Stage| {
        *failures.entry(stage).or_insert(0) += 1;
    };

    for attempt in 0..max_restarts.max(1) {
        let aseed = sub_seed(seed, attempt as u64);

        let partition = match balanced_partition(g, k, sub_seed(aseed, 1), PARTITION_TRIES) {
            Ok(p) => p,
            Err(_) => {
                fail(&mut failures, Stage::Partition);
                continue;
            }
        };

        let hyper = build_hypergraph(g, &partition);
        let placements = match optimal_placements(&hyper, CO_OPTIMAL_PLACEMENTS) {
            Ok(p) => p,
            Err(e) => return (Err(e), PipelineTrace { attempts: attempt + 1, failures }),
        };

        // Co-optimal placements and their dihedral images all realize the
        // same crossing weight; which one lines up with the reference
        // pile's fold directions decides whether every child can face its
        // seam, so fall through them before discarding the partition.
        'placements: for placement in &placements {
            let tree = match parent_tree(&hyper, placement, 0) {
                Ok(t) => t,
                Err(_) => {
                    fail(&mut failures, Stage::ParentTree);
                    continue;
                }
            };
            for placement in placement_images(placement) {
                match run_attempt(g, &partition, &placement, &tree, aseed, &mut failures) {
                    AttemptOutcome::Done(cs) => {
                        // Round-trip soundness before anything leaves the pipeline.
                        let deployed = match foldsim::deploy_poses(&cs, foldsim::DeployMode::Deployed) {
                            Ok(d) => d,
                            Err(_) => {
                                fail(&mut failures, Stage::FoldCheck);
                                continue;
                            }
                        };
                        let verify = foldsim::verify_deployed(&deployed, g);
                        let stacked = foldsim::stacked_layout(&cs);
                        if !verify.ok || stacked.conflict_count() > 0 {
                            fail(&mut failures, Stage::FoldCheck);
                            continue;
                        }
                        return (Ok(*cs), PipelineTrace { attempts: attempt + 1, failures });
                    }
                    AttemptOutcome::Retry => continue,
                    AttemptOutcome::Doomed => break 'placements,
                }
            }
        }
    }
    let trace = PipelineTrace { attempts: max_restarts, failures: failures.clone() };
    (Err(Error::SearchExhausted { attempts: max_restarts, failures }), trace)
}

fn run_attempt(
    g: &DualGraph,
    partition: &crate::partition::BalancedPartition,
    placement: &PilePlacement,
    tree: &PileParentTree,
    aseed: u64,
    failures: &mut BTreeMap<Stage, u32>,
) -> AttemptOutcome {
    let k = partition.k;
    let fail = |failures: &mut BTreeMap<Stage, u32>, stage: Stage| {
        *failures.entry(stage).or_insert(0) += 1;
    };

    let mut resolved: Vec<Option<ResolvedPile>> = vec![None; k];
    let mut used: UsedSides = HashSet::new();
    let mut bridges: Vec<Bridge> = Vec::new();
    let mut breaks: Vec<(u32, u32)> = Vec::new();

    // Reference pile: any stacking path, face-up, spin 0.
    let ref_pile = tree.reference;
    let ref_sub = Subgraph::induced(g, &partition.part_nodes(ref_pile));
    let ref_budget = Some(pile_path_budget(ref_sub.len()));
    let ref_path = match ham_path_constrained(&ref_sub, &Constraints::default(), sub_seed(aseed, 10), ref_budget)
    {
        Ok(SearchResult::Found(p)) => p.order,
        Ok(SearchResult::Proven) => {
            fail(failures, Stage::PilePath);
            return AttemptOutcome::Doomed;
        }
        Ok(SearchResult::Budget) | Err(_) => {
            fail(failures, Stage::PilePath);
            return AttemptOutcome::Retry;
        }
    };
    let ref_orients = chain_orientations(g, &ref_path, StackOrientation::new(0, false));
    commit_pile_sides(g, &ref_path, &[], &mut used);
    resolved[ref_pile as usize] = Some(ResolvedPile {
        order: PileOrder { pile: ref_pile, path: ref_path, flip: false },
        orients: ref_orients,
        cell: placement.cell[ref_pile as usize],
    });

    for &pile in tree.order.iter().skip(1) {
        let parent_id = tree.parent[pile as usize];
        let parent = resolved[parent_id as usize]
            .as_ref()
            .cloned()
            .expect("BFS order resolves parents first");
        let seam_to_child =
            dir_between(parent.cell, placement.cell[pile as usize]).expect("parent piles are adjacent");
        let sub = Subgraph::induced(g, &partition.part_nodes(pile));

        let mut done = false;
        for pile_try in 0..PILE_TRIES {
            let pseed = sub_seed(aseed, 100 + pile as u64 * PILE_TRIES + pile_try);
            let (order, xvec) =
                match optimize_pile_path(g, &sub, pile, &parent, seam_to_child, &used, pseed) {
                    Ok(r) => r,
                    Err(Error::PileUnbridgeable { .. }) => {
                        fail(failures, Stage::PileMatch);
                        continue;
                    }
                    Err(Error::Infeasible(_)) => {
                        fail(failures, Stage::PilePath);
                        return AttemptOutcome::Doomed;
                    }
                    Err(_) => {
                        fail(failures, Stage::PilePath);
                        continue;
                    }
                };
            match resolve_bridges(
                g,
                &order,
                &xvec,
                &parent,
                seam_to_child,
                placement.cell[pile as usize],
                &used,
            ) {
                Ok((new_bridges, new_breaks, pile_state)) => {
                    for b in &new_bridges {
                        used.insert((b.parent_node, b.parent_side));
                        used.insert((b.child_node, b.child_side));
                    }
                    commit_pile_sides(g, &pile_state.order.path, &new_breaks, &mut used);
                    bridges.extend(new_bridges);
                    breaks.extend(new_breaks);
                    resolved[pile as usize] = Some(pile_state);
                    done = true;
                    break;
                }
                Err(_) => {
                    fail(failures, Stage::BridgeResolve);
                    continue;
                }
            }
        }
        if !done {
            return AttemptOutcome::Retry;
        }
    }

    let piles: Vec<ResolvedPile> = resolved.into_iter().map(Option::unwrap).collect();
    let cs = match assemble_tree(g, placement, tree, &piles, &bridges, &breaks) {
        Ok(cs) => cs,
        Err(_) => {
            fail(failures, Stage::Assembly);
            return AttemptOutcome::Retry;
        }
    };

    // Restart rule: every non-reference pile must own a high-degree panel.
    let degrees = cs.degrees();
    for pile in 0..k as u32 {
        if pile == tree.reference {
            continue;
        }
        let has_hdn = piles[pile as usize]
            .order
            .path
            .iter()
            .any(|&node| degrees[node as usize] >= 3);
        if !has_hdn {
            fail(failures, Stage::HdnCheck);
            return AttemptOutcome::Retry;
        }
    }
    AttemptOutcome::Done(Box::new(cs))
}

/// Mark the side slots consumed by a pile's surviving path hinges.
fn commit_pile_sides(g: &DualGraph, path: &[u32], breaks: &[(u32, u32)], used: &mut UsedSides) {
    let broken: HashSet<(u32, u32)> = breaks.iter().copied().collect();
    for w in path.windows(2) {
        let key = (w[0].min(w[1]), w[0].max(w[1]));
        if broken.contains(&key) {
            continue;
        }
        let e = g.edge_between(w[0], w[1]).expect("pile path edge");
        used.insert((w[0], e.side_of(w[0])));
        used.insert((w[1], e.side_of(w[1])));
    }
}
