//! Conversion of a torus Reeb graph into a partially cyclically ordered
//! rooted tree (COT).
//!
//! The graph's single cycle is cut on one of the two cycle arcs leaving the
//! lowest cycle saddle. The half of the cut arc attached to that saddle
//! becomes the root `β·₊`, the other half the leaf `β·₋`, and the cycle
//! itself becomes the chain between them.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::cotlang::{self, Sign, Style, Symbol};
use crate::morse::CriticalKind;
use crate::reeb::ReebGraph;
use crate::{Error, Real, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CotNode<T> {
    pub symbol: Symbol,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
    /// Critical value, or the cut value for `β` nodes.
    pub value: Option<T>,
    /// Weight of the edge to the parent.
    pub weight: Option<T>,
    pub reeb_node: Option<usize>,
    /// Pixel of the critical point.
    pub pixel: Option<(usize, usize)>,
    /// The node lies above its parent in `H`.
    pub above_parent: bool,
    /// On the chain between the two `β` nodes.
    pub essential: bool,
    /// Reeb regions merged into the edge to the parent.
    pub regions: Vec<usize>,
    /// Saddle pixels absorbed into that edge by filtering.
    pub absorbed: Vec<(usize, usize)>,
}

impl<T> CotNode<T> {
    pub fn bare(symbol: Symbol, children: Vec<usize>) -> Self {
        Self {
            symbol,
            children,
            parent: None,
            value: None,
            weight: None,
            reeb_node: None,
            pixel: None,
            above_parent: false,
            essential: false,
            regions: Vec::new(),
            absorbed: Vec::new(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CotTree<T> {
    pub nodes: Vec<CotNode<T>>,
    pub root: usize,
}

impl<T> CotTree<T> {
    /// Builds a tree from nodes with child lists, filling in parents.
    pub fn from_nodes(mut nodes: Vec<CotNode<T>>, root: usize) -> Self {
        for k in 0..nodes.len() {
            for c in nodes[k].children.clone() {
                nodes[c].parent = Some(k);
            }
        }
        Self { nodes, root }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn emit(&self, style: Style) -> String {
        cotlang::emit(self, style)
    }

    /// Chain nodes from the root's child down to `β·₋`.
    pub fn chain(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.nodes[self.root].children.first().copied();
        while let Some(n) = cur {
            out.push(n);
            cur = match self.nodes[n].symbol {
                Symbol::A(..) | Symbol::Alpha(..) => Some(self.nodes[n].children[1]),
                _ => None,
            };
        }
        out
    }

    pub fn count(&self, pred: impl Fn(Symbol) -> bool) -> usize {
        self.nodes.iter().filter(|n| pred(n.symbol)).count()
    }

    /// Every sign flipped and the chain read from the other end.
    pub fn involuted(&self) -> Self
    where
        T: Clone,
    {
        self.mirrored(Symbol::flipped)
    }

    /// The tree the same flow yields for `-H` with the same cut orbit: the
    /// chain is read from the other end, every sign flips, and the branch
    /// subscript of `a` symbols keeps its onward sign.
    pub fn negated(&self) -> Self
    where
        T: Clone,
    {
        self.mirrored(|s| match s {
            Symbol::A(b, o) => Symbol::A(b.flip(), o),
            s => s.flipped(),
        })
    }

    fn mirrored(&self, chain_symbol: impl Fn(Symbol) -> Symbol) -> Self
    where
        T: Clone,
    {
        let chain = self.chain();
        let mut nodes: Vec<CotNode<T>> = self.nodes.clone();
        for n in nodes.iter_mut() {
            n.symbol = n.symbol.flipped();
            n.parent = None;
        }
        let (&last, path) = chain.split_last().expect("chain ends in β·₋");
        // old β·₋ becomes the root, old root becomes the terminal β·₋
        let old_root = self.root;
        let mut next = old_root;
        for &n in path {
            nodes[n].symbol = chain_symbol(self.nodes[n].symbol);
            nodes[n].children[1] = next;
            next = n;
        }
        nodes[last].children = vec![next];
        nodes[old_root].children.clear();
        Self::from_nodes(nodes, last)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutChoice<T> {
    /// Reeb node of the lowest saddle on the cycle.
    pub saddle: usize,
    /// Reeb edge that is cut.
    pub edge: usize,
    pub cut_value: T,
    /// Direction walked from the saddle pixel to pick the edge.
    pub shift_axis: Axis,
    /// Canonical homology class of the essential orbits.
    pub winding: (i64, i64),
}

/// Picks the essential orbit to cut along.
pub fn choose_cut<T: Real>(graph: &ReebGraph<T>) -> Result<CutChoice<T>> {
    let inc = graph.incidence();
    let saddle = graph
        .nodes
        .iter()
        .enumerate()
        .filter(|(k, p)| p.kind == CriticalKind::Saddle && inc[*k].iter().any(|&e| graph.edges[e].essential))
        .min_by(|a, b| a.1.value.partial_cmp(&b.1.value).unwrap().then(a.1.index.cmp(&b.1.index)))
        .map(|(k, _)| k)
        .ok_or_else(|| Error::Topology("Reeb graph has no cycle saddle".into()))?;
    let candidates: Vec<usize> = inc[saddle].iter().copied().filter(|&e| graph.edges[e].essential).collect();
    if candidates.len() != 2 || candidates.iter().any(|&e| graph.edges[e].lower != saddle) {
        return Err(Error::Internal(format!("lowest cycle saddle has cycle edges {candidates:?}")));
    }
    let winding = graph.regions[candidates[0]].winding;
    let shift_axis = if winding.0 > 0 { Axis::Y } else { Axis::X };
    let owner = graph.pixel_regions();
    let (i0, j0) = graph.nodes[saddle].pixel;
    let steps = if shift_axis == Axis::Y { graph.ny } else { graph.nx };
    let edge = (1..steps)
        .map(|s| match shift_axis {
            Axis::Y => (j0 + s) % graph.ny * graph.nx + i0,
            Axis::X => j0 * graph.nx + (i0 + s) % graph.nx,
        })
        .find_map(|p| owner[p].filter(|r| candidates.contains(r)))
        .unwrap_or(candidates[0].min(candidates[1]));
    let e = &graph.edges[edge];
    let cut_value = (graph.nodes[e.lower].value + graph.nodes[e.upper].value) * T::lit(0.5);
    Ok(CutChoice { saddle, edge, cut_value, shift_axis, winding })
}

/// Cuts the cycle at `cut` and hangs the graph from the `β·₊` root.
/// Symbols are left as placeholders until [`label_cot`].
pub fn cut_and_root<T: Real>(graph: &ReebGraph<T>, cut: &CutChoice<T>) -> Result<CotTree<T>> {
    let inc = graph.incidence();
    let cut_edge = &graph.edges[cut.edge];
    if cut_edge.lower != cut.saddle || !cut_edge.essential {
        return Err(Error::Argument(format!("edge {} is not a cycle edge above saddle {}", cut.edge, cut.saddle)));
    }
    let value = |n: usize| graph.nodes[n].value;
    let placeholder = Symbol::Sigma(Sign::Plus);

    let mut root = CotNode::bare(Symbol::Beta(Sign::Plus), vec![]);
    root.value = Some(cut.cut_value);
    root.essential = true;
    let mut nodes = vec![root];

    let mut first = CotNode::bare(placeholder, vec![]);
    first.weight = Some(cut.cut_value - value(cut.saddle));
    first.regions.push(cut.edge);
    nodes.push(first);
    nodes[0].children.push(1);

    // (cot node, reeb node, edge it was reached by)
    let mut stack = vec![(1usize, cut.saddle, cut.edge)];
    while let Some((at, x, via)) = stack.pop() {
        let p = &graph.nodes[x];
        nodes[at].value = Some(p.value);
        nodes[at].reeb_node = Some(x);
        nodes[at].pixel = Some(p.pixel);
        nodes[at].essential = graph.edges[via].essential;
        let mut out: Vec<usize> = inc[x].iter().copied().filter(|&e| e != via).collect();
        // branch first, onward second
        out.sort_by_key(|&e| graph.edges[e].essential);
        for e in out {
            let k = nodes.len();
            let mut child;
            if e == cut.edge {
                child = CotNode::bare(Symbol::Beta(Sign::Minus), vec![]);
                child.value = Some(cut.cut_value);
                child.weight = Some(value(x) - cut.cut_value);
                child.essential = true;
            } else {
                let y = graph.edges[e].other(x);
                child = CotNode::bare(placeholder, vec![]);
                child.weight = Some(graph.edges[e].weight);
                child.above_parent = graph.edges[e].upper == y;
                child.regions.push(e);
                stack.push((k, y, e));
            }
            child.parent = Some(at);
            nodes.push(child);
            nodes[at].children.push(k);
        }
    }
    if nodes.len() != graph.nodes.len() + 2 {
        return Err(Error::Internal(format!(
            "rooted tree has {} nodes for {} Reeb nodes",
            nodes.len(),
            graph.nodes.len()
        )));
    }
    Ok(CotTree::from_nodes(nodes, 0))
}

/// Assigns every node its COT symbol from the side each neighbouring domain
/// lies on.
pub fn label_cot<T: Real>(tree: &mut CotTree<T>) -> Result<()> {
    for k in 0..tree.nodes.len() {
        if k == tree.root {
            tree.nodes[k].symbol = Symbol::Beta(Sign::Plus);
            continue;
        }
        let node = &tree.nodes[k];
        let up = Sign::of(node.above_parent);
        if node.children.is_empty() {
            tree.nodes[k].symbol = if node.reeb_node.is_none() { Symbol::Beta(Sign::Minus) } else { Symbol::Sigma(up) };
            continue;
        }
        if node.children.len() != 2 {
            return Err(Error::Internal(format!("saddle node {k} has {} children", node.children.len())));
        }
        let current = up.flip();
        let sides = [0, 1].map(|c| Sign::of(tree.nodes[node.children[c]].above_parent));
        let symbol = if node.essential {
            let (branch, onward) = (sides[0], sides[1]);
            if current == branch && branch == onward {
                return Err(Error::Internal(format!("chain saddle {k} has all domains on one side")));
            }
            if current == onward {
                Symbol::Alpha(branch, onward)
            } else {
                Symbol::A(branch, onward)
            }
        } else if sides[0] == sides[1] {
            if sides[0] == current {
                return Err(Error::Internal(format!("saddle {k} has all domains on one side")));
            }
            Symbol::B(sides[0], sides[1])
        } else {
            // the child on the far side from the parent comes first
            if sides[0] == current {
                tree.nodes[k].children.swap(0, 1);
            }
            Symbol::B(current.flip(), current)
        };
        tree.nodes[k].symbol = symbol;
    }
    Ok(())
}

/// Conversion of a Reeb graph into its labeled COT.
pub fn build_cot<T: Real>(graph: &ReebGraph<T>) -> Result<(CotTree<T>, CutChoice<T>)> {
    let cut = choose_cut(graph)?;
    let mut tree = cut_and_root(graph, &cut)?;
    label_cot(&mut tree)?;
    Ok((tree, cut))
}

#[derive(Clone, Copy)]
struct Key(f64, usize);

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Removes small terminal vortices.
///
/// The lightest removable `σ` leaf whose edge weight is at most `eps` is
/// cancelled with its parent saddle, and the saddle's other child takes the
/// saddle's place. A leaf is removable when the saddle's remaining two
/// domains lie on opposite sides of it, so the cancellation leaves every
/// other symbol unchanged. Repeats until no leaf qualifies.
pub fn filter_cot<T: Real>(tree: &CotTree<T>, eps: T) -> CotTree<T> {
    let mut nodes = tree.nodes.clone();
    let mut alive = vec![true; nodes.len()];
    let weight = |n: &CotNode<T>| n.weight.map_or(f64::INFINITY, |w| w.as_f64());
    let mut heap: BinaryHeap<Reverse<Key>> = nodes
        .iter()
        .enumerate()
        .filter(|(_, n)| matches!(n.symbol, Symbol::Sigma(_)))
        .map(|(k, n)| Reverse(Key(weight(n), k)))
        .collect();
    let eps = eps.as_f64();
    while let Some(Reverse(Key(w, leaf))) = heap.pop() {
        if w > eps {
            break;
        }
        if !alive[leaf] || weight(&nodes[leaf]) != w {
            continue;
        }
        let Some(s) = nodes[leaf].parent else { continue };
        let Some(g) = nodes[s].parent else { continue };
        let Some(&other) = nodes[s].children.iter().find(|&&c| c != leaf) else { continue };
        // the parent and sibling domains must lie on opposite sides of the saddle
        if nodes[s].above_parent != nodes[other].above_parent {
            continue;
        }
        let slot = nodes[g].children.iter().position(|&c| c == s).expect("child of its parent");
        nodes[g].children[slot] = other;
        nodes[other].parent = Some(g);
        let gap = match (nodes[other].value, nodes[g].value) {
            (Some(a), Some(b)) => Some((a - b).abs()),
            _ => None,
        };
        nodes[other].weight = gap;
        let mut regions = std::mem::take(&mut nodes[s].regions);
        regions.append(&mut nodes[leaf].regions);
        let mut absorbed = std::mem::take(&mut nodes[s].absorbed);
        absorbed.append(&mut nodes[leaf].absorbed);
        absorbed.extend(nodes[s].pixel);
        nodes[other].regions.append(&mut regions);
        nodes[other].absorbed.append(&mut absorbed);
        alive[s] = false;
        alive[leaf] = false;
        if matches!(nodes[other].symbol, Symbol::Sigma(_)) {
            heap.push(Reverse(Key(weight(&nodes[other]), other)));
        }
    }
    compact(nodes, &alive, tree.root)
}

fn compact<T>(nodes: Vec<CotNode<T>>, alive: &[bool], root: usize) -> CotTree<T> {
    let mut remap = vec![usize::MAX; nodes.len()];
    let mut next = 0;
    for (k, &a) in alive.iter().enumerate() {
        if a {
            remap[k] = next;
            next += 1;
        }
    }
    let kept: Vec<CotNode<T>> = nodes
        .into_iter()
        .zip(alive)
        .filter(|(_, &a)| a)
        .map(|(mut n, _)| {
            n.children.iter_mut().for_each(|c| *c = remap[*c]);
            n.parent = n.parent.map(|p| remap[p]);
            n
        })
        .collect();
    CotTree { nodes: kept, root: remap[root] }
}
