//! Reeb graph of a PL Hamiltonian on the torus.
//!
//! Every saddle's critical level set is traced through the triangulation as
//! two closed loops based at the saddle. Those loops cut the torus into open
//! annuli and disks, one per Reeb arc. Segmentation works on *edge pieces*:
//! each mesh edge spans an open interval of levels, split wherever a traced
//! saddle loop crosses it. Inside a triangle the level segments pair pieces
//! of two edges level by level, so a union-find over pieces recovers the arcs
//! exactly, including arcs too thin to contain a grid vertex.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::fieldio::ScalarField;
use crate::mesh::{vertex_ranks, Mesh};
use crate::morse::{detect_with_ranks, validate_stability, CriticalKind, CriticalPoint};
use crate::{Error, Real, Result};

/// Canonical representative of `±(k, l)`: `k > 0`, or `k = 0` and `l > 0`.
pub fn canonical_class(w: (i64, i64)) -> (i64, i64) {
    if w.0 < 0 || (w.0 == 0 && w.1 < 0) {
        (-w.0, -w.1)
    } else {
        w
    }
}

/// Winding numbers of a closed polyline given in pixel units.
pub fn polyline_winding(mesh: &Mesh, polyline: &[(f64, f64)]) -> (i64, i64) {
    if polyline.len() < 2 {
        return (0, 0);
    }
    let (mut dx, mut dy) = (0.0, 0.0);
    for k in 0..polyline.len() {
        let d = mesh.displacement(polyline[k], polyline[(k + 1) % polyline.len()]);
        dx += d.0;
        dy += d.1;
    }
    ((dx / mesh.nx as f64).round() as i64, (dy / mesh.ny as f64).round() as i64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparatrixLoop {
    /// Vertex index of the saddle the loop is based at.
    pub saddle: usize,
    /// Sub-pixel points in pixel units, starting at the saddle; consecutive
    /// points are joined by the minimum-image segment.
    pub polyline: Vec<(f64, f64)>,
    /// Mesh edges crossed by the loop, in order.
    pub edges: Vec<usize>,
    /// Signed horizontal/vertical winding of the traversal.
    pub winding: (i64, i64),
    pub essential: bool,
}

impl SeparatrixLoop {
    pub fn class(&self) -> (i64, i64) {
        canonical_class(self.winding)
    }

    pub fn reversed(&self, mesh: &Mesh) -> Self {
        let mut polyline = self.polyline.clone();
        polyline[1..].reverse();
        let winding = polyline_winding(mesh, &polyline);
        let mut edges = self.edges.clone();
        edges.reverse();
        Self { saddle: self.saddle, polyline, edges, winding, essential: self.essential }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    AnnulusEssential,
    AnnulusInessential,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region<T> {
    pub id: usize,
    /// Row-major pixel indices, ascending. May be empty for very thin arcs.
    pub pixels: Vec<usize>,
    pub value_range: (T, T),
    /// Reeb node indices of the saddles bounding the region.
    pub boundary_saddles: Vec<usize>,
    pub essential: bool,
    /// Canonical homology class of a level curve inside the region.
    pub winding: (i64, i64),
    pub kind: RegionKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReebEdge<T> {
    /// Node at the lower end of the arc.
    pub lower: usize,
    pub upper: usize,
    /// Region id; equal to the edge index.
    pub region: usize,
    pub weight: T,
    /// On the graph's unique cycle.
    pub essential: bool,
}

impl<T> ReebEdge<T> {
    pub fn other(&self, node: usize) -> usize {
        if node == self.lower {
            self.upper
        } else {
            self.lower
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaddleLoops {
    /// Reeb node index of the saddle.
    pub node: usize,
    pub loops: [SeparatrixLoop; 2],
}

#[derive(Clone, Debug)]
pub struct ReebGraph<T> {
    pub nx: usize,
    pub ny: usize,
    pub nodes: Vec<CriticalPoint<T>>,
    pub edges: Vec<ReebEdge<T>>,
    pub regions: Vec<Region<T>>,
    pub separatrices: Vec<SaddleLoops>,
}

impl<T: Real> ReebGraph<T> {
    pub fn mesh(&self) -> Mesh {
        Mesh::new(self.nx, self.ny)
    }

    /// Incident edge indices per node.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.nodes.len()];
        for (k, e) in self.edges.iter().enumerate() {
            inc[e.lower].push(k);
            inc[e.upper].push(k);
        }
        inc
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.incidence().iter().map(Vec::len).collect()
    }

    /// `edges - nodes + components`.
    pub fn betti(&self) -> isize {
        let mut uf = UnionFind::new(self.nodes.len());
        for e in &self.edges {
            uf.union(e.lower, e.upper);
        }
        let components = (0..self.nodes.len()).filter(|&k| uf.find(k) == k).count();
        self.edges.len() as isize - self.nodes.len() as isize + components as isize
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.nodes.len());
        for e in &self.edges {
            uf.union(e.lower, e.upper);
        }
        (0..self.nodes.len()).all(|k| uf.find(k) == uf.find(0))
    }

    pub fn count(&self, kind: CriticalKind) -> usize {
        self.nodes.iter().filter(|p| p.kind == kind).count()
    }

    pub fn loops_of(&self, node: usize) -> Option<&[SeparatrixLoop; 2]> {
        self.separatrices.iter().find(|s| s.node == node).map(|s| &s.loops)
    }

    /// Reeb arc owning each pixel; saddle pixels own none.
    pub fn pixel_regions(&self) -> Vec<Option<usize>> {
        let mut owner = vec![None; self.nx * self.ny];
        for r in &self.regions {
            for &p in &r.pixels {
                owner[p] = Some(r.id);
            }
        }
        owner
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<_> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(k, p)| {
                serde_json::json!({
                    "id": k,
                    "kind": p.kind,
                    "pixel": [p.pixel.0, p.pixel.1],
                    "value": p.value.as_f64(),
                })
            })
            .collect();
        let edges: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .map(|(k, e)| {
                serde_json::json!({
                    "id": k,
                    "lower": e.lower,
                    "upper": e.upper,
                    "weight": e.weight.as_f64(),
                    "essential": e.essential,
                    "pixels": self.regions[k].pixels.len(),
                    "winding": [self.regions[k].winding.0, self.regions[k].winding.1],
                })
            })
            .collect();
        serde_json::json!({
            "nx": self.nx,
            "ny": self.ny,
            "betti": self.betti(),
            "nodes": nodes,
            "edges": edges,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph reeb {\n");
        for (k, p) in self.nodes.iter().enumerate() {
            let kind = match p.kind {
                CriticalKind::Minimum => "min",
                CriticalKind::Maximum => "max",
                CriticalKind::Saddle => "saddle",
            };
            let _ = writeln!(out, "  n{k} [label=\"{kind} {:.4}\"];", p.value.as_f64());
        }
        for e in &self.edges {
            let style = if e.essential { ", style=bold" } else { "" };
            let _ = writeln!(out, "  n{} -- n{} [label=\"{:.4}\"{style}];", e.lower, e.upper, e.weight.as_f64());
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let up = self.parent[self.parent[x] as usize];
            self.parent[x] = up;
            x = up as usize;
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so representatives are deterministic
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo as u32;
        }
    }
}

/// Level-set tracing on one field.
pub struct Tracer<'a, T> {
    field: &'a ScalarField<T>,
    mesh: Mesh,
    ranks: Vec<u32>,
    order: Vec<u32>,
}

impl<'a, T: Real> Tracer<'a, T> {
    pub fn new(field: &'a ScalarField<T>) -> Self {
        Self::with_ranks(field, vertex_ranks(field.values()))
    }

    pub fn with_ranks(field: &'a ScalarField<T>, ranks: Vec<u32>) -> Self {
        let mut order = vec![0u32; ranks.len()];
        for (v, &r) in ranks.iter().enumerate() {
            order[r as usize] = v as u32;
        }
        Self { field, mesh: Mesh::new(field.nx(), field.ny()), ranks, order }
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    fn edge_ranks(&self, e: usize) -> (u32, u32) {
        let (a, b) = self.mesh.edge_vertices(e);
        let (ra, rb) = (self.ranks[a], self.ranks[b]);
        (ra.min(rb), ra.max(rb))
    }

    /// Edge crosses the level of the vertex with rank `r` in its interior.
    fn crosses_at(&self, e: usize, r: u32) -> bool {
        let (lo, hi) = self.edge_ranks(e);
        lo < r && r < hi
    }

    /// Edge crosses the regular level just above rank `r`.
    fn crosses_above(&self, e: usize, r: u32) -> bool {
        let (lo, hi) = self.edge_ranks(e);
        lo <= r && r < hi
    }

    fn point_on(&self, e: usize, level: T) -> (f64, f64) {
        let (a, b) = self.mesh.edge_vertices(e);
        let (va, vb) = (self.field.values()[a], self.field.values()[b]);
        let t = if va != vb {
            ((level - va) / (vb - va)).as_f64().clamp(0.0, 1.0)
        } else {
            0.5
        };
        self.mesh.edge_point(e, t)
    }

    fn across(&self, e: usize, t: usize) -> usize {
        let [t0, t1] = self.mesh.edge_triangles(e);
        if t0 == t {
            t1
        } else {
            t0
        }
    }

    /// Traces the critical level set through a simple saddle as two loops
    /// based at it.
    pub fn separatrices(&self, saddle: &CriticalPoint<T>) -> Result<[SeparatrixLoop; 2]> {
        let v = saddle.index;
        let r = self.ranks[v];
        let star = self.mesh.star(v);
        let prongs: Vec<usize> = (0..6)
            .filter(|&k| {
                let a = self.ranks[self.mesh.neighbor(v, k)];
                let b = self.ranks[self.mesh.neighbor(v, k + 1)];
                (a < r) != (b < r)
            })
            .collect();
        if prongs.len() != 4 {
            return Err(Error::Tracing(format!(
                "vertex {:?} has {} level-set prongs, expected 4",
                saddle.pixel,
                prongs.len()
            )));
        }
        let origin = {
            let (i, j) = self.mesh.coords(v);
            (i as f64, j as f64)
        };
        let cap = self.mesh.triangle_count() + 8;
        let mut used = [false; 6];
        let mut loops = Vec::with_capacity(2);
        for &p in &prongs {
            if used[p] {
                continue;
            }
            used[p] = true;
            let (mut tri, mut exit) = star[p];
            let mut edges = Vec::new();
            loop {
                edges.push(exit);
                if edges.len() > cap {
                    return Err(Error::Tracing(format!("loop at saddle {:?} did not close", saddle.pixel)));
                }
                let next = self.across(exit, tri);
                if let Some(&q) = prongs.iter().find(|&&q| star[q].0 == next) {
                    if used[q] {
                        return Err(Error::Tracing(format!("prong reused at saddle {:?}", saddle.pixel)));
                    }
                    used[q] = true;
                    break;
                }
                let mut crossing = self
                    .mesh
                    .triangle_edges(next)
                    .into_iter()
                    .filter(|&e| e != exit && self.crosses_at(e, r));
                let (Some(out), None) = (crossing.next(), crossing.next()) else {
                    return Err(Error::Tracing(format!("ambiguous level crossing near saddle {:?}", saddle.pixel)));
                };
                tri = next;
                exit = out;
            }
            let mut polyline = Vec::with_capacity(edges.len() + 1);
            polyline.push(origin);
            polyline.extend(edges.iter().map(|&e| self.point_on(e, saddle.value)));
            let winding = polyline_winding(&self.mesh, &polyline);
            loops.push(SeparatrixLoop { saddle: v, polyline, edges, winding, essential: winding != (0, 0) });
        }
        let second = loops.pop().expect("two loops");
        let first = loops.pop().expect("two loops");
        Ok([first, second])
    }

    /// Traces the regular level set just above rank `r` through edge `e`
    /// and returns its signed winding.
    pub fn contour_winding(&self, e: usize, r: u32) -> Result<(i64, i64)> {
        if !self.crosses_above(e, r) {
            return Err(Error::Internal(format!("edge {e} does not cross level {r}")));
        }
        let level = self.field.values()[self.order[r as usize] as usize];
        let cap = self.mesh.triangle_count() + 8;
        let mut points = vec![self.point_on(e, level)];
        let mut tri = self.mesh.edge_triangles(e)[0];
        let mut cur = e;
        loop {
            let mut crossing = self
                .mesh
                .triangle_edges(tri)
                .into_iter()
                .filter(|&x| x != cur && self.crosses_above(x, r));
            let (Some(out), None) = (crossing.next(), crossing.next()) else {
                return Err(Error::Tracing(format!("regular contour through edge {e} is not a 1-manifold")));
            };
            if out == e {
                break;
            }
            points.push(self.point_on(out, level));
            if points.len() > cap {
                return Err(Error::Tracing(format!("contour through edge {e} did not close")));
            }
            tri = self.across(out, tri);
            cur = out;
        }
        Ok(polyline_winding(&self.mesh, &points))
    }

    /// Partitions the torus into Reeb arcs given every saddle's loops.
    pub fn segment_regions(&self, points: &[CriticalPoint<T>], loops: &[SaddleLoops]) -> Result<Segmentation<T>> {
        let mesh = &self.mesh;
        let n_edges = mesh.edge_count();

        // saddle crossings per edge, ascending in rank
        let mut crossings: Vec<(u32, u32)> = loops
            .iter()
            .flat_map(|s| {
                let r = self.ranks[points[s.node].index];
                s.loops.iter().flat_map(move |l| l.edges.iter().map(move |&e| (e as u32, r)))
            })
            .collect();
        crossings.sort_unstable();
        let mut offsets = vec![0usize; n_edges + 1];
        for &(e, _) in &crossings {
            offsets[e as usize + 1] += 1;
        }
        for k in 0..n_edges {
            offsets[k + 1] += offsets[k];
        }
        let splits = |e: usize| &crossings[offsets[e]..offsets[e + 1]];
        let first_piece = |e: usize| offsets[e] + e;
        let n_pieces = crossings.len() + n_edges;

        let mut uf = UnionFind::new(n_pieces);
        for t in 0..mesh.triangle_count() {
            let mut vs = mesh.triangle_vertices(t);
            vs.sort_by_key(|&v| self.ranks[v]);
            let [a, b, c] = vs;
            let (mut ab, mut bc, mut ac) = (usize::MAX, usize::MAX, usize::MAX);
            for e in mesh.triangle_edges(t) {
                let (p, q) = mesh.edge_vertices(e);
                let has = |x: usize| p == x || q == x;
                if has(a) && has(b) {
                    ab = e;
                } else if has(b) && has(c) {
                    bc = e;
                } else {
                    ac = e;
                }
            }
            let (n_ab, n_bc, n_ac) = (splits(ab).len() + 1, splits(bc).len() + 1, splits(ac).len() + 1);
            let rb = self.ranks[b];
            let split_at_b = splits(ac).iter().any(|&(_, r)| r == rb);
            let shared = usize::from(!split_at_b);
            if n_ac + shared != n_ab + n_bc {
                return Err(Error::Tracing(format!(
                    "inconsistent saddle crossings in triangle {t}: {n_ab}+{n_bc} pieces against {n_ac}"
                )));
            }
            for k in 0..n_ab {
                uf.union(first_piece(ab) + k, first_piece(ac) + k);
            }
            for k in 0..n_bc {
                uf.union(first_piece(bc) + k, first_piece(ac) + n_ab - shared + k);
            }
        }

        // level span of every piece class
        let mut span: BTreeMap<usize, (u32, u32)> = BTreeMap::new();
        let mut witness: BTreeMap<usize, (usize, u32)> = BTreeMap::new();
        for e in 0..n_edges {
            let (lo, hi) = self.edge_ranks(e);
            let cuts = splits(e);
            for k in 0..=cuts.len() {
                let plo = if k == 0 { lo } else { cuts[k - 1].1 };
                let phi = if k == cuts.len() { hi } else { cuts[k].1 };
                let root = uf.find(first_piece(e) + k);
                let s = span.entry(root).or_insert((plo, phi));
                s.0 = s.0.min(plo);
                s.1 = s.1.max(phi);
                witness.entry(root).or_insert((e, plo));
            }
        }

        let mut node_of_vertex = vec![u32::MAX; mesh.vertex_count()];
        for (k, p) in points.iter().enumerate() {
            node_of_vertex[p.index] = k as u32;
        }
        let node_at_rank = |r: u32| -> Result<usize> {
            let v = self.order[r as usize] as usize;
            match node_of_vertex[v] {
                u32::MAX => Err(Error::Internal(format!("arc ends at regular vertex {:?}", self.field.pixel(v)))),
                n => Ok(n as usize),
            }
        };

        let mut arcs: Vec<(usize, u32, u32)> = span.iter().map(|(&root, &(lo, hi))| (root, lo, hi)).collect();
        arcs.sort_by_key(|&(root, lo, hi)| (lo, hi, root));
        let mut arc_of_root = BTreeMap::new();
        let mut arc_ends = Vec::with_capacity(arcs.len());
        for (id, &(root, lo, hi)) in arcs.iter().enumerate() {
            arc_of_root.insert(root, id);
            arc_ends.push((node_at_rank(lo)?, node_at_rank(hi)?));
        }

        let mut pixels = vec![Vec::new(); arcs.len()];
        for v in 0..mesh.vertex_count() {
            let r = self.ranks[v];
            let piece = match node_of_vertex[v] {
                n if n != u32::MAX => match points[n as usize].kind {
                    CriticalKind::Saddle => continue,
                    CriticalKind::Minimum => first_piece(3 * v),
                    CriticalKind::Maximum => first_piece(3 * v) + splits(3 * v).len(),
                },
                _ => {
                    let star = mesh.star(v);
                    let k = (0..6)
                        .find(|&k| {
                            let a = self.ranks[mesh.neighbor(v, k)];
                            let b = self.ranks[mesh.neighbor(v, k + 1)];
                            (a < r) != (b < r)
                        })
                        .expect("regular vertex has a level crossing in its star");
                    let opposite = star[k].1;
                    first_piece(opposite) + splits(opposite).iter().filter(|&&(_, s)| s < r).count()
                }
            };
            let arc = arc_of_root[&uf.find(piece)];
            pixels[arc].push(v);
        }

        let mut regions = Vec::with_capacity(arcs.len());
        for (id, pixels) in pixels.into_iter().enumerate() {
            let (root, _, _) = arcs[id];
            let (e, plo) = witness[&root];
            let winding = canonical_class(self.contour_winding(e, plo)?);
            let (lower, upper) = arc_ends[id];
            let boundary_saddles = [lower, upper]
                .into_iter()
                .filter(|&n| points[n].kind == CriticalKind::Saddle)
                .collect();
            let essential = winding != (0, 0);
            regions.push(Region {
                id,
                pixels,
                value_range: (points[lower].value, points[upper].value),
                boundary_saddles,
                essential,
                winding,
                kind: if essential { RegionKind::AnnulusEssential } else { RegionKind::AnnulusInessential },
            });
        }
        Ok(Segmentation { regions, arc_ends })
    }
}

pub struct Segmentation<T> {
    pub regions: Vec<Region<T>>,
    /// `(lower node, upper node)` per region.
    pub arc_ends: Vec<(usize, usize)>,
}

/// Loops of one saddle, traced on a fresh ordering of the field.
pub fn trace_separatrices<T: Real>(field: &ScalarField<T>, saddle: &CriticalPoint<T>) -> Result<[SeparatrixLoop; 2]> {
    Tracer::new(field).separatrices(saddle)
}

/// Full construction: critical points, stability check, separatrices,
/// segmentation, assembly and invariant checks.
pub fn build_reeb_graph<T: Real>(field: &ScalarField<T>) -> Result<ReebGraph<T>> {
    let ranks = vertex_ranks(field.values());
    let points = detect_with_ranks(field, &ranks)?;
    let report = validate_stability(&points);
    if !report.is_stable() {
        return Err(Error::Degenerate(report.reasons.join("; ")));
    }
    assemble(field, ranks, points)
}

pub(crate) fn assemble<T: Real>(field: &ScalarField<T>, ranks: Vec<u32>, points: Vec<CriticalPoint<T>>) -> Result<ReebGraph<T>> {
    let tracer = Tracer::with_ranks(field, ranks);
    let mut separatrices = Vec::new();
    for (node, p) in points.iter().enumerate() {
        if p.kind == CriticalKind::Saddle {
            separatrices.push(SaddleLoops { node, loops: tracer.separatrices(p)? });
        }
    }
    let seg = tracer.segment_regions(&points, &separatrices)?;

    let edges: Vec<ReebEdge<T>> = seg
        .arc_ends
        .iter()
        .enumerate()
        .map(|(k, &(lower, upper))| ReebEdge {
            lower,
            upper,
            region: k,
            weight: (points[upper].value - points[lower].value).abs(),
            essential: false,
        })
        .collect();
    let mut graph = ReebGraph {
        nx: field.nx(),
        ny: field.ny(),
        nodes: points,
        edges,
        regions: seg.regions,
        separatrices,
    };

    for (k, (p, d)) in graph.nodes.iter().zip(graph.degrees()).enumerate() {
        let expected = if p.kind == CriticalKind::Saddle { 3 } else { 1 };
        if d != expected {
            return Err(Error::Topology(format!("node {k} ({:?} at {:?}) has degree {d}", p.kind, p.pixel)));
        }
    }
    if !graph.is_connected() || graph.betti() != 1 {
        return Err(Error::Topology(format!(
            "field not a structurally stable torus Hamiltonian: Reeb graph has {} nodes, {} edges, betti {}",
            graph.nodes.len(),
            graph.edges.len(),
            graph.betti()
        )));
    }

    for k in cycle_edges(&graph) {
        graph.edges[k].essential = true;
    }
    for (e, r) in graph.edges.iter().zip(&graph.regions) {
        if e.essential != r.essential {
            return Err(Error::Topology(format!(
                "arc {} is {} on the Reeb cycle but its level curves wind {:?}",
                r.id,
                if e.essential { "" } else { "not" },
                r.winding
            )));
        }
    }
    Ok(graph)
}

/// Edges of the unique cycle, found by repeatedly stripping leaves.
pub fn cycle_edges<T: Real>(graph: &ReebGraph<T>) -> Vec<usize> {
    let inc = graph.incidence();
    let mut degree: Vec<usize> = inc.iter().map(Vec::len).collect();
    let mut removed = vec![false; graph.edges.len()];
    let mut stack: Vec<usize> = (0..graph.nodes.len()).filter(|&n| degree[n] == 1).collect();
    while let Some(n) = stack.pop() {
        if degree[n] != 1 {
            continue;
        }
        if let Some(&e) = inc[n].iter().find(|&&e| !removed[e]) {
            removed[e] = true;
            degree[n] -= 1;
            let m = graph.edges[e].other(n);
            degree[m] -= 1;
            if degree[m] == 1 {
                stack.push(m);
            }
        }
    }
    (0..graph.edges.len()).filter(|&e| !removed[e]).collect()
}
