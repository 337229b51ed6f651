//! Conforming triangulations of axis-aligned rectangles with newest-vertex
//! bisection and sibling-pair coarsening.
//!
//! Elements live in a bisection forest. The active triangulation consists of
//! the leaves, enumerated depth first from the roots so that element numbering
//! is deterministic. Each element stores its vertices as `[newest, a, b]` in
//! counterclockwise order; `(a, b)` is its refinement edge.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::field::NodalField;

pub type Point = [f64; 2];

const NONE: usize = usize::MAX;

static NEXT_VERSION: AtomicU64 = AtomicU64::new(1);

fn fresh_version() -> u64 {
    NEXT_VERSION.fetch_add(1, Ordering::Relaxed)
}

/// Axis-aligned rectangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn new(min: Point, max: Point) -> Result<Self> {
        if !(max[0] > min[0] && max[1] > min[1]) || !min.iter().chain(&max).all(|v| v.is_finite()) {
            return Err(Error::Mesh(format!(
                "rectangle {min:?}..{max:?} must have positive width and height"
            )));
        }
        Ok(Self { min, max })
    }

    /// Square `[0, side]^2`, the positive quadrant of `(-side, side)^2`.
    pub fn quadrant(side: f64) -> Result<Self> {
        Self::new([0.0, 0.0], [side, side])
    }

    pub fn width(&self) -> f64 {
        self.max[0] - self.min[0]
    }

    pub fn height(&self) -> f64 {
        self.max[1] - self.min[1]
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    fn scale(&self) -> f64 {
        self.width().max(self.height())
    }

    fn contains(&self, p: Point, tol: f64) -> bool {
        p[0] >= self.min[0] - tol
            && p[0] <= self.max[0] + tol
            && p[1] >= self.min[1] - tol
            && p[1] <= self.max[1] + tol
    }

    fn on_boundary(&self, p: Point) -> bool {
        let tol = 1e-12 * self.scale();
        (p[0] - self.min[0]).abs() <= tol
            || (p[0] - self.max[0]).abs() <= tol
            || (p[1] - self.min[1]).abs() <= tol
            || (p[1] - self.max[1]).abs() <= tol
    }
}

/// Refinement zone of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZoneLabel {
    /// Interfacial band, `|phi| < cutoff` at every vertex (and mixed elements).
    Fine,
    /// Pure tumour, `phi = 1` at every vertex.
    Medium,
    /// Pure exterior, `phi = -1` at every vertex.
    Coarse,
}

impl ZoneLabel {
    pub fn code(self) -> i32 {
        match self {
            ZoneLabel::Fine => 0,
            ZoneLabel::Medium => 1,
            ZoneLabel::Coarse => 2,
        }
    }
}

#[derive(Clone, Debug)]
struct Cell {
    verts: [usize; 3],
    parent: usize,
    children: Option<[usize; 2]>,
    alive: bool,
}

/// How nodal values follow a mesh change.
#[derive(Clone, Debug, PartialEq)]
pub enum NodeTransfer {
    Unchanged,
    /// New nodes were appended, each the midpoint of the listed node pair
    /// (pairs may refer to nodes appended earlier in the same list).
    Appended { parents: Vec<[usize; 2]> },
    /// Nodes were removed; `keep` lists the surviving old indices in order.
    Compacted { keep: Vec<usize> },
}

impl NodeTransfer {
    pub fn is_unchanged(&self) -> bool {
        matches!(self, NodeTransfer::Unchanged)
    }

    /// Carries a piecewise-linear field across the change. Midpoint values
    /// are edge averages, which is exact linear interpolation.
    pub fn apply(&self, values: &mut Vec<f64>) {
        match self {
            NodeTransfer::Unchanged => {}
            NodeTransfer::Appended { parents } => {
                values.reserve(parents.len());
                for &[a, b] in parents {
                    let v = 0.5 * (values[a] + values[b]);
                    values.push(v);
                }
            }
            NodeTransfer::Compacted { keep } => {
                *values = keep.iter().map(|&i| values[i]).collect();
            }
        }
    }
}

/// Result of [`Mesh::check_nonobtuse`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleReport {
    pub nonobtuse: bool,
    /// Largest interior angle over all elements, in degrees.
    pub worst_angle_deg: f64,
    pub worst_element: usize,
}

/// Tolerance on the nonobtuse check, in degrees.
pub const ANGLE_TOL_DEG: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Mesh {
    bbox: Rect,
    /// Cells per axis of the structured root grid, if any.
    grid_n: Option<usize>,
    nodes: Vec<Point>,
    boundary: Vec<bool>,
    cells: Vec<Cell>,
    free_cells: Vec<usize>,
    roots: Vec<usize>,
    leaves: Vec<usize>,
    elements: Vec<[usize; 3]>,
    leaf_slot: Vec<usize>,
    midpoints: HashMap<(usize, usize), usize>,
    created: Vec<[usize; 2]>,
    version: u64,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn signed_area(p: Point, q: Point, r: Point) -> f64 {
    0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))
}

fn dist(p: Point, q: Point) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

fn barycentric(p: Point, tri: [Point; 3]) -> [f64; 3] {
    let total = signed_area(tri[0], tri[1], tri[2]);
    let l0 = signed_area(p, tri[1], tri[2]) / total;
    let l1 = signed_area(tri[0], p, tri[2]) / total;
    [l0, l1, 1.0 - l0 - l1]
}

fn min3(v: [f64; 3]) -> f64 {
    v[0].min(v[1]).min(v[2])
}

type EdgeMap = HashMap<(usize, usize), [usize; 2]>;

fn edge_insert(edges: &mut EdgeMap, a: usize, b: usize, cell: usize) {
    let slot = edges.entry(edge_key(a, b)).or_insert([NONE, NONE]);
    if slot[0] == NONE {
        slot[0] = cell;
    } else {
        assert_eq!(slot[1], NONE, "edge ({a}, {b}) shared by more than two elements");
        slot[1] = cell;
    }
}

fn edge_remove(edges: &mut EdgeMap, a: usize, b: usize, cell: usize) {
    let key = edge_key(a, b);
    if let Some(slot) = edges.get_mut(&key) {
        if slot[0] == cell {
            slot[0] = slot[1];
            slot[1] = NONE;
        } else if slot[1] == cell {
            slot[1] = NONE;
        }
        if slot[0] == NONE {
            edges.remove(&key);
        }
    }
}

fn edge_other(edges: &EdgeMap, a: usize, b: usize, cell: usize) -> Option<usize> {
    edges.get(&edge_key(a, b)).and_then(|slot| {
        let other = if slot[0] == cell { slot[1] } else { slot[0] };
        (other != NONE).then_some(other)
    })
}

impl Mesh {
    /// Uniform mesh of `2 n^2` right isosceles triangles. Each square cell is
    /// split along its `(i, j)-(i+1, j+1)` diagonal and the right-angle vertex
    /// is the newest vertex, so every refinement edge is a diagonal shared by
    /// the two halves of a cell.
    pub fn generate_square_mesh(bbox: Rect, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Mesh("subdivision count must be at least 1".into()));
        }
        let dx = bbox.width() / n as f64;
        let dy = bbox.height() / n as f64;
        if (dx - dy).abs() > 1e-12 * dx.max(dy) {
            return Err(Error::Mesh(format!(
                "cells of {dx} x {dy} are not square; bisection would not stay nonobtuse"
            )));
        }
        let mut nodes = Vec::with_capacity((n + 1) * (n + 1));
        for j in 0..=n {
            for i in 0..=n {
                let x = if i == n { bbox.max[0] } else { bbox.min[0] + i as f64 * dx };
                let y = if j == n { bbox.max[1] } else { bbox.min[1] + j as f64 * dy };
                nodes.push([x, y]);
            }
        }
        let id = |i: usize, j: usize| j * (n + 1) + i;
        let mut cells = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            for i in 0..n {
                let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
                for verts in [[b, c, a], [d, a, c]] {
                    cells.push(Cell { verts, parent: NONE, children: None, alive: true });
                }
            }
        }
        Ok(Self::from_parts(bbox, Some(n), nodes, cells))
    }

    /// Mesh from an explicit node list and triangle list. Triangles are
    /// reoriented counterclockwise; the vertex opposite the longest edge
    /// becomes the newest vertex.
    pub fn from_triangles(nodes: Vec<Point>, triangles: &[[usize; 3]]) -> Result<Self> {
        if nodes.is_empty() || triangles.is_empty() {
            return Err(Error::Mesh("empty node or triangle list".into()));
        }
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in &nodes {
            for k in 0..2 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        let bbox = Rect::new(min, max)?;
        let mut cells = Vec::with_capacity(triangles.len());
        for (e, &[a, b, c]) in triangles.iter().enumerate() {
            if a.max(b).max(c) >= nodes.len() {
                return Err(Error::Mesh(format!("triangle {e} references a missing node")));
            }
            let area = signed_area(nodes[a], nodes[b], nodes[c]);
            if area.abs() <= f64::EPSILON * bbox.scale() * bbox.scale() {
                return Err(Error::Mesh(format!("triangle {e} is degenerate")));
            }
            let mut t = if area > 0.0 { [a, b, c] } else { [a, c, b] };
            // rotate so the vertex opposite the longest edge comes first
            let opp = |k: usize| dist(nodes[t[(k + 1) % 3]], nodes[t[(k + 2) % 3]]);
            let k = (0..3).max_by(|&i, &j| opp(i).total_cmp(&opp(j))).unwrap();
            t.rotate_left(k);
            cells.push(Cell { verts: t, parent: NONE, children: None, alive: true });
        }
        Ok(Self::from_parts(bbox, None, nodes, cells))
    }

    fn from_parts(bbox: Rect, grid_n: Option<usize>, nodes: Vec<Point>, cells: Vec<Cell>) -> Self {
        let boundary = nodes.iter().map(|&p| bbox.on_boundary(p)).collect();
        let roots = (0..cells.len()).collect();
        let mut mesh = Self {
            bbox,
            grid_n,
            nodes,
            boundary,
            cells,
            free_cells: Vec::new(),
            roots,
            leaves: Vec::new(),
            elements: Vec::new(),
            leaf_slot: Vec::new(),
            midpoints: HashMap::new(),
            created: Vec::new(),
            version: fresh_version(),
        };
        mesh.rebuild_leaves();
        mesh
    }

    pub fn bbox(&self) -> Rect {
        self.bbox
    }

    /// Changes whenever the node or element set changes.
    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    /// Element connectivity, `[newest, a, b]`, counterclockwise.
    pub fn elements(&self) -> &[[usize; 3]] {
        &self.elements
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        self.boundary[node]
    }

    /// Depth of an element in the bisection forest (roots have level 0).
    pub fn element_level(&self, e: usize) -> usize {
        let mut c = self.leaves[e];
        let mut level = 0;
        while self.cells[c].parent != NONE {
            c = self.cells[c].parent;
            level += 1;
        }
        level
    }

    pub fn element_points(&self, e: usize) -> [Point; 3] {
        self.elements[e].map(|v| self.nodes[v])
    }

    pub fn element_area(&self, e: usize) -> f64 {
        let [p, q, r] = self.element_points(e);
        signed_area(p, q, r)
    }

    /// Diameter of an element, i.e. its longest edge.
    pub fn element_diameter(&self, e: usize) -> f64 {
        let [p, q, r] = self.element_points(e);
        dist(p, q).max(dist(q, r)).max(dist(r, p))
    }

    pub fn max_diameter(&self) -> f64 {
        (0..self.num_elements()).map(|e| self.element_diameter(e)).fold(0.0, f64::max)
    }

    /// Interior angles of an element in degrees, in vertex order.
    pub fn element_angles(&self, e: usize) -> [f64; 3] {
        triangle_angles(self.element_points(e))
    }

    /// Checks that every interior angle is at most 90 degrees (up to
    /// [`ANGLE_TOL_DEG`]).
    pub fn check_nonobtuse(&self) -> AngleReport {
        let mut worst = 0.0;
        let mut worst_element = 0;
        for e in 0..self.num_elements() {
            let a = self.element_angles(e);
            let m = a[0].max(a[1]).max(a[2]);
            if m > worst {
                worst = m;
                worst_element = e;
            }
        }
        AngleReport { nonobtuse: worst <= 90.0 + ANGLE_TOL_DEG, worst_angle_deg: worst, worst_element }
    }

    /// Every edge is shared by one or two elements, and edges with a single
    /// element lie on the bounding rectangle (no hanging nodes).
    pub fn check_conforming(&self) -> bool {
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for &[a, b, c] in &self.elements {
            for (p, q) in [(a, b), (b, c), (c, a)] {
                *count.entry(edge_key(p, q)).or_default() += 1;
            }
        }
        count.iter().all(|(&(p, q), &k)| match k {
            1 => {
                let mid = [0.5 * (self.nodes[p][0] + self.nodes[q][0]), 0.5 * (self.nodes[p][1] + self.nodes[q][1])];
                self.boundary[p] && self.boundary[q] && self.bbox.on_boundary(mid)
            }
            2 => true,
            _ => false,
        })
    }

    /// Sorted neighbour lists (excluding the node itself).
    pub fn node_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::with_capacity(8); self.num_nodes()];
        for &[a, b, c] in &self.elements {
            for (p, q) in [(a, b), (b, c), (c, a)] {
                adj[p].push(q);
                adj[q].push(p);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    fn rebuild_leaves(&mut self) {
        self.leaves.clear();
        let mut stack: Vec<usize> = self.roots.iter().rev().copied().collect();
        while let Some(c) = stack.pop() {
            match self.cells[c].children {
                Some([c0, c1]) => {
                    stack.push(c1);
                    stack.push(c0);
                }
                None => self.leaves.push(c),
            }
        }
        self.elements = self.leaves.iter().map(|&c| self.cells[c].verts).collect();
        self.leaf_slot.clear();
        self.leaf_slot.resize(self.cells.len(), NONE);
        for (e, &c) in self.leaves.iter().enumerate() {
            self.leaf_slot[c] = e;
        }
    }

    fn leaf_edge_map(&self) -> EdgeMap {
        let mut edges = EdgeMap::with_capacity(self.leaves.len() * 2);
        for &c in &self.leaves {
            let [a, b, d] = self.cells[c].verts;
            edge_insert(&mut edges, a, b, c);
            edge_insert(&mut edges, b, d, c);
            edge_insert(&mut edges, d, a, c);
        }
        edges
    }

    fn alloc_cell(&mut self, cell: Cell) -> usize {
        if let Some(slot) = self.free_cells.pop() {
            self.cells[slot] = cell;
            slot
        } else {
            self.cells.push(cell);
            self.cells.len() - 1
        }
    }

    fn midpoint_node(&mut self, a: usize, b: usize) -> usize {
        let key = edge_key(a, b);
        if let Some(&m) = self.midpoints.get(&key) {
            return m;
        }
        let (p, q) = (self.nodes[a], self.nodes[b]);
        let mid = [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])];
        self.nodes.push(mid);
        self.boundary.push(self.boundary[a] && self.boundary[b] && self.bbox.on_boundary(mid));
        let m = self.nodes.len() - 1;
        self.midpoints.insert(key, m);
        self.created.push([a, b]);
        m
    }

    fn split(&mut self, c: usize, edges: &mut EdgeMap) {
        let [v0, a, b] = self.cells[c].verts;
        let m = self.midpoint_node(a, b);
        let c0 = self.alloc_cell(Cell { verts: [m, v0, a], parent: c, children: None, alive: true });
        let c1 = self.alloc_cell(Cell { verts: [m, b, v0], parent: c, children: None, alive: true });
        self.cells[c].children = Some([c0, c1]);
        edge_remove(edges, v0, a, c);
        edge_remove(edges, a, b, c);
        edge_remove(edges, b, v0, c);
        edge_insert(edges, m, v0, c0);
        edge_insert(edges, v0, a, c0);
        edge_insert(edges, a, m, c0);
        edge_insert(edges, m, b, c1);
        edge_insert(edges, b, v0, c1);
        edge_insert(edges, v0, m, c1);
    }

    fn refine_cell(&mut self, c: usize, edges: &mut EdgeMap) {
        if self.cells[c].children.is_some() {
            return;
        }
        let [_, a, b] = self.cells[c].verts;
        let key = edge_key(a, b);
        let Some(mut n) = edge_other(edges, a, b, c) else {
            self.split(c, edges);
            return;
        };
        let [_, na, nb] = self.cells[n].verts;
        if edge_key(na, nb) != key {
            // the neighbour must be bisected first so that (a, b) becomes a
            // refinement edge on its side as well
            self.refine_cell(n, edges);
            n = edge_other(edges, a, b, c).expect("neighbour child across refinement edge");
            debug_assert_eq!(
                {
                    let [_, x, y] = self.cells[n].verts;
                    edge_key(x, y)
                },
                key
            );
        }
        self.split(c, edges);
        self.split(n, edges);
    }

    /// Bisects every marked element through its newest vertex, adding
    /// compatibility bisections until the mesh is conforming again.
    pub fn bisect(&mut self, marked: &[usize]) -> Result<NodeTransfer> {
        if let Some(&bad) = marked.iter().find(|&&e| e >= self.num_elements()) {
            return Err(Error::Mesh(format!("element {bad} out of range")));
        }
        if marked.is_empty() {
            return Ok(NodeTransfer::Unchanged);
        }
        let targets: Vec<usize> = marked.iter().map(|&e| self.leaves[e]).collect();
        let mut edges = self.leaf_edge_map();
        self.created.clear();
        for c in targets {
            self.refine_cell(c, &mut edges);
        }
        self.rebuild_leaves();
        self.version = fresh_version();
        Ok(NodeTransfer::Appended { parents: std::mem::take(&mut self.created) })
    }

    /// Merges sibling pairs whose children are all marked. The midpoint node
    /// shared by the pairs is removed only when every element around it is a
    /// marked child carrying it as newest vertex, which keeps the mesh
    /// conforming. Root elements are never merged.
    pub fn coarsen(&mut self, marked: &[usize]) -> Result<NodeTransfer> {
        if let Some(&bad) = marked.iter().find(|&&e| e >= self.num_elements()) {
            return Err(Error::Mesh(format!("element {bad} out of range")));
        }
        let mut is_marked = vec![false; self.num_elements()];
        let mut candidates = Vec::new();
        for &e in marked {
            is_marked[e] = true;
            let c = self.leaves[e];
            if self.cells[c].parent != NONE {
                candidates.push(self.cells[c].verts[0]);
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        if candidates.is_empty() {
            return Ok(NodeTransfer::Unchanged);
        }

        let mut is_candidate = vec![false; self.num_nodes()];
        for &m in &candidates {
            is_candidate[m] = true;
        }
        let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
        for (e, verts) in self.elements.iter().enumerate() {
            for &v in verts {
                if is_candidate[v] {
                    incident.entry(v).or_default().push(e);
                }
            }
        }

        let mut removed = vec![false; self.num_nodes()];
        let mut merges = 0;
        for &m in &candidates {
            let around = &incident[&m];
            let expected = if self.boundary[m] { 2 } else { 4 };
            if around.len() != expected {
                continue;
            }
            let ok = around.iter().all(|&e| {
                let c = self.leaves[e];
                is_marked[e] && self.cells[c].verts[0] == m && self.cells[c].parent != NONE
            });
            if !ok {
                continue;
            }
            let mut parents: Vec<usize> = around.iter().map(|&e| self.cells[self.leaves[e]].parent).collect();
            parents.sort_unstable();
            parents.dedup();
            if parents.len() * 2 != around.len() {
                continue;
            }
            let complete = parents.iter().all(|&p| {
                self.cells[p]
                    .children
                    .is_some_and(|ch| ch.iter().all(|&k| self.cells[k].children.is_none()))
            });
            if !complete {
                continue;
            }
            for &p in &parents {
                let [c0, c1] = self.cells[p].children.take().unwrap();
                for k in [c0, c1] {
                    self.cells[k].alive = false;
                    self.free_cells.push(k);
                }
                let [_, a, b] = self.cells[p].verts;
                self.midpoints.remove(&edge_key(a, b));
            }
            removed[m] = true;
            merges += 1;
        }
        if merges == 0 {
            return Ok(NodeTransfer::Unchanged);
        }
        let keep = self.compact_nodes(&removed);
        self.rebuild_leaves();
        self.version = fresh_version();
        Ok(NodeTransfer::Compacted { keep })
    }

    fn compact_nodes(&mut self, removed: &[bool]) -> Vec<usize> {
        let mut remap = vec![NONE; self.nodes.len()];
        let mut keep = Vec::with_capacity(self.nodes.len());
        let mut next = 0;
        for (i, &gone) in removed.iter().enumerate() {
            if !gone {
                keep.push(i);
                remap[i] = next;
                self.nodes[next] = self.nodes[i];
                self.boundary[next] = self.boundary[i];
                next += 1;
            }
        }
        self.nodes.truncate(next);
        self.boundary.truncate(next);
        for cell in self.cells.iter_mut().filter(|c| c.alive) {
            cell.verts = cell.verts.map(|v| remap[v]);
        }
        self.midpoints = self
            .midpoints
            .drain()
            .filter_map(|((a, b), m)| {
                let (a, b, m) = (remap[a], remap[b], remap[m]);
                (a != NONE && b != NONE && m != NONE).then(|| (edge_key(a, b), m))
            })
            .collect();
        keep
    }

    /// Finds the element containing `p` and its barycentric coordinates.
    pub fn locate(&self, p: Point) -> Option<(usize, [f64; 3])> {
        if !self.bbox.contains(p, 1e-12 * self.bbox.scale()) {
            return None;
        }
        let cell_bary = |c: usize| barycentric(p, self.cells[c].verts.map(|v| self.nodes[v]));
        let pick = |cands: &[usize]| {
            cands
                .iter()
                .map(|&c| (c, cell_bary(c)))
                .max_by(|x, y| min3(x.1).total_cmp(&min3(y.1)))
                .unwrap()
        };
        let (mut c, mut bary) = match self.grid_n {
            Some(n) => {
                let fx = (p[0] - self.bbox.min[0]) / self.bbox.width() * n as f64;
                let fy = (p[1] - self.bbox.min[1]) / self.bbox.height() * n as f64;
                let i = (fx.floor().max(0.0) as usize).min(n - 1);
                let j = (fy.floor().max(0.0) as usize).min(n - 1);
                let k = 2 * (j * n + i);
                pick(&[self.roots[k], self.roots[k + 1]])
            }
            None => pick(&self.roots),
        };
        let tol = -1e-10;
        if min3(bary) < tol {
            return None;
        }
        while let Some(children) = self.cells[c].children {
            (c, bary) = pick(&children);
        }
        Some((self.leaf_slot[c], bary))
    }

    /// Evaluates the piecewise-linear function with nodal `values` at `p`.
    /// The result never leaves the range of the containing element's vertex
    /// values.
    pub fn evaluate(&self, values: &[f64], p: Point) -> Option<f64> {
        let (e, bary) = self.locate(p)?;
        let verts = self.elements[e];
        let w = bary.map(|l| l.max(0.0));
        let total: f64 = w.iter().sum();
        let vals = verts.map(|v| values[v]);
        let lo = vals[0].min(vals[1]).min(vals[2]);
        let hi = vals[0].max(vals[1]).max(vals[2]);
        let v = (w[0] * vals[0] + w[1] * vals[1] + w[2] * vals[2]) / total;
        Some(v.clamp(lo, hi))
    }
}

/// Interior angles in degrees.
pub fn triangle_angles(p: [Point; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for k in 0..3 {
        let a = p[k];
        let b = p[(k + 1) % 3];
        let c = p[(k + 2) % 3];
        let u = [b[0] - a[0], b[1] - a[1]];
        let v = [c[0] - a[0], c[1] - a[1]];
        let cos = (u[0] * v[0] + u[1] * v[1]) / (u[0].hypot(u[1]) * v[0].hypot(v[1]));
        out[k] = cos.clamp(-1.0, 1.0).acos().to_degrees();
    }
    out
}

/// Zone of every element given nodal phase values. Elements with every
/// vertex in `|phi| < cutoff` are Fine; all vertices at `+1` is Medium, all at
/// `-1` is Coarse. Elements that fit none of these (partly saturated) are
/// refined like the band and are labelled Fine as well.
pub fn classify_zones(mesh: &Mesh, phi: &[f64], cutoff: f64) -> Vec<ZoneLabel> {
    mesh.elements()
        .iter()
        .map(|verts| {
            let vals = verts.map(|v| phi[v]);
            if vals.iter().all(|v| v.abs() < cutoff) {
                ZoneLabel::Fine
            } else if vals.iter().all(|&v| v == 1.0) {
                ZoneLabel::Medium
            } else if vals.iter().all(|&v| v == -1.0) {
                ZoneLabel::Coarse
            } else {
                ZoneLabel::Fine
            }
        })
        .collect()
}

/// Transfers a piecewise-linear field from `old` onto the nodes of `new`.
pub fn interpolate_field(old: &Mesh, field: &NodalField, new: &Mesh) -> Result<NodalField> {
    field.check_mesh(old)?;
    let values = new
        .nodes()
        .iter()
        .map(|&p| {
            old.evaluate(field, p)
                .ok_or_else(|| Error::Mesh(format!("node {p:?} lies outside the source mesh")))
        })
        .collect::<Result<Vec<f64>>>()?;
    NodalField::new(new, values)
}
