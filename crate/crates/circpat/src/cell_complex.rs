//! Finite disk-type cell complexes and the angle data living on their edges.
//!
//! A complex is given by its faces as counter-clockwise vertex cycles. Edges
//! are oriented `tail -> head` with the face `left` on their left; interior
//! edges also carry the face `right`. Boundary edges have `right == None` and
//! are traversed counter-clockwise around the disk.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on vertex and face degrees.
pub const DEFAULT_MAX_DEGREE: usize = 32;

/// Default length cap for the enumeration of dual loops in [`validate_theta`].
pub const DEFAULT_LOOP_CAP: usize = 12;

/// Tolerance of the per-vertex angle sum check.
pub const ANGLE_SUM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub left: usize,
    pub right: Option<usize>,
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.right.is_none()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawComplex {
    num_vertices: usize,
    faces: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

/// Combinatorial cell decomposition of a closed disk.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(from = "RawComplex", into = "RawComplex")]
pub struct DiskComplex {
    num_vertices: usize,
    faces: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    // edge k of a face joins faces[f][k] -> faces[f][k + 1]
    face_edges: Vec<Vec<usize>>,
    // counter-clockwise rotation of incident edges around each vertex
    vertex_edges: Vec<Vec<usize>>,
}

impl PartialEq for DiskComplex {
    fn eq(&self, other: &Self) -> bool {
        self.num_vertices == other.num_vertices && self.faces == other.faces && self.edges == other.edges
    }
}

impl From<RawComplex> for DiskComplex {
    fn from(raw: RawComplex) -> Self {
        DiskComplex::from_raw_parts(raw.num_vertices, raw.faces, raw.edges)
    }
}

impl From<DiskComplex> for RawComplex {
    fn from(c: DiskComplex) -> Self {
        RawComplex {
            num_vertices: c.num_vertices,
            faces: c.faces,
            edges: c.edges,
        }
    }
}

impl DiskComplex {
    /// Build a complex from counter-clockwise face cycles.
    ///
    /// Edges are numbered in order of first appearance. Structural problems
    /// that still allow a consistent edge table (pinches, wrong Euler
    /// characteristic, degenerate edges) are left to [`validate_complex`];
    /// only contradictory orientations and edges shared by more than two
    /// faces are rejected here.
    pub fn from_faces(num_vertices: usize, faces: Vec<Vec<usize>>) -> Result<Self> {
        let mut edges: Vec<Edge> = Vec::new();
        let mut lookup: HashMap<(usize, usize), usize> = HashMap::new();
        let mut problems = Vec::new();
        for (f, cycle) in faces.iter().enumerate() {
            if cycle.len() < 2 {
                problems.push(format!("face {f} has fewer than two vertices"));
                continue;
            }
            for k in 0..cycle.len() {
                let a = cycle[k];
                let b = cycle[(k + 1) % cycle.len()];
                if a >= num_vertices || b >= num_vertices {
                    problems.push(format!("face {f} references a vertex out of range"));
                    continue;
                }
                let key = (a.min(b), a.max(b));
                match lookup.get(&key) {
                    None => {
                        lookup.insert(key, edges.len());
                        edges.push(Edge {
                            tail: a,
                            head: b,
                            left: f,
                            right: None,
                        });
                    }
                    Some(&e) => {
                        let edge = &mut edges[e];
                        if edge.right.is_some() {
                            problems.push(format!("edge {a}-{b} is shared by more than two faces"));
                        } else if edge.tail == a {
                            problems.push(format!(
                                "faces {} and {f} traverse edge {a}-{b} in the same direction",
                                edge.left
                            ));
                        } else {
                            edge.right = Some(f);
                        }
                    }
                }
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidComplex(problems));
        }
        Ok(Self::from_raw_parts(num_vertices, faces, edges))
    }

    /// Assemble a complex from explicit tables without any checking.
    ///
    /// Derived tables are filled in leniently; use [`validate_complex`] to
    /// find out whether the result is a proper disk.
    pub fn from_raw_parts(num_vertices: usize, faces: Vec<Vec<usize>>, edges: Vec<Edge>) -> Self {
        let mut lookup: HashMap<(usize, usize, usize), usize> = HashMap::new();
        for (e, edge) in edges.iter().enumerate() {
            lookup.entry((edge.tail, edge.head, edge.left)).or_insert(e);
            if let Some(r) = edge.right {
                lookup.entry((edge.head, edge.tail, r)).or_insert(e);
            }
        }
        let face_edges = faces
            .iter()
            .enumerate()
            .map(|(f, cycle)| {
                (0..cycle.len())
                    .map(|k| {
                        let a = cycle[k];
                        let b = cycle[(k + 1) % cycle.len()];
                        lookup.get(&(a, b, f)).copied().unwrap_or(usize::MAX)
                    })
                    .collect()
            })
            .collect();
        let mut c = DiskComplex {
            num_vertices,
            faces,
            edges,
            face_edges,
            vertex_edges: Vec::new(),
        };
        c.vertex_edges = c.compute_rotations();
        c
    }

    fn compute_rotations(&self) -> Vec<Vec<usize>> {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.num_vertices];
        for (e, edge) in self.edges.iter().enumerate() {
            if edge.tail < self.num_vertices {
                incident[edge.tail].push(e);
            }
            if edge.head < self.num_vertices && edge.head != edge.tail {
                incident[edge.head].push(e);
            }
        }
        // Sweeping counter-clockwise around a vertex, a face is entered through
        // its outgoing edge and left through its incoming edge.
        let mut next: HashMap<(usize, usize), usize> = HashMap::new();
        for (f, cycle) in self.faces.iter().enumerate() {
            let n = cycle.len();
            for k in 0..n {
                let v = cycle[k];
                let out_e = self.face_edges[f][k];
                let in_e = self.face_edges[f][(k + n - 1) % n];
                if out_e != usize::MAX && in_e != usize::MAX {
                    next.insert((v, out_e), in_e);
                }
            }
        }
        incident
            .into_iter()
            .enumerate()
            .map(|(v, list)| {
                if list.is_empty() {
                    return list;
                }
                // Boundary vertices start at the edge no face sweeps into.
                let targets: Vec<usize> = list.iter().filter_map(|&e| next.get(&(v, e)).copied()).collect();
                let start = list.iter().copied().find(|e| !targets.contains(e)).unwrap_or(list[0]);
                let mut order = vec![start];
                let mut cur = start;
                while let Some(&n) = next.get(&(v, cur)) {
                    if n == start || order.contains(&n) || order.len() > list.len() {
                        break;
                    }
                    order.push(n);
                    cur = n;
                }
                if order.len() == list.len() {
                    order
                } else {
                    list
                }
            })
            .collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    /// Counter-clockwise vertex cycle of a face.
    pub fn face_vertices(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }

    /// Edges of a face; entry `k` joins vertex `k` to vertex `k + 1`.
    pub fn face_edges(&self, f: usize) -> &[usize] {
        &self.face_edges[f]
    }

    /// Incident edges of a vertex in counter-clockwise order.
    pub fn vertex_edges(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    pub fn vertex_degree(&self, v: usize) -> usize {
        self.vertex_edges[v].len()
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edges[e].is_boundary()
    }

    /// A vertex lies on the boundary when it touches a boundary edge.
    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.vertex_edges[v].iter().any(|&e| self.edges[e].is_boundary())
    }

    pub fn is_interior_vertex(&self, v: usize) -> bool {
        !self.vertex_edges[v].is_empty() && !self.is_boundary_vertex(v)
    }

    /// Vertices touching at least one interior edge. Only these carry
    /// geometric information; the others are free corners of boundary faces.
    pub fn is_active_vertex(&self, v: usize) -> bool {
        self.vertex_edges[v].iter().any(|&e| !self.edges[e].is_boundary())
    }

    /// A face lies on the boundary when one of its edges does.
    pub fn is_boundary_face(&self, f: usize) -> bool {
        self.face_edges[f]
            .iter()
            .any(|&e| e != usize::MAX && self.edges[e].is_boundary())
    }

    pub fn interior_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices).filter(|&v| self.is_interior_vertex(v)).collect()
    }

    pub fn boundary_faces(&self) -> Vec<usize> {
        (0..self.num_faces()).filter(|&f| self.is_boundary_face(f)).collect()
    }

    pub fn interior_faces(&self) -> Vec<usize> {
        (0..self.num_faces()).filter(|&f| !self.is_boundary_face(f)).collect()
    }

    pub fn num_interior_edges(&self) -> usize {
        self.edges.iter().filter(|e| !e.is_boundary()).count()
    }

    /// Interior edges as `(edge, left face, right face)` in index order.
    pub fn dual_edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(e, edge)| edge.right.map(|r| (e, edge.left, r)))
    }

    /// Neighbours of a face across interior edges, as `(edge, face)`.
    pub fn face_neighbors(&self, f: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.face_edges[f].iter().filter_map(move |&e| {
            let edge = self.edges.get(e)?;
            let r = edge.right?;
            Some((e, if edge.left == f { r } else { edge.left }))
        })
    }

    /// Neighbours of a vertex across interior edges, as `(edge, vertex)`.
    pub fn vertex_neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertex_edges[v].iter().filter_map(move |&e| {
            let edge = &self.edges[e];
            edge.right?;
            Some((e, if edge.tail == v { edge.head } else { edge.tail }))
        })
    }

    /// Boundary edges in counter-clockwise order around the disk.
    pub fn boundary_cycle(&self) -> Vec<usize> {
        let mut from_tail: HashMap<usize, usize> = HashMap::new();
        let mut first = None;
        for (e, edge) in self.edges.iter().enumerate() {
            if edge.is_boundary() {
                from_tail.insert(edge.tail, e);
                first.get_or_insert(e);
            }
        }
        let Some(start) = first else { return Vec::new() };
        let mut cycle = vec![start];
        let mut cur = start;
        while let Some(&n) = from_tail.get(&self.edges[cur].head) {
            if n == start || cycle.len() > from_tail.len() {
                break;
            }
            cycle.push(n);
            cur = n;
        }
        cycle
    }

    /// Position of a vertex inside a face cycle.
    pub fn face_position(&self, f: usize, v: usize) -> Option<usize> {
        self.faces[f].iter().position(|&w| w == v)
    }
}

/// List of violated invariants; empty when valid.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, msg: String) {
        self.violations.push(msg);
    }
}

/// Check the structural invariants with the default degree bound.
pub fn validate_complex(c: &DiskComplex) -> ValidationReport {
    validate_complex_with(c, DEFAULT_MAX_DEGREE)
}

/// Check that `c` is a closed disk with consistent incidences and degrees
/// bounded by `max_degree`.
pub fn validate_complex_with(c: &DiskComplex, max_degree: usize) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let nv = c.num_vertices;
    let nf = c.faces.len();
    if nf == 0 {
        rep.push("complex has no faces".into());
        return rep;
    }

    for (f, cycle) in c.faces.iter().enumerate() {
        if cycle.len() < 3 {
            rep.push(format!("face {f} has degree {} < 3", cycle.len()));
        }
        if cycle.len() > max_degree {
            rep.push(format!("face {f} has degree {} > {max_degree}", cycle.len()));
        }
        if cycle.iter().any(|&v| v >= nv) {
            rep.push(format!("face {f} references a vertex out of range"));
        }
        let mut sorted = cycle.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != cycle.len() {
            rep.push(format!("face {f} repeats a vertex"));
        }
    }

    let mut pairs: HashMap<(usize, usize), usize> = HashMap::new();
    for (e, edge) in c.edges.iter().enumerate() {
        if edge.tail >= nv || edge.head >= nv || edge.left >= nf {
            rep.push(format!("edge {e} references an index out of range"));
            continue;
        }
        if edge.tail == edge.head {
            rep.push(format!("edge {e} is a loop at vertex {}", edge.tail));
        }
        if let Some(r) = edge.right {
            if r >= nf {
                rep.push(format!("edge {e} references a face out of range"));
            } else if r == edge.left {
                rep.push(format!("degenerate edge {e}: left face equals right face ({r})"));
            }
        }
        let key = (edge.tail.min(edge.head), edge.tail.max(edge.head));
        if let Some(prev) = pairs.insert(key, e) {
            rep.push(format!("edges {prev} and {e} join the same vertices"));
        }
    }
    if !rep.is_valid() {
        return rep;
    }

    // every face side must be an edge seen from the correct side, and every
    // edge side must be used by exactly the faces it names
    let mut uses = vec![[0usize; 2]; c.edges.len()];
    for (f, cycle) in c.faces.iter().enumerate() {
        for (k, &e) in c.face_edges[f].iter().enumerate() {
            if e == usize::MAX {
                rep.push(format!(
                    "side {}-{} of face {f} has no matching edge",
                    cycle[k],
                    cycle[(k + 1) % cycle.len()]
                ));
                continue;
            }
            if c.edges[e].left == f && c.edges[e].tail == cycle[k] {
                uses[e][0] += 1;
            } else {
                uses[e][1] += 1;
            }
        }
    }
    for (e, edge) in c.edges.iter().enumerate() {
        let want_right = usize::from(edge.right.is_some());
        if uses[e][0] != 1 || uses[e][1] != want_right {
            rep.push(format!("edge {e} is inconsistent with the face cycles"));
        }
    }

    let chi = nv as i64 - c.edges.len() as i64 + nf as i64;
    if chi != 1 {
        rep.push(format!("Euler characteristic V - E + F = {chi}, expected 1"));
    }

    for v in 0..nv {
        let deg = c.vertex_edges[v].len();
        if deg == 0 {
            rep.push(format!("vertex {v} is isolated"));
        }
        if deg > max_degree {
            rep.push(format!("vertex {v} has degree {deg} > {max_degree}"));
        }
    }

    // boundary: one cycle, each boundary vertex on exactly one in/out edge
    let mut out_deg = vec![0usize; nv];
    let mut in_deg = vec![0usize; nv];
    let mut nb = 0;
    for edge in c.edges.iter().filter(|e| e.is_boundary()) {
        out_deg[edge.tail] += 1;
        in_deg[edge.head] += 1;
        nb += 1;
    }
    if nb == 0 {
        rep.push("complex has no boundary edges".into());
    }
    for v in 0..nv {
        if out_deg[v] > 1 || in_deg[v] > 1 || out_deg[v] != in_deg[v] {
            rep.push(format!("pinch or broken boundary at vertex {v}"));
        }
    }
    if nb > 0 && c.boundary_cycle().len() != nb {
        rep.push("boundary edges do not form a single cycle".into());
    }

    // the faces around every vertex must form a single fan
    for v in 0..nv {
        let star = &c.vertex_edges[v];
        if star.is_empty() {
            continue;
        }
        let mut faces_at: Vec<usize> = c
            .faces
            .iter()
            .enumerate()
            .filter(|(_, cyc)| cyc.contains(&v))
            .map(|(f, _)| f)
            .collect();
        faces_at.sort_unstable();
        let boundary = c.is_boundary_vertex(v);
        let expected = if boundary { star.len() - 1 } else { star.len() };
        if faces_at.len() != expected {
            rep.push(format!("faces around vertex {v} do not form a single fan"));
        }
    }

    // dual connectivity
    let mut seen = vec![false; nf];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(f) = queue.pop_front() {
        for (_, g) in c.face_neighbors(f) {
            if !seen[g] {
                seen[g] = true;
                queue.push_back(g);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        rep.push("dual graph is disconnected".into());
    }
    rep
}

/// Intersection angles on edges. Entries on boundary edges are carried along
/// but never used.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleData {
    pub theta: Vec<f64>,
    pub epsilon0: f64,
}

impl AngleData {
    pub fn constant(c: &DiskComplex, theta: f64, epsilon0: f64) -> Self {
        AngleData {
            theta: vec![theta; c.num_edges()],
            epsilon0,
        }
    }
}

/// Check the angle bounds, the vertex condition at interior vertices, and the
/// loop condition on simple dual loops of at most `loop_cap` edges.
pub fn validate_theta(c: &DiskComplex, th: &AngleData, loop_cap: usize) -> ValidationReport {
    let mut rep = ValidationReport::default();
    if th.theta.len() != c.num_edges() {
        rep.push(format!(
            "angle table has {} entries for {} edges",
            th.theta.len(),
            c.num_edges()
        ));
        return rep;
    }
    let eps = th.epsilon0;
    if !(eps > 0.0 && eps < PI / 2.0) {
        rep.push(format!("epsilon0 = {eps} outside (0, pi/2)"));
    }
    for (e, _, _) in c.dual_edges() {
        let t = th.theta[e];
        if !(t > eps && t < PI - eps) {
            rep.push(format!("edge {e}: angle {t} outside ({eps}, pi - {eps})"));
        }
    }
    for v in c.interior_vertices() {
        let sum: f64 = c.vertex_edges(v).iter().map(|&e| th.theta[e]).sum();
        if (sum - 2.0 * PI).abs() > ANGLE_SUM_TOL {
            rep.push(format!("(A1) vertex {v}: angle sum {sum} != 2 pi"));
        }
    }
    for (faces, edges) in dual_loops(c, loop_cap) {
        if is_vertex_star(c, &edges) {
            continue;
        }
        let sum: f64 = edges.iter().map(|&e| th.theta[e]).sum();
        if sum <= 2.0 * PI + eps {
            rep.push(format!("(A2) dual loop {faces:?}: angle sum {sum} <= 2 pi + epsilon0"));
        }
    }
    rep
}

fn is_vertex_star(c: &DiskComplex, edges: &[usize]) -> bool {
    let e0 = c.edge(edges[0]);
    [e0.tail, e0.head].into_iter().any(|v| {
        c.is_interior_vertex(v)
            && c.vertex_degree(v) == edges.len()
            && edges.iter().all(|&e| {
                let ed = c.edge(e);
                ed.tail == v || ed.head == v
            })
    })
}

/// Simple loops of the dual graph with at most `cap` edges, each reported
/// once as (faces, crossed edges). Loops are anchored at their smallest face.
pub fn dual_loops(c: &DiskComplex, cap: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let nf = c.num_faces();
    let adj: Vec<Vec<(usize, usize)>> = (0..nf).map(|f| c.face_neighbors(f).collect()).collect();
    let mut out = Vec::new();
    let mut dist = vec![usize::MAX; nf];
    let mut touched = Vec::new();
    for start in 0..nf {
        // distances back to the anchor, restricted to larger faces
        for &f in &touched {
            dist[f] = usize::MAX;
        }
        touched.clear();
        dist[start] = 0;
        touched.push(start);
        let mut q = VecDeque::from([start]);
        while let Some(f) = q.pop_front() {
            if dist[f] > cap / 2 {
                continue;
            }
            for &(_, g) in &adj[f] {
                if g >= start && dist[g] == usize::MAX {
                    dist[g] = dist[f] + 1;
                    touched.push(g);
                    q.push_back(g);
                }
            }
        }
        let mut on_path = vec![false; nf];
        let mut faces = vec![start];
        let mut edges = Vec::new();
        on_path[start] = true;
        extend_loop(&adj, start, cap, &dist, &mut on_path, &mut faces, &mut edges, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn extend_loop(
    adj: &[Vec<(usize, usize)>],
    start: usize,
    cap: usize,
    dist: &[usize],
    on_path: &mut [bool],
    faces: &mut Vec<usize>,
    edges: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, Vec<usize>)>,
) {
    let cur = *faces.last().unwrap();
    for &(e, g) in &adj[cur] {
        if edges.last() == Some(&e) {
            continue;
        }
        if g == start {
            // each loop is found in both directions; keep one
            if !edges.is_empty() && edges[0] < e {
                let mut le = edges.clone();
                le.push(e);
                out.push((faces.clone(), le));
            }
            continue;
        }
        if g < start || on_path[g] || dist[g] == usize::MAX {
            continue;
        }
        if edges.len() + 1 + dist[g] > cap {
            continue;
        }
        on_path[g] = true;
        faces.push(g);
        edges.push(e);
        extend_loop(adj, start, cap, dist, on_path, faces, edges, out);
        edges.pop();
        faces.pop();
        on_path[g] = false;
    }
}
