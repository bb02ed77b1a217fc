//! Partially colored graphs and the structural transformations used by the
//! log-ratio recursion: leaf normalization of pins, attaching and stripping
//! pinned leaves at a root, and the telescoping decomposition.
//!
//! Vertices are dense `usize` ids. Colors are 1-based: a graph with `q`
//! colors uses `1..=q`, matching the indexing of blocked-color vectors.

mod enumerate;
mod families;
mod io;

pub use enumerate::{canonical_code, color_embeddings, enumerate_graphs, CanonicalCode, PinPolicy};
pub use families::{generate_family, FamilyKind};
pub use io::{parse_edge_list, to_edge_list};

use std::collections::{BTreeSet, VecDeque};

use crate::error::{PottsError, Result};

pub type Vertex = usize;
pub type Color = usize;

/// A simple graph with `q` colors and a partial pinning of its vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartiallyColoredGraph {
    q: usize,
    adj: Vec<Vec<Vertex>>,
    pins: Vec<Option<Color>>,
}

impl PartiallyColoredGraph {
    /// Builds an unpinned graph, rejecting self-loops, parallel edges and
    /// out-of-range endpoints.
    pub fn new<I>(n: usize, q: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        if q == 0 {
            return Err(PottsError::InvalidGraph("q must be positive".into()));
        }
        let mut g = PartiallyColoredGraph {
            q,
            adj: vec![Vec::new(); n],
            pins: vec![None; n],
        };
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn from_parts<I, P>(n: usize, q: usize, edges: I, pins: P) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
        P: IntoIterator<Item = (Vertex, Color)>,
    {
        let mut g = Self::new(n, q, edges)?;
        for (v, c) in pins {
            g.set_pin(v, Some(c))?;
        }
        Ok(g)
    }

    pub fn with_pin(mut self, v: Vertex, color: Color) -> Result<Self> {
        self.set_pin(v, Some(color))?;
        Ok(self)
    }

    pub fn set_pin(&mut self, v: Vertex, color: Option<Color>) -> Result<()> {
        self.check_vertex(v)?;
        if let Some(c) = color {
            self.check_color(c)?;
        }
        self.pins[v] = color;
        Ok(())
    }

    pub fn add_vertex(&mut self, pin: Option<Color>) -> Result<Vertex> {
        if let Some(c) = pin {
            self.check_color(c)?;
        }
        self.adj.push(Vec::new());
        self.pins.push(pin);
        Ok(self.adj.len() - 1)
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(PottsError::InvalidGraph(format!("self-loop at vertex {u}")));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Err(PottsError::InvalidGraph(format!("parallel edge {u}-{v}"))),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(())
            }
        }
    }

    /// Same graph with a different number of colors.
    pub fn with_q(&self, q: usize) -> Result<Self> {
        if q == 0 {
            return Err(PottsError::InvalidGraph("q must be positive".into()));
        }
        if let Some(c) = self.pins.iter().flatten().find(|&&c| c > q) {
            return Err(PottsError::InvalidColor { color: *c, q });
        }
        let mut g = self.clone();
        g.q = q;
        Ok(g)
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v >= self.adj.len() {
            return Err(PottsError::InvalidGraph(format!(
                "vertex {v} out of range (n = {})",
                self.adj.len()
            )));
        }
        Ok(())
    }

    fn check_color(&self, c: Color) -> Result<()> {
        if c == 0 || c > self.q {
            return Err(PottsError::InvalidColor { color: c, q: self.q });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn check_max_degree(&self, delta: usize) -> Result<()> {
        let max_degree = self.max_degree();
        if max_degree > delta {
            return Err(PottsError::DegreeExceeded { max_degree, delta });
        }
        Ok(())
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn pin(&self, v: Vertex) -> Option<Color> {
        self.pins[v]
    }

    pub fn pins(&self) -> &[Option<Color>] {
        &self.pins
    }

    pub fn is_free(&self, v: Vertex) -> bool {
        self.pins[v].is_none()
    }

    pub fn free_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n()).filter(|&v| self.is_free(v))
    }

    pub fn free_count(&self) -> usize {
        self.pins.iter().filter(|p| p.is_none()).count()
    }

    /// Number of free neighbors of `v`.
    pub fn free_degree(&self, v: Vertex) -> usize {
        self.adj[v].iter().filter(|&&u| self.is_free(u)).count()
    }

    /// Colors pinned on neighbors of `v`, or every color if `v` is pinned.
    pub fn blocked_colors(&self, v: Vertex) -> BTreeSet<Color> {
        if self.pins[v].is_some() {
            return (1..=self.q).collect();
        }
        self.adj[v].iter().filter_map(|&u| self.pins[u]).collect()
    }

    pub fn pins_are_leaves(&self) -> bool {
        (0..self.n()).all(|v| self.is_free(v) || self.degree(v) == 1)
    }

    pub fn pins_independent(&self) -> bool {
        self.edges().all(|(u, v)| self.is_free(u) || self.is_free(v))
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.component_of(0).len() == self.n()
    }

    /// Vertices reachable from `v`, sorted.
    pub fn component_of(&self, v: Vertex) -> Vec<Vertex> {
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::from([v]);
        seen[v] = true;
        while let Some(u) = queue.pop_front() {
            for &x in &self.adj[u] {
                if !seen[x] {
                    seen[x] = true;
                    queue.push_back(x);
                }
            }
        }
        (0..self.n()).filter(|&u| seen[u]).collect()
    }

    /// Deletes every vertex with `remove[v] == true`. Returns the new graph
    /// and the old-to-new vertex map.
    pub fn remove_vertices(&self, remove: &[bool]) -> (Self, Vec<Option<Vertex>>) {
        let mut map = vec![None; self.n()];
        let mut next = 0;
        for v in 0..self.n() {
            if !remove[v] {
                map[v] = Some(next);
                next += 1;
            }
        }
        let mut adj = vec![Vec::new(); next];
        let mut pins = vec![None; next];
        for v in 0..self.n() {
            if let Some(nv) = map[v] {
                pins[nv] = self.pins[v];
                adj[nv] = self.adj[v].iter().filter_map(|&u| map[u]).collect();
            }
        }
        (PartiallyColoredGraph { q: self.q, adj, pins }, map)
    }

    pub fn remove_vertex(&self, v: Vertex) -> (Self, Vec<Option<Vertex>>) {
        let mut remove = vec![false; self.n()];
        remove[v] = true;
        self.remove_vertices(&remove)
    }

    /// Recolors pins: a vertex pinned to `c` becomes pinned to `map[c - 1]`.
    /// `map` must cover every pinned color; with a permutation of `1..=q`
    /// this is a color relabeling.
    pub fn relabel_colors(&self, map: &[Color]) -> Result<Self> {
        let mut g = self.clone();
        for p in g.pins.iter_mut().flatten() {
            let c = *map.get(*p - 1).ok_or_else(|| {
                PottsError::InvalidGraph(format!("color map does not cover color {p}"))
            })?;
            if c == 0 || c > self.q {
                return Err(PottsError::InvalidColor { color: c, q: self.q });
            }
            *p = c;
        }
        Ok(g)
    }

    /// Replaces every pinned vertex of degree `d > 1` by `d` pinned leaves,
    /// one per former neighbor, without changing the partition function.
    ///
    /// Pinned vertices keep their id and stay attached to their first free
    /// neighbor; extra copies are appended. An edge between two pinned
    /// vertices only contributes a constant factor: it is dropped when the
    /// colors differ and kept as a separate pinned `K2` when they agree.
    pub fn pin_to_leaves(&self) -> Self {
        let already = (0..self.n()).all(|v| {
            self.is_free(v) || (self.degree(v) == 1 && self.is_free(self.adj[v][0]))
        });
        if already {
            return self.clone();
        }
        let mut out = PartiallyColoredGraph {
            q: self.q,
            adj: vec![Vec::new(); self.n()],
            pins: self.pins.clone(),
        };
        for (u, v) in self.edges() {
            if self.is_free(u) && self.is_free(v) {
                out.add_edge(u, v).expect("edge of a simple graph");
            }
        }
        for p in 0..self.n() {
            let Some(color) = self.pins[p] else { continue };
            let mut attached = false;
            for &u in &self.adj[p] {
                match self.pins[u] {
                    None => {
                        let leaf = if attached {
                            out.add_vertex(Some(color)).expect("valid pin")
                        } else {
                            attached = true;
                            p
                        };
                        out.add_edge(leaf, u).expect("fresh edge");
                    }
                    Some(other) if u > p && other == color => {
                        let a = out.add_vertex(Some(color)).expect("valid pin");
                        let b = out.add_vertex(Some(color)).expect("valid pin");
                        out.add_edge(a, b).expect("fresh edge");
                    }
                    Some(_) => {}
                }
            }
        }
        out
    }
}

/// A partially colored graph together with a free root vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedGraph {
    graph: PartiallyColoredGraph,
    root: Vertex,
}

impl RootedGraph {
    pub fn new(graph: PartiallyColoredGraph, root: Vertex) -> Result<Self> {
        if root >= graph.n() || !graph.is_free(root) {
            return Err(PottsError::InvalidRoot { vertex: root });
        }
        Ok(RootedGraph { graph, root })
    }

    pub fn graph(&self) -> &PartiallyColoredGraph {
        &self.graph
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn q(&self) -> usize {
        self.graph.q
    }

    pub fn into_graph(self) -> PartiallyColoredGraph {
        self.graph
    }

    /// Membership in the class of connected graphs of maximum degree at most
    /// `delta` whose pins are leaves forming an independent set.
    pub fn in_class(&self, delta: usize) -> bool {
        let g = &self.graph;
        g.max_degree() <= delta && g.is_connected() && g.pins_are_leaves() && g.pins_independent()
    }

    pub fn check_in_class(&self, delta: usize) -> Result<()> {
        self.graph.check_max_degree(delta)?;
        if !self.in_class(delta) {
            return Err(PottsError::InvalidGraph(
                "rooted graph must be connected with pinned leaves forming an independent set"
                    .into(),
            ));
        }
        Ok(())
    }

    /// Counts the pinned neighbors of the root per color.
    pub fn blocked_color_vector(&self) -> BlockedColorVector {
        let g = &self.graph;
        let mut counts = vec![0u32; g.q];
        for &u in g.neighbors(self.root) {
            if let Some(c) = g.pin(u) {
                counts[c - 1] += 1;
            }
        }
        BlockedColorVector {
            counts,
            free_degree: g.free_degree(self.root),
        }
    }

    /// The graph with an extra leaf pinned to `color` hanging off the root.
    pub fn attach_pinned_leaf(&self, color: Color) -> Result<RootedGraph> {
        let mut g = self.graph.clone();
        let leaf = g.add_vertex(Some(color))?;
        g.add_edge(self.root, leaf)?;
        Ok(RootedGraph { graph: g, root: self.root })
    }

    /// Removes every pinned neighbor of the root.
    pub fn strip_pinned_neighbors(&self) -> RootedGraph {
        let g = &self.graph;
        let mut remove = vec![false; g.n()];
        let mut any = false;
        for &u in g.neighbors(self.root) {
            if !g.is_free(u) {
                remove[u] = true;
                any = true;
            }
        }
        if !any {
            return self.clone();
        }
        let (graph, map) = g.remove_vertices(&remove);
        RootedGraph {
            graph,
            root: map[self.root].expect("root is free"),
        }
    }

    /// Telescoping decomposition of the ratio `Z^{l1} / Z^{l2}` at the root.
    ///
    /// Term `i` lives on `G - v` where the neighbors before position `i` in
    /// `order` receive a leaf pinned to `l2`, the neighbors after it a leaf
    /// pinned to `l1`, and neighbor `i` a fresh free leaf which becomes the
    /// root of `hat`. `order` defaults to ascending vertex id.
    pub fn telescoping_decompose(
        &self,
        l1: Color,
        l2: Color,
        order: Option<&[Vertex]>,
    ) -> Result<Vec<TelescopeTerm>> {
        let g = &self.graph;
        g.check_color(l1)?;
        g.check_color(l2)?;
        if l1 == l2 {
            return Err(PottsError::Domain("telescoping needs two distinct colors".into()));
        }
        let nbrs = g.neighbors(self.root);
        let order: Vec<Vertex> = match order {
            Some(o) => {
                let mut sorted = o.to_vec();
                sorted.sort_unstable();
                if sorted != nbrs {
                    return Err(PottsError::Domain(
                        "order must be a permutation of the root's neighbors".into(),
                    ));
                }
                o.to_vec()
            }
            None => nbrs.to_vec(),
        };
        let (base, map) = g.remove_vertex(self.root);
        let mut terms = Vec::with_capacity(order.len());
        for i in 0..order.len() {
            let mut hat = base.clone();
            let mut hat_root = None;
            for (j, &u) in order.iter().enumerate() {
                let pin = match j.cmp(&i) {
                    std::cmp::Ordering::Less => Some(l2),
                    std::cmp::Ordering::Greater => Some(l1),
                    std::cmp::Ordering::Equal => None,
                };
                let leaf = hat.add_vertex(pin)?;
                hat.add_edge(leaf, map[u].expect("neighbor survives"))?;
                if pin.is_none() {
                    hat_root = Some(leaf);
                }
            }
            let hat_root = hat_root.expect("position i has a free leaf");
            let neighbor = map[order[i]].expect("neighbor survives");
            let (reduced_graph, _) = hat.remove_vertex(hat_root);
            // hat_root is the largest id, so `neighbor` keeps its id.
            let reduced = RootedGraph::new(reduced_graph, neighbor).ok();
            terms.push(TelescopeTerm {
                hat: RootedGraph { graph: hat, root: hat_root },
                reduced,
            });
        }
        Ok(terms)
    }
}

/// One step of the telescoping decomposition: `(Ĝ_i, v̂_i)` and `(G_i, v_i)`.
/// `reduced` is `None` when the neighbor `v_i` is itself pinned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TelescopeTerm {
    pub hat: RootedGraph,
    pub reduced: Option<RootedGraph>,
}

/// Number of pinned neighbors of a root per color.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockedColorVector {
    counts: Vec<u32>,
    free_degree: usize,
}

impl BlockedColorVector {
    pub fn new(counts: Vec<u32>, free_degree: usize) -> Self {
        BlockedColorVector { counts, free_degree }
    }

    pub fn zero(q: usize) -> Self {
        BlockedColorVector { counts: vec![0; q], free_degree: 0 }
    }

    pub fn q(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Count for a 1-based color.
    pub fn get(&self, color: Color) -> u32 {
        self.counts[color - 1]
    }

    /// Number of blocked colors (nonzero entries).
    pub fn blocked(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    pub fn pinned_neighbors(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn free_degree(&self) -> usize {
        self.free_degree
    }

    pub fn zero_entries(&self) -> usize {
        self.counts.iter().filter(|&&c| c == 0).count()
    }
}
