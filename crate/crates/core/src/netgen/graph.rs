use std::sync::Arc;

use crate::error::{Error, Result};

/// Undirected simple graph on nodes `0..n`, stored as sorted neighbor lists
/// in compressed (CSR) form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

impl Graph {
    /// `n` isolated nodes.
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    /// Builds a graph from an edge list. Self-loops, duplicate edges (in
    /// either orientation) and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut normalized: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::param(
                    "edges",
                    format!("edge ({u}, {v}) out of range for {n} nodes"),
                ));
            }
            if u == v {
                return Err(Error::param("edges", format!("self-loop at node {u}")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::param(
                "edges",
                format!("duplicate edge ({}, {})", w[0].0, w[0].1),
            ));
        }
        Ok(Self::from_sorted_unique(n, &normalized))
    }

    /// `edges` must be sorted, deduplicated, with `u < v < n`.
    pub(crate) fn from_sorted_unique(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0usize; offsets[n]];
        // Scanning edges sorted by (u, v) writes each list in increasing order
        // except for the "v side", so sort each list afterwards.
        for &(u, v) in edges {
            neighbors[fill[u]] = v;
            fill[u] += 1;
            neighbors[fill[v]] = u;
            fill[v] += 1;
        }
        for u in 0..n {
            neighbors[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        Graph { offsets, neighbors }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.neighbors[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.offsets.windows(2).map(|w| w[1] - w[0])
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().max().unwrap_or(0)
    }

    pub fn mean_degree(&self) -> f64 {
        if self.node_count() == 0 {
            0.0
        } else {
            self.neighbors.len() as f64 / self.node_count() as f64
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Graph with node `u` renamed to `perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.node_count())?;
        Graph::from_edges(self.node_count(), self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// `y = A x` for the adjacency matrix `A`.
    pub fn adjacency_mul(&self, x: &[f64], y: &mut [f64]) {
        for (u, yu) in y.iter_mut().enumerate() {
            *yu = self.neighbors(u).iter().map(|&v| x[v]).sum();
        }
    }

    /// True when every node can reach every other.
    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::param("perm", "length differs from node count"));
    }
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::param("perm", "not a permutation"));
        }
    }
    Ok(())
}

/// Which of the two layers a node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    /// Layer 1; the novel host population in spillover experiments.
    One,
    /// Layer 2; the reservoir population in spillover experiments.
    Two,
}

impl Layer {
    pub fn index(self) -> usize {
        match self {
            Layer::One => 0,
            Layer::Two => 1,
        }
    }

    pub fn number(self) -> usize {
        self.index() + 1
    }
}

/// Undirected bipartite links between layer-1 nodes and layer-2 nodes.
/// Adjacency is kept from both sides, so `A21 = A12^T` holds by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interlinks {
    pairs: Vec<(usize, usize)>,
    from_layer1: Graphless,
    from_layer2: Graphless,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Graphless {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Graphless {
    fn build(n: usize, pairs: impl Iterator<Item = (usize, usize)> + Clone) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for (a, _) in pairs.clone() {
            offsets[a + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0usize; offsets[n]];
        for (a, b) in pairs {
            targets[fill[a]] = b;
            fill[a] += 1;
        }
        for a in 0..n {
            targets[offsets[a]..offsets[a + 1]].sort_unstable();
        }
        Graphless { offsets, targets }
    }

    fn row(&self, a: usize) -> &[usize] {
        &self.targets[self.offsets[a]..self.offsets[a + 1]]
    }
}

impl Interlinks {
    /// Links between an `n1`-node and an `n2`-node layer. Each pair is
    /// `(layer-1 node, layer-2 node)`; duplicates are rejected.
    pub fn new(n1: usize, n2: usize, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, w)) = pairs.iter().find(|&&(u, w)| u >= n1 || w >= n2) {
            return Err(Error::param(
                "interlinks",
                format!("link ({u}, {w}) out of range for layers of {n1} and {n2} nodes"),
            ));
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::param(
                "interlinks",
                format!("duplicate link ({}, {})", w[0].0, w[0].1),
            ));
        }
        let from_layer1 = Graphless::build(n1, pairs.iter().copied());
        let from_layer2 = Graphless::build(n2, pairs.iter().map(|&(u, w)| (w, u)));
        Ok(Interlinks {
            pairs,
            from_layer1,
            from_layer2,
        })
    }

    pub fn none(n1: usize, n2: usize) -> Self {
        Self::new(n1, n2, Vec::new()).expect("empty link set is valid")
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Sorted `(layer-1 node, layer-2 node)` pairs.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Layer-2 partners of layer-1 node `u`.
    pub fn partners_of_layer1(&self, u: usize) -> &[usize] {
        self.from_layer1.row(u)
    }

    /// Layer-1 partners of layer-2 node `w`.
    pub fn partners_of_layer2(&self, w: usize) -> &[usize] {
        self.from_layer2.row(w)
    }

    /// `y = A12 x`, with `x` indexed by layer 2 and `y` by layer 1.
    pub fn mul_a12(&self, x: &[f64], y: &mut [f64]) {
        for (u, yu) in y.iter_mut().enumerate() {
            *yu = self.partners_of_layer1(u).iter().map(|&w| x[w]).sum();
        }
    }

    /// `y = A21 x = A12^T x`, with `x` indexed by layer 1 and `y` by layer 2.
    pub fn mul_a21(&self, x: &[f64], y: &mut [f64]) {
        for (w, yw) in y.iter_mut().enumerate() {
            *yw = self.partners_of_layer2(w).iter().map(|&u| x[u]).sum();
        }
    }
}

/// Two contact layers joined by inter-layer links.
///
/// Nodes have a global index: layer-1 node `u` is `u`, layer-2 node `w` is
/// `n1 + w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredNetwork {
    layer1: Arc<Graph>,
    layer2: Arc<Graph>,
    interlinks: Interlinks,
}

impl LayeredNetwork {
    pub fn new(
        layer1: impl Into<Arc<Graph>>,
        layer2: impl Into<Arc<Graph>>,
        pairs: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let layer1 = layer1.into();
        let layer2 = layer2.into();
        let interlinks = Interlinks::new(layer1.node_count(), layer2.node_count(), pairs)?;
        Ok(LayeredNetwork {
            layer1,
            layer2,
            interlinks,
        })
    }

    /// Layers with no links between them.
    pub fn decoupled(layer1: impl Into<Arc<Graph>>, layer2: impl Into<Arc<Graph>>) -> Self {
        Self::new(layer1, layer2, Vec::new()).expect("empty link set is valid")
    }

    pub fn layer1(&self) -> &Graph {
        &self.layer1
    }

    pub fn layer2(&self) -> &Graph {
        &self.layer2
    }

    pub fn layer(&self, layer: Layer) -> &Graph {
        match layer {
            Layer::One => &self.layer1,
            Layer::Two => &self.layer2,
        }
    }

    pub fn shared_layers(&self) -> (Arc<Graph>, Arc<Graph>) {
        (Arc::clone(&self.layer1), Arc::clone(&self.layer2))
    }

    pub fn interlinks(&self) -> &Interlinks {
        &self.interlinks
    }

    pub fn n1(&self) -> usize {
        self.layer1.node_count()
    }

    pub fn n2(&self) -> usize {
        self.layer2.node_count()
    }

    /// Total node count `n1 + n2`.
    pub fn node_count(&self) -> usize {
        self.n1() + self.n2()
    }

    pub fn global(&self, layer: Layer, local: usize) -> usize {
        match layer {
            Layer::One => local,
            Layer::Two => self.n1() + local,
        }
    }

    /// Layer and local index of a global node index.
    pub fn locate(&self, global: usize) -> (Layer, usize) {
        if global < self.n1() {
            (Layer::One, global)
        } else {
            (Layer::Two, global - self.n1())
        }
    }

    /// Global indices of the neighbors of a global node, split into
    /// `(neighbors in layer 1, neighbors in layer 2)`.
    pub fn for_each_neighbor(&self, global: usize, mut f: impl FnMut(Layer, usize)) {
        let n1 = self.n1();
        match self.locate(global) {
            (Layer::One, u) => {
                for &v in self.layer1.neighbors(u) {
                    f(Layer::One, v);
                }
                for &w in self.interlinks.partners_of_layer1(u) {
                    f(Layer::Two, n1 + w);
                }
            }
            (Layer::Two, w) => {
                for &u in self.interlinks.partners_of_layer2(w) {
                    f(Layer::One, u);
                }
                for &x in self.layer2.neighbors(w) {
                    f(Layer::Two, n1 + x);
                }
            }
        }
    }

    /// The full `(n1 + n2)`-node graph: both layers plus the interlinks.
    pub fn union_graph(&self) -> Graph {
        let n1 = self.n1();
        let mut edges: Vec<(usize, usize)> = self.layer1.edges().collect();
        edges.extend(self.layer2.edges().map(|(a, b)| (n1 + a, n1 + b)));
        edges.extend(self.interlinks.pairs().iter().map(|&(u, w)| (u, n1 + w)));
        edges.sort_unstable();
        Graph::from_sorted_unique(self.node_count(), &edges)
    }
}
