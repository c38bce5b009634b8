//! Cyclically ordered order trees, finitely modelled.
//!
//! A tree is a finite graph together with cataclysm clusters. A cluster
//! has a base node, two or more top nodes and a cyclic order on the stem
//! germ plus the tops; the stem is a virtual edge from the base up to the
//! cluster, so the file format stores no edges into a cluster. The
//! expansion graph (nodes plus one hub per cluster, real edges plus
//! base-hub and hub-top edges) must be a single tree; this is the finite
//! version of contracting each cluster to a point.
//!
//! Geodesic spines traverse a hub between two tops as a cusp jump and
//! between base and a top as a stem segment. Ends are leaf nodes; the
//! circular order on ends evaluates, for each leaf triple, the local
//! cyclic order at the median of the triple in the expansion tree, which
//! is either a vertex order or a cluster order.
//!
//! The cancellation axiom for cyclic words of germs is automatic here:
//! local orders are stored as honest cyclic listings, so no reduced-word
//! bookkeeping is needed in the finite model.

use crate::circord::{cyclic_sign, CircularOrder};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("unknown germ label {0:?} at node {1:?}")]
    UnknownGerm(String, String),
    #[error("edge {0:?} - {1:?} is a self loop")]
    SelfLoop(String, String),
    #[error("duplicate edge {0:?} - {1:?}")]
    DuplicateEdge(String, String),
    #[error("cluster {0:?} needs at least two tops")]
    ClusterTooSmall(String),
    #[error("cluster {0:?} ill-formed: {1}")]
    BadCluster(String, String),
    #[error("node {0:?} tag inconsistent: {1}")]
    TagMismatch(String, String),
    #[error("vertex order at {0:?} is not a listing of the germs there")]
    BadVertexOrder(String),
    #[error("expansion graph is not a tree: {0}")]
    NotATree(String),
    #[error("missing local order at node {0:?}")]
    MissingLocalOrder(String),
    #[error("missing local order at needed node {0:?}")]
    MissingNeededOrder(String),
    #[error("nodes must be distinct")]
    NotDistinct,
    #[error("map is not a tree automorphism: {0}")]
    BadMap(String),
    #[error("node {0:?} is not regular of the required degree")]
    NotRecalibratable(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeTag {
    Regular,
    CataclysmTop,
    Leaf,
}

/// Germ of a segment at a node: along a real edge toward a neighbour, or
/// into an incident cluster (upward at the base, downward at a top).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Germ {
    Node(usize),
    Cluster(usize),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawNode {
    pub id: String,
    pub tag: NodeTag,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawCluster {
    pub id: String,
    pub stem: String,
    pub tops: Vec<String>,
    pub order: Vec<String>,
}

/// Exchange format for trees.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TreeFile {
    pub nodes: Vec<RawNode>,
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub vertex_orders: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub clusters: Vec<RawCluster>,
}

#[derive(Clone, Debug)]
pub struct Cluster {
    pub id: String,
    pub base: usize,
    pub tops: Vec<usize>,
    /// Cyclic listing over node indices: the base entry stands for the
    /// stem germ, top entries for the germs through each top.
    pub order: Vec<usize>,
}

/// Vertex of the expansion graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExVertex {
    Node(usize),
    Hub(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpineStep {
    /// Travel along a real edge.
    Edge { from: usize, to: usize },
    /// Travel through a cluster between its base and one top (the stem).
    Stem { cluster: usize, from: usize, to: usize },
    /// Jump across a cusp: both endpoints are tops of the cluster.
    CuspJump { cluster: usize, from: usize, to: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinePath {
    pub from: usize,
    pub to: usize,
    pub steps: Vec<SpineStep>,
}

/// Divergence locus of two spines with a common start.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchLocus {
    Node(usize),
    Cusp { cluster: usize, pair: (usize, usize) },
}

#[derive(Clone, Debug)]
pub struct CyclicOrderTree {
    node_ids: Vec<String>,
    tags: Vec<NodeTag>,
    node_index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    clusters: Vec<Cluster>,
    cluster_index: HashMap<String, usize>,
    vertex_orders: HashMap<usize, Vec<Germ>>,
    /// adjacency of the expansion graph
    adj: HashMap<ExVertex, Vec<ExVertex>>,
}

impl CyclicOrderTree {
    pub fn from_file(file: &TreeFile) -> Result<Self, TreeError> {
        let mut node_index = HashMap::new();
        let mut node_ids = Vec::new();
        let mut tags = Vec::new();
        for n in &file.nodes {
            if node_index.insert(n.id.clone(), node_ids.len()).is_some() {
                return Err(TreeError::DuplicateId(n.id.clone()));
            }
            node_ids.push(n.id.clone());
            tags.push(n.tag);
        }
        let look = |id: &String| -> Result<usize, TreeError> {
            node_index
                .get(id)
                .copied()
                .ok_or_else(|| TreeError::UnknownNode(id.clone()))
        };
        let mut edges = Vec::new();
        let mut edge_set = HashSet::new();
        for (a, b) in &file.edges {
            let (ia, ib) = (look(a)?, look(b)?);
            if ia == ib {
                return Err(TreeError::SelfLoop(a.clone(), b.clone()));
            }
            let key = (ia.min(ib), ia.max(ib));
            if !edge_set.insert(key) {
                return Err(TreeError::DuplicateEdge(a.clone(), b.clone()));
            }
            edges.push(key);
        }
        let mut cluster_index = HashMap::new();
        let mut clusters = Vec::new();
        let mut top_owner: HashMap<usize, usize> = HashMap::new();
        for c in &file.clusters {
            if node_index.contains_key(&c.id) || cluster_index.contains_key(&c.id) {
                return Err(TreeError::DuplicateId(c.id.clone()));
            }
            if c.tops.len() < 2 {
                return Err(TreeError::ClusterTooSmall(c.id.clone()));
            }
            let base = look(&c.stem)?;
            let mut tops = Vec::new();
            for t in &c.tops {
                let it = look(t)?;
                if it == base {
                    return Err(TreeError::BadCluster(c.id.clone(), "base listed as top".into()));
                }
                if tops.contains(&it) {
                    return Err(TreeError::BadCluster(c.id.clone(), format!("top {t:?} repeated")));
                }
                if top_owner.insert(it, clusters.len()).is_some() {
                    return Err(TreeError::BadCluster(
                        c.id.clone(),
                        format!("top {t:?} already in another cluster"),
                    ));
                }
                if tags[it] != NodeTag::CataclysmTop {
                    return Err(TreeError::TagMismatch(
                        t.clone(),
                        "cluster top must be tagged cataclysm-top".into(),
                    ));
                }
                tops.push(it);
            }
            // order: a cyclic listing of the stem germ (named by the base
            // node) and every top
            let mut expected: HashSet<usize> = tops.iter().copied().collect();
            expected.insert(base);
            let mut order = Vec::new();
            for label in &c.order {
                let il = look(label).map_err(|_| {
                    TreeError::BadCluster(c.id.clone(), format!("order label {label:?} unknown"))
                })?;
                if !expected.remove(&il) {
                    return Err(TreeError::BadCluster(
                        c.id.clone(),
                        format!("order label {label:?} repeated or foreign"),
                    ));
                }
                order.push(il);
            }
            if !expected.is_empty() {
                return Err(TreeError::BadCluster(c.id.clone(), "order misses germs".into()));
            }
            cluster_index.insert(c.id.clone(), clusters.len());
            clusters.push(Cluster { id: c.id.clone(), base, tops, order });
        }
        for (i, tag) in tags.iter().enumerate() {
            if *tag == NodeTag::CataclysmTop && !top_owner.contains_key(&i) {
                return Err(TreeError::TagMismatch(
                    node_ids[i].clone(),
                    "tagged cataclysm-top but in no cluster".into(),
                ));
            }
        }

        let mut tree = CyclicOrderTree {
            node_ids,
            tags,
            node_index,
            edges,
            clusters,
            cluster_index,
            vertex_orders: HashMap::new(),
            adj: HashMap::new(),
        };
        tree.build_adjacency();
        tree.check_tree_shape()?;
        tree.check_leaf_tags()?;

        for (id, listing) in &file.vertex_orders {
            let v = tree
                .node_index
                .get(id)
                .copied()
                .ok_or_else(|| TreeError::UnknownNode(id.clone()))?;
            let germs = tree.germs_at(v);
            let mut expected: HashSet<Germ> = germs.iter().copied().collect();
            let mut resolved = Vec::new();
            for label in listing {
                let g = tree
                    .resolve_germ_label(label)
                    .ok_or_else(|| TreeError::UnknownGerm(label.clone(), id.clone()))?;
                if !expected.remove(&g) {
                    return Err(TreeError::BadVertexOrder(id.clone()));
                }
                resolved.push(g);
            }
            if !expected.is_empty() {
                return Err(TreeError::BadVertexOrder(id.clone()));
            }
            tree.vertex_orders.insert(v, resolved);
        }
        Ok(tree)
    }

    fn resolve_germ_label(&self, label: &str) -> Option<Germ> {
        if let Some(&v) = self.node_index.get(label) {
            return Some(Germ::Node(v));
        }
        self.cluster_index.get(label).map(|&c| Germ::Cluster(c))
    }

    fn build_adjacency(&mut self) {
        let mut adj: HashMap<ExVertex, Vec<ExVertex>> = HashMap::new();
        for i in 0..self.node_ids.len() {
            adj.entry(ExVertex::Node(i)).or_default();
        }
        for &(a, b) in &self.edges {
            adj.get_mut(&ExVertex::Node(a)).unwrap().push(ExVertex::Node(b));
            adj.get_mut(&ExVertex::Node(b)).unwrap().push(ExVertex::Node(a));
        }
        for (ci, c) in self.clusters.iter().enumerate() {
            let hub = ExVertex::Hub(ci);
            let mut hub_adj = vec![ExVertex::Node(c.base)];
            adj.get_mut(&ExVertex::Node(c.base)).unwrap().push(hub);
            for &t in &c.tops {
                hub_adj.push(ExVertex::Node(t));
                adj.get_mut(&ExVertex::Node(t)).unwrap().push(hub);
            }
            adj.insert(hub, hub_adj);
        }
        self.adj = adj;
    }

    fn check_tree_shape(&self) -> Result<(), TreeError> {
        let vertices = self.adj.len();
        if vertices == 0 {
            return Err(TreeError::NotATree("empty graph".into()));
        }
        let edge_count: usize = self.edges.len()
            + self.clusters.iter().map(|c| 1 + c.tops.len()).sum::<usize>();
        if edge_count + 1 != vertices {
            return Err(TreeError::NotATree(format!(
                "{edge_count} expansion edges on {vertices} vertices"
            )));
        }
        // connectivity
        let start = *self.adj.keys().next().unwrap();
        let mut seen = HashSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &self.adj[&v] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        if seen.len() != vertices {
            return Err(TreeError::NotATree("disconnected".into()));
        }
        Ok(())
    }

    fn check_leaf_tags(&self) -> Result<(), TreeError> {
        for v in 0..self.node_ids.len() {
            let deg = self.adj[&ExVertex::Node(v)].len();
            match self.tags[v] {
                NodeTag::Leaf => {
                    if deg != 1 {
                        return Err(TreeError::TagMismatch(
                            self.node_ids[v].clone(),
                            format!("leaf with expansion degree {deg}"),
                        ));
                    }
                }
                NodeTag::Regular => {
                    if deg < 2 {
                        return Err(TreeError::TagMismatch(
                            self.node_ids[v].clone(),
                            "regular node of degree < 2 must be a leaf".into(),
                        ));
                    }
                }
                NodeTag::CataclysmTop => {}
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.node_ids.len()
    }

    pub fn node_id(&self, v: usize) -> &str {
        &self.node_ids[v]
    }

    pub fn tag(&self, v: usize) -> NodeTag {
        self.tags[v]
    }

    pub fn node(&self, id: &str) -> Result<usize, TreeError> {
        self.node_index
            .get(id)
            .copied()
            .ok_or_else(|| TreeError::UnknownNode(id.to_string()))
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.node_ids.len())
            .filter(|&v| self.tags[v] == NodeTag::Leaf)
            .collect()
    }

    /// Germs at a node, in a fixed construction order.
    pub fn germs_at(&self, v: usize) -> Vec<Germ> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == v {
                out.push(Germ::Node(b));
            } else if b == v {
                out.push(Germ::Node(a));
            }
        }
        for (ci, c) in self.clusters.iter().enumerate() {
            if c.base == v || c.tops.contains(&v) {
                out.push(Germ::Cluster(ci));
            }
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[&ExVertex::Node(v)].len()
    }

    pub fn vertex_order(&self, v: usize) -> Option<&[Germ]> {
        self.vertex_orders.get(&v).map(|l| l.as_slice())
    }

    /// Replaces the listing at `v`; the new listing must be a
    /// permutation of the germs at `v`.
    pub fn set_vertex_order(&mut self, v: usize, listing: Vec<Germ>) -> Result<(), TreeError> {
        let mut expected: HashSet<Germ> = self.germs_at(v).into_iter().collect();
        for g in &listing {
            if !expected.remove(g) {
                return Err(TreeError::BadVertexOrder(self.node_ids[v].clone()));
            }
        }
        if !expected.is_empty() {
            return Err(TreeError::BadVertexOrder(self.node_ids[v].clone()));
        }
        self.vertex_orders.insert(v, listing);
        Ok(())
    }

    pub fn germ_label(&self, g: Germ) -> String {
        match g {
            Germ::Node(v) => self.node_ids[v].clone(),
            Germ::Cluster(c) => self.clusters[c].id.clone(),
        }
    }

    /// Unique expansion-tree path between two nodes, as vertex sequence.
    fn ex_path(&self, from: usize, to: usize) -> Vec<ExVertex> {
        let src = ExVertex::Node(from);
        let dst = ExVertex::Node(to);
        let mut parent: HashMap<ExVertex, ExVertex> = HashMap::new();
        let mut stack = vec![src];
        parent.insert(src, src);
        while let Some(v) = stack.pop() {
            if v == dst {
                break;
            }
            for &w in &self.adj[&v] {
                if !parent.contains_key(&w) {
                    parent.insert(w, v);
                    stack.push(w);
                }
            }
        }
        let mut path = vec![dst];
        let mut cur = dst;
        while cur != src {
            cur = parent[&cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Geodesic spine between two nodes. Crossing a hub between two tops
    /// is a cusp jump; between base and top it is a stem traversal.
    pub fn spine(&self, from: &str, to: &str) -> Result<SpinePath, TreeError> {
        let (a, b) = (self.node(from)?, self.node(to)?);
        Ok(self.spine_idx(a, b))
    }

    pub fn spine_idx(&self, a: usize, b: usize) -> SpinePath {
        let path = if a == b { vec![ExVertex::Node(a)] } else { self.ex_path(a, b) };
        let mut steps = Vec::new();
        let mut i = 0;
        while i + 1 < path.len() {
            match (path[i], path[i + 1]) {
                (ExVertex::Node(x), ExVertex::Node(y)) => {
                    steps.push(SpineStep::Edge { from: x, to: y });
                    i += 1;
                }
                (ExVertex::Node(x), ExVertex::Hub(c)) => {
                    let ExVertex::Node(y) = path[i + 2] else { unreachable!() };
                    let cl = &self.clusters[c];
                    let step = if x == cl.base || y == cl.base {
                        SpineStep::Stem { cluster: c, from: x, to: y }
                    } else {
                        SpineStep::CuspJump { cluster: c, from: x, to: y }
                    };
                    steps.push(step);
                    i += 2;
                }
                _ => unreachable!("hubs are never adjacent"),
            }
        }
        SpinePath { from: a, to: b, steps }
    }

    /// Where the spines [y, x] and [y, z] diverge: a node, or a cusp of
    /// a cluster when both spines climb the stem and separate onto
    /// different tops. Symmetric in x and z.
    pub fn branch_locus(&self, x: &str, y: &str, z: &str) -> Result<BranchLocus, TreeError> {
        let (ix, iy, iz) = (self.node(x)?, self.node(y)?, self.node(z)?);
        if ix == iy || iy == iz || ix == iz {
            return Err(TreeError::NotDistinct);
        }
        Ok(self.branch_locus_idx(ix, iy, iz))
    }

    pub fn branch_locus_idx(&self, x: usize, y: usize, z: usize) -> BranchLocus {
        let p1 = self.ex_path(y, x);
        let p2 = self.ex_path(y, z);
        let shared = p1.iter().zip(&p2).take_while(|(a, b)| a == b).count();
        if shared == p1.len() || shared == p2.len() {
            // one endpoint lies on the other spine
            let last = p1[shared - 1];
            let ExVertex::Node(v) = last else { unreachable!("paths end at nodes") };
            return BranchLocus::Node(v);
        }
        match p1[shared - 1] {
            ExVertex::Node(v) => BranchLocus::Node(v),
            ExVertex::Hub(c) => {
                let ExVertex::Node(prev) = p1[shared - 2] else { unreachable!() };
                let ExVertex::Node(n1) = p1[shared] else { unreachable!() };
                let ExVertex::Node(n2) = p2[shared] else { unreachable!() };
                if prev == self.clusters[c].base {
                    BranchLocus::Cusp { cluster: c, pair: (n1, n2) }
                } else {
                    BranchLocus::Node(prev)
                }
            }
        }
    }

    /// Median of three distinct leaves in the expansion tree, plus the
    /// germ toward each of them.
    fn median_with_germs(&self, a: usize, b: usize, c: usize) -> (ExVertex, [Germ; 3]) {
        let p1 = self.ex_path(a, b);
        let p2 = self.ex_path(a, c);
        let shared = p1.iter().zip(&p2).take_while(|(x, y)| x == y).count();
        debug_assert!(shared >= 2 && shared < p1.len() && shared < p2.len());
        let m = p1[shared - 1];
        let toward = |w: ExVertex| -> Germ {
            match (m, w) {
                (ExVertex::Node(_), ExVertex::Node(u)) => Germ::Node(u),
                (ExVertex::Node(_), ExVertex::Hub(h)) => Germ::Cluster(h),
                (ExVertex::Hub(_), ExVertex::Node(u)) => Germ::Node(u),
                _ => unreachable!(),
            }
        };
        let g_a = toward(p1[shared - 2]);
        let g_b = toward(p1[shared]);
        let g_c = toward(p2[shared]);
        (m, [g_a, g_b, g_c])
    }

    /// Sign of three distinct germs in the local cyclic order at `m`.
    fn local_sign(&self, m: ExVertex, germs: [Germ; 3]) -> Result<i8, TreeError> {
        match m {
            ExVertex::Node(v) => {
                let listing = self
                    .vertex_orders
                    .get(&v)
                    .ok_or_else(|| TreeError::MissingNeededOrder(self.node_ids[v].clone()))?;
                let pos = |g: Germ| listing.iter().position(|&x| x == g).unwrap();
                Ok(cyclic_sign(listing.len(), pos(germs[0]), pos(germs[1]), pos(germs[2])))
            }
            ExVertex::Hub(ci) => {
                let listing = &self.clusters[ci].order;
                let pos = |g: Germ| -> usize {
                    let Germ::Node(u) = g else { unreachable!("hub germs are nodes") };
                    listing.iter().position(|&x| x == u).unwrap()
                };
                Ok(cyclic_sign(listing.len(), pos(germs[0]), pos(germs[1]), pos(germs[2])))
            }
        }
    }

    /// The circular order on ends (leaves). For each triple the sign is
    /// the local cyclic order, at the median of the triple, of the three
    /// germs pointing toward the triple.
    pub fn end_circular_order(&self) -> Result<CircularOrder, TreeError> {
        let leaves = self.leaves();
        let ids: Vec<String> = leaves.iter().map(|&v| self.node_ids[v].clone()).collect();
        let mut order = CircularOrder::from_cyclic_listing(&ids).map_err(|_| {
            TreeError::NotATree("tree needs at least one leaf".into())
        })?;
        for i in 0..leaves.len() {
            for j in i + 1..leaves.len() {
                for k in j + 1..leaves.len() {
                    let (m, germs) = self.median_with_germs(leaves[i], leaves[j], leaves[k]);
                    let sign = self.local_sign(m, germs)?;
                    if sign != order.eval_idx(i, j, k) {
                        order.flip_triple(i, j, k);
                    }
                }
            }
        }
        Ok(order)
    }

    /// Checks a node bijection for being a structure-preserving
    /// automorphism; on success returns the induced leaf permutation as
    /// (leaf, image) pairs.
    pub fn check_automorphism(
        &self,
        map: &BTreeMap<String, String>,
    ) -> Result<Vec<(String, String)>, TreeError> {
        let n = self.node_ids.len();
        let mut f = vec![usize::MAX; n];
        let mut hit = vec![false; n];
        for (k, v) in map {
            let (ik, iv) = (self.node(k)?, self.node(v)?);
            f[ik] = iv;
            if std::mem::replace(&mut hit[iv], true) {
                return Err(TreeError::BadMap(format!("image {v:?} repeated")));
            }
        }
        if f.contains(&usize::MAX) {
            return Err(TreeError::BadMap("map does not cover all nodes".into()));
        }
        for v in 0..n {
            if self.tags[v] != self.tags[f[v]] {
                return Err(TreeError::BadMap(format!(
                    "tag changes at {:?}",
                    self.node_ids[v]
                )));
            }
        }
        let edge_set: HashSet<(usize, usize)> = self.edges.iter().copied().collect();
        for &(a, b) in &self.edges {
            let (fa, fb) = (f[a].min(f[b]), f[a].max(f[b]));
            if !edge_set.contains(&(fa, fb)) {
                return Err(TreeError::BadMap(format!(
                    "edge {:?}-{:?} not preserved",
                    self.node_ids[a], self.node_ids[b]
                )));
            }
        }
        // cluster correspondence via base images
        let mut cluster_map = vec![usize::MAX; self.clusters.len()];
        for (ci, c) in self.clusters.iter().enumerate() {
            let target_tops: HashSet<usize> = c.tops.iter().map(|&t| f[t]).collect();
            let found = self.clusters.iter().position(|d| {
                d.base == f[c.base] && d.tops.iter().all(|t| target_tops.contains(t))
                    && d.tops.len() == target_tops.len()
            });
            match found {
                Some(di) => cluster_map[ci] = di,
                None => {
                    return Err(TreeError::BadMap(format!("cluster {:?} not preserved", c.id)))
                }
            }
        }
        for (ci, c) in self.clusters.iter().enumerate() {
            let image: Vec<usize> = c.order.iter().map(|&u| f[u]).collect();
            let target = &self.clusters[cluster_map[ci]].order;
            if !is_rotation(&image, target) {
                return Err(TreeError::BadMap(format!(
                    "cluster order of {:?} not preserved",
                    c.id
                )));
            }
        }
        let map_germ = |g: Germ| -> Germ {
            match g {
                Germ::Node(u) => Germ::Node(f[u]),
                Germ::Cluster(c) => Germ::Cluster(cluster_map[c]),
            }
        };
        for (&v, listing) in &self.vertex_orders {
            if self.degree(v) < 3 {
                continue;
            }
            let target = self
                .vertex_orders
                .get(&f[v])
                .ok_or_else(|| TreeError::MissingLocalOrder(self.node_ids[f[v]].clone()))?;
            let image: Vec<Germ> = listing.iter().map(|&g| map_germ(g)).collect();
            if !is_rotation(&image, target) {
                return Err(TreeError::BadMap(format!(
                    "vertex order at {:?} not preserved",
                    self.node_ids[v]
                )));
            }
        }
        Ok(self
            .leaves()
            .into_iter()
            .map(|l| (self.node_ids[l].clone(), self.node_ids[f[l]].clone()))
            .collect())
    }

    /// Serializes back to the exchange format (ids preserved).
    pub fn to_file(&self) -> TreeFile {
        let nodes = self
            .node_ids
            .iter()
            .zip(&self.tags)
            .map(|(id, &tag)| RawNode { id: id.clone(), tag })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (self.node_ids[a].clone(), self.node_ids[b].clone()))
            .collect();
        let mut vertex_orders = BTreeMap::new();
        for (&v, listing) in &self.vertex_orders {
            vertex_orders.insert(
                self.node_ids[v].clone(),
                listing.iter().map(|&g| self.germ_label(g)).collect(),
            );
        }
        let clusters = self
            .clusters
            .iter()
            .map(|c| RawCluster {
                id: c.id.clone(),
                stem: self.node_ids[c.base].clone(),
                tops: c.tops.iter().map(|&t| self.node_ids[t].clone()).collect(),
                order: c.order.iter().map(|&u| self.node_ids[u].clone()).collect(),
            })
            .collect();
        TreeFile { nodes, edges, vertex_orders, clusters }
    }
}

fn is_rotation<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|s| (0..a.len()).all(|i| a[i] == b[(i + s) % b.len()]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(id: &str, tag: NodeTag) -> RawNode {
        RawNode { id: id.into(), tag }
    }

    fn edge(a: &str, b: &str) -> (String, String) {
        (a.into(), b.into())
    }

    /// Star: centre c with leaves l1..l4 in cyclic order.
    fn star() -> TreeFile {
        TreeFile {
            nodes: vec![
                node("c", NodeTag::Regular),
                node("l1", NodeTag::Leaf),
                node("l2", NodeTag::Leaf),
                node("l3", NodeTag::Leaf),
                node("l4", NodeTag::Leaf),
            ],
            edges: vec![edge("c", "l1"), edge("c", "l2"), edge("c", "l3"), edge("c", "l4")],
            vertex_orders: BTreeMap::from([(
                "c".to_string(),
                vec!["l1".into(), "l2".into(), "l3".into(), "l4".into()],
            )]),
            clusters: vec![],
        }
    }

    /// One cataclysm: base b under tops p, q; leaves x above p, z above
    /// q, w below b.
    fn one_cusp() -> TreeFile {
        TreeFile {
            nodes: vec![
                node("w", NodeTag::Leaf),
                node("b", NodeTag::Regular),
                node("p", NodeTag::CataclysmTop),
                node("q", NodeTag::CataclysmTop),
                node("x", NodeTag::Leaf),
                node("z", NodeTag::Leaf),
            ],
            edges: vec![edge("w", "b"), edge("p", "x"), edge("q", "z")],
            vertex_orders: BTreeMap::new(),
            clusters: vec![RawCluster {
                id: "k".into(),
                stem: "b".into(),
                tops: vec!["p".into(), "q".into()],
                order: vec!["b".into(), "p".into(), "q".into()],
            }],
        }
    }

    #[test]
    fn star_round_trips_and_orders_ends() {
        let t = CyclicOrderTree::from_file(&star()).unwrap();
        assert_eq!(t.leaves().len(), 4);
        let c = t.end_circular_order().unwrap();
        assert_eq!(c.eval("l1", "l2", "l3").unwrap(), 1);
        assert_eq!(c.eval("l2", "l4", "l1").unwrap(), 1);
        assert_eq!(c.eval("l3", "l2", "l1").unwrap(), -1);
        assert!(c.is_valid());
    }

    #[test]
    fn missing_order_at_needed_node_is_reported() {
        let mut f = star();
        f.vertex_orders.clear();
        let t = CyclicOrderTree::from_file(&f).unwrap();
        assert_eq!(
            t.end_circular_order(),
            Err(TreeError::MissingNeededOrder("c".into()))
        );
    }

    #[test]
    fn degree_two_needs_no_order() {
        // path x - m - y: no orders anywhere, no triples to evaluate
        let f = TreeFile {
            nodes: vec![
                node("x", NodeTag::Leaf),
                node("m", NodeTag::Regular),
                node("y", NodeTag::Leaf),
            ],
            edges: vec![edge("x", "m"), edge("m", "y")],
            vertex_orders: BTreeMap::new(),
            clusters: vec![],
        };
        let t = CyclicOrderTree::from_file(&f).unwrap();
        let c = t.end_circular_order().unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn cycle_is_rejected() {
        let f = TreeFile {
            nodes: vec![
                node("a", NodeTag::Regular),
                node("b", NodeTag::Regular),
                node("c", NodeTag::Regular),
            ],
            edges: vec![edge("a", "b"), edge("b", "c"), edge("c", "a")],
            vertex_orders: BTreeMap::new(),
            clusters: vec![],
        };
        assert!(matches!(
            CyclicOrderTree::from_file(&f),
            Err(TreeError::NotATree(_))
        ));
    }

    #[test]
    fn single_top_cluster_is_rejected() {
        let mut f = one_cusp();
        f.clusters[0].tops.pop();
        f.clusters[0].order = vec!["b".into(), "p".into()];
        // node q now dangles; drop it and its leaf to keep the graph a tree
        f.nodes.retain(|n| n.id != "q" && n.id != "z");
        f.edges.retain(|(a, b)| a != "q" && b != "q" && a != "z" && b != "z");
        assert_eq!(
            CyclicOrderTree::from_file(&f).err(),
            Some(TreeError::ClusterTooSmall("k".into()))
        );
    }

    #[test]
    fn spine_across_cusp_records_jump_not_descent() {
        let t = CyclicOrderTree::from_file(&one_cusp()).unwrap();
        let s = t.spine("x", "z").unwrap();
        let (p, q, k) = (t.node("p").unwrap(), t.node("q").unwrap(), 0);
        assert_eq!(
            s.steps,
            vec![
                SpineStep::Edge { from: t.node("x").unwrap(), to: p },
                SpineStep::CuspJump { cluster: k, from: p, to: q },
                SpineStep::Edge { from: q, to: t.node("z").unwrap() },
            ]
        );
    }

    #[test]
    fn spine_through_stem_is_a_stem_step() {
        let t = CyclicOrderTree::from_file(&one_cusp()).unwrap();
        let s = t.spine("w", "x").unwrap();
        let (b, p) = (t.node("b").unwrap(), t.node("p").unwrap());
        assert_eq!(s.steps[1], SpineStep::Stem { cluster: 0, from: b, to: p });
        let empty = t.spine("w", "w").unwrap();
        assert!(empty.steps.is_empty());
    }

    #[test]
    fn branch_locus_cusp_case() {
        let t = CyclicOrderTree::from_file(&one_cusp()).unwrap();
        // spines [w,x] and [w,z] climb the stem together, then split onto
        // the two tops
        let y = t.branch_locus("x", "w", "z").unwrap();
        let (p, q) = (t.node("p").unwrap(), t.node("q").unwrap());
        assert_eq!(y, BranchLocus::Cusp { cluster: 0, pair: (p, q) });
        // swapping x and z flips the recorded pair only
        let y2 = t.branch_locus("z", "w", "x").unwrap();
        assert_eq!(y2, BranchLocus::Cusp { cluster: 0, pair: (q, p) });
    }

    #[test]
    fn branch_locus_vertex_case() {
        let t = CyclicOrderTree::from_file(&one_cusp()).unwrap();
        // from x: spine to w and spine to z both leave through p
        let y = t.branch_locus("w", "x", "z").unwrap();
        assert_eq!(y, BranchLocus::Node(t.node("p").unwrap()));
    }

    #[test]
    fn branch_locus_collinear_case() {
        let t = CyclicOrderTree::from_file(&one_cusp()).unwrap();
        let y = t.branch_locus("b", "w", "x").unwrap();
        assert_eq!(y, BranchLocus::Node(t.node("b").unwrap()));
    }

    #[test]
    fn end_order_at_cataclysm_uses_cluster_listing() {
        let t = CyclicOrderTree::from_file(&one_cusp()).unwrap();
        let c = t.end_circular_order().unwrap();
        // cluster listing (b, p, q): stem germ then tops
        assert_eq!(c.eval("w", "x", "z").unwrap(), 1);
        assert_eq!(c.eval("w", "z", "x").unwrap(), -1);
        assert!(c.is_valid());
    }

    #[test]
    fn automorphism_check_accepts_cusp_swap_when_order_allows() {
        // two tops with symmetric leaves; swapping p/q and x/z reverses
        // the cluster listing, which is not a rotation for length 3, so
        // the swap is rejected; the identity is accepted.
        let t = CyclicOrderTree::from_file(&one_cusp()).unwrap();
        let ident: BTreeMap<String, String> =
            ["w", "b", "p", "q", "x", "z"].iter().map(|s| (s.to_string(), s.to_string())).collect();
        assert!(t.check_automorphism(&ident).is_ok());
        let swap: BTreeMap<String, String> = [
            ("w", "w"),
            ("b", "b"),
            ("p", "q"),
            ("q", "p"),
            ("x", "z"),
            ("z", "x"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        assert!(matches!(t.check_automorphism(&swap), Err(TreeError::BadMap(_))));
    }

    #[test]
    fn automorphism_rotating_star_preserves_end_order() {
        let t = CyclicOrderTree::from_file(&star()).unwrap();
        let rot: BTreeMap<String, String> = [
            ("c", "c"),
            ("l1", "l2"),
            ("l2", "l3"),
            ("l3", "l4"),
            ("l4", "l1"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        let perm = t.check_automorphism(&rot).unwrap();
        let order = t.end_circular_order().unwrap();
        let image: HashMap<String, String> = perm.into_iter().collect();
        for a in order.elements().to_vec() {
            for b in order.elements().to_vec() {
                for c in order.elements().to_vec() {
                    assert_eq!(
                        order.eval(&image[&a], &image[&b], &image[&c]).unwrap(),
                        order.eval(&a, &b, &c).unwrap()
                    );
                }
            }
        }
        // a transposition of adjacent leaves reverses orientation
        let swap: BTreeMap<String, String> = [
            ("c", "c"),
            ("l1", "l2"),
            ("l2", "l1"),
            ("l3", "l3"),
            ("l4", "l4"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        assert!(matches!(t.check_automorphism(&swap), Err(TreeError::BadMap(_))));
    }

    #[test]
    fn file_round_trip_preserves_evaluation() {
        let t = CyclicOrderTree::from_file(&one_cusp()).unwrap();
        let f = t.to_file();
        let t2 = CyclicOrderTree::from_file(&f).unwrap();
        let (c1, c2) = (t.end_circular_order().unwrap(), t2.end_circular_order().unwrap());
        for a in c1.elements() {
            for b in c1.elements() {
                for c in c1.elements() {
                    assert_eq!(c1.eval(a, b, c).unwrap(), c2.eval(a, b, c).unwrap());
                }
            }
        }
    }
}
