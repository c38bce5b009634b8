//! Seeded random generators for the stress suites: cyclically ordered
//! trees with cataclysm clusters, and PL circle maps with controlled
//! rotation behavior. Everything is driven by a caller-supplied Rng so
//! test runs are reproducible from a fixed seed.

use crate::dynamics::PLCircleMap;
use crate::exact::{q, Q};
use crate::ordtree::{NodeTag, RawCluster, RawNode, TreeFile};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeMap;

/// Random well-formed tree file with real edges and 0..=3 cataclysm
/// clusters, at most `max_nodes` nodes and at least three leaves.
/// Cyclic orders are supplied at every node of branching degree >= 3
/// and for every cluster.
pub fn random_tree_file<R: Rng>(rng: &mut R, max_nodes: usize) -> TreeFile {
    assert!(max_nodes >= 6);
    let target = rng.gen_range(6..=max_nodes);

    // per node: real-edge neighbours, owning cluster when a top,
    // clusters based here
    let mut neighbours: Vec<Vec<usize>> = vec![vec![]];
    let mut top_of: Vec<Option<usize>> = vec![None];
    let mut based_here: Vec<Vec<usize>> = vec![vec![]];
    let mut clusters: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();

    let add_node = |neighbours: &mut Vec<Vec<usize>>,
                        top_of: &mut Vec<Option<usize>>,
                        based_here: &mut Vec<Vec<usize>>| {
        neighbours.push(vec![]);
        top_of.push(None);
        based_here.push(vec![]);
        neighbours.len() - 1
    };

    while neighbours.len() < target {
        let room = target - neighbours.len();
        if room >= 3 && clusters.len() < 3 && rng.gen_bool(0.25) {
            // new cluster: existing base, fresh top nodes
            let base = rng.gen_range(0..neighbours.len());
            let tops_n = rng.gen_range(2..=3.min(room));
            let mut tops = Vec::new();
            for _ in 0..tops_n {
                let t = add_node(&mut neighbours, &mut top_of, &mut based_here);
                top_of[t] = Some(clusters.len());
                tops.push(t);
            }
            based_here[base].push(clusters.len());
            clusters.push((base, tops));
        } else {
            let anchor = rng.gen_range(0..neighbours.len());
            let v = add_node(&mut neighbours, &mut top_of, &mut based_here);
            neighbours[anchor].push(v);
            neighbours[v].push(anchor);
            edges.push((anchor, v));
        }
    }

    fn ex_degree(
        neighbours: &[Vec<usize>],
        based_here: &[Vec<usize>],
        top_of: &[Option<usize>],
        v: usize,
    ) -> usize {
        neighbours[v].len() + based_here[v].len() + usize::from(top_of[v].is_some())
    }

    // make sure at least three nodes are genuine leaves
    loop {
        let leaves = (0..neighbours.len())
            .filter(|&v| top_of[v].is_none() && ex_degree(&neighbours, &based_here, &top_of, v) == 1)
            .count();
        if leaves >= 3 {
            break;
        }
        let candidates: Vec<usize> = (0..neighbours.len())
            .filter(|&v| ex_degree(&neighbours, &based_here, &top_of, v) >= 2)
            .collect();
        let anchor = *candidates.choose(rng).unwrap_or(&0);
        let v = add_node(&mut neighbours, &mut top_of, &mut based_here);
        neighbours[anchor].push(v);
        neighbours[v].push(anchor);
        edges.push((anchor, v));
    }

    let node_name = |v: usize| format!("n{v}");
    let cluster_name = |c: usize| format!("c{c}");

    let nodes: Vec<RawNode> = (0..neighbours.len())
        .map(|v| {
            let tag = if top_of[v].is_some() {
                NodeTag::CataclysmTop
            } else if ex_degree(&neighbours, &based_here, &top_of, v) == 1 {
                NodeTag::Leaf
            } else {
                NodeTag::Regular
            };
            RawNode { id: node_name(v), tag }
        })
        .collect();

    let raw_clusters: Vec<RawCluster> = clusters
        .iter()
        .enumerate()
        .map(|(ci, (base, tops))| {
            let mut order: Vec<String> =
                std::iter::once(*base).chain(tops.iter().copied()).map(node_name).collect();
            order.shuffle(rng);
            RawCluster {
                id: cluster_name(ci),
                stem: node_name(*base),
                tops: tops.iter().copied().map(node_name).collect(),
                order,
            }
        })
        .collect();

    let mut vertex_orders = BTreeMap::new();
    for v in 0..neighbours.len() {
        if ex_degree(&neighbours, &based_here, &top_of, v) < 3 {
            continue;
        }
        let mut labels: Vec<String> = neighbours[v].iter().copied().map(node_name).collect();
        for &c in &based_here[v] {
            labels.push(cluster_name(c));
        }
        if let Some(c) = top_of[v] {
            labels.push(cluster_name(c));
        }
        labels.shuffle(rng);
        vertex_orders.insert(node_name(v), labels);
    }

    TreeFile {
        nodes,
        edges: edges.iter().map(|&(a, b)| (node_name(a), node_name(b))).collect(),
        vertex_orders,
        clusters: raw_clusters,
    }
}

/// `count` distinct rationals over a common random denominator, sorted,
/// starting at 0 when `include_zero`.
fn random_grid<R: Rng>(rng: &mut R, count: usize, include_zero: bool) -> Vec<Q> {
    assert!(count >= 1);
    let denom = rng.gen_range((2 * count.max(2)) as i64..=160);
    let mut numerators: Vec<i64> = (1..denom).collect();
    numerators.shuffle(rng);
    let extra = if include_zero { count - 1 } else { count };
    let mut picked: Vec<i64> = numerators.into_iter().take(extra).collect();
    if include_zero {
        picked.push(0);
    }
    picked.sort_unstable();
    picked.into_iter().map(|n| q(n, denom)).collect()
}

/// PL circle map whose restriction to a marked orbit through 0 is the
/// shift by `k` positions on `points` sorted points: the rotation
/// number is exactly k/points and the orbit of 0 closes.
pub fn rotation_like_map<R: Rng>(rng: &mut R, points: usize, k: usize) -> PLCircleMap {
    assert!(points >= 1 && k < points);
    let xs = random_grid(rng, points, true);
    let pairs: Vec<(Q, Q)> = (0..points)
        .map(|i| {
            let j = (i + k) % points;
            let wrap = ((i + k) / points) as i64;
            (xs[i].clone(), &xs[j] + q(wrap, 1))
        })
        .collect();
    PLCircleMap::from_pairs(&pairs).expect("orbit data is monotone by construction")
}

/// Random orbit-closing map together with its exact rotation number.
pub fn random_rotation_like<R: Rng>(rng: &mut R, max_points: usize) -> (PLCircleMap, Q) {
    let points = rng.gen_range(1..=max_points);
    let k = rng.gen_range(0..points);
    (rotation_like_map(rng, points, k), q(k as i64, points as i64))
}

/// Random PL circle homeomorphism fixing 0; conjugating by it
/// preserves orbit closure through 0.
pub fn random_homeo_fixing_zero<R: Rng>(rng: &mut R, max_breaks: usize) -> PLCircleMap {
    let count = rng.gen_range(1..=max_breaks);
    let xs = random_grid(rng, count, true);
    let ys = random_grid(rng, count, true);
    let pairs: Vec<(Q, Q)> = xs.into_iter().zip(ys).collect();
    PLCircleMap::from_pairs(&pairs).expect("two sorted grids give a monotone map")
}

/// Map with f(x) > x everywhere, hence no fixed point and positive
/// rotation number: interleave one sorted grid into breaks and values.
pub fn strictly_advancing_map<R: Rng>(rng: &mut R, max_breaks: usize) -> PLCircleMap {
    let count = rng.gen_range(1..=max_breaks);
    let grid = random_grid(rng, 2 * count, false);
    let pairs: Vec<(Q, Q)> =
        (0..count).map(|i| (grid[2 * i].clone(), grid[2 * i + 1].clone())).collect();
    PLCircleMap::from_pairs(&pairs).expect("interleaved grid is monotone")
}
