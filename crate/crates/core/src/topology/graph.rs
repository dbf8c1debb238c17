//! Skeleton graph: nodes at terminations and bifurcations, edges carrying
//! the ordered medial-axis pixels between them.

use serde::{Deserialize, Serialize};

use crate::raster::{rasterize_line, Pixel, NEIGHBORS_8};

use super::path::total_length;
use super::Skeleton;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Termination,
    Bifurcation,
    /// Pixel promoted to a node so that an isolated cycle has somewhere to
    /// start and end.
    Anchor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub position: Pixel,
    pub kind: NodeKind,
}

/// A vessel segment. `path` runs from the position of node `a` to the
/// position of node `b`, both included; self-loops have `a == b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub path: Vec<Pixel>,
}

impl Edge {
    pub fn length(&self) -> f64 {
        total_length(&self.path)
    }

    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }

    /// Pixels strictly between the two end nodes.
    pub fn interior(&self) -> &[Pixel] {
        if self.path.len() <= 2 {
            &[]
        } else {
            &self.path[1..self.path.len() - 1]
        }
    }

    fn other(&self, node: usize) -> usize {
        if self.a == node {
            self.b
        } else {
            self.a
        }
    }

    /// Path oriented to end at `node`.
    fn path_ending_at(&self, node: usize) -> Vec<Pixel> {
        let mut p = self.path.clone();
        if self.b != node {
            p.reverse();
        }
        p
    }
}

/// Node ids are indices into `nodes`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VesselGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

impl VesselGraph {
    /// Graph degree per node; a self-loop counts twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for e in &self.edges {
            deg[e.a] += 1;
            deg[e.b] += 1;
        }
        deg
    }

    pub fn count_kind(&self, kind: NodeKind) -> usize {
        self.nodes.iter().filter(|n| n.kind == kind).count()
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(id, n)| NodeJson {
                    id,
                    row: n.position.row,
                    col: n.position.col,
                    kind: n.kind,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    a: e.a,
                    b: e.b,
                    path: e.path.iter().map(|p| [p.row, p.col]).collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds a graph from its JSON form. Node ids must be `0..n` in order.
    pub fn from_json(json: &GraphJson) -> Result<Self, String> {
        let mut nodes = Vec::with_capacity(json.nodes.len());
        for (i, n) in json.nodes.iter().enumerate() {
            if n.id != i {
                return Err(format!("node id {} at position {i}", n.id));
            }
            nodes.push(Node {
                position: Pixel::new(n.row, n.col),
                kind: n.kind,
            });
        }
        let mut edges = Vec::with_capacity(json.edges.len());
        for e in &json.edges {
            if e.a >= nodes.len() || e.b >= nodes.len() {
                return Err(format!("edge references missing node ({}, {})", e.a, e.b));
            }
            edges.push(Edge {
                a: e.a,
                b: e.b,
                path: e.path.iter().map(|&[r, c]| Pixel::new(r, c)).collect(),
            });
        }
        Ok(Self { nodes, edges })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: usize,
    pub row: usize,
    pub col: usize,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub a: usize,
    pub b: usize,
    pub path: Vec<[usize; 2]>,
}

/// Serialized graph: `{nodes:[{id,row,col,kind}], edges:[{a,b,path:[[r,c],...]}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<EdgeJson>,
}

fn neighbors(skel: &Skeleton, p: Pixel) -> impl Iterator<Item = Pixel> + '_ {
    let (w, h) = (skel.width(), skel.height());
    NEIGHBORS_8
        .iter()
        .filter_map(move |&(dr, dc)| p.offset(dr, dc, w, h))
        .filter(move |&q| skel.contains(q))
}

/// Converts a skeleton into a graph.
///
/// Pixels with one 8-neighbor become terminations, pixels with three or more
/// become bifurcations, and isolated pixels become terminations without
/// edges. Edges are the maximal chains of two-neighbor pixels between nodes
/// (including direct node-to-node adjacencies). Cycles containing no node
/// are anchored at their row-major first pixel.
pub fn extract_graph(skel: &Skeleton) -> VesselGraph {
    let (w, h) = (skel.width(), skel.height());
    let mut node_id = vec![usize::MAX; w * h];
    let mut visited = vec![false; w * h];
    let mut graph = VesselGraph::default();
    let idx = |p: Pixel| p.row * w + p.col;

    let pixels: Vec<Pixel> = skel.mask().pixels().collect();
    for &p in &pixels {
        let deg = neighbors(skel, p).count();
        let kind = match deg {
            0 | 1 => NodeKind::Termination,
            2 => continue,
            _ => NodeKind::Bifurcation,
        };
        node_id[idx(p)] = graph.nodes.len();
        graph.nodes.push(Node { position: p, kind });
    }

    let trace = |start: usize,
                 first: Pixel,
                 node_id: &mut Vec<usize>,
                 visited: &mut Vec<bool>,
                 graph: &mut VesselGraph| {
        let start_pos = graph.nodes[start].position;
        let mut path = vec![start_pos, first];
        visited[idx(first)] = true;
        let (mut prev, mut cur) = (start_pos, first);
        loop {
            let next = neighbors(skel, cur)
                .find(|&q| q != prev)
                .expect("chain pixels have two neighbors");
            path.push(next);
            let id = node_id[idx(next)];
            if id != usize::MAX {
                graph.edges.push(Edge {
                    a: start,
                    b: id,
                    path,
                });
                return;
            }
            visited[idx(next)] = true;
            prev = cur;
            cur = next;
        }
    };

    for n in 0..graph.nodes.len() {
        let p = graph.nodes[n].position;
        let nbrs: Vec<Pixel> = neighbors(skel, p).collect();
        for q in nbrs {
            let m = node_id[idx(q)];
            if m != usize::MAX {
                if n < m {
                    graph.edges.push(Edge {
                        a: n,
                        b: m,
                        path: vec![p, q],
                    });
                }
            } else if !visited[idx(q)] {
                trace(n, q, &mut node_id, &mut visited, &mut graph);
            }
        }
    }

    // Whatever is left consists of cycles made only of two-neighbor pixels.
    for &p in &pixels {
        if node_id[idx(p)] != usize::MAX || visited[idx(p)] {
            continue;
        }
        let n = graph.nodes.len();
        node_id[idx(p)] = n;
        graph.nodes.push(Node {
            position: p,
            kind: NodeKind::Anchor,
        });
        let first = neighbors(skel, p)
            .next()
            .expect("cycle pixel has neighbors");
        trace(n, first, &mut node_id, &mut visited, &mut graph);
    }
    graph
}

fn kind_for_degree(deg: usize) -> NodeKind {
    match deg {
        0 | 1 => NodeKind::Termination,
        2 => NodeKind::Anchor,
        _ => NodeKind::Bifurcation,
    }
}

/// Splices out every degree-two node that joins two distinct edges. Node
/// ids stay stable; spliced nodes are flagged in `removed`.
fn dissolve_degree_two(graph: &mut VesselGraph, removed: &mut [bool]) {
    loop {
        let deg = graph.degrees();
        let splice = (0..graph.nodes.len()).find(|&n| {
            !removed[n] && deg[n] == 2 && !graph.edges.iter().any(|e| e.is_loop() && e.a == n)
        });
        let Some(n) = splice else { break };
        let mut incident = graph
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.a == n || e.b == n)
            .map(|(i, _)| i);
        let (i, j) = (incident.next().unwrap(), incident.next().unwrap());
        let mut path = graph.edges[i].path_ending_at(n);
        let mut tail = graph.edges[j].path_ending_at(n);
        tail.reverse();
        path.extend_from_slice(&tail[1..]);
        graph.edges[i] = Edge {
            a: graph.edges[i].other(n),
            b: graph.edges[j].other(n),
            path,
        };
        graph.edges.remove(j);
        removed[n] = true;
    }
}

/// Drops flagged nodes, renumbers ids and recomputes kinds from degrees.
fn compact(graph: &mut VesselGraph, removed: &[bool]) {
    let mut remap = vec![usize::MAX; graph.nodes.len()];
    let mut nodes = Vec::new();
    for (i, node) in graph.nodes.iter().enumerate() {
        if !removed[i] {
            remap[i] = nodes.len();
            nodes.push(node.clone());
        }
    }
    for e in &mut graph.edges {
        e.a = remap[e.a];
        e.b = remap[e.b];
    }
    graph.nodes = nodes;
    let deg = graph.degrees();
    for (node, d) in graph.nodes.iter_mut().zip(deg) {
        node.kind = kind_for_degree(d);
    }
}

/// Removes short spurious branches until none is left.
///
/// A branch is an edge joining a termination to a node of degree three or
/// more. The shortest branch below `min_branch_len` goes first (ties by edge
/// order); nodes left with two edges are dissolved into a single edge before
/// the next branch is considered. Segments with two free ends are never
/// removed, so isolated vessels survive however short they are.
pub fn prune_graph(graph: &VesselGraph, min_branch_len: f64) -> VesselGraph {
    let mut g = graph.clone();
    let mut removed = vec![false; g.nodes.len()];
    let mut changed = false;
    loop {
        let deg = g.degrees();
        let spur = g
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| {
                !e.is_loop()
                    && ((deg[e.a] == 1 && deg[e.b] >= 3) || (deg[e.b] == 1 && deg[e.a] >= 3))
            })
            .map(|(i, e)| (i, e.length()))
            .filter(|&(_, len)| len < min_branch_len)
            .min_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
        let Some((i, _)) = spur else { break };
        let e = g.edges.remove(i);
        let tip = if deg[e.a] == 1 { e.a } else { e.b };
        removed[tip] = true;
        dissolve_degree_two(&mut g, &mut removed);
        changed = true;
    }
    if changed {
        compact(&mut g, &removed);
    }
    g
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Prepends/appends straight runs so that `path` starts at `from` and ends at `to`.
fn reanchor(path: &[Pixel], from: Pixel, to: Pixel) -> Vec<Pixel> {
    let mut out = Vec::with_capacity(path.len() + 4);
    let first = path[0];
    if first != from {
        let lead = rasterize_line(from, first);
        out.extend_from_slice(&lead[..lead.len() - 1]);
    }
    out.extend_from_slice(path);
    let last = *path.last().unwrap();
    if last != to {
        out.extend_from_slice(&rasterize_line(last, to)[1..]);
    }
    out
}

/// Fuses nodes joined by an edge no longer than `merge_radius`.
///
/// Each group of fused nodes becomes one node at the rounded centroid of its
/// members; the short connecting edges disappear and the remaining incident
/// edges are extended with straight runs to the new position. Repeats until
/// no such edge is left.
pub fn merge_nodes(graph: &VesselGraph, merge_radius: f64) -> VesselGraph {
    let mut g = graph.clone();
    loop {
        let short: Vec<bool> = g
            .edges
            .iter()
            .map(|e| !e.is_loop() && e.length() <= merge_radius)
            .collect();
        if !short.contains(&true) {
            break;
        }
        let mut parent: Vec<usize> = (0..g.nodes.len()).collect();
        for (e, _) in g.edges.iter().zip(&short).filter(|(_, s)| **s) {
            let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
            if ra != rb {
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                parent[hi] = lo;
            }
        }

        let mut group_of = vec![usize::MAX; g.nodes.len()];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for n in 0..g.nodes.len() {
            let root = find(&mut parent, n);
            if group_of[root] == usize::MAX {
                group_of[root] = members.len();
                members.push(Vec::new());
            }
            group_of[n] = group_of[root];
            members[group_of[n]].push(n);
        }

        let nodes: Vec<Node> = members
            .iter()
            .map(|m| {
                let k = m.len() as f64;
                let row: f64 = m
                    .iter()
                    .map(|&n| g.nodes[n].position.row as f64)
                    .sum::<f64>()
                    / k;
                let col: f64 = m
                    .iter()
                    .map(|&n| g.nodes[n].position.col as f64)
                    .sum::<f64>()
                    / k;
                Node {
                    position: Pixel::new(row.round() as usize, col.round() as usize),
                    kind: g.nodes[m[0]].kind,
                }
            })
            .collect();

        let edges: Vec<Edge> = g
            .edges
            .iter()
            .zip(&short)
            .filter(|(_, s)| !**s)
            .map(|(e, _)| {
                let (a, b) = (group_of[e.a], group_of[e.b]);
                Edge {
                    a,
                    b,
                    path: reanchor(&e.path, nodes[a].position, nodes[b].position),
                }
            })
            .collect();

        g = VesselGraph { nodes, edges };
        let mut removed = vec![false; g.nodes.len()];
        dissolve_degree_two(&mut g, &mut removed);
        compact(&mut g, &removed);
    }
    g
}
