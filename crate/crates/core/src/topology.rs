//! Agent communication graphs.
//!
//! A `Topology` is an undirected, simple, connected graph over agents
//! 1..=N, with the diameter and maximum degree computed on construction.
//! Random graphs are Erdős–Rényi with whole-graph resampling until
//! connected, matching the experiment protocol.

use crate::error::{Error, Result};
use crate::ids::AgentId;
use crate::rng::RngStream;
use std::collections::VecDeque;
use std::path::Path;

/// How many whole-graph resamples to attempt before giving up.
pub const RESAMPLE_CAP: u32 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    adjacency: Vec<Vec<AgentId>>,
    diameter: u32,
    max_degree: u32,
}

impl Topology {
    /// Builds and validates a topology from an undirected edge list over
    /// nodes `1..=node_count`. Rejects self-loops and disconnected graphs;
    /// duplicate edges collapse.
    pub fn from_edges(node_count: u32, edges: &[(u32, u32)]) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::invalid("topology needs at least one node"));
        }
        let n = node_count as usize;
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a == 0 || b == 0 || a > node_count || b > node_count {
                return Err(Error::invalid(format!(
                    "edge ({a}, {b}) references a node outside 1..={node_count}"
                )));
            }
            if a == b {
                return Err(Error::invalid(format!("self-loop at node {a}")));
            }
            adjacency[(a - 1) as usize].push(AgentId(b));
            adjacency[(b - 1) as usize].push(AgentId(a));
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Self::from_adjacency(adjacency)
    }

    fn from_adjacency(adjacency: Vec<Vec<AgentId>>) -> Result<Self> {
        let eccentricities = all_eccentricities(&adjacency)?;
        let diameter = eccentricities.into_iter().max().unwrap_or(0);
        let max_degree = adjacency.iter().map(|l| l.len() as u32).max().unwrap_or(0);
        Ok(Topology {
            adjacency,
            diameter,
            max_degree,
        })
    }

    pub fn node_count(&self) -> u32 {
        self.adjacency.len() as u32
    }

    /// Neighbors of `node`, ascending.
    pub fn neighbors(&self, node: AgentId) -> &[AgentId] {
        &self.adjacency[node.index()]
    }

    pub fn degree(&self, node: AgentId) -> u32 {
        self.adjacency[node.index()].len() as u32
    }

    /// Longest shortest path, in hops; 0 for a singleton.
    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    /// Largest neighbor count (K_G).
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn edge_count(&self) -> u64 {
        self.adjacency.iter().map(|l| l.len() as u64).sum::<u64>() / 2
    }

    pub fn is_complete(&self) -> bool {
        let n = self.node_count() as u64;
        self.edge_count() == n * (n - 1) / 2
    }

    pub fn nodes(&self) -> impl Iterator<Item = AgentId> {
        (1..=self.node_count()).map(AgentId)
    }
}

/// Every distinct pair adjacent; D = 1 (N >= 2), K_G = N - 1.
pub fn complete_graph(node_count: u32) -> Result<Topology> {
    if node_count == 0 {
        return Err(Error::invalid("topology needs at least one node"));
    }
    let adjacency = (1..=node_count)
        .map(|i| (1..=node_count).filter(|&j| j != i).map(AgentId).collect())
        .collect();
    Topology::from_adjacency(adjacency)
}

/// Nodes 1-2-…-N in a line.
pub fn path_graph(node_count: u32) -> Result<Topology> {
    if node_count == 0 {
        return Err(Error::invalid("topology needs at least one node"));
    }
    let edges: Vec<(u32, u32)> = (1..node_count).map(|i| (i, i + 1)).collect();
    Topology::from_edges(node_count, &edges)
}

/// A connected Erdős–Rényi graph plus the number of samples it took.
#[derive(Clone, Debug)]
pub struct GeneratedTopology {
    pub topology: Topology,
    pub attempts: u32,
}

/// Samples G(N, p) — each pair independently with probability `p` — and
/// resamples the whole graph until it is connected. The stream advances
/// across attempts, so identical `(N, p, stream)` give an identical edge set
/// and attempt count.
pub fn gen_erdos_renyi_connected(
    node_count: u32,
    p: f64,
    rng: &mut RngStream,
) -> Result<GeneratedTopology> {
    if node_count < 2 {
        return Err(Error::invalid("random graphs need at least two nodes"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid(format!(
            "edge probability {p} outside (0, 1]"
        )));
    }
    for attempt in 1..=RESAMPLE_CAP {
        let mut edges = Vec::new();
        for a in 1..node_count {
            for b in (a + 1)..=node_count {
                if rng.uniform() < p {
                    edges.push((a, b));
                }
            }
        }
        if let Ok(topology) = Topology::from_edges(node_count, &edges) {
            return Ok(GeneratedTopology {
                topology,
                attempts: attempt,
            });
        }
    }
    Err(Error::GenerationFailure {
        n: node_count,
        p,
        attempts: RESAMPLE_CAP,
    })
}

/// Reads an edge-list file: one edge per line, two 1-based node indices
/// separated by whitespace; lines starting with `#` are ignored. The node
/// count is the largest index mentioned.
pub fn load_topology(path: &Path) -> Result<Topology> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading topology file {}", path.display()), e))?;
    let display = path.display().to_string();
    let mut edges = Vec::new();
    let mut max_node = 0u32;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<u32> {
            let tok = tok.ok_or_else(|| Error::TopologyFile {
                path: display.clone(),
                line: line_no,
                message: "expected two node indices".into(),
            })?;
            let v: u32 = tok.parse().map_err(|_| Error::TopologyFile {
                path: display.clone(),
                line: line_no,
                message: format!("invalid node index '{tok}'"),
            })?;
            if v == 0 {
                return Err(Error::TopologyFile {
                    path: display.clone(),
                    line: line_no,
                    message: "node indices are 1-based".into(),
                });
            }
            Ok(v)
        };
        let a = parse(fields.next())?;
        let b = parse(fields.next())?;
        if fields.next().is_some() {
            return Err(Error::TopologyFile {
                path: display.clone(),
                line: line_no,
                message: "expected exactly two node indices".into(),
            });
        }
        if a == b {
            return Err(Error::TopologyFile {
                path: display.clone(),
                line: line_no,
                message: format!("self-loop at node {a}"),
            });
        }
        max_node = max_node.max(a).max(b);
        edges.push((a, b));
    }
    if edges.is_empty() {
        return Err(Error::TopologyFile {
            path: display,
            line: 0,
            message: "no edges found".into(),
        });
    }
    Topology::from_edges(max_node, &edges)
}

/// BFS eccentricity of every node; errors with the first unreachable node if
/// the graph is disconnected.
fn all_eccentricities(adjacency: &[Vec<AgentId>]) -> Result<Vec<u32>> {
    let n = adjacency.len();
    let mut result = Vec::with_capacity(n);
    let mut dist = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        dist.iter_mut().for_each(|d| *d = u32::MAX);
        dist[start] = 0;
        queue.clear();
        queue.push_back(start);
        let mut ecc = 0;
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                let vi = v.index();
                if dist[vi] == u32::MAX {
                    dist[vi] = dist[u] + 1;
                    ecc = ecc.max(dist[vi]);
                    queue.push_back(vi);
                }
            }
        }
        if let Some(unreached) = dist.iter().position(|&d| d == u32::MAX) {
            return Err(Error::Disconnected {
                node: unreached as u32 + 1,
            });
        }
        result.push(ecc);
    }
    Ok(result)
}
