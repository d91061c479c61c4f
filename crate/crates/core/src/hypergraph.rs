//! s-partite, s-uniform, c-regular hypergraphs.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::BinaryMatrix;
use crate::par::{self, Exec};

/// Hyperedge `e` holds one vertex per partition: `edges[e][p]` is the index of
/// its vertex inside partition `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    s: usize,
    c: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Validates and builds; every vertex must lie in exactly `c` hyperedges.
    pub fn new(s: usize, c: usize, n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if s < 2 || c < 1 || n < 1 {
            return Err(Error::InvalidArgument(format!("need s >= 2, c >= 1, n >= 1 (got {s}, {c}, {n})")));
        }
        if edges.len() != n * c {
            return Err(Error::InvalidArgument(format!("{} hyperedges, expected n*c = {}", edges.len(), n * c)));
        }
        let mut incident = vec![Vec::new(); s * n];
        for (e, edge) in edges.iter().enumerate() {
            if edge.len() != s {
                return Err(Error::InvalidArgument(format!("hyperedge {e} has {} vertices, expected {s}", edge.len())));
            }
            for (p, &v) in edge.iter().enumerate() {
                if v >= n {
                    return Err(Error::InvalidArgument(format!("hyperedge {e}: vertex {p}:{v} out of range")));
                }
                incident[p * n + v].push(e);
            }
        }
        if let Some(v) = incident.iter().position(|inc| inc.len() != c) {
            return Err(Error::InvalidArgument(format!(
                "vertex {}:{} has degree {}, expected {c}",
                v / n,
                v % n,
                incident[v].len()
            )));
        }
        Ok(Self { s, c, n, edges, incident })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_bipartite(&self) -> bool {
        self.s == 2
    }

    /// Vertex indices (one per partition) of hyperedge `e`.
    pub fn edge(&self, e: usize) -> &[usize] {
        &self.edges[e]
    }

    /// Hyperedges incident to vertex `v` of partition `p`, in increasing label order.
    pub fn incident_edges(&self, p: usize, v: usize) -> &[usize] {
        &self.incident[p * self.n + v]
    }

    /// Position of hyperedge `e` among the incident edges of its partition-`p` vertex.
    pub fn position_in_vertex(&self, p: usize, e: usize) -> usize {
        let v = self.edges[e][p];
        self.incident_edges(p, v).iter().position(|&x| x == e).expect("incident")
    }

    /// `(s·n)×(n·c)` incidence matrix, rows partition-major.
    pub fn incidence_matrix(&self) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(self.s * self.n, self.edges.len());
        for (e, edge) in self.edges.iter().enumerate() {
            for (p, &v) in edge.iter().enumerate() {
                m.put(p * self.n + v, e, true);
            }
        }
        m
    }

    /// Length (in hyperedges) of the shortest cycle; `None` for a forest.
    ///
    /// Computed as half the girth of the vertex/hyperedge incidence graph,
    /// by breadth-first search from every vertex.
    pub fn girth(&self) -> Option<usize> {
        let nv = self.s * self.n;
        let total = nv + self.edges.len();
        let neighbours = |x: usize| -> Vec<usize> {
            if x < nv {
                self.incident[x].iter().map(|&e| nv + e).collect()
            } else {
                let e = x - nv;
                self.edges[e].iter().enumerate().map(|(p, &v)| p * self.n + v).collect()
            }
        };
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        for src in 0..nv {
            dist.fill(usize::MAX);
            dist[src] = 0;
            parent[src] = usize::MAX;
            let mut queue = VecDeque::from([src]);
            while let Some(x) = queue.pop_front() {
                if best.is_some_and(|b| dist[x] >= b) {
                    break;
                }
                for y in neighbours(x) {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        let len = dist[x] + dist[y] + 1;
                        best = Some(best.map_or(len / 2, |b| b.min(len / 2)));
                    }
                }
            }
        }
        best
    }

    /// (s,d)-girth: fewest hyperedges in a connected subgraph where every
    /// touched vertex lies in at least `d` of its hyperedges; `None` if no
    /// such subgraph exists.
    pub fn sd_girth(&self, d: usize) -> Result<Option<usize>> {
        self.sd_girth_with(d, Exec::default())
    }

    pub fn sd_girth_with(&self, d: usize, exec: Exec) -> Result<Option<usize>> {
        if d < 2 {
            return Err(Error::InvalidArgument("d must be at least 2".into()));
        }
        if d > self.c {
            return Ok(None);
        }
        let best = AtomicUsize::new(usize::MAX);
        par::map_indexed(exec, self.edges.len(), |anchor| {
            let mut search = CompactSearch::new(self, d, anchor, &best);
            search.run();
        });
        let b = best.load(Ordering::Relaxed);
        Ok((b != usize::MAX).then_some(b))
    }

    /// Parses "s c n" then one hyperedge per line as partition-qualified labels "p:index".
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("missing header".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header '{header}'"))))
            .collect::<Result<_>>()?;
        let [s, c, n] = dims[..] else {
            return Err(Error::Parse(format!("header must be 's c n', got '{header}'")));
        };
        let mut edges = Vec::new();
        for line in lines {
            let mut edge = vec![usize::MAX; s];
            for tok in line.split_whitespace() {
                let (p, v) = tok
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("label '{tok}' is not 'p:index'")))?;
                let p: usize = p.parse().map_err(|_| Error::Parse(format!("bad partition in '{tok}'")))?;
                let v: usize = v.parse().map_err(|_| Error::Parse(format!("bad index in '{tok}'")))?;
                if p >= s {
                    return Err(Error::Parse(format!("partition {p} out of range in '{line}'")));
                }
                if edge[p] != usize::MAX {
                    return Err(Error::Parse(format!("two vertices of partition {p} in '{line}'")));
                }
                edge[p] = v;
            }
            if edge.contains(&usize::MAX) {
                return Err(Error::Parse(format!("hyperedge '{line}' misses a partition")));
            }
            edges.push(edge);
        }
        Self::new(s, c, n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.s, self.c, self.n);
        for edge in &self.edges {
            let labels: Vec<String> = edge.iter().enumerate().map(|(p, v)| format!("{p}:{v}")).collect();
            out.push_str(&labels.join(" "));
            out.push('\n');
        }
        out
    }

    /// Tanner-style DOT rendering: vertices as circles, hyperedges as boxes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph hypergraph {\n  node [shape=circle];\n");
        for p in 0..self.s {
            for v in 0..self.n {
                let _ = writeln!(out, "  \"{p}:{v}\";");
            }
        }
        for (e, edge) in self.edges.iter().enumerate() {
            let _ = writeln!(out, "  e{e} [shape=box, label=\"{e}\"];");
            for (p, v) in edge.iter().enumerate() {
                let _ = writeln!(out, "  e{e} -- \"{p}:{v}\";");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Branch and bound for one anchor: the anchor is the smallest edge label of
/// the subgraph; growth only through edges of a deficient vertex.
struct CompactSearch<'a> {
    g: &'a Hypergraph,
    d: usize,
    anchor: usize,
    best: &'a AtomicUsize,
    count: Vec<usize>,
    state: Vec<u8>,
    size: usize,
}

const FREE: u8 = 0;
const CHOSEN: u8 = 1;
const BANNED: u8 = 2;

impl<'a> CompactSearch<'a> {
    fn new(g: &'a Hypergraph, d: usize, anchor: usize, best: &'a AtomicUsize) -> Self {
        let mut state = vec![FREE; g.edges.len()];
        for s in state.iter_mut().take(anchor) {
            *s = BANNED;
        }
        Self { g, d, anchor, best, count: vec![0; g.s * g.n], state, size: 0 }
    }

    fn toggle(&mut self, e: usize, add: bool) {
        for (p, &v) in self.g.edges[e].iter().enumerate() {
            let x = &mut self.count[p * self.g.n + v];
            if add {
                *x += 1;
            } else {
                *x -= 1;
            }
        }
        if add {
            self.state[e] = CHOSEN;
            self.size += 1;
        } else {
            self.state[e] = FREE;
            self.size -= 1;
        }
    }

    fn run(&mut self) {
        self.toggle(self.anchor, true);
        self.recurse();
    }

    /// Lower bound on edges still needed, or `None` if completion is impossible.
    /// Also returns the deficient vertex with the fewest free edges.
    fn bound(&self) -> Option<(usize, Option<usize>)> {
        let n = self.g.n;
        let mut need = 0;
        let mut pick: Option<(usize, usize)> = None;
        for p in 0..self.g.s {
            let mut part = 0;
            for v in 0..n {
                let x = self.count[p * n + v];
                if x == 0 || x >= self.d {
                    continue;
                }
                let deficit = self.d - x;
                let free = self.g.incident[p * n + v].iter().filter(|&&e| self.state[e] == FREE).count();
                if free < deficit {
                    return None;
                }
                part += deficit;
                if pick.is_none_or(|(_, f)| free < f) {
                    pick = Some((p * n + v, free));
                }
            }
            need = need.max(part);
        }
        Some((need, pick.map(|(v, _)| v)))
    }

    fn recurse(&mut self) {
        let Some((need, vertex)) = self.bound() else { return };
        if self.size + need >= self.best.load(Ordering::Relaxed) {
            return;
        }
        let Some(v) = vertex else {
            self.best.fetch_min(self.size, Ordering::Relaxed);
            return;
        };
        let options: Vec<usize> = self.g.incident[v].iter().copied().filter(|&e| self.state[e] == FREE).collect();
        let mut banned = Vec::new();
        for e in options {
            self.toggle(e, true);
            self.recurse();
            self.toggle(e, false);
            self.state[e] = BANNED;
            banned.push(e);
        }
        for e in banned {
            self.state[e] = FREE;
        }
    }
}

/// Seeded member of the permutation ensemble: partition 0 takes edge slots in
/// order, every other partition through an independent random permutation.
pub fn random_regular(s: usize, c: usize, n: usize, seed: u64) -> Result<Hypergraph> {
    if s < 2 || c < 2 || n < 1 {
        return Err(Error::InvalidArgument(format!("need s >= 2, c >= 2, n >= 1 (got {s}, {c}, {n})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slots = n * c;
    let perms: Vec<Vec<usize>> = (1..s)
        .map(|_| {
            let mut p: Vec<usize> = (0..slots).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect();
    let edges = (0..slots)
        .map(|e| std::iter::once(e / c).chain(perms.iter().map(|p| p[e] / c)).collect())
        .collect();
    Hypergraph::new(s, c, n, edges)
}

/// Heawood graph with the odd/even vertex split: partition 0 holds the even
/// vertices 0, 2, …, 12 and partition 1 the odd ones 1, 3, …, 13.
pub fn build_heawood() -> Hypergraph {
    const RIGHT: [usize; 21] = [0, 6, 4, 1, 0, 5, 2, 1, 6, 3, 2, 0, 4, 3, 1, 5, 4, 2, 6, 5, 3];
    let edges = (0..21).map(|e| vec![e / 3, RIGHT[e]]).collect();
    Hypergraph::new(2, 3, 7, edges).expect("valid built-in graph")
}

/// Utility graph K₃,₃.
pub fn build_utility() -> Hypergraph {
    const RIGHT: [usize; 9] = [0, 2, 1, 1, 0, 2, 2, 1, 0];
    let edges = (0..9).map(|e| vec![e / 3, RIGHT[e]]).collect();
    Hypergraph::new(2, 3, 3, edges).expect("valid built-in graph")
}

/// The 3-partite, 3-uniform, 4-regular hypergraph on 12 vertices.
pub fn build_3partite_example() -> Hypergraph {
    const P1: [usize; 16] = [0, 1, 2, 3, 3, 0, 1, 2, 2, 3, 0, 1, 1, 2, 3, 0];
    const P2: [usize; 16] = [0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 3, 2, 0, 1, 3, 2];
    let edges = (0..16).map(|e| vec![e / 4, P1[e], P2[e]]).collect();
    Hypergraph::new(3, 4, 4, edges).expect("valid built-in graph")
}

/// Resolves `builtin:heawood|utility|3partite`.
pub fn builtin(name: &str) -> Option<Hypergraph> {
    match name {
        "heawood" => Some(build_heawood()),
        "utility" => Some(build_utility()),
        "3partite" => Some(build_3partite_example()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regularity_is_enforced() {
        assert!(Hypergraph::new(2, 2, 2, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 0]]).is_err());
        assert!(Hypergraph::new(2, 1, 1, vec![vec![0, 0]]).is_ok());
    }

    #[test]
    fn forest_has_no_girth() {
        let g = Hypergraph::new(2, 1, 2, vec![vec![0, 0], vec![1, 1]]).unwrap();
        assert_eq!(g.girth(), None);
        assert_eq!(g.sd_girth(2).unwrap(), None);
    }

    #[test]
    fn text_round_trip() {
        let g = build_utility();
        assert_eq!(Hypergraph::parse(&g.to_text()).unwrap(), g);
        assert!(Hypergraph::parse("2 3 3\n0:0 0:1\n").is_err());
    }

    #[test]
    fn builtins_resolve() {
        assert_eq!(builtin("heawood").unwrap().num_edges(), 21);
        assert!(builtin("petersen").is_none());
    }

    #[test]
    fn dot_mentions_every_edge() {
        let dot = build_utility().to_dot();
        assert_eq!(dot.matches(" -- ").count(), 18);
    }
}
