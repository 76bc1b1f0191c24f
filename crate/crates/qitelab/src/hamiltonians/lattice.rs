//! Lattice graphs and hop-count (Manhattan) distances.
//!
//! The two-dimensional geometries ship as explicit adjacency fixtures; the
//! edge lists below are the convention for site enumeration.
//!
//! Triangular ladder (2 rows × W columns, periodic along the rows): site
//! `(x, y)` has index `x + W·y`. Edges: row bonds `(x,y)-(x+1,y)`, rungs
//! `(x,0)-(x,1)`, and diagonals `(x,0)-(x+1,1)`, all with `x+1` mod `W`.
//!
//! Honeycomb strip (two hexagonal cells, periodic horizontally): two 6-site
//! rings, bottom `0..6` and top `6..12`, ring bonds `i-(i+1 mod 6)` within
//! each, plus rungs `(0,7), (2,9), (4,11)`.

use std::collections::VecDeque;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    Ring,
    TriangularLadder,
    Honeycomb,
}

/// Undirected graph of lattice sites.
#[derive(Debug, Clone)]
pub struct LatticeGraph {
    kind: LatticeKind,
    n_sites: usize,
    edges: Vec<(usize, usize)>,
    periodic: bool,
}

impl LatticeGraph {
    /// Ring of `n` sites with periodic boundary. A 2-site ring collapses the
    /// doubled edge to a single pair.
    pub fn ring(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("ring needs ≥ 2 sites, got {n}")));
        }
        let mut edges = Vec::with_capacity(n);
        for i in 0..n {
            let j = (i + 1) % n;
            let (a, b) = (i.min(j), i.max(j));
            if !edges.contains(&(a, b)) {
                edges.push((a, b));
            }
        }
        edges.sort_unstable();
        Ok(LatticeGraph { kind: LatticeKind::Ring, n_sites: n, edges, periodic: true })
    }

    /// Triangular ladder with 2 rows of `width` columns, periodic along the
    /// rows.
    pub fn triangular_ladder(width: usize) -> Result<Self> {
        if width < 3 {
            return Err(Error::InvalidArgument(format!(
                "triangular ladder needs width ≥ 3, got {width}"
            )));
        }
        let n = 2 * width;
        let idx = |x: usize, y: usize| (x % width) + width * y;
        let mut edges = Vec::new();
        for x in 0..width {
            edges.push(norm(idx(x, 0), idx(x + 1, 0)));
            edges.push(norm(idx(x, 1), idx(x + 1, 1)));
            edges.push(norm(idx(x, 0), idx(x, 1)));
            edges.push(norm(idx(x, 0), idx(x + 1, 1)));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(LatticeGraph {
            kind: LatticeKind::TriangularLadder,
            n_sites: n,
            edges,
            periodic: true,
        })
    }

    /// Honeycomb strip of two hexagonal cells with horizontal periodic
    /// boundary: 12 sites.
    pub fn honeycomb_strip() -> Result<Self> {
        let mut edges = Vec::new();
        for i in 0..6 {
            edges.push(norm(i, (i + 1) % 6));
            edges.push(norm(6 + i, 6 + (i + 1) % 6));
        }
        for k in 0..3 {
            edges.push(norm(2 * k, 6 + 2 * k + 1));
        }
        edges.sort_unstable();
        Ok(LatticeGraph { kind: LatticeKind::Honeycomb, n_sites: 12, edges, periodic: true })
    }

    /// Open hexagonal patch used for domain-selection examples: `rows` rows
    /// of `cols` brick-wall columns without periodic boundary.
    pub fn honeycomb_patch(rows: usize, cols: usize) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::InvalidArgument("patch needs at least 2×2 sites".into()));
        }
        let n = rows * cols;
        let idx = |x: usize, y: usize| x + cols * y;
        let mut edges = Vec::new();
        for y in 0..rows {
            for x in 0..cols {
                if x + 1 < cols {
                    edges.push(norm(idx(x, y), idx(x + 1, y)));
                }
                // brick-wall rungs on alternating columns
                if y + 1 < rows && (x + y) % 2 == 0 {
                    edges.push(norm(idx(x, y), idx(x, y + 1)));
                }
            }
        }
        edges.sort_unstable();
        Ok(LatticeGraph { kind: LatticeKind::Honeycomb, n_sites: n, edges, periodic: false })
    }

    pub fn from_edges(kind: LatticeKind, n_sites: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut edges: Vec<(usize, usize)> =
            edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        edges.dedup();
        LatticeGraph { kind, n_sites, edges, periodic: false }
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn periodic(&self) -> bool {
        self.periodic
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, site: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == site || b == site).count()
    }

    pub fn neighbors(&self, site: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == site {
                    Some(b)
                } else if b == site {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        v.sort_unstable();
        v
    }

    /// BFS hop distances from `site` to every site.
    pub fn distances_from(&self, site: usize) -> Result<Vec<usize>> {
        if site >= self.n_sites {
            return Err(Error::SiteOutOfRange { index: site, n_qubits: self.n_sites });
        }
        let adj: Vec<Vec<usize>> = (0..self.n_sites).map(|s| self.neighbors(s)).collect();
        let mut dist = vec![usize::MAX; self.n_sites];
        let mut q = VecDeque::new();
        dist[site] = 0;
        q.push_back(site);
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    q.push_back(v);
                }
            }
        }
        Ok(dist)
    }

    /// Minimal number of nearest-neighbor hops between `i` and `j`.
    pub fn manhattan_distance(&self, i: usize, j: usize) -> Result<usize> {
        let d = self.distances_from(i)?;
        if j >= self.n_sites {
            return Err(Error::SiteOutOfRange { index: j, n_qubits: self.n_sites });
        }
        if d[j] == usize::MAX {
            return Err(Error::InvalidArgument(format!("sites {i} and {j} are disconnected")));
        }
        Ok(d[j])
    }

    /// All unordered pairs at hop distance exactly `d`, ascending.
    pub fn pairs_at_distance(&self, d: usize) -> Result<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        for i in 0..self.n_sites {
            let dist = self.distances_from(i)?;
            for j in (i + 1)..self.n_sites {
                if dist[j] == d {
                    out.push((i, j));
                }
            }
        }
        Ok(out)
    }

    pub fn is_connected(&self) -> bool {
        match self.distances_from(0) {
            Ok(d) => d.iter().all(|&x| x != usize::MAX),
            Err(_) => false,
        }
    }
}

fn norm(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}
