//! Exponent matrices, their binary expansion, and Tanner graphs.
//!
//! A quasi-cyclic LDPC code is described compactly by an m x n exponent
//! matrix over {VOID, 0..N-1}. Expanding each non-void entry `p` to the
//! N x N identity with its rows cyclically shifted left by `p` positions
//! (and each void entry to the N x N zero matrix) yields the binary
//! parity-check matrix of the code.

use std::collections::VecDeque;
use std::fmt;

use crate::error::Error;

/// An m x n grid over {VOID, 0..N-1} together with the lifting degree N.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentMatrix {
    rows: usize,
    cols: usize,
    lifting: u32,
    entries: Vec<Option<u32>>,
}

impl ExponentMatrix {
    /// Builds a matrix from row-major entries, `None` meaning VOID.
    pub fn new(
        rows: usize,
        cols: usize,
        lifting: u32,
        entries: Vec<Option<u32>>,
    ) -> Result<Self, Error> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        if lifting < 2 {
            return Err(Error::BadLifting(lifting));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if let Some(e) = entries.iter().flatten().find(|&&e| e >= lifting) {
            return Err(Error::ExponentOutOfRange {
                value: *e,
                lifting,
            });
        }
        Ok(Self {
            rows,
            cols,
            lifting,
            entries,
        })
    }

    /// The (3,n)-regular array code exponent matrix p_{i,j} = i*j mod p,
    /// with lifting degree p, for `rows` block rows.
    pub fn array_code(rows: usize, p: u32) -> Result<Self, Error> {
        let entries = (0..rows)
            .flat_map(|i| (0..p as usize).map(move |j| Some((i as u32 * j as u32) % p)))
            .collect();
        Self::new(rows, p as usize, p, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn lifting(&self) -> u32 {
        self.lifting
    }

    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        self.entries[i * self.cols + j]
    }

    pub fn is_void(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_none()
    }

    /// Row-major positions of the non-void entries.
    pub fn support(&self) -> Vec<(usize, usize)> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.is_void(i, j))
            .collect()
    }

    /// Expands to the binary parity-check matrix: block (i,j) has ones at
    /// (r, (r + p_{i,j}) mod N) when non-void, and no ones when void.
    pub fn expand(&self) -> BinaryParityCheck {
        let n = self.lifting as usize;
        let mut positions = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if let Some(p) = self.get(i, j) {
                    for r in 0..n {
                        let row = i * n + r;
                        let col = j * n + (r + p as usize) % n;
                        positions.push((row, col));
                    }
                }
            }
        }
        BinaryParityCheck::new(self.rows * n, self.cols * n, positions)
            .expect("expansion positions are in range by construction")
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.rows, self.cols, self.lifting)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| match self.get(i, j) {
                    Some(p) => p.to_string(),
                    None => "-".to_string(),
                })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// A sparse binary matrix stored as adjacency lists per row and per column.
#[derive(Debug, Clone)]
pub struct BinaryParityCheck {
    row_count: usize,
    col_count: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl BinaryParityCheck {
    pub fn new(
        row_count: usize,
        col_count: usize,
        positions: Vec<(usize, usize)>,
    ) -> Result<Self, Error> {
        let mut rows = vec![Vec::new(); row_count];
        let mut cols = vec![Vec::new(); col_count];
        for (r, c) in positions {
            if r >= row_count || c >= col_count {
                return Err(Error::PositionOutOfRange {
                    row: r,
                    col: c,
                    row_count,
                    col_count,
                });
            }
            rows[r].push(c);
            cols[c].push(r);
        }
        for adj in rows.iter_mut().chain(cols.iter_mut()) {
            adj.sort_unstable();
            adj.dedup();
        }
        Ok(Self {
            row_count,
            col_count,
            rows,
            cols,
        })
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn col_count(&self) -> usize {
        self.col_count
    }

    /// Columns with a one in row `r`.
    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    /// Rows with a one in column `c`.
    pub fn col(&self, c: usize) -> &[usize] {
        &self.cols[c]
    }

    pub fn ones(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn tanner_graph(&self) -> TannerGraph {
        TannerGraph {
            matrix: self.clone(),
        }
    }
}

/// Bipartite graph with one variable node per column and one check node per
/// row of a parity-check matrix; edges are its one-entries.
#[derive(Debug, Clone)]
pub struct TannerGraph {
    matrix: BinaryParityCheck,
}

/// Girth of a graph, with forests mapped to `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }
}

/// Node of a Tanner graph: variable nodes index columns, check nodes rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Variable(usize),
    Check(usize),
}

impl TannerGraph {
    pub fn variable_count(&self) -> usize {
        self.matrix.col_count()
    }

    pub fn check_count(&self) -> usize {
        self.matrix.row_count()
    }

    pub fn edge_count(&self) -> usize {
        self.matrix.ones()
    }

    pub fn matrix(&self) -> &BinaryParityCheck {
        &self.matrix
    }

    pub fn neighbors(&self, node: Node) -> impl Iterator<Item = Node> + '_ {
        let (list, mk): (&[usize], fn(usize) -> Node) = match node {
            Node::Variable(v) => (self.matrix.col(v), Node::Check as fn(usize) -> Node),
            Node::Check(c) => (self.matrix.row(c), Node::Variable as fn(usize) -> Node),
        };
        list.iter().map(move |&i| mk(i))
    }

    pub fn variable_degree(&self, v: usize) -> usize {
        self.matrix.col(v).len()
    }

    pub fn check_degree(&self, c: usize) -> usize {
        self.matrix.row(c).len()
    }

    fn node_id(&self, node: Node) -> usize {
        match node {
            Node::Variable(v) => v,
            Node::Check(c) => self.variable_count() + c,
        }
    }

    fn node_from_id(&self, id: usize) -> Node {
        if id < self.variable_count() {
            Node::Variable(id)
        } else {
            Node::Check(id - self.variable_count())
        }
    }

    /// Length of the shortest cycle, via BFS from every node.
    pub fn girth(&self) -> Girth {
        let total = self.variable_count() + self.check_count();
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        for root in 0..total {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            let mut queue = VecDeque::new();
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                // No cycle through the root can be shorter than 2*dist + 2.
                if 2 * dist[u] + 2 >= best {
                    continue;
                }
                for w in self.neighbors(self.node_from_id(u)) {
                    let w = self.node_id(w);
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w && parent[w] != u {
                        best = best.min(dist[u] + dist[w] + 1);
                    }
                }
            }
        }
        if best == usize::MAX {
            Girth::Infinite
        } else {
            Girth::Finite(best)
        }
    }
}
