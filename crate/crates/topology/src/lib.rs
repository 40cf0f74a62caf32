//! Device connectivity graphs and Hamiltonian grid paths (HGPs).

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
    #[error("edge ({0},{1}) is out of range")]
    OutOfRange(usize, usize),
    #[error("self-loop on qubit {0}")]
    SelfLoop(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("cannot parse graph spec `{0}`")]
    Parse(String),
    #[error("custom graph has no HGP; supply one in the graph file")]
    NoBuiltinHgp,
    #[error("graph json: {0}")]
    Json(String),
}

/// Built-in device families. Node ordering:
/// - `Lnn`, `AllToAll`: 0..n.
/// - `Grid`: row-major, node (i, j) is `i * cols + j`.
/// - `Ladder`: two rails of `n/2`; rail 0 is 0..n/2, rail 1 is n/2..n.
/// - `HeavyHex`: the row `0..=2*cells` followed by one pendant per cell,
///   pendant `2*cells + 1 + i` hangs off row node `2i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    Lnn { n: usize },
    Ladder { n: usize },
    Grid { rows: usize, cols: usize },
    HeavyHex { cells: usize },
    AllToAll { n: usize },
    Custom,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Lnn { .. } => "lnn",
            Family::Ladder { .. } => "ladder",
            Family::Grid { .. } => "grid",
            Family::HeavyHex { .. } => "heavy-hex",
            Family::AllToAll { .. } => "all-to-all",
            Family::Custom => "custom",
        }
    }

    pub fn qubits(&self) -> Option<usize> {
        match *self {
            Family::Lnn { n } | Family::Ladder { n } | Family::AllToAll { n } => Some(n),
            Family::Grid { rows, cols } => Some(rows * cols),
            Family::HeavyHex { cells } => Some(3 * cells + 1),
            Family::Custom => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Lnn { n } => write!(f, "lnn:{n}"),
            Family::Ladder { n } => write!(f, "ladder:{n}"),
            Family::Grid { rows, cols } => write!(f, "grid:{rows}x{cols}"),
            Family::HeavyHex { cells } => write!(f, "heavy-hex:{cells}"),
            Family::AllToAll { n } => write!(f, "all-to-all:{n}"),
            Family::Custom => write!(f, "custom"),
        }
    }
}

/// Parses `lnn:N`, `ladder:N`, `grid:RxC`, `heavy-hex:CELLS`, `all-to-all:N`.
impl FromStr for Family {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::Parse(s.to_string());
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let num = |a: &str| a.trim().parse::<usize>().map_err(|_| bad());
        Ok(match kind.trim() {
            "lnn" => Family::Lnn { n: num(arg)? },
            "ladder" => Family::Ladder { n: num(arg)? },
            "grid" => {
                let (r, c) = arg.split_once(['x', 'X']).ok_or_else(bad)?;
                Family::Grid { rows: num(r)?, cols: num(c)? }
            }
            "heavy-hex" | "heavy_hex" => Family::HeavyHex { cells: num(arg)? },
            "all-to-all" | "all_to_all" => Family::AllToAll { n: num(arg)? },
            _ => return Err(bad()),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConnectivityGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    pub family: Option<Family>,
}

impl ConnectivityGraph {
    /// Validates and normalizes edges to (min, max).
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        family: Option<Family>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::OutOfRange(a, b));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &set {
            adj[a].push(b);
            adj[b].push(a);
        }
        let g = ConnectivityGraph { n, edges: set, adj, family };
        if n == 0 || g.distances(0).iter().any(|d| d.is_none()) {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adj[q]
    }

    /// BFS distances from `src`.
    pub fn distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dist[v].unwrap() + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest path from `a` to `b` using only nodes accepted by `allowed`
    /// (the endpoints are always allowed).
    pub fn shortest_path(&self, a: usize, b: usize, allowed: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
        let mut prev = vec![usize::MAX; self.n];
        prev[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                let mut path = vec![b];
                let mut x = b;
                while x != a {
                    x = prev[x];
                    path.push(x);
                }
                path.reverse();
                return Some(path);
            }
            for &w in &self.adj[v] {
                if prev[w] == usize::MAX && (w == b || allowed(w)) {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

pub fn build_family(family: Family) -> Result<ConnectivityGraph, GraphError> {
    let bad = |m: &str| Err(GraphError::InvalidParams(format!("{family}: {m}")));
    let mut edges = Vec::new();
    let n = match family {
        Family::Lnn { n } => {
            if n < 1 {
                return bad("needs n >= 1");
            }
            edges.extend((1..n).map(|i| (i - 1, i)));
            n
        }
        Family::AllToAll { n } => {
            if n < 1 {
                return bad("needs n >= 1");
            }
            for i in 0..n {
                edges.extend((i + 1..n).map(|j| (i, j)));
            }
            n
        }
        Family::Grid { rows, cols } => {
            if rows < 2 || cols < 2 {
                return bad("needs rows >= 2 and cols >= 2");
            }
            for i in 0..rows {
                for j in 0..cols {
                    let v = i * cols + j;
                    if j + 1 < cols {
                        edges.push((v, v + 1));
                    }
                    if i + 1 < rows {
                        edges.push((v, v + cols));
                    }
                }
            }
            rows * cols
        }
        Family::Ladder { n } => {
            if n < 4 || n % 2 == 1 {
                return bad("needs an even n >= 4");
            }
            let m = n / 2;
            for j in 0..m {
                edges.push((j, m + j));
                if j + 1 < m {
                    edges.push((j, j + 1));
                    edges.push((m + j, m + j + 1));
                }
            }
            n
        }
        Family::HeavyHex { cells } => {
            if cells < 1 {
                return bad("needs cells >= 1");
            }
            let row = 2 * cells + 1;
            edges.extend((1..row).map(|i| (i - 1, i)));
            edges.extend((0..cells).map(|i| (2 * i + 1, row + i)));
            row + cells
        }
        Family::Custom => return bad("custom graphs are read from a file"),
    };
    ConnectivityGraph::new(n, edges, Some(family))
}

/// Hamiltonian grid path: a spine path plus, for each spine node, the
/// non-spine qubits attached to it.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Hgp {
    pub spine: Vec<usize>,
    #[serde(default)]
    pub neighbors: BTreeMap<usize, Vec<usize>>,
}

impl Hgp {
    pub fn neighbor_count(&self) -> usize {
        self.neighbors.values().map(Vec::len).sum()
    }

    pub fn attached(&self, s: usize) -> &[usize] {
        self.neighbors.get(&s).map_or(&[], Vec::as_slice)
    }

    /// Spine node each qubit is attached to (spine nodes map to themselves).
    pub fn owners(&self, n: usize) -> Vec<Option<usize>> {
        let mut own = vec![None; n];
        for &s in &self.spine {
            own[s] = Some(s);
        }
        for (&s, list) in &self.neighbors {
            for &u in list {
                own[u] = Some(s);
            }
        }
        own
    }
}

fn attach_rest(g: &ConnectivityGraph, spine: Vec<usize>, prefer: impl Fn(usize, usize) -> bool) -> Hgp {
    let on_spine: BTreeSet<usize> = spine.iter().copied().collect();
    let mut neighbors: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for u in 0..g.n() {
        if on_spine.contains(&u) {
            continue;
        }
        let mut cands: Vec<usize> = g.neighbors(u).iter().copied().filter(|s| on_spine.contains(s)).collect();
        cands.sort_by_key(|&s| (!prefer(u, s), spine.iter().position(|&x| x == s)));
        if let Some(&s) = cands.first() {
            neighbors.entry(s).or_default().push(u);
        }
    }
    Hgp { spine, neighbors }
}

/// Minimal HGP of a built-in family.
pub fn builtin_hgp(g: &ConnectivityGraph) -> Result<Hgp, GraphError> {
    let family = g.family.ok_or(GraphError::NoBuiltinHgp)?;
    let n = g.n();
    Ok(match family {
        Family::Lnn { .. } if n <= 2 => attach_rest(g, vec![0], |_, _| true),
        Family::Lnn { .. } => attach_rest(g, (1..n - 1).collect(), |_, _| true),
        Family::AllToAll { .. } => attach_rest(g, vec![0], |_, _| true),
        Family::Ladder { n } => attach_rest(g, (0..n / 2).collect(), |_, _| true),
        Family::HeavyHex { cells } => attach_rest(g, (0..=2 * cells).collect(), |_, _| true),
        Family::Grid { rows, cols } => {
            // Serpentine through rows 1, 4, 7, ... (clamped to the last row),
            // joined by vertical runs at alternating ends.
            let bands = rows.div_ceil(3);
            let spine_rows: Vec<usize> = (0..bands).map(|k| (3 * k + 1).min(rows - 1)).collect();
            let mut spine = Vec::new();
            for (k, &r) in spine_rows.iter().enumerate() {
                let cols_iter: Vec<usize> =
                    if k % 2 == 0 { (0..cols).collect() } else { (0..cols).rev().collect() };
                if k > 0 {
                    let col = *cols_iter.first().unwrap();
                    for rr in spine_rows[k - 1] + 1..r {
                        spine.push(rr * cols + col);
                    }
                }
                spine.extend(cols_iter.iter().map(|&j| r * cols + j));
            }
            // Prefer vertical attachment.
            attach_rest(g, spine, move |u, s| u % cols == s % cols)
        }
        Family::Custom => return Err(GraphError::NoBuiltinHgp),
    })
}

#[derive(Debug, Error, PartialEq)]
pub enum HgpError {
    #[error("spine is empty")]
    EmptySpine,
    #[error("node {0} out of range")]
    OutOfRange(usize),
    #[error("spine step {0} -> {1} is not an edge")]
    PathViolation(usize, usize),
    #[error("node {0} appears more than once")]
    Repeated(usize),
    #[error("neighbor {node} is not adjacent to spine node {spine}")]
    AdjacencyViolation { spine: usize, node: usize },
    #[error("{0} is listed as a neighbor of a non-spine node")]
    NotOnSpine(usize),
    #[error("qubit {0} is not covered")]
    Uncovered(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HgpReport {
    pub spine: usize,
    pub neighbors: usize,
}

pub fn validate_hgp(g: &ConnectivityGraph, h: &Hgp) -> Result<HgpReport, HgpError> {
    if h.spine.is_empty() {
        return Err(HgpError::EmptySpine);
    }
    let mut seen = vec![false; g.n()];
    let mut mark = |q: usize| {
        if q >= g.n() {
            return Err(HgpError::OutOfRange(q));
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(HgpError::Repeated(q));
        }
        Ok(())
    };
    for &s in &h.spine {
        mark(s)?;
    }
    for w in h.spine.windows(2) {
        if !g.has_edge(w[0], w[1]) {
            return Err(HgpError::PathViolation(w[0], w[1]));
        }
    }
    for (&s, list) in &h.neighbors {
        if !h.spine.contains(&s) {
            return Err(HgpError::NotOnSpine(s));
        }
        for &u in list {
            mark(u)?;
            if !g.has_edge(s, u) {
                return Err(HgpError::AdjacencyViolation { spine: s, node: u });
            }
        }
    }
    if let Some(q) = seen.iter().position(|&x| !x) {
        return Err(HgpError::Uncovered(q));
    }
    Ok(HgpReport { spine: h.spine.len(), neighbors: h.neighbor_count() })
}

/// Wire format of a graph file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hgp: Option<Hgp>,
}

pub fn graph_from_json(s: &str) -> Result<(ConnectivityGraph, Option<Hgp>), GraphError> {
    let f: GraphFile = serde_json::from_str(s).map_err(|e| GraphError::Json(e.to_string()))?;
    let g = ConnectivityGraph::new(f.n, f.edges.iter().map(|e| (e[0], e[1])), f.family.or(Some(Family::Custom)))?;
    Ok((g, f.hgp))
}

pub fn graph_to_json(g: &ConnectivityGraph, hgp: Option<&Hgp>) -> String {
    let f = GraphFile {
        n: g.n(),
        edges: g.edges().map(|(a, b)| [a, b]).collect(),
        family: g.family,
        hgp: hgp.cloned(),
    };
    serde_json::to_string(&f).expect("serializable")
}
