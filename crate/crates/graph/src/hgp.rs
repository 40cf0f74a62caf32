//! Generators driven by a Hamiltonian grid path.
//!
//! A pass moves the label of the start qubit along a path of DX gates and
//! hits every other live qubit exactly once, either as a path node or with a
//! CX from an adjacent path node. The path is the live spine (reached from
//! the start if needed) plus a short tail to the qubit that keeps the
//! travelling label; that qubit then drops out. After all passes the removed
//! qubits hold consecutive products, so a CX chain along the removal order
//! decodes them.

use crate::GenError;
use twine_core::{Circuit, Gate};
use twine_topology::{validate_hgp, ConnectivityGraph, Family, Hgp};

/// Graph, HGP and the qubit every pass starts from.
#[derive(Clone, Debug)]
pub struct Layout {
    pub graph: ConnectivityGraph,
    pub hgp: Hgp,
    pub start: usize,
}

impl Layout {
    pub fn new(graph: ConnectivityGraph, hgp: Hgp) -> Result<Self, GenError> {
        validate_hgp(&graph, &hgp)?;
        let start = match graph.family {
            Some(Family::Lnn { n }) if n >= 3 => 0,
            _ => hgp.spine[0],
        };
        Ok(Layout { graph, hgp, start })
    }

    /// Passes may start at the first spine node or off the spine; the route
    /// from an off-spine start must reach the spine without crossing it.
    pub fn with_start(mut self, start: usize) -> Result<Self, GenError> {
        let inside = self.hgp.spine.iter().skip(1).any(|&s| s == start);
        if start >= self.graph.n() || inside {
            return Err(GenError::BadNode(start));
        }
        self.start = start;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    fn region(&self) -> Region<'_> {
        Region {
            g: &self.graph,
            owner: self.hgp.owners(self.graph.n()),
            spine: &self.hgp.spine,
            alive: vec![true; self.graph.n()],
            start: self.start,
        }
    }

    /// Order in which qubits keep the travelling label and drop out; the
    /// start qubit comes last. Three-row grids use a serpentine through the
    /// columns so that consecutive qubits are adjacent; ladders peel one
    /// column at a time, rail 0 first.
    pub fn removal_order(&self) -> Result<Vec<usize>, GenError> {
        let default_start = self.hgp.spine.first() == Some(&self.start);
        match self.graph.family {
            Some(Family::Grid { rows: 3, cols }) if default_start && self.hgp.spine.len() == cols => {
                let at = |i: usize, j: usize| i * cols + j;
                let mut order = Vec::new();
                for j in (1..cols).rev() {
                    let col = [at(0, j), at(1, j), at(2, j)];
                    if j % 2 == 1 {
                        order.extend(col);
                    } else {
                        order.extend(col.iter().rev());
                    }
                }
                order.extend([at(2, 0), at(0, 0), at(1, 0)]);
                Ok(order)
            }
            Some(Family::Ladder { n }) if default_start => {
                let m = n / 2;
                let mut order = Vec::new();
                // Each pass ends at the far end of the rail carrying it.
                for j in (1..m).rev() {
                    order.extend([j, m + j]);
                }
                order.extend([m, 0]);
                Ok(order)
            }
            _ => self.region().leaf_peel(),
        }
    }
}

struct Region<'a> {
    g: &'a ConnectivityGraph,
    owner: Vec<Option<usize>>,
    spine: &'a [usize],
    alive: Vec<bool>,
    start: usize,
}

impl Region<'_> {
    fn live_spine(&self) -> Vec<usize> {
        self.spine.iter().copied().filter(|&s| self.alive[s]).collect()
    }

    /// Start qubit, path onto the live spine, then the live spine.
    fn route(&self) -> Result<Vec<usize>, GenError> {
        let s = self.live_spine();
        for w in s.windows(2) {
            if !self.g.has_edge(w[0], w[1]) {
                return Err(GenError::BrokenSpine(w[0], w[1]));
            }
        }
        let Some(&entry) = s.first() else {
            return Ok(vec![self.start]);
        };
        if entry == self.start {
            return Ok(s);
        }
        if s.contains(&self.start) {
            return Err(GenError::BadNode(self.start));
        }
        let mut path = self
            .g
            .shortest_path(self.start, entry, |w| self.alive[w] && !s.contains(&w))
            .ok_or(GenError::Unreachable(entry))?;
        path.extend(&s[1..]);
        Ok(path)
    }

    fn pass_path(&self, target: usize) -> Result<Vec<usize>, GenError> {
        let mut route = self.route()?;
        if let Some(pos) = route.iter().position(|&q| q == target) {
            route.truncate(pos + 1);
            return Ok(route);
        }
        let last = *route.last().unwrap();
        let tail = self
            .g
            .shortest_path(last, target, |w| self.alive[w] && !route.contains(&w))
            .ok_or(GenError::Unreachable(target))?;
        route.extend(&tail[1..]);
        Ok(route)
    }

    /// One pass ending on `target`. With `special`, its label is first
    /// folded into the start qubit.
    fn emit_pass(&self, target: usize, special: Option<usize>, out: &mut Vec<Gate>) -> Result<(), GenError> {
        let path = self.pass_path(target)?;
        let mut hits: Vec<Vec<usize>> = vec![Vec::new(); path.len()];
        for u in (0..self.g.n()).filter(|&u| self.alive[u] && !path.contains(&u)) {
            let by_owner = self.owner[u].and_then(|s| path.iter().position(|&p| p == s));
            let idx = by_owner
                .or_else(|| path.iter().position(|&p| self.g.has_edge(p, u)))
                .ok_or(GenError::Uncovered(u))?;
            hits[idx].push(u);
        }
        if let Some(sp) = special {
            if !self.g.has_edge(sp, self.start) {
                return Err(GenError::NotAdjacent(sp, self.start));
            }
            out.push(Gate::cx(sp, self.start));
        }
        for (i, &p) in path.iter().enumerate() {
            out.extend(hits[i].iter().map(|&u| Gate::cx(p, u)));
            if let Some(&next) = path.get(i + 1) {
                out.push(Gate::cx(next, p));
                out.push(Gate::cx(p, next));
            }
        }
        Ok(())
    }

    /// Removes attachments of the last live spine node, then the node itself,
    /// and finally walks back along the path to the start.
    fn leaf_peel(&self) -> Result<Vec<usize>, GenError> {
        let s = self.live_spine();
        let route = self.route()?;
        let lead: Vec<usize> = match s.first() {
            Some(&entry) => route[..route.iter().position(|&q| q == entry).unwrap()].to_vec(),
            None => vec![self.start],
        };
        let mut order: Vec<usize> = Vec::new();
        for &sp in s.iter().rev() {
            let mut atts: Vec<usize> = (0..self.g.n())
                .filter(|&u| self.alive[u] && self.owner[u] == Some(sp) && u != sp && !lead.contains(&u))
                .collect();
            if let Some(&prev) = order.last() {
                if let Some(i) = atts.iter().position(|&u| self.g.has_edge(prev, u)) {
                    atts[..=i].rotate_right(1);
                }
            }
            order.extend(atts);
            order.push(sp);
        }
        order.extend(lead.iter().rev());
        let live = self.alive.iter().filter(|&&a| a).count();
        if order.len() != live {
            let missing = (0..self.g.n()).find(|&q| self.alive[q] && !order.contains(&q));
            return Err(GenError::Uncovered(missing.unwrap_or(0)));
        }
        Ok(order)
    }

    /// All passes for `order` (whose last entry is the start).
    fn passes(&mut self, order: &[usize], special: Option<usize>, out: &mut Vec<Gate>) -> Result<(), GenError> {
        if order.last() != Some(&self.start) {
            return Err(GenError::BadNode(self.start));
        }
        for &x in &order[..order.len() - 1] {
            self.emit_pass(x, special, out)?;
            self.alive[x] = false;
        }
        Ok(())
    }
}

/// `b ^= a` through the shortest path, leaving the qubits in between intact.
pub fn routed_cx(g: &ConnectivityGraph, a: usize, b: usize, out: &mut Vec<Gate>) {
    let p = g.shortest_path(a, b, |_| true).expect("graph is connected");
    let d = p.len() - 1;
    if d == 1 {
        out.push(Gate::cx(a, b));
        return;
    }
    let up = |from: usize, out: &mut Vec<Gate>| out.extend((from..d).map(|i| Gate::cx(p[i], p[i + 1])));
    let down = |from: usize, out: &mut Vec<Gate>| out.extend((from..d - 1).rev().map(|i| Gate::cx(p[i], p[i + 1])));
    up(0, out);
    down(0, out);
    up(1, out);
    down(1, out);
}

fn decode(g: &ConnectivityGraph, order: &[usize], special: Option<usize>, out: &mut Vec<Gate>) {
    if let (Some(sp), Some(&first)) = (special, order.first()) {
        routed_cx(g, sp, first, out);
    }
    for w in order.windows(2) {
        routed_cx(g, w[0], w[1], out);
    }
}

fn finish(n: usize, gates: Vec<Gate>) -> Circuit {
    Circuit::from_sequence(n, gates).expect("generator emits valid gates")
}

/// One pass from `layout.start` to the first qubit of the removal order.
pub fn ptc_graph(layout: &Layout) -> Result<Circuit, GenError> {
    let order = layout.removal_order()?;
    let mut out = Vec::new();
    if order.len() > 1 {
        layout.region().emit_pass(order[0], None, &mut out)?;
    }
    Ok(finish(layout.n(), out))
}

/// Ladders carry the travelling label on alternating rails: a rail that
/// only receives single CXs in one pass is free to carry the next one.
fn alternate_rail(layout: &Layout) -> Option<Hgp> {
    let Some(Family::Ladder { n }) = layout.graph.family else {
        return None;
    };
    let m = n / 2;
    if layout.hgp.spine != (0..m).collect::<Vec<_>>() || layout.start != 0 {
        return None;
    }
    Some(Hgp { spine: (m..n).collect(), neighbors: (0..m).map(|j| (m + j, vec![j])).collect() })
}

fn network(layout: &Layout, out: &mut Vec<Gate>) -> Result<Vec<usize>, GenError> {
    let (passes, order) = network_passes(layout)?;
    out.extend(passes.into_iter().flatten());
    Ok(order)
}

/// Gates of each pass of the network, and the removal order.
pub fn network_passes(layout: &Layout) -> Result<(Vec<Vec<Gate>>, Vec<usize>), GenError> {
    let order = layout.removal_order()?;
    let n = layout.n();
    let other = alternate_rail(layout);
    let rails = match &other {
        Some(h) => [&layout.hgp, h],
        None => [&layout.hgp, &layout.hgp],
    };
    let mut alive = vec![true; n];
    let mut passes = Vec::new();
    if order.last() != Some(&layout.start) {
        return Err(GenError::BadNode(layout.start));
    }
    for (j, &x) in order[..n - 1].iter().enumerate() {
        let pick = |h: &Hgp| h.spine.iter().copied().find(|&s| alive[s] && s != x);
        let (h, start) = match (&other, pick(rails[j % 2])) {
            (None, _) => (&layout.hgp, layout.start),
            (Some(_), Some(s)) => (rails[j % 2], s),
            (Some(_), None) => (rails[1 - j % 2], pick(rails[1 - j % 2]).ok_or(GenError::Uncovered(x))?),
        };
        let region = Region { g: &layout.graph, owner: h.owners(n), spine: &h.spine, alive: alive.clone(), start };
        let mut gates = Vec::new();
        region.emit_pass(x, None, &mut gates)?;
        passes.push(gates);
        alive[x] = false;
    }
    Ok((passes, order))
}

/// Shrinking passes; returns the circuit and the removal order used.
pub fn ptn_graph(layout: &Layout) -> Result<(Circuit, Vec<usize>), GenError> {
    let mut out = Vec::new();
    let order = network(layout, &mut out)?;
    Ok((finish(layout.n(), out), order))
}

/// Clean two-body generator: the network followed by its decoding chain.
pub fn g2_graph(layout: &Layout) -> Result<Circuit, GenError> {
    let mut out = Vec::new();
    let order = network(layout, &mut out)?;
    decode(&layout.graph, &order, None, &mut out);
    Ok(finish(layout.n(), out))
}

/// Encodes the special label into every other qubit along a BFS tree.
pub fn initializer(g: &ConnectivityGraph, special: usize) -> Result<Circuit, GenError> {
    if special >= g.n() {
        return Err(GenError::BadNode(special));
    }
    let dist = g.distances(special);
    let parent = |v: usize| {
        let d = dist[v].unwrap();
        *g.neighbors(v).iter().find(|&&w| dist[w] == Some(d - 1)).unwrap()
    };
    let mut by_depth: Vec<usize> = (0..g.n()).filter(|&v| v != special).collect();
    by_depth.sort_by_key(|&v| (dist[v], v));
    let mut out = Vec::new();
    // Deep qubits first pick up their parent's label, then a top-down sweep
    // replaces that with the special label.
    for &v in by_depth.iter().rev().filter(|&&v| dist[v] >= Some(2)) {
        out.push(Gate::cx(parent(v), v));
    }
    for &v in &by_depth {
        out.push(Gate::cx(parent(v), v));
    }
    Ok(finish(g.n(), out))
}

/// Clean three-body generator: one clean special generator per qubit in
/// front-peel order, each on the qubits that come after it.
pub fn g3_graph(layout: &Layout) -> Result<Circuit, GenError> {
    let n = layout.n();
    let owner = layout.hgp.owners(n);
    let mut front = Vec::new();
    for &s in &layout.hgp.spine {
        front.extend((0..n).filter(|&u| owner[u] == Some(s) && u != s));
        front.push(s);
    }
    let mut out = Vec::new();
    let mut alive = vec![true; n];
    for &sp in front.iter().take(n.saturating_sub(2)) {
        alive[sp] = false;
        let live_spine = layout.hgp.spine.iter().copied().find(|&s| alive[s]).ok_or(GenError::Uncovered(sp))?;
        let mut region = Region {
            g: &layout.graph,
            owner: owner.clone(),
            spine: &layout.hgp.spine,
            alive: alive.clone(),
            start: live_spine,
        };
        let order = region.leaf_peel()?;
        region.passes(&order, Some(sp), &mut out)?;
        out.push(Gate::cx(sp, region.start));
        decode(&layout.graph, &order, Some(sp), &mut out);
    }
    Ok(finish(n, out))
}

/// Gates of a two-body generator split into its shrinking passes and the
/// closing decode.
#[derive(Clone, Debug, PartialEq)]
pub struct PassPlan {
    pub n: usize,
    pub passes: Vec<Vec<Gate>>,
    pub decode: Vec<Gate>,
}

impl PassPlan {
    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.passes.iter().flatten().chain(&self.decode)
    }

    pub fn circuit(&self) -> Circuit {
        finish(self.n, self.gates().copied().collect())
    }
}

/// Pass plan on an HGP layout.
pub fn layout_plan(layout: &Layout) -> Result<PassPlan, GenError> {
    let (passes, order) = network_passes(layout)?;
    let mut dec = Vec::new();
    decode(&layout.graph, &order, None, &mut dec);
    Ok(PassPlan { n: layout.n(), passes, decode: dec })
}

/// Compressed all-to-all plan: pass `j` fans the label of qubit `j` out to
/// every later qubit, and qubit `j` is decoded right after its pass.
pub fn all_to_all_plan(n: usize) -> PassPlan {
    banded_plan(n, n)
}

/// All-to-all plan that only pairs qubits closer than `band`. Qubit `j + band`
/// enters the band with one CX from the freshly decoded qubit `j`.
pub fn banded_plan(n: usize, band: usize) -> PassPlan {
    let mut passes = Vec::new();
    if band < 2 {
        return PassPlan { n, passes: vec![Vec::new(); n.saturating_sub(1)], decode: Vec::new() };
    }
    for j in 0..n.saturating_sub(1) {
        let mut p: Vec<Gate> = (j + 1..n.min(j + band)).map(|k| Gate::cx(j, k)).collect();
        if j > 0 {
            p.push(Gate::cx(j - 1, j));
        }
        if j + band < n {
            p.push(Gate::cx(j, j + band));
        }
        passes.push(p);
    }
    let decode = if n >= 2 { vec![Gate::cx(n - 2, n - 1)] } else { Vec::new() };
    PassPlan { n, passes, decode }
}
