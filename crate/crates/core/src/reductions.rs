//! Gadget constructions that turn hard source problems into parent-cover
//! instances, and brute-force solvers for the source problems.
//!
//! * Triangle packing to MIN-PARENT: one individual per node. A distance
//!   locus per origin node labels everyone with their BFS distance, and a
//!   locus per non-triangle triple splits one of its non-adjacent pairs.
//!   Three individuals are then a sibling set exactly when their nodes form a
//!   triangle, and a packing of `t` triangles costs `n - t` parents.
//! * MINREP to FIND-MIN-PARENT: one candidate parent per vertex, one
//!   individual per edge, one partition cell per super-edge. Loci forbid a
//!   parent pair from producing a child whenever that pair could not witness
//!   the child's super-edge.
//!
//! Graph file: `n m`, then `m` lines `u v` with `u < v`.
//!
//! MINREP file: `|A| |B| gA gB m`; the group index of each A vertex; the group
//! index of each B vertex; then `m` lines `a b`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::genotypes::{data_lines, FindMinParentInstance, Genotype, Individual, Population};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: BTreeSet<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(node_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self loop at {u}")));
            }
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {node_count} nodes"
                )));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut adj = vec![Vec::new(); node_count];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self {
            node_count,
            edges: set,
            adj,
        })
    }

    pub fn complete(n: usize) -> Self {
        Self::new(n, (0..n).tuple_combinations()).expect("valid")
    }

    pub fn cycle(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("valid")
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    /// BFS distances from `origin`; `None` for unreachable nodes.
    pub fn distances_from(&self, origin: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count];
        dist[origin] = Some(0);
        let mut queue = VecDeque::from([origin]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued nodes have a distance");
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(d + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.node_count == 0 || self.distances_from(0).iter().all(Option::is_some)
    }

    pub fn is_triangle(&self, u: usize, v: usize, w: usize) -> bool {
        self.has_edge(u, v) && self.has_edge(u, w) && self.has_edge(v, w)
    }

    /// All triangles as sorted triples, in lexicographic order.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        (0..self.node_count)
            .tuple_combinations()
            .filter(|&(u, v, w)| self.is_triangle(u, v, w))
            .map(|(u, v, w)| [u, v, w])
            .collect()
    }

    pub fn contains_k4(&self) -> bool {
        (0..self.node_count).tuple_combinations().any(|(a, b, c, d)| {
            self.is_triangle(a, b, c) && self.has_edge(a, d) && self.has_edge(b, d) && self.has_edge(c, d)
        })
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = data_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `n m` header"))?;
    let [n, m] = parse_usizes::<2>(hl, header)?;
    let mut edges = Vec::with_capacity(m);
    for (lineno, line) in lines {
        if edges.len() == m {
            return Err(Error::parse(lineno, format!("declared m={m} but found more edges")));
        }
        let [u, v] = parse_usizes::<2>(lineno, line)?;
        if u >= v {
            return Err(Error::parse(lineno, "edges must be written `u v` with u < v"));
        }
        if u >= n || v >= n {
            return Err(Error::parse(lineno, format!("node out of range for n={n}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::parse(hl, format!("declared m={m} but found {} edges", edges.len())));
    }
    Graph::new(n, edges)
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.node_count, g.edges.len());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

fn parse_usizes<const N: usize>(lineno: usize, line: &str) -> Result<[usize; N]> {
    let vals = parse_usize_list(lineno, line)?;
    vals.try_into()
        .map_err(|v: Vec<usize>| Error::parse(lineno, format!("expected {N} integers, found {}", v.len())))
}

fn parse_usize_list(lineno: usize, line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| Error::parse(lineno, format!("`{t}` is not a non-negative integer")))
        })
        .collect()
}

/// Individual for graph node `i` in [`reduce_tp`] output.
pub fn node_id(i: usize) -> String {
    format!("v{i}")
}

/// Builds the MIN-PARENT instance for a connected graph of maximum degree 4.
///
/// Loci: first one distance locus per origin node (node order), then one
/// locus per non-triangle triple (lexicographic). In a triple locus the
/// lexicographically smallest non-adjacent pair `(u, v)` gets labels 1 and 2
/// and every other individual gets 3.
pub fn reduce_tp(g: &Graph) -> Result<Population> {
    if !g.is_connected() {
        return Err(Error::InvalidGraph("graph is not connected".into()));
    }
    if g.max_degree() > 4 {
        return Err(Error::InvalidGraph(format!(
            "maximum degree {} exceeds 4",
            g.max_degree()
        )));
    }
    let n = g.node_count();
    let mut loci: Vec<Vec<Genotype>> = vec![Vec::new(); n];

    for origin in 0..n {
        for (v, d) in g.distances_from(origin).into_iter().enumerate() {
            let d = d.expect("connected") as u32;
            loci[v].push(Genotype::homozygous(d));
        }
    }
    for (u, v, w) in (0..n).tuple_combinations() {
        if g.is_triangle(u, v, w) {
            continue;
        }
        let (x, y) = [(u, v), (u, w), (v, w)]
            .into_iter()
            .find(|&(a, b)| !g.has_edge(a, b))
            .expect("a non-triangle has a non-edge");
        for (i, row) in loci.iter_mut().enumerate() {
            let label = if i == x {
                1
            } else if i == y {
                2
            } else {
                3
            };
            row.push(Genotype::homozygous(label));
        }
    }
    let ell = n + (0..n).tuple_combinations().filter(|&(u, v, w)| !g.is_triangle(u, v, w)).count();
    let members = loci
        .into_iter()
        .enumerate()
        .map(|(i, l)| Individual::new(node_id(i), l))
        .collect();
    Population::new(ell, members)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TpSolution {
    pub triangles: Vec<[usize; 3]>,
    pub t: usize,
}

/// Maximum set of vertex-disjoint triangles by exhaustive search.
pub fn brute_tp(g: &Graph) -> TpSolution {
    let tris = g.triangles();
    let mut by_min: Vec<Vec<usize>> = vec![Vec::new(); g.node_count()];
    for (i, t) in tris.iter().enumerate() {
        by_min[t[0]].push(i);
    }
    let mut used = vec![false; g.node_count()];
    let mut current = Vec::new();
    let mut best = Vec::new();
    pack(0, &tris, &by_min, &mut used, &mut current, &mut best);
    TpSolution {
        t: best.len(),
        triangles: best.into_iter().map(|i| tris[i]).collect(),
    }
}

fn pack(
    node: usize,
    tris: &[[usize; 3]],
    by_min: &[Vec<usize>],
    used: &mut [bool],
    current: &mut Vec<usize>,
    best: &mut Vec<usize>,
) {
    if current.len() > best.len() {
        *best = current.clone();
    }
    let free = used[node.min(used.len())..].iter().filter(|u| !**u).count();
    if node >= used.len() || current.len() + free / 3 <= best.len() {
        return;
    }
    if !used[node] {
        for &ti in &by_min[node] {
            let t = tris[ti];
            if t.iter().all(|&x| !used[x]) {
                t.iter().for_each(|&x| used[x] = true);
                current.push(ti);
                pack(node + 1, tris, by_min, used, current, best);
                current.pop();
                t.iter().for_each(|&x| used[x] = false);
            }
        }
    }
    // leave `node` out of any triangle whose smallest node it is
    pack(node + 1, tris, by_min, used, current, best);
}

/// Which children a [`forbid_pair_child_locus`] column forbids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForbidTarget {
    Child(usize),
    All,
}

/// One locus: a genotype per pool member and per child.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocusColumn {
    pub parents: Vec<Genotype>,
    pub children: Vec<Genotype>,
}

/// A locus under which the given parent pair cannot produce the target
/// child (or any child, for [`ForbidTarget::All`]) while every other
/// (parent pair, child) combination stays possible.
///
/// The forbidden pair carries `{1,2}` and the other pool members `{1,3}`.
/// Targeted children carry `{1,3}` and the rest `{1,1}`, which any two pool
/// members can produce.
pub fn forbid_pair_child_locus(
    pool_size: usize,
    child_count: usize,
    forbidden_parents: (usize, usize),
    forbidden_child: ForbidTarget,
) -> Result<LocusColumn> {
    let (p, q) = forbidden_parents;
    if p == q {
        return Err(Error::InvalidInstance(format!("forbidden parents must differ, got {p} twice")));
    }
    if p >= pool_size || q >= pool_size {
        return Err(Error::IndexOutOfRange {
            index: p.max(q),
            len: pool_size,
        });
    }
    if let ForbidTarget::Child(c) = forbidden_child {
        if c >= child_count {
            return Err(Error::IndexOutOfRange {
                index: c,
                len: child_count,
            });
        }
    }
    let parents = (0..pool_size)
        .map(|i| if i == p || i == q { Genotype::new(1, 2) } else { Genotype::new(1, 3) })
        .collect();
    let children = (0..child_count)
        .map(|c| match forbidden_child {
            ForbidTarget::All => Genotype::new(1, 3),
            ForbidTarget::Child(t) if t == c => Genotype::new(1, 3),
            ForbidTarget::Child(_) => Genotype::new(1, 1),
        })
        .collect();
    Ok(LocusColumn { parents, children })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinRepInstance {
    a_count: usize,
    b_count: usize,
    group_of_a: Vec<usize>,
    group_of_b: Vec<usize>,
    a_groups: usize,
    b_groups: usize,
    edges: BTreeSet<(usize, usize)>,
}

fn check_groups(side: &str, groups: &[usize], count: usize) -> Result<()> {
    let mut sizes = vec![0usize; count];
    for &g in groups {
        if g >= count {
            return Err(Error::InvalidMinRep(format!("{side} group index {g} >= {count}")));
        }
        sizes[g] += 1;
    }
    if sizes.contains(&0) {
        return Err(Error::InvalidMinRep(format!("{side} has an empty group")));
    }
    if !sizes.iter().all_equal() {
        return Err(Error::InvalidMinRep(format!("{side} groups differ in size: {sizes:?}")));
    }
    Ok(())
}

impl MinRepInstance {
    /// Group counts are taken as one past the largest index on each side.
    pub fn new(
        a_count: usize,
        b_count: usize,
        group_of_a: Vec<usize>,
        group_of_b: Vec<usize>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let a_groups = group_of_a.iter().max().map_or(0, |m| m + 1);
        let b_groups = group_of_b.iter().max().map_or(0, |m| m + 1);
        Self::with_group_counts(a_count, b_count, a_groups, b_groups, group_of_a, group_of_b, edges)
    }

    pub fn with_group_counts(
        a_count: usize,
        b_count: usize,
        a_groups: usize,
        b_groups: usize,
        group_of_a: Vec<usize>,
        group_of_b: Vec<usize>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if group_of_a.len() != a_count || group_of_b.len() != b_count {
            return Err(Error::InvalidMinRep("one group index per vertex required".into()));
        }
        check_groups("A", &group_of_a, a_groups)?;
        check_groups("B", &group_of_b, b_groups)?;
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= a_count || b >= b_count {
                return Err(Error::InvalidMinRep(format!("edge ({a}, {b}) out of range")));
            }
            set.insert((a, b));
        }
        if set.is_empty() {
            return Err(Error::InvalidMinRep("no edges".into()));
        }
        Ok(Self {
            a_count,
            b_count,
            group_of_a,
            group_of_b,
            a_groups,
            b_groups,
            edges: set,
        })
    }

    pub fn a_count(&self) -> usize {
        self.a_count
    }

    pub fn b_count(&self) -> usize {
        self.b_count
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b))
    }

    pub fn group_of_a(&self, a: usize) -> usize {
        self.group_of_a[a]
    }

    pub fn group_of_b(&self, b: usize) -> usize {
        self.group_of_b[b]
    }

    /// Group pair an edge belongs to.
    pub fn super_edge_of(&self, (a, b): (usize, usize)) -> (usize, usize) {
        (self.group_of_a[a], self.group_of_b[b])
    }

    /// Distinct super-edges in lexicographic order.
    pub fn super_edges(&self) -> Vec<(usize, usize)> {
        self.edges()
            .map(|e| self.super_edge_of(e))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }
}

pub fn parse_minrep(text: &str) -> Result<MinRepInstance> {
    let mut lines = data_lines(text);
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| Error::parse(0, format!("missing {what}")))
    };
    let (hl, header) = next("header")?;
    let [a_count, b_count, ga, gb, m] = parse_usizes::<5>(hl, header)?;
    let (la, line_a) = if a_count > 0 { next("A group line")? } else { (hl, "") };
    let group_of_a = parse_usize_list(la, line_a)?;
    if group_of_a.len() != a_count {
        return Err(Error::parse(la, format!("expected {a_count} A group indices")));
    }
    let (lb, line_b) = if b_count > 0 { next("B group line")? } else { (hl, "") };
    let group_of_b = parse_usize_list(lb, line_b)?;
    if group_of_b.len() != b_count {
        return Err(Error::parse(lb, format!("expected {b_count} B group indices")));
    }
    let mut edges = Vec::with_capacity(m);
    for (lineno, line) in lines {
        if edges.len() == m {
            return Err(Error::parse(lineno, format!("declared m={m} but found more edges")));
        }
        let [a, b] = parse_usizes::<2>(lineno, line)?;
        if a >= a_count || b >= b_count {
            return Err(Error::parse(lineno, format!("edge ({a}, {b}) out of range")));
        }
        edges.push((a, b));
    }
    if edges.len() != m {
        return Err(Error::parse(hl, format!("declared m={m} but found {} edges", edges.len())));
    }
    MinRepInstance::with_group_counts(a_count, b_count, ga, gb, group_of_a, group_of_b, edges)
}

pub fn serialize_minrep(m: &MinRepInstance) -> String {
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    let mut out = format!(
        "{} {} {} {} {}\n{}\n{}\n",
        m.a_count,
        m.b_count,
        m.a_groups,
        m.b_groups,
        m.edges.len(),
        join(&m.group_of_a),
        join(&m.group_of_b)
    );
    for (a, b) in m.edges() {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}

/// A vertex on either side of a MINREP graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MinRepVertex {
    A(usize),
    B(usize),
}

impl fmt::Display for MinRepVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinRepVertex::A(i) => write!(f, "a{i}"),
            MinRepVertex::B(j) => write!(f, "b{j}"),
        }
    }
}

/// How non-edges are forbidden in [`reduce_minrep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonEdgeMode {
    /// One locus per non-adjacent vertex pair, forbidding it for every child.
    Compact,
    /// One locus per (non-adjacent pair, child).
    Faithful,
}

/// Pool id of a MINREP vertex in [`reduce_minrep`] output.
pub fn parent_id(v: MinRepVertex) -> String {
    format!("p{v}")
}

/// Population id of the individual for edge `(a, b)`.
pub fn edge_individual_id(a: usize, b: usize) -> String {
    format!("s_a{a}_b{b}")
}

/// Builds the FIND-MIN-PARENT instance for a MINREP instance.
///
/// Pool order is all A vertices then all B vertices; the population has one
/// individual per edge in sorted edge order; cells follow sorted super-edges.
/// Loci are emitted in two blocks:
///
/// 1. for every edge `{u, v}` in `A_i x B_j` and every edge `{a, b}` outside
///    `A_i x B_j`, forbid `(p_u, p_v)` from producing `s_{a,b}`;
/// 2. for every pair of distinct vertices that is not an edge, forbid the pair
///    for every child ([`NonEdgeMode`] picks one locus or one per child).
pub fn reduce_minrep(m: &MinRepInstance, mode: NonEdgeMode) -> Result<FindMinParentInstance> {
    let pool_size = m.a_count + m.b_count;
    let vertex = |k: usize| {
        if k < m.a_count {
            MinRepVertex::A(k)
        } else {
            MinRepVertex::B(k - m.a_count)
        }
    };
    let edges: Vec<(usize, usize)> = m.edges().collect();
    let child_count = edges.len();
    let mut columns = Vec::new();

    for &(u, v) in &edges {
        let block = m.super_edge_of((u, v));
        for (c, &e) in edges.iter().enumerate() {
            if m.super_edge_of(e) != block {
                columns.push(forbid_pair_child_locus(
                    pool_size,
                    child_count,
                    (u, m.a_count + v),
                    ForbidTarget::Child(c),
                )?);
            }
        }
    }

    for (x, y) in (0..pool_size).tuple_combinations() {
        let adjacent = match (vertex(x), vertex(y)) {
            (MinRepVertex::A(a), MinRepVertex::B(b)) => m.has_edge(a, b),
            _ => false,
        };
        if adjacent {
            continue;
        }
        match mode {
            NonEdgeMode::Compact => {
                columns.push(forbid_pair_child_locus(pool_size, child_count, (x, y), ForbidTarget::All)?)
            }
            NonEdgeMode::Faithful => {
                for c in 0..child_count {
                    columns.push(forbid_pair_child_locus(
                        pool_size,
                        child_count,
                        (x, y),
                        ForbidTarget::Child(c),
                    )?);
                }
            }
        }
    }

    let ell = columns.len();
    let pool = (0..pool_size)
        .map(|k| Individual::new(parent_id(vertex(k)), columns.iter().map(|c| c.parents[k]).collect()))
        .collect();
    let universe = edges
        .iter()
        .enumerate()
        .map(|(c, &(a, b))| {
            Individual::new(edge_individual_id(a, b), columns.iter().map(|col| col.children[c]).collect())
        })
        .collect();
    let partition = m
        .super_edges()
        .into_iter()
        .map(|se| (0..child_count).filter(|&c| m.super_edge_of(edges[c]) == se).collect())
        .collect();

    FindMinParentInstance::new(
        Population::new(ell, universe)?,
        Population::new(ell, pool)?,
        partition,
    )
}

/// Smallest vertex set witnessing every super-edge, by ascending subset size
/// (A vertices before B vertices in the enumeration order).
pub fn brute_minrep(m: &MinRepInstance) -> Result<(usize, Vec<MinRepVertex>)> {
    let vertices: Vec<MinRepVertex> = (0..m.a_count)
        .map(MinRepVertex::A)
        .chain((0..m.b_count).map(MinRepVertex::B))
        .collect();
    let super_edges = m.super_edges();
    for size in 0..=vertices.len() {
        for subset in vertices.iter().copied().combinations(size) {
            let has = |v: MinRepVertex| subset.contains(&v);
            let witnesses_all = super_edges.iter().all(|&se| {
                m.edges()
                    .any(|e| m.super_edge_of(e) == se && has(MinRepVertex::A(e.0)) && has(MinRepVertex::B(e.1)))
            });
            if witnesses_all {
                return Ok((size, subset));
            }
        }
    }
    Err(Error::Infeasible("some super-edge cannot be witnessed".into()))
}
