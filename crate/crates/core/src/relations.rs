//! Edge paths on decorated nerves, their groups, and the relations of the
//! Sarkisov program.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::complexes::{connected_components, nerve, ComplexError, SimplicialComplex};
use crate::exact::smith_normal_form;
use crate::geography::ValidGeography;
use crate::program::{DecoratedNerve, LinkType, ProgramError};

/// Longest cycle length `elementary_relations` will enumerate.
pub const MAX_CYCLE_LEN_CAP: usize = 20;
pub const DEFAULT_MAX_CYCLE_LEN: usize = 12;

#[derive(Debug, Error)]
pub enum RelationsError {
    #[error("the graph has no vertices")]
    EmptyGraph,
    #[error("the nerve has {0} connected components; select one")]
    Disconnected(usize),
    #[error("{0} is not an edge path")]
    InvalidPath(String),
    #[error("max_len {requested} exceeds the cap {cap}; up to {estimate} cycles could be enumerated")]
    TooLong {
        requested: usize,
        cap: usize,
        estimate: String,
    },
    #[error("max_len must be at least 3")]
    TooShort,
    #[error("{0}")]
    Face(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Program(#[from] ProgramError),
}

/// Vertex sequence; loops repeat their first vertex at the end.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgePath(pub Vec<usize>);

impl EdgePath {
    pub fn is_loop(&self) -> bool {
        self.0.len() > 1 && self.0.first() == self.0.last()
    }

    /// Number of links traversed.
    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn closed(cycle: &[usize]) -> EdgePath {
        let mut v = cycle.to_vec();
        if let Some(&f) = cycle.first() {
            v.push(f);
        }
        EdgePath(v)
    }

    pub fn check(&self, n: &SimplicialComplex) -> Result<(), RelationsError> {
        let nv = n.vertices().len();
        if self.0.is_empty() || self.0.iter().any(|&v| v >= nv) {
            return Err(RelationsError::InvalidPath(format!("{:?}", self.0)));
        }
        for w in self.0.windows(2) {
            if !n.has_edge(w[0], w[1]) {
                return Err(RelationsError::InvalidPath(format!(
                    "{:?}: no edge {}-{}",
                    self.0, w[0], w[1]
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

/// Presentation of the edge-path group: one generator per edge outside the
/// spanning tree, one relator per 2-simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    pub tree: Vec<(usize, usize)>,
    pub generators: Vec<(usize, usize)>,
    pub relators: Vec<Vec<Letter>>,
}

impl GroupPresentation {
    /// Word of a path, reading only the non-tree edges.
    pub fn word(&self, path: &EdgePath) -> Vec<Letter> {
        let mut out = Vec::new();
        for w in path.0.windows(2) {
            let (u, v) = (w[0], w[1]);
            let key = if u < v { (u, v) } else { (v, u) };
            if let Some(g) = self.generators.iter().position(|&e| e == key) {
                out.push(Letter {
                    generator: g,
                    inverse: u > v,
                });
            }
        }
        out
    }

    /// Exponent-sum vector of a loop in the abelianization.
    pub fn class(&self, path: &EdgePath) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.generators.len()];
        for l in self.word(path) {
            if l.inverse {
                v[l.generator] -= 1;
            } else {
                v[l.generator] += 1;
            }
        }
        v
    }

    fn relator_rows(&self) -> Vec<Vec<BigInt>> {
        self.relators
            .iter()
            .map(|w| {
                let mut v = vec![BigInt::zero(); self.generators.len()];
                for l in w {
                    if l.inverse {
                        v[l.generator] -= 1;
                    } else {
                        v[l.generator] += 1;
                    }
                }
                v
            })
            .collect()
    }
}

/// Breadth-first spanning forest, each tree rooted at the least vertex of
/// its component, neighbours visited in increasing order.
fn spanning_forest(n: &SimplicialComplex) -> Vec<(usize, usize)> {
    let adj = n.adjacency();
    let mut seen = vec![false; adj.len()];
    let mut tree = Vec::new();
    for root in 0..adj.len() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    tree.push((u.min(v), u.max(v)));
                    queue.push_back(v);
                }
            }
        }
    }
    tree.sort_unstable();
    tree
}

/// Spanning tree of the component of the least vertex.
pub fn spanning_tree(n: &SimplicialComplex) -> Result<Vec<(usize, usize)>, RelationsError> {
    let comps = connected_components(n);
    let first = comps.first().ok_or(RelationsError::EmptyGraph)?;
    Ok(spanning_forest(n)
        .into_iter()
        .filter(|(a, _)| first.binary_search(a).is_ok())
        .collect())
}

/// Presentation using a spanning forest; valid for disconnected graphs at
/// the level of first homology.
pub fn presentation(n: &SimplicialComplex) -> GroupPresentation {
    let tree = spanning_forest(n);
    let generators: Vec<(usize, usize)> = n
        .edges()
        .into_iter()
        .filter(|e| tree.binary_search(e).is_err())
        .collect();
    let mut p = GroupPresentation {
        tree,
        generators,
        relators: Vec::new(),
    };
    p.relators = n
        .simplices_of_dim(2)
        .iter()
        .map(|t| p.word(&EdgePath(vec![t[0], t[1], t[2], t[0]])))
        .collect();
    p
}

pub fn edge_path_group(n: &DecoratedNerve) -> Result<GroupPresentation, RelationsError> {
    let comps = connected_components(&n.nerve);
    match comps.len() {
        0 => Err(RelationsError::EmptyGraph),
        1 => Ok(presentation(&n.nerve)),
        k => Err(RelationsError::Disconnected(k)),
    }
}

/// The sub-nerve on one connected component, vertices renumbered in order.
pub fn component(n: &DecoratedNerve, k: usize) -> Option<DecoratedNerve> {
    let comps = connected_components(&n.nerve);
    let keep = comps.get(k)?;
    let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let vertices = keep.iter().map(|&v| n.vertices[v].clone()).collect::<Vec<_>>();
    let simplices = n
        .nerve
        .simplices()
        .iter()
        .filter(|s| s.iter().all(|v| pos.contains_key(v)))
        .map(|s| s.iter().map(|v| pos[v]).collect::<Vec<_>>());
    let nerve = SimplicialComplex::new(vertices.iter().map(|v| v.id.clone()).collect(), simplices);
    let edges = n
        .edges
        .iter()
        .filter(|e| pos.contains_key(&e.a) && pos.contains_key(&e.b))
        .map(|e| {
            let mut e = e.clone();
            e.a = pos[&e.a];
            e.b = pos[&e.b];
            e
        })
        .collect();
    Some(DecoratedNerve {
        nerve,
        vertices,
        edges,
        residual_loops: Vec::new(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelianization {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

pub fn abelianize(p: &GroupPresentation) -> Abelianization {
    let g = p.generators.len();
    let snf = smith_normal_form(&p.relator_rows(), g);
    Abelianization {
        free_rank: g - snf.rank(),
        torsion: snf
            .invariant_factors
            .into_iter()
            .filter(|d| !d.is_one())
            .collect(),
    }
}

/// Whether `v` lies in the integer row span of `rows`.
fn in_lattice(rows: &[Vec<BigInt>], v: &[BigInt], ncols: usize) -> bool {
    let a = smith_normal_form(rows, ncols);
    let mut more = rows.to_vec();
    more.push(v.to_vec());
    let b = smith_normal_form(&more, ncols);
    let prod = |f: &[BigInt]| f.iter().fold(BigInt::one(), |acc, d| acc * d);
    a.rank() == b.rank() && prod(&a.invariant_factors) == prod(&b.invariant_factors)
}

/// Greedy left-to-right removal of backtracks `v,w,v -> v` and of 2-simplex
/// shortcuts `u,v,w -> u,w`. Not a solution of the word problem.
pub fn reduce_path(path: &EdgePath, n: &DecoratedNerve) -> Result<EdgePath, RelationsError> {
    path.check(&n.nerve)?;
    let mut p = path.0.clone();
    'scan: loop {
        for i in 0..p.len().saturating_sub(2) {
            if p[i] == p[i + 2] {
                p.drain(i + 1..i + 3);
                continue 'scan;
            }
            if n.nerve.has_simplex(&[p[i], p[i + 1], p[i + 2]]) {
                p.remove(i + 1);
                continue 'scan;
            }
        }
        break;
    }
    Ok(EdgePath(p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SegmentKind {
    A,
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub kind: SegmentKind,
    /// Link positions `start+1 ..= end` (1-based) of the classified rotation.
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Classification {
    TypeA { n1: usize, n2: usize },
    TypeB { n1: usize, n2: usize },
    Composite { segments: Vec<Segment> },
    Unclassified { reasons: Vec<String> },
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::TypeA { .. } => "TypeA",
            Classification::TypeB { .. } => "TypeB",
            Classification::Composite { .. } => "Composite",
            Classification::Unclassified { .. } => "Unclassified",
        }
    }
}

/// A loop with its link types and base ranks, in the rotation used for
/// classification. `types[j]` is the link from `vertices[j]` to
/// `vertices[j+1]` (cyclically); `ranks[j]` is the rank of the base of
/// `vertices[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationChain {
    pub vertices: Vec<usize>,
    pub ids: Vec<String>,
    pub types: Vec<LinkType>,
    pub ranks: Vec<u32>,
    pub classification: Classification,
    pub warnings: Vec<String>,
}

impl RelationChain {
    pub fn path(&self) -> EdgePath {
        EdgePath::closed(&self.vertices)
    }
}

/// Result of classifying a cyclic sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleClassification {
    pub classification: Classification,
    /// Rotation start in the input order.
    pub start: usize,
    /// Whether the loop is read backwards.
    pub reversed: bool,
    pub types: Vec<LinkType>,
    pub ranks: Vec<u32>,
    pub warnings: Vec<String>,
}

/// A-pattern on the links `t_1..t_m` (0-based slice): at most one I followed
/// by one III, everything else II or IV. Returns 1-based `(n1, n2)`.
fn match_a(t: &[LinkType]) -> Option<(usize, usize)> {
    let ones: Vec<usize> = (0..t.len()).filter(|&j| t[j] == LinkType::I).collect();
    let threes: Vec<usize> = (0..t.len()).filter(|&j| t[j] == LinkType::III).collect();
    match (ones.as_slice(), threes.as_slice()) {
        ([], []) => Some((t.len(), t.len())),
        ([i], [k]) if i < k => Some((i + 1, k + 1)),
        _ => None,
    }
}

/// Splits a path at its minimal-rank vertices; `r` has one more entry than `t`.
fn split_at_min(t: &[LinkType], r: &[u32]) -> Option<Vec<(usize, usize)>> {
    let m = *r.iter().min()?;
    if r[0] != m || r[r.len() - 1] != m {
        return None;
    }
    let cuts: Vec<usize> = (0..r.len()).filter(|&j| r[j] == m).collect();
    debug_assert_eq!(r.len(), t.len() + 1);
    Some(cuts.windows(2).map(|w| (w[0], w[1])).collect())
}

/// B-pattern on a path or loop of links `t` with vertex ranks `r`
/// (`r.len() == t.len()`, or `t.len() + 1` for open paths).
fn match_b(t: &[LinkType], r: &[u32]) -> Option<(usize, usize)> {
    let n1 = t.iter().position(|&x| x == LinkType::I)?;
    let n2 = t.iter().rposition(|&x| x == LinkType::III)?;
    if n1 >= n2 {
        return None;
    }
    if !(t[..n1].iter().chain(&t[n2 + 1..]).all(|x| x.is_neutral())) {
        return None;
    }
    // interior path: vertices n1+1 ..= n2 (0-based), links n1+1 .. n2
    let inner_t = &t[n1 + 1..n2];
    let inner_r = &r[n1 + 1..=n2];
    let pieces = split_at_min(inner_t, inner_r)?;
    if pieces
        .iter()
        .all(|&(a, b)| match_a(&inner_t[a..b]).is_some())
    {
        Some((n1 + 1, n2 + 1))
    } else {
        None
    }
}

fn rank_warnings(kind: &Classification, r: &[u32]) -> Vec<String> {
    let base = r[0];
    let mut out = Vec::new();
    let mut expect = |j: usize, ok: bool, what: &str| {
        if !ok {
            out.push(format!("rank of S_{j} is {}, expected {what}", r[j]));
        }
    };
    match *kind {
        Classification::TypeA { n1, n2 } => {
            for j in 0..r.len() {
                if n1 < n2 && (n1..n2).contains(&j) {
                    expect(j, r[j] == base + 1, &format!("{}", base + 1));
                } else {
                    expect(j, r[j] == base, &format!("{base}"));
                }
            }
        }
        Classification::TypeB { n1, n2 } => {
            for j in 0..r.len() {
                if (n1..n2).contains(&j) {
                    expect(j, r[j] > base, &format!("more than {base}"));
                } else {
                    expect(j, r[j] == base, &format!("{base}"));
                }
            }
        }
        _ => {}
    }
    out
}

/// Classifies a cyclic chain. `types[j]` is the link from vertex `j` to
/// vertex `j+1 mod n`, `ranks[j]` the base rank at vertex `j`.
pub fn classify_cycle(types: &[LinkType], ranks: &[u32]) -> CycleClassification {
    let n = types.len();
    assert_eq!(n, ranks.len(), "one rank per vertex");
    let min = ranks.iter().copied().min().unwrap_or(0);
    let mut candidates: Vec<(Vec<LinkType>, Vec<u32>, usize, bool)> = Vec::new();
    for s in (0..n).filter(|&s| ranks[s] == min) {
        let fwd_t = (0..n).map(|j| types[(s + j) % n]).collect();
        let fwd_r = (0..n).map(|j| ranks[(s + j) % n]).collect();
        candidates.push((fwd_t, fwd_r, s, false));
        let back_t = (0..n)
            .map(|j| types[(s + 2 * n - j - 1) % n].reversed())
            .collect();
        let back_r = (0..n).map(|j| ranks[(s + n - j) % n]).collect();
        candidates.push((back_t, back_r, s, true));
    }
    candidates.sort();

    let done = |c: &(Vec<LinkType>, Vec<u32>, usize, bool), kind: Classification| {
        let warnings = rank_warnings(&kind, &c.1);
        CycleClassification {
            classification: kind,
            start: c.2,
            reversed: c.3,
            types: c.0.clone(),
            ranks: c.1.clone(),
            warnings,
        }
    };
    for c in &candidates {
        if let Some((n1, n2)) = match_a(&c.0) {
            return done(c, Classification::TypeA { n1, n2 });
        }
    }
    for c in &candidates {
        if let Some((n1, n2)) = match_b(&c.0, &c.1) {
            return done(c, Classification::TypeB { n1, n2 });
        }
    }
    for c in &candidates {
        let mut closed_r = c.1.clone();
        closed_r.push(c.1[0]);
        let Some(pieces) = split_at_min(&c.0, &closed_r) else {
            continue;
        };
        if pieces.len() < 2 {
            continue;
        }
        let mut segments = Vec::new();
        for &(a, b) in &pieces {
            let (t, r) = (&c.0[a..b], &closed_r[a..=b]);
            if match_a(t).is_some() {
                segments.push(Segment {
                    kind: SegmentKind::A,
                    start: a,
                    end: b,
                });
            } else if match_b(t, r).is_some() {
                segments.push(Segment {
                    kind: SegmentKind::B,
                    start: a,
                    end: b,
                });
            } else {
                break;
            }
        }
        if segments.len() == pieces.len() {
            return done(c, Classification::Composite { segments });
        }
    }
    let first = candidates
        .first()
        .cloned()
        .unwrap_or((Vec::new(), Vec::new(), 0, false));
    let pattern: Vec<&str> = first.0.iter().map(|t| t.as_str()).collect();
    done(
        &first,
        Classification::Unclassified {
            reasons: vec![format!(
                "link types ({}) match neither pattern",
                pattern.join(",")
            )],
        },
    )
}

/// Classifies a cycle of the nerve given as distinct vertices in order.
pub fn classify_chain(cycle: &[usize], n: &DecoratedNerve) -> Result<RelationChain, RelationsError> {
    let len = cycle.len();
    EdgePath::closed(cycle).check(&n.nerve)?;
    let types: Vec<LinkType> = (0..len)
        .map(|j| n.type_between(cycle[j], cycle[(j + 1) % len]).expect("checked edge"))
        .collect();
    let ranks: Vec<u32> = cycle.iter().map(|&v| n.rho_s(v)).collect();
    let c = classify_cycle(&types, &ranks);
    let vertices: Vec<usize> = (0..len)
        .map(|j| {
            if c.reversed {
                cycle[(c.start + len - j) % len]
            } else {
                cycle[(c.start + j) % len]
            }
        })
        .collect();
    Ok(RelationChain {
        ids: vertices.iter().map(|&v| n.vertices[v].id.clone()).collect(),
        vertices,
        types: c.types,
        ranks: c.ranks,
        classification: c.classification,
        warnings: c.warnings,
    })
}

/// Simple cycles of length `3..=max_len`, each once up to rotation and
/// reversal, starting at its least vertex.
pub fn simple_cycles(n: &SimplicialComplex, max_len: usize) -> Vec<Vec<usize>> {
    let adj = n.adjacency();
    let mut out = Vec::new();
    fn dfs(
        adj: &[Vec<usize>],
        start: usize,
        max_len: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let u = *path.last().unwrap();
        for &v in &adj[u] {
            if v == start && path.len() >= 3 && path[1] < path[path.len() - 1] {
                out.push(path.clone());
            }
            if v > start && !on_path[v] && path.len() < max_len {
                on_path[v] = true;
                path.push(v);
                dfs(adj, start, max_len, path, on_path, out);
                path.pop();
                on_path[v] = false;
            }
        }
    }
    let mut on_path = vec![false; adj.len()];
    for s in 0..adj.len() {
        on_path[s] = true;
        dfs(&adj, s, max_len, &mut vec![s], &mut on_path, &mut out);
        on_path[s] = false;
    }
    out.sort();
    out
}

fn cycle_estimate(n: &SimplicialComplex, max_len: usize) -> BigInt {
    let adj = n.adjacency();
    let d = adj.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1);
    let v = BigInt::from(adj.len());
    (3..=max_len).fold(BigInt::zero(), |acc, k| {
        acc + &v * BigInt::from(d).pow(k as u32 - 1) / BigInt::from(2 * k)
    })
}

/// Simple loops with no consecutive triple spanning a 2-simplex, classified.
pub fn elementary_relations(
    n: &DecoratedNerve,
    max_len: usize,
) -> Result<Vec<RelationChain>, RelationsError> {
    if max_len < 3 {
        return Err(RelationsError::TooShort);
    }
    if max_len > MAX_CYCLE_LEN_CAP {
        return Err(RelationsError::TooLong {
            requested: max_len,
            cap: MAX_CYCLE_LEN_CAP,
            estimate: cycle_estimate(&n.nerve, max_len).to_string(),
        });
    }
    let mut out = Vec::new();
    for cycle in simple_cycles(&n.nerve, max_len) {
        let k = cycle.len();
        let shortcut = (0..k).any(|j| {
            n.nerve
                .has_simplex(&[cycle[j], cycle[(j + 1) % k], cycle[(j + 2) % k]])
        });
        if !shortcut {
            out.push(classify_chain(&cycle, n)?);
        }
    }
    Ok(out)
}

/// Fundamental cycle of the non-tree edge `(a, b)`, as a closed path.
fn fundamental_cycle(n: &SimplicialComplex, tree: &[(usize, usize)], a: usize, b: usize) -> EdgePath {
    let mut adj = vec![Vec::new(); n.vertices().len()];
    for &(u, v) in tree {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut prev = vec![usize::MAX; adj.len()];
    prev[b] = b;
    let mut queue = VecDeque::from([b]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if prev[v] == usize::MAX {
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    // walk a -> ... -> b along the tree, then close with the edge b-a
    let mut path = vec![a];
    let mut cur = a;
    while cur != b {
        cur = prev[cur];
        path.push(cur);
    }
    path.push(a);
    EdgePath(path)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ResidualGroup {
    Trivial,
    Loop { path: EdgePath },
    /// More than one independent loop: not possible for valid input.
    Anomaly { cycles: Vec<EdgePath> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualGenerator {
    pub face: String,
    pub group: ResidualGroup,
}

/// The residual sub-nerve at boundary face `face_label`, with vertices
/// renumbered to the global nerve.
struct ResidualNerve {
    edges: Vec<(usize, usize)>,
    graph: SimplicialComplex,
    global: Vec<usize>,
}

fn residual_nerve(
    vg: &ValidGeography,
    dn: &DecoratedNerve,
    face_label: &str,
) -> Result<ResidualNerve, RelationsError> {
    let boundary = vg.boundary_complex().complex;
    let a = boundary
        .find_label(face_label)
        .ok_or_else(|| RelationsError::Face(format!("no boundary face {face_label}")))?;
    let res = boundary.residual(a)?;
    let tops = res.facets();
    let rho = vg.rho();
    if tops.iter().any(|&f| res.faces()[f].cone.dim() + 1 != rho) {
        return Ok(ResidualNerve {
            edges: Vec::new(),
            graph: SimplicialComplex::default(),
            global: Vec::new(),
        });
    }
    let (n, _) = nerve(&res)?;
    let global: Vec<usize> = n
        .vertices()
        .iter()
        .map(|id| dn.vertex_index(id).expect("residual facet is a nerve vertex"))
        .collect();
    let edges = n
        .edges()
        .into_iter()
        .map(|(x, y)| {
            let (p, q) = (global[x], global[y]);
            (p.min(q), p.max(q))
        })
        .collect();
    Ok(ResidualNerve {
        edges,
        graph: crate::complexes::skeleton(&n, 1),
        global,
    })
}

fn residual_group(r: &ResidualNerve) -> ResidualGroup {
    let p = presentation(&r.graph);
    let cycles: Vec<EdgePath> = p
        .generators
        .iter()
        .map(|&(a, b)| {
            let c = fundamental_cycle(&r.graph, &p.tree, a, b);
            EdgePath(c.0.iter().map(|&v| r.global[v]).collect())
        })
        .collect();
    match cycles.len() {
        0 => ResidualGroup::Trivial,
        1 => ResidualGroup::Loop {
            path: cycles.into_iter().next().unwrap(),
        },
        _ => ResidualGroup::Anomaly { cycles },
    }
}

/// The residual complex of the non-big boundary at a non-big cell, with its nerve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualReport {
    pub face: String,
    pub faces: Vec<String>,
    pub facets: Vec<String>,
    pub nerve_vertices: Vec<String>,
    pub nerve_edges: Vec<(String, String)>,
    pub cycle_rank: usize,
    pub group: ResidualGroup,
}

pub fn residual_report(vg: &ValidGeography, cell: usize) -> Result<ResidualReport, RelationsError> {
    let c = &vg.cells()[cell];
    if c.big {
        return Err(RelationsError::Face(format!("{} is a big cell", c.label())));
    }
    let dn = crate::program::decorated_nerve(vg)?;
    let label = c.label();
    let boundary = vg.boundary_complex().complex;
    let a = boundary
        .find_label(&label)
        .ok_or_else(|| RelationsError::Face(format!("no boundary face {label}")))?;
    let res = boundary.residual(a)?;
    let r = residual_nerve(vg, &dn, &label)?;
    let id = |v: usize| dn.vertices[v].id.clone();
    Ok(ResidualReport {
        face: label,
        faces: res.faces().iter().map(|f| f.label.clone()).collect(),
        facets: res.facets().iter().map(|&f| res.faces()[f].label.clone()).collect(),
        nerve_vertices: r.global.iter().map(|&v| id(v)).collect(),
        nerve_edges: r.edges.iter().map(|&(a, b)| (id(a), id(b))).collect(),
        cycle_rank: r.graph.cycle_rank(),
        group: residual_group(&r),
    })
}

fn codim3_faces(vg: &ValidGeography) -> Vec<usize> {
    let rho = vg.rho();
    if rho < 3 {
        return Vec::new();
    }
    (0..vg.cells().len())
        .filter(|&i| {
            let c = &vg.cells()[i];
            !c.big && c.dim() == rho - 3
        })
        .collect()
}

pub fn residual_generators(vg: &ValidGeography) -> Result<Vec<ResidualGenerator>, RelationsError> {
    let dn = crate::program::decorated_nerve(vg)?;
    let mut out = Vec::new();
    for i in codim3_faces(vg) {
        let label = vg.cells()[i].label();
        let r = residual_nerve(vg, &dn, &label)?;
        out.push(ResidualGenerator {
            face: label,
            group: residual_group(&r),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationReport {
    /// Non-big faces of dimension `rho - 3`.
    pub i_prime: Vec<String>,
    /// Non-big faces of dimension `rho - 2` containing none of the above.
    pub i_double_prime: Vec<String>,
    pub cover_ok: bool,
    pub uncovered_edges: Vec<String>,
    pub generators: Vec<ResidualGenerator>,
    pub h1_free_rank: usize,
    pub h1_torsion: Vec<String>,
    pub span_ok: bool,
    /// Fundamental cycles (by non-tree edge) outside the span of the loops.
    pub unspanned: Vec<String>,
    pub relations_between_relations: Vec<String>,
    pub passed: bool,
    pub caveat: String,
}

const H1_CAVEAT: &str = "generation is certified in the abelianized edge-path group only";

fn span_check(
    p: &GroupPresentation,
    loops: &[EdgePath],
    n: &SimplicialComplex,
    ids: &[String],
) -> (bool, Vec<String>) {
    let g = p.generators.len();
    let mut rows: Vec<Vec<BigInt>> = loops.iter().map(|l| p.class(l)).collect();
    rows.extend(p.relator_rows());
    let snf = smith_normal_form(&rows, g);
    if snf.is_unimodular_span() || g == 0 {
        return (true, Vec::new());
    }
    let mut missing = Vec::new();
    for (k, &(a, b)) in p.generators.iter().enumerate() {
        let mut e = vec![BigInt::zero(); g];
        e[k] = BigInt::one();
        if !in_lattice(&rows, &e, g) {
            let c = fundamental_cycle(n, &p.tree, a, b);
            let named: Vec<&str> = c.0.iter().map(|&v| ids[v].as_str()).collect();
            missing.push(format!("cycle through {}-{}: {}", ids[a], ids[b], named.join(" ")));
        }
    }
    (false, missing)
}

pub fn verify_generation(vg: &ValidGeography) -> Result<GenerationReport, RelationsError> {
    let dn = crate::program::decorated_nerve(vg)?;
    let rho = vg.rho();
    let ids: Vec<String> = dn.vertices.iter().map(|v| v.id.clone()).collect();
    let i1 = codim3_faces(vg);
    let i2: Vec<usize> = (0..vg.cells().len())
        .filter(|&i| {
            let c = &vg.cells()[i];
            !c.big && rho >= 2 && c.dim() + 2 == rho && !i1.iter().any(|&a| vg.is_face(a, i))
        })
        .collect();

    let mut covered: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut generators = Vec::new();
    for &i in i1.iter().chain(&i2) {
        let label = vg.cells()[i].label();
        let r = residual_nerve(vg, &dn, &label)?;
        covered.extend(r.edges.iter().copied());
        if i1.contains(&i) {
            generators.push(ResidualGenerator {
                face: label,
                group: residual_group(&r),
            });
        }
    }
    let uncovered: Vec<String> = dn
        .nerve
        .edges()
        .into_iter()
        .filter(|e| !covered.contains(e))
        .map(|(a, b)| format!("{}-{}", ids[a], ids[b]))
        .collect();

    let p = presentation(&dn.nerve);
    let ab = abelianize(&p);
    let loops: Vec<EdgePath> = generators
        .iter()
        .filter_map(|g| match &g.group {
            ResidualGroup::Loop { path } => Some(path.clone()),
            _ => None,
        })
        .collect();
    let (span_ok, unspanned) = span_check(&p, &loops, &dn.nerve, &ids);
    let anomalies = generators
        .iter()
        .any(|g| matches!(g.group, ResidualGroup::Anomaly { .. }));

    let mut rr = Vec::new();
    if rho >= 4 {
        for (x, &a) in i1.iter().enumerate() {
            for &b in &i1[x + 1..] {
                let (ka, kb) = (&vg.cells()[a].key, &vg.cells()[b].key);
                let meet: Vec<usize> = ka.iter().copied().filter(|k| kb.binary_search(k).is_ok()).collect();
                if let Some(c) = vg.cell_index(&meet) {
                    if vg.cells()[c].dim() + 4 == rho {
                        rr.push(format!(
                            "{} ∩ {} = {}",
                            vg.cells()[a].label(),
                            vg.cells()[b].label(),
                            vg.cells()[c].label()
                        ));
                    }
                }
            }
        }
    }

    let cover_ok = uncovered.is_empty();
    Ok(GenerationReport {
        i_prime: i1.iter().map(|&i| vg.cells()[i].label()).collect(),
        i_double_prime: i2.iter().map(|&i| vg.cells()[i].label()).collect(),
        cover_ok,
        uncovered_edges: uncovered,
        generators,
        h1_free_rank: ab.free_rank,
        h1_torsion: ab.torsion.iter().map(|d| d.to_string()).collect(),
        span_ok,
        unspanned,
        relations_between_relations: rr,
        passed: cover_ok && span_ok && !anomalies,
        caveat: H1_CAVEAT.into(),
    })
}

/// Generation check for a nerve given directly, using its attached residual
/// loops in place of residual sub-nerves.
pub fn verify_generation_nerve(dn: &DecoratedNerve) -> Result<GenerationReport, RelationsError> {
    let ids: Vec<String> = dn.vertices.iter().map(|v| v.id.clone()).collect();
    let mut covered = BTreeSet::new();
    let mut generators = Vec::new();
    let mut loops = Vec::new();
    let mut bad = Vec::new();
    for r in &dn.residual_loops {
        let distinct: BTreeSet<usize> = r.cycle.iter().copied().collect();
        let path = EdgePath::closed(&r.cycle);
        if distinct.len() != r.cycle.len() || r.cycle.len() < 3 || path.check(&dn.nerve).is_err() {
            bad.push(format!("residual loop at {} is not a cycle", r.face));
            continue;
        }
        for w in path.0.windows(2) {
            covered.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
        generators.push(ResidualGenerator {
            face: r.face.clone(),
            group: ResidualGroup::Loop { path: path.clone() },
        });
        loops.push(path);
    }
    let uncovered: Vec<String> = dn
        .nerve
        .edges()
        .into_iter()
        .filter(|e| !covered.contains(e))
        .map(|(a, b)| format!("{}-{}", ids[a], ids[b]))
        .collect();
    let p = presentation(&dn.nerve);
    let ab = abelianize(&p);
    let (span_ok, mut unspanned) = span_check(&p, &loops, &dn.nerve, &ids);
    unspanned.extend(bad.iter().cloned());
    let cover_ok = uncovered.is_empty();
    Ok(GenerationReport {
        i_prime: dn.residual_loops.iter().map(|r| r.face.clone()).collect(),
        i_double_prime: Vec::new(),
        cover_ok,
        uncovered_edges: uncovered,
        generators,
        h1_free_rank: ab.free_rank,
        h1_torsion: ab.torsion.iter().map(|d| d.to_string()).collect(),
        span_ok,
        unspanned,
        relations_between_relations: Vec::new(),
        passed: cover_ok && span_ok && bad.is_empty(),
        caveat: H1_CAVEAT.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use LinkType::*;

    fn graph(n: usize, edges: &[(usize, usize)], tris: &[[usize; 3]]) -> SimplicialComplex {
        SimplicialComplex::new(
            (0..n).map(|i| i.to_string()).collect(),
            edges
                .iter()
                .map(|&(a, b)| vec![a, b])
                .chain(tris.iter().map(|t| t.to_vec())),
        )
    }

    #[test]
    fn pentagon_presentation() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)], &[]);
        let p = presentation(&g);
        assert_eq!(p.tree.len(), 4);
        assert_eq!(p.generators.len(), 1);
        assert_eq!(abelianize(&p).free_rank, 1);
        let single = graph(1, &[], &[]);
        assert!(spanning_tree(&single).unwrap().is_empty());
        assert!(matches!(
            spanning_tree(&SimplicialComplex::default()),
            Err(RelationsError::EmptyGraph)
        ));
    }

    #[test]
    fn filled_triangle_is_trivial() {
        let g = graph(3, &[], &[[0, 1, 2]]);
        let p = presentation(&g);
        assert_eq!(p.generators.len(), 1);
        assert_eq!(p.relators.len(), 1);
        let ab = abelianize(&p);
        assert_eq!(ab.free_rank, 0);
        assert!(ab.torsion.is_empty());
    }

    #[test]
    fn torsion_from_square_relator() {
        let p = GroupPresentation {
            tree: vec![],
            generators: vec![(0, 1), (0, 2)],
            relators: vec![vec![
                Letter {
                    generator: 0,
                    inverse: false,
                };
                2
            ]],
        };
        let ab = abelianize(&p);
        assert_eq!(ab.free_rank, 1);
        assert_eq!(ab.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn cycles_of_k4() {
        let g = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], &[]);
        let c = simple_cycles(&g, 12);
        // 4 triangles and 3 squares
        assert_eq!(c.len(), 7);
        assert_eq!(simple_cycles(&g, 3).len(), 4);
    }

    #[test]
    fn a_pattern() {
        assert_eq!(match_a(&[I, II, IV, II, III]), Some((1, 5)));
        assert_eq!(match_a(&[II, II, II, II]), Some((4, 4)));
        assert_eq!(match_a(&[III, I]), None);
        assert_eq!(match_a(&[I, I, III, III]), None);
    }

    #[test]
    fn dp2_loop_is_type_a_from_any_rotation() {
        let types = [I, II, IV, II, III];
        let ranks = [0, 1, 1, 1, 1];
        for s in 0..5 {
            let t: Vec<_> = (0..5).map(|j| types[(s + j) % 5]).collect();
            let r: Vec<_> = (0..5).map(|j| ranks[(s + j) % 5]).collect();
            let c = classify_cycle(&t, &r);
            assert_eq!(c.classification, Classification::TypeA { n1: 1, n2: 5 });
            assert!(c.warnings.is_empty());
        }
    }

    #[test]
    fn degenerate_a_over_fixed_base() {
        let c = classify_cycle(&[II, II, II, II], &[1, 1, 1, 1]);
        assert_eq!(c.classification, Classification::TypeA { n1: 4, n2: 4 });
    }

    #[test]
    fn b_pattern_synthetic() {
        let types = [II, I, I, II, IV, II, III, III, IV];
        let ranks = [0, 0, 1, 2, 2, 2, 2, 1, 0];
        let c = classify_cycle(&types, &ranks);
        assert!(matches!(c.classification, Classification::TypeB { .. }), "{c:?}");
        assert!(c.warnings.is_empty(), "{:?}", c.warnings);
    }

    #[test]
    fn composite_of_two_a_loops() {
        // two A-shaped excursions from rank 0 joined at two rank-0 vertices
        let types = [I, III, I, III];
        let ranks = [0, 1, 0, 1];
        let c = classify_cycle(&types, &ranks);
        assert_eq!(c.classification.name(), "Composite");
    }

    #[test]
    fn reduce_backtrack_and_shortcut() {
        let g = graph(4, &[(0, 1), (0, 3)], &[[0, 1, 2]]);
        let dn = crate::program::DecoratedNerve::from_parts(
            (0..4)
                .map(|i| crate::program::MfsVertex {
                    id: i.to_string(),
                    chamber: None,
                    x_model: "X".into(),
                    s_model: "S".into(),
                    rho_s: 0,
                })
                .collect(),
            g.edges()
                .iter()
                .map(|&(a, b)| (a.to_string(), b.to_string(), "S".to_string(), None))
                .collect(),
            vec![["0".into(), "1".into(), "2".into()]],
            vec![],
        )
        .unwrap();
        assert_eq!(
            reduce_path(&EdgePath(vec![0, 1, 0, 3]), &dn).unwrap(),
            EdgePath(vec![0, 3])
        );
        assert_eq!(
            reduce_path(&EdgePath(vec![0, 1, 2]), &dn).unwrap(),
            EdgePath(vec![0, 2])
        );
        assert!(reduce_path(&EdgePath(vec![1, 3]), &dn).is_err());
    }
}
