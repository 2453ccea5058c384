//! Polyhedral complexes of cones, their nerves and residual subcomplexes.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::exact::{Cone, GeomError, QVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("complex is not pure: facets of dimensions {0:?}")]
    NotPure(Vec<usize>),
    #[error("no face with index {0}")]
    InvalidFace(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Decoration carried through complexes untouched.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Payload {
    pub model: Option<String>,
    pub big: bool,
    /// Generator labels (geography ray indices) of the closed face.
    pub key: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexFace {
    pub label: String,
    pub cone: Cone,
    pub payload: Payload,
}

#[derive(Clone, Debug)]
pub struct PolyhedralComplex {
    faces: Vec<ComplexFace>,
    /// `(i, j)`: face `i` is a proper face of face `j`.
    inclusions: BTreeSet<(usize, usize)>,
    top_dim: Option<usize>,
}

impl PolyhedralComplex {
    /// Inclusions are computed with `Cone::is_face_of`.
    pub fn new(faces: Vec<ComplexFace>) -> PolyhedralComplex {
        let mut inclusions = BTreeSet::new();
        for (i, f) in faces.iter().enumerate() {
            for (j, g) in faces.iter().enumerate() {
                if i != j && f.cone.dim() < g.cone.dim() && f.cone.is_face_of(&g.cone) {
                    inclusions.insert((i, j));
                }
            }
        }
        let top_dim = faces.iter().map(|f| f.cone.dim()).max();
        PolyhedralComplex {
            faces,
            inclusions,
            top_dim,
        }
    }

    pub fn faces(&self) -> &[ComplexFace] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn inclusions(&self) -> &BTreeSet<(usize, usize)> {
        &self.inclusions
    }

    pub fn top_dim(&self) -> Option<usize> {
        self.top_dim
    }

    pub fn is_face_of(&self, i: usize, j: usize) -> bool {
        i == j || self.inclusions.contains(&(i, j))
    }

    /// Faces with no recorded proper superface.
    pub fn facets(&self) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&i| !self.inclusions.iter().any(|&(a, _)| a == i))
            .collect()
    }

    pub fn is_pure(&self) -> bool {
        let facets = self.facets();
        facets
            .iter()
            .all(|&f| Some(self.faces[f].cone.dim()) == self.top_dim)
    }

    pub fn find(&self, cone: &Cone) -> Option<usize> {
        self.faces.iter().position(|f| &f.cone == cone)
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.faces.iter().position(|f| f.label == label)
    }

    /// Indices of the faces of `res_a`: every facet whose closure contains
    /// face `a`, together with all faces of those facets.
    pub fn residual_indices(&self, a: usize) -> Result<Vec<usize>, ComplexError> {
        if a >= self.faces.len() {
            return Err(ComplexError::InvalidFace(a));
        }
        let tops: Vec<usize> = self
            .facets()
            .into_iter()
            .filter(|&f| self.is_face_of(a, f))
            .collect();
        Ok((0..self.faces.len())
            .filter(|&i| tops.iter().any(|&f| self.is_face_of(i, f)))
            .collect())
    }

    pub fn residual(&self, a: usize) -> Result<PolyhedralComplex, ComplexError> {
        let keep = self.residual_indices(a)?;
        Ok(self.subcomplex(&keep))
    }

    /// The subcomplex on the given face indices (assumed face-closed).
    pub fn subcomplex(&self, keep: &[usize]) -> PolyhedralComplex {
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        let faces = keep.iter().map(|&i| self.faces[i].clone()).collect();
        let inclusions = self
            .inclusions
            .iter()
            .filter_map(|(a, b)| Some((*pos.get(a)?, *pos.get(b)?)))
            .collect();
        let top_dim = keep.iter().map(|&i| self.faces[i].cone.dim()).max();
        PolyhedralComplex {
            faces,
            inclusions,
            top_dim,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    simplices: BTreeSet<Vec<usize>>,
}

impl SimplicialComplex {
    /// Builds the downward closure of `simplices` (vertex index lists).
    pub fn new(vertices: Vec<String>, simplices: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut s = SimplicialComplex {
            vertices,
            simplices: BTreeSet::new(),
        };
        for v in 0..s.vertices.len() {
            s.simplices.insert(vec![v]);
        }
        for simplex in simplices {
            s.insert_closed(simplex);
        }
        s
    }

    fn insert_closed(&mut self, mut simplex: Vec<usize>) {
        simplex.sort_unstable();
        simplex.dedup();
        if simplex.is_empty() || self.simplices.contains(&simplex) {
            return;
        }
        for skip in 0..simplex.len() {
            if simplex.len() > 1 {
                let mut sub = simplex.clone();
                sub.remove(skip);
                self.insert_closed(sub);
            }
        }
        self.simplices.insert(simplex);
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn simplices(&self) -> &BTreeSet<Vec<usize>> {
        &self.simplices
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    pub fn simplices_of_dim(&self, k: usize) -> Vec<Vec<usize>> {
        self.simplices
            .iter()
            .filter(|s| s.len() == k + 1)
            .cloned()
            .collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.simplices
            .iter()
            .filter(|s| s.len() == 2)
            .map(|s| (s[0], s[1]))
            .collect()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = if a < b { vec![a, b] } else { vec![b, a] };
        self.simplices.contains(&key)
    }

    pub fn has_simplex(&self, vs: &[usize]) -> bool {
        let mut key = vs.to_vec();
        key.sort_unstable();
        key.dedup();
        self.simplices.contains(&key)
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges()
            .into_iter()
            .filter_map(|(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (a, b) in self.edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        for n in adj.iter_mut() {
            n.sort_unstable();
        }
        adj
    }

    /// `|E| - |V| + #components` of the 1-skeleton.
    pub fn cycle_rank(&self) -> usize {
        self.edges().len() + connected_components(self).len() - self.vertices.len()
    }

    /// Realizes each simplex as the cone over the unit vectors of its vertices.
    pub fn as_polyhedral(&self) -> Result<PolyhedralComplex, ComplexError> {
        let n = self.vertices.len();
        let mut faces = Vec::with_capacity(self.simplices.len() + 1);
        faces.push(ComplexFace {
            label: "{}".into(),
            cone: Cone::zero(n),
            payload: Payload::default(),
        });
        for s in &self.simplices {
            let gens: Vec<QVector> = s.iter().map(|&v| QVector::unit(n, v)).collect();
            let label = s
                .iter()
                .map(|&v| self.vertices[v].as_str())
                .collect::<Vec<_>>()
                .join(",");
            faces.push(ComplexFace {
                label: format!("{{{label}}}"),
                cone: Cone::from_generators(n, &gens)?,
                payload: Payload {
                    model: None,
                    big: false,
                    key: s.clone(),
                },
            });
        }
        Ok(PolyhedralComplex::new(faces))
    }
}

pub fn skeleton(s: &SimplicialComplex, m: usize) -> SimplicialComplex {
    SimplicialComplex {
        vertices: s.vertices.clone(),
        simplices: s
            .simplices
            .iter()
            .filter(|x| x.len() <= m + 1)
            .cloned()
            .collect(),
    }
}

/// Components of the 1-skeleton, each sorted, ordered by least vertex.
pub fn connected_components(s: &SimplicialComplex) -> Vec<Vec<usize>> {
    let n = s.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (a, b) in s.edges() {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let r = root(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups.into_values().collect()
}

/// Witness faces (indices into the source complex) per nerve simplex.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualityRecord {
    pub witnesses: BTreeMap<Vec<usize>, Vec<usize>>,
}

impl DualityRecord {
    pub fn witnesses_of(&self, simplex: &[usize]) -> &[usize] {
        self.witnesses.get(simplex).map_or(&[], Vec::as_slice)
    }
}

/// Nerve of a pure complex. Vertex `i` is dual to `p.facets()[i]`. A set of
/// `k+1` facets spans a simplex when their common intersection is a face of
/// dimension `n-k`. The zero cone never witnesses a simplex.
pub fn nerve(p: &PolyhedralComplex) -> Result<(SimplicialComplex, DualityRecord), ComplexError> {
    let facets = p.facets();
    if !p.is_pure() {
        let dims: BTreeSet<usize> = facets.iter().map(|&f| p.faces[f].cone.dim()).collect();
        return Err(ComplexError::NotPure(dims.into_iter().collect()));
    }
    let vertices: Vec<String> = facets.iter().map(|&f| p.faces[f].label.clone()).collect();
    let n = p.top_dim.unwrap_or(0);
    let mut record = DualityRecord::default();
    for (v, &f) in facets.iter().enumerate() {
        record.witnesses.insert(vec![v], vec![f]);
    }
    for (ci, c) in p.faces.iter().enumerate() {
        let d = c.cone.dim();
        if d == 0 || d >= n {
            continue;
        }
        let k = n - d;
        let around: Vec<usize> = (0..facets.len())
            .filter(|&v| p.is_face_of(ci, facets[v]))
            .collect();
        if around.len() < k + 1 {
            continue;
        }
        for subset in combinations(&around, k + 1) {
            let mut inter = p.faces[facets[subset[0]]].cone.clone();
            for &v in &subset[1..] {
                inter = inter.intersect(&p.faces[facets[v]].cone)?;
            }
            if inter == c.cone {
                record.witnesses.entry(subset).or_default().push(ci);
            }
        }
    }
    let simplices: Vec<Vec<usize>> = record.witnesses.keys().cloned().collect();
    Ok((SimplicialComplex::new(vertices, simplices), record))
}

pub(crate) fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> QVector {
        QVector::from_ints(c)
    }

    fn face(label: &str, n: usize, gens: &[&[i64]]) -> ComplexFace {
        let gens: Vec<QVector> = gens.iter().map(|g| v(g)).collect();
        ComplexFace {
            label: label.into(),
            cone: Cone::from_generators(n, &gens).unwrap(),
            payload: Payload::default(),
        }
    }

    #[test]
    fn single_facet() {
        let p = PolyhedralComplex::new(vec![
            face("0", 2, &[]),
            face("x", 2, &[&[1, 0]]),
            face("y", 2, &[&[0, 1]]),
            face("q", 2, &[&[1, 0], &[0, 1]]),
        ]);
        assert_eq!(p.facets(), vec![3]);
        let (n, _) = nerve(&p).unwrap();
        assert_eq!(n.vertices().len(), 1);
        assert_eq!(n.simplices().len(), 1);
    }

    #[test]
    fn two_cones_sharing_a_ray() {
        let p = PolyhedralComplex::new(vec![
            face("0", 3, &[]),
            face("a", 3, &[&[1, 0, 0]]),
            face("b", 3, &[&[0, 1, 0]]),
            face("c", 3, &[&[0, 0, 1]]),
            face("ab", 3, &[&[1, 0, 0], &[0, 1, 0]]),
            face("bc", 3, &[&[0, 1, 0], &[0, 0, 1]]),
        ]);
        let (n, rec) = nerve(&p).unwrap();
        assert_eq!(n.vertices(), &["ab".to_string(), "bc".to_string()]);
        assert_eq!(n.edges(), vec![(0, 1)]);
        assert_eq!(rec.witnesses_of(&[0, 1]), &[2]);
    }

    #[test]
    fn non_pure_is_rejected() {
        let p = PolyhedralComplex::new(vec![
            face("a", 3, &[&[1, 0, 0]]),
            face("bc", 3, &[&[0, 1, 0], &[0, 0, 1]]),
        ]);
        assert!(matches!(nerve(&p), Err(ComplexError::NotPure(_))));
    }

    #[test]
    fn skeleton_of_triangle() {
        let s = SimplicialComplex::new(vec!["a".into(), "b".into(), "c".into()], vec![vec![0, 1, 2]]);
        assert_eq!(s.simplices().len(), 7);
        assert_eq!(skeleton(&s, 1).simplices().len(), 6);
        assert_eq!(skeleton(&s, 0).simplices().len(), 3);
        assert_eq!(skeleton(&s, 1).cycle_rank(), 1);
    }

    #[test]
    fn components() {
        let s = SimplicialComplex::new(
            (0..4).map(|i| i.to_string()).collect(),
            vec![vec![0, 1], vec![2, 3]],
        );
        assert_eq!(connected_components(&s), vec![vec![0, 1], vec![2, 3]]);
        assert!(connected_components(&SimplicialComplex::default()).is_empty());
    }

    #[test]
    fn residual_of_shared_ray() {
        let p = PolyhedralComplex::new(vec![
            face("0", 3, &[]),
            face("a", 3, &[&[1, 0, 0]]),
            face("b", 3, &[&[0, 1, 0]]),
            face("c", 3, &[&[0, 0, 1]]),
            face("ab", 3, &[&[1, 0, 0], &[0, 1, 0]]),
            face("bc", 3, &[&[0, 1, 0], &[0, 0, 1]]),
        ]);
        let ra = p.residual(p.find_label("a").unwrap()).unwrap();
        assert_eq!(ra.facets().len(), 1);
        assert_eq!(ra.len(), 4);
        let rb = p.residual(p.find_label("b").unwrap()).unwrap();
        assert_eq!(rb.facets().len(), 2);
        let r0 = p.residual(0).unwrap();
        assert_eq!(r0.len(), p.len());
        assert!(p.residual(17).is_err());
    }

    #[test]
    fn graph_round_trips_through_line_graph() {
        // nerve of a realized 4-cycle is its line graph, again a 4-cycle
        let s = SimplicialComplex::new(
            (0..4).map(|i| i.to_string()).collect(),
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        );
        let (n, _) = nerve(&s.as_polyhedral().unwrap()).unwrap();
        assert_eq!(n.vertices().len(), 4);
        assert_eq!(n.edges().len(), 4);
        assert_eq!(n.dim(), Some(1));
    }
}
