use std::collections::{BTreeSet, VecDeque};

use num_traits::{Signed, Zero};

use super::linalg::{nullspace, project_off, rref, QVector};
use super::{GeomError, Rat};

/// Face enumeration refuses cones in ambient dimension above this.
pub const MAX_FACE_AMBIENT_DIM: usize = 12;
/// Face enumeration refuses cones with more extreme rays than this.
pub const MAX_FACE_GENERATORS: usize = 64;

/// A closed rational polyhedral cone, stored in canonical double description.
///
/// * `rays`: extreme rays modulo the lineality space, orthogonal to it,
///   primitive and sorted.
/// * `lineality`: reduced row echelon basis of the lineality space.
/// * `normals`: facet inequalities `n . x >= 0`, each lying in the linear
///   span of the cone, primitive and sorted.
/// * `equations`: reduced row echelon basis of the orthogonal complement of
///   the linear span.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cone {
    ambient: usize,
    rays: Vec<QVector>,
    lineality: Vec<QVector>,
    normals: Vec<QVector>,
    equations: Vec<QVector>,
    dim: usize,
}

impl Cone {
    pub fn zero(ambient: usize) -> Cone {
        Cone {
            ambient,
            rays: Vec::new(),
            lineality: Vec::new(),
            normals: Vec::new(),
            equations: canonical_basis(
                &(0..ambient).map(|i| QVector::unit(ambient, i)).collect::<Vec<_>>(),
                ambient,
            ),
            dim: 0,
        }
    }

    pub fn full(ambient: usize) -> Cone {
        Cone {
            ambient,
            rays: Vec::new(),
            lineality: canonical_basis(
                &(0..ambient).map(|i| QVector::unit(ambient, i)).collect::<Vec<_>>(),
                ambient,
            ),
            normals: Vec::new(),
            equations: Vec::new(),
            dim: ambient,
        }
    }

    /// The cone spanned by `gens`. Redundant generators are dropped.
    pub fn from_generators(ambient: usize, gens: &[QVector]) -> Result<Cone, GeomError> {
        for g in gens {
            if g.len() != ambient {
                return Err(GeomError::DimensionMismatch {
                    expected: ambient,
                    found: g.len(),
                });
            }
        }
        let gens: Vec<QVector> = gens
            .iter()
            .filter(|g| !g.is_zero())
            .map(QVector::primitive)
            .collect();
        if gens.is_empty() {
            return Ok(Cone::zero(ambient));
        }
        let equations = canonical_basis(&nullspace(&gens, ambient), ambient);
        let dim = ambient - equations.len();

        // Extreme rays of the dual cone, taken modulo the orthogonal complement
        // of the span, are the facet normals.
        let (_, dual_rays) = double_description(ambient, &gens);
        let normals: BTreeSet<QVector> = dual_rays
            .iter()
            .map(|a| project_off(a, &equations).primitive())
            .filter(|a| !a.is_zero())
            .collect();
        let normals: Vec<QVector> = normals.into_iter().collect();

        let mut constraints = normals.clone();
        for e in &equations {
            constraints.push(e.clone());
            constraints.push(e.neg());
        }
        let (lin, rays) = double_description(ambient, &constraints);
        let lineality = canonical_basis(&lin, ambient);
        let rays: BTreeSet<QVector> = rays
            .iter()
            .map(|r| project_off(r, &lineality).primitive())
            .filter(|r| !r.is_zero())
            .collect();

        Ok(Cone {
            ambient,
            rays: rays.into_iter().collect(),
            lineality,
            normals,
            equations,
            dim,
        })
    }

    /// The cone `{x : a . x >= 0 for a in ineqs, e . x = 0 for e in eqs}`.
    pub fn from_inequalities(
        ambient: usize,
        ineqs: &[QVector],
        eqs: &[QVector],
    ) -> Result<Cone, GeomError> {
        for v in ineqs.iter().chain(eqs) {
            if v.len() != ambient {
                return Err(GeomError::DimensionMismatch {
                    expected: ambient,
                    found: v.len(),
                });
            }
        }
        let mut constraints: Vec<QVector> = ineqs.to_vec();
        for e in eqs {
            constraints.push(e.clone());
            constraints.push(e.neg());
        }
        let (lin, rays) = double_description(ambient, &constraints);
        let mut gens = rays;
        for l in &lin {
            gens.push(l.clone());
            gens.push(l.neg());
        }
        Cone::from_generators(ambient, &gens)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[QVector] {
        &self.rays
    }

    pub fn lineality_space(&self) -> &[QVector] {
        &self.lineality
    }

    pub fn normals(&self) -> &[QVector] {
        &self.normals
    }

    pub fn equations(&self) -> &[QVector] {
        &self.equations
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// A finite generating set: extreme rays plus both signs of the lineality basis.
    pub fn generators(&self) -> Vec<QVector> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(l.neg());
        }
        g
    }

    /// Basis of the linear span.
    pub fn span_basis(&self) -> Vec<QVector> {
        canonical_basis(&self.generators(), self.ambient)
    }

    pub fn contains(&self, v: &QVector) -> bool {
        v.len() == self.ambient
            && self.equations.iter().all(|e| e.dot(v).is_zero())
            && self.normals.iter().all(|n| !n.dot(v).is_negative())
    }

    pub fn relint_contains(&self, v: &QVector) -> bool {
        v.len() == self.ambient
            && self.equations.iter().all(|e| e.dot(v).is_zero())
            && self.normals.iter().all(|n| n.dot(v).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators().iter().all(|g| self.contains(g))
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone, GeomError> {
        if self.ambient != other.ambient {
            return Err(GeomError::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        let ineqs: Vec<QVector> = self.normals.iter().chain(&other.normals).cloned().collect();
        let eqs: Vec<QVector> = self
            .equations
            .iter()
            .chain(&other.equations)
            .cloned()
            .collect();
        Cone::from_inequalities(self.ambient, &ineqs, &eqs)
    }

    /// The face of `self` cut out by every facet hyperplane containing `f`.
    fn face_hull(&self, f: &Cone) -> Result<Cone, GeomError> {
        let gens = f.generators();
        let tight: Vec<QVector> = self
            .normals
            .iter()
            .filter(|n| gens.iter().all(|g| n.dot(g).is_zero()))
            .cloned()
            .collect();
        let mut eqs = self.equations.clone();
        eqs.extend(tight);
        Cone::from_inequalities(self.ambient, &self.normals, &eqs)
    }

    pub fn is_face_of(&self, c: &Cone) -> bool {
        if self.ambient != c.ambient || !c.contains_cone(self) {
            return false;
        }
        match c.face_hull(self) {
            Ok(h) => &h == self,
            Err(_) => false,
        }
    }

    /// All faces, the cone itself included, sorted by dimension.
    pub fn faces(&self) -> Result<Vec<Cone>, GeomError> {
        if self.ambient > MAX_FACE_AMBIENT_DIM {
            return Err(GeomError::TooLarge(format!(
                "ambient dimension {} exceeds {}",
                self.ambient, MAX_FACE_AMBIENT_DIM
            )));
        }
        if self.rays.len() > MAX_FACE_GENERATORS {
            return Err(GeomError::TooLarge(format!(
                "{} extreme rays exceed {}",
                self.rays.len(),
                MAX_FACE_GENERATORS
            )));
        }
        let all: BTreeSet<usize> = (0..self.rays.len()).collect();
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(all.clone());
        queue.push_back(all);
        while let Some(face) = queue.pop_front() {
            for n in &self.normals {
                let tight: BTreeSet<usize> = face
                    .iter()
                    .copied()
                    .filter(|&i| n.dot(&self.rays[i]).is_zero())
                    .collect();
                if tight.len() < face.len() && seen.insert(tight.clone()) {
                    queue.push_back(tight);
                }
            }
        }
        let mut faces = Vec::with_capacity(seen.len());
        for set in seen {
            let mut gens: Vec<QVector> = set.iter().map(|&i| self.rays[i].clone()).collect();
            for l in &self.lineality {
                gens.push(l.clone());
                gens.push(l.neg());
            }
            faces.push(Cone::from_generators(self.ambient, &gens)?);
        }
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.rays.cmp(&b.rays)));
        Ok(faces)
    }

    /// Facets (faces of codimension one).
    pub fn facets(&self) -> Result<Vec<Cone>, GeomError> {
        let mut out = Vec::new();
        for n in &self.normals {
            let mut gens: Vec<QVector> = self
                .rays
                .iter()
                .filter(|r| n.dot(r).is_zero())
                .cloned()
                .collect();
            for l in &self.lineality {
                gens.push(l.clone());
                gens.push(l.neg());
            }
            out.push(Cone::from_generators(self.ambient, &gens)?);
        }
        Ok(out)
    }

    /// Image under the linear map `x -> (row_i . x)_i`.
    pub fn image(&self, rows: &[QVector]) -> Result<Cone, GeomError> {
        let gens: Vec<QVector> = self
            .generators()
            .iter()
            .map(|g| QVector::new(rows.iter().map(|r| r.dot(g)).collect()))
            .collect();
        Cone::from_generators(rows.len(), &gens)
    }

    /// Preimage `{y : sum_j y_j cols_j in self}`.
    pub fn preimage(&self, cols: &[QVector]) -> Result<Cone, GeomError> {
        let k = cols.len();
        let pull = |a: &QVector| QVector::new(cols.iter().map(|c| a.dot(c)).collect());
        let ineqs: Vec<QVector> = self.normals.iter().map(pull).collect();
        let eqs: Vec<QVector> = self.equations.iter().map(pull).collect();
        Cone::from_inequalities(k, &ineqs, &eqs)
    }

    /// Pulling triangulation of a pointed cone: each simplex is a list of
    /// `dim` extreme rays. The pulled ray at every level is the
    /// lexicographically least one.
    pub fn triangulation(&self) -> Result<Vec<Vec<QVector>>, GeomError> {
        if !self.is_pointed() {
            return Err(GeomError::NotPointed);
        }
        if self.dim == 0 {
            return Ok(vec![Vec::new()]);
        }
        if self.rays.len() == self.dim {
            return Ok(vec![self.rays.clone()]);
        }
        let apex = &self.rays[0];
        let mut out = Vec::new();
        for (n, facet) in self.normals.iter().zip(self.facets()?) {
            if n.dot(apex).is_zero() {
                continue;
            }
            for mut simplex in facet.triangulation()? {
                simplex.insert(0, apex.clone());
                out.push(simplex);
            }
        }
        Ok(out)
    }
}

/// Reduced row echelon basis with primitive rows.
fn canonical_basis(vectors: &[QVector], ambient: usize) -> Vec<QVector> {
    rref(vectors, ambient)
        .0
        .into_iter()
        .map(|r| r.primitive())
        .collect()
}

/// Generators of `{x : a . x >= 0 for all a in constraints}` by incremental
/// insertion of half-spaces. Returns (lineality basis, extreme rays).
pub(crate) fn double_description(
    ambient: usize,
    constraints: &[QVector],
) -> (Vec<QVector>, Vec<QVector>) {
    let mut lin: Vec<QVector> = (0..ambient).map(|i| QVector::unit(ambient, i)).collect();
    let mut rays: Vec<QVector> = Vec::new();
    let mut processed: Vec<&QVector> = Vec::new();

    for a in constraints {
        if a.is_zero() {
            continue;
        }
        if let Some(k) = lin.iter().position(|l| !a.dot(l).is_zero()) {
            let mut l = lin.remove(k);
            let mut al = a.dot(&l);
            if al.is_negative() {
                l = l.neg();
                al = -al;
            }
            for other in lin.iter_mut() {
                let c = a.dot(other) / &al;
                *other = other.axpy(&-c, &l);
            }
            for r in rays.iter_mut() {
                let c = a.dot(r) / &al;
                *r = r.axpy(&-c, &l).primitive();
            }
            rays.push(l.primitive());
            processed.push(a);
            continue;
        }

        let values: Vec<Rat> = rays.iter().map(|r| a.dot(r)).collect();
        if values.iter().all(|v| !v.is_negative()) {
            processed.push(a);
            continue;
        }
        let tight: Vec<BTreeSet<usize>> = rays
            .iter()
            .map(|r| {
                processed
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| p.dot(r).is_zero())
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let mut next: Vec<QVector> = Vec::new();
        for (r, v) in rays.iter().zip(&values) {
            if !v.is_negative() {
                next.push(r.clone());
            }
        }
        for (i, vi) in values.iter().enumerate() {
            if !vi.is_positive() {
                continue;
            }
            for (j, vj) in values.iter().enumerate() {
                if !vj.is_negative() {
                    continue;
                }
                let common: BTreeSet<usize> = tight[i].intersection(&tight[j]).copied().collect();
                let adjacent = (0..rays.len())
                    .filter(|&k| k != i && k != j)
                    .all(|k| !common.is_subset(&tight[k]));
                if adjacent {
                    let combo = rays[j].scale(vi).axpy(&-vj.clone(), &rays[i]);
                    next.push(combo.primitive());
                }
            }
        }
        rays = next;
        processed.push(a);
    }
    (lin, rays)
}
