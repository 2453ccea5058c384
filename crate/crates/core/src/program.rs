//! The nerve of the non-big boundary read as a Sarkisov program: vertices are
//! Mori fibre spaces `X/S`, edges are elementary links typed I to IV.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complexes::{nerve, skeleton, ComplexError, SimplicialComplex};
use crate::geography::ValidGeography;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LinkType {
    I,
    II,
    III,
    IV,
}

impl LinkType {
    /// The type of the same link read in the opposite direction.
    pub fn reversed(self) -> LinkType {
        match self {
            LinkType::I => LinkType::III,
            LinkType::III => LinkType::I,
            t => t,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LinkType::I => "I",
            LinkType::II => "II",
            LinkType::III => "III",
            LinkType::IV => "IV",
        }
    }

    pub fn is_neutral(self) -> bool {
        matches!(self, LinkType::II | LinkType::IV)
    }
}

impl fmt::Display for LinkType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LinkType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" => Ok(LinkType::I),
            "II" => Ok(LinkType::II),
            "III" => Ok(LinkType::III),
            "IV" => Ok(LinkType::IV),
            other => Err(format!("unknown link type {other:?}")),
        }
    }
}

/// Type of the link from `X_a/S_a` to `X_b/S_b` over `T`.
pub fn link_type(s_a: &str, s_b: &str, t: &str) -> LinkType {
    if s_a == s_b {
        LinkType::II
    } else if s_a == t {
        LinkType::I
    } else if s_b == t {
        LinkType::III
    } else {
        LinkType::IV
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MfsVertex {
    pub id: String,
    /// Index of the chamber containing the facet, when built from a geography.
    pub chamber: Option<usize>,
    pub x_model: String,
    pub s_model: String,
    pub rho_s: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SarkisovLinkEdge {
    /// Vertex indices with `a < b`.
    pub a: usize,
    pub b: usize,
    pub hinge: Option<String>,
    pub t_model: String,
    /// Type read from `a` to `b`.
    pub link_type: LinkType,
    /// Type II link whose common base has no recorded morphism to `T`.
    pub unsupported_type_ii: bool,
}

impl SarkisovLinkEdge {
    /// Type read starting from vertex `from`.
    pub fn type_from(&self, from: usize) -> LinkType {
        if from == self.a {
            self.link_type
        } else {
            self.link_type.reversed()
        }
    }
}

#[derive(Debug, Error)]
pub enum ProgramError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("nerve edge {0} has no witnessing face")]
    MissingHinge(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(String),
    #[error("edge {0}-{1} is declared as type {2} but the labels give {3}")]
    TypeMismatch(String, String, LinkType, LinkType),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualLoop {
    pub face: String,
    pub cycle: Vec<usize>,
}

/// Nerve with Mori fibre space and link decorations.
#[derive(Clone, Debug)]
pub struct DecoratedNerve {
    pub nerve: SimplicialComplex,
    pub vertices: Vec<MfsVertex>,
    /// One entry per 1-simplex, in the order of `nerve.edges()`.
    pub edges: Vec<SarkisovLinkEdge>,
    /// Loops attached as metadata (nerve files only).
    pub residual_loops: Vec<ResidualLoop>,
}

impl DecoratedNerve {
    /// Assembles a nerve from explicit data. Declared link types, when given,
    /// must agree with the model labels.
    pub fn from_parts(
        vertices: Vec<MfsVertex>,
        edges: Vec<(String, String, String, Option<LinkType>)>,
        two_simplices: Vec<[String; 3]>,
        residual_loops: Vec<(String, Vec<String>)>,
    ) -> Result<DecoratedNerve, ProgramError> {
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].iter().any(|w| w.id == v.id) {
                return Err(ProgramError::DuplicateVertex(v.id.clone()));
            }
        }
        let index = |id: &str| {
            vertices
                .iter()
                .position(|v| v.id == id)
                .ok_or_else(|| ProgramError::UnknownVertex(id.to_string()))
        };
        let mut simplices = Vec::new();
        let mut decorations = Vec::new();
        for (a, b, t, declared) in &edges {
            let (ia, ib) = (index(a)?, index(b)?);
            let (lo, hi) = if ia < ib { (ia, ib) } else { (ib, ia) };
            let computed = link_type(&vertices[lo].s_model, &vertices[hi].s_model, t);
            if let Some(d) = declared {
                let d = if lo == ia { *d } else { d.reversed() };
                if d != computed {
                    return Err(ProgramError::TypeMismatch(
                        vertices[lo].id.clone(),
                        vertices[hi].id.clone(),
                        d,
                        computed,
                    ));
                }
            }
            let s = &vertices[lo].s_model;
            decorations.push(SarkisovLinkEdge {
                a: lo,
                b: hi,
                hinge: None,
                t_model: t.clone(),
                link_type: computed,
                unsupported_type_ii: computed == LinkType::II && s != t,
            });
            simplices.push(vec![lo, hi]);
        }
        for tri in &two_simplices {
            let idx = tri.iter().map(|id| index(id)).collect::<Result<Vec<_>, _>>()?;
            simplices.push(idx);
        }
        let nerve = SimplicialComplex::new(vertices.iter().map(|v| v.id.clone()).collect(), simplices);
        let order = nerve.edges();
        let mut sorted = Vec::with_capacity(order.len());
        for (a, b) in &order {
            match decorations.iter().find(|e| e.a == *a && e.b == *b) {
                Some(e) => sorted.push(e.clone()),
                None => {
                    return Err(ProgramError::MissingHinge(format!(
                        "{}-{}",
                        vertices[*a].id, vertices[*b].id
                    )))
                }
            }
        }
        let residual_loops = residual_loops
            .into_iter()
            .map(|(face, cycle)| {
                Ok(ResidualLoop {
                    face,
                    cycle: cycle.iter().map(|id| index(id)).collect::<Result<_, _>>()?,
                })
            })
            .collect::<Result<_, ProgramError>>()?;
        Ok(DecoratedNerve {
            nerve,
            vertices,
            edges: sorted,
            residual_loops,
        })
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn edge(&self, u: usize, v: usize) -> Option<&SarkisovLinkEdge> {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.edges.iter().find(|e| e.a == a && e.b == b)
    }

    /// Type of the link traversed from `u` to `v`.
    pub fn type_between(&self, u: usize, v: usize) -> Option<LinkType> {
        self.edge(u, v).map(|e| e.type_from(u))
    }

    pub fn rho_s(&self, v: usize) -> u32 {
        self.vertices[v].rho_s
    }

    pub fn two_simplices(&self) -> Vec<Vec<usize>> {
        self.nerve.simplices_of_dim(2)
    }
}

/// One vertex per non-big facet of the boundary.
pub fn mfs_vertices(vg: &ValidGeography) -> Vec<MfsVertex> {
    let rho = vg.rho();
    vg.cells()
        .iter()
        .filter(|c| !c.big && c.dim() + 1 == rho)
        .map(|c| {
            let chamber = c.chambers[0];
            let x_model = vg.geography().chambers()[chamber].model.clone();
            let s_model = c.model.clone().unwrap_or_default();
            let rho_s = vg.picard_rank(&s_model).unwrap_or(0);
            MfsVertex {
                id: c.label(),
                chamber: Some(chamber),
                x_model,
                s_model,
                rho_s,
            }
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LinkTable {
    pub links: Vec<SarkisovLinkEdge>,
    /// Codimension-two non-big faces that do not sit in exactly two non-big facets.
    pub issues: Vec<String>,
}

pub fn links(vg: &ValidGeography) -> LinkTable {
    let rho = vg.rho();
    let vertices = mfs_vertices(vg);
    let facet_cells: Vec<usize> = vg
        .cells()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.big && c.dim() + 1 == rho)
        .map(|(i, _)| i)
        .collect();
    let mut table = LinkTable::default();
    for (hi, hinge) in vg.cells().iter().enumerate() {
        if hinge.big || hinge.dim() + 2 != rho || hinge.is_zero() {
            continue;
        }
        let around: Vec<usize> = (0..facet_cells.len())
            .filter(|&v| vg.is_face(hi, facet_cells[v]))
            .collect();
        if around.len() != 2 {
            table.issues.push(format!(
                "{} lies in {} non-big facets",
                hinge.label(),
                around.len()
            ));
            continue;
        }
        let t = hinge.model.clone().unwrap_or_default();
        table.links.push(make_edge(vg, &vertices, around[0], around[1], Some(hinge.label()), t));
    }
    table.links.sort_by_key(|e| (e.a, e.b));
    table
}

fn make_edge(
    vg: &ValidGeography,
    vertices: &[MfsVertex],
    a: usize,
    b: usize,
    hinge: Option<String>,
    t: String,
) -> SarkisovLinkEdge {
    let (sa, sb) = (&vertices[a].s_model, &vertices[b].s_model);
    let lt = link_type(sa, sb, &t);
    SarkisovLinkEdge {
        a,
        b,
        hinge,
        unsupported_type_ii: lt == LinkType::II && *sa != t && !vg.has_morphism(sa, &t),
        t_model: t,
        link_type: lt,
    }
}

pub fn decorated_nerve(vg: &ValidGeography) -> Result<DecoratedNerve, ProgramError> {
    let boundary = vg.boundary_complex();
    let vertices = mfs_vertices(vg);
    if boundary.complex.is_empty() || vertices.is_empty() {
        return Ok(DecoratedNerve {
            nerve: SimplicialComplex::new(vertices.iter().map(|v| v.id.clone()).collect(), vec![]),
            vertices,
            edges: Vec::new(),
            residual_loops: Vec::new(),
        });
    }
    let (n, record) = nerve(&boundary.complex)?;
    let n = skeleton(&n, 2);
    let mut edges = Vec::new();
    for (a, b) in n.edges() {
        let Some(&w) = record.witnesses_of(&[a, b]).first() else {
            return Err(ProgramError::MissingHinge(format!(
                "{}-{}",
                vertices[a].id, vertices[b].id
            )));
        };
        let face = &boundary.complex.faces()[w];
        let t = face.payload.model.clone().unwrap_or_default();
        edges.push(make_edge(vg, &vertices, a, b, Some(face.label.clone()), t));
    }
    Ok(DecoratedNerve {
        nerve: n,
        vertices,
        edges,
        residual_loops: Vec::new(),
    })
}
