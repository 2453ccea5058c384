//! Geographies of ample models: a chamber decomposition of a rational cone,
//! each cell labelled by a model, together with the validator that every
//! downstream computation relies on.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::complexes::{connected_components, nerve, ComplexFace, Payload, PolyhedralComplex};
use crate::exact::{det, nullspace, AffineSubspace, Cone, GeomError, QVector, Rat};

/// Model id given to the apex when no `apex_model` is supplied.
pub const APEX_MODEL: &str = "__apex__";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelLabel {
    pub id: String,
    pub display_name: String,
    pub picard_rank: u32,
    pub is_point: bool,
}

impl ModelLabel {
    fn apex() -> ModelLabel {
        ModelLabel {
            id: APEX_MODEL.into(),
            display_name: "pt".into(),
            picard_rank: 0,
            is_point: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChamberRecord {
    pub rays: Vec<usize>,
    pub model: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceRecord {
    pub rays: Vec<usize>,
    pub model: String,
    pub big: bool,
}

#[derive(Debug, Error)]
pub enum GeographyError {
    #[error("ambient dimension must be positive")]
    ZeroDimension,
    #[error("ray {index} has {found} coordinates, expected {expected}")]
    RayLength {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("{what} uses ray index {index} but there are {count} rays")]
    RayIndex {
        what: String,
        index: usize,
        count: usize,
    },
    #[error("{0} has no rays")]
    EmptyChamber(String),
    #[error("unknown model id {0:?}")]
    UnknownModel(String),
    #[error("duplicate model id {0:?}")]
    DuplicateModel(String),
    #[error("model {0:?} is a point but has Picard rank {1}")]
    PointRank(String, u32),
    #[error("apex_model is only meaningful when ambient_dim is 3")]
    ApexModel,
    #[error("validation failed:\n{0}")]
    Invalid(ValidationReport),
    #[error("affine subspace is not in general position")]
    NotGeneralPosition,
    #[error("empty slice")]
    EmptySlice,
    #[error("dimension of h is {found}, requested {expected}")]
    SliceDimension { expected: usize, found: usize },
    #[error("cells with coinciding images carry different data: {0}")]
    MergeConflict(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Raw geography as read from a file. Use [`Geography::validate`] or
/// [`Geography::into_valid`] before computing anything from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geography {
    ambient_dim: usize,
    rays: Vec<QVector>,
    models: Vec<ModelLabel>,
    chambers: Vec<ChamberRecord>,
    faces: Vec<FaceRecord>,
    apex_model: Option<String>,
}

impl Geography {
    pub fn new(
        ambient_dim: usize,
        rays: Vec<QVector>,
        models: Vec<ModelLabel>,
        chambers: Vec<ChamberRecord>,
        faces: Vec<FaceRecord>,
        apex_model: Option<String>,
    ) -> Result<Geography, GeographyError> {
        if ambient_dim == 0 {
            return Err(GeographyError::ZeroDimension);
        }
        for (index, r) in rays.iter().enumerate() {
            if r.len() != ambient_dim {
                return Err(GeographyError::RayLength {
                    index,
                    expected: ambient_dim,
                    found: r.len(),
                });
            }
        }
        let mut ids = BTreeSet::new();
        for m in &models {
            if m.id == APEX_MODEL || !ids.insert(m.id.as_str()) {
                return Err(GeographyError::DuplicateModel(m.id.clone()));
            }
            if m.is_point && m.picard_rank != 0 {
                return Err(GeographyError::PointRank(m.id.clone(), m.picard_rank));
            }
        }
        let resolve = |id: &str| {
            if id == APEX_MODEL || ids.contains(id) {
                Ok(())
            } else {
                Err(GeographyError::UnknownModel(id.to_string()))
            }
        };
        let check_rays = |what: String, idx: &[usize]| {
            for &index in idx {
                if index >= rays.len() {
                    return Err(GeographyError::RayIndex {
                        what,
                        index,
                        count: rays.len(),
                    });
                }
            }
            Ok(())
        };
        for (i, c) in chambers.iter().enumerate() {
            check_rays(format!("chamber {i}"), &c.rays)?;
            if c.rays.is_empty() {
                return Err(GeographyError::EmptyChamber(format!("chamber {i}")));
            }
            resolve(&c.model)?;
        }
        for (i, f) in faces.iter().enumerate() {
            check_rays(format!("face {i}"), &f.rays)?;
            resolve(&f.model)?;
        }
        if let Some(a) = &apex_model {
            if ambient_dim != 3 {
                return Err(GeographyError::ApexModel);
            }
            resolve(a)?;
        }
        Ok(Geography {
            ambient_dim,
            rays,
            models,
            chambers,
            faces,
            apex_model,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Picard rank of the underlying variety, identified with the ambient dimension.
    pub fn rho(&self) -> usize {
        self.ambient_dim
    }

    pub fn rays(&self) -> &[QVector] {
        &self.rays
    }

    pub fn models(&self) -> &[ModelLabel] {
        &self.models
    }

    pub fn chambers(&self) -> &[ChamberRecord] {
        &self.chambers
    }

    /// Faces as recorded in the input.
    pub fn faces(&self) -> &[FaceRecord] {
        &self.faces
    }

    pub fn apex_model(&self) -> Option<&str> {
        self.apex_model.as_deref()
    }

    /// Recorded faces plus the implicit apex when `rho = 3`.
    pub fn lower_faces(&self) -> Vec<FaceRecord> {
        let mut out = self.faces.clone();
        if self.rho() == 3 && !self.faces.iter().any(|f| f.rays.is_empty()) {
            out.push(FaceRecord {
                rays: Vec::new(),
                model: self.apex_model.clone().unwrap_or_else(|| APEX_MODEL.into()),
                big: false,
            });
        }
        out
    }

    pub fn model(&self, id: &str) -> Option<ModelLabel> {
        if id == APEX_MODEL {
            return Some(ModelLabel::apex());
        }
        self.models.iter().find(|m| m.id == id).cloned()
    }

    pub fn validate(&self) -> ValidationReport {
        analyze(self, true).0
    }

    pub fn validate_with(&self, require_pointed: bool) -> ValidationReport {
        analyze(self, require_pointed).0
    }

    pub fn into_valid(self) -> Result<ValidGeography, GeographyError> {
        self.into_valid_with(true)
    }

    pub fn into_valid_with(self, require_pointed: bool) -> Result<ValidGeography, GeographyError> {
        let (report, analysis) = analyze(&self, require_pointed);
        match analysis {
            Some(a) if report.passed() => Ok(ValidGeography {
                geo: self,
                cells: a.cells,
                support: a.support,
                morphisms: a.morphisms,
            }),
            _ => Err(GeographyError::Invalid(report)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleResult {
    pub rule: String,
    pub description: String,
    pub passed: bool,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub rules: Vec<RuleResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.rules.iter().all(|r| r.passed)
    }

    pub fn rule(&self, name: &str) -> Option<&RuleResult> {
        self.rules.iter().find(|r| r.rule == name)
    }

    pub fn failed_rules(&self) -> Vec<&str> {
        self.rules
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.rule.as_str())
            .collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(
                f,
                "({}) {}: {}",
                r.rule,
                r.description,
                if r.passed { "ok" } else { "FAILED" }
            )?;
            for d in &r.diagnostics {
                writeln!(f, "    {d}")?;
            }
        }
        Ok(())
    }
}

/// A face of some chamber closure, identified by the rays it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub key: Vec<usize>,
    pub cone: Cone,
    /// `None` for faces absent from the input; those count as big.
    pub model: Option<String>,
    pub big: bool,
    pub recorded: Option<usize>,
    pub chamber: Option<usize>,
    /// Chambers whose closure contains this cell.
    pub chambers: Vec<usize>,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn label(&self) -> String {
        key_label(&self.key)
    }

    pub fn is_zero(&self) -> bool {
        self.cone.is_zero()
    }
}

pub fn key_label(key: &[usize]) -> String {
    let parts: Vec<String> = key.iter().map(|i| i.to_string()).collect();
    format!("[{}]", parts.join(","))
}

struct Analysis {
    cells: Vec<Cell>,
    support: Cone,
    morphisms: BTreeSet<(String, String)>,
}

struct Rules {
    results: Vec<RuleResult>,
}

impl Rules {
    fn new() -> Rules {
        let table = [
            ("a", "chambers are full-dimensional and the support is pointed"),
            ("b", "closed cells intersect in common faces"),
            ("c", "chambers tile the support"),
            ("d", "faces of non-big faces are recorded"),
            ("e", "non-big faces are closed downward; big faces are not points"),
            ("f", "the non-big locus is pure of codimension one in the boundary"),
            ("g", "each non-big facet lies in exactly one chamber"),
            ("h", "models are monotone along face inclusions"),
        ];
        Rules {
            results: table
                .iter()
                .map(|(r, d)| RuleResult {
                    rule: r.to_string(),
                    description: d.to_string(),
                    passed: true,
                    diagnostics: Vec::new(),
                })
                .collect(),
        }
    }

    fn fail(&mut self, rule: &str, msg: String) {
        let r = self.results.iter_mut().find(|r| r.rule == rule).unwrap();
        r.passed = false;
        r.diagnostics.push(msg);
    }
}

fn ray_key(g: &Geography, cone: &Cone) -> Vec<usize> {
    (0..g.rays.len()).filter(|&i| cone.contains(&g.rays[i])).collect()
}

fn relint_point(c: &Cone) -> QVector {
    c.rays()
        .iter()
        .fold(QVector::zeros(c.ambient_dim()), |acc, r| acc.add(r))
}

fn analyze(g: &Geography, require_pointed: bool) -> (ValidationReport, Option<Analysis>) {
    let rho = g.rho();
    let mut rules = Rules::new();
    let gens = |idx: &[usize]| idx.iter().map(|&i| g.rays[i].clone()).collect::<Vec<_>>();

    let mut chamber_cones = Vec::new();
    for (i, c) in g.chambers.iter().enumerate() {
        match Cone::from_generators(rho, &gens(&c.rays)) {
            Ok(cone) => {
                if cone.dim() != rho {
                    rules.fail("a", format!("chamber {i} has dimension {} < {rho}", cone.dim()));
                }
                chamber_cones.push(cone);
            }
            Err(e) => {
                rules.fail("a", format!("chamber {i}: {e}"));
                return (ValidationReport { rules: rules.results }, None);
            }
        }
    }
    let all: Vec<QVector> = g.chambers.iter().flat_map(|c| gens(&c.rays)).collect();
    let support = match Cone::from_generators(rho, &all) {
        Ok(s) => s,
        Err(e) => {
            rules.fail("a", format!("support: {e}"));
            return (ValidationReport { rules: rules.results }, None);
        }
    };
    if require_pointed && !support.is_pointed() {
        rules.fail(
            "a",
            format!(
                "support contains the line spanned by {}",
                support.lineality_space()[0]
            ),
        );
    }

    // every face of every chamber
    let mut cells: BTreeMap<Vec<usize>, Cell> = BTreeMap::new();
    for (ci, cone) in chamber_cones.iter().enumerate() {
        let faces = match cone.faces() {
            Ok(f) => f,
            Err(e) => {
                rules.fail("b", format!("chamber {ci}: {e}"));
                return (ValidationReport { rules: rules.results }, None);
            }
        };
        for f in faces {
            let key = ray_key(g, &f);
            let is_chamber = &f == cone;
            let cell = cells.entry(key.clone()).or_insert_with(|| Cell {
                key,
                cone: f,
                model: None,
                big: true,
                recorded: None,
                chamber: None,
                chambers: Vec::new(),
            });
            cell.chambers.push(ci);
            if is_chamber {
                if let Some(other) = cell.chamber {
                    rules.fail("b", format!("chambers {other} and {ci} coincide"));
                } else {
                    cell.chamber = Some(ci);
                    cell.model = Some(g.chambers[ci].model.clone());
                }
            }
        }
    }
    if rho == 3 {
        if let Some(apex) = cells.values_mut().find(|c| c.is_zero()) {
            apex.model = Some(g.apex_model.clone().unwrap_or_else(|| APEX_MODEL.into()));
            apex.big = false;
        }
    }
    for (fi, f) in g.faces.iter().enumerate() {
        let cone = match Cone::from_generators(rho, &gens(&f.rays)) {
            Ok(c) => c,
            Err(e) => {
                rules.fail("b", format!("face {fi}: {e}"));
                continue;
            }
        };
        let key = ray_key(g, &cone);
        match cells.get_mut(&key) {
            Some(cell) if cell.cone == cone => {
                if cell.chamber.is_some() {
                    rules.fail("b", format!("face {fi} repeats a chamber"));
                } else if let Some(prev) = cell.recorded {
                    rules.fail("b", format!("faces {prev} and {fi} coincide"));
                } else {
                    cell.recorded = Some(fi);
                    cell.model = Some(f.model.clone());
                    cell.big = f.big;
                }
            }
            _ => rules.fail(
                "b",
                format!("face {fi} {} is not a face of any chamber", key_label(&f.rays)),
            ),
        }
    }

    // (b) chambers meet in common faces
    for i in 0..chamber_cones.len() {
        for j in i + 1..chamber_cones.len() {
            let (a, b) = (&chamber_cones[i], &chamber_cones[j]);
            match a.intersect(b) {
                Ok(inter) => {
                    if !inter.is_face_of(a) || !inter.is_face_of(b) {
                        rules.fail(
                            "b",
                            format!("chambers {i} and {j} overlap in a non-face of dimension {}", inter.dim()),
                        );
                    }
                }
                Err(e) => rules.fail("b", format!("chambers {i} and {j}: {e}")),
            }
        }
    }

    let cells: Vec<Cell> = {
        let mut v: Vec<Cell> = cells.into_values().collect();
        v.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.key.cmp(&b.key)));
        v
    };
    let all_full = chamber_cones.iter().all(|c| c.dim() == rho);

    // (c) tiling
    if all_full && support.is_pointed() && support.dim() == rho {
        let lambda = support
            .normals()
            .iter()
            .fold(QVector::zeros(rho), |acc, n| acc.add(n));
        let total: Result<Rat, GeomError> = chamber_cones
            .iter()
            .map(|c| base_volume(c, &lambda))
            .try_fold(Rat::zero(), |acc, v| Ok(acc + v?));
        match (total, base_volume(&support, &lambda)) {
            (Ok(t), Ok(s)) if t == s => {}
            (Ok(t), Ok(s)) => rules.fail(
                "c",
                format!(
                    "chamber base volumes sum to {} but the support has {}",
                    crate::exact::format_rat(&t),
                    crate::exact::format_rat(&s)
                ),
            ),
            (Err(e), _) | (_, Err(e)) => rules.fail("c", e.to_string()),
        }
    } else if all_full {
        // With a line in the support, check that every interior wall is shared.
        for c in cells.iter().filter(|c| c.dim() + 1 == rho) {
            let on_boundary = support
                .normals()
                .iter()
                .any(|n| c.cone.generators().iter().all(|g| n.dot(g).is_zero()));
            if !on_boundary && c.chambers.len() != 2 {
                rules.fail(
                    "c",
                    format!("interior wall {} bounds {} chamber(s)", c.label(), c.chambers.len()),
                );
            }
        }
    } else {
        rules.fail("c", "skipped: chambers are not full-dimensional".into());
    }

    let is_sub = |a: &Cell, b: &Cell| {
        a.key.len() < b.key.len() && a.key.iter().all(|k| b.key.binary_search(k).is_ok())
    };
    let required_dim = rho.saturating_sub(3).max(1);

    for f in cells.iter().filter(|c| !c.big && !c.is_zero()) {
        for h in cells.iter().filter(|h| is_sub(h, f)) {
            let required = h.dim() >= required_dim || (h.is_zero() && rho == 3);
            let has_data = h.recorded.is_some() || (h.is_zero() && rho == 3);
            // (d)
            if required && !has_data {
                rules.fail(
                    "d",
                    format!("face {} of non-big face {} is not recorded", h.label(), f.label()),
                );
            }
            // (e)
            if has_data && h.big {
                rules.fail(
                    "e",
                    format!("face {} of non-big face {} is marked big", h.label(), f.label()),
                );
            }
        }
    }
    for c in cells.iter().filter(|c| c.big) {
        if let Some(m) = c.model.as_deref().and_then(|m| g.model(m)) {
            if m.is_point {
                rules.fail(
                    "e",
                    format!("big face {} has the point model {:?}", c.label(), m.id),
                );
            }
        }
    }

    // (f) purity, and non-big cells live on the boundary
    let facets: Vec<&Cell> = cells
        .iter()
        .filter(|c| !c.big && c.dim() + 1 == rho)
        .collect();
    for c in cells.iter().filter(|c| !c.big && !c.is_zero()) {
        if c.dim() >= rho {
            rules.fail("f", format!("chamber-dimensional cell {} is non-big", c.label()));
            continue;
        }
        if c.dim() + 1 < rho && !facets.iter().any(|f| is_sub(c, f)) {
            rules.fail(
                "f",
                format!("non-big face {} lies in no non-big facet", c.label()),
            );
        }
        if support.relint_contains(&relint_point(&c.cone)) {
            rules.fail(
                "f",
                format!("non-big face {} meets the interior of the support", c.label()),
            );
        }
    }

    // (g)
    for f in &facets {
        if f.chambers.len() != 1 {
            rules.fail(
                "g",
                format!("non-big facet {} lies in {} chambers", f.label(), f.chambers.len()),
            );
        }
    }

    // (h)
    let mut morphisms = BTreeSet::new();
    for small in cells.iter() {
        for large in cells.iter().filter(|l| is_sub(small, l)) {
            let (Some(ms), Some(ml)) = (&small.model, &large.model) else {
                continue;
            };
            let (Some(s), Some(l)) = (g.model(ms), g.model(ml)) else {
                continue;
            };
            if s.picard_rank > l.picard_rank {
                rules.fail(
                    "h",
                    format!(
                        "{} ({}, rank {}) lies in the closure of {} ({}, rank {})",
                        small.label(),
                        s.id,
                        s.picard_rank,
                        large.label(),
                        l.id,
                        l.picard_rank
                    ),
                );
            }
            if ml != ms {
                morphisms.insert((ml.clone(), ms.clone()));
            }
        }
    }
    for (a, b) in &morphisms {
        if a < b && morphisms.contains(&(b.clone(), a.clone())) {
            rules.fail("h", format!("models {a:?} and {b:?} map to each other"));
        }
    }
    for wall in cells.iter().filter(|c| c.big && c.dim() + 1 == rho && c.chambers.len() == 2) {
        let (a, b) = (wall.chambers[0], wall.chambers[1]);
        if g.chambers[a].model == g.chambers[b].model {
            rules.fail(
                "h",
                format!(
                    "chambers {a} and {b} share the model {:?} across the big wall {}",
                    g.chambers[a].model,
                    wall.label()
                ),
            );
        }
    }

    (
        ValidationReport {
            rules: rules.results,
        },
        Some(Analysis {
            cells,
            support,
            morphisms,
        }),
    )
}

/// Volume of `c ∩ {lambda = 1}` up to the common factor `1/dim!`, via a
/// pulling triangulation.
pub fn base_volume(c: &Cone, lambda: &QVector) -> Result<Rat, GeomError> {
    let mut total = Rat::zero();
    for simplex in c.triangulation()? {
        let rows: Vec<QVector> = simplex
            .iter()
            .map(|r| {
                let l = lambda.dot(r);
                if l.is_positive() {
                    Ok(r.scale(&l.recip()))
                } else {
                    Err(GeomError::NotABase(format!("ray {r} is not on the positive side")))
                }
            })
            .collect::<Result<_, _>>()?;
        total += det(&rows).abs();
    }
    Ok(total)
}

/// A geography that passed validation.
#[derive(Clone, Debug)]
pub struct ValidGeography {
    geo: Geography,
    cells: Vec<Cell>,
    support: Cone,
    morphisms: BTreeSet<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct BoundaryComplex {
    pub complex: PolyhedralComplex,
    pub connected: bool,
}

impl ValidGeography {
    pub fn geography(&self) -> &Geography {
        &self.geo
    }

    pub fn rho(&self) -> usize {
        self.geo.rho()
    }

    /// All faces of all chambers, sorted by dimension then key.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn support(&self) -> &Cone {
        &self.support
    }

    pub fn model(&self, id: &str) -> Option<ModelLabel> {
        self.geo.model(id)
    }

    pub fn picard_rank(&self, id: &str) -> Option<u32> {
        self.geo.model(id).map(|m| m.picard_rank)
    }

    /// Whether some inclusion of cells induces a morphism `from -> to`.
    pub fn has_morphism(&self, from: &str, to: &str) -> bool {
        from == to || self.morphisms.contains(&(from.to_string(), to.to_string()))
    }

    pub fn cell_index(&self, key: &[usize]) -> Option<usize> {
        self.cells.iter().position(|c| c.key == key)
    }

    /// The cell spanned by the given rays, if it is one.
    pub fn find_cell(&self, rays: &[usize]) -> Option<usize> {
        let gens: Vec<QVector> = rays
            .iter()
            .filter_map(|&i| self.geo.rays.get(i).cloned())
            .collect();
        if gens.len() != rays.len() {
            return None;
        }
        let cone = Cone::from_generators(self.rho(), &gens).ok()?;
        self.cells.iter().position(|c| c.cone == cone)
    }

    pub fn apex_cell(&self) -> Option<usize> {
        self.cells.iter().position(Cell::is_zero)
    }

    pub fn chamber_cell(&self, chamber: usize) -> usize {
        self.cells
            .iter()
            .position(|c| c.chamber == Some(chamber))
            .expect("validated chamber has a cell")
    }

    pub fn is_face(&self, small: usize, large: usize) -> bool {
        let (a, b) = (&self.cells[small], &self.cells[large]);
        a.key.iter().all(|k| b.key.binary_search(k).is_ok())
    }

    fn complex_of(&self, keep: impl Fn(&Cell) -> bool) -> PolyhedralComplex {
        let faces = self
            .cells
            .iter()
            .filter(|c| keep(c))
            .map(|c| ComplexFace {
                label: c.label(),
                cone: c.cone.clone(),
                payload: Payload {
                    model: c.model.clone(),
                    big: c.big,
                    key: c.key.clone(),
                },
            })
            .collect();
        PolyhedralComplex::new(faces)
    }

    /// Every cell, as a polyhedral complex.
    pub fn full_complex(&self) -> PolyhedralComplex {
        self.complex_of(|_| true)
    }

    pub fn boundary_complex(&self) -> BoundaryComplex {
        let complex = self.complex_of(|c| !c.big);
        let connected = match nerve(&complex) {
            Ok((n, _)) => connected_components(&n).len() <= 1,
            Err(_) => false,
        };
        BoundaryComplex { complex, connected }
    }

    pub fn lineality(&self) -> &[QVector] {
        self.support.lineality_space()
    }
}

/// Quotient by the lineality space of the support, written in a basis of its
/// orthogonal complement. Returns a clone when the support is pointed.
pub fn reduce_lineality(vg: &ValidGeography) -> Result<Geography, GeographyError> {
    let g = vg.geography();
    let lin = vg.lineality();
    if lin.is_empty() {
        return Ok(g.clone());
    }
    let basis = nullspace(lin, g.ambient_dim);
    let k = basis.len();
    let project = |v: &QVector| QVector::new(basis.iter().map(|b| b.dot(v)).collect());

    let mut rays: Vec<QVector> = Vec::new();
    let mut remap: Vec<Option<usize>> = Vec::new();
    for r in &g.rays {
        let img = project(r);
        if img.is_zero() {
            remap.push(None);
            continue;
        }
        let img = img.primitive();
        let idx = match rays.iter().position(|x| *x == img) {
            Some(i) => i,
            None => {
                rays.push(img);
                rays.len() - 1
            }
        };
        remap.push(Some(idx));
    }
    let image = |idx: &[usize]| -> Vec<usize> {
        let set: BTreeSet<usize> = idx.iter().filter_map(|&i| remap[i]).collect();
        set.into_iter().collect()
    };
    let cone_of = |idx: &[usize]| -> Result<Cone, GeomError> {
        Cone::from_generators(k, &idx.iter().map(|&i| rays[i].clone()).collect::<Vec<_>>())
    };

    let mut chambers: Vec<(Cone, ChamberRecord)> = Vec::new();
    for c in &g.chambers {
        let idx = image(&c.rays);
        let cone = cone_of(&idx)?;
        match chambers.iter().find(|(x, _)| *x == cone) {
            Some((_, prev)) if prev.model != c.model => {
                return Err(GeographyError::MergeConflict(format!(
                    "chambers with models {:?} and {:?} have the same image",
                    prev.model, c.model
                )))
            }
            Some(_) => {}
            None => chambers.push((cone, ChamberRecord { rays: idx, model: c.model.clone() })),
        }
    }
    let mut faces: Vec<(Cone, FaceRecord)> = Vec::new();
    for f in &g.faces {
        let idx = image(&f.rays);
        if idx.is_empty() {
            continue;
        }
        let cone = cone_of(&idx)?;
        if let Some((_, ch)) = chambers.iter().find(|(x, _)| *x == cone) {
            if ch.model != f.model {
                return Err(GeographyError::MergeConflict(format!(
                    "face with model {:?} collapses onto a chamber with model {:?}",
                    f.model, ch.model
                )));
            }
            continue;
        }
        match faces.iter().find(|(x, _)| *x == cone) {
            Some((_, prev)) if prev.model != f.model || prev.big != f.big => {
                return Err(GeographyError::MergeConflict(format!(
                    "faces with models {:?} and {:?} have the same image",
                    prev.model, f.model
                )))
            }
            Some(_) => {}
            None => faces.push((
                cone,
                FaceRecord {
                    rays: idx,
                    model: f.model.clone(),
                    big: f.big,
                },
            )),
        }
    }
    let apex_model = if k == 3 { g.apex_model.clone() } else { None };
    Geography::new(
        k,
        rays,
        g.models.clone(),
        chambers.into_iter().map(|(_, c)| c).collect(),
        faces.into_iter().map(|(_, f)| f).collect(),
        apex_model,
    )
}

/// The pieces of a cell inside `span(h)`, in coordinates `(y0, y1, ...)`
/// with respect to the basis `(base, dirs...)` of `span(h)`.
struct Pulled {
    /// Closure of the preimage intersected with `y0 >= 0`.
    upper: Cone,
    /// Closure of the preimage intersected with `y0 = 0`.
    lower: Cone,
}

fn pull(cone: &Cone, cols: &[QVector]) -> Result<Pulled, GeomError> {
    let k = cols.len();
    let pullback = |a: &QVector| QVector::new(cols.iter().map(|c| a.dot(c)).collect());
    let mut ineqs: Vec<QVector> = cone.normals().iter().map(pullback).collect();
    let eqs: Vec<QVector> = cone.equations().iter().map(pullback).collect();
    ineqs.push(QVector::unit(k, 0));
    let upper = Cone::from_inequalities(k, &ineqs, &eqs)?;
    let mut eqs0 = eqs;
    eqs0.push(QVector::unit(k, 0));
    let lower = Cone::from_inequalities(k, &ineqs, &eqs0)?;
    Ok(Pulled { upper, lower })
}

fn columns(h: &AffineSubspace) -> Vec<QVector> {
    let mut cols = vec![h.base().clone()];
    cols.extend(h.dirs().iter().cloned());
    cols
}

fn apply(cols: &[QVector], y: &QVector) -> QVector {
    cols.iter()
        .zip(y.coords())
        .fold(QVector::zeros(cols[0].len()), |acc, (c, t)| acc.axpy(t, c))
}

/// Whether `h` meets the relative interior of `cone`.
fn meets_relint(cone: &Cone, cols: &[QVector]) -> Result<bool, GeomError> {
    let p = pull(cone, cols)?;
    let y = relint_point(&p.upper);
    Ok(y[0].is_positive() && cone.relint_contains(&apply(cols, &y)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralPositionReport {
    pub base_nonzero: bool,
    pub transversality_failures: Vec<String>,
    pub meets_support_interior: bool,
    /// Set when checked relative to a face: does `h` meet its relative interior.
    pub meets_face: Option<bool>,
}

impl GeneralPositionReport {
    pub fn ok(&self) -> bool {
        self.base_nonzero
            && self.transversality_failures.is_empty()
            && self.meets_support_interior
            && self.meets_face != Some(false)
    }
}

/// General position of `h`; when `face` is given, cells whose closure contains
/// that face are exempt from transversality and `h` must meet the face.
pub fn general_position_report(
    h: &AffineSubspace,
    vg: &ValidGeography,
    face: Option<usize>,
) -> Result<GeneralPositionReport, GeomError> {
    let rho = vg.rho();
    if h.ambient_dim() != rho {
        return Err(GeomError::DimensionMismatch {
            expected: rho,
            found: h.ambient_dim(),
        });
    }
    let base_nonzero = h.is_affine_proper();
    let mut report = GeneralPositionReport {
        base_nonzero,
        transversality_failures: Vec::new(),
        meets_support_interior: false,
        meets_face: None,
    };
    if !base_nonzero {
        return Ok(report);
    }
    let cols = columns(h);
    for (i, c) in vg.cells().iter().enumerate() {
        if let Some(a) = face {
            if vg.is_face(a, i) {
                continue;
            }
        }
        let p = pull(&c.cone, &cols)?;
        let meets = p.upper.rays().iter().any(|r| r[0].is_positive());
        if !meets {
            continue;
        }
        let got = p.upper.dim() as isize - 1;
        let want = h.dim() as isize + c.dim() as isize - rho as isize;
        if got != want {
            report.transversality_failures.push(format!(
                "h meets {} in dimension {got}, expected {want}",
                c.label()
            ));
        }
    }
    report.meets_support_interior = meets_relint(vg.support(), &cols)?;
    if let Some(a) = face {
        report.meets_face = Some(meets_relint(&vg.cells()[a].cone, &cols)?);
    }
    Ok(report)
}

pub fn is_general_position(h: &AffineSubspace, vg: &ValidGeography) -> bool {
    general_position_report(h, vg, None).is_ok_and(|r| r.ok())
}

pub fn is_general_position_relative(h: &AffineSubspace, vg: &ValidGeography, face: usize) -> bool {
    general_position_report(h, vg, Some(face)).is_ok_and(|r| r.ok())
}

/// A relatively open piece of the sliced support together with the cell it
/// came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlicePiece {
    pub source: usize,
    /// Closure, in slice coordinates.
    pub cone: Cone,
    /// True for pieces in `span(dirs)`, the recession directions of the section.
    pub at_infinity: bool,
    pub model: Option<String>,
    pub big: bool,
}

#[derive(Clone, Debug)]
pub struct Slice {
    pub geography: Geography,
    pub pieces: Vec<SlicePiece>,
}

/// Cone over the section of the geography by `h`, with `dim h = d`.
pub fn slice(vg: &ValidGeography, h: &AffineSubspace, d: usize) -> Result<Slice, GeographyError> {
    if h.dim() != d {
        return Err(GeographyError::SliceDimension {
            expected: d,
            found: h.dim(),
        });
    }
    if !is_general_position(h, vg) {
        return Err(GeographyError::NotGeneralPosition);
    }
    slice_unchecked(vg, h)
}

/// Slice by an `h` in general position relative to the cell `face`.
pub fn slice_relative(
    vg: &ValidGeography,
    h: &AffineSubspace,
    face: usize,
) -> Result<Slice, GeographyError> {
    if !is_general_position_relative(h, vg, face) {
        return Err(GeographyError::NotGeneralPosition);
    }
    slice_unchecked(vg, h)
}

fn slice_unchecked(vg: &ValidGeography, h: &AffineSubspace) -> Result<Slice, GeographyError> {
    let cols = columns(h);
    let k = cols.len();
    let mut pieces = Vec::new();
    for (i, c) in vg.cells().iter().enumerate() {
        let p = pull(&c.cone, &cols)?;
        let y = relint_point(&p.upper);
        if y[0].is_positive() && c.cone.relint_contains(&apply(&cols, &y)) {
            pieces.push(SlicePiece {
                source: i,
                cone: p.upper,
                at_infinity: false,
                model: c.model.clone(),
                big: c.big,
            });
        }
        if p.lower.dim() > 0 && c.cone.relint_contains(&apply(&cols, &relint_point(&p.lower))) {
            pieces.push(SlicePiece {
                source: i,
                cone: p.lower,
                at_infinity: true,
                model: c.model.clone(),
                big: c.big,
            });
        }
    }
    if !pieces.iter().any(|p| p.cone.dim() == k) {
        return Err(GeographyError::EmptySlice);
    }

    let mut rays: Vec<QVector> = pieces
        .iter()
        .flat_map(|p| p.cone.rays().iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    // lines of the sliced support become pairs of opposite rays
    for p in &pieces {
        for l in p.cone.lineality_space() {
            for v in [l.clone(), l.neg()] {
                if !rays.contains(&v) {
                    rays.push(v);
                }
            }
        }
    }
    let index_of = |cone: &Cone| -> Vec<usize> {
        (0..rays.len()).filter(|&i| cone.contains(&rays[i])).collect()
    };
    let mut chambers = Vec::new();
    let mut faces = Vec::new();
    for p in &pieces {
        let Some(model) = p.model.clone() else { continue };
        if p.cone.dim() == k {
            chambers.push(ChamberRecord {
                rays: minimal_rays(&p.cone, &rays, index_of(&p.cone)),
                model,
            });
        } else if !p.big && !p.cone.is_zero() {
            faces.push(FaceRecord {
                rays: minimal_rays(&p.cone, &rays, index_of(&p.cone)),
                model,
                big: false,
            });
        }
    }
    let geography = Geography::new(
        k,
        rays,
        vg.geography().models.clone(),
        chambers,
        faces,
        None,
    )?;
    Ok(Slice { geography, pieces })
}

/// The indices among `idx` that are extreme rays (or line directions) of `cone`.
fn minimal_rays(cone: &Cone, rays: &[QVector], idx: Vec<usize>) -> Vec<usize> {
    idx.into_iter()
        .filter(|&i| {
            cone.rays().contains(&rays[i])
                || cone.lineality_space().iter().any(|l| *l == rays[i] || l.neg() == rays[i])
        })
        .collect()
}
