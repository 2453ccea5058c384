#![allow(dead_code)]

pub mod float_lint;

use std::cmp::Ordering;

use rand::Rng;
use sarkisov::exact::{Cone, QVector};
use sarkisov::formats::{ChamberEntry, FaceEntry, GeographyFile, ModelEntry};
use petgraph::graph::UnGraph;
use sarkisov::complexes::{PolyhedralComplex, SimplicialComplex};
use sarkisov::geography::Geography;
use sarkisov::program::{decorated_nerve, DecoratedNerve};
use sarkisov::relations::{abelianize, component, edge_path_group};

pub fn v(xs: &[i64]) -> QVector {
    QVector::from_ints(xs)
}

fn half(x: i64, y: i64) -> u8 {
    if y > 0 || (y == 0 && x > 0) {
        0
    } else {
        1
    }
}

/// Counter-clockwise order of integer points around an integer centre.
pub fn ccw_order(points: &[(i64, i64)], centre: (i64, i64)) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        let (ax, ay) = (points[a].0 - centre.0, points[a].1 - centre.1);
        let (bx, by) = (points[b].0 - centre.0, points[b].1 - centre.1);
        half(ax, ay)
            .cmp(&half(bx, by))
            .then_with(|| 0.cmp(&(ax * by - ay * bx)))
            .then(Ordering::Equal)
    });
    idx
}

pub fn model(id: &str, rank: u32) -> ModelEntry {
    ModelEntry {
        id: id.into(),
        name: id.into(),
        picard_rank: rank,
        is_point: id == "pt",
    }
}

/// Output of [`random_planar`].
pub struct RandomGeography {
    pub file: GeographyFile,
    /// Every boundary edge of the base polygon is non-big.
    pub all_boundary_non_big: bool,
    pub boundary_edges: usize,
    pub non_big_edges: usize,
}

/// A rank 3 geography over a random lattice polygon: the cone over the
/// polygon is fanned from an interior ray, boundary edges are optionally
/// subdivided and a random set of them is made non-big.
pub fn random_planar<R: Rng>(rng: &mut R) -> RandomGeography {
    loop {
        let n = rng.gen_range(4..=9);
        let pts: Vec<QVector> = (0..n)
            .map(|_| v(&[rng.gen_range(-6..=6), rng.gen_range(-6..=6), 1]))
            .collect();
        let hull = Cone::from_generators(3, &pts).expect("three coordinates");
        if hull.dim() < 3 {
            continue;
        }
        // hull rays are primitive; with last coordinate 1 they are the points
        let corners: Vec<(i64, i64)> = hull
            .rays()
            .iter()
            .map(|r| {
                let c: Vec<i64> = r
                    .coords()
                    .iter()
                    .map(|x| i64::try_from(x.to_integer()).unwrap())
                    .collect();
                assert_eq!(c[2], 1);
                (c[0], c[1])
            })
            .collect();
        let k = corners.len() as i64;
        // scale by 2k so that centroid and edge midpoints are integral
        let scaled: Vec<(i64, i64)> = corners.iter().map(|&(x, y)| (2 * k * x, 2 * k * y)).collect();
        let centre = (
            scaled.iter().map(|p| p.0).sum::<i64>() / k,
            scaled.iter().map(|p| p.1).sum::<i64>() / k,
        );
        let order = ccw_order(&scaled, centre);
        let ring: Vec<(i64, i64)> = order.iter().map(|&i| scaled[i]).collect();

        let mut boundary: Vec<(i64, i64)> = Vec::new();
        for i in 0..ring.len() {
            let (a, b) = (ring[i], ring[(i + 1) % ring.len()]);
            boundary.push(a);
            if rng.gen_ratio(2, 5) {
                boundary.push(((a.0 + b.0) / 2, (a.1 + b.1) / 2));
            }
        }
        let m = boundary.len();
        let all = rng.gen_ratio(3, 10);
        let mut non_big: Vec<bool> = (0..m).map(|_| all || rng.gen_ratio(1, 2)).collect();
        let forced = rng.gen_range(0..m);
        non_big[forced] = true;

        let scale = 2 * k;
        let mut rays: Vec<Vec<String>> = boundary
            .iter()
            .map(|&(x, y)| vec![x.to_string(), y.to_string(), scale.to_string()])
            .collect();
        rays.push(vec![centre.0.to_string(), centre.1.to_string(), scale.to_string()]);
        let c = m;

        let mut models = vec![model("pt", 0)];
        let mut chambers = Vec::new();
        for i in 0..m {
            let id = format!("X{i}");
            models.push(model(&id, 3));
            chambers.push(ChamberEntry {
                rays: vec![c, i, (i + 1) % m],
                model: id,
            });
        }
        for (id, rank) in [("S0", 1), ("S1", 2), ("S2", 1)] {
            models.push(model(id, rank));
        }
        let edge_model: Vec<String> = (0..m).map(|_| format!("S{}", rng.gen_range(0..3))).collect();
        let mut faces = Vec::new();
        for i in 0..m {
            if non_big[i] {
                let mut r = vec![i, (i + 1) % m];
                r.sort_unstable();
                faces.push(FaceEntry {
                    rays: r,
                    model: edge_model[i].clone(),
                    big: false,
                });
            }
        }
        for i in 0..m {
            let before = (i + m - 1) % m;
            let (l, r) = (non_big[before], non_big[i]);
            if !(l || r) {
                continue;
            }
            // the ray's model is a common contraction of its non-big edges
            let shared = l && r && edge_model[before] == edge_model[i];
            let model = if shared && rng.gen_ratio(1, 2) {
                edge_model[i].clone()
            } else if !(l && r) && rng.gen_ratio(3, 10) {
                edge_model[if l { before } else { i }].clone()
            } else {
                "pt".into()
            };
            faces.push(FaceEntry {
                rays: vec![i],
                model,
                big: false,
            });
        }
        let file = GeographyFile {
            format_version: 1,
            provenance: None,
            ambient_dim: 3,
            rays,
            models,
            chambers,
            faces,
            apex_model: Some("pt".into()),
        };
        let non_big_edges = non_big.iter().filter(|&&b| b).count();
        return RandomGeography {
            file,
            all_boundary_non_big: non_big_edges == m,
            boundary_edges: m,
            non_big_edges,
        };
    }
}

pub fn geography(file: &GeographyFile) -> Geography {
    file.to_geography().expect("well formed")
}

/// First Betti number of the 1-skeleton, computed with petgraph.
pub fn graph_cycle_rank(n: &DecoratedNerve) -> usize {
    let edges: Vec<(u32, u32)> = n.nerve.edges().iter().map(|&(a, b)| (a as u32, b as u32)).collect();
    let mut g = UnGraph::<(), ()>::from_edges(&edges);
    while g.node_count() < n.vertices.len() {
        g.add_node(());
    }
    g.edge_count() + petgraph::algo::connected_components(&g) - g.node_count()
}

/// Checks that every component of the nerve has trivial or infinite cyclic
/// edge-path group, and that the loop appears exactly when the whole
/// boundary is non-big. Returns the total rank.
pub fn check_planar_group(g: &RandomGeography) -> Result<usize, String> {
    let vg = geography(&g.file)
        .into_valid()
        .map_err(|e| format!("invalid: {e}"))?;
    let dn = decorated_nerve(&vg).map_err(|e| e.to_string())?;
    let mut total = 0;
    let mut k = 0;
    while let Some(c) = component(&dn, k) {
        k += 1;
        let p = edge_path_group(&c).map_err(|e| e.to_string())?;
        if !p.relators.is_empty() {
            return Err(format!("component {k} has {} relators", p.relators.len()));
        }
        let ab = abelianize(&p);
        if !ab.torsion.is_empty() || ab.free_rank != p.generators.len() {
            return Err(format!("component {k}: abelianization {ab:?}"));
        }
        if p.generators.len() > 1 {
            return Err(format!("component {k} is free of rank {}", p.generators.len()));
        }
        total += p.generators.len();
    }
    if k == 0 {
        return Err("empty nerve".into());
    }
    if total != graph_cycle_rank(&dn) {
        return Err(format!("rank {total}, graph oracle {}", graph_cycle_rank(&dn)));
    }
    if (total == 1) != g.all_boundary_non_big {
        return Err(format!(
            "rank {total} with {} of {} boundary edges non-big",
            g.non_big_edges, g.boundary_edges
        ));
    }
    Ok(total)
}

/// Graph of a one dimensional cone complex: rays are vertices, 2-cones edges.
pub fn cell_graph(p: &PolyhedralComplex) -> UnGraph<(), ()> {
    let faces = p.faces();
    let rays: Vec<usize> = (0..faces.len()).filter(|&i| faces[i].cone.dim() == 1).collect();
    let mut g = UnGraph::new_undirected();
    let nodes: Vec<_> = rays.iter().map(|_| g.add_node(())).collect();
    for (j, f) in faces.iter().enumerate() {
        if f.cone.dim() != 2 {
            continue;
        }
        let ends: Vec<usize> = (0..rays.len()).filter(|&k| p.is_face_of(rays[k], j)).collect();
        assert_eq!(ends.len(), 2);
        g.add_edge(nodes[ends[0]], nodes[ends[1]], ());
    }
    g
}

pub fn skeleton_graph(s: &SimplicialComplex) -> UnGraph<(), ()> {
    let mut g = UnGraph::new_undirected();
    let nodes: Vec<_> = s.vertices().iter().map(|_| g.add_node(())).collect();
    for (a, b) in s.edges() {
        g.add_edge(nodes[a], nodes[b], ());
    }
    g
}

