mod common;

use common::{cell_graph, skeleton_graph};
use petgraph::algo::is_isomorphic;
use sarkisov::complexes::{connected_components, nerve, SimplicialComplex};
use sarkisov::corpus;

#[test]
fn double_nerve_of_corpus_boundaries() {
    let mut checked = 0;
    for e in corpus::entries().iter().filter(|e| !e.is_nerve()) {
        let vg = e.geography().unwrap().unwrap().into_valid().unwrap();
        let bc = vg.boundary_complex().complex;
        let (n1, _) = nerve(&bc).unwrap();
        let (n2, _) = nerve(&n1.as_polyhedral().unwrap()).unwrap();
        assert!(
            is_isomorphic(&cell_graph(&bc), &skeleton_graph(&n2)),
            "{}",
            e.name
        );
        checked += 1;
    }
    assert_eq!(checked, 10);
}

#[test]
fn nerve_of_a_cycle_is_a_cycle() {
    let c = SimplicialComplex::new(
        (0..6).map(|i| i.to_string()).collect(),
        (0..6).map(|i| vec![i, (i + 1) % 6]),
    );
    let (n, rec) = nerve(&c.as_polyhedral().unwrap()).unwrap();
    assert_eq!(n.vertices().len(), 6);
    assert_eq!(n.edges().len(), 6);
    assert_eq!(n.cycle_rank(), 1);
    for s in n.simplices_of_dim(1) {
        assert_eq!(rec.witnesses_of(&s).len(), 1);
    }
}

#[test]
fn nerve_of_a_path_drops_the_ends() {
    let c = SimplicialComplex::new(
        (0..4).map(|i| i.to_string()).collect(),
        vec![vec![0, 1], vec![1, 2], vec![2, 3]],
    );
    let (n1, _) = nerve(&c.as_polyhedral().unwrap()).unwrap();
    let (n2, _) = nerve(&n1.as_polyhedral().unwrap()).unwrap();
    assert_eq!(n1.vertices().len(), 3);
    assert_eq!(n2.vertices().len(), 2);
    assert_eq!(connected_components(&n2).len(), 1);
}

#[test]
fn filled_triangle_nerve() {
    let t = SimplicialComplex::new(vec!["a".into(), "b".into(), "c".into()], vec![vec![0, 1, 2]]);
    let (n, _) = nerve(&t.as_polyhedral().unwrap()).unwrap();
    assert_eq!(n.vertices().len(), 1);
    assert_eq!(n.edges().len(), 0);
}

#[test]
fn residual_of_a_ray_in_dp2() {
    let vg = corpus::geography("dp2").into_valid().unwrap();
    let bc = vg.boundary_complex();
    assert!(bc.connected);
    let a = bc.complex.find_label("[0]").unwrap();
    let res = bc.complex.residual(a).unwrap();
    // two boundary edges through the ray, closed under taking faces
    assert_eq!(res.facets().len(), 2);
    let dims: Vec<usize> = res.faces().iter().map(|f| f.cone.dim()).collect();
    assert_eq!(dims.iter().filter(|&&d| d == 0).count(), 1);
    assert_eq!(dims.iter().filter(|&&d| d == 1).count(), 3);
    assert_eq!(dims.len(), 6);
}
