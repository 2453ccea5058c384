mod common;

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sarkisov::corpus;
use sarkisov::formats::{EdgeEntry, InputFile, NerveFile};
use sarkisov::program::{decorated_nerve, DecoratedNerve, LinkType};
use sarkisov::relations::{
    abelianize, edge_path_group, elementary_relations, residual_generators, verify_generation,
    verify_generation_nerve, Classification, EdgePath, ResidualGroup, DEFAULT_MAX_CYCLE_LEN,
};

fn dp3_file() -> NerveFile {
    match corpus::get("dp3").unwrap().parse() {
        InputFile::Nerve(f) => f,
        InputFile::Geography(_) => unreachable!(),
    }
}

fn nerve_of(name: &str) -> DecoratedNerve {
    let vg = corpus::geography(name).into_valid().unwrap();
    decorated_nerve(&vg).unwrap()
}

#[test]
fn dp3_group_is_free_of_rank_eight() {
    let n = dp3_file().to_nerve().unwrap();
    assert_eq!(n.vertices.len(), 14);
    assert_eq!(n.nerve.edges().len(), 21);
    let p = edge_path_group(&n).unwrap();
    assert!(p.relators.is_empty());
    assert_eq!(p.generators.len(), common::graph_cycle_rank(&n));
    let ab = abelianize(&p);
    assert_eq!(ab.free_rank, 8);
    assert!(ab.torsion.is_empty());
}

/// The vertex sets of the nine loops as they are listed in the example.
const LISTED: [[&str; 5]; 6] = [
    ["1", "2", "5", "6", "3"],
    ["1", "3", "9", "10", "4"],
    ["1", "2", "7", "8", "4"],
    ["12", "9", "10", "13", "14"],
    ["11", "5", "6", "12", "14"],
    ["11", "7", "8", "13", "14"],
];
const LISTED_FOUR: [[&str; 4]; 3] = [["2", "5", "7", "11"], ["3", "9", "12", "6"], ["4", "8", "10", "13"]];

fn induces_cycle(n: &DecoratedNerve, ids: &[&str]) -> bool {
    let vs: BTreeSet<usize> = ids.iter().map(|id| n.vertex_index(id).unwrap()).collect();
    let inner: Vec<(usize, usize)> = n
        .nerve
        .edges()
        .into_iter()
        .filter(|(a, b)| vs.contains(a) && vs.contains(b))
        .collect();
    let degree_two = vs
        .iter()
        .all(|v| inner.iter().filter(|(a, b)| a == v || b == v).count() == 2);
    // a 2-regular graph with as many edges as vertices is one cycle iff connected
    let start = *vs.iter().next().unwrap();
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &(a, b) in &inner {
            let w = if a == v { b } else if b == v { a } else { continue };
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    degree_two && seen.len() == vs.len()
}

#[test]
fn listed_vertex_sets_induce_cycles() {
    let n = dp3_file().to_nerve().unwrap();
    for set in LISTED.iter().map(|s| &s[..]).chain(LISTED_FOUR.iter().map(|s| &s[..])) {
        assert!(induces_cycle(&n, set), "{set:?}");
    }
}

#[test]
fn dp3_loops_generate() {
    let n = dp3_file().to_nerve().unwrap();
    assert_eq!(n.residual_loops.len(), 9);
    for l in &n.residual_loops {
        EdgePath::closed(&l.cycle).check(&n.nerve).unwrap();
    }
    let r = verify_generation_nerve(&n).unwrap();
    assert!(r.passed, "{r:?}");
    assert_eq!(r.h1_free_rank, 8);
    assert!(r.cover_ok && r.span_ok);
}

#[test]
fn orphaned_edge_breaks_the_cover() {
    let mut f = dp3_file();
    f.edges.push(EdgeEntry {
        a: "1".into(),
        b: "14".into(),
        t_model: "pt".into(),
        link_type: None,
    });
    let n = f.to_nerve().unwrap();
    let r = verify_generation_nerve(&n).unwrap();
    assert!(!r.passed);
    assert!(!r.cover_ok);
    assert_eq!(r.uncovered_edges.len(), 1);
    assert_eq!(r.h1_free_rank, 9);
    assert!(!r.span_ok);
    assert!(!r.unspanned.is_empty());
}

#[test]
fn loops_are_redundant_by_one() {
    // nine loops span a rank eight lattice, so any single one may go
    for drop in ["S_1", "T_2", "P1_a"] {
        let mut f = dp3_file();
        f.residual_loops.as_mut().unwrap().retain(|l| l.face != drop);
        let r = verify_generation_nerve(&f.to_nerve().unwrap()).unwrap();
        assert!(r.passed, "without {drop}");
    }
    let mut f = dp3_file();
    f.residual_loops
        .as_mut()
        .unwrap()
        .retain(|l| l.face != "S_1" && l.face != "P1_a");
    let r = verify_generation_nerve(&f.to_nerve().unwrap()).unwrap();
    assert!(!r.passed);
    assert!(!r.span_ok);
}

#[test]
fn dp2_has_a_single_type_a_relation() {
    let n = nerve_of("dp2");
    let rel = elementary_relations(&n, DEFAULT_MAX_CYCLE_LEN).unwrap();
    assert_eq!(rel.len(), 1);
    assert!(matches!(rel[0].classification, Classification::TypeA { .. }), "{rel:?}");
    use LinkType::*;
    let mut along = rel[0].types.clone();
    along.sort();
    assert_eq!(along, vec![I, II, II, III, IV]);
    assert_eq!(n.edges.len(), 5);
}

#[test]
fn fano_relations() {
    for (name, want) in [
        ("fig3_left", "TypeA"),
        ("fig3_right", "TypeA"),
        ("fig4_left", "TypeA"),
        ("fig4_mid", "TypeA"),
        ("fig4_bottom", "TypeB"),
        ("fig5_tl", "TypeA"),
        ("fig5_tr", "TypeA"),
        ("fig5_bl", "TypeA"),
        ("fig5_br", "TypeA"),
    ] {
        let rel = elementary_relations(&nerve_of(name), DEFAULT_MAX_CYCLE_LEN).unwrap();
        assert_eq!(rel.len(), 1, "{name}");
        assert_eq!(rel[0].classification.name(), want, "{name}");
    }
}

#[test]
fn corpus_generation_passes() {
    for e in corpus::entries() {
        let r = if e.is_nerve() {
            verify_generation_nerve(&e.nerve().unwrap().unwrap())
        } else {
            verify_generation(&e.geography().unwrap().unwrap().into_valid().unwrap())
        }
        .unwrap();
        assert!(r.passed, "{}: {r:?}", e.name);
    }
}

#[test]
fn dp2_apex_carries_the_loop() {
    let vg = corpus::geography("dp2").into_valid().unwrap();
    let gens = residual_generators(&vg).unwrap();
    let loops: Vec<_> = gens
        .iter()
        .filter(|g| matches!(g.group, ResidualGroup::Loop { .. }))
        .collect();
    assert_eq!(loops.len(), 1);
    assert_eq!(loops[0].face, "[]");
}

#[test]
fn random_planar_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = [0usize; 2];
    for _ in 0..60 {
        let g = common::random_planar(&mut rng);
        let rank = common::check_planar_group(&g).unwrap_or_else(|e| panic!("{e}\n{}", g.file.to_json()));
        seen[rank] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}
