//! Exact cone arithmetic: double description, faces, intersections.

use sarkisov::exact::{format_rat, smith_normal_form, Cone, QVector};

fn show(v: &QVector) -> String {
    let c: Vec<String> = v.coords().iter().map(format_rat).collect();
    format!("({})", c.join(", "))
}

fn main() {
    let eff = Cone::from_generators(
        3,
        &[QVector::from_ints(&[0, 1, 0]), QVector::from_ints(&[0, 0, 1]), QVector::from_ints(&[1, -1, -1])],
    )
    .unwrap();
    println!("rays:");
    for r in eff.rays() {
        println!("  {}", show(r));
    }
    println!("inward normals:");
    for n in eff.normals() {
        println!("  {}", show(n));
    }
    let faces = eff.faces().unwrap();
    let by_dim: Vec<usize> = (0..=3).map(|d| faces.iter().filter(|f| f.dim() == d).count()).collect();
    println!("faces by dimension: {by_dim:?}");

    let nef = Cone::from_inequalities(
        3,
        &[QVector::from_ints(&[0, -1, 0]), QVector::from_ints(&[0, 0, -1]), QVector::from_ints(&[1, 1, 1])],
        &[],
    )
    .unwrap();
    let both = eff.intersect(&nef).unwrap();
    println!("nef inside eff: {}", both == nef);
    println!("(2,-1,-1) effective: {}", eff.contains(&QVector::from_ints(&[2, -1, -1])));

    let snf = smith_normal_form(&[vec![2.into(), 4.into()], vec![6.into(), 8.into()]], 2);
    println!("invariant factors of [[2,4],[6,8]]: {:?}", snf.invariant_factors);
}
