//! Slices dP2 by an affine plane and a line, and checks general position.

use sarkisov::corpus;
use sarkisov::exact::{AffineSubspace, QVector};
use sarkisov::formats::GeographyFile;
use sarkisov::geography::{general_position_report, slice};

fn main() {
    let vg = corpus::geography("dp2").into_valid().unwrap();
    let plane = AffineSubspace::new(
        QVector::from_ints(&[1, 0, 0]),
        vec![QVector::from_ints(&[0, 1, -1]), QVector::from_ints(&[1, 1, 1])],
    )
    .unwrap();
    let s = slice(&vg, &plane, 2).unwrap();
    println!("{} pieces", s.pieces.len());
    for p in &s.pieces {
        println!(
            "  from {:<8} dim {} {}",
            vg.cells()[p.source].label(),
            p.cone.dim(),
            if p.at_infinity { "at infinity" } else { "" }
        );
    }
    print!("{}", GeographyFile::from_geography(&s.geography, None).to_json());

    let bad = AffineSubspace::new(QVector::from_ints(&[3, -1, -2]), vec![QVector::from_ints(&[1, 2, -3])]).unwrap();
    println!("{:#?}", general_position_report(&bad, &vg, None).unwrap());
}
