//! Writes an SVG cross-section of each bundled rank 3 geography.

use sarkisov::corpus;
use sarkisov::report::geography_svg;

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| ".".into());
    for e in corpus::entries() {
        let Some(g) = e.geography() else { continue };
        let svg = geography_svg(&g.unwrap().into_valid().unwrap()).unwrap();
        let path = std::path::Path::new(&dir).join(format!("{}.svg", e.name));
        std::fs::write(&path, svg).unwrap();
        println!("wrote {}", path.display());
    }
}
