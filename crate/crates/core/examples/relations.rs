//! Elementary relations of every bundled geography, with their shape.

use sarkisov::corpus;
use sarkisov::program::decorated_nerve;
use sarkisov::relations::{elementary_relations, DEFAULT_MAX_CYCLE_LEN};

fn main() {
    for e in corpus::entries() {
        let n = match e.geography() {
            Some(g) => decorated_nerve(&g.unwrap().into_valid().unwrap()).unwrap(),
            None => e.nerve().unwrap().unwrap(),
        };
        let rel = elementary_relations(&n, DEFAULT_MAX_CYCLE_LEN).unwrap();
        println!("{}: {} elementary relation(s)", e.name, rel.len());
        for r in rel.iter().take(3) {
            let types: Vec<String> = r.types.iter().map(|t| t.to_string()).collect();
            println!("  {:<9} {}  ranks {:?}", r.classification.name(), types.join(" "), r.ranks);
        }
    }
}
