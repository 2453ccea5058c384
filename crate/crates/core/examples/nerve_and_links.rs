//! Decorated nerve of a geography and its typed Sarkisov links.

use sarkisov::corpus;
use sarkisov::program::{decorated_nerve, links};
use sarkisov::report::nerve_dot;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "dp2".into());
    let vg = corpus::geography(&name).into_valid().expect("valid corpus entry");
    let n = decorated_nerve(&vg).unwrap();
    print!("{}", nerve_dot(&n));
    let table = links(&vg);
    for e in &table.links {
        println!(
            "{} -> {}: type {} over {}",
            n.vertices[e.a].x_model, n.vertices[e.b].x_model, e.link_type, e.t_model
        );
    }
    for issue in &table.issues {
        println!("issue: {issue}");
    }
}
