//! Validates the bundled del Pezzo surface of degree 7 and lists its cells.

use sarkisov::corpus;

fn main() {
    let g = corpus::geography("dp2");
    let report = g.validate();
    for r in &report.rules {
        println!("rule {}: {}", r.rule, if r.passed { "ok" } else { "FAILED" });
    }
    let vg = g.into_valid().expect("dp2 is valid");
    for c in vg.cells() {
        println!(
            "{:<10} dim {}  {:<6} {}",
            c.label(),
            c.dim(),
            if c.big { "big" } else { "-" },
            c.model.as_deref().unwrap_or("")
        );
    }
}
