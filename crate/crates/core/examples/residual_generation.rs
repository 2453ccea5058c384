//! Residual loops and the H1 generation check.

use sarkisov::corpus;
use sarkisov::relations::{residual_generators, verify_generation, verify_generation_nerve};

fn main() {
    let vg = corpus::geography("dp2").into_valid().unwrap();
    for g in residual_generators(&vg).unwrap() {
        println!("dp2 residual at {}: {:?}", g.face, g.group);
    }
    let r = verify_generation(&vg).unwrap();
    println!("dp2: cover {} span {} h1 rank {}", r.cover_ok, r.span_ok, r.h1_free_rank);

    let dp3 = corpus::get("dp3").unwrap().nerve().unwrap().unwrap();
    let r = verify_generation_nerve(&dp3).unwrap();
    println!("dp3: cover {} span {} h1 rank {}", r.cover_ok, r.span_ok, r.h1_free_rank);
    println!("{}", r.caveat);
}
