mod common;

use common::float_lint::{code_only, offences, scan};

#[test]
fn no_floating_point_outside_rendering() {
    let (files, bad) = scan();
    assert!(files > 10);
    assert!(bad.is_empty(), "floating point outside rendering:\n{}", bad.join("\n"));
}

#[test]
fn the_lint_sees_floats() {
    let probe = ["let x: f", "64 = 1", ".5;"].concat();
    assert_eq!(offences(&probe).len(), 2);
    assert!(offences("t.0.1 + x2 + 0x1e + 0usize + 3u8").is_empty());
    assert_eq!(offences("1e-3 + 2E4").len(), 2);
    assert!(offences(&code_only("// 1.5\nlet s = \"2.5\";")).is_empty());
}
