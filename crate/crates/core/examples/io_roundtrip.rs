// Edge list in, JSON basis document and DOT out.
//
// ```text
// cargo run --example io_roundtrip
// ```

use std::error::Error;

use omega3::io::{export_dot, parse_edge_list, read_basis, write_basis, BasisDocument};
use omega3::omega3_basis;

const INPUT: &str = "\
# trapezohedron of order 2
a i0
a i1
i0 j0
i1 j0
i1 j1
i0 j1
j0 b
j1 b
lonely
";

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let g = parse_edge_list(INPUT)?;
    let doc = BasisDocument::from_basis(&g, &omega3_basis(&g), "gf:32749");
    let bytes = write_basis(&doc);
    println!("{}", String::from_utf8(bytes.clone())?);
    assert_eq!(read_basis(&bytes)?, doc);
    print!("{}", export_dot(&g));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
