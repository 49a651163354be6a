// `dim Ω_3` from the closed form, with the per-pair breakdown.
//
// ```text
// cargo run --example dimension
// ```

use std::error::Error;

use omega3::generators::trapezohedron;
use omega3::io::parse_edge_list;
use omega3::omega3::{analyze_pair, omega3_pair_dims, pair_dimension, BasisOptions};
use omega3::Digraph;

fn report(name: &str, g: &Digraph) -> usize {
    let dims = omega3_pair_dims(g, &BasisOptions::default()).expect("no limits");
    let total: usize = dims.values().sum();
    println!(
        "{name}: |V| = {}, |E| = {}, dim Omega3 = {total}",
        g.vertex_count(),
        g.arrow_count()
    );
    for &(a, b) in dims.keys() {
        let pa = analyze_pair(g, a, b).expect("valid pair");
        println!(
            "  ({}, {}): cycles {} + terminal {} + bridges {} = {}",
            g.label(a),
            g.label(b),
            pa.cycle_rank(),
            pa.terminal_edges.len(),
            pa.bridge_count(),
            pair_dimension(&pa)
        );
    }
    total
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    assert_eq!(report("T_4", &trapezohedron(4)?), 1);
    assert_eq!(report("2-cycle", &parse_edge_list("a b\nb a\n")?), 2);
    let square_with_diagonal = parse_edge_list("a i\ni j\nj b\ni b\na j\n")?;
    assert_eq!(report("square with diagonals", &square_with_diagonal), 1);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
