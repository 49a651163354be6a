// Trapezohedra, their distinguished chain, and a merging quotient that
// sends it onto a single elementary path.
//
// ```text
// cargo run --example fixtures
// ```

use std::error::Error;

use omega3::chains::is_invariant;
use omega3::generators::{
    merging_quotient, random_digraph, tau, trapezohedron, RandomSpec, TrapezohedronIds,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for m in 2..=4 {
        let g = trapezohedron(m)?;
        let t = tau(m)?;
        println!(
            "T_{m}: {} vertices, {} arrows, tau has {} terms, boundary {} terms",
            g.vertex_count(),
            g.arrow_count(),
            t.len(),
            t.boundary().len()
        );
        assert!(is_invariant(&t, &g));
    }

    let g = trapezohedron(2)?;
    let ids = TrapezohedronIds { m: 2 };
    let blocks = vec![
        vec![TrapezohedronIds::A],
        vec![ids.i(0)],
        vec![ids.j(0), ids.i(1)],
        vec![ids.j(1), TrapezohedronIds::B],
    ];
    let (q, f) = merging_quotient(&g, &blocks)?;
    let image = f.induced_map(&tau(2)?);
    for (path, c) in image.iter() {
        println!("image of tau_2 in the quotient: {c:+} {}", path.display(&q));
    }
    assert_eq!(image.len(), 1);

    let r = random_digraph(RandomSpec::new(8, 0.25, 3))?;
    println!("random n=8 p=0.25 seed=3: {} arrows", r.arrow_count());
    assert_eq!(r, random_digraph(RandomSpec::new(8, 0.25, 3))?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
