// Cross-check the structural basis against brute-force linear algebra,
// over a prime field and over the rationals.
//
// ```text
// cargo run --example oracle_check -- 10 0.35 7
// ```

use std::error::Error;

use omega3::generators::{random_digraph, RandomSpec};
use omega3::omega3::BasisOptions;
use omega3::verify::verify_graph;
use omega3::{Oracle, PrimeField, RationalField};

fn check(spec: RandomSpec) -> Result<bool, Box<dyn Error>> {
    let g = random_digraph(spec)?;
    let gf = verify_graph(
        &g,
        &Oracle::new(PrimeField::default()),
        &BasisOptions::default(),
    )?;
    let q = verify_graph(&g, &Oracle::new(RationalField), &BasisOptions::default())?;
    print!("{}", gf.render(&g));
    print!("{}", q.render(&g));
    Ok(gf.passed() && q.passed())
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for seed in 0..3 {
        assert!(check(RandomSpec::new(9, 0.35, seed))?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.len() == 3 {
        let spec = RandomSpec::new(
            args[0].parse().unwrap(),
            args[1].parse().unwrap(),
            args[2].parse().unwrap(),
        );
        if !check(spec).unwrap() {
            std::process::exit(1);
        }
    } else {
        run_example().unwrap();
    }
}
