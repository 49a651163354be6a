// Structural basis timings on seeded random digraphs, as CSV, with the
// log-log slope between consecutive sizes on stderr.
//
// ```text
// cargo run --release --example bench_scaling -- 40,80,160 0.3
// ```

use std::error::Error;
use std::time::Instant;

use omega3::generators::{random_digraph, RandomSpec};
use omega3::omega3::materialize_basis;

fn bench(sizes: &[usize], p: f64, seed: u64) -> Result<Vec<f64>, Box<dyn Error>> {
    println!("n,p,ms,dim,terms");
    let mut times: Vec<f64> = Vec::new();
    for (k, &n) in sizes.iter().enumerate() {
        let g = random_digraph(RandomSpec::new(n, p, seed))?;
        let start = Instant::now();
        let stats = materialize_basis(&g, 0)?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        println!("{n},{p},{ms:.1},{},{}", stats.dim, stats.terms);
        if k > 0 {
            let slope = (ms / times[k - 1]).ln() / (n as f64 / sizes[k - 1] as f64).ln();
            eprintln!("slope {}->{n}: {slope:.2}", sizes[k - 1]);
        }
        times.push(ms);
    }
    Ok(times)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    assert_eq!(bench(&[10, 20, 30], 0.2, 1)?.len(), 3);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    let mut args = std::env::args().skip(1);
    let sizes: Vec<usize> = args
        .next()
        .unwrap_or_else(|| "20,40,80".into())
        .split(',')
        .map(|s| s.parse().expect("vertex count"))
        .collect();
    let p: f64 = args.next().map_or(0.1, |s| s.parse().expect("probability"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));
    bench(&sizes, p, seed).unwrap();
}
