// Explicit basis generators and how each was built.
//
// ```text
// cargo run --example basis
// ```

use std::error::Error;

use omega3::chains::is_invariant;
use omega3::io::parse_edge_list;
use omega3::omega3::{omega3_basis, Kind, Provenance};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // A square a → {i, c} → {j, c} → b with c wired in on both sides.
    let g = parse_edge_list(
        "a i\ni j\nj b\n\
         a c\nc b\ni c\nc j\n",
    )?;
    let basis = omega3_basis(&g);
    println!("dim Omega3 = {}", basis.total_dim());
    for element in basis.elements() {
        let terms: Vec<String> = element
            .chain
            .iter()
            .map(|(p, c)| format!("{}{}", if *c > 0 { "+" } else { "-" }, p.display(&g)))
            .collect();
        let how = match &element.provenance {
            Provenance::Cycle { edge, .. } => {
                format!("cycle through {}->{}", g.label(edge.0), g.label(edge.1))
            }
            Provenance::Terminal { edge } => {
                format!("terminal arrow {}->{}", g.label(edge.0), g.label(edge.1))
            }
            Provenance::Bridge { base, partner, .. } => format!(
                "bridge {}->{} to {}->{}",
                g.label(base.0 .0),
                g.label(base.0 .1),
                g.label(partner.0 .0),
                g.label(partner.0 .1)
            ),
        };
        println!("  {} {}  [{how}]", element.kind().as_str(), terms.join(" "));
        assert!(is_invariant(&element.chain, &g));
    }
    assert_eq!(basis.elements().filter(|e| e.kind() == Kind::B2).count(), 1);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
