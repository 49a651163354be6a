macro_rules! example {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(dimension, "dimension.rs");
example!(basis, "basis.rs");
example!(oracle_check, "oracle_check.rs");
example!(fixtures, "fixtures.rs");
example!(io_roundtrip, "io_roundtrip.rs");
example!(bench_scaling, "bench_scaling.rs");

#[test]
fn dimension_example_runs() {
    dimension::run_example().expect("dimension example");
}

#[test]
fn basis_example_runs() {
    basis::run_example().expect("basis example");
}

#[test]
fn oracle_check_example_runs() {
    oracle_check::run_example().expect("oracle example");
}

#[test]
fn fixtures_example_runs() {
    fixtures::run_example().expect("fixtures example");
}

#[test]
fn io_roundtrip_example_runs() {
    io_roundtrip::run_example().expect("io example");
}

#[test]
fn bench_scaling_example_runs() {
    bench_scaling::run_example().expect("bench example");
}
