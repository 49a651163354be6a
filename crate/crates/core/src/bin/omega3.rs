use std::io;

use omega3::cli::{run, Streams};

fn main() {
    let code = run(
        std::env::args_os(),
        Streams {
            stdin: &mut io::stdin().lock(),
            stdout: &mut io::stdout().lock(),
            stderr: &mut io::stderr().lock(),
        },
    );
    std::process::exit(code);
}
