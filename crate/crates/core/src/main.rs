use std::io::{self, BufWriter};

fn main() {
    let mut stdout = BufWriter::new(io::stdout());
    let code = ferrers::cli::run(std::env::args_os(), &mut io::stdin(), &mut stdout, &mut io::stderr());
    drop(stdout);
    std::process::exit(code);
}
