use std::io::Write;

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let outcome = tritile::run(&argv);
    std::io::stdout().write_all(outcome.stdout.as_bytes()).expect("write to stdout");
    std::io::stderr().write_all(outcome.stderr.as_bytes()).expect("write to stderr");
    std::process::exit(outcome.code);
}
