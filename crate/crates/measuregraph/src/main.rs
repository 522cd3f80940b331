fn main() {
    std::process::exit(measuregraph::cli::run(std::env::args_os()));
}
