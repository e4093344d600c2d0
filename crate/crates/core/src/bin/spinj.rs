fn main() {
    std::process::exit(spinj::cli::main_with_args(std::env::args()));
}
