fn main() {
    std::process::exit(holodist::cli::main_with_args(std::env::args_os()));
}
