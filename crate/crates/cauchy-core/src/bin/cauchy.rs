fn main() {
    std::process::exit(cauchy_core::cli::main_from_args(std::env::args_os()));
}
