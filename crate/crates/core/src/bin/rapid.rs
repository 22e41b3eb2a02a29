fn main() {
    std::process::exit(rapid_core::cli::run(std::env::args_os()));
}
