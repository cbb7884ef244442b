fn main() {
    std::process::exit(tropline::cli::run(std::env::args_os()));
}
