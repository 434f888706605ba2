fn main() {
    std::process::exit(qbounce::cli::run(std::env::args_os()));
}
