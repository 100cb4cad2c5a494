fn main() {
    std::process::exit(normsurf::cli::run(std::env::args_os()));
}
