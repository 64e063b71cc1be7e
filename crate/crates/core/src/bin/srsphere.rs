fn main() {
    std::process::exit(srsphere::cli::run(std::env::args_os()));
}
