fn main() {
    std::process::exit(orbita::cli::run());
}
