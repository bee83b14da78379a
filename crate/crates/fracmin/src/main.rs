fn main() {
    std::process::exit(fracmin::cli::run());
}
