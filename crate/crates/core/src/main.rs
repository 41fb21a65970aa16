fn main() {
    std::process::exit(roughflow::cli::run());
}
