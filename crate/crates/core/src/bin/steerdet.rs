fn main() {
    std::process::exit(steerdet::cli::run());
}
