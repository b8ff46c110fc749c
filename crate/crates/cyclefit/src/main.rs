fn main() {
    std::process::exit(cyclefit::cli::run());
}
