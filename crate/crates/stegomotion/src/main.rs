fn main() {
    std::process::exit(stegomotion::cli::run());
}
