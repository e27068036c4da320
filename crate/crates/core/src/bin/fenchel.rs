fn main() {
    std::process::exit(fenchel::cli::run());
}
