fn main() {
    std::process::exit(ageclass::cli::run());
}
