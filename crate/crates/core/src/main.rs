fn main() {
    std::process::exit(designlint::cli::run(std::env::args_os()));
}
