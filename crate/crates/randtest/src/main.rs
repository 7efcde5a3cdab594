fn main() {
    std::process::exit(randtest::cli::run(std::env::args_os()));
}
