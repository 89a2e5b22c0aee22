fn main() {
    std::process::exit(mtf_limit::cli::run(std::env::args_os()));
}
