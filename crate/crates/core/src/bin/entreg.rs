fn main() {
    std::process::exit(entreg::cli::run_cli(std::env::args_os()));
}
