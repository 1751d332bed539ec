fn main() {
    std::process::exit(maltsev_lab::cli::run_cli(std::env::args_os()));
}
