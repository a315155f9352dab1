fn main() {
    std::process::exit(ucb_large::cli::run_cli(std::env::args_os()));
}
