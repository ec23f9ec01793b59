fn main() {
    std::process::exit(tricolor_cli::run_cli(std::env::args_os().collect()));
}
