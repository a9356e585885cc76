fn main() {
    std::process::exit(hspg::cli::run_cli(std::env::args_os()));
}
