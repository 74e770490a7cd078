fn main() {
    std::process::exit(umetric_cli::run(std::env::args_os()));
}
