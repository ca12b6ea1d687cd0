fn main() {
    std::process::exit(paritynest_cli::run(std::env::args_os()));
}
