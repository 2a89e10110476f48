fn main() {
    std::process::exit(fermichain_cli::run(std::env::args_os()));
}
