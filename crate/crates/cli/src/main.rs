fn main() {
    std::process::exit(cse_cli::main_with_args(std::env::args_os()));
}
