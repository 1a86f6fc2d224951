fn main() {
    std::process::exit(tensormono::cli_runner::main_with_args(std::env::args_os()));
}
