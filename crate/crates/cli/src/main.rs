fn main() {
    std::process::exit(fkf_cli::main_with_args(std::env::args_os()));
}
