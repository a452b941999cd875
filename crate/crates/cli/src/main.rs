fn main() {
    std::process::exit(markovrec_cli::main_with_args(std::env::args_os()));
}
