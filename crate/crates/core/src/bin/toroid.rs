fn main() {
    std::process::exit(toroid::cli::main_with_args(std::env::args_os()));
}
