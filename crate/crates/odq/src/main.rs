fn main() {
    std::process::exit(odq::cli::main_with_args(std::env::args_os()));
}
