fn main() {
    std::process::exit(traction_split::cli::main_with_args(std::env::args_os()));
}
