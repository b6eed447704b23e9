fn main() {
    std::process::exit(hgtf::cli::main_with_args(std::env::args_os()));
}
