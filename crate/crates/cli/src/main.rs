fn main() {
    std::process::exit(zeeman_cavity_cli::main_with_args(std::env::args_os()));
}
