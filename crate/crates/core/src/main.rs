fn main() {
    std::process::exit(infinigon::cli::main_with_args(std::env::args_os()));
}
