fn main() {
    std::process::exit(heckex::cli::main_with(std::env::args_os()));
}
