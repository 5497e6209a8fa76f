fn main() {
    std::process::exit(lenspec::cli::main_with(std::env::args_os()));
}
