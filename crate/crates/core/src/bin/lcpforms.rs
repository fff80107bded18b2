fn main() {
    std::process::exit(lcpforms::cli::main_with(std::env::args_os()));
}
