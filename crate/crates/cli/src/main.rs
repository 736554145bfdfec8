fn main() {
    std::process::exit(hs_cli::main_with(std::env::args_os()));
}
