fn main() {
    std::process::exit(handshake_cli::main_with(std::env::args_os()));
}
