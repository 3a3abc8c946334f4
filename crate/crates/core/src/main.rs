fn main() {
    std::process::exit(teleport_sim::cli_io::main_with_args(std::env::args_os()));
}
