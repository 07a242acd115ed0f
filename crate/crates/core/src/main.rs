fn main() {
    std::process::exit(qswitch::cli::main_with_args(std::env::args_os()));
}
