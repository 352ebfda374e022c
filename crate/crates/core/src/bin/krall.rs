fn main() {
    std::process::exit(krall_core::cli::main_with(std::env::args_os()));
}
