fn main() {
    std::process::exit(loewner_welding::cli::main_with_args(std::env::args_os()));
}
