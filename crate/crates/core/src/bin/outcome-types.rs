fn main() {
    std::process::exit(outcome_types::cli::main_with_args(std::env::args_os()));
}
