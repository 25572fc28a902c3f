fn main() {
    std::process::exit(beta_ensemble::cli::main_with_args(std::env::args_os()));
}
