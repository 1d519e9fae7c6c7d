fn main() {
    std::process::exit(shimura_lab::cli::run(std::env::args_os()));
}
