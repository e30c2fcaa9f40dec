fn main() {
    std::process::exit(coxcat::cli::run(std::env::args_os()));
}
