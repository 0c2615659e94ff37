fn main() {
    std::process::exit(kperp::cli::run(std::env::args_os()));
}
