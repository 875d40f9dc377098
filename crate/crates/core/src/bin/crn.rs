fn main() {
    std::process::exit(crnkit::cli::run(std::env::args_os()));
}
