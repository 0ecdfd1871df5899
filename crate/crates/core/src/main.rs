fn main() {
    std::process::exit(polymoments::cli::run(std::env::args_os()));
}
