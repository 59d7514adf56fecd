fn main() {
    std::process::exit(zklat::cli::run(std::env::args_os()));
}
