fn main() {
    std::process::exit(bk::cli::run(std::env::args_os()));
}
