fn main() {
    std::process::exit(backbone::cli::run(std::env::args_os()));
}
