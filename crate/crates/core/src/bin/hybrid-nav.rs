fn main() {
    std::process::exit(hybrid_nav::cli::run(std::env::args_os()));
}
