fn main() {
    std::process::exit(grouplaws::cli::run(std::env::args_os()));
}
