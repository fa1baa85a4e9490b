fn main() {
    std::process::exit(selfembed::cli::run(std::env::args_os()));
}
