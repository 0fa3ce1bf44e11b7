fn main() {
    std::process::exit(nwidth::cli::run(std::env::args_os()));
}
