fn main() {
    std::process::exit(qumetrics::cli::run(std::env::args_os()));
}
