fn main() {
    std::process::exit(seriesode::cli::run(std::env::args_os()));
}
