fn main() {
    std::process::exit(zipf_entropy::cli::run(std::env::args_os()));
}
