fn main() {
    std::process::exit(pdthresh::cli::run(std::env::args_os()));
}
