fn main() {
    std::process::exit(cohcorr::cli::run(std::env::args_os()));
}
