fn main() {
    std::process::exit(mactc::cli::run(std::env::args_os()));
}
