fn main() {
    std::process::exit(sta_core::cli::run(std::env::args_os()));
}
