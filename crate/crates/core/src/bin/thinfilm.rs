fn main() {
    std::process::exit(thinfilm::cli::run(std::env::args_os()));
}
