fn main() {
    std::process::exit(selfext_cli::run(std::env::args_os()));
}
