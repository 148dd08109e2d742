fn main() {
    std::process::exit(fracsys_cli::run(std::env::args_os()));
}
