fn main() {
    let code = minkowski_cli::run(std::env::args_os());
    std::process::exit(code);
}
