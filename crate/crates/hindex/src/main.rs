fn main() {
    let code = hindex::cli::run(std::env::args_os());
    std::process::exit(code);
}
