fn main() {
    let code = impaired_bandits::cli_io::run(std::env::args_os());
    std::process::exit(code);
}
