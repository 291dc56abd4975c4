fn main() {
    std::process::exit(riskgate::cli::run(std::env::args_os()));
}
