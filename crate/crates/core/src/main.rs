fn main() {
    std::process::exit(parity_anneal::cli::run(std::env::args_os()));
}
