fn main() {
    std::process::exit(lhom::cli::run(std::env::args_os()));
}
