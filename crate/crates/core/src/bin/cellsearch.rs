fn main() {
    std::process::exit(cellsearch::cli::run(std::env::args_os()));
}
