fn main() {
    std::process::exit(maxtile::cli::run_from(std::env::args_os()));
}
