fn main() {
    std::process::exit(pvtopo_cli::run(std::env::args().collect()));
}
