fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(scatterflat_cli::run(&args));
}
