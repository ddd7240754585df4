fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(dmbst_cli::run(&argv));
}
