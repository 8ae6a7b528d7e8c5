fn main() {
    std::process::exit(ndcalc::cli::run(std::env::args_os()));
}
