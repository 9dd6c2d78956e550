fn main() {
    std::process::exit(seedprice::cli::run(std::env::args_os()));
}
