fn main() {
    std::process::exit(cvhnn::harness::cli::cli_main(std::env::args_os()));
}
