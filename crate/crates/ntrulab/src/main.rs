fn main() {
    std::process::exit(ntrulab::harness::cli::run(std::env::args_os()));
}
