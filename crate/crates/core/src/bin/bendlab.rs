fn main() {
    std::process::exit(bendlab::lab::cli::cli_main(std::env::args_os()));
}
