fn main() {
    std::process::exit(qptf_cli::dispatch(std::env::args_os()));
}
